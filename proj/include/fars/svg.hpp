#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "fars/simulation.hpp"

namespace fars {

// One panel per distinct (loads_per_factor, sl, r) group: mean reliability
// (averaged over factors) against the main loading l, one line per predictor,
// with a dashed reference line at 0.70. Returns the written file paths.
std::vector<std::filesystem::path> write_study_svgs(
    const std::vector<ConditionResult>& results,
    const std::filesystem::path& out_dir);

// Rendering helper exposed for tests.
std::string render_panel_svg(const std::string& title,
                             const std::vector<double>& x,
                             const std::vector<std::vector<double>>& series,
                             const std::vector<std::string>& labels);

} // namespace fars
