#include "fars/svg.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <sstream>
#include <tuple>

#include "fars/error.hpp"
#include "fars/io.hpp"

namespace fars {

namespace {

constexpr double kWidth = 520.0;
constexpr double kHeight = 360.0;
constexpr double kMarginLeft = 56.0;
constexpr double kMarginRight = 16.0;
constexpr double kMarginTop = 36.0;
constexpr double kMarginBottom = 44.0;

const char* kSeriesColors[] = {"#1b6ca8", "#c0392b", "#27ae60"};

std::string fmt2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

double sx(double x, double x0, double x1) {
    const double span = (x1 > x0) ? (x1 - x0) : 1.0;
    return kMarginLeft + (x - x0) / span * (kWidth - kMarginLeft - kMarginRight);
}

double sy(double y) {
    // y axis fixed to [0, 1]: reliabilities live there by definition.
    return kMarginTop + (1.0 - y) * (kHeight - kMarginTop - kMarginBottom);
}

} // namespace

std::string render_panel_svg(const std::string& title,
                             const std::vector<double>& x,
                             const std::vector<std::vector<double>>& series,
                             const std::vector<std::string>& labels) {
    if (series.size() != labels.size())
        raise(ErrorCode::DimensionMismatch, "one label per series required");
    for (const auto& s : series)
        if (s.size() != x.size())
            raise(ErrorCode::DimensionMismatch, "series length must match x grid");
    if (x.empty()) raise(ErrorCode::DimensionMismatch, "empty x grid");

    const double x0 = *std::min_element(x.begin(), x.end());
    const double x1 = *std::max_element(x.begin(), x.end());

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << (int)kWidth
        << "\" height=\"" << (int)kHeight << "\" viewBox=\"0 0 " << (int)kWidth
        << " " << (int)kHeight << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << kWidth / 2 << "\" y=\"20\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"14\">" << title << "</text>\n";

    // Axes.
    out << "<line x1=\"" << kMarginLeft << "\" y1=\"" << sy(0.0) << "\" x2=\""
        << kWidth - kMarginRight << "\" y2=\"" << sy(0.0)
        << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    out << "<line x1=\"" << kMarginLeft << "\" y1=\"" << sy(0.0) << "\" x2=\""
        << kMarginLeft << "\" y2=\"" << sy(1.0)
        << "\" stroke=\"black\" stroke-width=\"1\"/>\n";

    // y ticks every 0.2.
    for (int i = 0; i <= 5; ++i) {
        const double v = 0.2 * i;
        out << "<line x1=\"" << kMarginLeft - 4 << "\" y1=\"" << sy(v)
            << "\" x2=\"" << kMarginLeft << "\" y2=\"" << sy(v)
            << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << kMarginLeft - 8 << "\" y=\"" << sy(v) + 4
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
            << "font-size=\"11\">" << fmt2(v) << "</text>\n";
    }

    // x ticks at the data points.
    for (double xv : x) {
        out << "<line x1=\"" << sx(xv, x0, x1) << "\" y1=\"" << sy(0.0)
            << "\" x2=\"" << sx(xv, x0, x1) << "\" y2=\"" << sy(0.0) + 4
            << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << sx(xv, x0, x1) << "\" y=\"" << sy(0.0) + 18
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
            << "font-size=\"11\">" << fmt2(xv) << "</text>\n";
    }
    out << "<text x=\"" << (kMarginLeft + kWidth - kMarginRight) / 2 << "\" y=\""
        << kHeight - 8 << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        << "font-size=\"12\">main loading</text>\n";

    // Conventional acceptability threshold.
    out << "<line x1=\"" << kMarginLeft << "\" y1=\"" << sy(0.70) << "\" x2=\""
        << kWidth - kMarginRight << "\" y2=\"" << sy(0.70)
        << "\" stroke=\"#777777\" stroke-width=\"1\" stroke-dasharray=\"6,4\"/>\n";
    out << "<text x=\"" << kWidth - kMarginRight - 4 << "\" y=\"" << sy(0.70) - 5
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\" "
        << "fill=\"#777777\">0.70</text>\n";

    for (std::size_t s = 0; s < series.size(); ++s) {
        const char* color = kSeriesColors[s % 3];
        out << "<polyline fill=\"none\" stroke=\"" << color
            << "\" stroke-width=\"2\" points=\"";
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (i) out << ' ';
            out << sx(x[i], x0, x1) << ',' << sy(std::clamp(series[s][i], 0.0, 1.0));
        }
        out << "\"/>\n";
        for (std::size_t i = 0; i < x.size(); ++i)
            out << "<circle cx=\"" << sx(x[i], x0, x1) << "\" cy=\""
                << sy(std::clamp(series[s][i], 0.0, 1.0)) << "\" r=\"3\" fill=\""
                << color << "\"/>\n";

        const double lx = kMarginLeft + 12;
        const double ly = kMarginTop + 14.0 * (double)s + 6.0;
        out << "<line x1=\"" << lx << "\" y1=\"" << ly << "\" x2=\"" << lx + 22
            << "\" y2=\"" << ly << "\" stroke=\"" << color
            << "\" stroke-width=\"2\"/>\n";
        out << "<text x=\"" << lx + 28 << "\" y=\"" << ly + 4
            << "\" font-family=\"sans-serif\" font-size=\"11\">" << labels[s]
            << "</text>\n";
    }

    out << "</svg>\n";
    return out.str();
}

std::vector<std::filesystem::path> write_study_svgs(
    const std::vector<ConditionResult>& results,
    const std::filesystem::path& out_dir) {
    // Group cells by (loads_per_factor, sl, r); within a group the x axis is l.
    using Key = std::tuple<int, int, int>;
    std::map<Key, std::vector<const ConditionResult*>> groups;
    for (const auto& res : results) {
        const Key key{res.condition.loads_per_factor,
                      (int)std::lround(res.condition.sl * 100.0),
                      (int)std::lround(res.condition.r * 100.0)};
        groups[key].push_back(&res);
    }

    std::vector<std::filesystem::path> written;
    for (auto& [key, cells] : groups) {
        std::sort(cells.begin(), cells.end(),
                  [](const ConditionResult* a, const ConditionResult* b) {
                      return a->condition.l < b->condition.l;
                  });

        std::vector<double> x;
        std::vector<std::vector<double>> series(3);
        for (const ConditionResult* cell : cells) {
            x.push_back(cell->condition.l);
            // Average the per-factor means for the three predictors.
            for (int s = 0; s < 3; ++s)
                series[(std::size_t)s].push_back(cell->mean.row(s).mean());
        }

        const auto [lpf, sl100, r100] = key;
        char title[96];
        std::snprintf(title, sizeof(title), "p/q=%d, sl=%.2f, r=%.2f", lpf,
                      sl100 / 100.0, r100 / 100.0);
        char name[64];
        std::snprintf(name, sizeof(name), "panel_pq%d_sl%02d_r%02d.svg", lpf,
                      sl100, r100);

        const std::string svg = render_panel_svg(
            title, x, series, {"regression", "bartlett", "mcdonald"});
        const std::filesystem::path path = out_dir / name;
        atomic_write(path, svg);
        written.push_back(path);
    }
    return written;
}

} // namespace fars
