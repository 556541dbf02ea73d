#include "fars/io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "fars/error.hpp"

namespace fars {

namespace {

using nlohmann::json;

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

Matrix matrix_from_json(const json& j, const std::string& key) {
  if (!j.is_array() || j.empty()) {
    raise(ErrorCode::ParseError, "field '" + key + "' must be a non-empty array of rows");
  }
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  if (cols == 0) {
    raise(ErrorCode::ParseError, "field '" + key + "' rows must be non-empty arrays");
  }
  Matrix m(Index(j.size()), Index(cols));
  for (std::size_t r = 0; r < j.size(); ++r) {
    if (!j[r].is_array() || j[r].size() != cols) {
      raise(ErrorCode::ParseError,
            "field '" + key + "' row " + std::to_string(r) + " has ragged length");
    }
    for (std::size_t c = 0; c < cols; ++c) {
      if (!j[r][c].is_number()) {
        raise(ErrorCode::ParseError,
              "field '" + key + "' entry (" + std::to_string(r) + "," +
                  std::to_string(c) + ") is not a number");
      }
      m(Index(r), Index(c)) = j[r][c].get<double>();
    }
  }
  return m;
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) raise(ErrorCode::ParseError, "cannot open " + path.string());
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      double v = 0.0;
      const char* begin = cell.data();
      const char* end = begin + cell.size();
      while (begin < end && (*begin == ' ' || *begin == '\t')) ++begin;
      const auto [ptr, ec] = std::from_chars(begin, end, v);
      if (ec != std::errc() ) {
        raise(ErrorCode::ParseError,
              path.string() + ": cannot parse '" + cell + "' as a number");
      }
      (void)ptr;
      row.push_back(v);
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      raise(ErrorCode::ParseError, path.string() + ": ragged row lengths");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) raise(ErrorCode::ParseError, path.string() + ": empty file");
  Matrix m(Index(rows.size()), Index(rows.front().size()));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < rows[r].size(); ++c)
      m(Index(r), Index(c)) = rows[r][c];
  return m;
}

json parse_json(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) raise(ErrorCode::ParseError, "malformed JSON");
  return j;
}

std::string fmt_fixed3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%8.3f", v);
  return buf;
}

} // namespace

std::string fmt_double(double v) {
  char buf[40];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) return "nan";
  return std::string(buf, ptr);
}

FactorModel model_from_json(const std::string& text) {
  const json j = parse_json(text);
  if (!j.is_object() || !j.contains("lambda") || !j.contains("phi")) {
    raise(ErrorCode::ParseError, "model JSON needs fields 'lambda' and 'phi'");
  }
  FactorModel model;
  model.lambda = matrix_from_json(j["lambda"], "lambda");
  model.phi = matrix_from_json(j["phi"], "phi");
  if (j.contains("psi2")) {
    const json& p = j["psi2"];
    if (!p.is_array() || p.size() != std::size_t(model.p())) {
      raise(ErrorCode::ParseError, "field 'psi2' must have one entry per item");
    }
    model.psi2.resize(model.p());
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (!p[i].is_number()) {
        raise(ErrorCode::ParseError, "field 'psi2' entry " + std::to_string(i) +
                                         " is not a number");
      }
      model.psi2[Index(i)] = p[i].get<double>();
    }
  } else {
    model.psi2 = Vector::Ones(model.p()) - communalities(model);
  }
  return model;
}

FactorModel load_model_file(const std::filesystem::path& path) {
  if (path.extension() == ".json") {
    std::ifstream in(path);
    if (!in) raise(ErrorCode::ParseError, "cannot open " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return model_from_json(ss.str());
  }
  const std::string name = path.filename().string();
  const auto pos = name.find("lambda");
  if (path.extension() == ".csv" && pos != std::string::npos) {
    std::string phi_name = name;
    phi_name.replace(pos, 6, "phi");
    FactorModel model;
    model.lambda = matrix_from_csv(path);
    model.phi = matrix_from_csv(path.parent_path() / phi_name);
    model.psi2 = Vector::Ones(model.p()) - communalities(model);
    return model;
  }
  raise(ErrorCode::ParseError,
        path.string() + ": expected a .json model or a *lambda*.csv of a CSV pair");
}

std::string model_to_json(const FactorModel& model) {
  json j;
  j["lambda"] = matrix_to_json(model.lambda);
  j["phi"] = matrix_to_json(model.phi);
  j["psi2"] = std::vector<double>(model.psi2.data(),
                                  model.psi2.data() + model.psi2.size());
  return j.dump(2) + "\n";
}

std::string report_to_csv(const ReliabilityReport& report) {
  std::string out = "factor,r_tr,r_tb,r_tm,determinacy,determinacy_sq\n";
  for (Index k = 0; k < report.regression.size(); ++k) {
    const double det = clamp01(report.determinacy[k]);
    out += std::to_string(k + 1) + ',' + fmt_double(clamp01(report.regression[k])) +
           ',' + fmt_double(clamp01(report.bartlett[k])) + ',' +
           fmt_double(clamp01(report.mcdonald[k])) + ',' + fmt_double(det) + ',' +
           fmt_double(clamp01(det * det)) + '\n';
  }
  return out;
}

std::string report_to_json(const ReliabilityReport& report) {
  json factors = json::array();
  for (Index k = 0; k < report.regression.size(); ++k) {
    const double det = clamp01(report.determinacy[k]);
    factors.push_back({{"factor", k + 1},
                       {"r_tr", clamp01(report.regression[k])},
                       {"r_tb", clamp01(report.bartlett[k])},
                       {"r_tm", clamp01(report.mcdonald[k])},
                       {"determinacy", det},
                       {"determinacy_sq", clamp01(det * det)}});
  }
  const TheoremFlags& f = report.flags;
  json j;
  j["factors"] = std::move(factors);
  j["theorem_flags"] = {
      {"premise_orthogonal", f.premise_orthogonal},
      {"orthogonal_slack", f.orthogonal_slack},
      {"premise_diagonal_information", f.premise_diagonal_information},
      {"information_offdiag", f.information_offdiag},
      {"gap_regression_bartlett", f.gap_regression_bartlett},
      {"gap_regression_mcdonald", f.gap_regression_mcdonald},
      {"min_regression_minus_determinacy_sq",
       f.min_regression_minus_determinacy_sq},
      {"premises_hold", f.premises_hold()}};
  return j.dump(2) + "\n";
}

std::string report_table(const ReliabilityReport& report) {
  std::string out =
      "factor      r_tr      r_tb      r_tm  determinacy  determinacy_sq\n";
  for (Index k = 0; k < report.regression.size(); ++k) {
    char head[24];
    std::snprintf(head, sizeof head, "%6lld", static_cast<long long>(k + 1));
    const double det = clamp01(report.determinacy[k]);
    out += std::string(head) + "  " + fmt_fixed3(clamp01(report.regression[k])) +
           "  " + fmt_fixed3(clamp01(report.bartlett[k])) + "  " +
           fmt_fixed3(clamp01(report.mcdonald[k])) + "     " + fmt_fixed3(det) +
           "        " + fmt_fixed3(clamp01(det * det)) + "\n";
  }
  return out;
}

std::string aggregate_to_csv(const std::vector<AggregateRow>& rows) {
  std::string out =
      "condition,q,loads_per_factor,p,l,sl,r,n,replications,model_error,"
      "quantity,factor,mean,median,sd,min,max,used,nonconverged,heywood,"
      "inadmissible\n";
  for (const auto& row : rows) {
    const auto& c = row.condition;
    out += std::to_string(c.condition_index + 1) + ',' + std::to_string(c.q) +
           ',' + std::to_string(c.loads_per_factor) + ',' + std::to_string(c.p()) +
           ',' + fmt_double(c.l) + ',' + fmt_double(c.sl) + ',' + fmt_double(c.r) +
           ',' + std::to_string(c.n) + ',' + std::to_string(c.replications) + ',' +
           (c.model_error.enabled ? "1" : "0") + ',' + row.quantity + ',' +
           std::to_string(row.factor + 1) + ',' + fmt_double(row.mean) + ',' +
           fmt_double(row.median) + ',' + fmt_double(row.sd) + ',' +
           fmt_double(row.min) + ',' + fmt_double(row.max) + ',' +
           std::to_string(row.used) + ',' + std::to_string(row.n_nonconverged) +
           ',' + std::to_string(row.n_heywood) + ',' +
           std::to_string(row.n_inadmissible) + '\n';
  }
  return out;
}

std::string replications_to_json(const ConditionResult& result) {
  json reps = json::array();
  for (const auto& rec : result.replications) {
    json r;
    r["converged"] = rec.converged;
    r["admissible"] = rec.admissible;
    r["heywood"] = rec.heywood;
    if (rec.converged && rec.admissible) {
      for (int quantity = 0; quantity < 3; ++quantity) {
        std::vector<double> v(std::size_t(rec.reliabilities.cols()));
        for (Index k = 0; k < rec.reliabilities.cols(); ++k)
          v[std::size_t(k)] = rec.reliabilities(quantity, k);
        r[kQuantityNames[quantity]] = v;
      }
      r["determinacy"] = std::vector<double>(
          rec.determinacy.data(), rec.determinacy.data() + rec.determinacy.size());
    }
    reps.push_back(std::move(r));
  }
  json j;
  j["condition"] = result.condition.condition_index + 1;
  j["replications"] = std::move(reps);
  return j.dump(2) + "\n";
}

std::vector<SimulationCondition> conditions_from_json(const std::string& text) {
  const json j = parse_json(text);
  if (!j.is_object() || !j.contains("conditions") || !j["conditions"].is_array() ||
      j["conditions"].empty()) {
    raise(ErrorCode::ParseError, "config needs a non-empty 'conditions' array");
  }
  std::uint64_t master = 0;
  if (j.contains("master_seed")) {
    if (!j["master_seed"].is_number_unsigned()) {
      raise(ErrorCode::ParseError, "'master_seed' must be a non-negative integer");
    }
    master = j["master_seed"].get<std::uint64_t>();
  }
  std::vector<SimulationCondition> out;
  Index idx = 0;
  for (const auto& cj : j["conditions"]) {
    if (!cj.is_object()) {
      raise(ErrorCode::ParseError, "each condition must be an object");
    }
    SimulationCondition c;
    auto number = [&](const char* key, double fallback) {
      if (!cj.contains(key)) return fallback;
      if (!cj[key].is_number()) {
        raise(ErrorCode::ParseError, std::string("'") + key + "' must be a number");
      }
      return cj[key].get<double>();
    };
    auto integer = [&](const char* key, Index fallback) {
      if (!cj.contains(key)) return fallback;
      if (!cj[key].is_number_integer()) {
        raise(ErrorCode::ParseError,
              std::string("'") + key + "' must be an integer");
      }
      return Index(cj[key].get<long long>());
    };
    c.q = integer("q", 6);
    c.loads_per_factor = integer("loads_per_factor", 5);
    c.l = number("l", 0.4);
    c.sl = number("sl", 0.0);
    c.r = number("r", 0.0);
    c.n = integer("n", 0);
    c.replications = integer("replications", 1);
    if (cj.contains("model_error")) {
      const auto& me = cj["model_error"];
      if (!me.is_object()) {
        raise(ErrorCode::ParseError, "'model_error' must be an object");
      }
      c.model_error.enabled =
          me.contains("enabled") ? me["enabled"].get<bool>() : true;
      if (me.contains("m")) c.model_error.m = me["m"].get<int>();
      if (me.contains("pi_minor"))
        c.model_error.pi_minor = me["pi_minor"].get<double>();
      if (me.contains("decay")) c.model_error.decay = me["decay"].get<double>();
    }
    c.master_seed = master;
    c.condition_index = idx++;
    out.push_back(c);
  }
  return out;
}

void atomic_write(const std::filesystem::path& path, const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) raise(ErrorCode::ParseError, "cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) raise(ErrorCode::ParseError, "short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

} // namespace fars
