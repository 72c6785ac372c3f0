#pragma once

// Scenario files (JSON), CSV tables and report serialization.

#include "fastlip/cost.hpp"
#include "fastlip/interference.hpp"
#include "fastlip/qualifiers.hpp"
#include "fastlip/smoothing.hpp"
#include "fastlip/solver.hpp"

#include <json.hpp>

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

namespace fastlip {

/// Malformed scenario document; the message names the line or field.
class ScenarioError : public DomainError {
 public:
  using DomainError::DomainError;
};

struct CostSpec {
  std::string kind = "sum";  // identity-vector | sum | weighted-log-sum | weighted-power-product
  std::optional<Vector> s;
  std::string h = "identity";  // identity | log

  bool operator==(const CostSpec&) const = default;
};

struct InterferenceSpec {
  std::string kind = "affine";  // affine | monomial | opportunistic | smoothed
  Matrix a;                     // monomial exponents
  Vector b;                     // monomial log-coefficients
  Vector c;                     // opportunistic numerators
  std::string fading = "rayleigh";
  double lambda = 1.0;
  double cap = 1.0;  // smoothed outage bound b
  double zmin = kDefaultZmin;

  bool operator==(const InterferenceSpec& o) const {
    return kind == o.kind && a == o.a && b == o.b && c == o.c && fading == o.fading && lambda == o.lambda &&
           cap == o.cap && zmin == o.zmin;
  }
};

struct Scenario {
  Matrix gains;  // may be empty for monomial models
  Vector tau;
  Vector eta;
  PowerBox box;
  CostSpec cost;
  InterferenceSpec interference;

  std::size_t size() const { return box.size(); }

  bool operator==(const Scenario& o) const {
    return gains == o.gains && tau == o.tau && eta == o.eta && box.lower == o.box.lower &&
           box.upper == o.box.upper && cost == o.cost && interference == o.interference;
  }
};

namespace detail {

using nlohmann::json;

inline std::string field_path(const std::string& parent, const std::string& key) {
  return parent.empty() ? key : parent + "." + key;
}

inline const json& need(const json& obj, const std::string& key, const std::string& parent) {
  if (!obj.is_object()) throw ScenarioError("field '" + parent + "': expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw ScenarioError("field '" + field_path(parent, key) + "': missing");
  return *it;
}

inline double as_number(const json& v, const std::string& where) {
  if (!v.is_number()) throw ScenarioError("field '" + where + "': expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ScenarioError("field '" + where + "': not finite");
  return x;
}

inline std::string as_string(const json& v, const std::string& where) {
  if (!v.is_string()) throw ScenarioError("field '" + where + "': expected a string");
  return v.get<std::string>();
}

inline Vector as_vector(const json& v, const std::string& where) {
  if (!v.is_array()) throw ScenarioError("field '" + where + "': expected an array of numbers");
  Vector out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) {
    out(static_cast<Eigen::Index>(i)) = as_number(v[i], where + "[" + std::to_string(i) + "]");
  }
  return out;
}

inline Matrix as_matrix(const json& v, Eigen::Index n, const std::string& where) {
  if (!v.is_array() || static_cast<Eigen::Index>(v.size()) != n) {
    throw ScenarioError("field '" + where + "': expected " + std::to_string(n) + " rows");
  }
  Matrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const std::string row = where + "[" + std::to_string(i) + "]";
    const Vector r = as_vector(v[static_cast<std::size_t>(i)], row);
    if (r.size() != n) throw ScenarioError("field '" + row + "': expected " + std::to_string(n) + " entries");
    m.row(i) = r.transpose();
  }
  return m;
}

inline void need_length(const Vector& v, Eigen::Index n, const std::string& where) {
  if (v.size() != n) {
    throw ScenarioError("field '" + where + "': length " + std::to_string(v.size()) + ", expected " +
                        std::to_string(n) + " (from tau)");
  }
}

inline json to_json(const Vector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

inline json to_json(const Matrix& m) {
  json a = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) a.push_back(to_json(Vector(m.row(i).transpose())));
  return a;
}

/// 1-based line of a byte offset.
inline std::size_t line_of(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) line += text[i] == '\n';
  return line;
}

}  // namespace detail

inline Scenario scenario_from_json(const nlohmann::json& doc) {
  using detail::need;
  Scenario s;
  if (!doc.is_object()) throw ScenarioError("document: expected a JSON object");
  s.tau = detail::as_vector(need(doc, "tau", ""), "tau");
  const auto n = s.tau.size();
  if (n == 0) throw ScenarioError("field 'tau': empty");
  const Vector lo = detail::as_vector(need(doc, "p_min", ""), "p_min");
  const Vector hi = detail::as_vector(need(doc, "p_max", ""), "p_max");
  detail::need_length(lo, n, "p_min");
  detail::need_length(hi, n, "p_max");
  for (Eigen::Index i = 0; i < n; ++i) {
    const std::string at = "[" + std::to_string(i) + "]";
    if (!(lo(i) >= 0.0)) throw ScenarioError("field 'p_min" + at + "': must be >= 0");
    if (!(lo(i) < hi(i))) throw ScenarioError("field 'p_max" + at + "': must exceed p_min" + at);
  }
  s.box = PowerBox(lo, hi);

  if (auto it = doc.find("interference"); it != doc.end()) {
    const auto& in = *it;
    s.interference.kind = detail::as_string(need(in, "kind", "interference"), "interference.kind");
    const std::string& k = s.interference.kind;
    if (k == "monomial") {
      s.interference.a = detail::as_matrix(need(in, "A", "interference"), n, "interference.A");
      s.interference.b = detail::as_vector(need(in, "b", "interference"), "interference.b");
      detail::need_length(s.interference.b, n, "interference.b");
    } else if (k == "opportunistic") {
      s.interference.c = detail::as_vector(need(in, "c", "interference"), "interference.c");
      detail::need_length(s.interference.c, n, "interference.c");
      if (!(s.interference.c.array() > 0.0).all()) throw ScenarioError("field 'interference.c': must be > 0");
    } else if (k == "smoothed") {
      s.interference.fading = detail::as_string(need(in, "fading", "interference"), "interference.fading");
      if (s.interference.fading != "rayleigh" && s.interference.fading != "exponential") {
        throw ScenarioError("field 'interference.fading': expected rayleigh or exponential");
      }
      s.interference.lambda = detail::as_number(need(in, "lambda", "interference"), "interference.lambda");
      s.interference.cap = detail::as_number(need(in, "b", "interference"), "interference.b");
      if (auto z = in.find("zmin"); z != in.end()) s.interference.zmin = detail::as_number(*z, "interference.zmin");
      if (!(s.interference.lambda > 0.0)) throw ScenarioError("field 'interference.lambda': must be > 0");
      if (!(s.interference.cap > 0.0)) throw ScenarioError("field 'interference.b': must be > 0");
      if (!(s.interference.zmin > 0.0)) throw ScenarioError("field 'interference.zmin': must be > 0");
    } else if (k != "affine") {
      throw ScenarioError("field 'interference.kind': unknown kind '" + k + "'");
    }
  }

  const bool network = s.interference.kind != "monomial";
  if (network || doc.contains("gains")) {
    s.gains = detail::as_matrix(need(doc, "gains", ""), n, "gains");
    s.eta = detail::as_vector(need(doc, "eta", ""), "eta");
    detail::need_length(s.eta, n, "eta");
    for (Eigen::Index i = 0; i < n; ++i) {
      const std::string at = "[" + std::to_string(i) + "]";
      if (!(s.gains(i, i) > 0.0)) throw ScenarioError("field 'gains" + at + at + "': diagonal must be > 0");
      if (!(s.tau(i) > 0.0)) throw ScenarioError("field 'tau" + at + "': must be > 0");
      if (!(s.eta(i) >= 0.0)) throw ScenarioError("field 'eta" + at + "': must be >= 0");
      for (Eigen::Index j = 0; j < n; ++j) {
        if (!(s.gains(i, j) >= 0.0)) {
          throw ScenarioError("field 'gains[" + std::to_string(i) + "][" + std::to_string(j) + "]': must be >= 0");
        }
      }
    }
  }

  if (auto it = doc.find("cost"); it != doc.end()) {
    const auto& c = *it;
    s.cost.kind = detail::as_string(need(c, "kind", "cost"), "cost.kind");
    const std::string& k = s.cost.kind;
    if (k == "weighted-log-sum" || k == "weighted-power-product") {
      s.cost.s = detail::as_vector(need(c, "s", "cost"), "cost.s");
      detail::need_length(*s.cost.s, n, "cost.s");
      if (!(s.cost.s->array() > 0.0).all()) throw ScenarioError("field 'cost.s': weights must be > 0");
      if (auto h = c.find("h"); h != c.end()) s.cost.h = detail::as_string(*h, "cost.h");
      if (s.cost.h != "identity" && s.cost.h != "log") throw ScenarioError("field 'cost.h': expected identity or log");
    } else if (k != "sum" && k != "identity-vector") {
      throw ScenarioError("field 'cost.kind': unknown kind '" + k + "'");
    }
  }
  return s;
}

/// Parses scenario text; syntax errors report the line number.
inline Scenario parse_scenario(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ScenarioError("line " + std::to_string(detail::line_of(text, e.byte > 0 ? e.byte - 1 : 0)) +
                        ": JSON syntax error: " + e.what());
  }
  return scenario_from_json(doc);
}

inline std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ScenarioError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Scenario load_scenario(const std::filesystem::path& path) {
  try {
    return parse_scenario(read_text_file(path));
  } catch (const ScenarioError& e) {
    throw ScenarioError(path.string() + ": " + e.what());
  }
}

inline nlohmann::json scenario_to_json(const Scenario& s) {
  nlohmann::json doc;
  if (s.gains.size() > 0) {
    doc["gains"] = detail::to_json(s.gains);
    doc["eta"] = detail::to_json(s.eta);
  }
  doc["tau"] = detail::to_json(s.tau);
  doc["p_min"] = detail::to_json(s.box.lower);
  doc["p_max"] = detail::to_json(s.box.upper);
  nlohmann::json c{{"kind", s.cost.kind}};
  if (s.cost.s) {
    c["s"] = detail::to_json(*s.cost.s);
    c["h"] = s.cost.h;
  }
  doc["cost"] = c;
  nlohmann::json in{{"kind", s.interference.kind}};
  if (s.interference.kind == "monomial") {
    in["A"] = detail::to_json(s.interference.a);
    in["b"] = detail::to_json(s.interference.b);
  } else if (s.interference.kind == "opportunistic") {
    in["c"] = detail::to_json(s.interference.c);
  } else if (s.interference.kind == "smoothed") {
    in["fading"] = s.interference.fading;
    in["lambda"] = s.interference.lambda;
    in["b"] = s.interference.cap;
    in["zmin"] = s.interference.zmin;
  }
  doc["interference"] = in;
  return doc;
}

inline std::string serialize_scenario(const Scenario& s) { return scenario_to_json(s).dump(2) + "\n"; }

inline NetworkScenario network_of(const Scenario& s) {
  if (s.gains.size() == 0) throw ScenarioError("scenario has no gains/eta");
  NetworkScenario n{s.gains, s.tau, s.eta, s.box};
  n.validate();
  return n;
}

inline InterferencePtr build_model(const Scenario& s) {
  const auto& k = s.interference.kind;
  if (k == "affine") return std::make_shared<const AffineInterference>(network_of(s));
  if (k == "monomial") return std::make_shared<const MonomialInterference>(s.interference.a, s.interference.b);
  if (k == "opportunistic") {
    return std::make_shared<const OpportunisticInterference>(s.gains, s.eta, s.interference.c);
  }
  if (k == "smoothed") {
    auto base = std::make_shared<const AffineInterference>(network_of(s));
    const FadingModel f = s.interference.fading == "rayleigh" ? FadingModel::rayleigh(s.interference.lambda)
                                                              : FadingModel::exponential(s.interference.lambda);
    return std::make_shared<const SmoothedInterference>(base, std::vector<FadingModel>{f}, s.interference.cap,
                                                        s.interference.zmin);
  }
  throw ScenarioError("unknown interference kind '" + k + "'");
}

inline CostModel build_cost(const Scenario& s) {
  const auto& k = s.cost.kind;
  if (k == "sum") return CostModel::sum();
  if (k == "identity-vector") return CostModel::identity_vector();
  if (k == "weighted-log-sum") return CostModel::weighted_log_sum(*s.cost.s);
  const ScalarTransform h = s.cost.h == "log" ? ScalarTransform::log() : ScalarTransform::identity();
  return CostModel::weighted_power_product(*s.cost.s, h);
}

// CSV

/// Shortest round-trip decimal form; independent of the C locale.
inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  void add(std::vector<double> row) {
    detail::require(row.size() == header.size(), "Table: row width mismatch");
    rows.push_back(std::move(row));
  }

  std::size_t column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return i;
    }
    throw DomainError("Table: no column '" + name + "'");
  }

  std::string to_csv() const {
    std::string out;
    for (std::size_t i = 0; i < header.size(); ++i) out += (i ? "," : "") + header[i];
    out += '\n';
    for (const auto& r : rows) {
      for (std::size_t i = 0; i < r.size(); ++i) {
        if (i) out += ',';
        out += format_number(r[i]);
      }
      out += '\n';
    }
    return out;
  }
};

/// Columns k, p_1..p_n, residual.
inline Table trace_table(const IterationTrace& t) {
  Table tab;
  tab.header.push_back("k");
  const auto n = t.steps.empty() ? 0 : t.steps.front().p.size();
  for (Eigen::Index i = 0; i < n; ++i) tab.header.push_back("p_" + std::to_string(i + 1));
  tab.header.push_back("residual");
  for (const auto& s : t.steps) {
    std::vector<double> row{static_cast<double>(s.k)};
    for (Eigen::Index i = 0; i < n; ++i) row.push_back(s.p(i));
    row.push_back(s.residual);
    tab.add(std::move(row));
  }
  return tab;
}

/// Writes to a sibling temp file, then renames over the target.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  namespace fs = std::filesystem;
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw Error("write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    throw Error("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
  }
}

// Reports

inline nlohmann::json to_json(const ConditionEntry& e) {
  nlohmann::json j{{"condition", e.id},
                   {"verdict", to_string(e.verdict)},
                   {"margin", e.margin},
                   {"samples", e.samples},
                   {"seed", e.seed}};
  j["witness"] = e.worst_point ? detail::to_json(*e.worst_point) : nlohmann::json(nullptr);
  j["counterexample"] = e.counterexample ? detail::to_json(*e.counterexample) : nlohmann::json(nullptr);
  if (!e.detail.empty()) j["detail"] = e.detail;
  return j;
}

inline nlohmann::json to_json(const QualificationReport& r) {
  nlohmann::json j;
  j["overall"] = r.statement();
  j["certified"] = r.certified;
  j["conditions"] = nlohmann::json::array();
  for (const auto& e : r.entries) j["conditions"].push_back(to_json(e));
  if (r.t2_weights) j["t2_weights"] = detail::to_json(*r.t2_weights);
  return j;
}

/// Fixed-width text table of a qualification report.
inline std::string report_table(const QualificationReport& r) {
  std::ostringstream os;
  char line[160];
  std::snprintf(line, sizeof line, "%-12s %-13s %14s  %s\n", "condition", "verdict", "margin", "detail");
  os << line;
  for (const auto& e : r.entries) {
    std::snprintf(line, sizeof line, "%-12s %-13s %14.6g  %s\n", e.id.c_str(), to_string(e.verdict), e.margin,
                  e.detail.c_str());
    os << line;
  }
  os << "overall: " << r.statement() << "\n";
  return os.str();
}

}  // namespace fastlip
