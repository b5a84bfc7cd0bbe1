#pragma once

#include <cmath>
#include <cstdlib>
#include <string>
#include <vector>

#include "json.hpp"
#include "orlicz/lab.hpp"
#include "orlicz/norms.hpp"
#include "orlicz/randseries.hpp"
#include "orlicz/young.hpp"

namespace orlicz {

using json = nlohmann::json;

namespace detail {

// json has no infinities; keep reports deterministic and readable
inline json num(double v) {
  if (std::isfinite(v)) return v;
  return v > 0 ? "inf" : "-inf";
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string::npos ? std::string::npos : pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

inline double parse_double(const std::string& s, const char* what) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') throw config_error(std::string("bad number for ") + what + ": '" + s + "'");
  return v;
}

}  // namespace detail

inline json growth_report_to_json(const GrowthReport& g) {
  json j;
  j["hypothesis"] = hypothesis_name(g.hypothesis);
  j["grid_points"] = g.grid.size();
  j["grid_min"] = g.grid.empty() ? 0.0 : g.grid.front();
  j["grid_max"] = g.grid.empty() ? 0.0 : g.grid.back();
  j["worst_ratio_low"] = detail::num(g.worst_ratio_low);
  j["worst_ratio_high"] = detail::num(g.worst_ratio_high);
  j["satisfied"] = g.satisfied;
  return j;
}

inline json norm_value_to_json(const NormValue& nv, bool round12 = true) {
  json j;
  if (round12) {
    j["value"] = std::strtod(format_sig12(nv.value).c_str(), nullptr);
    j["err_bound"] = std::strtod(format_sig12(nv.err_bound).c_str(), nullptr);
  } else {
    j["value"] = nv.value;
    j["err_bound"] = nv.err_bound;
  }
  j["method"] = to_string(nv.method);
  return j;
}

inline json simple_function_to_json(const SimpleFunction& f) {
  json rows = json::array();
  for (const Atom& a : f.atoms()) rows.push_back({a.point_id, a.value, a.mass});
  return rows;
}

inline json report_to_json(const ExperimentReport& r, bool include_sidecar = true) {
  json j;
  j["schema_version"] = 1;
  j["tool_version"] = tool_version;
  j["experiment"] = r.experiment;
  j["config"] = r.config;
  j["config_hash"] = r.config_hash;
  j["seed"] = r.seed;
  j["cases"] = r.cases;
  j["ratio_min"] = detail::num(r.ratio_min);
  j["ratio_median"] = detail::num(r.ratio_median);
  j["ratio_max"] = detail::num(r.ratio_max);
  j["violations"] = r.violations;
  j["passed"] = r.passed;
  if (r.hypothesis_check)
    j["hypothesis_check"] = growth_report_to_json(*r.hypothesis_check);
  else
    j["hypothesis_check"] = nullptr;
  json extras = json::object();
  for (const auto& [k, v] : r.extras) extras[k] = detail::num(v);
  j["extras"] = extras;
  if (include_sidecar) j["sidecar"] = {{"runtime_ms", r.runtime_ms}};
  return j;
}

// Sidecar-free serialization: identical bytes for identical runs.
inline std::string canonical_report_string(const ExperimentReport& r) {
  return report_to_json(r, false).dump(2);
}

inline constexpr const char* kCsvSummaryHeader =
    "experiment,config_hash,seed,cases,ratio_min,ratio_median,ratio_max,violations,passed";

inline std::string csv_summary_row(const ExperimentReport& r) {
  std::string s;
  s += r.experiment + "," + r.config_hash + "," + std::to_string(r.seed) + "," +
       std::to_string(r.cases) + "," + format_sig12(r.ratio_min) + "," +
       format_sig12(r.ratio_median) + "," + format_sig12(r.ratio_max) + "," +
       std::to_string(r.violations) + "," + (r.passed ? "1" : "0");
  return s;
}

// --------------------------------------------------------------------------
// Young function descriptors

inline json psi_to_json(const YoungFunction& psi) {
  json j;
  switch (psi.family()) {
    case YoungFamily::power:
      j["family"] = "power";
      j["p"] = psi.exponent();
      break;
    case YoungFamily::scaled_power:
      j["family"] = "scaled_power";
      j["p"] = psi.exponent();
      j["c"] = psi.scale();
      break;
    case YoungFamily::power_log:
      j["family"] = "power_log";
      break;
    case YoungFamily::exp_minus_one:
      j["family"] = "exp_minus_one";
      break;
    case YoungFamily::exp_square_minus_one:
      j["family"] = "exp_square_minus_one";
      break;
    case YoungFamily::piecewise_linear: {
      j["family"] = "piecewise";
      json pts = json::array();
      for (const PiecewisePoint& p : psi.points()) pts.push_back({p.x, p.slope});
      j["points"] = pts;
      break;
    }
  }
  return j;
}

inline YoungFunction psi_from_json(const json& j) {
  if (!j.is_object() || !j.contains("family")) throw config_error("psi descriptor needs a 'family' field");
  const std::string fam = j.at("family").get<std::string>();
  try {
    if (fam == "power") return YoungFunction::power(j.at("p").get<double>());
    if (fam == "scaled_power")
      return YoungFunction::scaled_power(j.at("p").get<double>(), j.at("c").get<double>());
    if (fam == "power_log") return YoungFunction::power_log();
    if (fam == "exp_minus_one") return YoungFunction::exp_minus_one();
    if (fam == "exp_square_minus_one") return YoungFunction::exp_square_minus_one();
    if (fam == "piecewise") {
      std::vector<PiecewisePoint> pts;
      for (const auto& row : j.at("points"))
        pts.push_back(PiecewisePoint{row.at(0).get<double>(), row.at(1).get<double>()});
      return YoungFunction::piecewise(std::move(pts));
    }
  } catch (const json::exception& e) {
    throw config_error(std::string("bad psi descriptor: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw config_error(std::string("bad psi descriptor: ") + e.what());
  }
  throw config_error("unknown psi family '" + fam + "'");
}

// Accepts both the JSON descriptor and the compact colon form, e.g.
// power:1.5, scaledpower:2:0.5, powerlog, expm1, expsq, piecewise:0,0.5;1,2.
inline YoungFunction parse_psi_spec(const std::string& spec) {
  if (spec.empty()) throw config_error("empty psi spec");
  if (spec.front() == '{') {
    json j = json::parse(spec, nullptr, false);
    if (j.is_discarded()) throw config_error("psi spec is not valid JSON: " + spec);
    return psi_from_json(j);
  }
  const auto parts = detail::split(spec, ':');
  const std::string& fam = parts[0];
  try {
    if (fam == "power") {
      if (parts.size() != 2) throw config_error("power spec needs one parameter, e.g. power:2");
      return YoungFunction::power(detail::parse_double(parts[1], "p"));
    }
    if (fam == "scaledpower" || fam == "scaled_power") {
      if (parts.size() != 3) throw config_error("scaledpower spec needs p and c, e.g. scaledpower:2:0.5");
      return YoungFunction::scaled_power(detail::parse_double(parts[1], "p"),
                                         detail::parse_double(parts[2], "c"));
    }
    if (fam == "powerlog" || fam == "power_log") return YoungFunction::power_log();
    if (fam == "expm1" || fam == "exp-minus-one" || fam == "exp_minus_one")
      return YoungFunction::exp_minus_one();
    if (fam == "expsq" || fam == "exp-square-minus-one" || fam == "exp_square_minus_one" ||
        fam == "psi2")
      return YoungFunction::exp_square_minus_one();
    if (fam == "piecewise") {
      if (parts.size() != 2) throw config_error("piecewise spec: piecewise:x0,s0;x1,s1;...");
      std::vector<PiecewisePoint> pts;
      for (const std::string& seg : detail::split(parts[1], ';')) {
        const auto xy = detail::split(seg, ',');
        if (xy.size() != 2) throw config_error("piecewise segment needs x,slope: '" + seg + "'");
        pts.push_back(PiecewisePoint{detail::parse_double(xy[0], "x"),
                                     detail::parse_double(xy[1], "slope")});
      }
      return YoungFunction::piecewise(std::move(pts));
    }
  } catch (const std::invalid_argument& e) {
    throw config_error(std::string("bad psi spec: ") + e.what());
  }
  throw config_error("unknown psi spec '" + spec + "'");
}

// --------------------------------------------------------------------------
// random-variable family descriptors

inline json family_to_json(const RvFamily& f) {
  json j;
  switch (f.kind()) {
    case RvFamily::Kind::rademacher_sign:
      j["kind"] = "rademacher";
      break;
    case RvFamily::Kind::uniform_centered:
      j["kind"] = "uniform_centered";
      j["a"] = f.param_a();
      break;
    case RvFamily::Kind::two_point_mean_zero:
      j["kind"] = "two_point";
      j["v1"] = f.param_v1();
      j["v2"] = f.param_v2();
      j["m"] = f.param_m();
      break;
    case RvFamily::Kind::gaussian_truncated:
      j["kind"] = "gaussian_truncated";
      j["r"] = f.param_radius();
      break;
    case RvFamily::Kind::pareto_centered:
      j["kind"] = "pareto_centered";
      j["alpha"] = f.param_alpha();
      j["cutoff"] = f.param_cutoff();
      break;
  }
  return j;
}

inline RvFamily family_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind")) throw config_error("family descriptor needs a 'kind' field");
  const std::string kind = j.at("kind").get<std::string>();
  try {
    if (kind == "rademacher") return RvFamily::rademacher();
    if (kind == "uniform_centered") return RvFamily::uniform_centered(j.at("a").get<double>());
    if (kind == "two_point")
      return RvFamily::two_point(j.at("v1").get<double>(), j.at("v2").get<double>(),
                                 j.at("m").get<double>());
    if (kind == "gaussian_truncated") return RvFamily::gaussian_truncated(j.at("r").get<double>());
    if (kind == "pareto_centered")
      return RvFamily::pareto_centered(j.at("alpha").get<double>(), j.at("cutoff").get<double>());
  } catch (const json::exception& e) {
    throw config_error(std::string("bad family descriptor: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw config_error(std::string("bad family descriptor: ") + e.what());
  }
  throw config_error("unknown family kind '" + kind + "'");
}

// Compact forms: rademacher, uniform:1.7320508, twopoint:3:-0.333...:0.1,
// gauss:4, pareto:2.5:50; JSON descriptors also accepted.
inline RvFamily parse_family_spec(const std::string& spec) {
  if (spec.empty()) throw config_error("empty family spec");
  if (spec.front() == '{') {
    json j = json::parse(spec, nullptr, false);
    if (j.is_discarded()) throw config_error("family spec is not valid JSON: " + spec);
    return family_from_json(j);
  }
  const auto parts = detail::split(spec, ':');
  const std::string& kind = parts[0];
  try {
    if (kind == "rademacher" || kind == "sign") return RvFamily::rademacher();
    if (kind == "uniform" || kind == "uniform_centered") {
      if (parts.size() != 2) throw config_error("uniform spec needs the half width, e.g. uniform:1.732");
      return RvFamily::uniform_centered(detail::parse_double(parts[1], "a"));
    }
    if (kind == "twopoint" || kind == "two_point") {
      if (parts.size() != 4) throw config_error("twopoint spec: twopoint:v1:v2:m");
      return RvFamily::two_point(detail::parse_double(parts[1], "v1"),
                                 detail::parse_double(parts[2], "v2"),
                                 detail::parse_double(parts[3], "m"));
    }
    if (kind == "gauss" || kind == "gaussian" || kind == "gaussian_truncated") {
      if (parts.size() != 2) throw config_error("gauss spec needs the radius, e.g. gauss:4");
      return RvFamily::gaussian_truncated(detail::parse_double(parts[1], "r"));
    }
    if (kind == "pareto" || kind == "pareto_centered") {
      if (parts.size() != 3) throw config_error("pareto spec: pareto:alpha:cutoff");
      return RvFamily::pareto_centered(detail::parse_double(parts[1], "alpha"),
                                       detail::parse_double(parts[2], "cutoff"));
    }
  } catch (const std::invalid_argument& e) {
    throw config_error(std::string("bad family spec: ") + e.what());
  }
  throw config_error("unknown family spec '" + spec + "'");
}

}  // namespace orlicz
