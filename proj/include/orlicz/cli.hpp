#pragma once

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "orlicz/lab.hpp"
#include "orlicz/serialize.hpp"

namespace orlicz {

// Exit-code contract: 0 all assertions passed, 2 assertion violations present,
// 3 hypothesis check failed with --strict, 4 configuration/input error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitViolations = 2;
inline constexpr int kExitHypothesis = 3;
inline constexpr int kExitConfig = 4;

namespace cli_detail {

// All option values are carried as strings: config-file merging and "unset"
// detection stay uniform, defaults are applied at dispatch time.
struct Args {
  std::string psi, family, p, q, p1, q1, p2, q2;
  std::string n, m, seed, seeds, random, cases, atoms;
  std::string tol, band, floor, threads;
  std::string in, config, out, format;
  bool strict = false;
};

inline double to_double(const std::string& s, const char* what) {
  if (s == "inf" || s == "Inf" || s == "INF") return kInf;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') throw config_error(std::string("bad value for ") + what + ": '" + s + "'");
  return v;
}

inline long long to_int(const std::string& s, const char* what) {
  char* end = nullptr;
  const long long v = std::strtoll(s.c_str(), &end, 10);
  if (end == s.c_str() || *end != '\0') throw config_error(std::string("bad integer for ") + what + ": '" + s + "'");
  return v;
}

inline std::vector<int> to_int_list(const std::string& s, const char* what) {
  std::vector<int> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const std::size_t comma = s.find(',', start);
    const std::string tok = s.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    out.push_back(static_cast<int>(to_int(tok, what)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

inline std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::string strip_quotes(std::string s) {
  if (s.size() >= 2 && ((s.front() == '"' && s.back() == '"') || (s.front() == '\'' && s.back() == '\'')))
    return s.substr(1, s.size() - 2);
  return s;
}

// key = value lines (TOML-like) or a flat JSON object; keys mirror the long
// flag names.
inline std::map<std::string, std::string> load_config_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw config_error("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << is.rdbuf();
  const std::string text = buf.str();
  std::map<std::string, std::string> kv;
  const std::size_t first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw config_error("config file is not a valid JSON object");
    for (const auto& [k, v] : j.items()) {
      if (v.is_string())
        kv[k] = v.get<std::string>();
      else if (v.is_boolean())
        kv[k] = v.get<bool>() ? "true" : "false";
      else if (v.is_object() || v.is_array())
        kv[k] = v.dump();
      else
        kv[k] = v.dump();
    }
    return kv;
  }
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#' || line[0] == '[') continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) throw config_error("config line without '=': " + line);
    const std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    const std::size_t hash = value.find(" #");
    if (hash != std::string::npos) value = trim(value.substr(0, hash));
    kv[key] = strip_quotes(value);
  }
  return kv;
}

struct OptionRegistry {
  std::map<std::string, CLI::Option*> by_key;
  std::map<std::string, std::string*> slot;
  CLI::Option* strict_opt = nullptr;
  bool* strict_slot = nullptr;

  void merge_config(const std::map<std::string, std::string>& kv) const {
    for (const auto& [key, value] : kv) {
      if (key == "strict") {
        if (strict_opt && strict_opt->count() == 0 && strict_slot)
          *strict_slot = (value == "true" || value == "1" || value == "yes");
        continue;
      }
      const auto it = slot.find(key);
      if (it == slot.end()) continue;  // unknown keys are ignored, flags win
      const auto opt = by_key.find(key);
      if (opt != by_key.end() && opt->second->count() > 0) continue;
      *it->second = value;
    }
  }
};

inline void add_output_options(CLI::App* sub, Args& a, OptionRegistry& reg) {
  reg.by_key["out"] = sub->add_option("--out", a.out, "write the report to this path");
  reg.slot["out"] = &a.out;
  reg.by_key["format"] = sub->add_option("--format", a.format, "json, csv or both (default json)");
  reg.slot["format"] = &a.format;
  reg.by_key["threads"] = sub->add_option("--threads", a.threads, "cap worker threads (also ORLICZ_LAB_THREADS)");
  reg.slot["threads"] = &a.threads;
  reg.strict_opt = sub->add_flag("--strict", a.strict, "exit 3 when the hypothesis check fails");
  reg.strict_slot = &a.strict;
  sub->add_option("--config", a.config, "key=value or JSON config file; flags override");
}

inline void reg_opt(CLI::App* sub, OptionRegistry& reg, const char* flag, const char* key,
                    std::string& slot, const char* help) {
  reg.by_key[key] = sub->add_option(flag, slot, help);
  reg.slot[key] = &slot;
}

// sweep interpretation: a single value is the maximum (sweep 1..n), a comma
// list is used verbatim
inline SweepOptions make_sweep(const Args& a, int def_n_max, int def_random) {
  SweepOptions s;
  s.n_max = def_n_max;
  if (!a.n.empty()) {
    const auto list = to_int_list(a.n, "--n");
    if (list.size() == 1)
      s.n_max = list[0];
    else
      s.n_list = list;
  }
  s.random_per_n = a.random.empty() ? def_random : static_cast<int>(to_int(a.random, "--random"));
  s.seed = a.seed.empty() ? 1 : static_cast<std::uint64_t>(to_int(a.seed, "--seed"));
  return s;
}

inline std::vector<int> make_n_list(const Args& a, std::vector<int> def) {
  if (a.n.empty()) return def;
  return to_int_list(a.n, "--n");
}

inline std::uint64_t require_seed(const Args& a) {
  if (a.seed.empty()) throw config_error("--seed is required for Monte Carlo experiments");
  return static_cast<std::uint64_t>(to_int(a.seed, "--seed"));
}

inline int parse_threads(const Args& a) {
  return a.threads.empty() ? 0 : static_cast<int>(to_int(a.threads, "--threads"));
}

inline LorentzIndex make_index(const Args& a) {
  if (a.p.empty() || a.q.empty()) throw config_error("--p and --q are required");
  const LorentzIndex idx{to_double(a.p, "--p"), to_double(a.q, "--q")};
  if (!idx.valid()) throw config_error("Lorentz index out of range: need p in (1, inf), q in [1, inf]");
  return idx;
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw config_error("cannot write to '" + path + "'");
  os << text;
  if (!os) throw config_error("write failed for '" + path + "'");
}

inline void append_csv_summary(const std::string& path, const ExperimentReport& rep) {
  namespace fs = std::filesystem;
  const bool fresh = !fs::exists(path) || fs::file_size(path) == 0;
  std::ofstream os(path, std::ios::app);
  if (!os) throw config_error("cannot write to '" + path + "'");
  if (fresh) os << kCsvSummaryHeader << "\n";
  os << csv_summary_row(rep) << "\n";
}

inline int emit_report(const ExperimentReport& rep, const Args& a) {
  const std::string format = a.format.empty() ? "json" : a.format;
  if (format != "json" && format != "csv" && format != "both")
    throw config_error("unknown --format '" + format + "'");
  const std::string text = report_to_json(rep, true).dump(2) + "\n";
  if (a.out.empty()) {
    std::cout << text;
  } else if (format == "json") {
    write_text_file(a.out, text);
  } else if (format == "csv") {
    append_csv_summary(a.out, rep);
  } else {
    write_text_file(a.out + ".json", text);
    append_csv_summary(a.out + ".csv", rep);
  }
  if (a.strict && rep.hypothesis_check && !rep.hypothesis_check->satisfied) return kExitHypothesis;
  if (!rep.passed || rep.violations > 0) return kExitViolations;
  return kExitOk;
}

inline SimpleFunction read_csv_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw config_error("cannot open input file '" + path + "'");
  return read_csv(is);
}

inline int run_verify(const std::string& name, Args& a) {
  ExperimentReport rep;
  if (name == "khinchin-orlicz" || name == "khinchin-lorentz") {
    KhinchinOptions o;
    o.sweep = make_sweep(a, 12, 100);
    if (!a.tol.empty()) o.lux_tol = to_double(a.tol, "--tol");
    if (!a.band.empty()) o.band_cap = to_double(a.band, "--band");
    o.threads = parse_threads(a);
    if (name == "khinchin-orlicz") {
      if (a.psi.empty()) throw config_error("--psi is required");
      rep = khinchin_orlicz(parse_psi_spec(a.psi), o);
    } else {
      rep = khinchin_lorentz(make_index(a), o);
    }
  } else if (name == "mz-orlicz" || name == "mz-lorentz") {
    MzOptions o;
    o.seed = require_seed(a);
    o.n_list = make_n_list(a, {2, 4, 8, 16});
    if (!a.m.empty()) o.m = static_cast<std::size_t>(to_int(a.m, "--m"));
    if (!a.seeds.empty()) o.seed_count = static_cast<int>(to_int(a.seeds, "--seeds"));
    if (!a.band.empty()) o.band = to_double(a.band, "--band");
    if (!a.tol.empty()) o.lux_tol = to_double(a.tol, "--tol");
    o.threads = parse_threads(a);
    if (a.family.empty()) throw config_error("--family is required");
    const RvFamily family = parse_family_spec(a.family);
    if (name == "mz-orlicz") {
      if (a.psi.empty()) throw config_error("--psi is required");
      rep = mz_orlicz(parse_psi_spec(a.psi), family, o);
    } else {
      rep = mz_lorentz(make_index(a), family, o);
    }
  } else if (name == "exp-moment" || name == "interpolation") {
    ExpMomentOptions o;
    o.sweep = make_sweep(a, 16, 60);
    o.threads = parse_threads(a);
    rep = name == "exp-moment" ? exp_moment_check(o) : interpolation_check(o);
  } else if (name == "kp-bound") {
    KpOptions o;
    o.seed = require_seed(a);
    o.n_list = make_n_list(a, {2, 4, 8, 16});
    if (!a.m.empty()) o.m = static_cast<std::size_t>(to_int(a.m, "--m"));
    if (!a.seeds.empty()) o.seed_count = static_cast<int>(to_int(a.seeds, "--seeds"));
    if (!a.random.empty()) o.random_per_n = static_cast<int>(to_int(a.random, "--random"));
    if (!a.floor.empty()) o.floor = to_double(a.floor, "--floor");
    if (!a.tol.empty()) o.lux_tol = to_double(a.tol, "--tol");
    o.threads = parse_threads(a);
    if (a.psi.empty()) throw config_error("--psi is required");
    if (a.family.empty()) throw config_error("--family is required");
    rep = kp_bound(parse_psi_spec(a.psi), parse_family_spec(a.family), o);
  } else if (name == "holder-lorentz") {
    HolderOptions o;
    if (!a.p1.empty()) o.p1 = to_double(a.p1, "--p1");
    if (!a.q1.empty()) o.q1 = to_double(a.q1, "--q1");
    if (!a.p2.empty()) o.p2 = to_double(a.p2, "--p2");
    if (!a.q2.empty()) o.q2 = to_double(a.q2, "--q2");
    if (!a.cases.empty()) o.cases = static_cast<int>(to_int(a.cases, "--cases"));
    if (!a.atoms.empty()) o.atoms = static_cast<int>(to_int(a.atoms, "--atoms"));
    if (!a.seed.empty()) o.seed = static_cast<std::uint64_t>(to_int(a.seed, "--seed"));
    o.threads = parse_threads(a);
    rep = holder_lorentz(o);
  } else if (name == "rearrangement") {
    RearrangementOptions o;
    if (!a.cases.empty()) o.cases = static_cast<int>(to_int(a.cases, "--cases"));
    if (!a.atoms.empty()) o.atoms = static_cast<int>(to_int(a.atoms, "--atoms"));
    if (!a.seed.empty()) o.seed = static_cast<std::uint64_t>(to_int(a.seed, "--seed"));
    o.threads = parse_threads(a);
    rep = rearrangement_suite(o);
  } else {
    throw config_error("unknown experiment '" + name + "'");
  }
  return emit_report(rep, a);
}

}  // namespace cli_detail

inline int run_cli(std::vector<std::string> args) {
  using cli_detail::Args;
  CLI::App app{"orlicz-lab: Orlicz and Lorentz norms on finite probability spaces, "
               "with empirical verification of the classical inequalities"};
  app.require_subcommand(1);

  Args a;

  // ---- young check
  CLI::App* young = app.add_subcommand("young", "Young function checks");
  young->require_subcommand(1);
  CLI::App* ycheck = young->add_subcommand("check", "verify growth conditions and hypotheses");
  cli_detail::OptionRegistry yreg;
  cli_detail::reg_opt(ycheck, yreg, "--psi", "psi", a.psi, "Young function spec, e.g. power:2");
  cli_detail::add_output_options(ycheck, a, yreg);

  // ---- norm subcommands
  CLI::App* norm = app.add_subcommand("norm", "compute a norm of a CSV simple function");
  norm->require_subcommand(1);
  std::map<std::string, CLI::App*> norm_subs;
  for (const char* kind : {"luxemburg", "orlicz", "lp", "lorentz"}) {
    CLI::App* sub = norm->add_subcommand(kind, std::string(kind) + " norm");
    sub->add_option("--in", a.in, "input CSV (point_id,value,mass)")->required();
    if (std::string(kind) == "luxemburg" || std::string(kind) == "orlicz") {
      sub->add_option("--psi", a.psi, "Young function spec");
      sub->add_option("--tol", a.tol, "solver tolerance");
    } else {
      sub->add_option("--p", a.p, "primary index p");
      if (std::string(kind) == "lorentz") sub->add_option("--q", a.q, "secondary index q (or inf)");
    }
    norm_subs[kind] = sub;
  }

  // ---- verify subcommands
  CLI::App* verify = app.add_subcommand("verify", "run an inequality experiment");
  verify->require_subcommand(1);
  std::map<std::string, CLI::App*> verify_subs;
  std::map<std::string, cli_detail::OptionRegistry> verify_regs;
  const std::vector<std::string> experiments = {
      "khinchin-orlicz", "khinchin-lorentz", "mz-orlicz",      "mz-lorentz", "exp-moment",
      "interpolation",   "kp-bound",         "holder-lorentz", "rearrangement"};
  for (const std::string& name : experiments) {
    CLI::App* sub = verify->add_subcommand(name, name + " experiment");
    cli_detail::OptionRegistry& reg = verify_regs[name];
    cli_detail::reg_opt(sub, reg, "--psi", "psi", a.psi, "Young function spec");
    cli_detail::reg_opt(sub, reg, "--family", "family", a.family, "sampling family spec");
    cli_detail::reg_opt(sub, reg, "--p", "p", a.p, "Lorentz p");
    cli_detail::reg_opt(sub, reg, "--q", "q", a.q, "Lorentz q (or inf)");
    cli_detail::reg_opt(sub, reg, "--p1", "p1", a.p1, "first factor p");
    cli_detail::reg_opt(sub, reg, "--q1", "q1", a.q1, "first factor q");
    cli_detail::reg_opt(sub, reg, "--p2", "p2", a.p2, "second factor p");
    cli_detail::reg_opt(sub, reg, "--q2", "q2", a.q2, "second factor q");
    cli_detail::reg_opt(sub, reg, "--n", "n", a.n, "N sweep: single max or comma list");
    cli_detail::reg_opt(sub, reg, "--m", "m", a.m, "Monte Carlo samples");
    cli_detail::reg_opt(sub, reg, "--seed", "seed", a.seed, "base RNG seed");
    cli_detail::reg_opt(sub, reg, "--seeds", "seeds", a.seeds, "number of seed replicas");
    cli_detail::reg_opt(sub, reg, "--random", "random", a.random, "random vectors per N");
    cli_detail::reg_opt(sub, reg, "--cases", "cases", a.cases, "number of random cases");
    cli_detail::reg_opt(sub, reg, "--atoms", "atoms", a.atoms, "atoms per random function");
    cli_detail::reg_opt(sub, reg, "--tol", "tol", a.tol, "norm solver tolerance");
    cli_detail::reg_opt(sub, reg, "--band", "band", a.band, "allowed ratio band");
    cli_detail::reg_opt(sub, reg, "--floor", "floor", a.floor, "lower-constant floor");
    cli_detail::add_output_options(sub, a, reg);
    verify_subs[name] = sub;
  }

  std::reverse(args.begin(), args.end());  // CLI11 wants reversed argv
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (young->parsed()) {
      if (!a.config.empty()) yreg.merge_config(cli_detail::load_config_file(a.config));
      if (a.psi.empty()) throw config_error("--psi is required");
      const YoungFunction psi = parse_psi_spec(a.psi);
      json j;
      j["psi"] = psi_to_json(psi);
      const GrowthReport young_rep = verify_young_conditions(psi);
      j["young_conditions"] = growth_report_to_json(young_rep);
      j["linear_below_exp_above"] =
          growth_report_to_json(check_hypothesis(psi, GrowthHypothesis::linear_below_exp_above));
      j["linear_below_square_above"] = growth_report_to_json(
          check_hypothesis(psi, GrowthHypothesis::linear_below_square_above));
      j["delta2"] = growth_report_to_json(check_hypothesis(psi, GrowthHypothesis::delta2));
      const std::string text = j.dump(2) + "\n";
      if (a.out.empty())
        std::cout << text;
      else
        cli_detail::write_text_file(a.out, text);
      if (a.strict && !young_rep.satisfied) return kExitHypothesis;
      return kExitOk;
    }

    if (norm->parsed()) {
      const SimpleFunction f = cli_detail::read_csv_file(a.in);
      NormValue nv;
      if (norm_subs["luxemburg"]->parsed() || norm_subs["orlicz"]->parsed()) {
        if (a.psi.empty()) throw config_error("--psi is required");
        const YoungFunction psi = parse_psi_spec(a.psi);
        const double tol = a.tol.empty() ? 1e-10 : cli_detail::to_double(a.tol, "--tol");
        nv = norm_subs["luxemburg"]->parsed() ? luxemburg_norm(psi, f, tol) : orlicz_norm(psi, f, tol);
      } else if (norm_subs["lp"]->parsed()) {
        if (a.p.empty()) throw config_error("--p is required");
        nv = lp_norm(cli_detail::to_double(a.p, "--p"), f);
      } else {
        nv = lorentz_norm(cli_detail::make_index(a), f);
      }
      std::cout << norm_value_to_json(nv).dump(2) << "\n";
      return kExitOk;
    }

    for (const auto& [name, sub] : verify_subs) {
      if (sub->parsed()) {
        if (!a.config.empty())
          verify_regs[name].merge_config(cli_detail::load_config_file(a.config));
        return cli_detail::run_verify(name, a);
      }
    }
    throw config_error("no subcommand selected");
  } catch (const config_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const csv_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace orlicz
