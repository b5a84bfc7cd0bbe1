#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cerrno>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "orlicz/common.hpp"
#include "orlicz/young.hpp"

namespace orlicz {

struct Atom {
  std::int64_t point_id;
  double value;
  double mass;
};

inline std::uint64_t fresh_domain_id() {
  static std::atomic<std::uint64_t> next{1};
  return next.fetch_add(1);
}

// Finitely-supported random variable: (point_id, value, mass) atoms over an
// indexed sample space.  Two functions are pointwise-combinable iff they share
// the domain token and the point-id set; independence is never implicit, it
// is constructed via product_space or shared Monte Carlo domains.
class SimpleFunction {
 public:
  static SimpleFunction make(const std::vector<double>& values, const std::vector<double>& masses) {
    if (values.empty()) throw std::invalid_argument("simple function needs at least one atom");
    if (values.size() != masses.size()) throw std::invalid_argument("values and masses must have equal length");
    for (const double m : masses)
      if (!(m > 0.0) || !std::isfinite(m)) throw std::invalid_argument("masses must be positive and finite");
    const double total = pairwise_sum(masses);
    if (std::abs(total - 1.0) > 1e-9)
      throw std::invalid_argument("masses must sum to 1 within 1e-9 (got " + std::to_string(total) + ")");
    std::vector<Atom> atoms(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (!std::isfinite(values[i])) throw std::invalid_argument("values must be finite");
      atoms[i] = Atom{static_cast<std::int64_t>(i), values[i], masses[i] / total};
    }
    return SimpleFunction(fresh_domain_id(), std::move(atoms));
  }

  static SimpleFunction constant(double c) { return make({c}, {1.0}); }

  // Trusted constructor for atoms already carrying ids on a known domain.
  static SimpleFunction on_domain(std::uint64_t domain, std::vector<Atom> atoms) {
    if (atoms.empty()) throw std::invalid_argument("simple function needs at least one atom");
    std::sort(atoms.begin(), atoms.end(),
              [](const Atom& a, const Atom& b) { return a.point_id < b.point_id; });
    for (std::size_t i = 0; i + 1 < atoms.size(); ++i)
      if (atoms[i].point_id == atoms[i + 1].point_id)
        throw std::invalid_argument("point ids must be unique");
    return SimpleFunction(domain, std::move(atoms));
  }

  const std::vector<Atom>& atoms() const noexcept { return atoms_; }
  std::uint64_t domain() const noexcept { return domain_; }
  std::size_t size() const noexcept { return atoms_.size(); }

  double max_abs() const {
    double v = 0.0;
    for (const Atom& a : atoms_) v = std::max(v, std::abs(a.value));
    return v;
  }

  double min_mass() const {
    double m = atoms_.front().mass;
    for (const Atom& a : atoms_) m = std::min(m, a.mass);
    return m;
  }

  bool is_zero() const {
    for (const Atom& a : atoms_)
      if (a.value != 0.0) return false;
    return true;
  }

  bool combinable_with(const SimpleFunction& other) const {
    if (domain_ != other.domain_ || atoms_.size() != other.atoms_.size()) return false;
    for (std::size_t i = 0; i < atoms_.size(); ++i)
      if (atoms_[i].point_id != other.atoms_[i].point_id) return false;
    return true;
  }

 private:
  SimpleFunction(std::uint64_t domain, std::vector<Atom> atoms)
      : domain_(domain), atoms_(std::move(atoms)) {}

  std::uint64_t domain_;
  std::vector<Atom> atoms_;
};

template <class Op>
SimpleFunction combine(const SimpleFunction& f, const SimpleFunction& g, Op op) {
  if (!f.combinable_with(g))
    throw incompatible_domains_error(
        "functions live on different sample spaces; build a joint space first");
  std::vector<Atom> atoms(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    const Atom& a = f.atoms()[i];
    atoms[i] = Atom{a.point_id, op(a.value, g.atoms()[i].value), a.mass};
  }
  return SimpleFunction::on_domain(f.domain(), std::move(atoms));
}

inline SimpleFunction add(const SimpleFunction& f, const SimpleFunction& g) {
  return combine(f, g, [](double a, double b) { return a + b; });
}

inline SimpleFunction multiply(const SimpleFunction& f, const SimpleFunction& g) {
  return combine(f, g, [](double a, double b) { return a * b; });
}

template <class Fn>
SimpleFunction map_values(const SimpleFunction& f, Fn fn) {
  std::vector<Atom> atoms = f.atoms();
  for (Atom& a : atoms) a.value = fn(a.value);
  return SimpleFunction::on_domain(f.domain(), std::move(atoms));
}

// rho_psi(f) = sum of mass * psi(|value|).
inline double modular(const YoungFunction& psi, const SimpleFunction& f) {
  return pairwise_sum(f.size(), [&](std::size_t i) {
    const Atom& a = f.atoms()[i];
    return a.mass * psi.eval(std::abs(a.value));
  });
}

// rho_psi(scale * f); the workhorse of the norm solvers.
inline double modular_scaled(const YoungFunction& psi, const SimpleFunction& f, double scale) {
  return pairwise_sum(f.size(), [&](std::size_t i) {
    const Atom& a = f.atoms()[i];
    return a.mass * psi.eval(std::abs(a.value) * scale);
  });
}

// d_f(lambda) = mu(|f| > lambda), strict inequality.
inline double distribution_function(const SimpleFunction& f, double lambda) {
  if (!(lambda >= 0.0)) throw std::invalid_argument("distribution_function: lambda must be >= 0");
  return pairwise_sum(f.size(), [&](std::size_t i) {
    const Atom& a = f.atoms()[i];
    return std::abs(a.value) > lambda ? a.mass : 0.0;
  });
}

struct RearrangementStep {
  double value;  // constant value of f* on (t_prev, t_end]
  double t_end;  // cumulative measure breakpoint
};

struct StepRearrangement {
  std::vector<RearrangementStep> steps;

  // f*(t) for t in (0, total]; value of the step whose (t_prev, t_end]
  // contains t.
  double value_at(double t) const {
    for (const RearrangementStep& s : steps)
      if (t <= s.t_end) return s.value;
    return 0.0;
  }

  // sup{t : f*(t) > lambda} = measure of {|f| > lambda}.
  double measure_above(double lambda) const {
    double t = 0.0;
    for (const RearrangementStep& s : steps) {
      if (s.value > lambda)
        t = s.t_end;
      else
        break;
    }
    return t;
  }

  double total() const { return steps.empty() ? 0.0 : steps.back().t_end; }
};

// Non-increasing rearrangement: |values| sorted descending, equal values
// merged, masses accumulated into cumulative breakpoints ending at 1.
inline StepRearrangement rearrangement(const SimpleFunction& f) {
  struct Entry {
    double value;
    double mass;
    std::int64_t id;
  };
  std::vector<Entry> entries(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    const Atom& a = f.atoms()[i];
    entries[i] = Entry{std::abs(a.value), a.mass, a.point_id};
  }
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    if (a.value != b.value) return a.value > b.value;
    return a.id < b.id;
  });
  StepRearrangement r;
  r.steps.reserve(entries.size());
  double cum = 0.0;
  for (const Entry& e : entries) {
    cum += e.mass;
    if (!r.steps.empty() && r.steps.back().value == e.value)
      r.steps.back().t_end = cum;
    else
      r.steps.push_back(RearrangementStep{e.value, cum});
  }
  return r;
}

// Re-indexes the inputs on their common product space with product masses;
// outputs are mutually independent by construction and pairwise combinable.
inline std::vector<SimpleFunction> product_space(const std::vector<SimpleFunction>& fs,
                                                 std::uint64_t budget = (1ull << 24)) {
  if (fs.empty()) throw std::invalid_argument("product_space: needs at least one input");
  for (std::size_t i = 0; i < fs.size(); ++i)
    for (std::size_t j = i + 1; j < fs.size(); ++j)
      if (fs[i].domain() == fs[j].domain())
        throw incompatible_domains_error("product_space: inputs must live on distinct spaces");

  std::uint64_t total = 1;
  for (const SimpleFunction& f : fs) {
    if (f.size() > budget || total > budget / f.size())
      throw atom_budget_error(total > budget ? total : total * f.size(), budget);
    total *= f.size();
  }

  // strides: last input varies fastest
  std::vector<std::uint64_t> stride(fs.size());
  std::uint64_t s = 1;
  for (std::size_t k = fs.size(); k-- > 0;) {
    stride[k] = s;
    s *= fs[k].size();
  }

  std::vector<double> joint(total);
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    double m = 1.0;
    for (std::size_t k = 0; k < fs.size(); ++k)
      m *= fs[k].atoms()[(idx / stride[k]) % fs[k].size()].mass;
    joint[idx] = m;
  }

  const std::uint64_t dom = fresh_domain_id();
  std::vector<SimpleFunction> out;
  out.reserve(fs.size());
  for (std::size_t k = 0; k < fs.size(); ++k) {
    std::vector<Atom> atoms(total);
    for (std::uint64_t idx = 0; idx < total; ++idx) {
      atoms[idx] = Atom{static_cast<std::int64_t>(idx),
                        fs[k].atoms()[(idx / stride[k]) % fs[k].size()].value, joint[idx]};
    }
    out.push_back(SimpleFunction::on_domain(dom, std::move(atoms)));
  }
  return out;
}

class csv_error : public std::runtime_error {
 public:
  csv_error(const std::string& what, std::size_t line)
      : std::runtime_error("csv line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

inline void write_csv(const SimpleFunction& f, std::ostream& os) {
  os << "point_id,value,mass\n";
  char buf[96];
  for (const Atom& a : f.atoms()) {
    std::snprintf(buf, sizeof buf, "%lld,%.17g,%.17g\n", static_cast<long long>(a.point_id),
                  a.value, a.mass);
    os << buf;
  }
}

// Reads the point_id,value,mass schema; a header row is optional.  Masses are
// validated and normalized exactly as in SimpleFunction::make.
inline SimpleFunction read_csv(std::istream& is) {
  std::vector<Atom> atoms;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (lineno == 1 && line.find("point_id") != std::string::npos) continue;
    std::array<std::string, 3> fields;
    std::size_t start = 0;
    int nf = 0;
    for (; nf < 3; ++nf) {
      const std::size_t comma = line.find(',', start);
      fields[nf] = line.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
      if (comma == std::string::npos) {
        ++nf;
        break;
      }
      start = comma + 1;
    }
    if (nf != 3 || line.find(',', start) != std::string::npos)
      throw csv_error("expected exactly 3 fields (point_id,value,mass)", lineno);
    char* end = nullptr;
    errno = 0;
    const long long id = std::strtoll(fields[0].c_str(), &end, 10);
    if (end == fields[0].c_str() || *end != '\0') throw csv_error("bad point_id '" + fields[0] + "'", lineno);
    const double value = std::strtod(fields[1].c_str(), &end);
    if (end == fields[1].c_str() || *end != '\0' || !std::isfinite(value))
      throw csv_error("bad value '" + fields[1] + "'", lineno);
    const double mass = std::strtod(fields[2].c_str(), &end);
    if (end == fields[2].c_str() || *end != '\0' || !(mass > 0.0) || !std::isfinite(mass))
      throw csv_error("bad mass '" + fields[2] + "' (must be positive)", lineno);
    atoms.push_back(Atom{id, value, mass});
  }
  if (atoms.empty()) throw csv_error("no data rows", lineno == 0 ? 1 : lineno);
  const double total = pairwise_sum(atoms.size(), [&](std::size_t i) { return atoms[i].mass; });
  if (std::abs(total - 1.0) > 1e-9)
    throw csv_error("masses sum to " + std::to_string(total) + ", expected 1 within 1e-9", lineno);
  for (Atom& a : atoms) a.mass /= total;
  return SimpleFunction::on_domain(fresh_domain_id(), std::move(atoms));
}

}  // namespace orlicz
