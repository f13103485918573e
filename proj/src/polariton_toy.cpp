#include "casimir/polariton_toy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <string>

#include "casimir/errors.hpp"
#include "casimir/numerics.hpp"
#include "casimir/units.hpp"

namespace casimir::toy {

namespace {

std::size_t dimension(const LatticeModel& model) {
  std::size_t n = model.n_sites;
  for (const Defect& def : model.defects) n += 1 + def.reservoir.size();
  return n;
}

std::string defect_name(const LatticeModel& model, std::size_t i) {
  return "defect " + std::to_string(i) + " at site " + std::to_string(model.defects[i].site);
}

// K in units of (c/a)^2.
Eigen::MatrixXd assemble_natural(const LatticeModel& model) {
  const std::size_t n = model.n_sites;
  const double freq = kConstants.c / model.spacing_m;
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(dimension(model), dimension(model));
  for (std::size_t i = 0; i < n; ++i) {
    k(i, i) = 2.0;
    if (i + 1 < n) k(i, i + 1) = k(i + 1, i) = -1.0;
  }
  if (model.boundary == Boundary::kPeriodic) k(0, n - 1) = k(n - 1, 0) = -1.0;

  std::size_t next = n;
  for (const Defect& def : model.defects) {
    const std::size_t s = def.site;
    const std::size_t q = next++;
    const double g = def.g_rad_s / freq;
    const double wm = def.omega_m_rad_s / freq;
    k(s, s) += g;
    k(s, q) = k(q, s) = -g;
    k(q, q) = wm * wm;
    for (const BathOscillator& bath : def.reservoir) {
      const std::size_t b = next++;
      const double kappa = bath.coupling_rad_s / freq;
      const double wb = bath.omega_rad_s / freq;
      k(q, b) = k(b, q) = -kappa;
      k(b, b) = wb * wb;
    }
  }
  return k;
}

// Connected components of the coupling graph, each sorted.
std::vector<std::vector<std::size_t>> components(const Eigen::MatrixXd& k) {
  const std::size_t n = static_cast<std::size_t>(k.rows());
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (k(i, j) != 0.0) parent[find(i)] = find(j);
    }
  }
  std::vector<std::vector<std::size_t>> groups(n);
  for (std::size_t i = 0; i < n; ++i) groups[find(i)].push_back(i);
  std::vector<std::vector<std::size_t>> out;
  for (auto& g : groups) {
    if (!g.empty()) out.push_back(std::move(g));
  }
  return out;
}

// Eigenvalues of K (natural units), ascending; empty if not positive definite.
std::vector<double> spectrum_natural(const Eigen::MatrixXd& k) {
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(k.rows()));
  for (const auto& comp : components(k)) {
    const Eigen::Index m = static_cast<Eigen::Index>(comp.size());
    Eigen::MatrixXd block(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
      for (Eigen::Index j = 0; j < m; ++j) block(i, j) = k(comp[i], comp[j]);
    }
    if (block.llt().info() != Eigen::Success) return {};
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(block, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw ConvergenceError("eigen-solver failed", 0.0, 0.0);
    const double top = std::max(std::abs(solver.eigenvalues().maxCoeff()), 1.0);
    for (Eigen::Index i = 0; i < m; ++i) {
      const double lambda = solver.eigenvalues()(i);
      if (!(lambda > 64.0 * std::numeric_limits<double>::epsilon() * top)) return {};
      values.push_back(lambda);
    }
  }
  std::sort(values.begin(), values.end());
  return values;
}

[[noreturn]] void report_instability(const LatticeModel& model) {
  for (std::size_t i = 0; i < model.defects.size(); ++i) {
    LatticeModel alone = model;
    alone.defects = {model.defects[i]};
    if (spectrum_natural(assemble_natural(alone)).empty()) {
      const std::string who = defect_name(model, i);
      throw ModelInstabilityError("quadratic form is not positive definite: " + who + " is over-coupled", who);
    }
  }
  if (model.defects.empty()) {
    throw ModelInstabilityError("quadratic form is not positive definite: free field has a zero mode", "field");
  }
  throw ModelInstabilityError("quadratic form is not positive definite: defects are jointly over-coupled",
                              "all defects");
}

void append(std::string& s, double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g;", x);
  s += buf;
}

}  // namespace

void validate(const LatticeModel& model) {
  if (model.n_sites == 0) throw DomainError("lattice needs at least one site");
  if (model.boundary == Boundary::kPeriodic && model.n_sites < 3) {
    throw DomainError("periodic lattice needs at least three sites");
  }
  if (!(model.spacing_m > 0.0) || !std::isfinite(model.spacing_m)) {
    throw DomainError("lattice spacing must be positive");
  }
  std::vector<std::size_t> sites;
  for (std::size_t i = 0; i < model.defects.size(); ++i) {
    const Defect& def = model.defects[i];
    const std::string who = defect_name(model, i);
    if (def.site >= model.n_sites) throw DomainError(who + " is out of range");
    if (!(def.omega_m_rad_s >= 0.0) || !std::isfinite(def.omega_m_rad_s)) {
      throw DomainError(who + ": matter frequency must be >= 0");
    }
    if (!(def.g_rad_s >= 0.0) || !std::isfinite(def.g_rad_s)) throw DomainError(who + ": coupling must be >= 0");
    for (const BathOscillator& bath : def.reservoir) {
      if (!(bath.omega_rad_s >= 0.0) || !std::isfinite(bath.omega_rad_s) || !(bath.coupling_rad_s >= 0.0) ||
          !std::isfinite(bath.coupling_rad_s)) {
        throw DomainError(who + ": bath frequencies and couplings must be >= 0");
      }
    }
    sites.push_back(def.site);
  }
  std::sort(sites.begin(), sites.end());
  if (std::adjacent_find(sites.begin(), sites.end()) != sites.end()) {
    throw DomainError("defect sites must be distinct");
  }
}

Eigen::MatrixXd build_quadratic_form(const LatticeModel& model) {
  validate(model);
  const Eigen::MatrixXd k = assemble_natural(model);
  if (spectrum_natural(k).empty()) report_instability(model);
  const double freq = kConstants.c / model.spacing_m;
  return k * (freq * freq);
}

std::uint64_t model_hash(const LatticeModel& model) {
  std::string s;
  append(s, static_cast<double>(model.n_sites));
  append(s, model.spacing_m);
  s += model.boundary == Boundary::kPinned ? "pinned;" : "periodic;";
  for (const Defect& def : model.defects) {
    append(s, static_cast<double>(def.site));
    append(s, def.omega_m_rad_s);
    append(s, def.g_rad_s);
    for (const BathOscillator& bath : def.reservoir) {
      s += "b";
      append(s, bath.omega_rad_s);
      append(s, bath.coupling_rad_s);
    }
    s += "|";
  }
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

SpectrumResult ground_energy(const LatticeModel& model) {
  validate(model);
  const std::vector<double> lambda = spectrum_natural(assemble_natural(model));
  if (lambda.empty()) report_instability(model);
  const double freq = kConstants.c / model.spacing_m;
  SpectrumResult res{{}, 0.0, model_hash(model)};
  res.eigenfrequencies.reserve(lambda.size());
  NeumaierSum sum;
  for (double l : lambda) {
    const double w = std::sqrt(l);
    sum.add(w);
    res.eigenfrequencies.push_back(w * freq);
  }
  res.ground_energy_J = 0.5 * kConstants.hbar * freq * sum.value();
  return res;
}

LatticeModel at_separation(const SeparationFamily& family, std::size_t d) {
  if (d == 0) throw DomainError("defect separation must be at least one site");
  if (d >= family.n_sites) throw DomainError("defect separation exceeds the lattice");
  const std::size_t left = (family.n_sites - d) / 2;
  Defect a = family.defect;
  Defect b = family.defect;
  a.site = left;
  b.site = left + d;
  return {family.n_sites, family.spacing_m, family.boundary, {a, b}};
}

ToyForce casimir_force_toy(const SeparationFamily& family, std::size_t d) {
  if (d == 0) throw DomainError("defect separation must be at least one site");
  const std::size_t left = family.n_sites > d ? (family.n_sites - d) / 2 : 0;
  if (family.n_sites < d + 2 || left < d || family.n_sites - 1 - (left + d + 1) < d) {
    throw DomainError("padding violation: separation " + std::to_string(d) + " needs at least " +
                      std::to_string(d) + " free sites beyond each defect");
  }
  const LatticeModel near = at_separation(family, d);
  LatticeModel far = near;
  far.defects[1].site += 1;
  const double e0 = ground_energy(near).ground_energy_J;
  const double e1 = ground_energy(far).ground_energy_J;
  return {d, e0, e1, e1 - e0, -(e1 - e0) / family.spacing_m};
}

ScalingFit scaling_exponent(std::span<const std::pair<double, double>> forces) {
  if (forces.size() < 5) throw DomainError("scaling fit needs at least 5 points");
  const bool negative = forces.front().second < 0.0;
  std::vector<double> x;
  std::vector<double> y;
  for (const auto& [d, f] : forces) {
    if (!(d > 0.0) || !std::isfinite(d)) throw DomainError("scaling fit needs positive separations");
    if (f == 0.0 || !std::isfinite(f) || (f < 0.0) != negative) {
      throw DomainError("scaling fit needs forces of one sign");
    }
    x.push_back(std::log(d));
    y.push_back(std::log(std::abs(f)));
  }
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 1e-12 * n)) throw DomainError("scaling fit: separations have degenerate spread");
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (intercept + slope * x[i]);
    ss += r * r;
  }
  const double sign = negative ? -1.0 : 1.0;
  return {-slope, sign * std::exp(intercept), std::sqrt(ss / n), x.size()};
}

}  // namespace casimir::toy
