#include "casimir/dielectric.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "casimir/errors.hpp"
#include "casimir/kramers_kronig.hpp"
#include "casimir/units.hpp"

namespace casimir {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void require_positive(double x, const char* what) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw DomainError(std::string(what) + " must be positive and finite, got " + num(x));
  }
}

}  // namespace

OpticalTable::OpticalTable(std::vector<double> omega, std::vector<double> im_eps,
                           KramersKronigOptions options)
    : omega_(std::move(omega)), im_eps_(std::move(im_eps)), options_(options) {
  if (omega_.size() != im_eps_.size()) throw DomainError("optical table columns differ in length");
  if (omega_.size() < 3) throw DomainError("optical table needs at least 3 rows");
  if (!(options_.rel_tol > 0.0)) throw DomainError("Kramers-Kronig tolerance must be positive");
  for (std::size_t i = 0; i < omega_.size(); ++i) {
    if (!(omega_[i] > 0.0) || !std::isfinite(omega_[i])) {
      throw DomainError("optical table row " + std::to_string(i + 1) + ": omega must be positive");
    }
    if (i > 0 && !(omega_[i] > omega_[i - 1])) {
      throw DomainError("optical table row " + std::to_string(i + 1) +
                        ": omega not strictly increasing");
    }
    if (!(im_eps_[i] >= 0.0) || !std::isfinite(im_eps_[i])) {
      throw DomainError("optical table row " + std::to_string(i + 1) +
                        ": Im eps must be >= 0 (passivity)");
    }
  }
}

OpticalTable OpticalTable::parse(std::istream& in, const std::string& source_name,
                                 KramersKronigOptions options) {
  std::vector<double> omega;
  std::vector<double> im;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    double w = 0.0;
    double e = 0.0;
    if (!(ls >> w)) continue;  // blank
    if (!(ls >> e)) {
      throw DomainError(source_name + ":" + std::to_string(lineno) + ": expected two columns");
    }
    std::string extra;
    if (ls >> extra) {
      throw DomainError(source_name + ":" + std::to_string(lineno) + ": trailing text '" + extra + "'");
    }
    omega.push_back(w);
    im.push_back(e);
  }
  try {
    OpticalTable t(std::move(omega), std::move(im), options);
    t.set_source(source_name);
    return t;
  } catch (const DomainError& e) {
    throw DomainError(source_name + ": " + e.what());
  }
}

OpticalTable OpticalTable::load(const std::string& path, KramersKronigOptions options) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open optical data file '" + path + "'");
  return parse(in, path, options);
}

void validate(const DielectricModel& model) {
  std::visit(Overloaded{
                 [](const Vacuum&) {},
                 [](const PerfectMirror&) {},
                 [](const ConstantEps& m) {
                   if (!(m.eps >= 1.0) || !std::isfinite(m.eps)) {
                     throw DomainError("constant permittivity must be >= 1, got " + num(m.eps));
                   }
                 },
                 [](const Plasma& m) { require_positive(m.omega_p, "plasma frequency"); },
                 [](const Drude& m) {
                   require_positive(m.omega_p, "plasma frequency");
                   if (!(m.gamma >= 0.0) || !std::isfinite(m.gamma)) {
                     throw DomainError("Drude damping must be >= 0, got " + num(m.gamma));
                   }
                 },
                 [](const LorentzOscillators& m) {
                   if (m.lines.empty()) throw DomainError("Lorentz model needs at least one line");
                   for (const auto& l : m.lines) {
                     require_positive(l.omega_0, "Lorentz resonance frequency");
                     require_positive(l.omega_p, "Lorentz oscillator strength");
                     if (!(l.gamma >= 0.0) || !std::isfinite(l.gamma)) {
                       throw DomainError("Lorentz damping must be >= 0");
                     }
                   }
                 },
                 [](const Tabulated& m) {
                   if (!m.table) throw DomainError("tabulated model without data");
                 },
             },
             model);
}

double eval_eps_imag(const DielectricModel& model, double xi) {
  if (!(xi > 0.0) || !std::isfinite(xi)) {
    throw DomainError("imaginary frequency must be positive, got " + num(xi));
  }
  return std::visit(Overloaded{
                        [](const Vacuum&) { return 1.0; },
                        [](const PerfectMirror&) -> double { throw PerfectMirrorError(); },
                        [](const ConstantEps& m) { return m.eps; },
                        [xi](const Plasma& m) { return 1.0 + (m.omega_p / xi) * (m.omega_p / xi); },
                        [xi](const Drude& m) {
                          return 1.0 + m.omega_p * m.omega_p / (xi * (xi + m.gamma));
                        },
                        [xi](const LorentzOscillators& m) {
                          double eps = 1.0;
                          for (const auto& l : m.lines) {
                            eps += l.omega_p * l.omega_p / (l.omega_0 * l.omega_0 + xi * xi + l.gamma * xi);
                          }
                          return eps;
                        },
                        [xi](const Tabulated& m) { return kramers_kronig_to_imag(*m.table, xi).value; },
                    },
                    model);
}

StaticResponse static_response(const DielectricModel& model) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  return std::visit(
      Overloaded{
          [](const Vacuum&) { return StaticResponse{1.0, 0.0}; },
          [](const PerfectMirror&) -> StaticResponse { throw PerfectMirrorError(); },
          [](const ConstantEps& m) { return StaticResponse{m.eps, 0.0}; },
          [](const Plasma& m) {
            const double kp = m.omega_p / kConstants.c;
            return StaticResponse{inf, kp * kp};
          },
          [](const Drude& m) {
            // (eps - 1) xi^2 = omega_p^2 xi / (xi + gamma) -> 0 for any gamma > 0.
            const double kp = m.omega_p / kConstants.c;
            return StaticResponse{inf, m.gamma > 0.0 ? 0.0 : kp * kp};
          },
          [](const LorentzOscillators& m) {
            double eps = 1.0;
            for (const auto& l : m.lines) eps += (l.omega_p / l.omega_0) * (l.omega_p / l.omega_0);
            return StaticResponse{eps, 0.0};
          },
          [](const Tabulated& m) { return StaticResponse{kramers_kronig_static(*m.table), 0.0}; },
      },
      model);
}

bool is_perfect_mirror(const DielectricModel& model) {
  return std::holds_alternative<PerfectMirror>(model);
}

bool is_vacuum(const DielectricModel& model) { return std::holds_alternative<Vacuum>(model); }

std::string describe(const DielectricModel& model) {
  return std::visit(Overloaded{
                        [](const Vacuum&) { return std::string("vacuum"); },
                        [](const PerfectMirror&) { return std::string("perfect"); },
                        [](const ConstantEps& m) { return "const(eps=" + num(m.eps) + ")"; },
                        [](const Plasma& m) { return "plasma(omega_p=" + num(m.omega_p) + ")"; },
                        [](const Drude& m) {
                          return "drude(omega_p=" + num(m.omega_p) + ";gamma=" + num(m.gamma) + ")";
                        },
                        [](const LorentzOscillators& m) {
                          std::string s = "lorentz(";
                          for (std::size_t i = 0; i < m.lines.size(); ++i) {
                            if (i) s += "|";
                            s += "omega_0=" + num(m.lines[i].omega_0) + ";omega_p=" + num(m.lines[i].omega_p) +
                                 ";gamma=" + num(m.lines[i].gamma);
                          }
                          return s + ")";
                        },
                        [](const Tabulated& m) {
                          std::string s = "tabulated(file=" + (m.table ? m.table->source() : std::string());
                          if (m.table) {
                            const KramersKronigOptions& o = m.table->options();
                            const KramersKronigOptions def;
                            if (o.tail != def.tail) s += ";tail=none";
                            if (o.low != def.low) s += ";low=insulating";
                            if (o.rel_tol != def.rel_tol) s += ";rel_tol=" + num(o.rel_tol);
                          }
                          return s + ")";
                        },
                    },
                    model);
}

}  // namespace casimir
