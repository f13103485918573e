#pragma once

#include <istream>
#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace casimir {

/// What to assume for Im eps above the last tabulated frequency.
enum class HighFrequencyTail {
  kPowerLaw3,  // Im eps ~ omega^-3, matched to the last point (Drude-like)
  kNone,       // no absorption beyond the grid
};

/// What to assume for Im eps below the first tabulated frequency.
enum class LowFrequencyExtension {
  kConducting,  // omega * Im eps held at its first value (Im eps ~ 1/omega)
  kInsulating,  // Im eps ~ omega
};

struct KramersKronigOptions {
  HighFrequencyTail tail = HighFrequencyTail::kPowerLaw3;
  LowFrequencyExtension low = LowFrequencyExtension::kConducting;
  /// Relative tolerance on eps(i xi); the grid must be fine enough for the
  /// coarse/fine comparison to meet it.
  double rel_tol = 1e-4;
};

/// Tabulated imaginary part of the permittivity on the real frequency axis.
/// Passivity and ordering are validated on construction.
class OpticalTable {
 public:
  OpticalTable(std::vector<double> omega, std::vector<double> im_eps, KramersKronigOptions options = {});

  /// Two columns "omega_rad_per_s im_eps"; '#' starts a comment.
  static OpticalTable parse(std::istream& in, const std::string& source_name = "<stream>",
                            KramersKronigOptions options = {});
  static OpticalTable load(const std::string& path, KramersKronigOptions options = {});

  const std::vector<double>& omega() const { return omega_; }
  const std::vector<double>& im_eps() const { return im_eps_; }
  const KramersKronigOptions& options() const { return options_; }
  const std::string& source() const { return source_; }
  void set_source(std::string s) { source_ = std::move(s); }

 private:
  std::vector<double> omega_;
  std::vector<double> im_eps_;
  KramersKronigOptions options_;
  std::string source_;
};

struct Vacuum {};
struct ConstantEps {
  double eps;
};
struct Plasma {
  double omega_p;  // rad/s
};
struct Drude {
  double omega_p;  // rad/s
  double gamma;    // rad/s; 0 reduces to Plasma
};
struct LorentzLine {
  double omega_0;
  double omega_p;
  double gamma;
};
struct LorentzOscillators {
  std::vector<LorentzLine> lines;
};
struct PerfectMirror {};
struct Tabulated {
  std::shared_ptr<const OpticalTable> table;
};

using DielectricModel =
    std::variant<Vacuum, ConstantEps, Plasma, Drude, LorentzOscillators, PerfectMirror, Tabulated>;

/// Throws DomainError if the model violates its parameter invariants.
void validate(const DielectricModel& model);

/// eps(i xi) for xi > 0. Throws PerfectMirrorError for PerfectMirror.
double eval_eps_imag(const DielectricModel& model, double xi);

/// Behaviour of eps(i xi) as xi -> 0+, which fixes the zero-frequency
/// reflection coefficients.
struct StaticResponse {
  /// lim eps(i xi); +infinity for conductors.
  double eps0;
  /// lim (eps(i xi) - 1) xi^2 / c^2 in 1/m^2. Nonzero only for a
  /// dissipationless plasma, where it is (omega_p / c)^2.
  double plasma_wavenumber_sq;
};

StaticResponse static_response(const DielectricModel& model);

bool is_perfect_mirror(const DielectricModel& model);
bool is_vacuum(const DielectricModel& model);

/// Canonical text form, e.g. "drude(omega_p=1.37e16;gamma=5.32e13)". The
/// CLI parses this form back.
std::string describe(const DielectricModel& model);

}  // namespace casimir
