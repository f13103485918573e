#pragma once

#include <cstdint>
#include <exception>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "casimir/dielectric.hpp"
#include "casimir/modesum.hpp"
#include "casimir/polariton_toy.hpp"

namespace casimir::cli {

/// 1-based; line 0 marks a command-line override or a missing key.
struct Position {
  int line = 0;
  int column = 0;
};

struct Diagnostic {
  Position pos;
  std::string key;  // "section.key", or empty for syntax errors
  std::string message;
};

std::string format_diagnostic(const Diagnostic& d, const std::string& source);

struct Entry {
  std::string value;
  Position key_pos;
  Position value_pos;
};

/// Sectioned key = value text.
///
///   # comment
///   [geometry]
///   gap_m = range(1e-7, 1e-5, 5, log)
///
/// Syntax errors are appended to `diagnostics`; parsing continues.
class Config {
 public:
  static Config parse(std::string_view text, std::string source, std::filesystem::path base_dir,
                      std::vector<Diagnostic>& diagnostics);
  static Config load(const std::filesystem::path& path, std::vector<Diagnostic>& diagnostics);

  /// "section.key=value"; replaces or adds an entry.
  void set_override(std::string_view assignment);
  void set(const std::string& section, const std::string& key, std::string value);

  const Entry* find(const std::string& section, const std::string& key) const;
  const std::map<std::string, std::map<std::string, Entry>>& sections() const { return sections_; }
  const std::string& source() const { return source_; }
  const std::filesystem::path& base_dir() const { return base_dir_; }

 private:
  std::map<std::string, std::map<std::string, Entry>> sections_;
  std::string source_;
  std::filesystem::path base_dir_;
};

enum class Route { kModesum, kLifshitz, kToy, kCompare };
enum class Format { kCsv, kJson };

std::optional<Route> parse_route(std::string_view s);
std::string to_string(Route r);

/// Numeric grid: "1e-6, 2e-6" or "range(start, stop, count, lin|log)".
std::vector<double> parse_grid(std::string_view text);

/// Model strings as produced by describe(); relative data paths resolve
/// against base_dir.
DielectricModel parse_model(std::string_view text, const std::filesystem::path& base_dir);

/// "modesum regulator" strings: zeta, expcutoff(xi_m=...), euler_maclaurin(order=...).
modesum::Regulator parse_regulator(std::string_view text);

struct ToySpec {
  std::size_t n_sites = 0;
  std::optional<double> spacing_m;
  std::optional<std::size_t> sites_per_gap;
  double omega_m_rad_s = 0.0;
  double g_rad_s = 0.0;
  std::vector<toy::BathOscillator> reservoir;
  std::vector<std::size_t> separations;
  toy::Boundary boundary = toy::Boundary::kPinned;
};

struct ModelChoice {
  std::string text;  // canonical
  DielectricModel model;
};

struct SweepSpec {
  Route route = Route::kLifshitz;
  double tolerance = 1e-6;
  std::optional<std::string> output;
  Format format = Format::kCsv;
  unsigned threads = 1;
  std::vector<double> gaps_m;
  std::vector<double> temperatures_K{0.0};
  std::vector<ModelChoice> left;
  std::vector<ModelChoice> right;
  modesum::Geometry geometry = modesum::Geometry::kEm3d;
  modesum::Regulator regulator = modesum::ZetaAbel{};
  /// Report divergences after removing the free-space background.
  bool subtract_bulk = true;
  std::optional<ToySpec> toy;
};

struct Analysis {
  std::optional<SweepSpec> spec;  // set iff diagnostics is empty
  std::vector<Diagnostic> diagnostics;
};

/// Checks everything run() needs, collecting every violation. `route`
/// overrides [run] route.
Analysis analyze(const Config& config, std::optional<Route> route = std::nullopt);

using Cell = std::variant<std::string, double, std::int64_t>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

/// Evaluates every grid point on spec.threads workers. Rows come out in
/// grid order. The first failing point (in grid order) is rethrown.
Table run(const SweepSpec& spec);

/// Doubles in shortest round-trip scientific form; CSV fields quoted only
/// when needed.
void write_csv(const Table& table, std::ostream& out);
void write_json(const Table& table, Route route, std::ostream& out);

/// 2 config/domain, 3 convergence, 4 model instability, 1 anything else.
int exit_code(const std::exception& e);

}  // namespace casimir::cli
