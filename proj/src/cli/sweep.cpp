#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <ostream>
#include <thread>

#include "json.hpp"

#include "casimir/cli.hpp"
#include "casimir/errors.hpp"
#include "casimir/lifshitz.hpp"
#include "casimir/units.hpp"

namespace casimir::cli {

namespace {

using Row = std::vector<Cell>;
using Task = std::function<Row()>;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::scientific);
  return std::string(buf, res.ptr);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

double rel_dev(double value, double reference) {
  if (std::isnan(value) || std::isnan(reference) || reference == 0.0) return kNaN;
  return (value - reference) / std::abs(reference);
}

std::string describe_reservoir(const std::vector<toy::BathOscillator>& baths) {
  if (baths.empty()) return "none";
  std::string s;
  for (const auto& b : baths) {
    if (!s.empty()) s += ",";
    s += "bath(omega_rad_s=" + format_double(b.omega_rad_s) + ";coupling_rad_s=" + format_double(b.coupling_rad_s) +
         ")";
  }
  return s;
}

toy::SeparationFamily family_for(const ToySpec& t, double spacing_m) {
  return {t.n_sites, spacing_m, t.boundary, toy::Defect{0, t.omega_m_rad_s, t.g_rad_s, t.reservoir}};
}

modesum::ModeSumResult modesum_point(const SweepSpec& spec, modesum::Geometry geometry, double d) {
  using namespace modesum;
  const bool scalar = geometry == Geometry::kScalar1d;
  ModeSumResult r = scalar ? scalar1d_energy(d, spec.regulator) : em3d_energy_per_area(d, spec.regulator);
  if (spec.subtract_bulk) r = background_subtract(r, scalar ? scalar1d_bulk(d, spec.regulator) : em3d_bulk(d, spec.regulator));
  return r;
}

// E ~ 1/d (scalar) or 1/d^3 (plates): -dE/dd = E/d or 3E/d.
double force_from_finite(modesum::Geometry geometry, double finite, double d) {
  return (geometry == modesum::Geometry::kScalar1d ? 1.0 : 3.0) * finite / d;
}

std::vector<Task> modesum_tasks(const SweepSpec& spec, std::vector<std::string>& columns) {
  columns = {"route", "d_m", "geometry", "regulator", "finite_energy", "force", "div_xi_m1", "div_xi_m2",
             "div_xi_m3", "div_xi_m4", "err_est"};
  std::vector<Task> tasks;
  for (double d : spec.gaps_m) {
    tasks.push_back([&spec, d] {
      const modesum::ModeSumResult r = modesum_point(spec, spec.geometry, d);
      Row row{std::string("modesum"), d, modesum::to_string(spec.geometry), modesum::describe(spec.regulator),
              r.finite_part, force_from_finite(spec.geometry, r.finite_part, d)};
      for (int p = 1; p <= 4; ++p) {
        const auto it = r.divergences.find(p);
        row.emplace_back(it == r.divergences.end() ? 0.0 : it->second);
      }
      row.emplace_back(r.ladder.finite_part_rel_error);
      return row;
    });
  }
  return tasks;
}

template <class Fn>
void for_each_cavity(const SweepSpec& spec, Fn fn) {
  for (double d : spec.gaps_m) {
    for (double t : spec.temperatures_K) {
      for (const ModelChoice& l : spec.left) {
        for (const ModelChoice& r : spec.right) fn(d, t, l, r);
      }
    }
  }
}

std::vector<Task> lifshitz_tasks(const SweepSpec& spec, std::vector<std::string>& columns) {
  columns = {"route", "d_m", "T_K", "model_left", "model_right", "pressure_Pa", "energy_Jm2", "err_est",
             "matsubara_n_used"};
  std::vector<Task> tasks;
  for_each_cavity(spec, [&](double d, double t, const ModelChoice& l, const ModelChoice& r) {
    tasks.push_back([&spec, d, t, &l, &r] {
      const lifshitz::PlanarCavity cavity{l.model, r.model, d, t};
      const lifshitz::LifshitzResult res = lifshitz::evaluate(cavity, spec.tolerance);
      return Row{std::string("lifshitz"), d, t, l.text, r.text, res.pressure_Pa, res.energy_per_area_Jm2,
                 res.quadrature.rel_error_estimate, static_cast<std::int64_t>(res.quadrature.matsubara_terms)};
    });
  });
  return tasks;
}

std::vector<Task> toy_tasks(const SweepSpec& spec, std::vector<std::string>& columns) {
  columns = {"route", "n_sites", "spacing_m", "boundary", "omega_m_rad_s", "g_rad_s", "reservoir", "d_sites", "d_m",
             "energy_d_J", "energy_d_plus_1_J", "force_N"};
  std::vector<Task> tasks;
  const ToySpec& t = *spec.toy;
  for (std::size_t sep : t.separations) {
    tasks.push_back([&t, sep] {
      const double a = *t.spacing_m;
      const toy::ToyForce f = toy::casimir_force_toy(family_for(t, a), sep);
      return Row{std::string("toy"),
                 static_cast<std::int64_t>(t.n_sites),
                 a,
                 std::string(t.boundary == toy::Boundary::kPinned ? "pinned" : "periodic"),
                 t.omega_m_rad_s,
                 t.g_rad_s,
                 describe_reservoir(t.reservoir),
                 static_cast<std::int64_t>(sep),
                 static_cast<double>(sep) * a,
                 f.energy_d_J,
                 f.energy_d_plus_1_J,
                 f.force_N};
    });
  }
  return tasks;
}

std::vector<Task> compare_tasks(const SweepSpec& spec, std::vector<std::string>& columns) {
  columns = {"route",
             "d_m",
             "T_K",
             "model_left",
             "model_right",
             "modesum_pressure_Pa",
             "lifshitz_pressure_Pa",
             "rel_dev_lifshitz_modesum",
             "scalar1d_force_N",
             "toy_force_N",
             "rel_dev_toy_scalar1d",
             "err_est"};
  std::vector<Task> tasks;
  for_each_cavity(spec, [&](double d, double t, const ModelChoice& l, const ModelChoice& r) {
    tasks.push_back([&spec, d, t, &l, &r] {
      const modesum::ModeSumResult ms = modesum_point(spec, modesum::Geometry::kEm3d, d);
      const double p_ms = force_from_finite(modesum::Geometry::kEm3d, ms.finite_part, d);
      const lifshitz::LifshitzResult lif = lifshitz::pressure({l.model, r.model, d, t}, spec.tolerance);

      double scalar = modesum::scalar1d_force(d);
      double toy_force = kNaN;
      if (spec.toy) {
        const ToySpec& ts = *spec.toy;
        const std::size_t sites = *ts.sites_per_gap;
        const double a = d / static_cast<double>(sites);
        toy_force = toy::casimir_force_toy(family_for(ts, a), sites).force_N;
        // Same finite difference as the toy: -[E(d + a) - E(d)] / a.
        scalar = -std::numbers::pi * kConstants.hbar_c() / (24.0 * d * (d + a));
      }
      const double err = std::max(lif.quadrature.rel_error_estimate, ms.ladder.finite_part_rel_error);
      return Row{std::string("compare"), d, t, l.text, r.text, p_ms, lif.pressure_Pa, rel_dev(lif.pressure_Pa, p_ms),
                 scalar, toy_force, rel_dev(toy_force, scalar), err};
    });
  });
  return tasks;
}

}  // namespace

Table run(const SweepSpec& spec) {
  Table table;
  std::vector<Task> tasks;
  switch (spec.route) {
    case Route::kModesum:
      tasks = modesum_tasks(spec, table.columns);
      break;
    case Route::kLifshitz:
      tasks = lifshitz_tasks(spec, table.columns);
      break;
    case Route::kToy:
      if (!spec.toy) throw ConfigError("toy route needs a [toy] section");
      tasks = toy_tasks(spec, table.columns);
      break;
    case Route::kCompare:
      tasks = compare_tasks(spec, table.columns);
      break;
  }
  if (tasks.empty()) throw ConfigError("empty parameter grid");

  std::vector<Row> rows(tasks.size());
  std::vector<std::exception_ptr> errors(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      try {
        rows[i] = tasks[i]();
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned n_threads = std::max(1u, std::min<unsigned>(spec.threads, static_cast<unsigned>(tasks.size())));
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < n_threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  table.rows = std::move(rows);
  return table;
}

void write_csv(const Table& table, std::ostream& out) {
  for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << table.columns[i];
  out << '\n';
  for (const Row& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      std::visit(
          [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::string>) {
              out << csv_field(v);
            } else if constexpr (std::is_same_v<T, double>) {
              out << format_double(v);
            } else {
              out << v;
            }
          },
          row[i]);
    }
    out << '\n';
  }
}

void write_json(const Table& table, Route route, std::ostream& out) {
  nlohmann::ordered_json doc;
  doc["route"] = to_string(route);
  doc["columns"] = table.columns;
  auto rows = nlohmann::ordered_json::array();
  for (const Row& row : table.rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size(); ++i) {
      std::visit(
          [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) {
              if (std::isnan(v)) {
                obj[table.columns[i]] = nullptr;
              } else {
                obj[table.columns[i]] = v;
              }
            } else {
              obj[table.columns[i]] = v;
            }
          },
          row[i]);
    }
    rows.push_back(std::move(obj));
  }
  doc["rows"] = std::move(rows);
  out << doc.dump(2) << '\n';
}

int exit_code(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const DomainError*>(&e)) return 2;
  if (dynamic_cast<const ConvergenceError*>(&e)) return 3;
  if (dynamic_cast<const ModelInstabilityError*>(&e)) return 4;
  return 1;
}

}  // namespace casimir::cli
