#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "casimir/cli.hpp"
#include "casimir/errors.hpp"

namespace casimir::cli {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

double parse_number(std::string_view text) {
  const std::string_view t = trim(text);
  double v = 0.0;
  const char* first = t.data();
  const char* last = t.data() + t.size();
  if (!t.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (t.empty() || ec != std::errc() || ptr != last || !std::isfinite(v)) {
    throw ConfigError("not a finite number: '" + std::string(t) + "'");
  }
  return v;
}

std::size_t parse_count(std::string_view text) {
  const double v = parse_number(text);
  if (!(v >= 0.0) || v != std::floor(v) || v > 1e15) {
    throw ConfigError("not a non-negative integer: '" + std::string(trim(text)) + "'");
  }
  return static_cast<std::size_t>(v);
}

// Splits on `sep` outside parentheses.
std::vector<std::string_view> split_top(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '(') ++depth;
    if (s[i] == ')') --depth;
    if (s[i] == sep && depth == 0) {
      out.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  out.push_back(trim(s.substr(start)));
  return out;
}

// name(arg1;arg2) -> name, "arg1;arg2". Bare names have empty args.
std::pair<std::string, std::string_view> call_form(std::string_view text) {
  const std::string_view t = trim(text);
  const std::size_t open = t.find('(');
  if (open == std::string_view::npos) return {lower(t), {}};
  if (t.back() != ')') throw ConfigError("missing ')' in '" + std::string(t) + "'");
  return {lower(trim(t.substr(0, open))), t.substr(open + 1, t.size() - open - 2)};
}

// "a=1;b=2" or "a=1,b=2".
std::map<std::string, std::string> key_values(std::string_view args, const std::set<std::string>& allowed,
                                              const std::string& context) {
  std::map<std::string, std::string> out;
  std::string norm(args);
  std::replace(norm.begin(), norm.end(), ',', ';');
  for (std::string_view part : split_top(norm, ';')) {
    if (part.empty()) continue;
    const std::size_t eq = part.find('=');
    if (eq == std::string_view::npos) throw ConfigError(context + ": expected key=value, got '" + std::string(part) + "'");
    const std::string key = lower(trim(part.substr(0, eq)));
    if (!allowed.count(key)) throw ConfigError(context + ": unknown parameter '" + key + "'");
    if (out.count(key)) throw ConfigError(context + ": duplicate parameter '" + key + "'");
    out[key] = std::string(trim(part.substr(eq + 1)));
  }
  return out;
}

double required(const std::map<std::string, std::string>& kv, const std::string& key, const std::string& context) {
  const auto it = kv.find(key);
  if (it == kv.end()) throw ConfigError(context + ": missing parameter '" + key + "'");
  return parse_number(it->second);
}

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys{
      {"run", {"route", "tolerance", "output", "format", "threads"}},
      {"geometry", {"gap_m", "temperature_K"}},
      {"models", {"left", "right"}},
      {"modesum", {"geometry", "regulator", "subtract_bulk"}},
      {"toy",
       {"n_sites", "spacing_m", "sites_per_gap", "omega_m_rad_s", "g_rad_s", "reservoir", "separations_sites",
        "boundary"}},
  };
  return keys;
}

std::vector<toy::BathOscillator> parse_reservoir(std::string_view text) {
  std::vector<toy::BathOscillator> out;
  if (trim(text).empty() || lower(trim(text)) == "none") return out;
  for (std::string_view item : split_top(text, ',')) {
    const auto [name, args] = call_form(item);
    if (name != "bath") throw ConfigError("reservoir entries look like bath(omega_rad_s=..;coupling_rad_s=..)");
    const auto kv = key_values(args, {"omega_rad_s", "coupling_rad_s"}, "bath");
    out.push_back({required(kv, "omega_rad_s", "bath"), required(kv, "coupling_rad_s", "bath")});
  }
  return out;
}

}  // namespace

std::string format_diagnostic(const Diagnostic& d, const std::string& source) {
  std::ostringstream os;
  if (d.pos.line > 0) {
    os << source << ':' << d.pos.line << ':' << d.pos.column << ": ";
  } else {
    os << source << ": ";
  }
  if (!d.key.empty()) os << d.key << ": ";
  os << d.message;
  return os.str();
}

Config Config::parse(std::string_view text, std::string source, std::filesystem::path base_dir,
                     std::vector<Diagnostic>& diagnostics) {
  Config cfg;
  cfg.source_ = std::move(source);
  cfg.base_dir_ = std::move(base_dir);
  std::string section;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    // Comments: '#' at line start or after whitespace.
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '#' && (i == 0 || std::isspace(static_cast<unsigned char>(line[i - 1])))) {
        line = line.substr(0, i);
        break;
      }
    }
    const std::string_view body = trim(line);
    if (body.empty()) continue;
    const int indent = static_cast<int>(line.find_first_not_of(" \t")) + 1;
    if (body.front() == '[') {
      if (body.back() != ']') {
        diagnostics.push_back({{line_no, indent}, "", "unterminated section header"});
        continue;
      }
      section = std::string(trim(body.substr(1, body.size() - 2)));
      if (!known_keys().count(section)) {
        diagnostics.push_back({{line_no, indent + 1}, section, "unknown section"});
      }
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      diagnostics.push_back({{line_no, indent}, "", "expected 'key = value'"});
      continue;
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view raw_value = line.substr(eq + 1);
    const std::size_t lead = raw_value.find_first_not_of(" \t");
    const int value_col = static_cast<int>(eq + 2 + (lead == std::string_view::npos ? 0 : lead));
    if (section.empty()) {
      diagnostics.push_back({{line_no, indent}, key, "key outside any section"});
      continue;
    }
    const std::string dotted = section + "." + key;
    if (key.empty()) {
      diagnostics.push_back({{line_no, indent}, "", "empty key"});
      continue;
    }
    const auto known = known_keys().find(section);
    if (known != known_keys().end() && !known->second.count(key)) {
      diagnostics.push_back({{line_no, indent}, dotted, "unknown key"});
      continue;
    }
    auto& sec = cfg.sections_[section];
    if (sec.count(key)) {
      diagnostics.push_back({{line_no, indent}, dotted, "duplicate key (first set on line " +
                                                            std::to_string(sec[key].key_pos.line) + ")"});
      continue;
    }
    sec[key] = Entry{std::string(trim(raw_value)), {line_no, indent}, {line_no, value_col}};
  }
  return cfg;
}

Config Config::load(const std::filesystem::path& path, std::vector<Diagnostic>& diagnostics) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), path.string(), path.parent_path(), diagnostics);
}

void Config::set_override(std::string_view assignment) {
  const std::size_t eq = assignment.find('=');
  const std::size_t dot = assignment.find('.');
  if (eq == std::string_view::npos || dot == std::string_view::npos || dot > eq) {
    throw ConfigError("override must look like section.key=value: '" + std::string(assignment) + "'");
  }
  const std::string section(trim(assignment.substr(0, dot)));
  const std::string key(trim(assignment.substr(dot + 1, eq - dot - 1)));
  const auto known = known_keys().find(section);
  if (known == known_keys().end() || !known->second.count(key)) {
    throw ConfigError("override of unknown key '" + section + "." + key + "'");
  }
  set(section, key, std::string(trim(assignment.substr(eq + 1))));
}

void Config::set(const std::string& section, const std::string& key, std::string value) {
  sections_[section][key] = Entry{std::move(value), {}, {}};
}

const Entry* Config::find(const std::string& section, const std::string& key) const {
  const auto s = sections_.find(section);
  if (s == sections_.end()) return nullptr;
  const auto k = s->second.find(key);
  return k == s->second.end() ? nullptr : &k->second;
}

std::optional<Route> parse_route(std::string_view s) {
  const std::string r = lower(trim(s));
  if (r == "modesum") return Route::kModesum;
  if (r == "lifshitz") return Route::kLifshitz;
  if (r == "toy") return Route::kToy;
  if (r == "compare") return Route::kCompare;
  return std::nullopt;
}

std::string to_string(Route r) {
  switch (r) {
    case Route::kModesum:
      return "modesum";
    case Route::kLifshitz:
      return "lifshitz";
    case Route::kToy:
      return "toy";
    case Route::kCompare:
      return "compare";
  }
  return "?";
}

std::vector<double> parse_grid(std::string_view text) {
  const std::string_view t = trim(text);
  if (t.empty()) throw ConfigError("empty grid");
  const auto [name, args] = call_form(t);
  if (name == "range") {
    const auto parts = split_top(args, ',');
    if (parts.size() != 4) throw ConfigError("range needs (start, stop, count, lin|log)");
    const double a = parse_number(parts[0]);
    const double b = parse_number(parts[1]);
    const std::size_t n = parse_count(parts[2]);
    const std::string kind = lower(parts[3]);
    if (n == 0) throw ConfigError("empty grid: range count is 0");
    if (kind != "lin" && kind != "log") throw ConfigError("range spacing must be lin or log");
    if (kind == "log" && !(a > 0.0 && b > 0.0)) throw ConfigError("log range needs positive endpoints");
    std::vector<double> out;
    for (std::size_t i = 0; i < n; ++i) {
      const double f = n == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1);
      if (i + 1 == n && n > 1) {
        out.push_back(b);
      } else if (kind == "lin") {
        out.push_back(a + f * (b - a));
      } else {
        out.push_back(a * std::pow(b / a, f));
      }
    }
    return out;
  }
  std::vector<double> out;
  for (std::string_view item : split_top(t, ',')) {
    if (item.empty()) throw ConfigError("empty grid entry");
    out.push_back(parse_number(item));
  }
  return out;
}

DielectricModel parse_model(std::string_view text, const std::filesystem::path& base_dir) {
  const auto [name, args] = call_form(text);
  const std::string ctx = name;
  if (name == "vacuum" || name == "perfect") {
    if (!trim(args).empty()) throw ConfigError(name + " takes no parameters");
    if (name == "vacuum") return Vacuum{};
    return PerfectMirror{};
  }
  if (name == "const") {
    const auto kv = key_values(args, {"eps"}, ctx);
    return ConstantEps{required(kv, "eps", ctx)};
  }
  if (name == "plasma") {
    const auto kv = key_values(args, {"omega_p"}, ctx);
    return Plasma{required(kv, "omega_p", ctx)};
  }
  if (name == "drude") {
    const auto kv = key_values(args, {"omega_p", "gamma"}, ctx);
    return Drude{required(kv, "omega_p", ctx), required(kv, "gamma", ctx)};
  }
  if (name == "lorentz") {
    LorentzOscillators m;
    for (std::string_view line : split_top(args, '|')) {
      const auto kv = key_values(line, {"omega_0", "omega_p", "gamma"}, ctx);
      m.lines.push_back({required(kv, "omega_0", ctx), required(kv, "omega_p", ctx), required(kv, "gamma", ctx)});
    }
    return m;
  }
  if (name == "tabulated") {
    // Paths may contain ',' so only ';' separates parameters here.
    std::map<std::string, std::string> kv;
    for (std::string_view part : split_top(args, ';')) {
      if (part.empty()) continue;
      const std::size_t eq = part.find('=');
      const std::string key = eq == std::string_view::npos ? "" : lower(trim(part.substr(0, eq)));
      if (key != "file" && key != "tail" && key != "low" && key != "rel_tol") {
        throw ConfigError("tabulated: expected file=, tail=, low= or rel_tol=, got '" + std::string(part) + "'");
      }
      kv[key] = std::string(trim(part.substr(eq + 1)));
    }
    if (!kv.count("file")) throw ConfigError("tabulated: missing parameter 'file'");
    KramersKronigOptions opts;
    if (kv.count("tail")) {
      const std::string v = lower(kv["tail"]);
      if (v == "power3") {
        opts.tail = HighFrequencyTail::kPowerLaw3;
      } else if (v == "none") {
        opts.tail = HighFrequencyTail::kNone;
      } else {
        throw ConfigError("tabulated: tail must be power3 or none");
      }
    }
    if (kv.count("low")) {
      const std::string v = lower(kv["low"]);
      if (v == "conducting") {
        opts.low = LowFrequencyExtension::kConducting;
      } else if (v == "insulating") {
        opts.low = LowFrequencyExtension::kInsulating;
      } else {
        throw ConfigError("tabulated: low must be conducting or insulating");
      }
    }
    if (kv.count("rel_tol")) opts.rel_tol = parse_number(kv["rel_tol"]);
    std::filesystem::path file(kv["file"]);
    if (file.is_relative()) file = base_dir / file;
    if (!std::filesystem::is_regular_file(file)) throw ConfigError("data file not found: " + file.string());
    auto table = std::make_shared<OpticalTable>(OpticalTable::load(file.string(), opts));
    return Tabulated{std::move(table)};
  }
  throw ConfigError("unknown model '" + name + "'");
}

modesum::Regulator parse_regulator(std::string_view text) {
  const auto [name, args] = call_form(text);
  if (name == "zeta") {
    if (!trim(args).empty()) throw ConfigError("zeta takes no parameters");
    return modesum::ZetaAbel{};
  }
  if (name == "expcutoff") {
    const auto kv = key_values(args, {"xi_m"}, name);
    return modesum::ExpCutoff{required(kv, "xi_m", name)};
  }
  if (name == "euler_maclaurin") {
    const auto kv = key_values(args, {"order"}, name);
    return modesum::EulerMaclaurin{static_cast<int>(parse_count(kv.count("order") ? kv.at("order") : "4"))};
  }
  throw ConfigError("unknown regulator '" + name + "' (zeta, expcutoff(xi_m=..), euler_maclaurin(order=..))");
}

Analysis analyze(const Config& config, std::optional<Route> route_override) {
  Analysis out;
  SweepSpec spec;
  auto& diags = out.diagnostics;

  // Runs `fn` on the entry's value when present; errors become diagnostics.
  auto with = [&](const std::string& section, const std::string& key, auto fn) {
    const Entry* e = config.find(section, key);
    if (!e) return false;
    try {
      fn(e->value);
      return true;
    } catch (const Error& err) {
      diags.push_back({e->value_pos, section + "." + key, err.what()});
    } catch (const std::exception& err) {
      diags.push_back({e->value_pos, section + "." + key, err.what()});
    }
    return false;
  };

  std::optional<Route> route = route_override;
  if (!route) {
    if (!with("run", "route", [&](const std::string& v) {
          route = parse_route(v);
          if (!route) throw ConfigError("route must be modesum, lifshitz, toy or compare");
        }) &&
        !config.find("run", "route")) {
      diags.push_back({{}, "run.route", "missing (modesum, lifshitz, toy or compare)"});
    }
  }
  if (route) spec.route = *route;

  with("run", "tolerance", [&](const std::string& v) {
    spec.tolerance = parse_number(v);
    if (!(spec.tolerance > 0.0 && spec.tolerance < 1.0)) throw ConfigError("tolerance must lie in (0, 1)");
  });
  with("run", "output", [&](const std::string& v) {
    if (v.empty()) throw ConfigError("output path is empty");
    spec.output = v;
  });
  with("run", "format", [&](const std::string& v) {
    const std::string f = lower(v);
    if (f == "csv") {
      spec.format = Format::kCsv;
    } else if (f == "json") {
      spec.format = Format::kJson;
    } else {
      throw ConfigError("format must be csv or json");
    }
  });
  with("run", "threads", [&](const std::string& v) {
    const std::size_t n = parse_count(v);
    if (n == 0 || n > 1024) throw ConfigError("threads must be in [1, 1024]");
    spec.threads = static_cast<unsigned>(n);
  });

  const bool needs_gap = !route || spec.route != Route::kToy;
  const bool gap_ok = with("geometry", "gap_m", [&](const std::string& v) {
    spec.gaps_m = parse_grid(v);
    for (double d : spec.gaps_m) {
      if (!(d > 0.0) || !std::isfinite(d)) throw ConfigError("gap must be > 0");
    }
  });
  if (!gap_ok && !config.find("geometry", "gap_m") && needs_gap && route) {
    diags.push_back({{}, "geometry.gap_m", "missing"});
  }
  with("geometry", "temperature_K", [&](const std::string& v) {
    spec.temperatures_K = parse_grid(v);
    for (double t : spec.temperatures_K) {
      if (!(t >= 0.0) || !std::isfinite(t)) throw ConfigError("temperature must be >= 0");
    }
  });

  auto models = [&](const std::string& key, std::vector<ModelChoice>& dest) {
    const bool ok = with("models", key, [&](const std::string& v) {
      for (std::string_view item : split_top(v, ',')) {
        if (item.empty()) throw ConfigError("empty model list entry");
        DielectricModel m = parse_model(item, config.base_dir());
        validate(m);
        dest.push_back({describe(m), std::move(m)});
      }
    });
    if (!ok && !config.find("models", key)) {
      if (route && spec.route == Route::kLifshitz) {
        diags.push_back({{}, "models." + key, "missing"});
      } else {
        dest.push_back({"perfect", PerfectMirror{}});
      }
    }
  };
  models("left", spec.left);
  models("right", spec.right);

  with("modesum", "geometry", [&](const std::string& v) {
    const std::string g = lower(v);
    if (g == "em3d") {
      spec.geometry = modesum::Geometry::kEm3d;
    } else if (g == "scalar1d") {
      spec.geometry = modesum::Geometry::kScalar1d;
    } else {
      throw ConfigError("geometry must be em3d or scalar1d");
    }
  });
  with("modesum", "regulator", [&](const std::string& v) {
    spec.regulator = parse_regulator(v);
    modesum::validate(spec.regulator);
  });
  with("modesum", "subtract_bulk", [&](const std::string& v) {
    const std::string b = lower(v);
    if (b != "true" && b != "false") throw ConfigError("subtract_bulk must be true or false");
    spec.subtract_bulk = b == "true";
  });

  const bool has_toy = config.sections().count("toy") > 0;
  if (has_toy || (route && spec.route == Route::kToy)) {
    ToySpec t;
    auto need = [&](const std::string& key, auto fn) {
      if (!with("toy", key, fn) && !config.find("toy", key)) diags.push_back({{}, "toy." + key, "missing"});
    };
    need("n_sites", [&](const std::string& v) {
      t.n_sites = parse_count(v);
      if (t.n_sites < 3) throw ConfigError("n_sites must be >= 3");
    });
    need("omega_m_rad_s", [&](const std::string& v) {
      t.omega_m_rad_s = parse_number(v);
      if (!(t.omega_m_rad_s >= 0.0)) throw ConfigError("matter frequency must be >= 0");
    });
    need("g_rad_s", [&](const std::string& v) {
      t.g_rad_s = parse_number(v);
      if (!(t.g_rad_s >= 0.0)) throw ConfigError("coupling must be >= 0");
    });
    with("toy", "reservoir", [&](const std::string& v) {
      t.reservoir = parse_reservoir(v);
      for (const auto& b : t.reservoir) {
        if (!(b.omega_rad_s >= 0.0) || !(b.coupling_rad_s >= 0.0)) {
          throw ConfigError("bath frequency and coupling must be >= 0");
        }
      }
    });
    with("toy", "boundary", [&](const std::string& v) {
      const std::string b = lower(v);
      if (b == "pinned") {
        t.boundary = toy::Boundary::kPinned;
      } else if (b == "periodic") {
        t.boundary = toy::Boundary::kPeriodic;
      } else {
        throw ConfigError("boundary must be pinned or periodic");
      }
    });
    const bool compare = route && spec.route == Route::kCompare;
    if (compare) {
      need("sites_per_gap", [&](const std::string& v) {
        t.sites_per_gap = parse_count(v);
        if (*t.sites_per_gap == 0) throw ConfigError("sites_per_gap must be >= 1");
      });
    } else {
      need("spacing_m", [&](const std::string& v) {
        t.spacing_m = parse_number(v);
        if (!(*t.spacing_m > 0.0)) throw ConfigError("spacing must be > 0");
      });
      need("separations_sites", [&](const std::string& v) {
        for (double s : parse_grid(v)) {
          if (!(s >= 1.0) || s != std::floor(s)) throw ConfigError("separations must be positive integers");
          t.separations.push_back(static_cast<std::size_t>(s));
        }
      });
    }
    spec.toy = t;
  }

  if (diags.empty()) out.spec = std::move(spec);
  std::stable_sort(diags.begin(), diags.end(), [](const Diagnostic& a, const Diagnostic& b) {
    return std::pair(a.pos.line, a.pos.column) < std::pair(b.pos.line, b.pos.column);
  });
  return out;
}

}  // namespace casimir::cli
