#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>
#include <utility>

#include "CLI11.hpp"
#include "casimir/cli.hpp"
#include "casimir/errors.hpp"

namespace {

struct Options {
  std::string config;
  std::string out;
  std::string format;
  double tol = 0.0;
  unsigned threads = 0;
  std::vector<std::string> sets;
};

void add_common(CLI::App* cmd, Options& opt) {
  cmd->add_option("--config", opt.config, "config file")->required();
  cmd->add_option("--out", opt.out, "output path (default: run.output, else stdout)");
  cmd->add_option("--format", opt.format, "csv or json");
  cmd->add_option("--tol", opt.tol, "relative tolerance");
  cmd->add_option("--threads", opt.threads, "worker threads");
  cmd->add_option("--set", opt.sets, "override, e.g. geometry.gap_m=1e-6")->take_all();
}

int execute(const std::string& command, const Options& opt) {
  using namespace casimir::cli;
  std::vector<Diagnostic> diags;
  Config config = Config::load(opt.config, diags);
  if (!opt.format.empty()) config.set("run", "format", opt.format);
  if (!opt.out.empty()) config.set("run", "output", opt.out);
  if (opt.tol != 0.0) {
    std::ostringstream os;
    os.precision(17);
    os << opt.tol;
    config.set("run", "tolerance", os.str());
  }
  if (opt.threads != 0) config.set("run", "threads", std::to_string(opt.threads));
  for (const auto& s : opt.sets) config.set_override(s);

  const std::optional<Route> route = command == "validate" ? std::nullopt : parse_route(command);
  Analysis analysis = analyze(config, route);
  diags.insert(diags.end(), analysis.diagnostics.begin(), analysis.diagnostics.end());
  std::stable_sort(diags.begin(), diags.end(), [](const Diagnostic& a, const Diagnostic& b) {
    return std::pair(a.pos.line, a.pos.column) < std::pair(b.pos.line, b.pos.column);
  });
  for (const auto& d : diags) std::cerr << format_diagnostic(d, config.source()) << '\n';
  if (!diags.empty()) {
    std::cerr << diags.size() << " problem(s) found\n";
    return 2;
  }
  if (command == "validate") {
    std::cout << config.source() << ": ok\n";
    return 0;
  }

  const SweepSpec& spec = *analysis.spec;
  const Table table = run(spec);
  std::ostringstream buf;
  if (spec.format == Format::kJson) {
    write_json(table, spec.route, buf);
  } else {
    write_csv(table, buf);
  }
  if (spec.output) {
    std::ofstream out(*spec.output, std::ios::binary | std::ios::trunc);
    if (!out) throw casimir::ConfigError("cannot write output file '" + *spec.output + "'");
    out << buf.str();
  } else {
    std::cout << buf.str();
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Casimir energies and forces by mode sums, Lifshitz theory and a lattice toy model"};
  app.require_subcommand(1);
  Options opt;
  const std::pair<const char*, const char*> commands[] = {
      {"modesum", "regulated mode sum between ideal plates"},
      {"lifshitz", "Lifshitz pressure and energy for dielectric plates"},
      {"toy", "two-defect lattice force"},
      {"compare", "mode sum, Lifshitz and toy side by side"},
      {"validate", "check a config file without running it"},
  };
  for (const auto& [name, help] : commands) add_common(app.add_subcommand(name, help), opt);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  const std::string command = app.get_subcommands().front()->get_name();
  try {
    return execute(command, opt);
  } catch (const std::exception& e) {
    std::cerr << "casimir " << command << ": " << e.what() << '\n';
    return casimir::cli::exit_code(e);
  }
}
