#include <iostream>

#include <CLI11.hpp>

#include "phonoscat/materials.hpp"
#include "phonoscat_app/runner.hpp"
#include "phonoscat_app/selftest.hpp"

namespace {

int validate_materials(const std::string& path) {
  try {
    const phonoscat::MaterialDatabase db = phonoscat::load_materials(path);
    std::cout << "ok: " << db.size() << " record(s) in " << path << "\n";
    for (const auto& m : db.records())
      std::cout << "  " << m.name << (m.isotropic ? " (isotropic)" : "") << "\n";
    return phonoscat::app::kExitOk;
  } catch (const phonoscat::ValidationError& e) {
    std::cerr << "phonoscat: invalid material database: " << e.what() << "\n";
    return phonoscat::app::kExitConfig;
  }
}

}  // namespace

int main(int argc, char** argv) {
  using namespace phonoscat::app;

  CLI::App app{"phonoscat: piezoelectric phonon radiation loss of microwave modes"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Evaluate a JSON run config, write CSV and a report");
  std::string config;
  std::string out_path;
  unsigned threads = 0;
  std::string quad;
  run->add_option("config", config, "Run config (JSON)")->required();
  run->add_option("--out", out_path, "CSV output path (overrides the config)");
  run->add_option("--threads", threads, "Quadrature worker threads");
  run->add_option("--quad", quad, "Initial sphere quadrature as NxM (polar x azimuth)");

  auto* materials = app.add_subcommand("materials", "Material database tools");
  materials->require_subcommand(1);
  auto* validate = materials->add_subcommand("validate", "Check a material database file");
  std::string db_path;
  validate->add_option("db", db_path, "Material database (JSON)")->required();

  auto* selftest = app.add_subcommand("selftest", "Run oracle and scaling self-checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  if (*run) {
    RunOptions opts;
    if (!out_path.empty()) opts.out = out_path;
    if (run->count("--threads")) opts.threads = threads;
    if (!quad.empty()) {
      try {
        opts.quad = parse_quad(quad);
      } catch (const ConfigError& e) {
        std::cerr << "phonoscat: config error: " << e.what() << "\n";
        return kExitConfig;
      }
    }
    return run_command(config, opts, std::cout, std::cerr);
  }
  if (*validate) return validate_materials(db_path);
  if (*selftest) return selftest_command(std::cout, std::cerr);
  return kExitConfig;
}
