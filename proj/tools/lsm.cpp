#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lsm/cli.hpp"
#include "lsm/errors.hpp"

namespace {

enum ExitCode { kOk = 0, kUsage = 2, kNumerical = 3, kIo = 4 };

struct Flags {
  std::string model, regime, nu, mesh, case_name, out, config;
  std::vector<std::string> sets;
  bool nu_given = false;
};

void add_flags(CLI::App* sub, Flags& f) {
  sub->add_option("--model", f.model, "born | modified | both");
  sub->add_option("--regime", f.regime, "stress | strain | both");
  sub->add_option("--nu", f.nu, "comma-separated Poisson ratios, or 'grid'");
  sub->add_option("--mesh", f.mesh, "mesh list, e.g. 8x2,16x4");
  sub->add_option("--case", f.case_name, "uniaxial | shear | bending | cantilever");
  sub->add_option("--out", f.out, "output directory");
  sub->add_option("--config", f.config, "key=value run configuration file");
  sub->add_option("--set", f.sets, "extra key=value setting (repeatable)");
}

lsm::cli::KeyValues gather(const CLI::App* sub, const Flags& f) {
  lsm::cli::KeyValues kv;
  if (!f.config.empty()) {
    std::ifstream in(f.config, std::ios::binary);
    if (!in) throw lsm::IoError("cannot read config file '" + f.config + "'");
    std::ostringstream text;
    text << in.rdbuf();
    kv = lsm::cli::parse_key_values(text.str());
  }
  // Flags override file keys.
  auto set = [&](const char* flag, const char* key, const std::string& value) {
    if (sub->count(flag) > 0) kv[key] = value;
  };
  set("--model", "run.model", f.model);
  set("--regime", "material.regime", f.regime);
  set("--nu", "run.nu", f.nu);
  set("--mesh", "run.mesh", f.mesh);
  set("--case", "run.case", f.case_name);
  set("--out", "run.out", f.out);
  for (const auto& s : f.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw lsm::UsageError("--set expects key=value, got '" + s + "'");
    kv[s.substr(0, eq)] = s.substr(eq + 1);
  }
  return kv;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lattice-spring plane elasticity: calibration, unit-cell spectra, benchmarks"};
  app.set_version_flag("--version", std::string(lsm::cli::version()));
  app.require_subcommand(1);

  Flags flags;
  auto* calibrate = app.add_subcommand("calibrate", "spring stiffnesses and tensors over nu");
  auto* eigen = app.add_subcommand("eigen", "unit-cell eigenvalues over nu");
  auto* benchmark = app.add_subcommand("benchmark", "solve a benchmark case and compare");
  auto* convergence = app.add_subcommand("convergence", "error table over the mesh sequence");
  for (auto* sub : {calibrate, eigen, benchmark, convergence}) add_flags(sub, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    CLI::App* sub = app.get_subcommands().front();
    const lsm::cli::RunConfig config = lsm::cli::make_config(gather(sub, flags));
    lsm::cli::ResultBundle bundle;
    if (sub == calibrate) bundle = lsm::cli::cmd_calibrate(config);
    else if (sub == eigen) bundle = lsm::cli::cmd_eigen(config);
    else if (sub == benchmark) bundle = lsm::cli::cmd_benchmark(config);
    else bundle = lsm::cli::cmd_convergence(config);

    lsm::cli::write_bundle(bundle, config.out_dir);
    std::cout << "wrote " << bundle.files.size() << " file(s) to " << config.out_dir << "\n";
    if (!bundle.failures.empty()) {
      for (const auto& f : bundle.failures) std::cerr << "lsm: " << f << "\n";
      return kNumerical;
    }
    return kOk;
  } catch (const lsm::UsageError& e) {
    std::cerr << "lsm: usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const lsm::DomainError& e) {
    std::cerr << "lsm: usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const lsm::DegenerateStiffnessError& e) {
    std::cerr << "lsm: numerical failure: " << e.what() << "\n";
    return kNumerical;
  } catch (const lsm::SingularSystemError& e) {
    std::cerr << "lsm: numerical failure: " << e.what() << "\n";
    return kNumerical;
  } catch (const lsm::IoError& e) {
    std::cerr << "lsm: i/o error: " << e.what() << "\n";
    return kIo;
  }
}
