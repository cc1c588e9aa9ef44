#include "lsm/cli.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "lsm/csv.hpp"
#include "lsm/errors.hpp"
#include "lsm/lattice.hpp"
#include "lsm/unit_cell.hpp"

namespace lsm::cli {

namespace {

#ifndef LSM_VERSION
#define LSM_VERSION "0.0.0"
#endif

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    parts.push_back(trim(text.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

double parse_number(std::string_view key, std::string_view text) {
  try {
    return csv::parse_double(trim(text));
  } catch (const UsageError&) {
    throw UsageError(std::string(key) + ": not a number: '" + std::string(text) + "'");
  }
}

int parse_positive_int(std::string_view text) {
  int value = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size() || value < 1) {
    throw UsageError("mesh dimension must be a positive integer, got '" + std::string(text) + "'");
  }
  return value;
}

std::string join_nu(const std::vector<double>& nu) {
  std::string out;
  for (std::size_t i = 0; i < nu.size(); ++i) {
    if (i) out += ' ';
    out += csv::format_double(nu[i]);
  }
  return out;
}

std::string join_models(const std::vector<BondModel>& models) {
  std::string out;
  for (std::size_t i = 0; i < models.size(); ++i) {
    if (i) out += ' ';
    out += to_string(models[i]);
  }
  return out;
}

std::string join_regimes(const std::vector<PlaneRegime>& regimes) {
  std::string out;
  for (std::size_t i = 0; i < regimes.size(); ++i) {
    if (i) out += ' ';
    out += to_string(regimes[i]);
  }
  return out;
}

std::string join_meshes(const std::vector<MeshSize>& meshes) {
  std::string out;
  for (std::size_t i = 0; i < meshes.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(meshes[i].nx) + "x" + std::to_string(meshes[i].ny);
  }
  return out;
}

void add_common_comments(csv::Table& table, std::string_view command, const RunConfig& config) {
  table.add_comment("command", command);
  table.add_comment("E", csv::format_double(config.young_modulus));
  table.add_comment("thickness", csv::format_double(config.thickness));
}

bool has_stiffness_override(const RunConfig& config) {
  return config.k_n1 || config.k_s1 || config.k_n2;
}

void reject_stiffness_override(const RunConfig& config, std::string_view command) {
  if (has_stiffness_override(config)) {
    throw UsageError("stiffness.* keys only apply to eigen, not " + std::string(command));
  }
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string manifest_text(std::string_view command, const RunConfig& config,
                          const std::vector<ResultFile>& files) {
  std::ostringstream m;
  m << "tool: lsm " << version() << '\n';
  m << "command: " << command << '\n';
  m << "timestamp: " << utc_timestamp() << '\n';
  m << "material.E: " << csv::format_double(config.young_modulus) << '\n';
  m << "material.thickness: " << csv::format_double(config.thickness) << '\n';
  m << "material.regime: " << join_regimes(config.regimes) << '\n';
  m << "run.model: " << join_models(config.models) << '\n';
  if (config.nu) m << "run.nu: " << join_nu(*config.nu) << '\n';
  if (!config.meshes.empty()) m << "run.mesh: " << join_meshes(config.meshes) << '\n';
  if (config.case_kind) m << "run.case: " << to_string(*config.case_kind) << '\n';
  if (config.k_n1) m << "stiffness.kn1: " << csv::format_double(*config.k_n1) << '\n';
  if (config.k_s1) m << "stiffness.ks1: " << csv::format_double(*config.k_s1) << '\n';
  if (config.k_n2) m << "stiffness.kn2: " << csv::format_double(*config.k_n2) << '\n';
  if (config.load) m << "case.load: " << csv::format_double(*config.load) << '\n';
  if (config.length) m << "case.length: " << csv::format_double(*config.length) << '\n';
  if (config.height) m << "case.height: " << csv::format_double(*config.height) << '\n';
  for (const auto& f : files) m << "file: " << f.name << '\n';
  return m.str();
}

MaterialParams material_for(const RunConfig& config, PlaneRegime regime, double nu) {
  MaterialParams mat{config.young_modulus, nu, config.thickness, regime};
  mat.validate();
  return mat;
}

// Eigenvalues this far below the largest one are rounding noise of exact
// zeros and are written as 0.
constexpr double kZeroCutoff = 1e-12;

double snap(double value, double scale) {
  return std::abs(value) <= kZeroCutoff * scale ? 0.0 : value;
}

BenchmarkCase configured_case(const RunConfig& config, CaseKind kind, double nu) {
  BenchmarkCase c = default_case(kind, nu);
  c.material.young_modulus = config.young_modulus;
  c.material.thickness = config.thickness;
  if (config.load) c.load = *config.load;
  const bool square = kind == CaseKind::uniaxial || kind == CaseKind::pure_shear;
  if (config.length) {
    c.geometry.length = *config.length;
    if (square && !config.height) c.geometry.height = *config.length;
  }
  if (config.height) {
    c.geometry.height = *config.height;
    if (square && !config.length) c.geometry.length = *config.height;
  }
  if (!config.meshes.empty()) c.mesh_sizes = config.meshes;
  c.validate();
  return c;
}

CaseKind required_case(const RunConfig& config, std::string_view command) {
  if (!config.case_kind) {
    throw UsageError(std::string(command) +
                     " needs a case (uniaxial, shear, bending or cantilever)");
  }
  for (PlaneRegime r : config.regimes) {
    if (r != PlaneRegime::plane_stress) {
      throw UsageError("benchmark cases are defined in plane stress only");
    }
  }
  return *config.case_kind;
}

const std::vector<double> kBenchmarkNu = {0.0, 0.3, 0.49};

std::string nu_tag(double nu) {
  // 0.3 -> "0.3"; shortest form keeps file names readable.
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), nu);
  return {buf, res.ptr};
}

}  // namespace

std::string_view version() { return LSM_VERSION; }

KeyValues parse_key_values(std::string_view text) {
  KeyValues values;
  std::size_t start = 0;
  int line_no = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw UsageError("config line " + std::to_string(line_no) + ": expected key=value");
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (key.empty()) throw UsageError("config line " + std::to_string(line_no) + ": empty key");
    if (!values.emplace(key, value).second) {
      throw UsageError("config key '" + key + "' given twice");
    }
  }
  return values;
}

std::vector<double> poisson_grid() {
  std::vector<double> grid;
  for (int i = 0; i <= 9; ++i) grid.push_back(0.05 * i);
  grid.push_back(0.49);
  return grid;
}

std::vector<double> parse_nu_list(std::string_view text) {
  text = trim(text);
  if (text.empty()) return {};
  if (text == "grid") return poisson_grid();
  std::vector<double> nu;
  for (auto part : split(text, ',')) {
    const double v = parse_number("run.nu", part);
    if (!(v >= 0.0 && v < 0.5)) {
      throw UsageError("run.nu: Poisson ratio " + std::string(part) + " outside [0, 0.5)");
    }
    nu.push_back(v);
  }
  return nu;
}

std::vector<MeshSize> parse_mesh_list(std::string_view text) {
  std::vector<MeshSize> meshes;
  text = trim(text);
  if (text.empty()) return meshes;
  for (auto part : split(text, ',')) {
    const auto x = part.find('x');
    if (x == std::string_view::npos) {
      throw UsageError("run.mesh: expected <nx>x<ny>, got '" + std::string(part) + "'");
    }
    meshes.push_back({parse_positive_int(part.substr(0, x)), parse_positive_int(part.substr(x + 1))});
  }
  return meshes;
}

RunConfig make_config(const KeyValues& values) {
  RunConfig config;
  for (const auto& [key, value] : values) {
    if (key == "material.E") {
      config.young_modulus = parse_number(key, value);
      if (!(config.young_modulus > 0.0) || !std::isfinite(config.young_modulus)) {
        throw UsageError("material.E must be positive");
      }
    } else if (key == "material.thickness") {
      config.thickness = parse_number(key, value);
      if (!(config.thickness > 0.0) || !std::isfinite(config.thickness)) {
        throw UsageError("material.thickness must be positive");
      }
    } else if (key == "material.regime") {
      if (value == "both") {
        config.regimes = {PlaneRegime::plane_stress, PlaneRegime::plane_strain};
      } else {
        config.regimes = {parse_regime(value)};
      }
    } else if (key == "run.model") {
      if (value == "both") {
        config.models = {BondModel::born, BondModel::modified};
      } else {
        config.models = {parse_model(value)};
      }
    } else if (key == "run.nu") {
      config.nu = parse_nu_list(value);
    } else if (key == "run.mesh") {
      config.meshes = parse_mesh_list(value);
    } else if (key == "run.case") {
      config.case_kind = parse_case(value);
    } else if (key == "run.out") {
      if (value.empty()) throw UsageError("run.out must not be empty");
      config.out_dir = value;
    } else if (key == "stiffness.kn1") {
      config.k_n1 = parse_number(key, value);
    } else if (key == "stiffness.ks1") {
      config.k_s1 = parse_number(key, value);
    } else if (key == "stiffness.kn2") {
      config.k_n2 = parse_number(key, value);
    } else if (key == "case.load") {
      config.load = parse_number(key, value);
    } else if (key == "case.length") {
      config.length = parse_number(key, value);
    } else if (key == "case.height") {
      config.height = parse_number(key, value);
    } else {
      throw UsageError("unknown config key '" + key + "'");
    }
  }
  if (has_stiffness_override(config) && !(config.k_n1 && config.k_s1 && config.k_n2)) {
    throw UsageError("stiffness override needs stiffness.kn1, stiffness.ks1 and stiffness.kn2");
  }
  return config;
}

const ResultFile* ResultBundle::find(std::string_view name) const {
  for (const auto& f : files) {
    if (f.name == name) return &f;
  }
  return nullptr;
}

ResultBundle cmd_calibrate(const RunConfig& config) {
  reject_stiffness_override(config, "calibrate");
  const auto nus = config.nu_or(poisson_grid());
  csv::Table table({"model", "regime", "nu", "k_n1", "k_s1", "k_n2", "anisotropy", "c1", "c2",
                    "c3"});
  add_common_comments(table, "calibrate", config);
  table.add_comment("models", join_models(config.models));
  table.add_comment("regimes", join_regimes(config.regimes));
  for (BondModel model : config.models) {
    for (PlaneRegime regime : config.regimes) {
      for (double nu : nus) {
        const Calibration cal = calibrate(material_for(config, regime, nu), model);
        const StiffnessSet& k = cal.stiffness;
        const ElasticityTensor2D c = elasticity_tensor(k, config.thickness);
        table.row()
            .cell(to_string(model))
            .cell(to_string(regime))
            .cell(nu)
            .cell(k.k_n1)
            .cell(k.k_s1)
            .cell(k.k_n2)
            .cell(anisotropy_factor(k))
            .cell(c.c1)
            .cell(c.c2)
            .cell(c.c3);
      }
    }
  }
  ResultBundle bundle;
  bundle.files.push_back({"calibration.csv", table.str()});
  bundle.manifest = manifest_text("calibrate", config, bundle.files);
  return bundle;
}

ResultBundle cmd_eigen(const RunConfig& config) {
  const bool override_k = has_stiffness_override(config);
  const auto nus = config.nu_or(poisson_grid());
  const double et = config.young_modulus * config.thickness;

  std::optional<CaseKind> constrained;
  if (config.case_kind) {
    if (*config.case_kind == CaseKind::pure_bending) {
      throw UsageError("no single-cell constraint set for the bending case");
    }
    constrained = config.case_kind;
  }

  std::vector<std::string> columns = {"nu"};
  for (Eigenform f : kAllEigenforms) columns.push_back("lambda_" + std::string(to_string(f)));
  for (const char* c : {"definiteness", "zero_count", "negative_count", "classified"}) {
    columns.emplace_back(c);
  }

  ResultBundle bundle;
  for (BondModel model : config.models) {
    for (PlaneRegime regime : config.regimes) {
      const std::string tag = std::string(to_string(model)) + "_" + std::string(to_string(regime));
      csv::Table table(columns);
      add_common_comments(table, "eigen", config);
      table.add_comment("model", to_string(model));
      table.add_comment("regime", to_string(regime));
      table.add_comment("normalization", "lambda / (E t)");
      table.add_comment("zero_cutoff", "1e-12 of the largest eigenvalue");
      if (override_k) table.add_comment("stiffness", "override");

      std::optional<csv::Table> spectrum;
      if (constrained) {
        std::vector<std::string> cols = {"nu"};
        const LatticeMesh one = build_mesh({1, 1, 1.0, Eigen::Vector2d::Zero()});
        const auto free = 8 - static_cast<int>(case_supports(default_case(*constrained, 0.0), one).size());
        for (int i = 1; i <= free; ++i) cols.push_back("lambda_" + std::to_string(i));
        cols.emplace_back("negative_count");
        spectrum.emplace(cols);
        add_common_comments(*spectrum, "eigen", config);
        spectrum->add_comment("case", to_string(*constrained));
        spectrum->add_comment("model", to_string(model));
        spectrum->add_comment("regime", to_string(regime));
        spectrum->add_comment("normalization", "lambda / (E t)");
        spectrum->add_comment("cell", "1x1 with the case supports");
      }

      auto emit = [&](std::optional<double> nu, const StiffnessSet& k) {
        const UnitCellMatrix cell = cell_matrix(k);
        const EigenReport rep = eigen_analysis(cell);
        const DefinitenessReport def = definiteness(rep);
        double scale = 0.0;
        for (double v : rep.eigenvalues) scale = std::max(scale, std::abs(v));
        auto& row = table.row();
        if (nu) row.cell(*nu); else row.cell(std::string_view(""));
        for (Eigenform f : kAllEigenforms) row.cell(snap(rep.eigenvalue(f), scale) / et);
        row.cell(to_string(def.kind)).cell(def.zero_count).cell(def.negative_count).cell(rep.classified);

        if (spectrum) {
          BenchmarkCase c = default_case(*constrained, nu.value_or(0.0));
          LatticeMesh mesh = build_mesh({1, 1, 1.0, Eigen::Vector2d::Zero()});
          GlobalSystem sys = assemble(mesh, cell);
          const ReducedSystem reduced = apply_constraints(sys, case_supports(c, mesh));
          const auto values = constrained_spectrum(reduced);
          double s = 0.0;
          for (double v : values) s = std::max(s, std::abs(v));
          auto& srow = spectrum->row();
          if (nu) srow.cell(*nu); else srow.cell(std::string_view(""));
          int negative = 0;
          for (double v : values) {
            const double snapped = snap(v, s);
            if (snapped < 0.0) ++negative;
            srow.cell(snapped / et);
          }
          srow.cell(negative);
        }
      };

      if (override_k) {
        emit(std::nullopt, StiffnessSet{model, *config.k_n1, *config.k_s1, *config.k_n2});
      } else {
        for (double nu : nus) emit(nu, calibrate(material_for(config, regime, nu), model).stiffness);
      }
      bundle.files.push_back({"eigen_" + tag + ".csv", table.str()});
      if (spectrum) {
        bundle.files.push_back(
            {"constrained_" + std::string(to_string(*constrained)) + "_" + tag + ".csv",
             spectrum->str()});
      }
    }
  }
  bundle.manifest = manifest_text("eigen", config, bundle.files);
  return bundle;
}

ResultBundle cmd_benchmark(const RunConfig& config) {
  reject_stiffness_override(config, "benchmark");
  const CaseKind kind = required_case(config, "benchmark");
  const std::string case_name(to_string(kind));
  const auto nus = config.nu_or(kBenchmarkNu);
  const bool square = kind == CaseKind::uniaxial || kind == CaseKind::pure_shear;

  ResultBundle bundle;
  csv::Table errors({"model", "nu", "nx", "ny", "field_error", "max_error", "u_profile_error",
                     "v_profile_error", "gauge_u", "gauge_v", "negative_pivots", "indefinite",
                     "advisory"});
  add_common_comments(errors, "benchmark", config);
  errors.add_comment("case", case_name);
  errors.add_comment("regime", "plane_stress");
  errors.add_comment("gauge",
                     square ? "u and v at the top-right particle"
                     : kind == CaseKind::pure_bending
                         ? "u at the top-left particle, v at mid-span on the axis"
                         : "u at the top-left particle, v at the loaded end of the axis");

  for (BondModel model : config.models) {
    const std::string model_name(to_string(model));
    for (double nu : nus) {
      const BenchmarkCase c = configured_case(config, kind, nu);
      const ErrorReport report = run_case(c, model);
      for (const MeshRun& run : report.runs) {
        const std::string mesh_tag = std::to_string(run.mesh.nx) + "x" + std::to_string(run.mesh.ny);
        const std::string stem = case_name + "_" + model_name + "_nu" + nu_tag(nu) + "_" + mesh_tag;

        csv::Table field({"particle", "x", "y", "u", "v", "u_analytical", "v_analytical"});
        add_common_comments(field, "benchmark", config);
        field.add_comment("case", case_name);
        field.add_comment("model", model_name);
        field.add_comment("nu", csv::format_double(nu));
        field.add_comment("mesh", mesh_tag);
        for (Index p = 0; p < run.lattice.particle_count(); ++p) {
          const auto& pos = run.lattice.positions[p];
          field.row()
              .cell(static_cast<long long>(p))
              .cell(pos.x())
              .cell(pos.y())
              .cell(run.field.displacements[p].x())
              .cell(run.field.displacements[p].y())
              .cell(run.analytical[p].x())
              .cell(run.analytical[p].y());
        }
        bundle.files.push_back({"field_" + stem + ".csv", field.str()});

        csv::Table profiles({"profile", "particle", "coordinate", "numerical", "analytical"});
        add_common_comments(profiles, "benchmark", config);
        profiles.add_comment("case", case_name);
        profiles.add_comment("model", model_name);
        profiles.add_comment("nu", csv::format_double(nu));
        profiles.add_comment("mesh", mesh_tag);
        for (const Profile* prof : {&run.u_profile, &run.v_profile}) {
          for (std::size_t i = 0; i < prof->particles.size(); ++i) {
            profiles.row()
                .cell(prof->name)
                .cell(static_cast<long long>(prof->particles[i]))
                .cell(prof->coordinate[i])
                .cell(prof->numerical[i])
                .cell(prof->analytical[i]);
          }
        }
        bundle.files.push_back({"profiles_" + stem + ".csv", profiles.str()});

        const double gauge_u = run.u_profile.numerical.back();
        const auto& vn = run.v_profile.numerical;
        const double gauge_v = square                         ? vn.back()
                               : kind == CaseKind::pure_bending ? vn[vn.size() / 2]
                                                                : vn.front();
        errors.row()
            .cell(model_name)
            .cell(nu)
            .cell(run.mesh.nx)
            .cell(run.mesh.ny)
            .cell(run.field_error)
            .cell(run.max_error)
            .cell(run.u_profile.relative_error)
            .cell(run.v_profile.relative_error)
            .cell(gauge_u)
            .cell(gauge_v)
            .cell(run.negative_pivots)
            .cell(run.indefinite)
            .cell(report.negative_shear_advisory);
        if (run.indefinite) {
          bundle.failures.push_back(case_name + ", " + model_name + " model, nu = " + nu_tag(nu) +
                                    ", mesh " + mesh_tag + ": reduced stiffness is indefinite (" +
                                    std::to_string(run.negative_pivots) + " negative pivots)");
        }
      }
    }
  }
  bundle.files.push_back({"errors_" + case_name + ".csv", errors.str()});
  bundle.manifest = manifest_text("benchmark", config, bundle.files);
  return bundle;
}

ResultBundle cmd_convergence(const RunConfig& config) {
  reject_stiffness_override(config, "convergence");
  const CaseKind kind = required_case(config, "convergence");
  const std::string case_name(to_string(kind));
  const auto nus = config.nu_or(kBenchmarkNu);

  ResultBundle bundle;
  csv::Table table({"model", "nu", "nx", "ny", "field_error", "u_profile_error", "v_profile_error",
                    "negative_pivots", "strictly_decreasing"});
  add_common_comments(table, "convergence", config);
  table.add_comment("case", case_name);
  table.add_comment("regime", "plane_stress");
  for (BondModel model : config.models) {
    for (double nu : nus) {
      const ConvergenceTable conv = convergence_study(configured_case(config, kind, nu), model);
      for (const auto& row : conv.rows) {
        table.row()
            .cell(to_string(model))
            .cell(nu)
            .cell(row.mesh.nx)
            .cell(row.mesh.ny)
            .cell(row.field_error)
            .cell(row.u_profile_error)
            .cell(row.v_profile_error)
            .cell(row.negative_pivots)
            .cell(conv.strictly_decreasing);
        if (row.negative_pivots > 0) {
          bundle.failures.push_back(case_name + ", " + std::string(to_string(model)) +
                                    " model, nu = " + nu_tag(nu) + ", mesh " +
                                    std::to_string(row.mesh.nx) + "x" + std::to_string(row.mesh.ny) +
                                    ": reduced stiffness is indefinite (" +
                                    std::to_string(row.negative_pivots) + " negative pivots)");
        }
      }
    }
  }
  bundle.files.push_back({"convergence_" + case_name + ".csv", table.str()});
  bundle.manifest = manifest_text("convergence", config, bundle.files);
  return bundle;
}

void write_bundle(const ResultBundle& bundle, const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw IoError("cannot create output directory '" + dir + "': " + ec.message());
  }
  auto write = [&](const std::string& name, const std::string& content) {
    const fs::path path = fs::path(dir) / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << content;
    out.close();
    if (!out) throw IoError("cannot write '" + path.string() + "'");
  };
  for (const auto& f : bundle.files) write(f.name, f.content);
  write("manifest.txt", bundle.manifest);
}

}  // namespace lsm::cli
