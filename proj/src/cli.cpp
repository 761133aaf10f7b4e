#include "casikit/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>

#include "casikit/core.hpp"
#include "casikit/electrostatics.hpp"
#include "casikit/io/csv.hpp"
#include "casikit/io/json_models.hpp"
#include "casikit/screening.hpp"

namespace casikit::cli {
namespace {

using io::format_full;
using io::json;
using io::ojson;

struct CommonFlags {
  std::string out;     // empty -> stdout
  std::string format;  // "", "csv" or "json"
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--out", f.out, "Output file (default: stdout)");
  cmd->add_option("--format", f.format, "Output format: csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--seed", f.seed, "Override the RNG seed");
  cmd->add_option("--tol", f.tol, "Override the numerical tolerance");
}

void emit(const CommonFlags& f, const std::string& content) {
  if (f.out.empty())
    std::cout << content;
  else
    io::write_text_file(f.out, content);
}

json load_json(const std::string& path) {
  return io::parse_json(io::read_text_file(path), path);
}

std::string rows_to_output(const std::vector<std::string>& columns,
                           const std::vector<std::vector<double>>& rows,
                           const std::string& format, const std::string& comment = "") {
  std::ostringstream os;
  if (format == "json") {
    ojson arr = ojson::array();
    for (const auto& row : rows) {
      ojson o;
      for (std::size_t i = 0; i < columns.size(); ++i) o[columns[i]] = row[i];
      arr.push_back(std::move(o));
    }
    os << arr.dump(2) << "\n";
    return os.str();
  }
  if (!comment.empty()) os << "# " << comment << "\n";
  for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
  os << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_full(row[i]);
    os << "\n";
  }
  return os.str();
}

// ---- subcommand handlers ----

std::string cmd_force(const std::string& config_path, const CommonFlags& f) {
  io::ForceConfig fc = io::force_config_from_json(load_json(config_path));
  if (f.tol) fc.problem.convergence.kperp_tolerance = *f.tol;
  std::vector<std::string> cols{"d_m", "energy_J_m2", "pressure_N_m2"};
  if (fc.R > 0.0) cols.push_back("force_N");
  std::vector<std::vector<double>> rows;
  for (double d : fc.d_values) {
    auto p = fc.problem;
    p.d = d;
    std::vector<double> row{d, lifshitz::free_energy_per_area(p), lifshitz::casimir_pressure(p)};
    if (fc.R > 0.0) row.push_back(lifshitz::sphere_plane_force(p, fc.R));
    rows.push_back(std::move(row));
  }
  return rows_to_output(cols, rows, f.format.empty() ? "csv" : f.format);
}

std::string cmd_electrostatic(const std::string& config_path, const CommonFlags& f) {
  json j = load_json(config_path);
  const std::string ctx = "electrostatic config";
  io::check_keys(j, {"geometry", "A", "R", "V", "d", "tol"}, ctx);
  if (!j.contains("geometry") || !j["geometry"].is_string())
    throw ConfigError(ctx + ": needs a string 'geometry'");
  const std::string geom = j["geometry"].get<std::string>();
  const double V = j.contains("V") ? j["V"].get<double>() : 0.0;
  const double tol = f.tol ? *f.tol : (j.contains("tol") ? j["tol"].get<double>() : 1e-12);
  std::vector<double> ds;
  if (!j.contains("d")) throw ConfigError(ctx + ": missing 'd'");
  if (j["d"].is_number())
    ds.push_back(j["d"].get<double>());
  else
    for (const auto& v : j["d"]) ds.push_back(v.get<double>());

  std::vector<std::string> cols{"d_m", "C_F", "F_N"};
  std::vector<std::vector<double>> rows;
  if (geom == "parallel_plate") {
    if (!j.contains("A")) throw ConfigError(ctx + ": parallel_plate needs 'A'");
    const double A = j["A"].get<double>();
    electrostatics::CapacitanceProfile prof{electrostatics::ParallelPlateProfile{A}};
    for (double d : ds)
      rows.push_back({d, electrostatics::parallel_plate_capacitance(A, d),
                      electrostatics::force_from_capacitance(prof, d, V)});
  } else if (geom == "sphere_plane") {
    if (!j.contains("R")) throw ConfigError(ctx + ": sphere_plane needs 'R'");
    const double R = j["R"].get<double>();
    electrostatics::CapacitanceProfile prof{electrostatics::SpherePlaneProfile{R, tol}};
    cols.push_back("alpha_N_V2");
    for (double d : ds)
      rows.push_back({d, electrostatics::sphere_plane_capacitance(R, d, tol),
                      electrostatics::force_from_capacitance(prof, d, V),
                      electrostatics::calibration_alpha(R, d)});
  } else {
    throw ConfigError(ctx + ": unknown geometry '" + geom + "'");
  }
  return rows_to_output(cols, rows, f.format.empty() ? "csv" : f.format);
}

std::string cmd_screening(const std::string& config_path, const CommonFlags& f) {
  json j = load_json(config_path);
  const std::string ctx = "screening config";
  io::check_keys(j, {"eps_static", "carrier_density", "T", "V", "d", "offset_fit_range"}, ctx);
  screening::SemiconductorPlate plate{};
  plate.eps_static = j.at("eps_static").get<double>();
  plate.carrier_density = j.at("carrier_density").get<double>();
  plate.temperature = j.at("T").get<double>();
  const double V = j.contains("V") ? j["V"].get<double>() : 1.0;
  const double d = j.at("d").get<double>();

  const double lambda = screening::debye_length(plate);
  ojson o;
  o["lambda_m"] = lambda;
  o["V_s_V"] = screening::screened_surface_potential(V, d, lambda, plate.eps_static);
  o["energy_J_m2"] = screening::screened_energy_per_area(V, d, lambda, plate.eps_static);
  if (j.contains("offset_fit_range")) {
    auto r = j["offset_fit_range"];
    if (!r.is_array() || r.size() != 2)
      throw ConfigError(ctx + ": offset_fit_range must be [d_lo, d_hi]");
    auto off = screening::apparent_distance_offset(
        lambda, plate.eps_static, {r[0].get<double>(), r[1].get<double>()});
    o["offset_m"] = off.delta_total;
    o["offset_small_y_m"] = off.small_y_expansion;
    o["regime_warning"] = off.regime_warning;
  }
  if (f.format == "csv") {
    std::ostringstream os;
    std::string head, row;
    for (const auto& item : o.items()) {
      head += (head.empty() ? "" : ",") + item.key();
      row += (row.empty() ? "" : ",");
      row += item.value().is_boolean() ? (item.value().get<bool>() ? "1" : "0")
                                       : format_full(item.value().get<double>());
    }
    os << head << "\n" << row << "\n";
    return os.str();
  }
  return o.dump(2) + "\n";
}

std::string cmd_patch(const std::string& config_path, const CommonFlags& f) {
  json j = load_json(config_path);
  const std::string ctx = "patch config";
  io::check_keys(j, {"spectrum", "R", "d", "tol"}, ctx);
  if (!j.contains("spectrum")) throw ConfigError(ctx + ": missing 'spectrum'");
  auto spec = io::spectrum_from_json(j["spectrum"]);
  const double R = j.at("R").get<double>();
  const double tol = f.tol ? *f.tol : (j.contains("tol") ? j["tol"].get<double>() : 1e-9);
  std::vector<double> ds;
  if (j.at("d").is_number())
    ds.push_back(j["d"].get<double>());
  else
    for (const auto& v : j["d"]) ds.push_back(v.get<double>());
  std::vector<std::vector<double>> rows;
  for (double d : ds)
    rows.push_back({d, patches::patch_force_sphere_plane(spec, R, d, tol)});
  return rows_to_output({"d_m", "F_N"}, rows, f.format.empty() ? "csv" : f.format);
}

std::string cmd_simulate(const std::string& config_path, const CommonFlags& f) {
  auto cfg = io::experiment_config_from_json(load_json(config_path));
  if (f.seed) cfg.seed = *f.seed;
  auto ds = simkit::simulate_dataset(cfg);
  std::vector<std::vector<double>> rows;
  rows.reserve(ds.records.size());
  for (const auto& r : ds.records) rows.push_back({r.z, r.v, r.f, r.sigma});
  char prov[64];
  std::snprintf(prov, sizeof prov, "config_hash=%016llx seed=%llu",
                static_cast<unsigned long long>(ds.config_hash),
                static_cast<unsigned long long>(ds.seed));
  return rows_to_output({"z_nominal_m", "V_applied_V", "F_N", "sigma_N"}, rows,
                        f.format.empty() ? "csv" : f.format, prov);
}

simkit::AnalysisOptions analysis_options_from_json(const json& j, const std::string& ctx) {
  simkit::AnalysisOptions opt;
  if (j.contains("casimir")) {
    const std::string kind = j["casimir"].get<std::string>();
    if (kind == "none")
      opt.casimir = simkit::CasimirModelKind::None;
    else if (kind == "ideal")
      opt.casimir = simkit::CasimirModelKind::IdealMirror;
    else if (kind == "lifshitz")
      opt.casimir = simkit::CasimirModelKind::Lifshitz;
    else
      throw ConfigError(ctx + ": unknown casimir model '" + kind + "'");
  }
  if (j.contains("te_zero_policy"))
    opt.te_zero_policy = io::te_policy_from_string(j["te_zero_policy"].get<std::string>());
  if (j.contains("n_max") && !j["n_max"].is_null())
    opt.convergence.n_max = j["n_max"].get<int>();
  if (j.contains("kperp_tolerance"))
    opt.convergence.kperp_tolerance = j["kperp_tolerance"].get<double>();
  return opt;
}

std::string cmd_analyze(const std::string& dataset_path, const std::string& model_path,
                        const CommonFlags& f) {
  if (f.format == "csv") throw ConfigError("analyze: only json output is supported");
  json j = load_json(model_path);
  const std::string ctx = "analyze model config";
  io::check_keys(j,
                 {"R", "T", "plate_model", "sphere_model", "casimir", "te_zero_policy", "n_max",
                  "kperp_tolerance"},
                 ctx);
  const double R = j.at("R").get<double>();
  const double T = j.contains("T") ? j["T"].get<double>() : 0.0;
  auto plate = j.contains("plate_model") ? io::model_from_json(j["plate_model"])
                                         : permittivity::perfect_conductor();
  auto sphere = j.contains("sphere_model") ? io::model_from_json(j["sphere_model"])
                                           : permittivity::perfect_conductor();
  auto opt = analysis_options_from_json(j, ctx);
  if (f.tol) opt.convergence.kperp_tolerance = *f.tol;

  io::CsvTable t =
      io::read_csv_file(dataset_path, {"z_nominal_m", "V_applied_V", "F_N", "sigma_N"});
  simkit::SyntheticDataset ds;
  for (const auto& row : t.rows) ds.records.push_back({row[0], row[1], row[2], row[3]});

  auto result = simkit::run_analysis(ds, R, T, plate, sphere, opt);
  return io::calibration_result_to_json(result).dump(2) + "\n";
}

std::string cmd_fit_residual(const std::string& force_path, const std::string& vm_path,
                             const std::string& model_path, const CommonFlags& f) {
  if (f.format == "csv") throw ConfigError("fit-residual: only json output is supported");
  json j = load_json(model_path);
  const std::string ctx = "fit-residual model config";
  io::check_keys(j,
                 {"R", "T", "plate_model", "sphere_model", "casimir", "te_zero_policy", "n_max",
                  "kperp_tolerance"},
                 ctx);
  const double R = j.at("R").get<double>();
  const double T = j.contains("T") ? j["T"].get<double>() : 0.0;
  auto opt = analysis_options_from_json(j, ctx);

  io::CsvTable ft = io::read_csv_file(force_path, {"d_m", "F_N", "sigma_N"}, 1);
  std::vector<contact::ForceSample> samples;
  for (const auto& row : ft.rows)
    samples.push_back({row[0], row[1], row.size() > 2 ? row[2] : 0.0});

  io::CsvTable vt = io::read_csv_file(vm_path, {"d_m", "V_a_V", "sigma_V"}, 1);
  contact::MinimizingPotentialSamples vm;
  for (const auto& row : vt.rows) {
    vm.d.push_back(row[0]);
    vm.v.push_back(row[1]);
  }
  // v_m at the force distances by log-distance interpolation of the samples
  contact::ContactPotentialCurve curve;
  curve.d = vm.d;
  curve.v_c = vm.v;
  curve.dv_dd.assign(vm.d.size(), 0.0);

  std::function<double(double)> casimir;
  if (opt.casimir != simkit::CasimirModelKind::None) {
    auto plate = j.contains("plate_model") ? io::model_from_json(j["plate_model"])
                                           : permittivity::perfect_conductor();
    auto sphere = j.contains("sphere_model") ? io::model_from_json(j["sphere_model"])
                                             : permittivity::perfect_conductor();
    casimir = [=](double d) {
      if (opt.casimir == simkit::CasimirModelKind::IdealMirror) {
        const double pi = std::numbers::pi;
        return pi * pi * pi * constants::hbar * constants::c * R / (360.0 * d * d * d);
      }
      lifshitz::LifshitzProblem p;
      p.plate_a = plate;
      p.plate_b = sphere;
      p.d = d;
      p.T = T;
      p.te_zero_policy = opt.te_zero_policy;
      p.convergence = opt.convergence;
      return lifshitz::sphere_plane_force(p, R);
    };
  }
  auto fit = contact::fit_residual(
      samples, [&](double d) { return curve.eval(d); }, R, casimir);
  return io::residual_fit_to_json(fit).dump(2) + "\n";
}

}  // namespace

int run(const std::vector<std::string>& argv) {
  CLI::App app{"Casimir force and electrostatic-calibration toolkit"};
  app.require_subcommand(1);

  CommonFlags flags;
  std::string config_path, dataset_path, model_path, force_path, vm_path;

  auto* force = app.add_subcommand("force", "Lifshitz energy/pressure/force curves");
  force->add_option("config", config_path, "LifshitzProblem JSON")->required();
  add_common(force, flags);

  auto* elec = app.add_subcommand("electrostatic", "Capacitance, force and alpha tables");
  elec->add_option("config", config_path, "Geometry JSON")->required();
  add_common(elec, flags);

  auto* scr = app.add_subcommand("screening", "Debye screening quantities");
  scr->add_option("config", config_path, "Plate JSON")->required();
  add_common(scr, flags);

  auto* patch = app.add_subcommand("patch", "Patch-potential force curves");
  patch->add_option("config", config_path, "Spectrum JSON")->required();
  add_common(patch, flags);

  auto* sim = app.add_subcommand("simulate", "Generate a synthetic dataset");
  sim->add_option("config", config_path, "ExperimentConfig JSON")->required();
  add_common(sim, flags);

  auto* ana = app.add_subcommand("analyze", "Run the calibration pipeline on a dataset");
  ana->add_option("dataset", dataset_path, "Dataset CSV")->required();
  ana->add_option("model", model_path, "Model JSON")->required();
  add_common(ana, flags);

  auto* fitres = app.add_subcommand("fit-residual", "Fit the residual-force model");
  fitres->add_option("force", force_path, "Force curve CSV")->required();
  fitres->add_option("vm", vm_path, "Minimizing-potential CSV")->required();
  fitres->add_option("model", model_path, "Model JSON")->required();
  add_common(fitres, flags);

  std::vector<std::string> args(argv.begin(), argv.end());
  std::reverse(args.begin(), args.end());  // CLI11 parses reversed argv
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);  // prints help or error; 0 for --help
  }

  try {
    std::string output;
    if (force->parsed()) output = cmd_force(config_path, flags);
    else if (elec->parsed()) output = cmd_electrostatic(config_path, flags);
    else if (scr->parsed()) output = cmd_screening(config_path, flags);
    else if (patch->parsed()) output = cmd_patch(config_path, flags);
    else if (sim->parsed()) output = cmd_simulate(config_path, flags);
    else if (ana->parsed()) output = cmd_analyze(dataset_path, model_path, flags);
    else if (fitres->parsed()) output = cmd_fit_residual(force_path, vm_path, model_path, flags);
    emit(flags, output);
    return 0;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const ConvergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const FitError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const IdentifiabilityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const StageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace casikit::cli
