#include "casikit/io/json_models.hpp"

#include <algorithm>

#include "casikit/io/csv.hpp"

namespace casikit::io {
namespace {

std::pair<std::size_t, std::size_t> line_col(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

double get_number(const json& j, const char* key, const std::string& ctx) {
  if (!j.contains(key)) throw ConfigError(ctx + ": missing required key '" + key + "'");
  if (!j[key].is_number()) throw ConfigError(ctx + ": key '" + key + "' must be a number");
  return j[key].get<double>();
}

std::vector<double> get_number_array(const json& j, const char* key, const std::string& ctx) {
  if (!j.contains(key) || !j[key].is_array())
    throw ConfigError(ctx + ": key '" + key + "' must be an array of numbers");
  std::vector<double> out;
  for (const auto& v : j[key]) {
    if (!v.is_number()) throw ConfigError(ctx + ": key '" + key + "' must contain only numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace

json parse_json(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    auto [line, col] = line_col(text, e.byte > 0 ? e.byte - 1 : 0);
    throw ConfigError(what + ": JSON parse error at line " + std::to_string(line) + ", column " +
                      std::to_string(col) + ": " + e.what());
  }
}

void check_keys(const json& j, std::initializer_list<const char*> allowed,
                const std::string& context) {
  if (!j.is_object()) throw ConfigError(context + ": expected a JSON object");
  for (const auto& item : j.items()) {
    if (std::find_if(allowed.begin(), allowed.end(),
                     [&](const char* k) { return item.key() == k; }) == allowed.end())
      throw ConfigError(context + ": unknown key '" + item.key() + "'");
  }
}

permittivity::PermittivityModel model_from_json(const json& j) {
  if (!j.is_object() || !j.contains("type") || !j["type"].is_string())
    throw ConfigError("permittivity model: needs a string 'type' field");
  const std::string type = j["type"].get<std::string>();
  const std::string ctx = "permittivity model '" + type + "'";
  if (type == "perfect_conductor") {
    check_keys(j, {"type"}, ctx);
    return permittivity::perfect_conductor();
  }
  if (type == "constant") {
    check_keys(j, {"type", "eps"}, ctx);
    return permittivity::constant_eps(get_number(j, "eps", ctx));
  }
  if (type == "plasma") {
    check_keys(j, {"type", "omega_p"}, ctx);
    return permittivity::plasma(get_number(j, "omega_p", ctx));
  }
  if (type == "drude") {
    check_keys(j, {"type", "omega_p", "gamma"}, ctx);
    return permittivity::drude(get_number(j, "omega_p", ctx), get_number(j, "gamma", ctx));
  }
  if (type == "conductor") {
    check_keys(j, {"type", "sigma"}, ctx);
    return permittivity::conductor(get_number(j, "sigma", ctx));
  }
  if (type == "generalized_plasma") {
    check_keys(j, {"type", "omega_p", "base"}, ctx);
    if (!j.contains("base")) throw ConfigError(ctx + ": missing 'base'");
    return permittivity::generalized_plasma(model_from_json(j["base"]),
                                            get_number(j, "omega_p", ctx));
  }
  if (type == "tabulated") {
    check_keys(j, {"type", "file", "grid"}, ctx);
    if (j.contains("file") == j.contains("grid"))
      throw ConfigError(ctx + ": give exactly one of 'file' (optical data CSV) or 'grid'");
    if (j.contains("file")) {
      CsvTable t = read_csv_file(j["file"].get<std::string>(), {"omega_rad_s", "eps2"});
      std::vector<std::pair<double, double>> data;
      for (const auto& row : t.rows) data.emplace_back(row[0], row[1]);
      return permittivity::build_tabulated(data);
    }
    std::vector<double> xi, eps;
    for (const auto& p : j["grid"]) {
      if (!p.is_array() || p.size() != 2)
        throw ConfigError(ctx + ": 'grid' must contain [xi, eps] pairs");
      xi.push_back(p[0].get<double>());
      eps.push_back(p[1].get<double>());
    }
    return permittivity::tabulated(std::move(xi), std::move(eps));
  }
  throw ConfigError("permittivity model: unknown type '" + type + "'");
}

patches::PatchSpectrum spectrum_from_json(const json& j) {
  if (!j.is_object() || !j.contains("type") || !j["type"].is_string())
    throw ConfigError("patch spectrum: needs a string 'type' field");
  const std::string type = j["type"].get<std::string>();
  const std::string ctx = "patch spectrum '" + type + "'";
  if (type == "single_mode") {
    check_keys(j, {"type", "V0", "k"}, ctx);
    return patches::single_mode(get_number(j, "V0", ctx), get_number(j, "k", ctx));
  }
  if (type == "top_hat") {
    check_keys(j, {"type", "V0", "lambda_patch"}, ctx);
    return patches::top_hat(get_number(j, "V0", ctx), get_number(j, "lambda_patch", ctx));
  }
  if (type == "tabulated") {
    check_keys(j, {"type", "file", "samples"}, ctx);
    if (j.contains("file") == j.contains("samples"))
      throw ConfigError(ctx + ": give exactly one of 'file' or 'samples'");
    std::vector<std::pair<double, double>> samples;
    if (j.contains("file")) {
      CsvTable t = read_csv_file(j["file"].get<std::string>(), {"k_rad_m", "S_V2m2"});
      for (const auto& row : t.rows) samples.emplace_back(row[0], row[1]);
    } else {
      for (const auto& p : j["samples"]) {
        if (!p.is_array() || p.size() != 2)
          throw ConfigError(ctx + ": 'samples' must contain [k, S] pairs");
        samples.emplace_back(p[0].get<double>(), p[1].get<double>());
      }
    }
    return patches::tabulated_spectrum(std::move(samples));
  }
  throw ConfigError("patch spectrum: unknown type '" + type + "'");
}

lifshitz::TeZeroPolicy te_policy_from_string(const std::string& s) {
  if (s == "from_model") return lifshitz::TeZeroPolicy::FromModel;
  if (s == "force_include") return lifshitz::TeZeroPolicy::ForceInclude;
  if (s == "force_exclude") return lifshitz::TeZeroPolicy::ForceExclude;
  throw ConfigError("te_zero_policy: unknown value '" + s +
                    "' (use from_model, force_include or force_exclude)");
}

ForceConfig force_config_from_json(const json& j) {
  const std::string ctx = "force config";
  check_keys(j, {"plate_a", "plate_b", "gap", "d", "T", "te_zero_policy", "convergence", "R"},
             ctx);
  ForceConfig fc;
  if (!j.contains("plate_a") || !j.contains("plate_b"))
    throw ConfigError(ctx + ": needs 'plate_a' and 'plate_b' models");
  fc.problem.plate_a = model_from_json(j["plate_a"]);
  fc.problem.plate_b = model_from_json(j["plate_b"]);
  if (j.contains("gap")) fc.problem.gap = model_from_json(j["gap"]);
  fc.problem.T = get_number(j, "T", ctx);
  if (!j.contains("d")) throw ConfigError(ctx + ": missing 'd'");
  if (j["d"].is_number()) {
    fc.d_values.push_back(j["d"].get<double>());
  } else if (j["d"].is_array()) {
    for (const auto& v : j["d"]) fc.d_values.push_back(v.get<double>());
  } else {
    throw ConfigError(ctx + ": 'd' must be a number or an array");
  }
  if (fc.d_values.empty()) throw ConfigError(ctx + ": 'd' must not be empty");
  if (j.contains("te_zero_policy"))
    fc.problem.te_zero_policy = te_policy_from_string(j["te_zero_policy"].get<std::string>());
  if (j.contains("convergence")) {
    const auto& c = j["convergence"];
    check_keys(c, {"n_max", "kperp_tolerance"}, ctx + ".convergence");
    if (c.contains("n_max") && !c["n_max"].is_null())
      fc.problem.convergence.n_max = c["n_max"].get<int>();
    if (c.contains("kperp_tolerance"))
      fc.problem.convergence.kperp_tolerance = c["kperp_tolerance"].get<double>();
  }
  if (j.contains("R")) fc.R = get_number(j, "R", ctx);
  return fc;
}

simkit::ExperimentConfig experiment_config_from_json(const json& j) {
  const std::string ctx = "experiment config";
  check_keys(j,
             {"R", "T", "plate_model", "sphere_model", "patch_spec", "contact", "V1", "V_rms",
              "d0", "z_grid", "v_sweep", "sigma_F", "seed"},
             ctx);
  simkit::ExperimentConfig c;
  c.R = get_number(j, "R", ctx);
  c.T = get_number(j, "T", ctx);
  if (!j.contains("plate_model") || !j.contains("sphere_model"))
    throw ConfigError(ctx + ": needs 'plate_model' and 'sphere_model'");
  c.plate_model = model_from_json(j["plate_model"]);
  c.sphere_model = model_from_json(j["sphere_model"]);
  if (j.contains("patch_spec") && !j["patch_spec"].is_null())
    c.patch_spec = spectrum_from_json(j["patch_spec"]);
  if (!j.contains("contact")) throw ConfigError(ctx + ": missing 'contact'");
  check_keys(j["contact"], {"a", "b"}, ctx + ".contact");
  c.contact.a = get_number(j["contact"], "a", ctx + ".contact");
  c.contact.b = get_number(j["contact"], "b", ctx + ".contact");
  c.v1 = get_number(j, "V1", ctx);
  c.v_rms = get_number(j, "V_rms", ctx);
  c.d0 = get_number(j, "d0", ctx);
  c.z_grid = get_number_array(j, "z_grid", ctx);
  c.v_sweep = get_number_array(j, "v_sweep", ctx);
  c.sigma_f = get_number(j, "sigma_F", ctx);
  if (!j.contains("seed")) throw ConfigError(ctx + ": missing 'seed'");
  if (!j["seed"].is_number_unsigned() && !j["seed"].is_number_integer())
    throw ConfigError(ctx + ": 'seed' must be an integer");
  c.seed = j["seed"].get<std::uint64_t>();
  return c;
}

ojson residual_fit_to_json(const contact::ResidualFitResult& r) {
  ojson o;
  o["V1"] = r.v1;
  o["V_rms"] = r.v_rms;
  o["covariance"] = {{r.covariance[0], r.covariance[1]}, {r.covariance[2], r.covariance[3]}};
  o["residual_norm"] = r.residual_norm;
  o["chi2"] = r.chi2;
  o["dof"] = r.dof;
  o["V_rms_clamped"] = r.v_rms_clamped;
  return o;
}

ojson calibration_result_to_json(const simkit::CalibrationResult& r) {
  ojson o;
  o["d0_est"] = r.d0_est;
  o["d0_sigma"] = r.d0_sigma;
  ojson alpha = ojson::array();
  for (const auto& a : r.alpha_curve)
    alpha.push_back(ojson{{"z", a.z}, {"alpha", a.alpha}, {"sigma", a.sigma}});
  o["alpha_curve"] = std::move(alpha);
  ojson vm = ojson::array();
  for (const auto& v : r.vm_curve)
    vm.push_back(ojson{{"d", v.d}, {"V_m", v.v_m}, {"sigma", v.sigma}});
  o["vm_curve"] = std::move(vm);
  o["log_fit"] = ojson{{"a", r.log_fit.a},
                       {"b", r.log_fit.b},
                       {"sigma_a", r.log_fit.sigma_a},
                       {"sigma_b", r.log_fit.sigma_b}};
  o["residual_fit"] = residual_fit_to_json(r.residual_fit);
  ojson stages = ojson::array();
  for (const auto& g : r.goodness)
    stages.push_back(ojson{{"stage", g.stage}, {"chi2", g.chi2}, {"dof", g.dof}});
  o["goodness"] = std::move(stages);
  return o;
}

}  // namespace casikit::io
