#include "casikit/simkit.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <numbers>

#include "casikit/constants.hpp"
#include "casikit/numerics/fit.hpp"
#include "casikit/numerics/rng.hpp"

namespace casikit::simkit {
namespace {

using namespace casikit::constants;
using std::numbers::pi;

// FNV-1a over the numeric content of the config; identifies a dataset's
// provenance, not a cryptographic commitment
struct Hasher {
  std::uint64_t h = 14695981039346656037ULL;
  void bytes(const void* p, std::size_t n) {
    const auto* b = static_cast<const unsigned char*>(p);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= b[i];
      h *= 1099511628211ULL;
    }
  }
  void add(double v) { bytes(&v, sizeof v); }
  void add(std::uint64_t v) { bytes(&v, sizeof v); }
  void add(int v) { bytes(&v, sizeof v); }
};

void hash_model(Hasher& h, const permittivity::PermittivityModel& m) {
  h.add(static_cast<int>(m.index()));
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, permittivity::ConstantEps>) {
          h.add(v.eps);
        } else if constexpr (std::is_same_v<T, permittivity::Plasma>) {
          h.add(v.omega_p);
        } else if constexpr (std::is_same_v<T, permittivity::Drude>) {
          h.add(v.omega_p);
          h.add(v.gamma);
        } else if constexpr (std::is_same_v<T, permittivity::GeneralizedPlasma>) {
          h.add(v.omega_p);
          if (auto* d = std::get_if<permittivity::Drude>(&v.base)) {
            h.add(d->omega_p);
            h.add(d->gamma);
          } else {
            const auto& t = std::get<permittivity::Tabulated>(v.base);
            for (std::size_t i = 0; i < t.xi.size(); ++i) {
              h.add(t.xi[i]);
              h.add(t.eps[i]);
            }
          }
        } else if constexpr (std::is_same_v<T, permittivity::Conductor>) {
          h.add(v.sigma);
        } else if constexpr (std::is_same_v<T, permittivity::Tabulated>) {
          for (std::size_t i = 0; i < v.xi.size(); ++i) {
            h.add(v.xi[i]);
            h.add(v.eps[i]);
          }
        }
      },
      m);
}

std::uint64_t config_hash(const ExperimentConfig& c) {
  Hasher h;
  h.add(c.R);
  h.add(c.T);
  hash_model(h, c.plate_model);
  hash_model(h, c.sphere_model);
  if (c.patch_spec) {
    h.add(static_cast<int>(c.patch_spec->index()));
    std::visit(
        [&](const auto& s) {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, patches::SingleMode>) {
            h.add(s.v0);
            h.add(s.k);
          } else if constexpr (std::is_same_v<T, patches::TopHatCorrelation>) {
            h.add(s.v0);
            h.add(s.lambda_patch);
          } else {
            for (const auto& [k, sv] : s.samples) {
              h.add(k);
              h.add(sv);
            }
          }
        },
        *c.patch_spec);
  }
  h.add(c.contact.a);
  h.add(c.contact.b);
  h.add(c.v1);
  h.add(c.v_rms);
  h.add(c.d0);
  for (double z : c.z_grid) h.add(z);
  for (double v : c.v_sweep) h.add(v);
  h.add(c.sigma_f);
  h.add(c.seed);
  return h.h;
}

void validate(const ExperimentConfig& c) {
  if (!(c.R > 0.0) || c.T < 0.0) throw ConfigError("config: R must be positive and T >= 0");
  if (c.z_grid.empty()) throw ConfigError("config: z_grid is empty");
  for (double z : c.z_grid)
    if (!(z + c.d0 > 0.0)) throw ConfigError("config: z + d0 must be positive at every position");
  if (c.v_sweep.size() < 5) throw ConfigError("config: v_sweep needs >= 5 values");
  const auto [vmin, vmax] = std::minmax_element(c.v_sweep.begin(), c.v_sweep.end());
  if (!(*vmin < 0.0 && *vmax > 0.0)) throw ConfigError("config: v_sweep must span both signs");
  if (c.sigma_f < 0.0) throw ConfigError("config: sigma_F must be >= 0");
  if (c.patch_spec && c.v_rms != 0.0)
    throw ConfigError(
        "config: with patch_spec enabled the residual V_rms must be zero (the patch term "
        "replaces it)");
}

double casimir_force_term(const permittivity::PermittivityModel& plate,
                          const permittivity::PermittivityModel& sphere, double T, double R,
                          double d, const AnalysisOptions& opt) {
  switch (opt.casimir) {
    case CasimirModelKind::None:
      return 0.0;
    case CasimirModelKind::IdealMirror:
      // -2 pi R E with E = -pi^2 hbar c / 720 d^3
      return pi * pi * pi * hbar * c * R / (360.0 * d * d * d);
    case CasimirModelKind::Lifshitz: {
      lifshitz::LifshitzProblem p;
      p.plate_a = plate;
      p.plate_b = sphere;
      p.d = d;
      p.T = T;
      p.te_zero_policy = opt.te_zero_policy;
      p.convergence = opt.convergence;
      return lifshitz::sphere_plane_force(p, R);
    }
  }
  return 0.0;
}

// sigmas usable as weights only if all strictly positive
std::vector<double> usable_sigmas(std::span<const double> s) {
  for (double v : s)
    if (!(v > 0.0)) return {};
  return {s.begin(), s.end()};
}

}  // namespace

SyntheticDataset simulate_dataset(const ExperimentConfig& config) {
  validate(config);
  std::vector<double> zs = config.z_grid, vs = config.v_sweep;
  std::sort(zs.begin(), zs.end());
  std::sort(vs.begin(), vs.end());

  AnalysisOptions lif;  // generation always uses the configured models
  lif.casimir = CasimirModelKind::Lifshitz;

  SyntheticDataset ds;
  ds.seed = config.seed;
  ds.config_hash = config_hash(config);
  ds.records.reserve(zs.size() * vs.size());

  std::uint64_t idx = 0;
  for (double z : zs) {
    const double d = z + config.d0;
    const double v_m = config.contact.a * std::log(d) + config.contact.b;
    const double f_res = contact::residual_force_model(d, v_m, config.v1, config.v_rms, config.R);
    const double f_cas = casimir_force_term(config.plate_model, config.sphere_model, config.T,
                                            config.R, d, lif);
    const double f_patch =
        config.patch_spec ? patches::patch_force_sphere_plane(*config.patch_spec, config.R, d)
                          : 0.0;
    const double alpha = pi * eps0 * config.R / d;
    for (double v : vs) {
      double f = alpha * (v - v_m) * (v - v_m) + f_res + f_cas + f_patch;
      if (config.sigma_f > 0.0)
        f += config.sigma_f * numerics::gaussian_at(config.seed, idx);
      ds.records.push_back({z, v, f, config.sigma_f});
      ++idx;
    }
  }
  return ds;
}

ParabolaFit fit_voltage_parabola(std::span<const Record> sweep) {
  std::vector<double> vs;
  for (const auto& r : sweep) vs.push_back(r.v);
  std::sort(vs.begin(), vs.end());
  vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
  if (vs.size() < 5 || !(vs.front() < 0.0 && vs.back() > 0.0))
    throw FitError("fit_voltage_parabola: need >= 5 distinct voltages spanning both signs");

  const std::size_t n = sweep.size();
  std::vector<double> y(n), s(n), ones(n, 1.0), v(n), v2(n);
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = sweep[i].f;
    s[i] = sweep[i].sigma;
    v[i] = sweep[i].v;
    v2[i] = sweep[i].v * sweep[i].v;
  }
  auto fit = numerics::fit_linear_weighted(y, usable_sigmas(s), {ones, v, v2});
  const double c0 = fit.beta[0], c1 = fit.beta[1], c2 = fit.beta[2];
  if (!(c2 > 0.0)) throw FitError("fit_voltage_parabola: fitted curvature is not positive");

  ParabolaFit out;
  out.alpha = c2;
  out.v_m = -c1 / (2.0 * c2);
  out.f0 = c0 - c1 * c1 / (4.0 * c2);
  out.chi2 = fit.chi2;
  out.dof = fit.dof;

  // delta-method propagation from the (c0, c1, c2) covariance
  const auto cv = [&](int a, int b) { return fit.cov[static_cast<std::size_t>(a * 3 + b)]; };
  out.alpha_sigma = std::sqrt(std::max(cv(2, 2), 0.0));
  {
    const double g1 = -1.0 / (2.0 * c2), g2 = c1 / (2.0 * c2 * c2);
    out.vm_sigma = std::sqrt(std::max(
        g1 * g1 * cv(1, 1) + g2 * g2 * cv(2, 2) + 2.0 * g1 * g2 * cv(1, 2), 0.0));
  }
  {
    const double g0 = 1.0, g1 = -c1 / (2.0 * c2), g2 = c1 * c1 / (4.0 * c2 * c2);
    out.f0_sigma = std::sqrt(std::max(
        g0 * g0 * cv(0, 0) + g1 * g1 * cv(1, 1) + g2 * g2 * cv(2, 2) +
            2.0 * (g0 * g1 * cv(0, 1) + g0 * g2 * cv(0, 2) + g1 * g2 * cv(1, 2)),
        0.0));
  }
  return out;
}

DistanceCalibration calibrate_distance(std::span<const AlphaSample> alpha_samples, double R) {
  if (alpha_samples.size() < 3)
    throw InsufficientDataError("calibrate_distance: need >= 3 positions");
  if (!(R > 0.0)) throw DomainError("calibrate_distance: R must be positive");
  const std::size_t n = alpha_samples.size();
  std::vector<double> y(n), sig(n), z(n), ones(n, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(alpha_samples[i].alpha > 0.0))
      throw DomainError("calibrate_distance: alpha must be positive");
    y[i] = 1.0 / alpha_samples[i].alpha;
    z[i] = alpha_samples[i].z;
    // sigma(1/alpha) = sigma_alpha / alpha^2
    sig[i] = alpha_samples[i].sigma / (alpha_samples[i].alpha * alpha_samples[i].alpha);
  }
  auto fit = numerics::fit_linear_weighted(y, usable_sigmas(sig), {ones, z});
  const double intercept = fit.beta[0], slope = fit.beta[1];
  if (!(slope > 0.0)) throw FitError("calibrate_distance: fitted slope is not positive");

  DistanceCalibration out;
  out.d0 = intercept / slope;
  out.pi_eps0_r = 1.0 / slope;
  out.chi2 = fit.chi2;
  out.dof = fit.dof;
  const double vc = fit.cov[0], vcs = fit.cov[1], vscov = fit.cov[3];
  const double g0 = 1.0 / slope, g1 = -intercept / (slope * slope);
  out.d0_sigma =
      std::sqrt(std::max(g0 * g0 * vc + g1 * g1 * vscov + 2.0 * g0 * g1 * vcs, 0.0));
  return out;
}

CalibrationResult run_analysis(const SyntheticDataset& dataset, double R, double T,
                               const permittivity::PermittivityModel& plate_model,
                               const permittivity::PermittivityModel& sphere_model,
                               const AnalysisOptions& options) {
  if (!(R > 0.0)) throw DomainError("run_analysis: R must be positive");
  CalibrationResult res;

  // stage 1: per-position voltage parabolas (records grouped and sorted so
  // the result is independent of input order)
  std::map<double, std::vector<Record>> groups;
  for (const auto& r : dataset.records) groups[r.z].push_back(r);
  if (groups.size() < 3)
    throw StageError("parabola", "need >= 3 positions, got " + std::to_string(groups.size()));

  std::vector<ParabolaFit> fits;
  double chi2_par = 0.0;
  int dof_par = 0;
  try {
    for (auto& [z, recs] : groups) {
      std::sort(recs.begin(), recs.end(), [](const Record& a, const Record& b) { return a.v < b.v; });
      ParabolaFit f = fit_voltage_parabola(recs);
      fits.push_back(f);
      res.alpha_curve.push_back({z, f.alpha, f.alpha_sigma});
      chi2_par += f.chi2;
      dof_par += f.dof;
    }
  } catch (const Error& e) {
    throw StageError("parabola", e.what());
  }
  res.goodness.push_back({"parabola", chi2_par, dof_par});

  // stage 2: absolute distance calibration from alpha^-1
  try {
    DistanceCalibration cal = calibrate_distance(res.alpha_curve, R);
    res.d0_est = cal.d0;
    res.d0_sigma = cal.d0_sigma;
    res.goodness.push_back({"distance", cal.chi2, cal.dof});
  } catch (const Error& e) {
    throw StageError("distance", e.what());
  }

  // stage 3: minimizing-potential log fit
  contact::MinimizingPotentialSamples vm;
  std::size_t gi = 0;
  for (auto& [z, recs] : groups) {
    const double d = z + res.d0_est;
    vm.d.push_back(d);
    vm.v.push_back(fits[gi].v_m);
    vm.sigma.push_back(fits[gi].vm_sigma);
    res.vm_curve.push_back({d, fits[gi].v_m, fits[gi].vm_sigma});
    ++gi;
  }
  if (usable_sigmas(vm.sigma).empty()) vm.sigma.clear();
  try {
    res.log_fit = contact::fit_log_potential(vm);
    res.goodness.push_back({"log_fit", res.log_fit.chi2, res.log_fit.dof});
  } catch (const Error& e) {
    throw StageError("log_fit", e.what());
  }

  // stages 4+5: Casimir subtraction and residual fit on the vertex forces
  try {
    std::vector<contact::ForceSample> samples;
    std::vector<double> vm_values;
    gi = 0;
    for (auto& [z, recs] : groups) {
      const double d = z + res.d0_est;
      const double f_cas =
          casimir_force_term(plate_model, sphere_model, T, R, d, options);
      samples.push_back({d, fits[gi].f0 - f_cas, fits[gi].f0_sigma});
      vm_values.push_back(fits[gi].v_m);
      ++gi;
    }
    bool weighted = true;
    for (const auto& s : samples)
      if (!(s.sigma > 0.0)) weighted = false;
    if (!weighted)
      for (auto& s : samples) s.sigma = 0.0;
    res.residual_fit = contact::fit_residual(samples, vm_values, R);
    res.goodness.push_back({"residual", res.residual_fit.chi2, res.residual_fit.dof});
  } catch (const StageError&) {
    throw;
  } catch (const Error& e) {
    throw StageError("residual", e.what());
  }
  return res;
}

}  // namespace casikit::simkit
