#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "casikit/contact.hpp"
#include "casikit/lifshitz.hpp"
#include "casikit/patches.hpp"

namespace casikit::simkit {

struct ContactParams {
  double a;  // volts per e-fold of distance
  double b;  // volts
};

/// Full description of a synthetic sphere-plane experiment. The measured
/// force at nominal position z and applied voltage V is
///   F = pi eps0 R (V - V_m(d))^2 / d + F_res(d) + F_casimir(d) + noise,
/// d = z + d0, V_m(d) = a ln d + b. When patch_spec is set the patch force
/// is generated from it and v_rms must be zero (one term, never both).
struct ExperimentConfig {
  double R = 0.0;
  double T = 0.0;
  permittivity::PermittivityModel plate_model;
  permittivity::PermittivityModel sphere_model;
  std::optional<patches::PatchSpectrum> patch_spec;
  ContactParams contact{0.0, 0.0};
  double v1 = 0.0;
  double v_rms = 0.0;
  double d0 = 0.0;          // true distance offset (m)
  std::vector<double> z_grid;   // nominal positions (m)
  std::vector<double> v_sweep;  // applied volts, both signs, >= 5 values
  double sigma_f = 0.0;         // per-record force noise (N)
  std::uint64_t seed = 0;
};

struct Record {
  double z;      // nominal position (m)
  double v;      // applied volts
  double f;      // force (N)
  double sigma;  // noise sigma (N)
};

struct SyntheticDataset {
  std::vector<Record> records;  // sorted by (z, v)
  std::uint64_t config_hash = 0;
  std::uint64_t seed = 0;
};

/// Deterministic dataset generation: record i draws its Gaussian noise from
/// a counter-based stream keyed by (seed, i), so regeneration (and parallel
/// generation) is bit-identical.
SyntheticDataset simulate_dataset(const ExperimentConfig& config);

struct ParabolaFit {
  double alpha;  // N/V^2
  double v_m;    // volts
  double f0;     // force at the vertex (N)
  double alpha_sigma;
  double vm_sigma;
  double f0_sigma;
  double chi2;
  int dof;
};

/// Weighted least squares of F = alpha (V - V_m)^2 + F0 on a fixed-position
/// voltage sweep. Requires >= 5 distinct voltages spanning both signs and a
/// positive fitted curvature.
ParabolaFit fit_voltage_parabola(std::span<const Record> sweep);

struct AlphaSample {
  double z;
  double alpha;
  double sigma;  // 0 when unknown
};

struct DistanceCalibration {
  double d0;        // m
  double d0_sigma;  // m
  double pi_eps0_r; // fitted slope^-1, constrains R
  double chi2;
  int dof;
};

/// Linear fit of alpha^-1 = (z + d0)/(pi eps0 R) over >= 3 positions.
DistanceCalibration calibrate_distance(std::span<const AlphaSample> alpha_samples, double R);

enum class CasimirModelKind { None, IdealMirror, Lifshitz };

struct AnalysisOptions {
  CasimirModelKind casimir = CasimirModelKind::Lifshitz;
  lifshitz::TeZeroPolicy te_zero_policy = lifshitz::TeZeroPolicy::FromModel;
  lifshitz::Convergence convergence;
};

struct VmSample {
  double d;
  double v_m;
  double sigma;
};

struct StageGoodness {
  std::string stage;
  double chi2;
  int dof;
};

struct CalibrationResult {
  double d0_est = 0.0;
  double d0_sigma = 0.0;
  std::vector<AlphaSample> alpha_curve;
  std::vector<VmSample> vm_curve;
  contact::LogFit log_fit{};
  contact::ResidualFitResult residual_fit{};
  std::vector<StageGoodness> goodness;  // stages in execution order
};

/// Full analysis pipeline: (1) per-position voltage parabolas, (2) absolute
/// distance from alpha^-1, (3) V_m(d) log fit, (4) Casimir-model
/// subtraction, (5) residual fit for (V1, V_rms). Failures throw StageError
/// tagged with the stage name.
CalibrationResult run_analysis(const SyntheticDataset& dataset, double R, double T,
                               const permittivity::PermittivityModel& plate_model,
                               const permittivity::PermittivityModel& sphere_model,
                               const AnalysisOptions& options = {});

}  // namespace casikit::simkit
