#pragma once

#include <json.hpp>
#include <string>

#include "casikit/contact.hpp"
#include "casikit/lifshitz.hpp"
#include "casikit/patches.hpp"
#include "casikit/simkit.hpp"

namespace casikit::io {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

/// Parse JSON, translating parse failures into ConfigError with a
/// line/column diagnostic.
json parse_json(const std::string& text, const std::string& what);

/// Reject objects carrying keys outside `allowed` (typos in physics
/// parameters are errors, not warnings).
void check_keys(const json& j, std::initializer_list<const char*> allowed,
                const std::string& context);

permittivity::PermittivityModel model_from_json(const json& j);
patches::PatchSpectrum spectrum_from_json(const json& j);
lifshitz::TeZeroPolicy te_policy_from_string(const std::string& s);

/// LifshitzProblem plus the CLI extensions: "d" may be a number or an
/// array, optional "R" enables the sphere-plane force column.
struct ForceConfig {
  lifshitz::LifshitzProblem problem;  // problem.d unused; see d_values
  std::vector<double> d_values;
  double R = 0.0;  // 0 -> no sphere force column
};
ForceConfig force_config_from_json(const json& j);

simkit::ExperimentConfig experiment_config_from_json(const json& j);

ojson residual_fit_to_json(const contact::ResidualFitResult& r);
ojson calibration_result_to_json(const simkit::CalibrationResult& r);

}  // namespace casikit::io
