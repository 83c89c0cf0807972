#pragma once

// vlpsim command line: JSON run config, experiment dispatch, single-shot
// estimation. Kept in a library so tests can drive it in-process.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "vlp/harness.hpp"

namespace vlpsim {

inline constexpr int kSchemaVersion = 1;
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitRuntime = 2;

/// Experiment settings that are left to the per-kind defaults when unset.
struct ExperimentOverrides {
    std::optional<int> trials;
    std::optional<std::uint64_t> seed;
    std::optional<double> grid_step_m;
    std::optional<vlp::Dimension> dimension;
    std::optional<std::vector<double>> fov_deg;
    std::optional<std::vector<double>> dpc_cm;
    std::optional<std::vector<double>> sigma_px;
    std::optional<std::vector<std::string>> algorithms;
    std::optional<double> tilt_min_deg;
    std::optional<double> tilt_max_deg;
    std::optional<double> perturbation_max_deg;
    std::optional<int> threads;
};

struct RunConfig {
    vlp::SimulationSetup setup;
    /// Unset: sigma_n is calibrated against the SNR threshold.
    std::optional<double> current_noise_std;
    ExperimentOverrides experiment;
    bool paper_scale = false;
    bool record_elapsed = false;
    std::string output_dir = "results";

    /// Effective spec for `kind`: defaults, then paper scale, then overrides.
    vlp::ExperimentSpec spec(vlp::ExperimentKind kind) const;
    /// Setup with the noise choice applied.
    vlp::SimulationSetup resolved_setup() const;
};

/// Thrown for malformed or inconsistent configuration (exit code 1).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

nlohmann::json scene_to_json(const vlp::Scene& scene);
vlp::Scene scene_from_json(const nlohmann::json& j);

nlohmann::json config_to_json(const RunConfig& cfg);
/// Unknown keys and a missing or unsupported schema_version are ConfigErrors.
RunConfig config_from_json(const nlohmann::json& j);

RunConfig load_config(const std::string& path);
vlp::Scene load_scene(const std::string& path);

/// "a:b:c" (inclusive start:stop:step) or a comma-separated list.
std::vector<double> parse_sweep(const std::string& text);
std::vector<double> parse_list(const std::string& text);

/// JSON array of {led_id, power_w, pixel: [u, v]}; every entry counts as visible.
vlp::ObservationSet observations_from_json(const nlohmann::json& j);
vlp::ObservationSet load_observations(const std::string& path);

/// Full CLI. Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace vlpsim
