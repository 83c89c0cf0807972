#pragma once

// Monte-Carlo experiments: coverage sweeps, accuracy CDFs, tilt and image-noise
// sensitivity, and timing. Every trial draws from its own seed
// derive_seed(spec.seed, trial), so results do not depend on the thread count.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vlp/baselines.hpp"
#include "vlp/estimate.hpp"
#include "vlp/estimator_compensated.hpp"
#include "vlp/lm_solver.hpp"
#include "vlp/scene.hpp"
#include "vlp/sensing.hpp"

namespace vlp {

/// Estimators runnable by the accuracy-type experiments.
enum class Algorithm { Eca, EcaBasic, EcaCompensated, CaRssr, RssrIdeal, RssrPortable };

/// "eca-rssr", "eca-rssr-basic", "eca-rssr-comp", "ca-rssr", "rssr-ideal",
/// "rssr-portable". Throws UnknownAlgorithm.
Algorithm parse_algorithm(std::string_view name);
std::string_view to_string(Algorithm alg) noexcept;
int required_leds(Algorithm alg, Dimension dim);

/// Scene, receiver and noise shared by all experiments.
struct SimulationSetup {
    Scene scene = Scene::reference();
    Receiver receiver;
    SensingConfig sensing;
    /// When set, sigma_n puts the weakest in-FoV link exactly at the SNR
    /// threshold for a facing-up receiver with the PD configured here. The
    /// reference is the room corner on the receiver plane in 2D, and the
    /// weakest point of the 10 cm volume grid in 3D. Otherwise
    /// sensing.rss_noise is used as given.
    bool calibrate_noise = true;
    LmOptions lm;
    double delta = 0.06;  // m, basic/compensated switch
    double receiver_plane_z = 0.0;
    double max_z_3d = 2.5;  // 3D trials draw z from [0, max_z_3d]
};

/// sigma_n for `setup`, calibrated or as given.
NoiseModel effective_rss_noise(const SimulationSetup& setup, Dimension dim = Dimension::Two);

enum class ExperimentKind { Coverage, Accuracy, Tilt, ImageNoise, Timing };
std::string_view to_string(ExperimentKind kind) noexcept;

struct ExperimentSpec {
    ExperimentKind kind = ExperimentKind::Accuracy;
    int trials = 10000;
    std::uint64_t seed = 1;
    double grid_step = 0.1;  // m
    std::vector<double> fov_sweep_deg;
    std::vector<double> dpc_sweep_cm;
    std::vector<double> sigma_px_sweep;
    std::vector<std::string> algorithms;
    double snr_threshold_db = 13.6;
    Dimension dimension = Dimension::Two;
    double tilt_min_deg = 0.0;
    double tilt_max_deg = 10.0;
    double perturbation_max_deg = 5.0;
    double large_pe_threshold_m = 1.0;
    /// 0 means VLPSIM_THREADS or the hardware concurrency.
    int threads = 0;

    /// Defaults for `kind` (sweeps and algorithm lists).
    static ExperimentSpec defaults(ExperimentKind kind);
    void validate() const;  // throws InvalidArgument
};

struct TrialRecord {
    int trial = 0;
    ReceiverPose pose;
    std::string algorithm;
    double pe_m = 0.0;  // +inf when the estimator failed
    double elapsed_s = 0.0;
    std::string failure;  // empty on success
};

/// One algorithm at one sweep point.
struct TrialSeries {
    std::string algorithm;
    Dimension dimension = Dimension::Two;
    double dpc_cm = 0.0;
    double sigma_px = 0.0;
    std::vector<TrialRecord> trials;  // trial order

    std::vector<double> errors() const;
    /// Nearest-rank percentile of PE; failures count as +inf.
    double percentile(double p) const;
    /// Mean over successful trials; NaN if none succeeded.
    double mean_pe() const;
    /// Fraction of trials with PE above `threshold`, failures included.
    double large_pe_ratio(double threshold) const;
    int failures() const;
};

struct CoverageEntry {
    std::string algorithm;
    double cr = 0.0;
};

struct CoverageResult {
    double fov_deg = 0.0;
    Dimension dimension = Dimension::Two;
    std::vector<CoverageEntry> entries;

    /// Throws UnknownAlgorithm.
    double cr(std::string_view algorithm) const;
};

struct TimingResult {
    std::string algorithm;
    Dimension dimension = Dimension::Two;
    double median_s = 0.0;
    double mean_s = 0.0;
    double p95_s = 0.0;
    int samples = 0;
};

/// Nearest-rank percentile of `values` (p in (0, 100]). NaN for an empty input.
double nearest_rank_percentile(std::vector<double> values, double p);

/// Cell-centered grid points: 2D on the receiver plane, 3D over the room volume.
std::vector<Vec3> coverage_grid(const Room& room, double step, Dimension dim, double plane_z = 0.0);

std::vector<CoverageResult> run_coverage(const SimulationSetup& setup, const ExperimentSpec& spec);
std::vector<TrialSeries> run_accuracy(const SimulationSetup& setup, const ExperimentSpec& spec);
std::vector<TrialSeries> run_tilt(const SimulationSetup& setup, const ExperimentSpec& spec);
std::vector<TrialSeries> run_image_noise(const SimulationSetup& setup, const ExperimentSpec& spec);
std::vector<TimingResult> run_timing(const SimulationSetup& setup, const ExperimentSpec& spec);

/// Runs one estimator on a prepared observation set. `assumed_rotation` is what
/// the portable RSSR variant believes the receiver orientation to be.
PositionEstimate run_algorithm(Algorithm alg, const ObservationSet& obs, const SimulationSetup& setup,
                               const Receiver& rx, Dimension dim, const Rotation& assumed_rotation = {});

/// Thread count from `requested`, else VLPSIM_THREADS, else hardware concurrency.
int resolve_threads(int requested);

/// Calls fn(i) for i in [0, n) on up to `threads` workers. The first exception
/// thrown by any call is rethrown after all workers stop.
void parallel_for(int n, int threads, const std::function<void(int)>& fn);

}  // namespace vlp
