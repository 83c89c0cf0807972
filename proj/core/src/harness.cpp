#include "vlp/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <numbers>
#include <numeric>
#include <thread>
#include <tuple>

#include "vlp/error.hpp"
#include "vlp/estimator_basic.hpp"
#include "vlp/optical_channel.hpp"
#include "vlp/random.hpp"

namespace vlp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kMaxPoseAttempts = 100000;

std::string normalize(std::string_view name) {
    std::string out;
    for (char c : name) out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    return out;
}

}  // namespace

Algorithm parse_algorithm(std::string_view name) {
    const std::string key = normalize(name);
    if (key == "eca-rssr" || key == "ecarssr") return Algorithm::Eca;
    if (key == "eca-rssr-basic") return Algorithm::EcaBasic;
    if (key == "eca-rssr-comp" || key == "eca-rssr-compensated") return Algorithm::EcaCompensated;
    if (key == "ca-rssr" || key == "carssr") return Algorithm::CaRssr;
    if (key == "rssr-ideal") return Algorithm::RssrIdeal;
    if (key == "rssr-portable") return Algorithm::RssrPortable;
    throw Error(ErrorCode::UnknownAlgorithm, "unknown algorithm: " + std::string(name));
}

std::string_view to_string(Algorithm alg) noexcept {
    switch (alg) {
        case Algorithm::Eca: return "eca-rssr";
        case Algorithm::EcaBasic: return "eca-rssr-basic";
        case Algorithm::EcaCompensated: return "eca-rssr-comp";
        case Algorithm::CaRssr: return "ca-rssr";
        case Algorithm::RssrIdeal: return "rssr-ideal";
        case Algorithm::RssrPortable: return "rssr-portable";
    }
    return "unknown";
}

int required_leds(Algorithm alg, Dimension dim) {
    switch (alg) {
        case Algorithm::Eca:
        case Algorithm::EcaBasic:
        case Algorithm::EcaCompensated: return required_leds("eca-rssr").needed(dim);
        case Algorithm::CaRssr: return required_leds("ca-rssr").needed(dim);
        case Algorithm::RssrIdeal:
        case Algorithm::RssrPortable: return required_leds("rssr").needed(dim);
    }
    return 0;
}

std::string_view to_string(ExperimentKind kind) noexcept {
    switch (kind) {
        case ExperimentKind::Coverage: return "coverage";
        case ExperimentKind::Accuracy: return "accuracy";
        case ExperimentKind::Tilt: return "tilt";
        case ExperimentKind::ImageNoise: return "noise";
        case ExperimentKind::Timing: return "timing";
    }
    return "unknown";
}

NoiseModel effective_rss_noise(const SimulationSetup& setup, Dimension dim) {
    if (!setup.calibrate_noise) return setup.sensing.rss_noise;
    const int samples = setup.sensing.rss_noise.rss_samples_averaged;
    const double target = setup.sensing.snr_threshold_db;
    if (dim == Dimension::Two) {
        ReceiverPose corner;
        corner.position = Vec3(0.0, 0.0, setup.receiver_plane_z);
        return calibrate_noise(setup.scene, setup.receiver.pd, corner, target, samples);
    }
    std::optional<NoiseModel> weakest;
    for (const Vec3& p : coverage_grid(setup.scene.room(), 0.1, Dimension::Three)) {
        try {
            const NoiseModel n = calibrate_noise(setup.scene, setup.receiver.pd, ReceiverPose{p, Rotation()}, target,
                                                 samples);
            if (!weakest || n.current_noise_std < weakest->current_noise_std) weakest = n;
        } catch (const Error& e) {
            if (e.code() != ErrorCode::NoVisibleLink) throw;
        }
    }
    if (!weakest) throw Error(ErrorCode::NoVisibleLink, "no grid point sees an LED");
    return *weakest;
}

ExperimentSpec ExperimentSpec::defaults(ExperimentKind kind) {
    ExperimentSpec s;
    s.kind = kind;
    s.sigma_px_sweep = {2.5};
    switch (kind) {
        case ExperimentKind::Coverage:
            for (int f = 0; f <= 80; f += 5) s.fov_sweep_deg.push_back(f);
            s.algorithms = {"rssr", "pnp", "ca-rssr", "eca-rssr"};
            break;
        case ExperimentKind::Accuracy:
            s.dpc_sweep_cm = {0, 1, 3, 6, 10, 20};
            s.algorithms = {"eca-rssr", "ca-rssr"};
            break;
        case ExperimentKind::Tilt:
            s.dpc_sweep_cm = {1, 10};
            s.algorithms = {"eca-rssr", "ca-rssr", "rssr-ideal", "rssr-portable"};
            break;
        case ExperimentKind::ImageNoise:
            s.dpc_sweep_cm = {1, 10};
            s.sigma_px_sweep = {0, 2.5, 5, 7.5, 10};
            s.algorithms = {"eca-rssr", "ca-rssr"};
            break;
        case ExperimentKind::Timing:
            s.trials = 1000;
            s.dpc_sweep_cm = {1};
            s.algorithms = {"eca-rssr-basic", "eca-rssr-comp", "ca-rssr", "rssr-ideal"};
            break;
    }
    return s;
}

void ExperimentSpec::validate() const {
    const auto fail = [](const std::string& what) { throw Error(ErrorCode::InvalidArgument, what); };
    if (trials < 1) fail("trials must be >= 1");
    if (!(grid_step > 0.0)) fail("grid_step must be positive");
    if (algorithms.empty()) fail("algorithm list is empty");
    if (threads < 0) fail("threads must be >= 0");
    if (!(tilt_min_deg >= 0.0 && tilt_max_deg >= tilt_min_deg && tilt_max_deg < 90.0)) fail("invalid tilt range");
    if (!(perturbation_max_deg >= 0.0 && perturbation_max_deg < 90.0)) fail("invalid perturbation bound");
    if (kind == ExperimentKind::Coverage) {
        if (fov_sweep_deg.empty()) fail("fov sweep is empty");
        for (double f : fov_sweep_deg) {
            if (!(f >= 0.0 && f <= 90.0)) fail("fov must lie in [0, 90] degrees");
        }
        for (const auto& a : algorithms) required_leds(a);
        return;
    }
    if (dpc_sweep_cm.empty()) fail("dpc sweep is empty");
    for (double d : dpc_sweep_cm) {
        if (!(d >= 0.0) || !std::isfinite(d)) fail("dpc must be non-negative");
    }
    if (kind == ExperimentKind::ImageNoise && sigma_px_sweep.empty()) fail("sigma_px sweep is empty");
    for (double s : sigma_px_sweep) {
        if (!(s >= 0.0) || !std::isfinite(s)) fail("sigma_px must be non-negative");
    }
    for (const auto& a : algorithms) parse_algorithm(a);
}

std::vector<double> TrialSeries::errors() const {
    std::vector<double> out;
    out.reserve(trials.size());
    for (const auto& t : trials) out.push_back(t.pe_m);
    return out;
}

double TrialSeries::percentile(double p) const { return nearest_rank_percentile(errors(), p); }

double TrialSeries::mean_pe() const {
    double sum = 0.0;
    int n = 0;
    for (const auto& t : trials) {
        if (t.failure.empty()) {
            sum += t.pe_m;
            ++n;
        }
    }
    return n == 0 ? std::numeric_limits<double>::quiet_NaN() : sum / n;
}

double TrialSeries::large_pe_ratio(double threshold) const {
    if (trials.empty()) return std::numeric_limits<double>::quiet_NaN();
    const auto n = std::count_if(trials.begin(), trials.end(),
                                 [&](const TrialRecord& t) { return !t.failure.empty() || t.pe_m > threshold; });
    return static_cast<double>(n) / static_cast<double>(trials.size());
}

int TrialSeries::failures() const {
    return static_cast<int>(
        std::count_if(trials.begin(), trials.end(), [](const TrialRecord& t) { return !t.failure.empty(); }));
}

double CoverageResult::cr(std::string_view algorithm) const {
    const std::string key = required_leds(algorithm).algorithm;
    for (const auto& e : entries) {
        if (e.algorithm == key) return e.cr;
    }
    throw Error(ErrorCode::UnknownAlgorithm, "algorithm not in coverage result: " + std::string(algorithm));
}

double nearest_rank_percentile(std::vector<double> values, double p) {
    if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
    if (!(p > 0.0 && p <= 100.0)) throw Error(ErrorCode::InvalidArgument, "percentile must lie in (0, 100]");
    const auto n = values.size();
    auto rank = static_cast<std::size_t>(std::ceil(p / 100.0 * static_cast<double>(n) - 1e-9));
    rank = std::clamp<std::size_t>(rank, 1, n);
    std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(rank - 1), values.end());
    return values[rank - 1];
}

std::vector<Vec3> coverage_grid(const Room& room, double step, Dimension dim, double plane_z) {
    if (!(step > 0.0)) throw Error(ErrorCode::InvalidArgument, "grid step must be positive");
    const auto cells = [step](double extent) { return static_cast<int>(std::floor(extent / step + 1e-9)); };
    const int nx = cells(room.length);
    const int ny = cells(room.width);
    const int nz = dim == Dimension::Two ? 1 : cells(room.height);
    std::vector<Vec3> out;
    out.reserve(static_cast<std::size_t>(nx) * ny * nz);
    for (int k = 0; k < nz; ++k) {
        const double z = dim == Dimension::Two ? plane_z : (k + 0.5) * step;
        for (int i = 0; i < nx; ++i) {
            for (int j = 0; j < ny; ++j) out.emplace_back((i + 0.5) * step, (j + 0.5) * step, z);
        }
    }
    return out;
}

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("VLPSIM_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && v > 0) return static_cast<int>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
    threads = std::clamp(threads, 1, std::max(n, 1));
    if (threads == 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    const auto worker = [&] {
        for (int i = next++; i < n; i = next++) {
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
                next = n;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

PositionEstimate run_algorithm(Algorithm alg, const ObservationSet& obs, const SimulationSetup& setup,
                               const Receiver& rx, Dimension dim, const Rotation& assumed_rotation) {
    CompensationConfig cc;
    cc.pd_offset = rx.pd_offset;
    cc.pd_normal_camera = rx.pd.normal_camera;
    cc.threshold = setup.delta;
    cc.receiver_plane_z = setup.receiver_plane_z;
    cc.lm = setup.lm;
    BaselineConfig bc;
    bc.receiver_plane_z = setup.receiver_plane_z;
    bc.portable_rotation = assumed_rotation;
    bc.lm = setup.lm;
    switch (alg) {
        case Algorithm::Eca: return estimate(obs, setup.scene, rx.camera, cc, dim);
        case Algorithm::EcaBasic: return estimate_basic(obs, setup.scene, rx.camera, dim);
        case Algorithm::EcaCompensated: return estimate_compensated(obs, setup.scene, rx.camera, cc, dim);
        case Algorithm::CaRssr: return estimate_ca_rssr(obs, setup.scene, rx.camera, dim, bc);
        case Algorithm::RssrIdeal: return estimate_rssr(obs, setup.scene, rx, RssrVariant::Ideal, dim, bc);
        case Algorithm::RssrPortable: return estimate_rssr(obs, setup.scene, rx, RssrVariant::Portable, dim, bc);
    }
    throw Error(ErrorCode::UnknownAlgorithm, "unknown algorithm");
}

std::vector<CoverageResult> run_coverage(const SimulationSetup& setup, const ExperimentSpec& spec) {
    spec.validate();
    const NoiseModel noise = effective_rss_noise(setup, spec.dimension);
    const std::vector<Vec3> grid = coverage_grid(setup.scene.room(), spec.grid_step, spec.dimension,
                                                 setup.receiver_plane_z);
    std::vector<LedRequirement> reqs;
    for (const auto& a : spec.algorithms) reqs.push_back(required_leds(a));
    std::sort(reqs.begin(), reqs.end(), [](const auto& a, const auto& b) { return a.algorithm < b.algorithm; });

    std::vector<double> fovs = spec.fov_sweep_deg;
    std::sort(fovs.begin(), fovs.end());
    const int threads = resolve_threads(spec.threads);

    std::vector<CoverageResult> out;
    for (double fov : fovs) {
        Receiver rx = setup.receiver;
        rx.pd.fov_deg = fov;
        rx.pd_offset = Vec3::Zero();
        SensingConfig sc = setup.sensing;
        sc.rss_noise = noise;
        sc.snr_threshold_db = spec.snr_threshold_db;

        std::vector<int> visible(grid.size());
        parallel_for(static_cast<int>(grid.size()), threads, [&](int i) {
            ReceiverPose pose;
            pose.position = grid[static_cast<std::size_t>(i)];
            visible[static_cast<std::size_t>(i)] = count_visible(setup.scene, pose, rx, sc);
        });

        CoverageResult res;
        res.fov_deg = fov;
        res.dimension = spec.dimension;
        for (const auto& req : reqs) {
            const int need = req.needed(spec.dimension);
            const auto ok = std::count_if(visible.begin(), visible.end(), [need](int v) { return v >= need; });
            res.entries.push_back({req.algorithm, grid.empty() ? 0.0 : static_cast<double>(ok) / grid.size()});
        }
        out.push_back(std::move(res));
    }
    return out;
}

namespace {

struct SweepPoint {
    double dpc_cm = 0.0;
    double sigma_px = 0.0;
};

struct DrawnPose {
    ReceiverPose pose;
    Rotation nominal;  // orientation known without the random perturbation
};

using OrientationSampler = std::function<DrawnPose(const Vec3& position, Rng& rng)>;

Vec3 uniform_position(const SimulationSetup& setup, Dimension dim, Rng& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const Room& room = setup.scene.room();
    const double x = u(rng) * room.length;
    const double y = u(rng) * room.width;
    const double z = dim == Dimension::Two ? setup.receiver_plane_z : u(rng) * setup.max_z_3d;
    return {x, y, z};
}

Vec3 random_horizontal_axis(Rng& rng) {
    std::uniform_real_distribution<double> u(0.0, 2.0 * std::numbers::pi);
    const double a = u(rng);
    return {std::cos(a), std::sin(a), 0.0};
}

Vec3 random_unit_vector(Rng& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    Vec3 v;
    do {
        v = Vec3(n(rng), n(rng), n(rng));
    } while (v.norm() < 1e-12);
    return v.normalized();
}

DrawnPose facing_up(const Vec3& position, Rng&) { return {ReceiverPose{position, Rotation()}, Rotation()}; }

Receiver receiver_for(const SimulationSetup& setup, double dpc_cm) {
    Receiver rx = setup.receiver;
    rx.pd_offset = Vec3(dpc_cm / 100.0, 0.0, 0.0);
    return rx;
}

std::vector<Algorithm> parse_all(const std::vector<std::string>& names) {
    std::vector<Algorithm> out;
    for (const auto& n : names) out.push_back(parse_algorithm(n));
    std::sort(out.begin(), out.end(), [](Algorithm a, Algorithm b) { return to_string(a) < to_string(b); });
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

int max_requirement(const std::vector<Algorithm>& algs, Dimension dim) {
    int need = 0;
    for (auto a : algs) need = std::max(need, required_leds(a, dim));
    return need;
}

/// Draws a pose from the trial stream until at least `need` LEDs are visible.
std::optional<DrawnPose> feasible_pose(const SimulationSetup& setup, const Receiver& rx, const SensingConfig& sc,
                                       Dimension dim, int need, const OrientationSampler& orient,
                                       std::uint64_t pose_seed) {
    Rng rng(pose_seed);
    for (int attempt = 0; attempt < kMaxPoseAttempts; ++attempt) {
        const Vec3 p = uniform_position(setup, dim, rng);
        DrawnPose d = orient(p, rng);
        if (count_visible(setup.scene, d.pose, rx, sc) >= need) return d;
    }
    return std::nullopt;
}

TrialRecord run_one(Algorithm alg, const ObservationSet& obs, const SimulationSetup& setup, const Receiver& rx,
                    Dimension dim, const DrawnPose& drawn, int trial) {
    TrialRecord rec;
    rec.trial = trial;
    rec.pose = drawn.pose;
    rec.algorithm = std::string(to_string(alg));
    const auto t0 = std::chrono::steady_clock::now();
    try {
        const PositionEstimate est = run_algorithm(alg, obs, setup, rx, dim, drawn.nominal);
        rec.elapsed_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const double pe = positioning_error(est, drawn.pose.position, setup.receiver_plane_z);
        if (std::isfinite(pe)) {
            rec.pe_m = pe;
        } else {
            rec.pe_m = kInf;
            rec.failure = "non-finite estimate";
        }
    } catch (const Error& e) {
        rec.elapsed_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        rec.pe_m = kInf;
        rec.failure = std::string(to_string(e.code()));
    }
    return rec;
}

std::vector<TrialSeries> run_trials(const SimulationSetup& setup, const ExperimentSpec& spec,
                                    const std::vector<SweepPoint>& points, const OrientationSampler& orient) {
    spec.validate();
    const std::vector<Algorithm> algs = parse_all(spec.algorithms);
    const int need = max_requirement(algs, spec.dimension);
    const NoiseModel noise = effective_rss_noise(setup, spec.dimension);

    std::vector<TrialSeries> series;
    for (const auto& pt : points) {
        for (auto a : algs) {
            TrialSeries s;
            s.algorithm = std::string(to_string(a));
            s.dimension = spec.dimension;
            s.dpc_cm = pt.dpc_cm;
            s.sigma_px = pt.sigma_px;
            s.trials.resize(static_cast<std::size_t>(spec.trials));
            series.push_back(std::move(s));
        }
    }

    parallel_for(spec.trials, resolve_threads(spec.threads), [&](int trial) {
        const std::uint64_t trial_seed = derive_seed(spec.seed, static_cast<std::uint64_t>(trial));
        for (std::size_t p = 0; p < points.size(); ++p) {
            const Receiver rx = receiver_for(setup, points[p].dpc_cm);
            SensingConfig sc = setup.sensing;
            sc.rss_noise = noise;
            sc.snr_threshold_db = spec.snr_threshold_db;
            sc.image_noise.pixel_noise_std = points[p].sigma_px;

            const auto drawn = feasible_pose(setup, rx, sc, spec.dimension, need, orient, derive_seed(trial_seed, 0));
            std::optional<ObservationSet> obs;
            if (drawn) obs = observe(setup.scene, drawn->pose, rx, sc, derive_seed(trial_seed, 1));
            for (std::size_t a = 0; a < algs.size(); ++a) {
                TrialRecord& rec = series[p * algs.size() + a].trials[static_cast<std::size_t>(trial)];
                if (!drawn) {
                    rec.trial = trial;
                    rec.algorithm = std::string(to_string(algs[a]));
                    rec.pe_m = kInf;
                    rec.failure = "no feasible pose";
                    continue;
                }
                rec = run_one(algs[a], *obs, setup, rx, spec.dimension, *drawn, trial);
            }
        }
    });
    return series;
}

std::vector<SweepPoint> dpc_points(const ExperimentSpec& spec, double sigma_px) {
    std::vector<double> dpcs = spec.dpc_sweep_cm;
    std::sort(dpcs.begin(), dpcs.end());
    dpcs.erase(std::unique(dpcs.begin(), dpcs.end()), dpcs.end());
    std::vector<SweepPoint> out;
    for (double d : dpcs) out.push_back({d, sigma_px});
    return out;
}

}  // namespace

std::vector<TrialSeries> run_accuracy(const SimulationSetup& setup, const ExperimentSpec& spec) {
    return run_trials(setup, spec, dpc_points(spec, setup.sensing.image_noise.pixel_noise_std), facing_up);
}

std::vector<TrialSeries> run_tilt(const SimulationSetup& setup, const ExperimentSpec& spec) {
    const double lo = deg_to_rad(spec.tilt_min_deg);
    const double hi = deg_to_rad(spec.tilt_max_deg);
    const double dmax = deg_to_rad(spec.perturbation_max_deg);
    const OrientationSampler tilted = [lo, hi, dmax](const Vec3& position, Rng& rng) {
        std::uniform_real_distribution<double> u(0.0, 1.0);
        const Rotation preset = Rotation::about_axis(random_horizontal_axis(rng), lo + (hi - lo) * u(rng));
        const Rotation perturb = Rotation::about_axis(random_unit_vector(rng), dmax * u(rng));
        return DrawnPose{ReceiverPose{position, perturb * preset}, preset};
    };
    return run_trials(setup, spec, dpc_points(spec, setup.sensing.image_noise.pixel_noise_std), tilted);
}

std::vector<TrialSeries> run_image_noise(const SimulationSetup& setup, const ExperimentSpec& spec) {
    std::vector<double> sigmas = spec.sigma_px_sweep;
    std::sort(sigmas.begin(), sigmas.end());
    sigmas.erase(std::unique(sigmas.begin(), sigmas.end()), sigmas.end());
    std::vector<SweepPoint> points;
    for (double s : sigmas) {
        for (const auto& p : dpc_points(spec, s)) points.push_back(p);
    }
    return run_trials(setup, spec, points, facing_up);
}

std::vector<TimingResult> run_timing(const SimulationSetup& setup, const ExperimentSpec& spec) {
    spec.validate();
    const std::vector<Algorithm> algs = parse_all(spec.algorithms);
    const int need = max_requirement(algs, spec.dimension);
    const Receiver rx = receiver_for(setup, spec.dpc_sweep_cm.front());
    SensingConfig sc = setup.sensing;
    sc.rss_noise = effective_rss_noise(setup, spec.dimension);
    sc.snr_threshold_db = spec.snr_threshold_db;

    // Inputs are prepared up front so only the estimators are timed.
    struct Input {
        DrawnPose drawn;
        ObservationSet obs;
    };
    std::vector<Input> inputs;
    inputs.reserve(static_cast<std::size_t>(spec.trials));
    for (int trial = 0; trial < spec.trials; ++trial) {
        const std::uint64_t trial_seed = derive_seed(spec.seed, static_cast<std::uint64_t>(trial));
        const auto drawn = feasible_pose(setup, rx, sc, spec.dimension, need, facing_up, derive_seed(trial_seed, 0));
        if (!drawn) continue;
        inputs.push_back({*drawn, observe(setup.scene, drawn->pose, rx, sc, derive_seed(trial_seed, 1))});
    }

    std::vector<TimingResult> out;
    for (auto alg : algs) {
        if (!inputs.empty()) run_one(alg, inputs.front().obs, setup, rx, spec.dimension, inputs.front().drawn, 0);
        std::vector<double> times;
        times.reserve(inputs.size());
        for (std::size_t i = 0; i < inputs.size(); ++i) {
            const TrialRecord rec =
                run_one(alg, inputs[i].obs, setup, rx, spec.dimension, inputs[i].drawn, static_cast<int>(i));
            if (rec.failure.empty()) times.push_back(rec.elapsed_s);
        }
        TimingResult r;
        r.algorithm = std::string(to_string(alg));
        r.dimension = spec.dimension;
        r.samples = static_cast<int>(times.size());
        if (!times.empty()) {
            r.median_s = nearest_rank_percentile(times, 50.0);
            r.p95_s = nearest_rank_percentile(times, 95.0);
            r.mean_s = std::accumulate(times.begin(), times.end(), 0.0) / static_cast<double>(times.size());
        } else {
            r.median_s = r.mean_s = r.p95_s = std::numeric_limits<double>::quiet_NaN();
        }
        out.push_back(r);
    }
    return out;
}

}  // namespace vlp
