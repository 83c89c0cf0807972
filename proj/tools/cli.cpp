#include "cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "vlp/error.hpp"
#include "vlp/results_io.hpp"

namespace vlpsim {

using nlohmann::json;
using vlp::Dimension;
using vlp::ExperimentKind;

namespace {

void check_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
    if (!j.is_object()) throw ConfigError(where + ": expected an object");
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [key, value] : j.items()) {
        if (!ok.count(key)) throw ConfigError(where + ": unknown key \"" + key + "\"");
    }
}

template <class T>
void read(const json& j, const char* key, T& dst) {
    if (auto it = j.find(key); it != j.end()) dst = it->get<T>();
}

template <class T>
void read(const json& j, const char* key, std::optional<T>& dst) {
    if (auto it = j.find(key); it != j.end() && !it->is_null()) dst = it->get<T>();
}

vlp::Vec3 vec3(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 3) throw ConfigError(where + ": expected [x, y, z]");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

Dimension parse_dimension(const std::string& s) {
    if (s == "2d" || s == "2D") return Dimension::Two;
    if (s == "3d" || s == "3D") return Dimension::Three;
    throw ConfigError("dimension must be 2d or 3d, got \"" + s + "\"");
}

bool parse_image_bounds(const std::string& s) {
    if (s == "unbounded") return false;
    if (s == "sensor") return true;
    throw ConfigError("image_bounds must be unbounded or sensor, got \"" + s + "\"");
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, sep)) {
        const auto b = item.find_first_not_of(" \t");
        const auto e = item.find_last_not_of(" \t");
        out.push_back(b == std::string::npos ? std::string() : item.substr(b, e - b + 1));
    }
    return out;
}

double to_double(const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw ConfigError("not a number: \"" + s + "\"");
    }
    if (used != s.size() || !std::isfinite(v)) throw ConfigError("not a number: \"" + s + "\"");
    return v;
}

}  // namespace

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    for (const auto& item : split(text, ',')) out.push_back(to_double(item));
    if (out.empty()) throw ConfigError("empty list");
    return out;
}

std::vector<double> parse_sweep(const std::string& text) {
    if (text.find(':') == std::string::npos) return parse_list(text);
    const auto parts = split(text, ':');
    if (parts.size() != 3) throw ConfigError("sweep must be start:stop:step, got \"" + text + "\"");
    const double a = to_double(parts[0]);
    const double b = to_double(parts[1]);
    const double step = to_double(parts[2]);
    if (!(step > 0.0) || b < a) throw ConfigError("sweep needs step > 0 and stop >= start");
    std::vector<double> out;
    const auto n = static_cast<long>(std::floor((b - a) / step + 1e-9));
    for (long k = 0; k <= n; ++k) out.push_back(a + static_cast<double>(k) * step);
    return out;
}

json scene_to_json(const vlp::Scene& scene) {
    json leds = json::array();
    for (const auto& led : scene.leds()) {
        leds.push_back({{"id", led.id},
                        {"position", {led.position.x(), led.position.y(), led.position.z()}},
                        {"transmit_power_w", led.transmit_power},
                        {"semiangle_deg", led.semiangle_deg}});
    }
    const auto& r = scene.room();
    return {{"room", {{"length", r.length}, {"width", r.width}, {"height", r.height}}}, {"leds", leds}};
}

vlp::Scene scene_from_json(const json& j) {
    check_keys(j, {"room", "leds"}, "scene");
    vlp::Room room;
    if (auto it = j.find("room"); it != j.end()) {
        check_keys(*it, {"length", "width", "height"}, "scene.room");
        read(*it, "length", room.length);
        read(*it, "width", room.width);
        read(*it, "height", room.height);
    }
    if (!j.contains("leds")) return vlp::Scene(room, vlp::Scene::reference().leds());
    if (!j.at("leds").is_array()) throw ConfigError("scene.leds: expected an array");
    std::vector<vlp::LedFixture> leds;
    for (const auto& l : j.at("leds")) {
        check_keys(l, {"id", "position", "transmit_power_w", "semiangle_deg"}, "scene.leds[]");
        vlp::LedFixture led;
        read(l, "id", led.id);
        if (!l.contains("position")) throw ConfigError("scene.leds[]: missing position");
        led.position = vec3(l.at("position"), "scene.leds[].position");
        read(l, "transmit_power_w", led.transmit_power);
        read(l, "semiangle_deg", led.semiangle_deg);
        leds.push_back(led);
    }
    try {
        return vlp::Scene(room, std::move(leds));
    } catch (const vlp::Error& e) {
        throw ConfigError(std::string("scene: ") + e.what());
    }
}

vlp::ExperimentSpec RunConfig::spec(ExperimentKind kind) const {
    vlp::ExperimentSpec s = vlp::ExperimentSpec::defaults(kind);
    if (paper_scale) {
        s.trials = 100000;
        s.grid_step = 0.05;
    }
    const auto& o = experiment;
    if (o.trials) s.trials = *o.trials;
    if (o.seed) s.seed = *o.seed;
    if (o.grid_step_m) s.grid_step = *o.grid_step_m;
    if (o.dimension) s.dimension = *o.dimension;
    if (o.fov_deg) s.fov_sweep_deg = *o.fov_deg;
    if (o.dpc_cm) s.dpc_sweep_cm = *o.dpc_cm;
    if (o.sigma_px) s.sigma_px_sweep = *o.sigma_px;
    if (o.algorithms) s.algorithms = *o.algorithms;
    if (o.tilt_min_deg) s.tilt_min_deg = *o.tilt_min_deg;
    if (o.tilt_max_deg) s.tilt_max_deg = *o.tilt_max_deg;
    if (o.perturbation_max_deg) s.perturbation_max_deg = *o.perturbation_max_deg;
    if (o.threads) s.threads = *o.threads;
    s.snr_threshold_db = setup.sensing.snr_threshold_db;
    return s;
}

vlp::SimulationSetup RunConfig::resolved_setup() const {
    vlp::SimulationSetup s = setup;
    s.calibrate_noise = !current_noise_std.has_value();
    if (current_noise_std) s.sensing.rss_noise.current_noise_std = *current_noise_std;
    return s;
}

json config_to_json(const RunConfig& cfg) {
    const auto& s = cfg.setup;
    const auto& cam = s.receiver.camera;
    const auto& pd = s.receiver.pd;
    json j;
    j["schema_version"] = kSchemaVersion;
    j["scene"] = scene_to_json(s.scene);
    j["camera"] = {{"fu", cam.fu}, {"fv", cam.fv}, {"u0", cam.u0}, {"v0", cam.v0},
                   {"width", cam.width}, {"height", cam.height}};
    j["photodiode"] = {{"area_m2", pd.area},
                       {"filter_gain", pd.filter_gain},
                       {"concentrator_index", pd.concentrator_index},
                       {"fov_deg", pd.fov_deg},
                       {"responsivity_a_per_w", pd.responsivity}};
    j["noise"] = {{"pixel_std_px", s.sensing.image_noise.pixel_noise_std},
                  {"images_averaged", s.sensing.image_noise.images_averaged},
                  {"rss_samples_averaged", s.sensing.rss_noise.rss_samples_averaged},
                  {"current_noise_std_a", cfg.current_noise_std ? json(*cfg.current_noise_std) : json(nullptr)},
                  {"snr_threshold_db", s.sensing.snr_threshold_db}};
    j["image_bounds"] = s.sensing.enforce_image_bounds ? "sensor" : "unbounded";
    j["lm"] = {{"initial_damping", s.lm.initial_damping},
               {"damping_increase", s.lm.damping_increase},
               {"damping_decrease", s.lm.damping_decrease},
               {"gradient_tolerance", s.lm.gradient_tolerance},
               {"step_tolerance", s.lm.step_tolerance},
               {"max_iterations", s.lm.max_iterations},
               {"finite_difference_step", s.lm.finite_difference_step}};
    j["delta_cm"] = s.delta * 100.0;
    j["receiver_plane_z_m"] = s.receiver_plane_z;
    j["max_z_3d_m"] = s.max_z_3d;

    json e = json::object();
    const auto& o = cfg.experiment;
    if (o.trials) e["trials"] = *o.trials;
    if (o.seed) e["seed"] = *o.seed;
    if (o.grid_step_m) e["grid_step_m"] = *o.grid_step_m;
    if (o.dimension) e["dimension"] = std::string(vlp::to_string(*o.dimension));
    if (o.fov_deg) e["fov_deg"] = *o.fov_deg;
    if (o.dpc_cm) e["dpc_cm"] = *o.dpc_cm;
    if (o.sigma_px) e["sigma_px"] = *o.sigma_px;
    if (o.algorithms) e["algorithms"] = *o.algorithms;
    if (o.tilt_min_deg) e["tilt_min_deg"] = *o.tilt_min_deg;
    if (o.tilt_max_deg) e["tilt_max_deg"] = *o.tilt_max_deg;
    if (o.perturbation_max_deg) e["perturbation_max_deg"] = *o.perturbation_max_deg;
    if (o.threads) e["threads"] = *o.threads;
    j["experiment"] = e;
    j["paper_scale"] = cfg.paper_scale;
    j["record_elapsed"] = cfg.record_elapsed;
    j["output_dir"] = cfg.output_dir;
    return j;
}

RunConfig config_from_json(const json& j) {
    check_keys(j,
               {"schema_version", "scene", "camera", "photodiode", "noise", "image_bounds", "lm", "delta_cm",
                "receiver_plane_z_m", "max_z_3d_m", "experiment", "paper_scale", "record_elapsed", "output_dir"},
               "config");
    if (!j.contains("schema_version")) throw ConfigError("config: missing schema_version");
    if (j.at("schema_version") != kSchemaVersion) {
        throw ConfigError("config: unsupported schema_version " + j.at("schema_version").dump());
    }
    RunConfig cfg;
    auto& s = cfg.setup;
    if (auto it = j.find("scene"); it != j.end()) s.scene = scene_from_json(*it);
    if (auto it = j.find("camera"); it != j.end()) {
        check_keys(*it, {"fu", "fv", "u0", "v0", "width", "height"}, "camera");
        auto& c = s.receiver.camera;
        read(*it, "fu", c.fu);
        read(*it, "fv", c.fv);
        read(*it, "u0", c.u0);
        read(*it, "v0", c.v0);
        read(*it, "width", c.width);
        read(*it, "height", c.height);
        // Keep the physical description consistent with the normalized focal lengths.
        c.focal_length = c.fu * c.pixel_pitch_x;
        c.pixel_pitch_y = c.focal_length / c.fv;
    }
    if (auto it = j.find("photodiode"); it != j.end()) {
        check_keys(*it, {"area_m2", "filter_gain", "concentrator_index", "fov_deg", "responsivity_a_per_w"},
                   "photodiode");
        auto& pd = s.receiver.pd;
        read(*it, "area_m2", pd.area);
        read(*it, "filter_gain", pd.filter_gain);
        read(*it, "concentrator_index", pd.concentrator_index);
        read(*it, "fov_deg", pd.fov_deg);
        read(*it, "responsivity_a_per_w", pd.responsivity);
    }
    if (auto it = j.find("noise"); it != j.end()) {
        check_keys(*it,
                   {"pixel_std_px", "images_averaged", "rss_samples_averaged", "current_noise_std_a",
                    "snr_threshold_db"},
                   "noise");
        read(*it, "pixel_std_px", s.sensing.image_noise.pixel_noise_std);
        read(*it, "images_averaged", s.sensing.image_noise.images_averaged);
        read(*it, "rss_samples_averaged", s.sensing.rss_noise.rss_samples_averaged);
        read(*it, "current_noise_std_a", cfg.current_noise_std);
        read(*it, "snr_threshold_db", s.sensing.snr_threshold_db);
    }
    if (auto it = j.find("image_bounds"); it != j.end()) {
        s.sensing.enforce_image_bounds = parse_image_bounds(it->get<std::string>());
    }
    if (auto it = j.find("lm"); it != j.end()) {
        check_keys(*it,
                   {"initial_damping", "damping_increase", "damping_decrease", "gradient_tolerance",
                    "step_tolerance", "max_iterations", "finite_difference_step"},
                   "lm");
        read(*it, "initial_damping", s.lm.initial_damping);
        read(*it, "damping_increase", s.lm.damping_increase);
        read(*it, "damping_decrease", s.lm.damping_decrease);
        read(*it, "gradient_tolerance", s.lm.gradient_tolerance);
        read(*it, "step_tolerance", s.lm.step_tolerance);
        read(*it, "max_iterations", s.lm.max_iterations);
        read(*it, "finite_difference_step", s.lm.finite_difference_step);
    }
    double delta_cm = s.delta * 100.0;
    read(j, "delta_cm", delta_cm);
    s.delta = delta_cm / 100.0;
    read(j, "receiver_plane_z_m", s.receiver_plane_z);
    read(j, "max_z_3d_m", s.max_z_3d);
    if (auto it = j.find("experiment"); it != j.end()) {
        check_keys(*it,
                   {"trials", "seed", "grid_step_m", "dimension", "fov_deg", "dpc_cm", "sigma_px", "algorithms",
                    "tilt_min_deg", "tilt_max_deg", "perturbation_max_deg", "threads"},
                   "experiment");
        auto& o = cfg.experiment;
        read(*it, "trials", o.trials);
        read(*it, "seed", o.seed);
        read(*it, "grid_step_m", o.grid_step_m);
        if (auto d = it->find("dimension"); d != it->end()) o.dimension = parse_dimension(d->get<std::string>());
        read(*it, "fov_deg", o.fov_deg);
        read(*it, "dpc_cm", o.dpc_cm);
        read(*it, "sigma_px", o.sigma_px);
        read(*it, "algorithms", o.algorithms);
        read(*it, "tilt_min_deg", o.tilt_min_deg);
        read(*it, "tilt_max_deg", o.tilt_max_deg);
        read(*it, "perturbation_max_deg", o.perturbation_max_deg);
        read(*it, "threads", o.threads);
    }
    read(j, "paper_scale", cfg.paper_scale);
    read(j, "record_elapsed", cfg.record_elapsed);
    read(j, "output_dir", cfg.output_dir);

    try {
        s.receiver.camera.validate();
        s.receiver.pd.validate();
        s.lm.validate();
    } catch (const vlp::Error& e) {
        throw ConfigError(e.what());
    }
    if (s.sensing.image_noise.pixel_noise_std < 0.0 || s.sensing.image_noise.images_averaged < 1 ||
        s.sensing.rss_noise.rss_samples_averaged < 1 || (cfg.current_noise_std && *cfg.current_noise_std < 0.0)) {
        throw ConfigError("noise: invalid values");
    }
    if (!(s.delta >= 0.0)) throw ConfigError("delta_cm must be >= 0");
    if (!(s.max_z_3d >= 0.0 && s.max_z_3d < s.scene.led_height())) {
        throw ConfigError("max_z_3d_m must lie below the LED plane");
    }
    return cfg;
}

namespace {

json read_json_file(const std::string& path, const std::string& what) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open " + what + " file: " + path);
    try {
        return json::parse(f);
    } catch (const json::exception& e) {
        throw ConfigError(what + " file " + path + ": " + e.what());
    }
}

}  // namespace

RunConfig load_config(const std::string& path) { return config_from_json(read_json_file(path, "config")); }

vlp::Scene load_scene(const std::string& path) { return scene_from_json(read_json_file(path, "scene")); }

vlp::ObservationSet observations_from_json(const json& j) {
    if (!j.is_array()) throw ConfigError("observations: expected an array");
    vlp::ObservationSet set;
    for (const auto& e : j) {
        check_keys(e, {"led_id", "power_w", "pixel"}, "observations[]");
        if (!e.contains("led_id") || !e.contains("power_w") || !e.contains("pixel")) {
            throw ConfigError("observations[]: needs led_id, power_w and pixel");
        }
        const auto& px = e.at("pixel");
        if (!px.is_array() || px.size() != 2) throw ConfigError("observations[].pixel: expected [u, v]");
        vlp::LinkObservation o;
        o.led_id = e.at("led_id").get<int>();
        o.mean_power = e.at("power_w").get<double>();
        o.mean_pixel = {px[0].get<double>(), px[1].get<double>()};
        o.snr_db = std::numeric_limits<double>::infinity();
        o.in_pd_fov = o.in_camera_frame = o.snr_ok = true;
        set.observations.push_back(o);
    }
    return set;
}

vlp::ObservationSet load_observations(const std::string& path) {
    return observations_from_json(read_json_file(path, "observations"));
}

namespace {

struct Flags {
    std::string config;
    std::string scene;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::optional<int> trials;
    std::string dim;
    std::string dpc;
    std::optional<double> delta_cm;
    std::string fov;
    std::string sigma_px;
    bool paper_scale = false;
    std::string image_bounds;
    std::string algorithms;
    std::optional<double> grid_step;
    std::optional<int> threads;
    std::optional<double> tilt_min;
    std::optional<double> tilt_max;
    std::optional<double> perturbation_max;
    std::optional<double> snr_threshold;
    std::optional<double> noise_std;
    bool record_elapsed = false;
    std::string dump_config;
    // estimate only
    std::string pose;
    std::string rotation;
    std::string observations;
    std::string algorithm = "eca-rssr";
    std::string noise = "off";
};

void add_shared(CLI::App* sub, Flags& f) {
    sub->add_option("--config", f.config, "JSON run config (schema_version 1)");
    sub->add_option("--scene", f.scene, "JSON scene file (room + LEDs), overrides the config scene");
    sub->add_option("--seed", f.seed, "Master seed");
    sub->add_option("--dim", f.dim, "2d or 3d");
    sub->add_option("--delta", f.delta_cm, "Basic/compensated switch threshold, cm");
    sub->add_option("--image-bounds", f.image_bounds, "unbounded or sensor");
    sub->add_option("--snr-threshold", f.snr_threshold, "Per-LED SNR threshold, dB");
    sub->add_option("--noise-std", f.noise_std, "Fixed per-sample current noise std, A (default: calibrated)");
}

void add_experiment(CLI::App* sub, Flags& f) {
    add_shared(sub, f);
    sub->add_option("--out", f.out, "Output directory");
    sub->add_option("--trials", f.trials, "Monte-Carlo trials");
    sub->add_option("--dpc", f.dpc, "PD-camera offsets, cm (comma list)");
    sub->add_option("--fov", f.fov, "PD FoV sweep, deg (start:stop:step or list)");
    sub->add_option("--sigma-px", f.sigma_px, "Pixel noise std sweep (comma list)");
    sub->add_flag("--paper-scale", f.paper_scale, "1e5 trials and a 5 cm grid");
    sub->add_option("--algorithms", f.algorithms, "Comma-separated algorithm names");
    sub->add_option("--grid-step", f.grid_step, "Coverage grid step, m");
    sub->add_option("--threads", f.threads, "Worker threads (default VLPSIM_THREADS or all cores)");
    sub->add_option("--tilt-min", f.tilt_min, "Preset tilt lower bound, deg");
    sub->add_option("--tilt-max", f.tilt_max, "Preset tilt upper bound, deg");
    sub->add_option("--perturbation-max", f.perturbation_max, "Random perturbation bound, deg");
    sub->add_flag("--record-elapsed", f.record_elapsed, "Write wall-clock times into per-trial CSVs");
    sub->add_option("--dump-config", f.dump_config, "Write the effective config to this path and exit");
}

RunConfig build_config(const Flags& f) {
    RunConfig cfg = f.config.empty() ? RunConfig{} : load_config(f.config);
    auto& s = cfg.setup;
    if (!f.scene.empty()) s.scene = load_scene(f.scene);
    auto& o = cfg.experiment;
    if (f.seed) o.seed = *f.seed;
    if (f.trials) o.trials = *f.trials;
    if (!f.dim.empty()) o.dimension = parse_dimension(f.dim);
    if (!f.dpc.empty()) o.dpc_cm = parse_list(f.dpc);
    if (f.delta_cm) {
        if (!(*f.delta_cm >= 0.0)) throw ConfigError("--delta must be >= 0");
        s.delta = *f.delta_cm / 100.0;
    }
    if (!f.fov.empty()) o.fov_deg = parse_sweep(f.fov);
    if (!f.sigma_px.empty()) o.sigma_px = parse_list(f.sigma_px);
    if (f.paper_scale) cfg.paper_scale = true;
    if (!f.image_bounds.empty()) s.sensing.enforce_image_bounds = parse_image_bounds(f.image_bounds);
    if (!f.algorithms.empty()) o.algorithms = split(f.algorithms, ',');
    if (f.grid_step) o.grid_step_m = *f.grid_step;
    if (f.threads) o.threads = *f.threads;
    if (f.tilt_min) o.tilt_min_deg = *f.tilt_min;
    if (f.tilt_max) o.tilt_max_deg = *f.tilt_max;
    if (f.perturbation_max) o.perturbation_max_deg = *f.perturbation_max;
    if (f.snr_threshold) s.sensing.snr_threshold_db = *f.snr_threshold;
    if (f.noise_std) {
        if (!(*f.noise_std >= 0.0)) throw ConfigError("--noise-std must be >= 0");
        cfg.current_noise_std = *f.noise_std;
    }
    if (f.record_elapsed) cfg.record_elapsed = true;
    if (!f.out.empty()) cfg.output_dir = f.out;
    return cfg;
}

std::string dpc_tag(double dpc_cm) { return "dpc" + vlp::format_number(dpc_cm) + "cm"; }

void write_series(const std::vector<vlp::TrialSeries>& series, const std::filesystem::path& dir,
                  const std::string& prefix, bool record_elapsed) {
    vlp::write_text_file((dir / (prefix + "_percentiles.csv")).string(), vlp::percentile_csv(series));
    std::set<double> dpcs;
    for (const auto& s : series) dpcs.insert(s.dpc_cm);
    for (double d : dpcs) {
        vlp::write_text_file((dir / (prefix + "_trials_" + dpc_tag(d) + ".csv")).string(),
                             vlp::trials_csv(series, d, record_elapsed));
    }
}

void print_series(const std::vector<vlp::TrialSeries>& series, std::ostream& out) {
    out << "algorithm        dim  dpc_cm  p80_pe_m     failures\n";
    for (const auto& s : series) {
        out << std::left << std::setw(17) << s.algorithm << std::setw(5) << vlp::to_string(s.dimension)
            << std::setw(8) << vlp::format_number(s.dpc_cm) << std::setw(13) << vlp::format_number(s.percentile(80))
            << s.failures() << "\n";
    }
}

int run_experiment(ExperimentKind kind, const RunConfig& cfg, std::ostream& out) {
    const vlp::SimulationSetup setup = cfg.resolved_setup();
    const vlp::ExperimentSpec spec = cfg.spec(kind);
    const std::filesystem::path dir(cfg.output_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw vlp::Error(vlp::ErrorCode::IoError, "cannot create output directory " + dir.string());

    switch (kind) {
        case ExperimentKind::Coverage: {
            const auto res = vlp::run_coverage(setup, spec);
            const std::string csv = vlp::coverage_csv(res);
            vlp::write_text_file((dir / "coverage.csv").string(), csv);
            out << csv;
            break;
        }
        case ExperimentKind::Accuracy: {
            const auto series = vlp::run_accuracy(setup, spec);
            write_series(series, dir, "accuracy", cfg.record_elapsed);
            print_series(series, out);
            break;
        }
        case ExperimentKind::Tilt: {
            const auto series = vlp::run_tilt(setup, spec);
            write_series(series, dir, "tilt", cfg.record_elapsed);
            print_series(series, out);
            break;
        }
        case ExperimentKind::ImageNoise: {
            const auto series = vlp::run_image_noise(setup, spec);
            const std::string csv = vlp::noise_csv(series, spec.large_pe_threshold_m);
            vlp::write_text_file((dir / "noise.csv").string(), csv);
            out << csv;
            break;
        }
        case ExperimentKind::Timing: {
            const auto res = vlp::run_timing(setup, spec);
            const std::string csv = vlp::timing_csv(res);
            vlp::write_text_file((dir / "timing.csv").string(), csv);
            out << csv;
            break;
        }
    }
    return kExitOk;
}

std::vector<double> fixed_list(const std::string& text, std::size_t n, const char* what) {
    const auto v = parse_list(text);
    if (v.size() != n) throw ConfigError(std::string(what) + ": expected " + std::to_string(n) + " numbers");
    return v;
}

int run_estimate(const Flags& f, const RunConfig& cfg, std::ostream& out) {
    vlp::SimulationSetup setup = cfg.resolved_setup();
    const Dimension dim = cfg.experiment.dimension.value_or(Dimension::Two);
    const vlp::Algorithm alg = vlp::parse_algorithm(f.algorithm);
    vlp::Receiver rx = setup.receiver;
    if (cfg.experiment.dpc_cm) {
        if (cfg.experiment.dpc_cm->size() != 1) throw ConfigError("--dpc: estimate takes one value");
        rx.pd_offset = vlp::Vec3(cfg.experiment.dpc_cm->front() / 100.0, 0.0, 0.0);
    }

    vlp::ObservationSet obs;
    std::optional<vlp::Vec3> truth;
    if (!f.observations.empty()) {
        obs = load_observations(f.observations);
    } else {
        const auto p = fixed_list(f.pose, 3, "--pose");
        vlp::ReceiverPose pose;
        pose.position = vlp::Vec3(p[0], p[1], p[2]);
        if (!f.rotation.empty()) {
            const auto r = fixed_list(f.rotation, 4, "--rotation");
            const vlp::Vec3 axis(r[0], r[1], r[2]);
            if (!(axis.norm() > 0.0)) throw ConfigError("--rotation: axis must be non-zero");
            pose.rotation = vlp::Rotation::about_axis(axis.normalized(), vlp::deg_to_rad(r[3]));
        }
        vlp::SensingConfig sc = setup.sensing;
        if (f.noise == "off") {
            sc.rss_noise.current_noise_std = 0.0;
            sc.image_noise.pixel_noise_std = 0.0;
        } else {
            sc.rss_noise = vlp::effective_rss_noise(setup, dim);
        }
        obs = vlp::observe(setup.scene, pose, rx, sc, cfg.experiment.seed.value_or(1));
        truth = pose.position;
    }

    const vlp::PositionEstimate est = vlp::run_algorithm(alg, obs, setup, rx, dim);
    const vlp::Vec3 p = est.position(setup.receiver_plane_z);
    out << std::fixed << std::setprecision(6);
    out << "position: " << p.x() << " " << p.y() << " " << p.z() << "\n";
    out << "mode: " << vlp::to_string(est.mode) << "\n";
    out << std::defaultfloat << std::setprecision(9);
    out << "residual: " << est.diagnostics.final_cost << "\n";
    out << "elapsed_s: " << est.diagnostics.elapsed_s << "\n";
    if (truth) out << "pe_m: " << (p - *truth).norm() << "\n";
    return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"vlpsim: camera-assisted RSS-ratio visible light positioning simulator"};
    app.require_subcommand(1);
    Flags f;

    struct Sub {
        CLI::App* app;
        ExperimentKind kind;
    };
    std::vector<Sub> experiments = {
        {app.add_subcommand("coverage", "Coverage ratio versus PD field of view"), ExperimentKind::Coverage},
        {app.add_subcommand("accuracy", "Positioning-error CDFs versus PD-camera offset"), ExperimentKind::Accuracy},
        {app.add_subcommand("tilt", "Accuracy under random receiver tilt"), ExperimentKind::Tilt},
        {app.add_subcommand("noise", "Mean and large-error ratio versus pixel noise"), ExperimentKind::ImageNoise},
        {app.add_subcommand("timing", "Per-estimate execution time"), ExperimentKind::Timing},
    };
    for (auto& s : experiments) add_experiment(s.app, f);

    CLI::App* est = app.add_subcommand("estimate", "Estimate one position from a pose or recorded observations");
    add_shared(est, f);
    est->add_option("--pose", f.pose, "Synthetic camera position x,y,z (m)");
    est->add_option("--rotation", f.rotation, "Receiver rotation ax,ay,az,deg (axis-angle)");
    est->add_option("--observations", f.observations, "JSON observation file to replay");
    est->add_option("--algorithm", f.algorithm, "Estimator name (default eca-rssr)");
    est->add_option("--dpc", f.dpc, "PD-camera offset along camera x, cm");
    est->add_option("--noise", f.noise, "off or on (synthetic pose only)")->check(CLI::IsMember({"off", "on"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitConfig;
    }

    RunConfig cfg;
    try {
        cfg = build_config(f);
        if (est->parsed()) {
            if (f.pose.empty() == f.observations.empty()) {
                throw ConfigError("estimate needs exactly one of --pose or --observations");
            }
            vlp::parse_algorithm(f.algorithm);
        } else {
            for (const auto& s : experiments) {
                if (s.app->parsed()) cfg.spec(s.kind).validate();
            }
        }
        if (!f.dump_config.empty()) {
            std::ofstream o(f.dump_config);
            if (!o) throw ConfigError("cannot write config to " + f.dump_config);
            o << config_to_json(cfg).dump(2) << "\n";
            return kExitOk;
        }
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const json::exception& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const vlp::Error& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    }

    try {
        if (est->parsed()) return run_estimate(f, cfg, out);
        for (const auto& s : experiments) {
            if (s.app->parsed()) return run_experiment(s.kind, cfg, out);
        }
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const json::exception& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitRuntime;
}

}  // namespace vlpsim
