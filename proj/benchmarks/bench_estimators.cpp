#include <benchmark/benchmark.h>

#include <vector>

#include "vlp/baselines.hpp"
#include "vlp/error.hpp"
#include "vlp/estimator_basic.hpp"
#include "vlp/estimator_compensated.hpp"
#include "vlp/harness.hpp"
#include "vlp/random.hpp"

namespace {

using namespace vlp;

struct Inputs {
    SimulationSetup setup;
    std::vector<ObservationSet> obs;
};

// Matched inputs: default noise, 2D, enough LEDs for every estimator here.
Inputs make_inputs(double dpc_m) {
    Inputs in;
    in.setup.receiver.pd_offset = Vec3(dpc_m, 0.0, 0.0);
    SensingConfig sc = in.setup.sensing;
    sc.rss_noise = effective_rss_noise(in.setup);
    Rng rng(derive_seed(1, 0));
    std::uniform_real_distribution<double> u(0.0, 5.0);
    while (in.obs.size() < 256) {
        ReceiverPose pose{Vec3(u(rng), u(rng), 0.0), {}};
        if (count_visible(in.setup.scene, pose, in.setup.receiver, sc) < 4) continue;
        in.obs.push_back(observe(in.setup.scene, pose, in.setup.receiver, sc, rng()));
    }
    return in;
}

const Inputs& small_offset() {
    static const Inputs in = make_inputs(0.01);
    return in;
}

const Inputs& large_offset() {
    static const Inputs in = make_inputs(0.20);
    return in;
}

void run(benchmark::State& state, const Inputs& in, Algorithm alg) {
    std::size_t k = 0;
    for (auto _ : state) {
        const auto& obs = in.obs[k++ % in.obs.size()];
        try {
            benchmark::DoNotOptimize(run_algorithm(alg, obs, in.setup, in.setup.receiver, Dimension::Two));
        } catch (const Error&) {
        }
    }
}

void BM_Basic(benchmark::State& s) { run(s, small_offset(), Algorithm::EcaBasic); }
void BM_Compensated(benchmark::State& s) { run(s, large_offset(), Algorithm::EcaCompensated); }
void BM_CaRssr(benchmark::State& s) { run(s, small_offset(), Algorithm::CaRssr); }
void BM_RssrIdeal(benchmark::State& s) { run(s, small_offset(), Algorithm::RssrIdeal); }

}  // namespace

BENCHMARK(BM_Basic);
BENCHMARK(BM_Compensated);
BENCHMARK(BM_CaRssr);
BENCHMARK(BM_RssrIdeal);

BENCHMARK_MAIN();
