#include <benchmark/benchmark.h>

#include "homdet/experiment.hpp"
#include "homdet/hom.hpp"
#include "homdet/optics.hpp"
#include "homdet/rng.hpp"
#include "homdet/witness.hpp"

using namespace homdet;

namespace {

PureState bell_state() {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(4);
    v(0) = v(3) = 1.0 / std::sqrt(2.0);
    return PureState(v, {2, 2});
}

PureState random_state(int d, std::uint64_t seed) {
    auto g = rng::substream(seed, 0);
    return PureState(rng::haar_vector(g, d), {d});
}

void BM_coincidence_closed_form(benchmark::State& state) {
    int d = static_cast<int>(state.range(0));
    auto a = random_state(d, 1), b = random_state(d, 2);
    for (auto _ : state) benchmark::DoNotOptimize(coincidence_pure(a, b).p_coincidence);
}
BENCHMARK(BM_coincidence_closed_form)->Arg(2)->Arg(4)->Arg(8);

void BM_bs_oracle(benchmark::State& state) {
    int d = static_cast<int>(state.range(0));
    auto a = random_state(d, 1), b = random_state(d, 2);
    for (auto _ : state) benchmark::DoNotOptimize(bs_oracle(a, b).p_coincidence);
}
BENCHMARK(BM_bs_oracle)->Arg(2)->Arg(4)->Arg(8);

void BM_quantum_join(benchmark::State& state) {
    auto g = rng::substream(3, 0);
    Eigen::Vector4cd x;
    for (int i = 0; i < 4; ++i) x(i) = cxd(g.normal(), g.normal());
    x.normalize();
    for (auto _ : state) benchmark::DoNotOptimize(optics::quantum_join(x).probability);
}
BENCHMARK(BM_quantum_join);

void BM_separable_approximate(benchmark::State& state) {
    auto w = projector_witness(bell_state());
    for (auto _ : state) benchmark::DoNotOptimize(separable_approximate(w).p_s);
}
BENCHMARK(BM_separable_approximate);

void BM_find_separable_decomposition(benchmark::State& state) {
    auto phi = bell_state();
    Eigen::MatrixXcd ortho = (Eigen::MatrixXcd::Identity(4, 4) -
                              phi.amplitudes() * phi.amplitudes().adjoint()) /
                             3.0;
    DensityMatrix target(ortho, {2, 2});
    for (auto _ : state)
        benchmark::DoNotOptimize(
            find_separable_decomposition(target, 128, 5).best_residual);
}
BENCHMARK(BM_find_separable_decomposition);

void BM_run_experiment(benchmark::State& state) {
    auto aew = approximate(projector_witness(bell_state()));
    ExperimentConfig cfg{state.range(0), 11, Pipeline::two_interferometers, aew,
                         Ensemble({{1.0, bell_state()}}), ensemble_of(aew.matrix),
                         false, 65536};
    for (auto _ : state)
        benchmark::DoNotOptimize(run_experiment(cfg).totals.n_c_total());
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_run_experiment)->Arg(10000)->Arg(100000);

} // namespace

BENCHMARK_MAIN();
