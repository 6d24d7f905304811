#include <benchmark/benchmark.h>

#include "gq/lagrangian.hpp"
#include "gq/starprod.hpp"

namespace {

void BM_probability(benchmark::State& state) {
  gq::KahlerModel m = gq::make_model("sphere", 1.0, {8});
  gq::PhasePoint x{0, {0.4, 0.3}}, y{0, {-0.2, 0.9}};
  for (auto _ : state) benchmark::DoNotOptimize(gq::probability(m, y, x).value);
}
BENCHMARK(BM_probability);

void BM_transition_matrix(benchmark::State& state) {
  gq::KahlerModel m = gq::make_model("sphere", 1.0, {4});
  gq::LagrangianLoop loop(m, gq::circle_loop(m, 1.0), int(state.range(0)));
  for (auto _ : state) {
    gq::Mat a(loop.size(), loop.size());
    for (int i = 0; i < loop.size(); ++i)
      for (int j = 0; j < loop.size(); ++j)
        a(i, j) = gq::transition_nodes(loop, i, j).value;
    benchmark::DoNotOptimize(a);
  }
}
BENCHMARK(BM_transition_matrix)->Arg(64)->Arg(128);

void BM_build_c(benchmark::State& state) {
  gq::KahlerModel m = gq::make_model("sphere", 1.0, {4});
  gq::LagrangianLoop loop(m, gq::circle_loop(m, 1.0), 128);
  gq::LambdaGrid lg(m, loop);
  gq::PhasePoint x{0, {0.5, -0.2}};
  for (auto _ : state) benchmark::DoNotOptimize(lg.build_c(x));
}
BENCHMARK(BM_build_c);

void BM_star_product(benchmark::State& state) {
  gq::KahlerModel m = gq::make_model("sphere", 1.0, {4});
  gq::SymbolBasis basis = gq::covariant_basis(m, 4);
  gq::StarEngine eng(m, basis, m.default_grid());
  gq::Vec f = gq::Vec::Random(basis.dim()), g = gq::Vec::Random(basis.dim());
  for (auto _ : state) benchmark::DoNotOptimize(eng.star(f, g));
}
BENCHMARK(BM_star_product);

}  // namespace

BENCHMARK_MAIN();
