#include "ultrajet/classnorms.hpp"
#include "ultrajet/diffgroup.hpp"
#include "ultrajet/explaw.hpp"
#include "ultrajet/funcdsl.hpp"
#include "ultrajet/jet.hpp"
#include "ultrajet/parallel.hpp"
#include "ultrajet/weightseq.hpp"

#include <benchmark/benchmark.h>

using namespace ultrajet;

namespace {

void BM_ComposeDouble(benchmark::State& state) {
  int K = static_cast<int>(state.range(0));
  Expr f = Expr::parse("[exp(x1)*sin(x2), x1*x2+cos(x1)]", 2);
  Expr g = Expr::parse("[x1+0.1*x2^2, x2-0.2*x1*x2]", 2);
  Jet<double> gj = eval_jet<double>(g, {0.3, -0.2}, K);
  Jet<double> fj = eval_jet<double>(f, {gj.at(0, 0), gj.at(1, 0)}, K);
  for (auto _ : state) benchmark::DoNotOptimize(compose(fj, gj));
}
BENCHMARK(BM_ComposeDouble)->Arg(4)->Arg(8)->Arg(12);

void BM_InvertRational(benchmark::State& state) {
  int K = static_cast<int>(state.range(0));
  Jet<Rational> F = eval_jet<Rational>(Expr::parse("x1+x1^2", 1), {Rational(0)}, K);
  for (auto _ : state) benchmark::DoNotOptimize(invert(F));
}
BENCHMARK(BM_InvertRational)->Arg(6)->Arg(12)->Arg(20);

void BM_EvalJet(benchmark::State& state) {
  Expr e = Expr::parse("exp(-x1^2-x2^2)*(1+x1*x2)", 2);
  int K = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(eval_jet<double>(e, {0.4, -1.1}, K));
}
BENCHMARK(BM_EvalJet)->Arg(2)->Arg(8);

void BM_SampleAndSeminorm(benchmark::State& state) {
  set_thread_count(static_cast<unsigned>(state.range(0)));
  Expr e = Expr::parse("exp(-x1^2-x2^2)", 2);
  GridSpec grid = GridSpec::parse("-6:6:49,-6:6:49");
  ClassSpec spec = ClassSpec::weighted(Family::BM, ClassType::roumieu, WeightSequence::gevrey(1), 1);
  for (auto _ : state) {
    SampledFunction f = sample(e, grid, 8);
    benchmark::DoNotOptimize(seminorm(f, spec));
  }
  set_thread_count(0);
}
BENCHMARK(BM_SampleAndSeminorm)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_ExplawCompare(benchmark::State& state) {
  SampledFunction f = sample(Expr::parse("exp(-x1^2-x2^2)", 2), GridSpec::parse("-6:6:49,-6:6:49"), 8);
  ClassSpec spec = ClassSpec::weighted(Family::BM, ClassType::roumieu, WeightSequence::gevrey(1), 1);
  for (auto _ : state) benchmark::DoNotOptimize(explaw_compare(f, {1, 1}, spec, 1, 1, 8));
}
BENCHMARK(BM_ExplawCompare)->Unit(benchmark::kMillisecond);

void BM_InvertDiff(benchmark::State& state) {
  GridSpec grid = GridSpec::parse("-6:6:241");
  DiffMap F = parse_diffmap("id+[0.4*x1*exp(-x1^2)]", 1, grid);
  for (auto _ : state) benchmark::DoNotOptimize(invert_diff(F, {1e-10, 200, 4}));
}
BENCHMARK(BM_InvertDiff)->Unit(benchmark::kMillisecond);

void BM_ModerateGrowth(benchmark::State& state) {
  int K = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(check_property(WeightSequence::gevrey(2), Property::moderate_growth, K));
}
BENCHMARK(BM_ModerateGrowth)->Arg(30)->Arg(200);

void BM_MatrixInverseBound(benchmark::State& state) {
  Matrix<double> A{{1.2, -0.3, 0.4, 0.1}, {0.2, 0.9, -0.5, 0.3}, {-0.7, 0.1, 1.1, 0.2}, {0.3, 0.4, -0.2, 1.5}};
  for (auto _ : state) benchmark::DoNotOptimize(matrix_inverse_bound(A));
}
BENCHMARK(BM_MatrixInverseBound);

}  // namespace
BENCHMARK_MAIN();
