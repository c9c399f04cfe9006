#include <benchmark/benchmark.h>

#include "linefield/blowup.hpp"
#include "linefield/classifier.hpp"
#include "linefield/metric_builder.hpp"
#include "linefield/portrait.hpp"

using namespace linefield;

namespace {

ProtoLineField monstar_trio() {
    return ProtoLineField(VectorField(Expr::parse("x"), Expr::parse("3*y")),
                          VectorField(Expr::parse("1"), Expr::parse("0")),
                          Metric::euclidean(), Domain{-2, 2, -2, 2, false});
}

void BM_parse(benchmark::State& state) {
    for (auto _ : state)
        benchmark::DoNotOptimize(Expr::parse("sin(2*x)*y - x^3/(1 + y^2) + exp(x*y)"));
}
BENCHMARK(BM_parse);

void BM_eval(benchmark::State& state) {
    const Expr e = Expr::parse("sin(2*x)*y - x^3/(1 + y^2) + exp(x*y)");
    double x = 0.1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(e.eval(x, 0.7));
        x += 1e-6;
    }
}
BENCHMARK(BM_eval);

void BM_diff(benchmark::State& state) {
    const Expr e = Expr::parse("sin(2*x)*y - x^3/(1 + y^2) + exp(x*y)");
    for (auto _ : state) benchmark::DoNotOptimize(e.diff('x'));
}
BENCHMARK(BM_diff);

void BM_bisector(benchmark::State& state) {
    const ProtoLineField L = monstar_trio();
    double t = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(bisector(L, {std::cos(t) + 1.2, std::sin(t)}));
        t += 1e-3;
    }
}
BENCHMARK(BM_bisector);

void BM_winding_index_lf(benchmark::State& state) {
    const ProtoLineField L = monstar_trio();
    for (auto _ : state)
        benchmark::DoNotOptimize(winding_index_lf(L, {0, 0}, 1.0, state.range(0)));
}
BENCHMARK(BM_winding_index_lf)->Arg(64)->Arg(256)->Arg(1024);

void BM_classify(benchmark::State& state) {
    const LinearPLF P{{1, 0, 0, 3}, {1, 0}};
    for (auto _ : state) benchmark::DoNotOptimize(classify(P));
}
BENCHMARK(BM_classify);

void BM_find_zeros(benchmark::State& state) {
    const VectorField V(Expr::parse("sin(x)"), Expr::parse("sin(y)"));
    const Domain box{-0.5, 5.8, -0.5, 5.8, false};
    for (auto _ : state) benchmark::DoNotOptimize(find_zeros(V, box, state.range(0)));
}
BENCHMARK(BM_find_zeros)->Arg(16)->Arg(32);

void BM_streamline(benchmark::State& state) {
    const ProtoLineField L = monstar_trio();
    for (auto _ : state)
        benchmark::DoNotOptimize(integrate_streamline(L, {0.3, 0.5}, 1e-3, 2.0));
}
BENCHMARK(BM_streamline);

void BM_lift_phi(benchmark::State& state) {
    const ProtoLineField L = monstar_trio();
    for (auto _ : state) benchmark::DoNotOptimize(lift_phi(L, {0, 0}, 0.4, 32, 256));
}
BENCHMARK(BM_lift_phi);

void BM_built_metric_eval(benchmark::State& state) {
    const BuiltMetric g = build_metric(VectorField(Expr::parse("1 + y^2"), Expr::parse("x")),
                                       VectorField(Expr::parse("x - y"), Expr::parse("1 + x^2")));
    double t = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(g({0.3 * std::cos(t), 0.3 * std::sin(t)}));
        t += 1e-3;
    }
}
BENCHMARK(BM_built_metric_eval);

}  // namespace

BENCHMARK_MAIN();
