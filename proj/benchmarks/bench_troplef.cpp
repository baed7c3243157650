#include <benchmark/benchmark.h>

#include <random>

#include "troplef/fixtures.hpp"

using namespace troplef;

namespace {

IntMatrix random_matrix(std::mt19937& rng, int rows, int cols, int lo, int hi) {
    std::uniform_int_distribution<int> d(lo, hi);
    IntMatrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m.at(i, j) = d(rng);
    return m;
}

}  // namespace

static void BM_Hnf(benchmark::State& state) {
    std::mt19937 rng(1);
    IntMatrix m = random_matrix(rng, int(state.range(0)), int(state.range(0)), -99, 99);
    for (auto _ : state) {
        auto r = hnf(m);
        benchmark::DoNotOptimize(r.h);
    }
}
BENCHMARK(BM_Hnf)->Arg(8)->Arg(16)->Arg(32);

static void BM_Snf(benchmark::State& state) {
    std::mt19937 rng(2);
    IntMatrix m = random_matrix(rng, int(state.range(0)), int(state.range(0)), -99, 99);
    for (auto _ : state) {
        auto r = snf(m);
        benchmark::DoNotOptimize(r.d);
    }
}
BENCHMARK(BM_Snf)->Arg(8)->Arg(16)->Arg(24);

static void BM_SphereHomology(benchmark::State& state) {
    Fixture oct = fixture("octahedron");
    for (auto _ : state) {
        HomologyResult h = homology(chain_complex(oct.complex, constant_cosheaf(oct.complex, 1)));
        benchmark::DoNotOptimize(h);
    }
}
BENCHMARK(BM_SphereHomology);

static void BM_DihomSphereHomology(benchmark::State& state) {
    Fixture oct = fixture("octahedron");
    for (auto _ : state) {
        DihomCosheaf f = dihom_subdivide(constant_cosheaf(oct.complex, 1), oct.complex);
        HomologyResult h = homology(dihom_chain_complex(oct.complex, f));
        benchmark::DoNotOptimize(h);
    }
}
BENCHMARK(BM_DihomSphereHomology);

static void BM_TriangleDiamond(benchmark::State& state) {
    Fixture tri = fixture("triangle-p112");
    for (auto _ : state) {
        HodgeDiamond d = hodge_diamond(tri.setup, 'Y', CoeffRing::Z());
        benchmark::DoNotOptimize(d);
    }
}
BENCHMARK(BM_TriangleDiamond);

static void BM_CubeDiamond(benchmark::State& state) {
    Fixture cube = fixture("cube-222");
    for (auto _ : state) {
        HodgeDiamond d = hodge_diamond(cube.setup, 'Y', CoeffRing::Z(), int(state.range(0)));
        benchmark::DoNotOptimize(d);
    }
}
BENCHMARK(BM_CubeDiamond)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

static void BM_CubeLefschetzF3(benchmark::State& state) {
    Fixture cube = fixture("cube-222");
    for (auto _ : state) {
        LefschetzReport r = lefschetz_analysis(cube.setup, CoeffRing::Fp(3), 2);
        benchmark::DoNotOptimize(r);
    }
}
BENCHMARK(BM_CubeLefschetzF3)->Unit(benchmark::kMillisecond);

static void BM_ThetaCell(benchmark::State& state) {
    std::vector<std::vector<Int>> rot{{Int(1), Int(0), Int(0)},
                                      {Int(0), Int(0), Int(1)},
                                      {Int(1), Int(0), Int(2)},
                                      {Int(2), Int(0), Int(1)}};
    for (auto _ : state) {
        Int t = theta_cell(rot, {0, 1, 2, 3});
        benchmark::DoNotOptimize(t);
    }
}
BENCHMARK(BM_ThetaCell);

BENCHMARK_MAIN();
