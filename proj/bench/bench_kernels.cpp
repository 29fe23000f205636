// Serial reference vs OpenMP kernels.

#include <benchmark/benchmark.h>

#include "awmi/kernels.hpp"
#include "awmi/oracle.hpp"
#include "awmi/raster.hpp"

using namespace awmi;

namespace {

Raster image(int size) {
  SyntheticSpec s;
  s.width = s.height = size;
  s.seed = 5;
  return generate_synthetic(s);
}

kernels::MomentInputs moment_inputs(const Raster& r, const DerivativeStack& s) {
  const Centroid c = centroid(r);
  kernels::MomentInputs in;
  in.width = r.width();
  in.height = r.height();
  in.f = r.values();
  in.fx = s.fx.values();
  in.fy = s.fy.values();
  in.fxx = s.fxx.values();
  in.fyy = s.fyy.values();
  in.fxy = s.fxy.values();
  in.cx = c.x;
  in.cy = c.y;
  return in;
}

kernels::TuplePoints tuple_points(int size) {
  const Raster r = random_raster(size, size, 3);
  const auto s = derivative_stack(r);
  const Centroid c = centroid(r);
  kernels::TuplePoints p;
  for (int row = 0; row < size; ++row) {
    for (int col = 0; col < size; ++col) {
      const double x = Raster::x_of(col) - c.x, y = Raster::y_of(row) - c.y;
      p.x.push_back(x);
      p.y.push_back(y);
      p.f.push_back(r(row, col));
      p.adi1.push_back(x * s.fx(row, col) + y * s.fy(row, col));
    }
  }
  return p;
}

template <auto Fn>
void BM_Convolve(benchmark::State& st) {
  const Raster img = image(static_cast<int>(st.range(0)));
  const Field k = derivative_kernel(2, 0, DiffConfig{});
  for (auto _ : st) benchmark::DoNotOptimize(Fn(img.field(), k, Boundary::reflect));
  st.SetItemsProcessed(st.iterations() * st.range(0) * st.range(0));
}

template <auto Fn>
void BM_Warp(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  const Raster img = image(n);
  const AffineParams inv = table4_transforms()[2].anchored(n / 2.0, n / 2.0, n / 2.0, n / 2.0).inverse();
  for (auto _ : st) benchmark::DoNotOptimize(Fn(img.field(), inv, n, n));
  st.SetItemsProcessed(st.iterations() * n * n);
}

template <auto Fn>
void BM_MomentSums(benchmark::State& st) {
  const Raster img = image(static_cast<int>(st.range(0)));
  const auto stack = derivative_stack(img);
  const auto in = moment_inputs(img, stack);
  for (auto _ : st) benchmark::DoNotOptimize(Fn(in, DMTable::standard_keys()));
}

template <auto Fn>
void BM_TupleSum(benchmark::State& st) {
  const auto pts = tuple_points(static_cast<int>(st.range(0)));
  const DCoreSpec spec = awmi_dcore(static_cast<int>(st.range(1)));
  for (auto _ : st) benchmark::DoNotOptimize(Fn(pts, spec));
}

}  // namespace

BENCHMARK(BM_Convolve<kernels::serial::convolve>)->Name("convolve/serial")->Arg(256)->Arg(512);
BENCHMARK(BM_Convolve<kernels::parallel::convolve>)->Name("convolve/parallel")->Arg(256)->Arg(512);
BENCHMARK(BM_Warp<kernels::serial::warp_bilinear>)->Name("warp/serial")->Arg(512);
BENCHMARK(BM_Warp<kernels::parallel::warp_bilinear>)->Name("warp/parallel")->Arg(512);
BENCHMARK(BM_MomentSums<kernels::serial::moment_sums>)->Name("moment_sums/serial")->Arg(256)->Arg(512);
BENCHMARK(BM_MomentSums<kernels::parallel::moment_sums>)->Name("moment_sums/parallel")->Arg(256)->Arg(512);
BENCHMARK(BM_TupleSum<kernels::serial::tuple_sum>)->Name("tuple_sum/serial")->Args({12, 1})->Args({12, 4});
BENCHMARK(BM_TupleSum<kernels::parallel::tuple_sum>)->Name("tuple_sum/parallel")->Args({12, 1})->Args({12, 4});

BENCHMARK_MAIN();
