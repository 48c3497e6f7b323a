// Wall-clock comparison of each OpenMP kernel against its serial reference.
// Usage: bench_parallel [repeats]

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <vector>

#include "alpha_procrustes/parallel.hpp"
#include "alpha_procrustes/riemannian_geometry.hpp"
#include "alpha_procrustes/rkhs_operators.hpp"
#include "alpha_procrustes/sampling.hpp"
#include "alpha_procrustes/spd_metrics.hpp"

using namespace alpha_procrustes;

namespace {

template <class F>
double best_ms(int repeats, F&& f) {
  double best = 1e300;
  for (int r = 0; r < repeats; ++r) {
    const auto start = std::chrono::steady_clock::now();
    f();
    const std::chrono::duration<double, std::milli> elapsed = std::chrono::steady_clock::now() - start;
    best = std::min(best, elapsed.count());
  }
  return best;
}

void row(const char* name, double serial, double parallel) {
  std::printf("%-28s %10.2f %10.2f %8.2fx\n", name, serial, parallel, serial / parallel);
}

}  // namespace

int main(int argc, char** argv) {
  const int repeats = argc > 1 ? std::max(1, std::atoi(argv[1])) : 3;
  sampling::Rng rng(77);
  std::printf("threads %d, best of %d\n", parallel::max_threads(), repeats);
  std::printf("%-28s %10s %10s %9s\n", "kernel", "serial ms", "omp ms", "speedup");

  const Dataset x(sampling::random_points(rng, 600, 8));
  const Dataset y(sampling::random_points(rng, 600, 8, 0.2));
  const KernelSpec rbf = KernelSpec::gaussian_rbf(1.5);
  row("gram rbf 600x600 d=8", best_ms(repeats, [&] { gram_bundle_serial(x, y, rbf); }),
      best_ms(repeats, [&] { gram_bundle(x, y, rbf); }));

  const GeodesicCurve curve(sampling::random_spd(rng, 12), sampling::random_spd(rng, 12), 0.7);
  row("geodesic length n=12 4000", best_ms(repeats, [&] { geodesic_length_numeric_serial(curve, 4000); }),
      best_ms(repeats, [&] { geodesic_length_numeric(curve, 4000); }));

  std::vector<SpdMatrix> items;
  for (int i = 0; i < 80; ++i) items.push_back(sampling::random_spd(rng, 10));
  const PairMetric metric = [](const SpdMatrix& a, const SpdMatrix& b) {
    return alpha_procrustes::alpha_procrustes(a, b, AlphaParam(0.6)).value;
  };
  row("pairwise 80 items n=10", best_ms(repeats, [&] { pairwise_distances_serial(items, metric); }),
      best_ms(repeats, [&] { pairwise_distances(items, metric); }));
  return 0;
}
