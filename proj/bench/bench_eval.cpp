// Compares the serial reference evaluator against the OpenMP kernel on a
// stack of annulus loops (labeling width = loop count, so the summation has
// 3^width terms). Usage: bench_eval [width] [trials]
#include <chrono>
#include <cstdlib>
#include <iostream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "sl3web/diagram.hpp"
#include "sl3web/eval.hpp"
#include "sl3web/surface.hpp"

using namespace sl3web;
using Clock = std::chrono::steady_clock;

static double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

int main(int argc, char** argv) {
  int width = argc > 1 ? std::atoi(argv[1]) : 12;
  int trials = argc > 2 ? std::atoi(argv[2]) : 3;
  if (width < 1 || width > 20 || trials < 1) {
    std::cerr << "usage: bench_eval [width 1..20] [trials >= 1]\n";
    return 2;
  }

  MarkedSurface s;
  s.genus = 0;
  s.components = {BoundaryComponent{{Color::Black}}, BoundaryComponent{{Color::Black}}};
  auto ctx = SurfaceContext::make(s);

  Diagram one(ctx);
  one.add_loop({{0, false, -1}});
  Diagram d = one;
  for (int i = 1; i < width; ++i) d = insert_diagram(d, one, true);
  Assignment a = random_assignment(*ctx, 2024, 3);

#ifdef _OPENMP
  std::cout << "threads: " << omp_get_max_threads() << "\n";
#else
  std::cout << "threads: 1 (built without OpenMP)\n";
#endif
  std::cout << "labeling width " << labeling_width(d) << ", 3^width terms per sum\n";

  double bestSerial = 1e300, bestParallel = 1e300;
  Rat serial, parallel;
  for (int t = 0; t < trials; ++t) {
    auto t0 = Clock::now();
    serial = evaluate_serial(d, a);
    bestSerial = std::min(bestSerial, ms_since(t0));

    t0 = Clock::now();
    parallel = evaluate(d, a);
    bestParallel = std::min(bestParallel, ms_since(t0));
  }

  std::cout << "serial:   " << bestSerial << " ms\n";
  std::cout << "parallel: " << bestParallel << " ms\n";
  std::cout << "speedup:  " << bestSerial / bestParallel << "x\n";
  if (serial != parallel) {
    std::cerr << "MISMATCH: serial and parallel results differ\n";
    return 1;
  }
  std::cout << "results match exactly\n";
  return 0;
}
