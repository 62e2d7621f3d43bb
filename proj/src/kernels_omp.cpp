#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "pqbernstein/kernels.hpp"

namespace pqb::kernels {

bool openmp_enabled() {
#ifdef _OPENMP
  return true;
#else
  return false;
#endif
}

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void evaluate_parallel(const PreparedOperator& op, std::span<const double> samples,
                       std::span<const double> xs, std::span<double> out) {
  const auto count = static_cast<std::int64_t>(xs.size());
#pragma omp parallel
  {
    std::vector<double> scratch(static_cast<std::size_t>(op.degree()) + 1);
#pragma omp for schedule(static)
    for (std::int64_t i = 0; i < count; ++i) out[i] = op.evaluate(xs[i], samples, scratch);
  }
}

void tabulate_parallel(const TargetFunction& f, std::span<const double> xs,
                       std::span<double> out) {
  const auto count = static_cast<std::int64_t>(xs.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < count; ++i) out[i] = f(xs[i]);
}

double max_abs_difference_parallel(std::span<const double> a, std::span<const double> b) {
  const auto count = static_cast<std::int64_t>(a.size());
  double worst = 0.0;
#pragma omp parallel for schedule(static) reduction(max : worst)
  for (std::int64_t i = 0; i < count; ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

}  // namespace pqb::kernels
