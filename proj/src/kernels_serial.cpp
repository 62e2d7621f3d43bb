#include <algorithm>
#include <cmath>
#include <vector>

#include "pqbernstein/kernels.hpp"

namespace pqb::kernels {

void evaluate_serial(const PreparedOperator& op, std::span<const double> samples,
                     std::span<const double> xs, std::span<double> out) {
  std::vector<double> scratch(static_cast<std::size_t>(op.degree()) + 1);
  for (std::size_t i = 0; i < xs.size(); ++i) out[i] = op.evaluate(xs[i], samples, scratch);
}

void tabulate_serial(const TargetFunction& f, std::span<const double> xs, std::span<double> out) {
  for (std::size_t i = 0; i < xs.size(); ++i) out[i] = f(xs[i]);
}

double max_abs_difference_serial(std::span<const double> a, std::span<const double> b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

}  // namespace pqb::kernels
