#pragma once

#include <span>

#include "pqbernstein/bernstein.hpp"
#include "pqbernstein/target_function.hpp"

// Grid kernels. Each has a serial reference and an OpenMP version that must
// produce bit-identical output: every point is computed independently with a
// fixed summation order, and max-reductions are order-insensitive.
namespace pqb::kernels {

/// out[i] = B(f; xs[i]), where `samples` are f at the operator's nodes.
void evaluate_serial(const PreparedOperator& op, std::span<const double> samples,
                     std::span<const double> xs, std::span<double> out);
void evaluate_parallel(const PreparedOperator& op, std::span<const double> samples,
                       std::span<const double> xs, std::span<double> out);

/// out[i] = f(xs[i]).
void tabulate_serial(const TargetFunction& f, std::span<const double> xs, std::span<double> out);
void tabulate_parallel(const TargetFunction& f, std::span<const double> xs,
                       std::span<double> out);

/// max_i |a[i] - b[i]|; 0 for empty input.
double max_abs_difference_serial(std::span<const double> a, std::span<const double> b);
double max_abs_difference_parallel(std::span<const double> a, std::span<const double> b);

bool openmp_enabled();
int max_threads();

}  // namespace pqb::kernels
