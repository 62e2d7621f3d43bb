#include "pqbernstein/bernstein.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "pqbernstein/kahan.hpp"

namespace pqb {

void check_unit_interval(double x) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw std::domain_error("x = " + std::to_string(x) + " is outside [0,1]");
  }
}

OperatorSpec::OperatorSpec(int n, PQParams params) : n_(n), params_(params) {
  if (n < 1) throw std::invalid_argument("degree n must be at least 1, got " + std::to_string(n));
  if (n > kMaxDegree) {
    throw std::out_of_range("degree n = " + std::to_string(n) + " exceeds cap " +
                            std::to_string(kMaxDegree));
  }
}

PreparedOperator::PreparedOperator(const OperatorSpec& spec, OperatorForm form)
    : spec_(spec), form_(form) {
  const int n = spec.degree();
  const double p = spec.params().p();
  const double r = spec.params().ratio();
  const auto size = static_cast<std::size_t>(n) + 1;

  ratio_powers_.assign(size, 1.0);
  for (int s = 1; s <= n; ++s) ratio_powers_[s] = ratio_powers_[s - 1] * r;

  coefficients_ = scaled_binomial_row(n, spec.params());
  if (form == OperatorForm::original) {
    // The unnormalized sum carries an extra p^{n(n-1)/2 - k(k-1)/2} per term.
    const long long top = static_cast<long long>(n) * (n - 1) / 2;
    for (int k = 0; k <= n; ++k) {
      const long long e = top - static_cast<long long>(k) * (k - 1) / 2;
      coefficients_[k] *= std::pow(p, static_cast<double>(e));
    }
  }

  // S_k = [k]/p^{k-1}; revised nodes p^{n-k}[k]/[n] reduce to S_k/S_n.
  std::vector<double> partial(size, 0.0);
  for (int k = 1; k <= n; ++k) partial[k] = partial[k - 1] + ratio_powers_[k - 1];
  nodes_.assign(size, 0.0);
  for (int k = 1; k < n; ++k) {
    nodes_[k] = partial[k] / partial[n];
    if (form == OperatorForm::original) nodes_[k] *= std::pow(p, k - n);
  }
  nodes_[n] = 1.0;
}

void PreparedOperator::fill_basis(double x, std::span<double> out) const {
  const int n = degree();
  // Pass 1: x^k. Pass 2: multiply in the suffix products right to left.
  double xk = 1.0;
  for (int k = 0; k <= n; ++k) {
    out[k] = xk;
    xk *= x;
  }
  double tail = 1.0;  // prod_{s < n-k} (1 - r^s x)
  for (int k = n; k >= 0; --k) {
    out[k] *= coefficients_[k] * tail;
    if (k > 0) tail *= 1.0 - ratio_powers_[n - k] * x;
  }
}

double PreparedOperator::evaluate(double x, std::span<const double> samples,
                                  std::span<double> scratch) const {
  fill_basis(x, scratch);
  KahanSum acc;
  for (int k = 0; k <= degree(); ++k) acc.add(scratch[k] * samples[k]);
  return acc.value();
}

std::vector<double> PreparedOperator::sample(const TargetFunction& f) const {
  std::vector<double> out(nodes_.size());
  for (std::size_t k = 0; k < nodes_.size(); ++k) out[k] = f(nodes_[k]);
  return out;
}

BasisVector basis(const OperatorSpec& spec, double x, OperatorForm form) {
  check_unit_interval(x);
  const PreparedOperator op(spec, form);
  BasisVector b{std::vector<double>(static_cast<std::size_t>(spec.degree()) + 1), x};
  op.fill_basis(x, b.values);
  return b;
}

NodeVector nodes(const OperatorSpec& spec, OperatorForm form) {
  return {PreparedOperator(spec, form).node_values()};
}

namespace {

double apply(const OperatorSpec& spec, const TargetFunction& f, double x, OperatorForm form) {
  check_unit_interval(x);
  const PreparedOperator op(spec, form);
  std::vector<double> scratch(static_cast<std::size_t>(spec.degree()) + 1);
  return op.evaluate(x, op.sample(f), scratch);
}

}  // namespace

double apply_operator(const OperatorSpec& spec, const TargetFunction& f, double x) {
  return apply(spec, f, x, OperatorForm::revised);
}

double apply_operator_original(const OperatorSpec& spec, const TargetFunction& f, double x) {
  return apply(spec, f, x, OperatorForm::original);
}

double moment_closed_form(const OperatorSpec& spec, int m, double x) {
  check_unit_interval(x);
  switch (m) {
    case 0:
      return 1.0;
    case 1:
      return x;
    case 2: {
      // p^{n-1}/[n] = 1/S_n and q[n-1]/[n] = r S_{n-1}/S_n with S_k = [k]/p^{k-1}.
      const int n = spec.degree();
      const double s_n = pq_integer_scaled(n, spec.params());
      const double s_prev = pq_integer_scaled(n - 1, spec.params());
      return x / s_n + spec.params().ratio() * s_prev / s_n * x * x;
    }
    default:
      throw std::invalid_argument("moment order must be 0, 1 or 2, got " + std::to_string(m));
  }
}

double second_moment_identity_check(const OperatorSpec& spec) {
  const int n = spec.degree();
  const auto& pq = spec.params();
  const double lhs = pq.q() * pq_integer(n - 1, pq);
  const double rhs = pq_integer(n, pq) - std::pow(pq.p(), n - 1);
  return std::abs(lhs - rhs);
}

}  // namespace pqb
