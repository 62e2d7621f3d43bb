#include "pqbernstein/pq_calculus.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace pqb {

namespace {

void check_order(int k, const char* what) {
  if (k < 0) {
    throw std::invalid_argument(std::string(what) + ": order must be nonnegative, got " +
                                std::to_string(k));
  }
}

void check_row(int n) {
  check_order(n, "binomial row");
  if (n > kMaxDegree) {
    throw std::out_of_range("binomial row: n = " + std::to_string(n) + " exceeds cap " +
                            std::to_string(kMaxDegree));
  }
}

// Horner form of 1 + r + ... + r^(k-1); extended precision keeps the result
// within an ulp for k in the hundreds.
long double geometric_sum(int k, long double r) {
  long double sum = 0.0L;
  for (int j = 0; j < k; ++j) sum = sum * r + 1.0L;
  return sum;
}

}  // namespace

PQParams::PQParams(double p, double q) : PQParams(p, q, false) {}

PQParams PQParams::allowing_equal(double p, double q) { return PQParams(p, q, true); }

PQParams::PQParams(double p, double q, bool allow_equal) : p_(p), q_(q), ratio_(0.0) {
  // Written so that NaN fails every comparison.
  const bool ordered = allow_equal ? (q <= p) : (q < p);
  if (!(q > 0.0) || !(p <= 1.0) || !ordered) {
    throw std::invalid_argument("invalid (p,q) = (" + std::to_string(p) + ", " +
                                std::to_string(q) + "): require 0 < q " +
                                (allow_equal ? "<=" : "<") + " p <= 1");
  }
  ratio_ = (p == q) ? 1.0 : q / p;
}

double pq_integer_scaled(int k, const PQParams& params) {
  check_order(k, "pq_integer");
  return static_cast<double>(geometric_sum(k, params.ratio()));
}

double pq_integer(int k, const PQParams& params) {
  check_order(k, "pq_integer");
  if (k == 0) return 0.0;
  return static_cast<double>(std::pow(static_cast<long double>(params.p()), k - 1) *
                             geometric_sum(k, params.ratio()));
}

double pq_factorial(int n, const PQParams& params) {
  check_order(n, "pq_factorial");
  double product = 1.0;
  for (int k = 2; k <= n; ++k) product *= pq_integer(k, params);
  return product;
}

std::vector<double> pq_binomial_row(int n, const PQParams& params) {
  check_row(n);
  const double p = params.p();
  const double q = params.q();
  std::vector<double> row(static_cast<std::size_t>(n) + 1, 0.0);
  row[0] = 1.0;
  // Row m is built in place from row m-1, right to left.
  for (int m = 1; m <= n; ++m) {
    row[m] = 1.0;
    for (int k = m - 1; k >= 1; --k) {
      row[k] = std::pow(p, k) * row[k] + std::pow(q, m - k) * row[k - 1];
    }
  }
  return row;
}

std::vector<double> scaled_binomial_row(int n, const PQParams& params) {
  check_row(n);
  const double r = params.ratio();
  std::vector<double> r_pow(static_cast<std::size_t>(n) + 1, 1.0);
  for (int s = 1; s <= n; ++s) r_pow[s] = r_pow[s - 1] * r;

  std::vector<double> row(static_cast<std::size_t>(n) + 1, 0.0);
  row[0] = 1.0;
  for (int m = 1; m <= n; ++m) {
    row[m] = 1.0;
    for (int k = m - 1; k >= 1; --k) row[k] = row[k] + r_pow[m - k] * row[k - 1];
  }
  return row;
}

double pq_binomial(int n, int k, const PQParams& params) {
  check_row(n);
  if (k < 0 || k > n) return 0.0;
  if (k == 0 || k == n) return 1.0;
  return pq_binomial_row(n, params)[k];
}

double pq_binomial_oracle(int n, int k, const PQParams& params) {
  check_order(n, "pq_binomial_oracle");
  if (k < 0 || k > n) return 0.0;
  return pq_factorial(n, params) / (pq_factorial(k, params) * pq_factorial(n - k, params));
}

}  // namespace pqb
