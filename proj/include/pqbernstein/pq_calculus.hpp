#pragma once

#include <vector>

namespace pqb {

/// Largest operator degree accepted anywhere in the library.
inline constexpr int kMaxDegree = 200;

/// Validated (p,q) pair with 0 < q < p <= 1.
///
/// The strict regime is the only one the moment identities are proven for.
/// `allowing_equal` admits q == p for exploratory use; in that case the
/// (p,q)-integer degenerates to its analytic limit k p^(k-1).
class PQParams {
 public:
  PQParams(double p, double q);

  static PQParams allowing_equal(double p, double q);

  double p() const { return p_; }
  double q() const { return q_; }
  /// q/p, in (0,1) for strict params and exactly 1 for equal params.
  double ratio() const { return ratio_; }
  bool is_equal() const { return p_ == q_; }

  friend bool operator==(const PQParams&, const PQParams&) = default;

 private:
  PQParams(double p, double q, bool allow_equal);

  double p_;
  double q_;
  double ratio_;
};

/// [k]_{p,q} = (p^k - q^k)/(p - q).
double pq_integer(int k, const PQParams& params);

/// [k]_{p,q} / p^(k-1), i.e. the q-integer [k]_r with r = q/p. Returns 0 for
/// k = 0. Never underflows for small p.
double pq_integer_scaled(int k, const PQParams& params);

/// [n]!_{p,q} = [1][2]...[n]; 1 for n = 0.
double pq_factorial(int n, const PQParams& params);

/// (p,q)-binomial coefficient via C(n,k) = p^k C(n-1,k) + q^(n-k) C(n-1,k-1).
/// Returns 0 for k outside [0, n].
double pq_binomial(int n, int k, const PQParams& params);

/// Factorial-ratio evaluation of the (p,q)-binomial. Test oracle only.
double pq_binomial_oracle(int n, int k, const PQParams& params);

/// Row n of the (p,q)-binomial triangle, entries k = 0..n.
std::vector<double> pq_binomial_row(int n, const PQParams& params);

/// Row n of C(n,k) p^(-k(n-k)), which is the Gaussian binomial in r = q/p.
/// Built with C~(n,k) = C~(n-1,k) + r^(n-k) C~(n-1,k-1); no entry under- or
/// overflows for n <= kMaxDegree.
std::vector<double> scaled_binomial_row(int n, const PQParams& params);

}  // namespace pqb
