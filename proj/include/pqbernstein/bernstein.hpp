#pragma once

#include <span>
#include <vector>

#include "pqbernstein/pq_calculus.hpp"
#include "pqbernstein/target_function.hpp"

namespace pqb {

/// Degree n (1 <= n <= kMaxDegree) together with its (p,q) parameters.
class OperatorSpec {
 public:
  OperatorSpec(int n, PQParams params);

  int degree() const { return n_; }
  const PQParams& params() const { return params_; }

  friend bool operator==(const OperatorSpec&, const OperatorSpec&) = default;

 private:
  int n_;
  PQParams params_;
};

/// Which operator to build from a spec.
///
/// `revised` is the normalized operator
///   B(f;x) = p^{-n(n-1)/2} sum_k [n k] p^{k(k-1)/2} x^k prod_{s<n-k}(p^s - q^s x) f(p^{n-k}[k]/[n]).
/// `original` drops the p-power normalizer and samples f at [k]/[n]; for p < 1
/// it does not reproduce constants.
enum class OperatorForm { revised, original };

struct BasisVector {
  std::vector<double> values;
  double at_x = 0.0;
};

struct NodeVector {
  std::vector<double> values;
};

BasisVector basis(const OperatorSpec& spec, double x,
                  OperatorForm form = OperatorForm::revised);

NodeVector nodes(const OperatorSpec& spec, OperatorForm form = OperatorForm::revised);

double apply_operator(const OperatorSpec& spec, const TargetFunction& f, double x);

/// The unnormalized operator, kept to exhibit its failure to reproduce 1.
double apply_operator_original(const OperatorSpec& spec, const TargetFunction& f, double x);

/// Closed-form image of t^m for m in {0, 1, 2}:
///   1,  x,  (p^{n-1}/[n]) x + (q[n-1]/[n]) x^2.
double moment_closed_form(const OperatorSpec& spec, int m, double x);

/// |q[n-1] - ([n] - p^{n-1})|, the residual of the identity used to bound
/// the second-moment error.
double second_moment_identity_check(const OperatorSpec& spec);

/// Per-spec tables shared by every evaluation point: scaled binomials, the
/// powers r^s of r = q/p, per-term form multipliers and the nodes. The basis
/// is evaluated as
///   b_k(x) = mult_k * C~(n,k) x^k prod_{s<n-k}(1 - r^s x),
/// which equals the textbook expression with p^s pulled out of each factor.
/// Immutable after construction; safe to share between threads.
class PreparedOperator {
 public:
  PreparedOperator(const OperatorSpec& spec, OperatorForm form = OperatorForm::revised);

  const OperatorSpec& spec() const { return spec_; }
  OperatorForm form() const { return form_; }
  int degree() const { return spec_.degree(); }
  const std::vector<double>& node_values() const { return nodes_; }

  /// Writes the n+1 basis values at x into `out`. `out` doubles as scratch.
  void fill_basis(double x, std::span<double> out) const;

  /// Compensated sum_k b_k(x) f_k, where f_k are samples of f at the nodes.
  /// `scratch` must hold n+1 doubles.
  double evaluate(double x, std::span<const double> samples, std::span<double> scratch) const;

  /// f evaluated at every node.
  std::vector<double> sample(const TargetFunction& f) const;

 private:
  OperatorSpec spec_;
  OperatorForm form_;
  std::vector<double> coefficients_;  // mult_k * C~(n,k)
  std::vector<double> ratio_powers_;  // r^s, s = 0..n
  std::vector<double> nodes_;
};

void check_unit_interval(double x);

}  // namespace pqb
