#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pqbernstein/bernstein.hpp"
#include "pqbernstein/pq_calculus.hpp"
#include "pqbernstein/target_function.hpp"

namespace pqb {

/// Sorted points in [0,1] containing both endpoints. The sup norm over [0,1]
/// is approximated by the max over these points.
class Grid {
 public:
  static constexpr int kDefaultResolution = 1001;

  /// i/(resolution-1), i = 0..resolution-1. Requires resolution >= 2.
  static Grid uniform(int resolution = kDefaultResolution);
  /// Validates: strictly increasing, first == 0, last == 1.
  static Grid from_points(std::vector<double> points);

  std::span<const double> points() const { return points_; }
  int resolution() const { return static_cast<int>(points_.size()); }

 private:
  explicit Grid(std::vector<double> points) : points_(std::move(points)) {}
  std::vector<double> points_;
};

enum class Execution { serial, parallel };

/// A rule n -> (p_n, q_n).
class ParamSequence {
 public:
  /// p_n = 1 - 1/(2n), q_n = 1 - 1/n. Valid for n >= 2.
  static ParamSequence half_harmonic();
  /// p_n = 1 - 1/(n ln(n+2)), q_n = 1 - 2/(n ln(n+2)). Valid for n >= 2.
  static ParamSequence log_rule();
  /// Fixed (p,q) for every n; does not tend to 1 unless p = q = 1.
  static ParamSequence constant(double p, double q);
  /// Accepts "half_harmonic", "log_rule" or "constant(p,q)".
  static ParamSequence from_name(const std::string& name);

  /// Throws std::invalid_argument when (p_n, q_n) leaves 0 < q < p <= 1.
  PQParams at(int n) const;

  const std::string& name() const { return name_; }
  const std::string& description() const { return description_; }

 private:
  ParamSequence(std::string name, std::string description,
                std::function<std::pair<double, double>(int)> rule)
      : name_(std::move(name)), description_(std::move(description)), rule_(std::move(rule)) {}

  std::string name_;
  std::string description_;
  std::function<std::pair<double, double>(int)> rule_;
};

/// max over the grid of |B(f;x) - f(x)|.
double sup_error(const OperatorSpec& spec, const TargetFunction& f, const Grid& grid,
                 Execution exec = Execution::parallel);

/// 2 p^{n-1}/[n]: uniform bound on |B(t^2;x) - x^2| over [0,1].
double second_moment_bound(const OperatorSpec& spec);

/// (p^{n-1}/[n]) * max over the grid of (x - x^2): the exact grid sup of the
/// second-moment error, since that error equals (p^{n-1}/[n]) (x - x^2).
double second_moment_error_closed_form(const OperatorSpec& spec, const Grid& grid);

struct KorovkinRow {
  int n = 0;
  double p = 0.0;
  double q = 0.0;
  double error_m0 = 0.0;
  double error_m1 = 0.0;
  double error_m2 = 0.0;
  double bound = 0.0;
  std::optional<double> error_f;
};

struct KorovkinReport {
  std::string rule;
  std::string rule_description;
  std::optional<std::string> function;
  double threshold = 0.0;
  std::vector<KorovkinRow> rows;
  bool m0_m1_exact = true;        // every m=0,1 error <= kExactTolerance
  bool m2_within_bound = true;    // every m=2 error <= bound + kBoundSlack
  bool m2_below_threshold = false;  // last m=2 error <= threshold
  bool m2_decreasing = true;      // m=2 errors strictly decreasing in n
};

inline constexpr double kExactTolerance = 1e-12;
inline constexpr double kBoundSlack = 1e-12;
inline constexpr double kDefaultConvergenceThreshold = 0.01;

/// Runs the three Korovkin test functions (and optionally f) for each n.
KorovkinReport korovkin_experiment(const ParamSequence& seq, std::span<const int> n_values,
                                   const Grid& grid,
                                   const TargetFunction* f = nullptr,
                                   double threshold = kDefaultConvergenceThreshold,
                                   Execution exec = Execution::parallel);

enum class TrendKind { vary_q, vary_n, vary_pq };

std::string to_string(TrendKind kind);
/// Throws std::invalid_argument for unknown ids.
TrendKind trend_kind_from_string(const std::string& id);

struct TrendVariant {
  int n = 0;
  double p = 0.0;
  double q = 0.0;
};

/// Replaces q, n or (p,q) in `base` with each listed value, in order.
std::vector<TrendVariant> vary_q(const OperatorSpec& base, std::span<const double> qs);
std::vector<TrendVariant> vary_n(const OperatorSpec& base, std::span<const int> ns);
std::vector<TrendVariant> vary_pq(const OperatorSpec& base,
                                  std::span<const std::pair<double, double>> pqs);

/// Default variant sets used by the figure command.
struct TrendDefaults {
  OperatorSpec base;
  std::vector<TrendVariant> variants;
};
TrendDefaults default_trend(TrendKind kind);

struct TrendRow {
  TrendVariant variant;
  double sup_error = 0.0;
};

struct TrendReport {
  TrendKind kind = TrendKind::vary_q;
  std::string function;
  std::vector<TrendRow> rows;  // sorted along the trend direction
  bool weakly_decreasing = true;
};

inline constexpr double kTrendSlack = 1e-12;

/// Sup error per variant. Rows are stably sorted along the trend direction
/// (q ascending, n ascending, or p+q ascending); the verdict is weak
/// monotonicity with kTrendSlack.
TrendReport trend_experiment(TrendKind kind, const TargetFunction& f, const Grid& grid,
                             std::span<const TrendVariant> variants,
                             Execution exec = Execution::parallel);

struct CurveSample {
  double x = 0.0;
  double f = 0.0;
  double b = 0.0;
  std::optional<double> b_original;
};

/// One record per grid point; nodes are built once per curve.
std::vector<CurveSample> curve_samples(const OperatorSpec& spec, const TargetFunction& f,
                                       const Grid& grid, bool with_original = false,
                                       Execution exec = Execution::parallel);

/// B(f; x) on every grid point.
std::vector<double> operator_curve(const OperatorSpec& spec, const TargetFunction& f,
                                   const Grid& grid, OperatorForm form = OperatorForm::revised,
                                   Execution exec = Execution::parallel);

}  // namespace pqb
