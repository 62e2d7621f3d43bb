#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace pqb {

/// A real function on [0,1] that the operators are applied to: either a named
/// builtin or a polynomial given by monomial coefficients c0, c1, ..., cd.
class TargetFunction {
 public:
  enum class Kind { builtin, polynomial };

  /// Throws std::invalid_argument listing the known names on a miss.
  static TargetFunction builtin(const std::string& name);
  static TargetFunction polynomial(std::vector<double> coefficients);
  static TargetFunction monomial(int m);

  /// Builtin names: paper_cubic, monomial_0, monomial_1, monomial_2,
  /// abs_centered, exp, sin_pi.
  static std::span<const std::string> known_names();

  double operator()(double x) const { return eval_(x); }

  Kind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  /// Empty unless kind() == Kind::polynomial.
  const std::vector<double>& coefficients() const { return coefficients_; }

 private:
  TargetFunction(Kind kind, std::string name, std::function<double(double)> eval,
                 std::vector<double> coefficients = {});

  Kind kind_;
  std::string name_;
  std::function<double(double)> eval_;
  std::vector<double> coefficients_;
};

/// Horner evaluation of c0 + c1 x + ... + cd x^d.
double horner(std::span<const double> coefficients, double x);

}  // namespace pqb
