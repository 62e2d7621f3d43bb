#include "pqbernstein/target_function.hpp"

#include <array>
#include <cstdio>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace pqb {

namespace {

const std::array<std::string, 7> kBuiltinNames = {
    "paper_cubic", "monomial_0", "monomial_1", "monomial_2", "abs_centered", "exp", "sin_pi"};

std::string join_names() {
  std::string out;
  for (const auto& name : kBuiltinNames) {
    if (!out.empty()) out += ", ";
    out += name;
  }
  return out;
}

}  // namespace

double horner(std::span<const double> coefficients, double x) {
  double acc = 0.0;
  for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) acc = acc * x + *it;
  return acc;
}

TargetFunction::TargetFunction(Kind kind, std::string name, std::function<double(double)> eval,
                               std::vector<double> coefficients)
    : kind_(kind),
      name_(std::move(name)),
      eval_(std::move(eval)),
      coefficients_(std::move(coefficients)) {}

std::span<const std::string> TargetFunction::known_names() { return kBuiltinNames; }

TargetFunction TargetFunction::builtin(const std::string& name) {
  if (name == "paper_cubic") {
    return {Kind::builtin, name,
            [](double x) { return (x - 1.0 / 3.0) * (x - 0.5) * (x - 0.75); }};
  }
  if (name == "monomial_0") return {Kind::builtin, name, [](double) { return 1.0; }};
  if (name == "monomial_1") return {Kind::builtin, name, [](double x) { return x; }};
  if (name == "monomial_2") return {Kind::builtin, name, [](double x) { return x * x; }};
  if (name == "abs_centered") {
    return {Kind::builtin, name, [](double x) { return std::abs(x - 0.5); }};
  }
  if (name == "exp") return {Kind::builtin, name, [](double x) { return std::exp(x); }};
  if (name == "sin_pi") {
    return {Kind::builtin, name, [](double x) { return std::sin(std::numbers::pi * x); }};
  }
  throw std::invalid_argument("unknown function '" + name + "'; known: " + join_names());
}

TargetFunction TargetFunction::monomial(int m) {
  if (m >= 0 && m <= 2) return builtin("monomial_" + std::to_string(m));
  if (m < 0) throw std::invalid_argument("monomial degree must be nonnegative");
  std::vector<double> c(static_cast<std::size_t>(m) + 1, 0.0);
  c.back() = 1.0;
  return polynomial(std::move(c));
}

TargetFunction TargetFunction::polynomial(std::vector<double> coefficients) {
  if (coefficients.empty()) throw std::invalid_argument("polynomial needs at least one coefficient");
  for (double c : coefficients) {
    if (!std::isfinite(c)) throw std::invalid_argument("polynomial coefficients must be finite");
  }
  std::string name = "poly(";
  for (std::size_t i = 0; i < coefficients.size(); ++i) {
    if (i) name += ';';
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", coefficients[i]);
    name += buf;
  }
  name += ')';
  auto eval = [c = coefficients](double x) { return horner(c, x); };
  return {Kind::polynomial, std::move(name), std::move(eval), std::move(coefficients)};
}

}  // namespace pqb
