#pragma once

namespace pqb {

/// Compensated running sum. Order of additions is the caller's; results are
/// reproducible for a fixed order.
struct KahanSum {
  double sum = 0.0;
  double compensation = 0.0;

  void add(double value) {
    const double y = value - compensation;
    const double t = sum + y;
    compensation = (t - sum) - y;
    sum = t;
  }

  double value() const { return sum; }
};

}  // namespace pqb
