#pragma once

namespace incfl {

// Kahan compensated accumulator. Weighted model averages are computed with
// this so the hierarchical and star aggregation paths agree to ~1e-12.
struct KahanSum {
  double sum = 0.0;
  double comp = 0.0;

  void add(double v) {
    double y = v - comp;
    double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }

  double value() const { return sum; }
};

}  // namespace incfl
