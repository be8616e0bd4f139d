#pragma once

#include <vector>

namespace fockrg {

/// Monotone piecewise-cubic Hermite interpolant (Fritsch-Carlson node
/// slopes). Reproduces linear data exactly and never overshoots the
/// local node range. Outside [x.front(), x.back()] it extends linearly
/// with the end-node derivative.
class Pchip {
 public:
  Pchip() = default;
  static Pchip fit(std::vector<double> x, std::vector<double> y);

  double eval(double r) const;
  double deriv(double r) const;

  const std::vector<double>& nodes() const { return x_; }
  const std::vector<double>& values() const { return y_; }

 private:
  std::vector<double> x_, y_, d_;
  int segment(double r) const;
};

}  // namespace fockrg
