#include "pchip.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fockrg {

namespace {
int sgn(double v) { return (v > 0) - (v < 0); }
}

Pchip Pchip::fit(std::vector<double> x, std::vector<double> y) {
  if (x.size() != y.size() || x.empty())
    throw std::invalid_argument("Pchip::fit: mismatched or empty grids");
  for (std::size_t i = 1; i < x.size(); ++i)
    if (!(x[i] > x[i - 1]))
      throw std::invalid_argument("Pchip::fit: nodes must be strictly increasing");

  Pchip p;
  p.x_ = std::move(x);
  p.y_ = std::move(y);
  const std::size_t n = p.x_.size();
  p.d_.assign(n, 0.0);
  if (n == 1) return p;

  std::vector<double> h(n - 1), s(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    h[k] = p.x_[k + 1] - p.x_[k];
    s[k] = (p.y_[k + 1] - p.y_[k]) / h[k];
  }
  if (n == 2) {
    p.d_[0] = p.d_[1] = s[0];
    return p;
  }

  for (std::size_t k = 1; k + 1 < n; ++k) {
    if (s[k - 1] * s[k] <= 0.0) {
      p.d_[k] = 0.0;
    } else {
      const double w1 = 2.0 * h[k] + h[k - 1];
      const double w2 = h[k] + 2.0 * h[k - 1];
      p.d_[k] = (w1 + w2) / (w1 / s[k - 1] + w2 / s[k]);
    }
  }

  // One-sided three-point end slopes with the usual shape clamps.
  auto end_slope = [](double h0, double h1, double s0, double s1) {
    double d = ((2.0 * h0 + h1) * s0 - h0 * s1) / (h0 + h1);
    if (sgn(d) != sgn(s0))
      d = 0.0;
    else if (sgn(s0) != sgn(s1) && std::abs(d) > 3.0 * std::abs(s0))
      d = 3.0 * s0;
    return d;
  };
  p.d_[0] = end_slope(h[0], h[1], s[0], s[1]);
  p.d_[n - 1] = end_slope(h[n - 2], h[n - 3], s[n - 2], s[n - 3]);
  return p;
}

int Pchip::segment(double r) const {
  const int n = static_cast<int>(x_.size());
  if (r <= x_.front()) return 0;
  if (r >= x_.back()) return n - 2;
  const auto it = std::upper_bound(x_.begin(), x_.end(), r);
  return static_cast<int>(it - x_.begin()) - 1;
}

double Pchip::eval(double r) const {
  const std::size_t n = x_.size();
  if (n == 1) return y_[0];
  if (r < x_.front()) return y_.front() + d_.front() * (r - x_.front());
  if (r > x_.back()) return y_.back() + d_.back() * (r - x_.back());
  const int k = segment(r);
  const double h = x_[k + 1] - x_[k];
  const double t = (r - x_[k]) / h;
  const double t2 = t * t, t3 = t2 * t;
  const double h00 = 2 * t3 - 3 * t2 + 1;
  const double h10 = t3 - 2 * t2 + t;
  const double h01 = -2 * t3 + 3 * t2;
  const double h11 = t3 - t2;
  return h00 * y_[k] + h * h10 * d_[k] + h01 * y_[k + 1] + h * h11 * d_[k + 1];
}

double Pchip::deriv(double r) const {
  const std::size_t n = x_.size();
  if (n == 1) return 0.0;
  if (r < x_.front()) return d_.front();
  if (r > x_.back()) return d_.back();
  const int k = segment(r);
  const double h = x_[k + 1] - x_[k];
  const double t = (r - x_[k]) / h;
  const double t2 = t * t;
  const double g00 = (6 * t2 - 6 * t) / h;
  const double g10 = 3 * t2 - 4 * t + 1;
  const double g01 = (-6 * t2 + 6 * t) / h;
  const double g11 = 3 * t2 - 2 * t;
  return g00 * y_[k] + g10 * d_[k] + g01 * y_[k + 1] + g11 * d_[k + 1];
}

}  // namespace fockrg
