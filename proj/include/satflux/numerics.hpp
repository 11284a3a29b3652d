#pragma once

#include <cmath>
#include <functional>
#include <span>

namespace satflux {

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

double compensated_sum(std::span<const double> xs);

/// x^p with fast paths for small integer p.
double fast_pow(double x, double p);

/// Derivative of f at x by Ridders' extrapolation of central differences, starting from step h.
/// f is never evaluated outside [x − h, x + h].
double ridders_derivative(const std::function<double(double)>& f, double x, double h, double* err = nullptr);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};

/// Ordinary least-squares line through (x_i, y_i).
LineFit least_squares_line(std::span<const double> x, std::span<const double> y);

}  // namespace satflux
