#include "vlmc/math.hpp"

#include <cmath>

#include "vlmc/error.hpp"

namespace vlmc {

namespace {

constexpr double kLanczosCoeff[9] = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7,
};

constexpr double kHalfLn2Pi = 0.91893853320467274178;  // ln(2*pi)/2

}  // namespace

double log_gamma(double x) {
  if (!(x > 0.0)) {
    fail(ErrorCode::Numeric, "log_gamma requires a positive argument");
  }
  double z = x - 1.0;
  double series = kLanczosCoeff[0];
  for (int i = 1; i < 9; ++i) {
    series += kLanczosCoeff[i] / (z + static_cast<double>(i));
  }
  double t = z + 7.5;
  return kHalfLn2Pi + (z + 0.5) * std::log(t) - t + std::log(series);
}

void LogSumExp::add(double x) {
  ++count_;
  if (x <= max_) {
    scaled_sum_ += std::exp(x - max_);
    return;
  }
  scaled_sum_ = scaled_sum_ * std::exp(max_ - x) + 1.0;
  max_ = x;
}

double LogSumExp::value() const {
  if (count_ == 0) return kNegInf;
  return max_ + std::log(scaled_sum_);
}

double LogSumExp::log_mean() const {
  return value() - std::log(static_cast<double>(count_));
}

}  // namespace vlmc
