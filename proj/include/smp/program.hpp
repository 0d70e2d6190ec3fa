// Piecewise-linear time programs used for coil currents, bulk temperatures
// and Dirichlet displacement schedules.

#ifndef SMP_PROGRAM_HPP
#define SMP_PROGRAM_HPP

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace smp {

class PiecewiseLinear {
 public:
  PiecewiseLinear() = default;

  explicit PiecewiseLinear(std::vector<std::pair<double, double>> pts)
      : pts_(std::move(pts)) {
    for (std::size_t i = 1; i < pts_.size(); ++i) {
      if (!(pts_[i - 1].first < pts_[i].first)) {
        throw std::invalid_argument(
            "piecewise-linear breakpoints must be strictly increasing in t");
      }
    }
  }

  static PiecewiseLinear constant(double v) { return PiecewiseLinear({{0.0, v}}); }

  bool empty() const { return pts_.empty(); }
  const std::vector<std::pair<double, double>>& points() const { return pts_; }

  // Linear interpolation inside the breakpoint range; the last value is held
  // past the final breakpoint. Evaluation before the first breakpoint throws.
  double operator()(double t) const {
    if (pts_.empty()) throw std::logic_error("empty time program");
    if (t < pts_.front().first - 1e-14 * std::max(1.0, std::abs(pts_.front().first))) {
      throw std::out_of_range("time " + std::to_string(t) +
                              " precedes first program breakpoint");
    }
    if (t <= pts_.front().first) return pts_.front().second;
    for (std::size_t i = 1; i < pts_.size(); ++i) {
      if (t <= pts_[i].first) {
        const auto& [t0, v0] = pts_[i - 1];
        const auto& [t1, v1] = pts_[i];
        return v0 + (v1 - v0) * (t - t0) / (t1 - t0);
      }
    }
    return pts_.back().second;
  }

  // Slope at time t (right-continuous; zero outside the breakpoint range).
  double rate(double t) const {
    if (pts_.empty()) throw std::logic_error("empty time program");
    if (t < pts_.front().first || t >= pts_.back().first) return 0.0;
    for (std::size_t i = 1; i < pts_.size(); ++i) {
      if (t < pts_[i].first) {
        const auto& [t0, v0] = pts_[i - 1];
        const auto& [t1, v1] = pts_[i];
        return (v1 - v0) / (t1 - t0);
      }
    }
    return 0.0;
  }

 private:
  std::vector<std::pair<double, double>> pts_;
};

}  // namespace smp

#endif
