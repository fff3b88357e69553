#pragma once

#include <array>
#include <stdexcept>

namespace r2r {

/// Quintic soft-landing reference: position interpolates between the two
/// endpoints with zero velocity and acceleration at both ends. Outside the
/// interval, evaluation clamps to the nearer endpoint with zero derivatives.
class QuinticTrajectory {
 public:
  struct Point {
    double z;     // position, m
    double zd;    // velocity, m/s
    double zdd;   // acceleration, m/s^2
    double zddd;  // jerk, m/s^3
  };

  QuinticTrajectory(double z_start, double z_end, double t_start, double t_end)
      : z_start_(z_start), z_end_(z_end), t_start_(t_start), t_end_(t_end),
        duration_(t_end - t_start) {
    if (!(t_end > t_start))
      throw std::invalid_argument("QuinticTrajectory: degenerate interval");
  }

  Point eval(double t) const {
    if (t < t_start_) return {z_start_, 0.0, 0.0, 0.0};
    if (t > t_end_) return {z_end_, 0.0, 0.0, 0.0};
    const double T = duration_;
    const double tau = (t - t_start_) / T;
    const double dz = z_end_ - z_start_;
    const double t2 = tau * tau, t3 = t2 * tau, t4 = t3 * tau, t5 = t4 * tau;
    const double s = 10.0 * t3 - 15.0 * t4 + 6.0 * t5;
    const double s1 = 30.0 * t2 - 60.0 * t3 + 30.0 * t4;
    const double s2 = 60.0 * tau - 180.0 * t2 + 120.0 * t3;
    const double s3 = 60.0 - 360.0 * tau + 360.0 * t2;
    return {z_start_ + dz * s, dz * s1 / T, dz * s2 / (T * T),
            dz * s3 / (T * T * T)};
  }

  /// Coefficients of z(tau) in powers of normalized time tau.
  std::array<double, 6> coeffs() const {
    const double dz = z_end_ - z_start_;
    return {z_start_, 0.0, 0.0, 10.0 * dz, -15.0 * dz, 6.0 * dz};
  }

  double z_start() const { return z_start_; }
  double z_end() const { return z_end_; }
  double t_start() const { return t_start_; }
  double t_end() const { return t_end_; }
  double duration() const { return duration_; }

 private:
  double z_start_, z_end_, t_start_, t_end_, duration_;
};

inline QuinticTrajectory make_quintic(double z_start, double z_end,
                                      double t_start, double t_end) {
  return QuinticTrajectory(z_start, z_end, t_start, t_end);
}

}  // namespace r2r
