#pragma once

// Shared helpers for the test suites: deterministic random rotations and
// vectors (axis uniform on the sphere, angle uniform on [0, pi)), and
// finite-difference utilities.

#include <Eigen/Dense>
#include <random>

#include "gsc/so3.hpp"

namespace gsc_test {

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform(double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(engine_);
    }

    Eigen::Vector3d unit_vector() {
        std::normal_distribution<double> n(0.0, 1.0);
        Eigen::Vector3d v;
        do {
            v = {n(engine_), n(engine_), n(engine_)};
        } while (v.norm() < 1e-6);
        return v.normalized();
    }

    Eigen::Vector3d vector(double scale) {
        return unit_vector() * uniform(0.0, scale);
    }

    /// Rotation with axis uniform on the sphere, angle uniform on [0, max_angle).
    Eigen::Matrix3d rotation(double max_angle = M_PI) {
        return gsc::axis_angle(unit_vector(), uniform(0.0, max_angle));
    }

  private:
    std::mt19937_64 engine_;
};

}  // namespace gsc_test
