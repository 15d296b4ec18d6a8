#include "gsc/allocation.hpp"

#include <cmath>

#include "gsc/errors.hpp"

namespace gsc {

void AllocationConfig::validate(const QuadParams& p) const {
    const double idl = idle(p);
    if (!(f_min >= 0.0) || !(f_min < idl) || !(idl < f_max)) {
        throw ConfigError("AllocationConfig: need 0 <= f_min < f_idl < f_max");
    }
    if (!(k_h1 > 0) || !(k_h2 > 0) || !(k_xi > 0) || iota.minCoeff() <= 0 ||
        !(gradient_clamp > 0) || gradient_step < 0) {
        throw ConfigError("AllocationConfig: gains and steps must be positive");
    }
}

void AllocatorState::reset(const AllocationConfig& cfg, const QuadParams& p) {
    xi_accum.setZero();
    last_thrusts.setConstant(cfg.idle(p));
}

Mixer mixer_matrix(const QuadParams& p) {
    Mixer m;
    m.forward << 1, 1, 1, 1,
                 0, p.arm, 0, -p.arm,
                 -p.arm, 0, p.arm, 0,
                 -p.b_t, p.b_t, -p.b_t, p.b_t;
    m.inverse = m.forward.inverse();
    return m;
}

Eigen::Matrix<double, 3, 4> moment_rows(const QuadParams& p) {
    Eigen::Matrix<double, 3, 4> a;
    a << 0, p.arm, 0, -p.arm,
         -p.arm, 0, p.arm, 0,
         -p.b_t, p.b_t, -p.b_t, p.b_t;
    return a;
}

Eigen::Matrix<double, 4, 3> moment_pseudoinverse(const QuadParams& p) {
    const Eigen::Matrix<double, 3, 4> a = moment_rows(p);
    return a.transpose() * (a * a.transpose()).inverse();
}

namespace {

// Derivative of the barrier branch value at x = |f| in (f_min, f_max).
double branch_derivative(double x, double idl, const AllocationConfig& cfg) {
    if (x <= idl) {
        const double half_span = 2.0 * (idl - cfg.f_min);
        const double arg = M_PI * (x - idl) / half_span;
        const double tn = std::tan(arg);
        const double sec = 1.0 / std::cos(arg);
        return cfg.k_h1 * 2.0 * tn * sec * sec * M_PI / half_span;
    }
    const double u = x - idl;
    const double gap = cfg.f_max - x;
    return cfg.k_h2 * u + (2.0 * u * gap + u * u) / (gap * gap);
}

}  // namespace

double barrier_value(double f, const AllocationConfig& cfg,
                     const QuadParams& p) {
    const double idl = cfg.idle(p);
    const double x = std::abs(f);
    if (!(x > cfg.f_min) || !(x < cfg.f_max)) {
        throw OutOfBarrierDomain("barrier: |f| = " + std::to_string(x) +
                                 " outside (" + std::to_string(cfg.f_min) +
                                 ", " + std::to_string(cfg.f_max) + ")");
    }
    if (x <= idl) {
        const double arg = M_PI * (x - idl) / (2.0 * (idl - cfg.f_min));
        const double tn = std::tan(arg);
        return cfg.k_h1 * tn * tn;
    }
    const double u = x - idl;
    return 0.5 * cfg.k_h2 * u * u + u * u / (cfg.f_max - x);
}

double barrier_cost(const Eigen::Vector4d& thrusts,
                    const AllocationConfig& cfg, const QuadParams& p) {
    double total = 0.0;
    for (int i = 0; i < 4; ++i) total += barrier_value(thrusts(i), cfg, p);
    return total;
}

Eigen::Vector4d barrier_gradient(const Eigen::Vector4d& thrusts,
                                 const AllocationConfig& cfg,
                                 const QuadParams& p) {
    const double idl = cfg.idle(p);
    Eigen::Vector4d grad;
    for (int i = 0; i < 4; ++i) {
        const double x = std::abs(thrusts(i));
        if (!(x > cfg.f_min) || !(x < cfg.f_max)) {
            throw OutOfBarrierDomain("barrier_gradient: component " +
                                     std::to_string(i) + " outside domain");
        }
        grad(i) = branch_derivative(x, idl, cfg) *
                  (thrusts(i) < 0.0 ? -1.0 : 1.0);
    }
    return grad;
}

double secondary_thrust_fp(const RigidBodyState& s,
                           const PositionErrorState& e,
                           const Eigen::Vector3d& xddot_d,
                           const GainSet& gains, const QuadParams& p) {
    const Eigen::Vector3d demand = p.m * p.g * Eigen::Vector3d::UnitZ() -
                                   p.m * (gains.k_x / gains.k_v) * e.e_v -
                                   gains.k_xi * e.s_x + p.m * xddot_d;
    return (gains.iota.asDiagonal() * demand).dot(s.r * Eigen::Vector3d::UnitZ());
}

namespace {

// Barrier gradient extended to the whole line: outside the domain the
// component is pinned to the clamp with the sign that steers the thrust
// back inside; negative thrusts count as lower-limit breaches.
double clamped_gradient(double f, double idl, const AllocationConfig& cfg) {
    if (f <= cfg.f_min) return -cfg.gradient_clamp;
    if (f >= cfg.f_max) return cfg.gradient_clamp;
    const double g = branch_derivative(f, idl, cfg);
    return std::clamp(g, -cfg.gradient_clamp, cfg.gradient_clamp);
}

}  // namespace

Eigen::Vector4d allocate_with_constraints(
    const Eigen::Vector3d& moment, const RigidBodyState& s,
    const Eigen::Vector3d& x_d, const Eigen::Vector3d& xdot_d,
    const Eigen::Vector3d& xddot_d, const GainSet& gains, const QuadParams& p,
    const AllocationConfig& cfg, AllocatorState& st, double dt, bool with_fp) {
    const double idl = cfg.idle(p);
    const double h = cfg.gradient_step > 0.0 ? cfg.gradient_step : dt;

    Eigen::Vector4d grad;
    for (int i = 0; i < 4; ++i) {
        grad(i) = clamped_gradient(st.last_thrusts(i), idl, cfg);
    }
    st.xi_accum -= grad * h;  // descend the barrier cost

    Eigen::Vector4d xi = st.xi_accum;
    if (with_fp) {
        const PositionErrorState e = position_errors(s, x_d, xdot_d, gains);
        const double f_p = secondary_thrust_fp(s, e, xddot_d, gains, p);
        xi += mixer_matrix(p).inverse *
              Eigen::Vector4d(f_p, 0.0, 0.0, 0.0);
    }

    const Eigen::Matrix<double, 3, 4> a = moment_rows(p);
    const Eigen::Matrix<double, 4, 3> a_pinv = moment_pseudoinverse(p);
    const Eigen::Vector4d thrusts =
        a_pinv * moment + (Eigen::Matrix4d::Identity() - a_pinv * a) * xi;

    st.last_thrusts = thrusts;
    return thrusts;
}

Eigen::Vector4d position_mode_thrusts(double f, const Eigen::Vector3d& moment,
                                      const Mixer& mixer) {
    return mixer.inverse * Eigen::Vector4d(f, moment.x(), moment.y(), moment.z());
}

}  // namespace gsc
