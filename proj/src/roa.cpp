#include "gsc/roa.hpp"

#include <cmath>

#include "gsc/errors.hpp"
#include "gsc/so3.hpp"

namespace gsc {

double lambda_min(const Eigen::Matrix2d& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(m);
    return eig.eigenvalues().minCoeff();
}

double lambda_max(const Eigen::Matrix2d& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(m);
    return eig.eigenvalues().maxCoeff();
}

bool positive_definite_minors(const Eigen::Matrix2d& m) {
    return m(0, 0) > 0.0 && m.determinant() > 0.0;
}

AttitudeBasinReport attitude_basin(const RigidBodyState& s0,
                                   const Eigen::Matrix3d& r_d0,
                                   const Eigen::Vector3d& omega_d0,
                                   const GainSet& gains) {
    AttitudeBasinReport rep;
    rep.psi0 = psi_error(s0.r, r_d0);
    rep.e_omega0_normsq =
        angular_velocity_error(s0.r, s0.omega, r_d0, omega_d0).squaredNorm();
    rep.bound = 2.0 * gains.eta * gains.k_r * (2.0 - rep.psi0);
    rep.inside = rep.psi0 < 2.0 && rep.e_omega0_normsq < rep.bound;
    return rep;
}

CertificateMatrices certificate_matrices_attitude(const GainSet& gains,
                                                  double psi_cap) {
    if (!(psi_cap > 0.0 && psi_cap < 2.0)) {
        throw InvalidPsiCap("certificate_matrices_attitude: psi_cap " +
                            std::to_string(psi_cap) + " not in (0, 2)");
    }
    const double kr = gains.k_r;
    const double kw = gains.k_omega;
    const double eta = gains.eta;

    CertificateMatrices c;
    c.w1 << kr * kr / (2.0 * kw) + eta * kr * kw, -kr / 2.0,
            -kr / 2.0, kw / 2.0;
    c.w2 << kr * kr / (2.0 * kw) + 2.0 / (2.0 - psi_cap) * eta * kr * kw,
            kr / 2.0, kr / 2.0, kw / 2.0;
    c.w3 << kr * kr, 0.0, 0.0, kw * kw;
    c.tau = eta * lambda_min(c.w3) / lambda_max(c.w2);
    return c;
}

double theta_max_bounded(const GainSet& gains, const QuadParams& p) {
    const double akv2 = gains.a * gains.k_v * gains.k_v;
    return akv2 / (akv2 + p.m * gains.k_x);
}

double theta_max_position_free(const GainSet& gains, const QuadParams& p) {
    const double a = gains.a;
    const double kx = gains.k_x;
    const double kv = gains.k_v;
    const double m = p.m;

    const double kx4 = kx * kx * kx * kx;
    const double kv2 = kv * kv;
    const double radicand = 4.0 * kx4 * kv2 * kv2 * a * a * a * a +
                            4.0 * kx4 * kx * kv2 * a * a * a * m +
                            2.0 * kx4 * kx * kx * m * m * a * a;
    const double delta1 = 2.0 * kv2 * std::sqrt(radicand) / (kx4 * m * m);
    const double delta2 = -4.0 * a * a * kv2 * kv2 / (m * m * kx * kx) -
                          2.0 * a * kv2 / (m * kx);
    return std::min(theta_max_bounded(gains, p), delta1 + delta2);
}

double psi_p_from_theta(double theta_max) {
    if (theta_max >= 1.0) return 1.0;
    if (theta_max <= 0.0) return 0.0;
    return 1.0 - std::sqrt(1.0 - theta_max * theta_max);
}

CertificateMatrices position_certificate(const GainSet& gains,
                                         const QuadParams& p, double b,
                                         double theta, BasinVariant variant,
                                         std::optional<double> e_bound) {
    const double a = gains.a;
    const double kx = gains.k_x;
    const double kv = gains.k_v;
    const double m = p.m;

    CertificateMatrices c = certificate_matrices_attitude(gains, 1.0);

    if (variant == BasinVariant::PositionFree) {
        const double off = -a * kx * kv * theta - m * kx * kx * theta / (2.0 * kv);
        c.pi1 << a * kx * kx * (1.0 - theta), off,
                 off, a * kv * kv - theta * (m * kx + a * kv * kv);
        c.pi2 << b * kx, 0.0, b * kv, 0.0;
    } else {
        if (!e_bound.has_value()) {
            throw InvalidVariant(
                "position_certificate: bounded variant needs e_bound");
        }
        c.pi1 << a * kx * kx * (1.0 - theta), 0.0,
                 0.0, a * kv * kv - theta * (m * kx + a * kv * kv);
        const double extra =
            (2.0 * a * kx * kv + m * kx * kx / kv) * e_bound.value();
        if (variant == BasinVariant::PositionBounded) {
            c.pi2 << b * kx, 0.0, b * kv + extra, 0.0;
        } else {
            c.pi2 << b * kx + extra, 0.0, b * kv, 0.0;
        }
    }

    c.pi3 << a * kx * kv + m * kx * kx / (2.0 * kv), -m * kx / 2.0,
             -m * kx / 2.0, m * kv / 2.0;
    c.pi4 << a * kx * kv + m * kx * kx / (2.0 * kv), m * kx / 2.0,
             m * kx / 2.0, m * kv / 2.0;

    // Spectral norm of Pi2 (it is not symmetric).
    const double pi2_norm = c.pi2.jacobiSvd().singularValues()(0);
    const double lmin_pi1 = lambda_min(c.pi1);
    const double lmin_w3 = lambda_min(c.w3);
    c.w3_ok = lmin_pi1 > 0.0 &&
              lmin_w3 > pi2_norm * pi2_norm / (4.0 * gains.eta * lmin_pi1);

    c.pi5 << lmin_pi1, -0.5 * pi2_norm,
             -0.5 * pi2_norm, gains.eta * lmin_w3;
    return c;
}

double acceleration_bound(const PositionCommand& cmd, const QuadParams& p,
                          double t0, double t1, double sample_dt) {
    double peak = 0.0;
    for (double t = t0; t <= t1 + 0.5 * sample_dt; t += sample_dt) {
        const double a = (p.m * p.g * Eigen::Vector3d::UnitZ() +
                          p.m * cmd.xddot_d(t))
                             .norm();
        peak = std::max(peak, a);
    }
    return peak * 1.01;
}

PositionBasinReport position_basin(const RigidBodyState& s0,
                                   const PositionCommand& cmd,
                                   const GainSet& gains, const QuadParams& p,
                                   double b, BasinVariant variant,
                                   std::optional<double> e_bound,
                                   double horizon) {
    PositionBasinReport rep;
    rep.variant = variant;
    rep.e_xv_max = e_bound;
    rep.b = b > 0.0 ? b : acceleration_bound(cmd, p, 0.0, horizon);

    const InducedAttitude ind = position_induced_attitude(
        s0, cmd.x_d(0.0), cmd.xdot_d(0.0), cmd.xddot_d(0.0), cmd.e_1d(0.0),
        gains, p);
    rep.psi0 = psi_error(s0.r, ind.r_x);
    rep.theta = std::sqrt(std::max(0.0, rep.psi0 * (2.0 - rep.psi0)));
    rep.theta_max = variant == BasinVariant::PositionFree
                        ? theta_max_position_free(gains, p)
                        : theta_max_bounded(gains, p);
    rep.psi_p = psi_p_from_theta(rep.theta_max);

    // e_w(0) against the commanded frame rate at the initial condition,
    // with the vehicle acceleration taken from the model under the
    // projected thrust (the same convention the controller uses).
    const double thrust =
        ind.force_demand.dot(s0.r * Eigen::Vector3d::UnitZ());
    const Eigen::Vector3d v_dot =
        (-p.m * p.g * Eigen::Vector3d::UnitZ() +
         thrust * s0.r * Eigen::Vector3d::UnitZ()) /
        p.m;
    const InducedAttitudeRates rates = position_induced_attitude_rates(
        s0, v_dot, cmd.x_d(0.0), cmd.xdot_d(0.0), cmd.xddot_d(0.0),
        cmd.jerk(0.0), cmd.e_1d(0.0), gains, p);
    const double e_w0_sq =
        angular_velocity_error(s0.r, s0.omega, ind.r_x, rates.omega_x)
            .squaredNorm();
    rep.e_omega_bound_ok =
        e_w0_sq < 2.0 * gains.eta * gains.k_r * (rep.psi_p - rep.psi0);
    rep.surface_bound_ok =
        e_w0_sq < 2.0 * gains.eta * gains.k_r * (2.0 - rep.psi0);
    rep.inside = rep.psi0 < rep.psi_p && rep.e_omega_bound_ok;
    rep.prop5_attractive = rep.psi0 >= rep.psi_p;

    const CertificateMatrices cert =
        position_certificate(gains, p, rep.b, rep.theta, variant, e_bound);
    rep.w3_ok = cert.w3_ok;
    return rep;
}

PsiACandidates psi_a_candidates(const Eigen::Vector3d& e_r0,
                                const Eigen::Vector3d& e_w0, double psi0,
                                const GainSet& gains) {
    const Eigen::Vector3d s_r = attitude_surface(e_r0, e_w0, gains);
    const double v0 = s_r.squaredNorm() / (2.0 * gains.k_omega) +
                      2.0 * gains.eta * gains.k_r * gains.k_omega * psi0;
    const double v_psi0 =
        0.5 * e_w0.squaredNorm() + gains.eta * gains.k_r * psi0;
    const double scale = gains.eta * gains.k_r;
    return {v0 / scale, v_psi0 / scale};
}

LyapunovValues lyapunov_candidates(const ErrorSample& s, const GainSet& gains,
                                   const QuadParams& p) {
    LyapunovValues out;
    const Eigen::Vector3d s_r = attitude_surface(s.e_r, s.e_omega, gains);
    out.v = s_r.squaredNorm() / (2.0 * gains.k_omega) +
            2.0 * gains.eta * gains.k_r * gains.k_omega * s.psi;
    out.v_psi = 0.5 * s.e_omega.squaredNorm() + gains.eta * gains.k_r * s.psi;
    const Eigen::Vector3d s_x = gains.k_x * s.e_x + gains.k_v * s.e_v;
    out.v_x = p.m / (2.0 * gains.k_v) * s_x.squaredNorm() +
              gains.a * gains.k_x * gains.k_v * s.e_x.squaredNorm();
    out.v_g = out.v_x + out.v;
    return out;
}

std::vector<LyapunovSample> lyapunov_trace(
    const std::vector<ErrorSample>& samples, const GainSet& gains,
    const QuadParams& p, double psi_cap) {
    const CertificateMatrices att =
        certificate_matrices_attitude(gains, psi_cap);
    const Eigen::Matrix2d pi3 =
        (Eigen::Matrix2d() << gains.a * gains.k_x * gains.k_v +
                                  p.m * gains.k_x * gains.k_x / (2.0 * gains.k_v),
         -p.m * gains.k_x / 2.0, -p.m * gains.k_x / 2.0, p.m * gains.k_v / 2.0)
            .finished();
    const Eigen::Matrix2d pi4 =
        (Eigen::Matrix2d() << pi3(0, 0), -pi3(0, 1), -pi3(1, 0), pi3(1, 1))
            .finished();

    std::vector<LyapunovSample> out;
    out.reserve(samples.size());
    for (const ErrorSample& s : samples) {
        LyapunovSample row;
        row.t = s.t;
        row.values = lyapunov_candidates(s, gains, p);
        const Eigen::Vector2d z_r(s.e_r.norm(), s.e_omega.norm());
        const Eigen::Vector2d z_x(s.e_x.norm(), s.e_v.norm());
        row.bound_lhs = z_r.dot(att.w1 * z_r) + z_x.dot(pi3 * z_x);
        row.bound_rhs = z_r.dot(att.w2 * z_r) + z_x.dot(pi4 * z_x);
        out.push_back(row);
    }
    return out;
}

PropABounds prop_a_bounds(const Eigen::Matrix3d& r, const Eigen::Matrix3d& r_x) {
    const double psi = psi_error(r, r_x);
    if (psi >= 1.0) {
        throw DomainViolation("prop_a_bounds: psi = " + std::to_string(psi) +
                              " >= 1");
    }
    const Eigen::Vector3d body_up = r * Eigen::Vector3d::UnitZ();
    const Eigen::Vector3d cmd_up = r_x * Eigen::Vector3d::UnitZ();
    const double cosine = cmd_up.dot(body_up);
    const double sine = (cosine * body_up - cmd_up).norm();
    const double e_r_norm = attitude_error_vector(r, r_x).norm();

    PropABounds out;
    const double tol = 1e-9;
    out.cos_lb_ok = cosine >= 1.0 - psi - tol && 1.0 - psi > 0.0;
    out.sine_le_er = sine <= e_r_norm + tol;
    return out;
}

}  // namespace gsc
