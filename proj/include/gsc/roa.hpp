#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "gsc/controllers.hpp"
#include "gsc/dynamics.hpp"

namespace gsc {

/**
 * Numerical evaluation of the closed-loop stability certificates: basins
 * of attraction for both flight modes, the quadratic-form matrices
 * bounding the Lyapunov candidates, and per-trajectory diagnostics.
 * Matrices are checked for positive-definiteness with a dense symmetric
 * eigensolver and cross-validated with leading principal minors.
 */

/// Attitude-mode basin test: inside iff
///   psi(0) < 2  and  ||e_w(0)||^2 < 2 eta k_R (2 - psi(0)).
struct AttitudeBasinReport {
    double psi0 = 0.0;
    double e_omega0_normsq = 0.0;
    double bound = 0.0;  ///< 2 eta k_R (2 - psi0)
    bool inside = false;
};

AttitudeBasinReport attitude_basin(const RigidBodyState& s0,
                                   const Eigen::Matrix3d& r_d0,
                                   const Eigen::Vector3d& omega_d0,
                                   const GainSet& gains);

/// Quadratic-form matrices of the attitude certificate:
///   z_R^T W1 z_R <= V <= z_R^T W2 z_R,   Vdot = -eta z_R^T W3 z_R
/// with z_R = (||e_R||, ||e_w||), plus the decay rate
///   tau = eta lmin(W3) / lmax(W2).
/// Position-mode extensions fill Pi1..Pi5 (see position_certificate).
struct CertificateMatrices {
    Eigen::Matrix2d w1 = Eigen::Matrix2d::Zero();
    Eigen::Matrix2d w2 = Eigen::Matrix2d::Zero();
    Eigen::Matrix2d w3 = Eigen::Matrix2d::Zero();
    Eigen::Matrix2d pi1 = Eigen::Matrix2d::Zero();
    Eigen::Matrix2d pi2 = Eigen::Matrix2d::Zero();
    Eigen::Matrix2d pi3 = Eigen::Matrix2d::Zero();
    Eigen::Matrix2d pi4 = Eigen::Matrix2d::Zero();
    Eigen::Matrix2d pi5 = Eigen::Matrix2d::Zero();
    double tau = 0.0;
    bool w3_ok = false;  ///< gain condition lmin(W3) > ||Pi2||^2/(4 eta lmin(Pi1))
};

/// Throws InvalidPsiCap unless 0 < psi_cap < 2.
CertificateMatrices certificate_matrices_attitude(const GainSet& gains,
                                                  double psi_cap);

/// Smallest/largest eigenvalue of a symmetric 2x2 (dense solver).
double lambda_min(const Eigen::Matrix2d& m);
double lambda_max(const Eigen::Matrix2d& m);

/// Positive-definiteness by leading principal minors (cross-check path).
bool positive_definite_minors(const Eigen::Matrix2d& m);

enum class BasinVariant { PositionFree, PositionBounded, VelocityBounded };

/// Largest admissible attitude-error amplitude theta for the
/// position/velocity-free certificate:
///   min{ a k_v^2/(a k_v^2 + m k_x),  delta1 + delta2 }.
double theta_max_position_free(const GainSet& gains, const QuadParams& p);

/// Larger bound available when the initial position or velocity error is
/// bounded: a k_v^2/(a k_v^2 + m k_x).
double theta_max_bounded(const GainSet& gains, const QuadParams& p);

/// Attitude-error cap corresponding to an amplitude bound,
/// theta = sqrt(psi_p (2 - psi_p)) inverted on psi_p < 1.
double psi_p_from_theta(double theta_max);

/// Fills Pi1..Pi5 and the gain condition for the chosen variant at the
/// audited amplitude theta. Bounded variants require e_bound (throws
/// InvalidVariant otherwise).
CertificateMatrices position_certificate(const GainSet& gains,
                                         const QuadParams& p, double b,
                                         double theta, BasinVariant variant,
                                         std::optional<double> e_bound = {});

struct PositionBasinReport {
    double psi0 = 0.0;
    double psi_p = 0.0;      ///< attitude-error cap of the variant
    double theta = 0.0;      ///< audited amplitude sqrt(psi0 (2 - psi0))
    double theta_max = 0.0;
    double b = 0.0;          ///< acceleration bound used
    bool w3_ok = false;
    bool e_omega_bound_ok = false;  ///< ||e_w(0)||^2 < 2 eta k_R (psi_p - psi0)
    bool surface_bound_ok = false;  ///< ||e_w(0)||^2 < 2 eta k_R (2 - psi0)
    bool inside = false;            ///< psi0 < psi_p and e_omega_bound_ok
    bool prop5_attractive = false;  ///< outside the basin, the almost-global
                                    ///< attractiveness result applies
    BasinVariant variant = BasinVariant::PositionFree;
    std::optional<double> e_xv_max;
};

/// Evaluates the position-mode basin at the initial condition. b <= 0
/// derives the acceleration bound by sampling the command over
/// [t0, horizon]. e_w(0) is taken against the closed-form rate of the
/// induced attitude at the initial condition.
PositionBasinReport position_basin(const RigidBodyState& s0,
                                   const PositionCommand& cmd,
                                   const GainSet& gains, const QuadParams& p,
                                   double b, BasinVariant variant,
                                   std::optional<double> e_bound = {},
                                   double horizon = 10.0);

/// max over a sampled horizon of ||m g E3 + m xddot_d||, plus 1% margin.
double acceleration_bound(const PositionCommand& cmd, const QuadParams& p,
                          double t0, double t1, double sample_dt = 1e-2);

/// Both ratios proposed for the attitude-error cap psi_a; the V_psi-based
/// ratio is the one guaranteed below 2 inside the basin.
struct PsiACandidates {
    double from_v;      ///< V(0) / (eta k_R)
    double from_v_psi;  ///< V_psi(0) / (eta k_R)
};

PsiACandidates psi_a_candidates(const Eigen::Vector3d& e_r0,
                                const Eigen::Vector3d& e_w0, double psi0,
                                const GainSet& gains);

/// One recorded sample of the closed-loop tracking errors.
struct ErrorSample {
    double t = 0.0;
    Eigen::Vector3d e_r = Eigen::Vector3d::Zero();
    Eigen::Vector3d e_omega = Eigen::Vector3d::Zero();
    Eigen::Vector3d e_x = Eigen::Vector3d::Zero();
    Eigen::Vector3d e_v = Eigen::Vector3d::Zero();
    double psi = 0.0;
};

/// The four Lyapunov candidates evaluated at one sample.
struct LyapunovValues {
    double v = 0.0;      ///< surface candidate (1/2k_w)|s_R|^2 + 2 eta k_R k_w psi
    double v_psi = 0.0;  ///< 1/2 |e_w|^2 + eta k_R psi
    double v_x = 0.0;    ///< m/(2k_v)|s_x|^2 + a k_x k_v |e_x|^2
    double v_g = 0.0;    ///< v_x + v
};

LyapunovValues lyapunov_candidates(const ErrorSample& sample,
                                   const GainSet& gains, const QuadParams& p);

/// Candidates plus the quadratic sandwich
///   z_R^T W1 z_R + z_x^T Pi3 z_x <= V_g <= z_R^T W2 z_R + z_x^T Pi4 z_x.
struct LyapunovSample {
    double t = 0.0;
    LyapunovValues values;
    double bound_lhs = 0.0;
    double bound_rhs = 0.0;
};

std::vector<LyapunovSample> lyapunov_trace(
    const std::vector<ErrorSample>& samples, const GainSet& gains,
    const QuadParams& p, double psi_cap);

/// The two alignment inequalities between the body vertical and the
/// commanded vertical, valid on psi(R, R_x) < 1:
///   (R_x e3)^T R e3 >= 1 - psi > 0
///   ||((R_x e3)^T R e3) R e3 - R_x e3|| <= ||e_R||.
/// Throws DomainViolation when psi >= 1.
struct PropABounds {
    bool cos_lb_ok = false;
    bool sine_le_er = false;
};

PropABounds prop_a_bounds(const Eigen::Matrix3d& r, const Eigen::Matrix3d& r_x);

}  // namespace gsc
