#pragma once

#include "mems/trajectory.hpp"

namespace mems {

/// First eigenpair, sign-corrected to be nonnegative and rescaled to unit
/// L^1 norm, so <phi1, 1> = 1.
struct PrincipalEigenpair {
    double lambda1 = 0.0;
    Vector phi1;
};

/// The eigenfunction method needs a positive principal eigenfunction: pinned
/// conditions on any supported domain, or clamped conditions on the ball.
bool quench_admissible(const OperatorSpec& spec);

PrincipalEigenpair principal_eigenpair(const SpectralBasis& basis);

/// g(M) = -lambda1 M + lambda / (1-M)^2, the comparison rate of the mass
/// functional M(t) = <phi1, u(t)>.
double g_of_M(double M, double lambda, double lambda1);

struct QuenchConstants {
    double lambda_threshold = 0.0; // 4 lambda1 / 27
    double c0 = 0.0;               // inf of g over the reachable mass range
};

/// Closed-form minimum of g over (M_ref, 1): at the critical point
/// 1 - M = (2 lambda / lambda1)^{1/3} when it lies in range, else at M_ref.
/// c0 > 0 exactly when lambda > 4 lambda1 / 27.
QuenchConstants quench_constants(double lambda, double lambda1, double M_ref = -2.0);

/// (1 - M0) / c0, the finite-time touchdown horizon.
double touchdown_bound(double M0, double c0);

struct QuenchBound {
    double lambda_threshold = 0.0;
    double c0 = 0.0;
    double M0 = 0.0;
    double T_bound = 0.0; // +inf when not supercritical
    bool applicable = false;
};

QuenchBound quench_bound(const SpectralBasis& basis, double lambda, double M0);

struct MassReport {
    std::vector<double> M;
    double M0 = 0.0;
    double max_M = 0.0;
    bool mass_below_one = false;

    bool differential_checked = false; // parabolic trajectories only
    double min_residual = 0.0;         // min over interior samples of dM/dt - g(M)
    double tol = 0.0;                  // 1e-3 * lambda
    bool inequality_holds = false;     // min_residual >= -tol (when checked)

    double lambda_threshold = 0.0;
    double c0 = 0.0;
    double T_bound = 0.0;
    std::optional<double> touch_time;
    bool bound_satisfied = false; // touch_time <= T_bound
};

MassReport verify_mass_inequality(const Trajectory& traj, const PrincipalEigenpair& pair,
                                  double lambda, const SpectralBasis& basis);

} // namespace mems
