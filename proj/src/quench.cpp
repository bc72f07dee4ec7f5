#include "mems/quench.hpp"

#include <cmath>
#include <limits>

namespace mems {

bool quench_admissible(const OperatorSpec& spec) {
    if (spec.bc == BoundaryCondition::Navier) return true;
    return spec.domain.kind == DomainKind::RadialBall;
}

PrincipalEigenpair principal_eigenpair(const SpectralBasis& basis) {
    if (!quench_admissible(basis.spec))
        raise(ErrorCode::DomainNotAdmissible,
              "clamped conditions admit the eigenfunction method only on the ball "
              "(no comparison structure on general clamped domains)");

    Vector phi = basis.eigenfunction(0);
    const double mean = (basis.grid.weights.array() * phi.array()).sum();
    if (mean < 0.0) phi = -phi;
    const double l1 = (basis.grid.weights.array() * phi.array().abs()).sum();
    if (!(l1 > 0.0)) raise(ErrorCode::EigensolveFailure, "degenerate first eigenfunction");
    phi /= l1;

    double min_interior = 0.0;
    for (int i = 0; i + 1 < basis.points(); ++i) min_interior = std::min(min_interior, phi[i]);
    if (min_interior < -1e-10)
        raise(ErrorCode::PositivityFailure,
              "first eigenfunction changes sign (min " + std::to_string(min_interior) + ")");

    PrincipalEigenpair pair;
    pair.lambda1 = basis.eigenvalues[0];
    pair.phi1 = phi;
    return pair;
}

double g_of_M(double M, double lambda, double lambda1) {
    if (M >= 1.0)
        raise(ErrorCode::MassAtTouchdown, "g(M) is undefined for M >= 1");
    const double d = 1.0 - M;
    return -lambda1 * M + lambda / (d * d);
}

QuenchConstants quench_constants(double lambda, double lambda1, double M_ref) {
    if (!(lambda1 > 0.0)) raise(ErrorCode::ConfigInvalid, "lambda1 must be positive");
    if (!(lambda >= 0.0)) raise(ErrorCode::ConfigInvalid, "lambda must be nonnegative");
    QuenchConstants qc;
    qc.lambda_threshold = 4.0 * lambda1 / 27.0;
    const double s = std::cbrt(2.0 * lambda / lambda1); // 1 - M at the critical point
    if (s <= 1.0 - M_ref) {
        // lambda / s^2 = lambda1 s / 2 at the critical point
        qc.c0 = lambda1 * (1.5 * s - 1.0);
    } else {
        qc.c0 = g_of_M(M_ref, lambda, lambda1);
    }
    return qc;
}

double touchdown_bound(double M0, double c0) {
    if (!(M0 >= 0.0 && M0 < 1.0))
        raise(ErrorCode::ConfigInvalid, "M0 must lie in [0, 1)");
    if (!(c0 > 0.0))
        raise(ErrorCode::NotSupercritical, "the comparison rate c0 is not positive");
    return (1.0 - M0) / c0;
}

QuenchBound quench_bound(const SpectralBasis& basis, double lambda, double M0) {
    QuenchBound qb;
    qb.applicable = quench_admissible(basis.spec);
    qb.M0 = M0;
    if (!qb.applicable) return qb;
    const PrincipalEigenpair pair = principal_eigenpair(basis);
    const QuenchConstants qc = quench_constants(lambda, pair.lambda1);
    qb.lambda_threshold = qc.lambda_threshold;
    qb.c0 = qc.c0;
    qb.T_bound = qc.c0 > 0.0 ? touchdown_bound(M0, qc.c0)
                             : std::numeric_limits<double>::infinity();
    return qb;
}

MassReport verify_mass_inequality(const Trajectory& traj, const PrincipalEigenpair& pair,
                                  double lambda, const SpectralBasis& basis) {
    if (!quench_admissible(basis.spec))
        raise(ErrorCode::DomainNotAdmissible, "eigenfunction method not admissible here");
    if (traj.samples() < 3)
        raise(ErrorCode::InsufficientSamples, "mass report needs >= 3 samples");
    if (pair.phi1.size() != basis.points())
        raise(ErrorCode::LengthMismatch, "eigenpair does not match the basis grid");

    MassReport rep;
    const int n = traj.samples();
    const Vector wphi = (basis.grid.weights.array() * pair.phi1.array()).matrix();
    rep.M.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const Vector u = synthesize(basis, traj.coeffs.row(i).transpose());
        rep.M[static_cast<std::size_t>(i)] = wphi.dot(u);
    }
    rep.M0 = rep.M[0];
    rep.max_M = *std::max_element(rep.M.begin(), rep.M.end());
    rep.mass_below_one = rep.max_M <= 1.0 + 1e-12;

    rep.tol = 1e-3 * lambda;
    rep.differential_checked = traj.kind == SolverKind::Parabolic;
    if (rep.differential_checked) {
        rep.min_residual = std::numeric_limits<double>::infinity();
        const auto& t = traj.times;
        for (int i = 1; i + 1 < n; ++i) {
            if (rep.M[static_cast<std::size_t>(i)] >= 1.0) continue;
            const double dM = (rep.M[static_cast<std::size_t>(i + 1)] -
                               rep.M[static_cast<std::size_t>(i - 1)]) /
                              (t[i + 1] - t[i - 1]);
            const double res = dM - g_of_M(rep.M[static_cast<std::size_t>(i)], lambda, pair.lambda1);
            rep.min_residual = std::min(rep.min_residual, res);
        }
        rep.inequality_holds = rep.min_residual >= -rep.tol;
    }

    const QuenchConstants qc = quench_constants(lambda, pair.lambda1);
    rep.lambda_threshold = qc.lambda_threshold;
    rep.c0 = qc.c0;
    rep.T_bound = (qc.c0 > 0.0 && rep.M0 < 1.0 && rep.M0 >= 0.0)
                      ? touchdown_bound(rep.M0, qc.c0)
                      : std::numeric_limits<double>::infinity();
    rep.touch_time = traj.touch_time;
    rep.bound_satisfied = traj.touched && traj.touch_time && *traj.touch_time <= rep.T_bound;
    return rep;
}

} // namespace mems
