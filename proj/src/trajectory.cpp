#include "mems/trajectory.hpp"

#include <cmath>

namespace mems {

const char* to_string(SolverKind k) {
    return k == SolverKind::Parabolic ? "parabolic" : "hyperbolic";
}

const char* to_string(Termination t) {
    switch (t) {
        case Termination::Completed: return "completed";
        case Termination::Touchdown: return "touchdown";
        case Termination::Diverged: return "diverged";
    }
    return "unknown";
}

GalerkinState Trajectory::state_at(int i) const {
    if (i < 0 || i >= samples())
        raise(ErrorCode::LengthMismatch, "sample index out of range");
    GalerkinState s;
    s.t = times[static_cast<std::size_t>(i)];
    s.coeffs = coeffs.row(i).transpose();
    if (velocity.size() > 0) s.velocity = velocity.row(i).transpose();
    return s;
}

Trajectory trajectory_difference(const Trajectory& a, const Trajectory& b) {
    if (a.samples() != b.samples() || a.K() != b.K())
        raise(ErrorCode::LengthMismatch, "trajectories have different shapes");
    for (int i = 0; i < a.samples(); ++i)
        if (std::abs(a.times[static_cast<std::size_t>(i)] - b.times[static_cast<std::size_t>(i)]) >
            1e-12 * (1.0 + std::abs(a.times.back())))
            raise(ErrorCode::LengthMismatch, "trajectories sampled on different time grids");
    Trajectory d;
    d.kind = a.kind;
    d.times = a.times;
    d.coeffs = a.coeffs - b.coeffs;
    if (a.velocity.size() > 0 && b.velocity.size() > 0) d.velocity = a.velocity - b.velocity;
    d.termination = Termination::Completed;
    return d;
}

Vector principal_direction(const SpectralBasis& basis, double* coeff_scale) {
    Vector v = basis.eigenfunction(0);
    const double mean = (basis.grid.weights.array() * v.array()).sum();
    const double sign = mean < 0.0 ? -1.0 : 1.0;
    const double l1 = (basis.grid.weights.array() * v.array().abs()).sum();
    if (!(l1 > 0.0)) raise(ErrorCode::EigensolveFailure, "degenerate first eigenfunction");
    if (coeff_scale) *coeff_scale = sign / l1;
    return (sign / l1) * v;
}

void SolveConfig::validate(SolverKind kind) const {
    if (!basis) raise(ErrorCode::ConfigInvalid, "basis is required");
    if (!spec.same_operator(basis->spec))
        raise(ErrorCode::ConfigInvalid, "spec does not match the basis operator");
    if (u0.size() != basis->points())
        raise(ErrorCode::ConfigInvalid, "u0 must be sampled on the basis grid");
    if (!(dt > 0.0)) raise(ErrorCode::ConfigInvalid, "dt must be positive");
    if (!(T_final > dt)) raise(ErrorCode::ConfigInvalid, "dt must be smaller than T_final");
    if (!(touch_eps > 0.0 && touch_eps < 0.1))
        raise(ErrorCode::ConfigInvalid, "touch_eps must lie in (0, 0.1)");
    if (sample_every < 1) raise(ErrorCode::ConfigInvalid, "sample_every must be >= 1");

    const double scale = 1.0 + u0.cwiseAbs().maxCoeff();
    const int last = basis->points() - 1;
    if (std::abs(u0[last]) > 1e-10 * scale)
        raise(ErrorCode::ConfigInvalid, "u0 violates the boundary condition at the wall");
    if (spec.domain.kind == DomainKind::Interval && std::abs(u0[0]) > 1e-10 * scale)
        raise(ErrorCode::ConfigInvalid, "u0 violates the boundary condition at x = 0");

    if (kind == SolverKind::Hyperbolic) {
        if (!u1) raise(ErrorCode::ConfigInvalid, "hyperbolic runs require the initial velocity u1");
        if (u1->size() != basis->points())
            raise(ErrorCode::ConfigInvalid, "u1 must be sampled on the basis grid");
        const double s1 = 1.0 + u1->cwiseAbs().maxCoeff();
        if (std::abs((*u1)[last]) > 1e-10 * s1)
            raise(ErrorCode::ConfigInvalid, "u1 violates the boundary condition at the wall");
    }
}

} // namespace mems
