#include "mems/domain.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace mems {

const char* to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::ResolutionTooCoarse: return "ResolutionTooCoarse";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::DimensionNotSupported: return "DimensionNotSupported";
        case ErrorCode::SingularAssembly: return "SingularAssembly";
        case ErrorCode::TruncationTooLarge: return "TruncationTooLarge";
        case ErrorCode::EigensolveFailure: return "EigensolveFailure";
        case ErrorCode::LengthMismatch: return "LengthMismatch";
        case ErrorCode::TouchdownImminent: return "TouchdownImminent";
        case ErrorCode::InsufficientSamples: return "InsufficientSamples";
        case ErrorCode::NonFinite: return "NonFinite";
        case ErrorCode::BallTooLarge: return "BallTooLarge";
        case ErrorCode::RhoTooLarge: return "RhoTooLarge";
        case ErrorCode::NotSupercritical: return "NotSupercritical";
        case ErrorCode::MassAtTouchdown: return "MassAtTouchdown";
        case ErrorCode::PositivityFailure: return "PositivityFailure";
        case ErrorCode::DomainNotAdmissible: return "DomainNotAdmissible";
        case ErrorCode::NotCertified: return "NotCertified";
        case ErrorCode::ConfigInvalid: return "ConfigInvalid";
        case ErrorCode::IoFailure: return "IoFailure";
        case ErrorCode::FormatVersionMismatch: return "FormatVersionMismatch";
        case ErrorCode::CacheCorrupt: return "CacheCorrupt";
    }
    return "UnknownError";
}

const char* to_string(DomainKind k) {
    return k == DomainKind::Interval ? "interval" : "radial_ball";
}

const char* to_string(BoundaryCondition bc) {
    return bc == BoundaryCondition::Dirichlet ? "dirichlet" : "navier";
}

Domain Domain::interval(double L) {
    if (!(L > 0.0))
        raise(ErrorCode::ConfigInvalid, "interval length must be positive");
    Domain d;
    d.kind = DomainKind::Interval;
    d.length = L;
    d.ball_dim = 1;
    return d;
}

Domain Domain::radial_ball(int n) {
    if (n < 1)
        raise(ErrorCode::DimensionMismatch, "ball dimension must be >= 1");
    Domain d;
    d.kind = DomainKind::RadialBall;
    d.length = 1.0;
    d.ball_dim = n;
    return d;
}

bool Domain::operator==(const Domain& o) const {
    if (kind != o.kind) return false;
    if (kind == DomainKind::Interval) return length == o.length;
    return ball_dim == o.ball_dim;
}

void OperatorSpec::validate() const {
    if (!(beta > 0.0))
        raise(ErrorCode::ConfigInvalid, "beta must be positive");
    if (!(tau >= 0.0))
        raise(ErrorCode::ConfigInvalid, "tau must be nonnegative");
    if (!(lambda >= 0.0))
        raise(ErrorCode::ConfigInvalid, "lambda must be nonnegative");
    if (dim_n < 1 || dim_n > 7)
        raise(ErrorCode::DimensionNotSupported,
              "dim_n = " + std::to_string(dim_n) +
                  " is outside the supported range 1 <= n <= 7 (the sup-norm embedding "
                  "of the fourth-order energy space fails for n >= 8)");
    if (domain.kind == DomainKind::Interval && dim_n != 1)
        raise(ErrorCode::DimensionMismatch, "interval domains require dim_n = 1");
    if (domain.kind == DomainKind::RadialBall && dim_n != domain.ball_dim)
        raise(ErrorCode::DimensionMismatch,
              "dim_n must match the ball dimension (" + std::to_string(domain.ball_dim) + ")");
}

bool OperatorSpec::same_operator(const OperatorSpec& o) const {
    return beta == o.beta && tau == o.tau && domain == o.domain && bc == o.bc &&
           dim_n == o.dim_n;
}

OperatorSpec make_spec(double beta, double tau, double lambda, Domain domain,
                       BoundaryCondition bc, int dim_n) {
    OperatorSpec s;
    s.beta = beta;
    s.tau = tau;
    s.lambda = lambda;
    s.domain = domain;
    s.bc = bc;
    s.dim_n = dim_n;
    s.validate();
    return s;
}

double sphere_area(int n) {
    return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
}

double domain_measure(const Domain& domain, int dim_n) {
    if (domain.kind == DomainKind::Interval) return domain.length;
    return sphere_area(dim_n) / dim_n; // |B_1| = |S^{n-1}| / n
}

Grid build_grid(const Domain& domain, int dim_n, int resolution) {
    if (resolution < 16)
        raise(ErrorCode::ResolutionTooCoarse,
              "grid resolution N = " + std::to_string(resolution) + " is below the minimum 16");
    if (domain.kind == DomainKind::Interval && dim_n != 1)
        raise(ErrorCode::DimensionMismatch, "interval domains require dim_n = 1");
    if (domain.kind == DomainKind::RadialBall && dim_n != domain.ball_dim)
        raise(ErrorCode::DimensionMismatch, "dim_n must match the ball dimension");

    const int N = resolution;
    const double extent = domain.extent();
    const double h = extent / N;

    Grid g;
    g.spacing = h;
    g.nodes.resize(N + 1);
    g.weights.resize(N + 1);
    for (int i = 0; i <= N; ++i) g.nodes[i] = i * h;
    g.nodes[N] = extent;

    if (domain.kind == DomainKind::Interval) {
        g.weights.setConstant(h);
        g.weights[0] = g.weights[N] = 0.5 * h;
    } else {
        const int n = dim_n;
        const double sigma = sphere_area(n);
        for (int i = 0; i <= N; ++i) {
            const double trap = (i == 0 || i == N) ? 0.5 * h : h;
            g.weights[i] = sigma * trap * std::pow(g.nodes[i], n - 1);
        }
        // Trapezoid applied to r^{n-1} is not exact for n >= 3; rescale so the
        // discrete measure matches the ball volume (an O(h^2) correction that
        // keeps the zero weight at the origin).
        const double target = domain_measure(domain, n);
        g.weights *= target / g.weights.sum();
    }
    return g;
}

} // namespace mems
