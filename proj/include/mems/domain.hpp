#pragma once

#include <Eigen/Dense>

#include "mems/errors.hpp"

namespace mems {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

enum class DomainKind { Interval, RadialBall };

/// Spatial domain: an interval (0, L) or the unit ball in R^n reduced to
/// its radial coordinate r in [0, 1].
struct Domain {
    DomainKind kind = DomainKind::Interval;
    double length = 1.0; // Interval only
    int ball_dim = 1;    // RadialBall only

    static Domain interval(double L);
    static Domain radial_ball(int n);

    /// Coordinate extent of the 1-D computational grid (L or 1).
    double extent() const { return kind == DomainKind::Interval ? length : 1.0; }

    bool operator==(const Domain& o) const;
};

enum class BoundaryCondition {
    Dirichlet, // clamped: u = du/dnu = 0
    Navier,    // pinned:  u = laplace(u) = 0
};

const char* to_string(DomainKind k);
const char* to_string(BoundaryCondition bc);

/// Parameters of the operator beta*biharmonic - tau*laplacian together with
/// the voltage parameter lambda of the source lambda/(1-u)^2.
struct OperatorSpec {
    double beta = 1.0;  // bending stiffness, > 0
    double tau = 0.0;   // tension, >= 0
    double lambda = 0.0;
    Domain domain;
    BoundaryCondition bc = BoundaryCondition::Navier;
    int dim_n = 1;

    /// Throws on any violated invariant (beta > 0, tau >= 0, lambda >= 0,
    /// 1 <= dim_n <= 7, dimension consistent with the domain).
    void validate() const;

    /// Spectral identity: everything except lambda.
    bool same_operator(const OperatorSpec& o) const;
};

OperatorSpec make_spec(double beta, double tau, double lambda, Domain domain,
                       BoundaryCondition bc, int dim_n);

/// Uniform grid with quadrature weights that carry the domain measure
/// (surface factor and r^{n-1} for the radial case). Sum of weights equals
/// the domain measure exactly.
struct Grid {
    Vector nodes;   // N+1, strictly increasing, uniform
    Vector weights; // N+1, >= 0
    double spacing = 0.0;

    int cells() const { return static_cast<int>(nodes.size()) - 1; }
    int points() const { return static_cast<int>(nodes.size()); }
};

Grid build_grid(const Domain& domain, int dim_n, int resolution);

/// Surface area of the unit sphere S^{n-1} in R^n.
double sphere_area(int n);

/// Lebesgue measure of the domain (interval length or ball volume).
double domain_measure(const Domain& domain, int dim_n);

} // namespace mems
