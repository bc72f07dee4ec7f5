#pragma once

#include <vector>

#include "mems/domain.hpp"

namespace mems {

/// One row of a sparse difference operator: coefficients over unknown indices.
struct StencilRow {
    // parallel arrays (index into the unknown vector, coefficient)
    int idx[4] = {0, 0, 0, 0};
    double coef[4] = {0, 0, 0, 0};
    int nnz = 0;

    void add(int j, double c);
    double apply(const Vector& x) const;
};

/// Discrete difference operators behind the assembly: the Laplacian sampled at
/// weighted evaluation nodes and the gradient sampled at cell faces, both
/// acting on the reduced unknown vector (boundary values eliminated, and the
/// ball center eliminated through u'(0) = 0 for n >= 2).
struct FormFactors {
    std::vector<StencilRow> laplacian; // one row per evaluation node
    Vector laplacian_weights;
    std::vector<StencilRow> gradient; // one row per face
    Vector gradient_weights;

    int n_unknowns = 0;
    int n_nodes = 0;             // grid points, N+1
    int first_unknown_node = 1;  // grid index of unknown 0
    bool center_eliminated = false;
    double center_c1 = 0.0, center_c2 = 0.0; // u(0) = c1*u(h) + c2*u(2h)

    /// Unknowns -> grid values (boundary zeros, reconstructed center).
    Vector prolong(const Vector& x) const;
    /// Grid values -> unknowns (drops eliminated nodes).
    Vector restrict_values(const Vector& u) const;
};

FormFactors build_form_factors(const OperatorSpec& spec, const Grid& grid);

/// Stiffness matrix A (of the quadratic form beta*<Lap u, Lap v> +
/// tau*<grad u, grad v>) and mass matrix B (discrete L^2 form), both on the
/// unknown space. A is exactly symmetric; B is symmetric positive definite.
struct DiscreteOperator {
    Matrix A;
    Matrix B;
    FormFactors factors;
};

DiscreteOperator assemble_operator(const OperatorSpec& spec, const Grid& grid);

} // namespace mems
