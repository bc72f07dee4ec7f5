#pragma once

#include <string>

#include "mems/operators.hpp"

namespace mems {

/// Grid-sampled orthonormal eigenbasis of beta*biharmonic - tau*laplacian
/// under the configured boundary conditions: 0 < lambda_1 <= ... <= lambda_K,
/// nodal eigenfunction values orthonormal in the weighted discrete L^2 product.
struct SpectralBasis {
    OperatorSpec spec; // lambda field ignored
    Grid grid;
    int K = 0;
    Vector eigenvalues;  // ascending, positive
    Matrix modes;        // (N+1) x K nodal values
    std::string version; // cache format tag

    int points() const { return grid.points(); }
    Vector eigenfunction(int k) const { return modes.col(k); }

    /// Weighted modes (w .* omega_k per column); used by analyze/projection.
    const Matrix& weighted_modes() const { return wmodes_; }
    void finalize(); // rebuild caches after construction/load

private:
    Matrix wmodes_;
};

/// K smallest eigenpairs, ascending, L^2-orthonormal, sign fixed so the first
/// interior nodal value is positive. Requires K <= N/4.
SpectralBasis compute_spectrum(const OperatorSpec& spec, const Grid& grid, int K);

double l2_inner_product(const Vector& u, const Vector& v, const Grid& grid);

/// beta*<Lap u, Lap v> + tau*<grad u, grad v> through the same difference
/// operators used in assembly, so basis vectors diagonalize it exactly.
double energy_inner_product(const Vector& u, const Vector& v, const OperatorSpec& spec,
                            const Grid& grid);

Vector synthesize(const SpectralBasis& basis, const Vector& coeffs);
Vector analyze(const SpectralBasis& basis, const Vector& grid_values);

/// Operator norm of point evaluation on span{omega_k} under the norm
/// (|u|_2^2 + |Lu|_2^2)^{1/2}: max_x sqrt(sum_k omega_k(x)^2 / (1+lambda_k^2)).
/// A finite-dimensional lower approximation of the sup-norm embedding constant.
double embedding_constant(const SpectralBasis& basis);

} // namespace mems
