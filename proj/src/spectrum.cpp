#include "mems/basis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <lapacke.h>

namespace mems {

void SpectralBasis::finalize() {
    wmodes_ = modes;
    for (int k = 0; k < K; ++k)
        wmodes_.col(k).array() *= grid.weights.array();
}

namespace {

// K largest eigenpairs of B z = mu A z (A, B symmetric, A positive definite).
// Inverting the pencil keeps the absolute backward error of the dense solve
// relative to 1/lambda_min instead of lambda_max, which preserves the small
// eigenvalues of A x = lambda B x to near machine precision.
void smallest_eigenpairs(const Matrix& A, const Matrix& B, int K, Vector& lambdas,
                         Matrix& X) {
    const int m = static_cast<int>(A.rows());
    Matrix pa = B; // pencil "A"
    Matrix pb = A; // pencil "B", Cholesky factored by LAPACK
    Vector mu(m);
    Matrix Z(m, K);
    std::vector<lapack_int> ifail(m);
    lapack_int found = 0;
    const double abstol = 2.0 * LAPACKE_dlamch('S');
    lapack_int info = LAPACKE_dsygvx(
        LAPACK_COL_MAJOR, 1, 'V', 'I', 'L', m, pa.data(), m, pb.data(), m, 0.0, 0.0,
        m - K + 1, m, abstol, &found, mu.data(), Z.data(), m, ifail.data());
    if (info != 0 || found != K)
        raise(ErrorCode::EigensolveFailure,
              "dsygvx failed (info = " + std::to_string(info) + ")");

    lambdas.resize(K);
    X.resize(m, K);
    for (int k = 0; k < K; ++k) {
        const int src = K - 1 - k; // mu ascending -> lambda ascending
        if (!(mu[src] > 0.0))
            raise(ErrorCode::EigensolveFailure, "nonpositive pencil eigenvalue");
        lambdas[k] = 1.0 / mu[src];
        // dsygvx normalizes z^T (pencil B) z = 1; rescale to unit mass norm
        X.col(k) = Z.col(src) / std::sqrt(mu[src]);
    }
}

int sign_reference_node(const Vector& grid_values) {
    const double scale = grid_values.cwiseAbs().maxCoeff();
    for (int i = 1; i < grid_values.size(); ++i)
        if (std::abs(grid_values[i]) > 1e-12 * scale) return i;
    return 1;
}

} // namespace

SpectralBasis compute_spectrum(const OperatorSpec& spec, const Grid& grid, int K) {
    spec.validate();
    if (K < 1 || 4 * K > grid.cells())
        raise(ErrorCode::TruncationTooLarge,
              "K = " + std::to_string(K) + " exceeds the spectral accuracy guard K <= N/4");

    DiscreteOperator op = assemble_operator(spec, grid);
    Vector lambdas;
    Matrix X;
    smallest_eigenpairs(op.A, op.B, K, lambdas, X);

    // re-orthogonalize inside degenerate clusters (relative gap < 1e-10)
    int lo = 0;
    while (lo < K) {
        int hi = lo + 1;
        while (hi < K && lambdas[hi] - lambdas[hi - 1] < 1e-10 * lambdas[hi]) ++hi;
        if (hi - lo > 1) {
            for (int i = lo; i < hi; ++i) {
                Vector v = X.col(i);
                for (int j = lo; j < i; ++j) {
                    const double pr = X.col(j).dot(op.B * v);
                    v -= pr * X.col(j);
                }
                const double nrm = std::sqrt(v.dot(op.B * v));
                if (!(nrm > 0.0))
                    raise(ErrorCode::EigensolveFailure, "degenerate cluster collapsed");
                X.col(i) = v / nrm;
            }
            // deterministic order inside the cluster: by first-node value
            std::vector<int> order(hi - lo);
            std::iota(order.begin(), order.end(), lo);
            std::vector<double> key(hi - lo);
            for (int i = lo; i < hi; ++i) {
                Vector gv = op.factors.prolong(X.col(i));
                const int ref = sign_reference_node(gv);
                key[i - lo] = std::abs(gv[ref]);
            }
            std::stable_sort(order.begin(), order.end(),
                             [&](int a, int b) { return key[a - lo] < key[b - lo]; });
            Matrix tmp(X.rows(), hi - lo);
            for (int i = 0; i < hi - lo; ++i) tmp.col(i) = X.col(order[i]);
            X.middleCols(lo, hi - lo) = tmp;
        }
        lo = hi;
    }

    SpectralBasis basis;
    basis.spec = spec;
    basis.spec.lambda = 0.0;
    basis.grid = grid;
    basis.K = K;
    basis.eigenvalues = lambdas;
    basis.modes.resize(grid.points(), K);
    for (int k = 0; k < K; ++k) {
        Vector gv = op.factors.prolong(X.col(k));
        const int ref = sign_reference_node(gv);
        if (gv[ref] < 0.0) gv = -gv;
        basis.modes.col(k) = gv;
    }
    basis.version = "1";
    basis.finalize();

    if (!(basis.eigenvalues[0] > 0.0))
        raise(ErrorCode::EigensolveFailure, "nonpositive leading eigenvalue");
    for (int k = 1; k < K; ++k)
        if (basis.eigenvalues[k] < basis.eigenvalues[k - 1])
            raise(ErrorCode::EigensolveFailure, "eigenvalues not ascending");
    return basis;
}

double l2_inner_product(const Vector& u, const Vector& v, const Grid& grid) {
    if (u.size() != v.size() || u.size() != grid.points())
        raise(ErrorCode::LengthMismatch, "l2_inner_product operands must match the grid");
    return (grid.weights.array() * u.array() * v.array()).sum();
}

double energy_inner_product(const Vector& u, const Vector& v, const OperatorSpec& spec,
                            const Grid& grid) {
    if (u.size() != v.size() || u.size() != grid.points())
        raise(ErrorCode::LengthMismatch, "energy_inner_product operands must match the grid");
    const FormFactors ff = build_form_factors(spec, grid);
    const Vector xu = ff.restrict_values(u);
    const Vector xv = ff.restrict_values(v);
    double acc = 0.0;
    for (std::size_t r = 0; r < ff.laplacian.size(); ++r)
        acc += spec.beta * ff.laplacian_weights[static_cast<Eigen::Index>(r)] *
               ff.laplacian[r].apply(xu) * ff.laplacian[r].apply(xv);
    for (std::size_t r = 0; r < ff.gradient.size(); ++r)
        acc += spec.tau * ff.gradient_weights[static_cast<Eigen::Index>(r)] *
               ff.gradient[r].apply(xu) * ff.gradient[r].apply(xv);
    return acc;
}

Vector synthesize(const SpectralBasis& basis, const Vector& coeffs) {
    if (coeffs.size() != basis.K)
        raise(ErrorCode::LengthMismatch, "coefficient vector must have length K");
    return basis.modes * coeffs;
}

Vector analyze(const SpectralBasis& basis, const Vector& grid_values) {
    if (grid_values.size() != basis.points())
        raise(ErrorCode::LengthMismatch, "grid vector must match the basis grid");
    return basis.weighted_modes().transpose() * grid_values;
}

double embedding_constant(const SpectralBasis& basis) {
    if (basis.spec.dim_n >= 8)
        raise(ErrorCode::DimensionNotSupported,
              "the sup-norm embedding constant is only defined for n <= 7");
    const Vector gain = (1.0 + basis.eigenvalues.array().square()).inverse().matrix();
    double best = 0.0;
    for (int i = 0; i < basis.points(); ++i) {
        double s = 0.0;
        for (int k = 0; k < basis.K; ++k)
            s += basis.modes(i, k) * basis.modes(i, k) * gain[k];
        best = std::max(best, s);
    }
    return std::sqrt(best);
}

} // namespace mems
