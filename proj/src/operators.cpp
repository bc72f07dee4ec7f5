#include "mems/operators.hpp"

#include <cmath>

namespace mems {

void StencilRow::add(int j, double c) {
    if (c == 0.0) return;
    for (int k = 0; k < nnz; ++k) {
        if (idx[k] == j) {
            coef[k] += c;
            return;
        }
    }
    idx[nnz] = j;
    coef[nnz] = c;
    ++nnz;
}

double StencilRow::apply(const Vector& x) const {
    double s = 0.0;
    for (int k = 0; k < nnz; ++k) s += coef[k] * x[idx[k]];
    return s;
}

Vector FormFactors::prolong(const Vector& x) const {
    if (x.size() != n_unknowns)
        raise(ErrorCode::LengthMismatch, "unknown vector has wrong length");
    Vector u = Vector::Zero(n_nodes);
    for (int j = 0; j < n_unknowns; ++j) u[first_unknown_node + j] = x[j];
    if (center_eliminated) u[0] = center_c1 * x[0] + center_c2 * x[1];
    return u;
}

Vector FormFactors::restrict_values(const Vector& u) const {
    if (u.size() != n_nodes)
        raise(ErrorCode::LengthMismatch, "grid vector has wrong length");
    return u.segment(first_unknown_node, n_unknowns);
}

namespace {

// Adds the coefficient of the grid node `node` into a stencil row acting on
// unknowns, expanding eliminated nodes (boundary -> 0, center -> u'(0)=0 rule).
void add_node(StencilRow& row, const FormFactors& ff, int node, double c) {
    const int N = ff.n_nodes - 1;
    if (node == N) return; // boundary value, zero under both conditions
    if (node == 0) {
        if (ff.center_eliminated) {
            row.add(0, c * ff.center_c1);
            row.add(1, c * ff.center_c2);
            return;
        }
        if (ff.first_unknown_node == 1) return; // interval: left boundary value
    }
    row.add(node - ff.first_unknown_node, c);
}

} // namespace

FormFactors build_form_factors(const OperatorSpec& spec, const Grid& grid) {
    spec.validate();
    const int N = grid.cells();
    const double h = grid.spacing;
    const bool radial = spec.domain.kind == DomainKind::RadialBall;
    const int n = spec.dim_n;

    FormFactors ff;
    ff.n_nodes = N + 1;
    if (radial && n >= 2) {
        // center value slaved to u'(0) = 0 (second-order one-sided rule)
        ff.center_eliminated = true;
        ff.center_c1 = 4.0 / 3.0;
        ff.center_c2 = -1.0 / 3.0;
        ff.first_unknown_node = 1;
        ff.n_unknowns = N - 1;
    } else if (radial) {
        ff.first_unknown_node = 0; // r = 0 is a regular unknown for n = 1
        ff.n_unknowns = N;
    } else {
        ff.first_unknown_node = 1;
        ff.n_unknowns = N - 1;
    }
    if (ff.n_unknowns <= 0)
        raise(ErrorCode::SingularAssembly, "boundary elimination left no unknowns");

    const auto a = [&](double r) { return radial ? std::pow(r, n - 1) : 1.0; };
    const double sigma = radial ? sphere_area(n) : 1.0;

    std::vector<StencilRow> lap;
    std::vector<double> lap_w;

    // center evaluation (r = 0): Lap u = n * u''(0) = 2n (u_1 - u_0)/h^2.
    // Its measure weight vanishes for n >= 2, so only n = 1 contributes.
    if (radial && n == 1) {
        StencilRow row;
        add_node(row, ff, 1, 2.0 / (h * h));
        add_node(row, ff, 0, -2.0 / (h * h));
        lap.push_back(row);
        lap_w.push_back(grid.weights[0]);
    }

    for (int i = 1; i <= N - 1; ++i) {
        StencilRow row;
        const double ri = grid.nodes[i];
        const double ap = a(ri + 0.5 * h);
        const double am = a(ri - 0.5 * h);
        const double c = 1.0 / (a(ri) * h * h);
        add_node(row, ff, i + 1, c * ap);
        add_node(row, ff, i, -c * (ap + am));
        add_node(row, ff, i - 1, c * am);
        lap.push_back(row);
        lap_w.push_back(grid.weights[i]);
    }

    if (spec.bc == BoundaryCondition::Dirichlet) {
        // clamped wall: u(N) = 0 and ghost reflection u(N+1) = u(N-1)
        const double rN = grid.nodes[N];
        const double ap = a(rN + 0.5 * h);
        const double am = a(rN - 0.5 * h);
        const double c = 1.0 / (a(rN) * h * h);
        StencilRow row;
        add_node(row, ff, N - 1, c * (ap + am));
        lap.push_back(row);
        lap_w.push_back(grid.weights[N]);
        if (!radial) {
            // clamped left end of the interval
            StencilRow row0;
            add_node(row0, ff, 1, 2.0 / (h * h));
            lap.push_back(row0);
            lap_w.push_back(grid.weights[0]);
        }
    }

    std::vector<StencilRow> grad;
    std::vector<double> grad_w;
    for (int i = 0; i <= N - 1; ++i) {
        StencilRow row;
        add_node(row, ff, i + 1, 1.0 / h);
        add_node(row, ff, i, -1.0 / h);
        grad.push_back(row);
        grad_w.push_back(sigma * h * a(grid.nodes[i] + 0.5 * h));
    }

    ff.laplacian = std::move(lap);
    ff.laplacian_weights = Eigen::Map<Vector>(lap_w.data(), static_cast<Eigen::Index>(lap_w.size()));
    ff.gradient = std::move(grad);
    ff.gradient_weights = Eigen::Map<Vector>(grad_w.data(), static_cast<Eigen::Index>(grad_w.size()));
    return ff;
}

DiscreteOperator assemble_operator(const OperatorSpec& spec, const Grid& grid) {
    DiscreteOperator op;
    op.factors = build_form_factors(spec, grid);
    const FormFactors& ff = op.factors;
    const int m = ff.n_unknowns;

    // accumulate over the full cross product of each row so A == A^T exactly
    const auto accumulate = [m](Matrix& A, const std::vector<StencilRow>& rows,
                                const Vector& w, double scale) {
        for (std::size_t r = 0; r < rows.size(); ++r) {
            const StencilRow& row = rows[r];
            const double wr = scale * w[static_cast<Eigen::Index>(r)];
            if (wr == 0.0) continue;
            for (int p = 0; p < row.nnz; ++p)
                for (int q = 0; q < row.nnz; ++q) {
                    // coef[p]*coef[q] first, so the (p,q) and (q,p) updates are
                    // bitwise identical and A stays exactly symmetric
                    const double prod = row.coef[p] * row.coef[q];
                    A(row.idx[p], row.idx[q]) += wr * prod;
                }
        }
    };

    op.A = Matrix::Zero(m, m);
    accumulate(op.A, ff.laplacian, ff.laplacian_weights, spec.beta);
    accumulate(op.A, ff.gradient, ff.gradient_weights, spec.tau);

    op.B = Matrix::Zero(m, m);
    for (int j = 0; j < m; ++j)
        op.B(j, j) = grid.weights[ff.first_unknown_node + j];
    if (ff.center_eliminated && grid.weights[0] > 0.0) {
        Vector v = Vector::Zero(m);
        v[0] = ff.center_c1;
        v[1] = ff.center_c2;
        op.B += grid.weights[0] * v * v.transpose();
    }
    return op;
}

} // namespace mems
