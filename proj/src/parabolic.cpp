#include "mems/parabolic.hpp"

#include <cmath>

#include "integrate_impl.hpp"

namespace mems {

namespace {

double phi1(double z) {
    if (std::abs(z) > 1e-4) return std::expm1(z) / z;
    return 1.0 + z / 2.0 + z * z / 6.0 + z * z * z / 24.0;
}

double phi2(double z) {
    if (std::abs(z) > 1e-4) return (std::expm1(z) - z) / (z * z);
    return 0.5 + z / 6.0 + z * z / 24.0 + z * z * z / 120.0;
}

struct ModeFactors {
    Vector ez, p1, p2;
};

ModeFactors factors_for(const Vector& lambdas, double dt) {
    const int K = static_cast<int>(lambdas.size());
    ModeFactors mf{Vector(K), Vector(K), Vector(K)};
    for (int k = 0; k < K; ++k) {
        const double z = -lambdas[k] * dt;
        mf.ez[k] = std::exp(z);
        mf.p1[k] = phi1(z);
        mf.p2[k] = phi2(z);
    }
    return mf;
}

} // namespace

Vector source_from_grid(const Vector& u_grid, const SpectralBasis& basis, double lambda,
                        double touch_eps) {
    if (u_grid.size() != basis.points())
        raise(ErrorCode::LengthMismatch, "grid vector must match the basis grid");
    if (u_grid.maxCoeff() >= 1.0 - touch_eps)
        raise(ErrorCode::TouchdownImminent,
              "max u reached " + std::to_string(u_grid.maxCoeff()));
    if (lambda == 0.0) return Vector::Zero(basis.K);
    const Vector f = lambda * (1.0 - u_grid.array()).square().inverse().matrix();
    return analyze(basis, f);
}

Vector nonlinear_source(const Vector& coeffs, const SpectralBasis& basis, double lambda,
                        double touch_eps) {
    return source_from_grid(synthesize(basis, coeffs), basis, lambda, touch_eps);
}

namespace {

detail::StepResult parabolic_step_core(const Vector& g, double t, double dt,
                                       const SpectralBasis& basis, double lambda,
                                       double touch_eps, const SourceFn* linear_source) {
    const ModeFactors mf = factors_for(basis.eigenvalues, dt);
    detail::StepResult out;
    if (!linear_source && lambda == 0.0) {
        // no source, no singularity: the pure integrating factor is exact
        out.g = mf.ez.cwiseProduct(g);
        return out;
    }
    Vector f0 =
        linear_source ? (*linear_source)(t) : nonlinear_source(g, basis, lambda, touch_eps);
    if (f0.size() != basis.K) raise(ErrorCode::LengthMismatch, "source must return K coefficients");
    Vector a = mf.ez.cwiseProduct(g) + dt * mf.p1.cwiseProduct(f0);
    Vector f1 =
        linear_source ? (*linear_source)(t + dt) : nonlinear_source(a, basis, lambda, touch_eps);
    out.g = a + dt * mf.p2.cwiseProduct(f1 - f0);
    return out;
}

} // namespace

GalerkinState step_parabolic(const GalerkinState& state, double dt, const OperatorSpec& spec,
                             const SpectralBasis& basis) {
    if (state.coeffs.size() != basis.K)
        raise(ErrorCode::LengthMismatch, "state coefficient vector must have length K");
    if (!(dt > 0.0)) raise(ErrorCode::ConfigInvalid, "dt must be positive");
    GalerkinState next;
    next.t = state.t + dt;
    next.coeffs =
        parabolic_step_core(state.coeffs, state.t, dt, basis, spec.lambda, 1e-4, nullptr).g;
    return next;
}

Trajectory solve_parabolic(const SolveConfig& config) {
    const double lambda = config.spec.lambda;
    const SpectralBasis& basis = *config.basis;
    const auto advance = [&](const Vector& g, const Vector&, double t, double s, double guard) {
        return parabolic_step_core(g, t, s, basis, lambda, guard, nullptr);
    };
    // touchdown is a property of the singular source; lambda = 0 flows are free
    return detail::integrate(config, SolverKind::Parabolic, advance, lambda > 0.0);
}

Trajectory solve_parabolic_linear(const SolveConfig& config, const SourceFn& source) {
    const SpectralBasis& basis = *config.basis;
    const auto advance = [&](const Vector& g, const Vector&, double t, double s, double) {
        return parabolic_step_core(g, t, s, basis, 0.0, config.touch_eps, &source);
    };
    return detail::integrate(config, SolverKind::Parabolic, advance, false);
}

ParabolicEnergyReport parabolic_energy_report(const Trajectory& traj, const OperatorSpec& spec,
                                              const SpectralBasis& basis) {
    const int n = traj.samples();
    if (n < 3) raise(ErrorCode::InsufficientSamples, "energy report needs >= 3 samples");

    ParabolicEnergyReport rep;
    const int K = traj.K();
    const Vector& lam = basis.eigenvalues;

    std::vector<double> l2sq(n), esq(n), fu(n), fsq(n), w22(n);
    Matrix fcoef(n, std::min(K, 5));
    for (int i = 0; i < n; ++i) {
        const Vector g = traj.coeffs.row(i).transpose();
        const Vector u = synthesize(basis, g);
        l2sq[i] = g.squaredNorm();
        esq[i] = (lam.array() * g.array().square()).sum();
        w22[i] = ((1.0 + lam.array()) * g.array().square()).sum();
        Vector f = Vector::Zero(basis.points());
        if (spec.lambda != 0.0)
            f = spec.lambda * (1.0 - u.array()).square().inverse().matrix();
        fu[i] = l2_inner_product(f, u, basis.grid);
        fsq[i] = l2_inner_product(f, f, basis.grid);
        const Vector fk = analyze(basis, f);
        fcoef.row(i) = fk.head(fcoef.cols()).transpose();
    }

    const auto& t = traj.times;
    for (int i = 1; i + 1 < n; ++i) {
        const double dl2 = (l2sq[i + 1] - l2sq[i - 1]) / (t[i + 1] - t[i - 1]);
        rep.identity_residual.push_back(0.5 * dl2 + esq[i] - fu[i]);
    }
    for (double r : rep.identity_residual)
        rep.max_identity_residual = std::max(rep.max_identity_residual, std::abs(r));

    const auto trapezoid = [&](const std::vector<double>& f) {
        double acc = 0.0;
        for (int i = 0; i + 1 < n; ++i) acc += 0.5 * (f[i] + f[i + 1]) * (t[i + 1] - t[i]);
        return acc;
    };

    rep.running_max_l2_sq = *std::max_element(l2sq.begin(), l2sq.end());
    rep.time_int_w22_sq = trapezoid(w22);
    const double int_fsq = trapezoid(fsq);
    rep.apriori_rhs = 4.0 * (l2sq[0] + int_fsq);
    rep.apriori_holds = rep.running_max_l2_sq + rep.time_int_w22_sq <=
                        rep.apriori_rhs * (1.0 + 1e-9) + 1e-12;

    std::vector<double> dudt_sq(n);
    for (int i = 0; i < n; ++i) {
        Vector du(K);
        if (i == 0)
            du = (traj.coeffs.row(1) - traj.coeffs.row(0)).transpose() / (t[1] - t[0]);
        else if (i == n - 1)
            du = (traj.coeffs.row(n - 1) - traj.coeffs.row(n - 2)).transpose() / (t[n - 1] - t[n - 2]);
        else
            du = (traj.coeffs.row(i + 1) - traj.coeffs.row(i - 1)).transpose() / (t[i + 1] - t[i - 1]);
        dudt_sq[i] = du.squaredNorm();
    }
    rep.integrated_lhs = trapezoid(dudt_sq) + 0.5 * esq[n - 1];
    const Vector g0 = traj.coeffs.row(0).transpose();
    rep.integrated_rhs = ((1.0 + lam.array()) * g0.array().square()).sum() + int_fsq;
    rep.integrated_holds =
        rep.integrated_lhs <= rep.integrated_rhs + 1e-6 * (1.0 + std::abs(rep.integrated_rhs));

    for (int j = 0; j < fcoef.cols(); ++j) {
        for (int i = 1; i + 1 < n; ++i) {
            const double dg =
                (traj.coeffs(i + 1, j) - traj.coeffs(i - 1, j)) / (t[i + 1] - t[i - 1]);
            const double res = dg + lam[j] * traj.coeffs(i, j) - fcoef(i, j);
            rep.max_weak_residual = std::max(rep.max_weak_residual, std::abs(res));
        }
    }
    return rep;
}

} // namespace mems
