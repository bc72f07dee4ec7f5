#include "mems/hyperbolic.hpp"

#include <cmath>

#include "integrate_impl.hpp"
#include "mems/parabolic.hpp" // nonlinear_source

namespace mems {

namespace {

// sin(w dt)/w with a series branch against cancellation at small |w dt|
double sin_over(double w, double dt) {
    const double x = w * dt;
    if (std::abs(x) > 1e-4) return std::sin(x) / w;
    const double x2 = x * x;
    return dt * (1.0 - x2 / 6.0 + x2 * x2 / 120.0);
}

// (1 - cos(w dt))/w^2
double versine_over(double w, double dt) {
    const double x = w * dt;
    if (std::abs(x) > 1e-4) return (1.0 - std::cos(x)) / (w * w);
    const double x2 = x * x;
    return 0.5 * dt * dt * (1.0 - x2 / 12.0 + x2 * x2 / 360.0);
}

struct RotationFactors {
    Vector c, s, q; // cos(w dt), sin(w dt)/w, (1-cos(w dt))/w^2
    Vector ch, sh;  // half-step rotation
};

RotationFactors rotation_for(const Vector& lambdas, double dt) {
    const int K = static_cast<int>(lambdas.size());
    RotationFactors rf{Vector(K), Vector(K), Vector(K), Vector(K), Vector(K)};
    for (int k = 0; k < K; ++k) {
        const double w = std::sqrt(lambdas[k]);
        rf.c[k] = std::cos(w * dt);
        rf.s[k] = sin_over(w, dt);
        rf.q[k] = versine_over(w, dt);
        rf.ch[k] = std::cos(0.5 * w * dt);
        rf.sh[k] = sin_over(w, 0.5 * dt);
    }
    return rf;
}

detail::StepResult hyperbolic_step_core(const Vector& g, const Vector& v, double t, double dt,
                                        const SpectralBasis& basis, double lambda,
                                        double touch_eps, const SourceFn* linear_source) {
    const RotationFactors rf = rotation_for(basis.eigenvalues, dt);
    detail::StepResult out;
    if (!linear_source && lambda == 0.0) {
        // no source, no singularity: the exact per-mode rotation
        out.g = rf.c.cwiseProduct(g) + rf.s.cwiseProduct(v);
        out.v = -(basis.eigenvalues.cwiseProduct(rf.s)).cwiseProduct(g) + rf.c.cwiseProduct(v);
        return out;
    }
    // force frozen at the half step
    const Vector gh = rf.ch.cwiseProduct(g) + rf.sh.cwiseProduct(v);
    Vector f = linear_source ? (*linear_source)(t + 0.5 * dt)
                             : nonlinear_source(gh, basis, lambda, touch_eps);
    if (f.size() != basis.K) raise(ErrorCode::LengthMismatch, "source must return K coefficients");
    out.g = rf.c.cwiseProduct(g) + rf.s.cwiseProduct(v) + rf.q.cwiseProduct(f);
    out.v = -(basis.eigenvalues.cwiseProduct(rf.s)).cwiseProduct(g) + rf.c.cwiseProduct(v) +
            rf.s.cwiseProduct(f);
    return out;
}

} // namespace

GalerkinState step_hyperbolic(const GalerkinState& state, double dt, const OperatorSpec& spec,
                              const SpectralBasis& basis) {
    if (!state.velocity)
        raise(ErrorCode::ConfigInvalid, "hyperbolic stepping requires velocity coefficients");
    if (state.coeffs.size() != basis.K || state.velocity->size() != basis.K)
        raise(ErrorCode::LengthMismatch, "state vectors must have length K");
    if (dt == 0.0) raise(ErrorCode::ConfigInvalid, "dt must be nonzero");
    auto out = hyperbolic_step_core(state.coeffs, *state.velocity, state.t, dt, basis,
                                    spec.lambda, 1e-4, nullptr);
    GalerkinState next;
    next.t = state.t + dt;
    next.coeffs = std::move(out.g);
    next.velocity = std::move(out.v);
    return next;
}

Trajectory solve_hyperbolic(const SolveConfig& config) {
    const double lambda = config.spec.lambda;
    const SpectralBasis& basis = *config.basis;
    const auto advance = [&](const Vector& g, const Vector& v, double t, double s, double guard) {
        return hyperbolic_step_core(g, v, t, s, basis, lambda, guard, nullptr);
    };
    return detail::integrate(config, SolverKind::Hyperbolic, advance, lambda > 0.0);
}

Trajectory solve_hyperbolic_linear(const SolveConfig& config, const SourceFn& source) {
    const SpectralBasis& basis = *config.basis;
    const auto advance = [&](const Vector& g, const Vector& v, double t, double s, double) {
        return hyperbolic_step_core(g, v, t, s, basis, 0.0, config.touch_eps, &source);
    };
    return detail::integrate(config, SolverKind::Hyperbolic, advance, false);
}

HyperbolicEnergyReport hyperbolic_energy_report(const Trajectory& traj, const OperatorSpec& spec,
                                                const SpectralBasis& basis) {
    const int n = traj.samples();
    if (n < 3) raise(ErrorCode::InsufficientSamples, "energy report needs >= 3 samples");
    if (traj.velocity.size() == 0)
        raise(ErrorCode::ConfigInvalid, "hyperbolic energy report needs velocity samples");

    HyperbolicEnergyReport rep;
    const Vector& lam = basis.eigenvalues;
    std::vector<double> fsq(n), fup(n), apriori(n);
    rep.energy.resize(n);
    for (int i = 0; i < n; ++i) {
        const Vector g = traj.coeffs.row(i).transpose();
        const Vector v = traj.velocity.row(i).transpose();
        rep.energy[static_cast<std::size_t>(i)] =
            v.squaredNorm() + (lam.array() * g.array().square()).sum();
        apriori[i] = v.squaredNorm() + ((1.0 + lam.array()) * g.array().square()).sum();
        Vector f = Vector::Zero(basis.points());
        if (spec.lambda != 0.0) {
            const Vector u = synthesize(basis, g);
            f = spec.lambda * (1.0 - u.array()).square().inverse().matrix();
        }
        fsq[i] = l2_inner_product(f, f, basis.grid);
        fup[i] = l2_inner_product(f, synthesize(basis, v), basis.grid);
    }

    const auto& t = traj.times;
    const double E0 = rep.energy[0];
    double drift = 0.0;
    for (double e : rep.energy) drift = std::max(drift, std::abs(e - E0));
    rep.conservation_drift = E0 > 0.0 ? drift / E0 : drift;

    for (int i = 1; i + 1 < n; ++i) {
        const double de = (rep.energy[static_cast<std::size_t>(i + 1)] -
                           rep.energy[static_cast<std::size_t>(i - 1)]) /
                          (t[i + 1] - t[i - 1]);
        rep.denergy_residual.push_back(de - 2.0 * fup[i]);
    }
    for (double r : rep.denergy_residual)
        rep.max_denergy_residual = std::max(rep.max_denergy_residual, std::abs(r));

    // cumulative int_0^t ||f||_2^2 over the sample grid
    std::vector<double> F(n, 0.0);
    for (int i = 1; i < n; ++i)
        F[i] = F[i - 1] + 0.5 * (fsq[i] + fsq[i - 1]) * (t[i] - t[i - 1]);

    rep.envelope_holds = true;
    for (int i = 0; i < n; ++i) {
        const double bound = std::exp(t[i]) * (E0 + F[i]);
        if (rep.energy[static_cast<std::size_t>(i)] > bound * (1.0 + 1e-9) + 1e-12)
            rep.envelope_holds = false;
        if (i > 0 && rep.energy[static_cast<std::size_t>(i)] > (E0 + F[i]) && (E0 + F[i]) > 0.0)
            rep.fitted_C = std::max(
                rep.fitted_C, std::log(rep.energy[static_cast<std::size_t>(i)] / (E0 + F[i])) / t[i]);
    }

    rep.apriori_lhs = *std::max_element(apriori.begin(), apriori.end());
    const Vector g0 = traj.coeffs.row(0).transpose();
    rep.apriori_rhs0 = traj.velocity.row(0).squaredNorm() +
                       ((1.0 + lam.array()) * g0.array().square()).sum() + F[n - 1];
    rep.apriori_holds = rep.apriori_lhs <=
                        std::exp(std::max(rep.fitted_C, 1.0) * t[n - 1]) * rep.apriori_rhs0 *
                                (1.0 + 1e-9) +
                            1e-12;
    return rep;
}

} // namespace mems
