#include "mems/fixed_point.hpp"

#include <algorithm>
#include <cmath>

#include "mems/certificates.hpp"
#include "mems/hyperbolic.hpp"
#include "mems/parabolic.hpp"

namespace mems {

namespace {

// first time derivative of the coefficient samples, centered inside,
// one-sided second order at the ends
Matrix time_derivative(const Matrix& c, const std::vector<double>& t) {
    const int n = static_cast<int>(c.rows());
    Matrix d(n, c.cols());
    if (n == 2) {
        d.row(0) = (c.row(1) - c.row(0)) / (t[1] - t[0]);
        d.row(1) = d.row(0);
        return d;
    }
    for (int i = 1; i + 1 < n; ++i) d.row(i) = (c.row(i + 1) - c.row(i - 1)) / (t[i + 1] - t[i - 1]);
    d.row(0) = (-3.0 * c.row(0) + 4.0 * c.row(1) - c.row(2)) / (t[2] - t[0]);
    d.row(n - 1) = (3.0 * c.row(n - 1) - 4.0 * c.row(n - 2) + c.row(n - 3)) / (t[n - 1] - t[n - 3]);
    return d;
}

} // namespace

XTNorm xt_norm(const Trajectory& traj, const SpectralBasis& basis, SolverKind kind) {
    const int n = traj.samples();
    if (n < 2) raise(ErrorCode::InsufficientSamples, "X_T norm needs >= 2 samples");
    if (traj.K() != basis.K) raise(ErrorCode::LengthMismatch, "trajectory does not match the basis");

    const auto& t = traj.times;
    const Vector w22 = (1.0 + basis.eigenvalues.array()).matrix();
    const Vector w42 = (1.0 + basis.eigenvalues.array().square()).matrix();

    XTNorm out;
    out.kind = kind;
    const Matrix dt_c = time_derivative(traj.coeffs, t);

    if (kind == SolverKind::Parabolic) {
        double int_dt_w22 = 0.0, int_w22 = 0.0, max_w42 = 0.0, max_dt_l2 = 0.0;
        std::vector<double> f1(n), f2(n);
        for (int i = 0; i < n; ++i) {
            const auto gi = traj.coeffs.row(i).transpose().array();
            const auto di = dt_c.row(i).transpose().array();
            f1[i] = (w22.array() * di.square()).sum();
            f2[i] = (w22.array() * gi.square()).sum();
            max_w42 = std::max(max_w42, (w42.array() * gi.square()).sum());
            max_dt_l2 = std::max(max_dt_l2, di.square().sum());
        }
        for (int i = 0; i + 1 < n; ++i) {
            int_dt_w22 += 0.5 * (f1[i] + f1[i + 1]) * (t[i + 1] - t[i]);
            int_w22 += 0.5 * (f2[i] + f2[i + 1]) * (t[i + 1] - t[i]);
        }
        out.breakdown = {int_dt_w22, int_w22, max_w42, max_dt_l2};
    } else {
        if (n < 3)
            raise(ErrorCode::InsufficientSamples, "the ess-sup norm needs >= 3 samples");
        // sup over interior samples, where both difference quotients exist
        double best = -1.0;
        for (int i = 1; i + 1 < n; ++i) {
            const auto gi = traj.coeffs.row(i).transpose().array();
            const auto di = dt_c.row(i).transpose().array();
            const double hp = t[i + 1] - t[i], hm = t[i] - t[i - 1];
            const Vector dd = (2.0 / (hp + hm)) *
                              ((traj.coeffs.row(i + 1) - traj.coeffs.row(i)).transpose() / hp -
                               (traj.coeffs.row(i) - traj.coeffs.row(i - 1)).transpose() / hm);
            const double a = (w42.array() * gi.square()).sum();
            const double b = (w22.array() * di.square()).sum();
            const double c = dd.squaredNorm();
            if (a + b + c > best) {
                best = a + b + c;
                out.breakdown = {a, b, c, 0.0};
            }
        }
        if (best < 0.0) best = 0.0;
    }
    out.value = std::sqrt(out.breakdown[0] + out.breakdown[1] + out.breakdown[2] + out.breakdown[3]);
    return out;
}

Trajectory apply_F(const Trajectory& source_traj, const SolveConfig& config, SolverKind kind) {
    config.validate(kind);
    const SpectralBasis& basis = *config.basis;
    if (source_traj.samples() < 2)
        raise(ErrorCode::InsufficientSamples, "source trajectory needs >= 2 samples");
    if (source_traj.K() != basis.K)
        raise(ErrorCode::LengthMismatch, "source trajectory does not match the basis");
    if (source_traj.times.back() < config.T_final - 1e-9 * config.T_final)
        raise(ErrorCode::ConfigInvalid, "source trajectory does not cover [0, T_final]");

    const double level = 1.0 - config.touch_eps;
    for (int i = 0; i < source_traj.samples(); ++i) {
        const Vector u = synthesize(basis, source_traj.coeffs.row(i).transpose());
        if (u.maxCoeff() >= level)
            raise(ErrorCode::TouchdownImminent,
                  "source trajectory leaves the admissible set at sample " + std::to_string(i));
    }

    const double lambda = config.spec.lambda;
    const auto& times = source_traj.times;
    const Matrix& coeffs = source_traj.coeffs;
    const SourceFn source = [&basis, &times, &coeffs, lambda, level](double t) -> Vector {
        if (lambda == 0.0) return Vector::Zero(basis.K);
        const auto it = std::upper_bound(times.begin(), times.end(), t);
        int i = static_cast<int>(it - times.begin()) - 1;
        i = std::clamp(i, 0, static_cast<int>(times.size()) - 2);
        const double span = times[static_cast<std::size_t>(i + 1)] - times[static_cast<std::size_t>(i)];
        double theta = span > 0.0 ? (t - times[static_cast<std::size_t>(i)]) / span : 0.0;
        theta = std::clamp(theta, 0.0, 1.0);
        const Vector g = (1.0 - theta) * coeffs.row(i).transpose() + theta * coeffs.row(i + 1).transpose();
        const Vector u = synthesize(basis, g);
        const Vector f = lambda * (1.0 - u.array()).square().inverse().matrix();
        return analyze(basis, f);
    };

    return kind == SolverKind::Parabolic ? solve_parabolic_linear(config, source)
                                         : solve_hyperbolic_linear(config, source);
}

PicardReport picard_solve(const SolveConfig& config, SolverKind kind, int max_iter, double tol,
                          const Certificate* cert, bool force) {
    config.validate(kind);
    if (max_iter < 1) raise(ErrorCode::ConfigInvalid, "max_iter must be >= 1");

    PicardReport rep;
    rep.tol = tol;
    rep.lambda = config.spec.lambda;

    if (cert) {
        const double base = 2.0 * config.spec.lambda * cert->C_lin * (cert->k_r + cert->r);
        rep.predicted_ratio_uniform = base;
        rep.predicted_ratio_time_scaled = base * std::sqrt(config.T_final);
    }

    if (!force) {
        bool admitted = false;
        if (cert) {
            if (kind == SolverKind::Parabolic) {
                if (cert->lambda_global > 0.0 && config.spec.lambda <= cert->lambda_global) {
                    admitted = true;
                    rep.certified_threshold = cert->lambda_global;
                } else if (cert->T_local > 0.0 && config.T_final <= cert->T_local) {
                    admitted = true;
                    rep.certified_threshold = cert->T_local;
                }
            } else if (cert->lambda_T > 0.0 && config.spec.lambda <= cert->lambda_T &&
                       config.T_final <= cert->T_horizon * (1.0 + 1e-12)) {
                admitted = true;
                rep.certified_threshold = cert->lambda_T;
            }
        }
        if (!admitted)
            raise(ErrorCode::NotCertified,
                  "no certificate admits this run; pass force to iterate anyway");
    }

    const SourceFn zero = [&](double) { return Vector::Zero(config.basis->K); };
    Trajectory prev = kind == SolverKind::Parabolic ? solve_parabolic_linear(config, zero)
                                                    : solve_hyperbolic_linear(config, zero);

    for (int m = 0; m < max_iter; ++m) {
        Trajectory next = apply_F(prev, config, kind);
        ++rep.iterates;
        const double d = xt_norm(trajectory_difference(next, prev), *config.basis, kind).value;
        if (!rep.distances.empty() && rep.distances.back() > 0.0)
            rep.ratios.push_back(d / rep.distances.back());
        rep.distances.push_back(d);
        prev = std::move(next);
        if (d < tol) {
            rep.converged = true;
            break;
        }
        const std::size_t nr = rep.ratios.size();
        if (nr >= 3 && rep.ratios[nr - 1] > 1.0 && rep.ratios[nr - 2] > 1.0 &&
            rep.ratios[nr - 3] > 1.0) {
            rep.no_contraction = true;
            break;
        }
    }
    rep.fixed_point = std::move(prev);
    return rep;
}

} // namespace mems
