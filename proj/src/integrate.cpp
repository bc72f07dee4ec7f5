#include "integrate_impl.hpp"

#include <cmath>

namespace mems::detail {

namespace {

struct Recorder {
    Trajectory traj;
    const SpectralBasis* basis;
    double mass_scale = 0.0;
    std::vector<Vector> gs, vs;
    bool hyperbolic;

    Recorder(const SpectralBasis& b, SolverKind kind) : basis(&b), hyperbolic(kind == SolverKind::Hyperbolic) {
        traj.kind = kind;
        principal_direction(b, &mass_scale);
    }

    void push(double t, const Vector& g, const Vector& v) {
        traj.times.push_back(t);
        gs.push_back(g);
        const Vector u = synthesize(*basis, g);
        traj.supnorm.push_back(u.cwiseAbs().maxCoeff());
        traj.l2norm.push_back(g.norm());
        traj.energy.push_back((basis->eigenvalues.array() * g.array().square()).sum());
        traj.mass.push_back(mass_scale * g[0]);
        if (hyperbolic) {
            vs.push_back(v);
            traj.velnorm.push_back(v.norm());
        }
    }

    Trajectory finish() {
        const int n = static_cast<int>(gs.size());
        const int K = n > 0 ? static_cast<int>(gs[0].size()) : 0;
        traj.coeffs.resize(n, K);
        for (int i = 0; i < n; ++i) traj.coeffs.row(i) = gs[static_cast<std::size_t>(i)].transpose();
        if (hyperbolic) {
            traj.velocity.resize(n, K);
            for (int i = 0; i < n; ++i)
                traj.velocity.row(i) = vs[static_cast<std::size_t>(i)].transpose();
        }
        return std::move(traj);
    }
};

} // namespace

Trajectory integrate(const SolveConfig& config, SolverKind kind, const Advance& advance,
                     bool detect_touchdown) {
    config.validate(kind);
    const SpectralBasis& basis = *config.basis;

    Vector g = analyze(basis, config.u0);
    Vector v;
    if (kind == SolverKind::Hyperbolic) v = analyze(basis, *config.u1);

    Recorder rec(basis, kind);

    const double touch_level = 1.0 - config.touch_eps;
    const auto max_u = [&](const Vector& coeffs) {
        return synthesize(basis, coeffs).maxCoeff();
    };

    // returns true when the step succeeded; touched reports an in-step source
    // evaluation beyond the admissible set
    const auto try_step = [&](double t, double s, double guard, StepResult& out, bool& threw) {
        threw = false;
        try {
            out = advance(g, v, t, s, guard);
            return true;
        } catch (const Error& e) {
            if (e.code() != ErrorCode::TouchdownImminent) throw;
            threw = true;
            return false;
        }
    };

    rec.push(0.0, g, v);
    if (detect_touchdown && max_u(g) >= touch_level) {
        rec.traj.touched = true;
        rec.traj.touch_time = 0.0;
        rec.traj.termination = Termination::Touchdown;
        return rec.finish();
    }

    double t = 0.0;
    long step_index = 0;
    bool done = false;
    while (!done) {
        double s = config.dt;
        if (t + s >= config.T_final - 1e-12 * config.T_final) {
            s = config.T_final - t;
            done = true;
            if (s <= 0.0) break;
        }

        StepResult next;
        bool threw = false;
        const bool ok = try_step(t, s, config.touch_eps, next, threw);
        const bool crossed = detect_touchdown && (threw || (ok && max_u(next.g) >= touch_level));

        if (crossed) {
            // first crossing time inside (t, t+s], bisected on the step size;
            // probes run with a relaxed guard so the state at the crossing can
            // be formed even when an intermediate stage already sits above it
            const double probe_guard = 0.5 * config.touch_eps;
            double lo = 0.0, hi = s;
            StepResult at_touch;
            bool have_touch = false;
            double t_at_touch = t + s;
            for (int it = 0; it < 60 && hi - lo > 1e-9 * s; ++it) {
                const double mid = 0.5 * (lo + hi);
                StepResult probe;
                bool pt = false;
                if (!try_step(t, mid, probe_guard, probe, pt)) {
                    hi = mid;
                } else if (max_u(probe.g) >= touch_level) {
                    hi = mid;
                    at_touch = probe;
                    have_touch = true;
                    t_at_touch = t + mid;
                } else {
                    lo = mid;
                }
            }
            if (!have_touch && ok && !threw) {
                // pathological corner: record the full step under its own time
                at_touch = next;
                have_touch = true;
                t_at_touch = t + s;
            }
            if (have_touch) rec.push(t_at_touch, at_touch.g, at_touch.v);
            rec.traj.touched = true;
            rec.traj.touch_time = t + hi;
            rec.traj.termination = Termination::Touchdown;
            return rec.finish();
        }

        if (!ok) {
            // untracked touchdown only happens with detection off
            rec.traj.termination = Termination::Diverged;
            return rec.finish();
        }

        g = std::move(next.g);
        if (kind == SolverKind::Hyperbolic) v = std::move(next.v);
        t += s;
        ++step_index;

        if (!g.allFinite() || (v.size() > 0 && !v.allFinite())) {
            rec.traj.termination = Termination::Diverged;
            return rec.finish();
        }
        if (done || step_index % config.sample_every == 0) rec.push(t, g, v);
    }

    rec.traj.termination = Termination::Completed;
    return rec.finish();
}

} // namespace mems::detail
