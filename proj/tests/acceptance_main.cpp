// Acceptance gate: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Every tolerance is pinned here, in code.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <vector>

#include "mems/certificates.hpp"
#include "mems/fixed_point.hpp"
#include "mems/hyperbolic.hpp"
#include "mems/io.hpp"
#include "mems/parabolic.hpp"
#include "mems/quench.hpp"
#include "mems/run.hpp"

using namespace mems;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

struct CriterionResult {
    bool pass = true;
    std::ostringstream detail;
};

#define REQUIRE_NEAR(res, value, target, tol, label)                                             \
    do {                                                                                         \
        const double v_ = (value), t_ = (target), e_ = std::abs(v_ - t_);                        \
        if (!(e_ < (tol))) {                                                                     \
            (res).pass = false;                                                                  \
            (res).detail << " [" << (label) << ": |" << v_ << " - " << t_ << "| = " << e_        \
                         << " !< " << (tol) << "]";                                              \
        }                                                                                        \
    } while (0)

#define REQUIRE_TRUE(res, cond, label)                                                           \
    do {                                                                                         \
        if (!(cond)) {                                                                           \
            (res).pass = false;                                                                  \
            (res).detail << " [failed: " << (label) << "]";                                      \
        }                                                                                        \
    } while (0)

std::shared_ptr<const SpectralBasis> shared_basis(const OperatorSpec& spec, int N, int K) {
    return std::make_shared<SpectralBasis>(compute_spectrum(spec, build_grid(spec.domain, spec.dim_n, N), K));
}

OperatorSpec navier_interval(double L = 1.0, double tau = 0.0, double beta = 1.0) {
    return make_spec(beta, tau, 0.0, Domain::interval(L), BoundaryCondition::Navier, 1);
}

// ---------------------------------------------------------------- criterion 1
CriterionResult spectrum_navier_oracle() {
    CriterionResult res;
    for (double tau : {0.0, 1.0}) {
        std::map<int, double> worst;
        for (int N : {1024, 2048}) {
            const auto spec = navier_interval(1.0, tau);
            const auto basis = compute_spectrum(spec, build_grid(spec.domain, 1, N), 8);
            double w = 0.0;
            for (int k = 1; k <= 8; ++k) {
                const double exact = std::pow(k * kPi, 4) + tau * std::pow(k * kPi, 2);
                w = std::max(w, std::abs(basis.eigenvalues[k - 1] - exact) / exact);
            }
            worst[N] = w;
        }
        res.detail << " tau=" << tau << ": err(1024)=" << worst[1024]
                   << " err(2048)=" << worst[2048] << " gain=" << worst[1024] / worst[2048];
        REQUIRE_TRUE(res, worst[1024] < 1e-4, "relative error < 1e-4 at N=1024 for k <= 8");
        REQUIRE_TRUE(res, worst[2048] <= worst[1024] / 3.0, "error improves by >= 3x at N=2048");
    }
    return res;
}

// ---------------------------------------------------------------- criterion 2
CriterionResult spectrum_dirichlet_oracle() {
    CriterionResult res;
    const auto spec = make_spec(1.0, 0.0, 0.0, Domain::interval(1.0), BoundaryCondition::Dirichlet, 1);
    const double l512 = compute_spectrum(spec, build_grid(spec.domain, 1, 512), 4).eigenvalues[0];
    const double l1024 = compute_spectrum(spec, build_grid(spec.domain, 1, 1024), 4).eigenvalues[0];
    const double extrap = (4.0 * l1024 - l512) / 3.0;
    const double mu = std::pow(extrap, 0.25);
    const double resid = std::abs(std::cos(mu) * std::cosh(mu) - 1.0);

    // independent bisection oracle for the error report
    auto f = [](double m) { return std::cos(m) * std::cosh(m) - 1.0; };
    double lo = 4.0, hi = 5.0;
    for (int i = 0; i < 200; ++i) (f(0.5 * (lo + hi)) > 0.0 ? hi : lo) = 0.5 * (lo + hi);
    const double mu1 = 0.5 * (lo + hi);

    res.detail << " extrapolated mu=" << mu << " residual=" << resid
               << " oracle mu1=" << mu1 << " rel eig err=" << std::abs(extrap - std::pow(mu1, 4)) / std::pow(mu1, 4);
    REQUIRE_TRUE(res, resid < 1e-3, "|cos(mu) cosh(mu) - 1| < 1e-3 after Richardson");
    return res;
}

// ---------------------------------------------------------------- criterion 3
CriterionResult basis_property_matrix() {
    CriterionResult res;
    std::vector<OperatorSpec> specs;
    for (auto bc : {BoundaryCondition::Dirichlet, BoundaryCondition::Navier}) {
        for (double tau : {0.0, 1.0}) {
            auto s = navier_interval(1.0, tau);
            s.bc = bc;
            specs.push_back(s);
        }
        for (int n : {2, 3, 7})
            specs.push_back(make_spec(1.0, 0.5, 0.0, Domain::radial_ball(n), bc, n));
    }
    double worst_orth = 0.0, worst_diag = 0.0;
    for (const auto& spec : specs) {
        const Grid grid = build_grid(spec.domain, spec.dim_n, 256);
        const auto basis = compute_spectrum(spec, grid, 8);
        const double lamK = basis.eigenvalues[basis.K - 1];
        for (int i = 0; i < basis.K; ++i)
            for (int j = 0; j <= i; ++j) {
                const double l2 = l2_inner_product(basis.eigenfunction(i), basis.eigenfunction(j), grid);
                worst_orth = std::max(worst_orth, std::abs(l2 - (i == j ? 1.0 : 0.0)));
                const double en = energy_inner_product(basis.eigenfunction(i), basis.eigenfunction(j), spec, grid);
                worst_diag = std::max(worst_diag,
                                      std::abs(en - (i == j ? basis.eigenvalues[i] : 0.0)) / lamK);
            }
    }
    res.detail << " worst orthonormality defect=" << worst_orth
               << " worst scaled diagonality defect=" << worst_diag;
    REQUIRE_TRUE(res, worst_orth < 1e-8, "orthonormality defect < 1e-8");
    REQUIRE_TRUE(res, worst_diag < 1e-6, "energy diagonality defect < 1e-6 * lambda_K");

    bool rejected = false;
    try {
        make_spec(1.0, 0.0, 0.0, Domain::radial_ball(8), BoundaryCondition::Navier, 8);
    } catch (const Error& e) {
        rejected = e.code() == ErrorCode::DimensionNotSupported;
    }
    REQUIRE_TRUE(res, rejected, "n = 8 is rejected");
    return res;
}

// ---------------------------------------------------------------- criterion 4
CriterionResult linear_parabolic_oracle() {
    CriterionResult res;
    auto basis = shared_basis(navier_interval(), 128, 8);
    SolveConfig cfg;
    cfg.spec = basis->spec;
    cfg.basis = basis;
    cfg.u0 = basis->eigenfunction(0);
    cfg.T_final = 0.05;
    cfg.dt = 1e-4;
    const Trajectory traj = solve_parabolic(cfg);
    const double expect = std::exp(-basis->eigenvalues[0] * cfg.T_final);
    REQUIRE_NEAR(res, traj.l2norm.back(), expect, 1e-6, "single-mode decay");

    auto small = shared_basis(navier_interval(), 64, 4);
    const auto residual_at = [&](double dt) {
        SolveConfig c;
        c.spec = small->spec;
        c.spec.lambda = 0.1;
        c.basis = small;
        c.u0 = 0.05 * small->eigenfunction(0);
        c.T_final = 2e-3;
        c.dt = dt;
        return parabolic_energy_report(solve_parabolic(c), c.spec, *small).max_identity_residual;
    };
    const double rA = residual_at(4e-6), rB = residual_at(2e-6);
    const double order = std::log2(rA / rB);
    res.detail << " decay err=" << std::abs(traj.l2norm.back() - expect)
               << " identity-residual order=" << order;
    REQUIRE_TRUE(res, order >= 1.9, "energy-identity residual order >= 2 under dt halving");
    return res;
}

// ---------------------------------------------------------------- criterion 5
CriterionResult linear_hyperbolic_oracle() {
    CriterionResult res;
    auto basis = shared_basis(navier_interval(), 96, 6);
    SolveConfig cfg;
    cfg.spec = basis->spec;
    cfg.basis = basis;
    cfg.u0 = basis->eigenfunction(0) + 0.3 * basis->eigenfunction(2);
    cfg.u1 = 0.2 * basis->eigenfunction(1);
    const double period = 2.0 * kPi / std::sqrt(basis->eigenvalues[0]);
    cfg.T_final = 10.0 * period;
    cfg.dt = period / 512;
    cfg.sample_every = 4;
    const auto rep = hyperbolic_energy_report(solve_hyperbolic(cfg), cfg.spec, *basis);
    res.detail << " conservation drift=" << rep.conservation_drift;
    REQUIRE_TRUE(res, rep.conservation_drift < 1e-9, "energy conservation to 1e-9 over 10 periods");

    GalerkinState st;
    st.t = 0.0;
    st.coeffs = Vector::LinSpaced(6, -0.3, 0.8);
    st.velocity = Vector::LinSpaced(6, 0.5, -0.2);
    const Vector g0 = st.coeffs, v0 = *st.velocity;
    const double dt = 5e-3;
    for (int i = 0; i < 500; ++i) st = step_hyperbolic(st, dt, basis->spec, *basis);
    for (int i = 0; i < 500; ++i) st = step_hyperbolic(st, -dt, basis->spec, *basis);
    const double back = std::max((st.coeffs - g0).cwiseAbs().maxCoeff(),
                                 (*st.velocity - v0).cwiseAbs().maxCoeff());
    res.detail << " reversibility error=" << back;
    REQUIRE_TRUE(res, back < 1e-10, "time reversibility to 1e-10");
    return res;
}

// ---------------------------------------------------------------- criterion 6
CriterionResult contraction_suite() {
    CriterionResult res;
    auto basis = shared_basis(navier_interval(), 96, 8);
    CertifyOptions opt;
    opt.T_probe = 0.3;
    opt.dt = 5e-4;
    opt.seed = 6281;
    auto spec = basis->spec;
    const double r = 10.0;
    Certificate cert = certify_global(spec, *basis, 0.02, r, opt);
    spec.lambda = 0.9 * cert.lambda_global;
    cert = certify_global(spec, *basis, 0.02, r, opt);
    REQUIRE_TRUE(res, cert.regime == Regime::Global, "suite runs under a Global certificate");

    SolveConfig cfg;
    cfg.spec = spec;
    cfg.basis = basis;
    cfg.u0 = Vector::Zero(basis->points());
    cfg.T_final = 0.3;
    cfg.dt = 5e-4;

    std::mt19937_64 rng(2026);
    std::normal_distribution<double> N01(0.0, 1.0);
    std::uniform_real_distribution<double> U(0.2, 1.0);
    std::uniform_real_distribution<double> F(0.0, 3.0);
    const int n_samples = 601;
    const auto random_traj = [&]() {
        Trajectory t;
        t.kind = SolverKind::Parabolic;
        t.coeffs = Matrix(n_samples, basis->K);
        Vector a(basis->K), nu(basis->K), ph(basis->K);
        for (int k = 0; k < basis->K; ++k) {
            a[k] = N01(rng) / ((1.0 + k) * (1.0 + k));
            nu[k] = F(rng);
            ph[k] = F(rng);
        }
        for (int i = 0; i < n_samples; ++i) {
            const double tt = cfg.T_final * i / (n_samples - 1);
            t.times.push_back(tt);
            for (int k = 0; k < basis->K; ++k) t.coeffs(i, k) = a[k] * std::cos(nu[k] * tt + ph[k]);
        }
        t.coeffs *= r * U(rng) / xt_norm(t, *basis, SolverKind::Parabolic).value;
        return t;
    };

    double worst_ratio = 0.0;
    for (int pair = 0; pair < 20; ++pair) {
        const Trajectory u1 = random_traj(), u2 = random_traj();
        const Trajectory F1 = apply_F(u1, cfg, SolverKind::Parabolic);
        const Trajectory F2 = apply_F(u2, cfg, SolverKind::Parabolic);
        const double num = xt_norm(trajectory_difference(F1, F2), *basis, SolverKind::Parabolic).value;
        const double den = xt_norm(trajectory_difference(u1, u2), *basis, SolverKind::Parabolic).value;
        worst_ratio = std::max(worst_ratio, num / den);
    }
    res.detail << " max pair ratio=" << worst_ratio;
    REQUIRE_TRUE(res, worst_ratio <= 0.55, "measured contraction factor <= 0.55 over 20 pairs");

    cfg.u0 = 0.01 * basis->eigenfunction(0);
    const PicardReport rep = picard_solve(cfg, SolverKind::Parabolic, 40, 1e-8, &cert, false);
    REQUIRE_TRUE(res, rep.converged, "Picard converges under the certificate");
    double worst_picard = 0.0;
    for (std::size_t i = 1; i < rep.ratios.size(); ++i)
        worst_picard = std::max(worst_picard, rep.ratios[i]);
    res.detail << " max Picard ratio (iter >= 2)=" << worst_picard;
    REQUIRE_TRUE(res, worst_picard <= 0.6, "Picard ratios <= 0.6 from iteration 2 onward");

    const SourceFn zero = [&](double) { return Vector::Zero(basis->K); };
    const Trajectory w = solve_parabolic_linear(cfg, zero);
    const Trajectory direct = solve_parabolic(cfg);
    const double gap =
        xt_norm(trajectory_difference(rep.fixed_point, direct), *basis, SolverKind::Parabolic).value;
    const double scale = (1.0 + cfg.spec.lambda) *
                         (1.0 + xt_norm(w, *basis, SolverKind::Parabolic).value) * (1.0 + cfg.T_final);
    res.detail << " fixed-vs-direct gap=" << gap << " tol=" << 10.0 * (1e-8 + cfg.dt * cfg.dt * scale);
    REQUIRE_TRUE(res, gap < 10.0 * (1e-8 + cfg.dt * cfg.dt * scale),
                 "fixed point agrees with the direct solver in X_T");
    return res;
}

// ---------------------------------------------------------------- criterion 7
CriterionResult certificate_soundness() {
    CriterionResult res;
    std::mt19937_64 rng(777);
    std::uniform_real_distribution<double> U(0.5, 0.95);

    struct Family {
        OperatorSpec spec;
        int N;
    };
    std::vector<Family> parabolic = {
        {navier_interval(1.0, 0.0), 96},
        {navier_interval(2.0, 1.0), 96},
        {make_spec(1.0, 0.0, 0.0, Domain::interval(1.0), BoundaryCondition::Dirichlet, 1), 96},
        {make_spec(1.0, 0.5, 0.0, Domain::radial_ball(2), BoundaryCondition::Navier, 2), 96},
        {make_spec(1.0, 0.0, 0.0, Domain::radial_ball(3), BoundaryCondition::Dirichlet, 3), 96},
        {make_spec(2.0, 0.5, 0.0, Domain::interval(1.5), BoundaryCondition::Dirichlet, 1), 96},
    };
    int global_ok = 0, global_total = 0;
    CertifyOptions opt;
    opt.n_probes = 6;
    for (const auto& fam : parabolic) {
        auto basis = shared_basis(fam.spec, fam.N, 6);
        opt.seed = rng();
        const double C = embedding_constant(*basis);
        const double r = std::min(8.0, 0.5 / C);
        auto spec = fam.spec;
        Certificate cert = certify_global(spec, *basis, 1e-3, r, opt);
        spec.lambda = U(rng) * cert.lambda_global;
        cert = certify_global(spec, *basis, 1e-3, r, opt);
        if (cert.regime != Regime::Global) continue;
        ++global_total;
        SolveConfig cfg;
        cfg.spec = spec;
        cfg.basis = basis;
        cfg.u0 = (5e-4 / std::sqrt(1.0 + basis->eigenvalues[0] * basis->eigenvalues[0])) *
                 basis->eigenfunction(0);
        cfg.T_final = 50.0 / basis->eigenvalues[0];
        cfg.dt = cfg.T_final / 20000.0;
        cfg.sample_every = 20;
        if (solve_parabolic(cfg).termination == Termination::Completed) ++global_ok;
    }

    for (int trial = 0; trial < 4; ++trial) {
        auto spec = trial % 2 == 0 ? navier_interval(1.0, 0.0)
                                   : make_spec(1.0, 0.0, 0.0, Domain::radial_ball(2),
                                               BoundaryCondition::Dirichlet, 2);
        auto basis = shared_basis(spec, 96, 6);
        opt.seed = rng();
        const double C = embedding_constant(*basis);
        const double r = std::min(4.0, 0.4 / C);
        const double T = 0.5 + 0.5 * trial;
        Certificate cert = certify_hyperbolic(spec, *basis, 1e-3, r, T, opt);
        spec.lambda = U(rng) * cert.lambda_T;
        cert = certify_hyperbolic(spec, *basis, 1e-3, r, T, opt);
        if (cert.regime != Regime::Global) continue;
        ++global_total;
        SolveConfig cfg;
        cfg.spec = spec;
        cfg.basis = basis;
        cfg.u0 = Vector::Zero(basis->points());
        cfg.u1 = Vector::Zero(basis->points());
        cfg.T_final = T;
        cfg.dt = T / 4000.0;
        cfg.sample_every = 4;
        if (solve_hyperbolic(cfg).termination == Termination::Completed) ++global_ok;
    }
    res.detail << " global-certified runs completed " << global_ok << "/" << global_total;
    REQUIRE_TRUE(res, global_total >= 10, "at least 10 certified global configs");
    REQUIRE_TRUE(res, global_ok == global_total, "no certified global run touches down");

    int local_ok = 0;
    for (int trial = 0; trial < 5; ++trial) {
        auto spec = navier_interval(1.0, 0.5 * trial);
        auto basis = shared_basis(spec, 96, 6);
        opt.seed = rng();
        const double C = embedding_constant(*basis);
        const double r = std::min(8.0, 0.5 / C);
        Certificate probe = certify_global(spec, *basis, 1e-3, r, opt);
        spec.lambda = 3.0 * probe.lambda_global; // beyond the global threshold
        const Certificate cert = certify_local(spec, *basis, 1e-3, r, opt);
        SolveConfig cfg;
        cfg.spec = spec;
        cfg.basis = basis;
        cfg.u0 = (5e-4 / std::sqrt(1.0 + basis->eigenvalues[0] * basis->eigenvalues[0])) *
                 basis->eigenfunction(0);
        cfg.T_final = cert.T_local;
        cfg.dt = cert.T_local / 2000.0;
        if (solve_parabolic(cfg).termination == Termination::Completed) ++local_ok;
    }
    res.detail << "; local-certified runs completed " << local_ok << "/5";
    REQUIRE_TRUE(res, local_ok == 5, "5 local-certified runs complete over [0, T_local]");
    return res;
}

// ---------------------------------------------------------------- criterion 8
CriterionResult quench_threshold() {
    CriterionResult res;
    for (double lambda1 : {97.40909103400243, 0.10436}) {
        const double thresh = 4.0 * lambda1 / 27.0;
        const double step = 1e-3 * lambda1;
        double crossing = -1.0;
        double prev = quench_constants(0.05 * lambda1, lambda1).c0;
        for (double lam = 0.05 * lambda1; lam < 0.35 * lambda1; lam += step) {
            const double cur = quench_constants(lam + step, lambda1).c0;
            if (prev <= 0.0 && cur > 0.0) {
                crossing = lam + step;
                break;
            }
            prev = cur;
        }
        REQUIRE_TRUE(res, crossing > 0.0, "found a sign change of c0");
        res.detail << " |crossing - 4*lambda1/27|/step=" << std::abs(crossing - thresh) / step;
        REQUIRE_TRUE(res, std::abs(crossing - thresh) <= step,
                     "sign change within one grid step of 4*lambda1/27");

        double worst = 0.0;
        for (double fac : {0.5, 0.9, 0.95, 1.0, 1.05, 1.1, 2.0}) {
            const double lam = fac * thresh;
            double scan = std::numeric_limits<double>::infinity();
            for (double M = -2.0; M < 1.0 - 1e-6; M += 1e-6) {
                const double d = 1.0 - M;
                scan = std::min(scan, -lambda1 * M + lam / (d * d));
            }
            worst = std::max(worst, std::abs(quench_constants(lam, lambda1).c0 - scan));
        }
        res.detail << " max |closed-scan|=" << worst;
        REQUIRE_TRUE(res, worst < 1e-5, "closed-form c0 agrees with the M-scan oracle to 1e-5");
    }
    return res;
}

// ---------------------------------------------------------------- criterion 9
CriterionResult touchdown_bound_suite() {
    CriterionResult res;
    struct Case {
        OperatorSpec spec;
        int N;
    };
    const std::vector<Case> cases = {
        {navier_interval(2.0 * kPi, 0.0), 128},
        {make_spec(1e-3, 0.0, 0.0, Domain::radial_ball(2), BoundaryCondition::Dirichlet, 2), 192},
    };
    for (const auto& cs : cases) {
        auto basis = shared_basis(cs.spec, cs.N, 8);
        const PrincipalEigenpair pair = principal_eigenpair(*basis);
        const double thresh = 4.0 * pair.lambda1 / 27.0;
        for (double fac : {2.0, 5.0, 10.0}) {
            const double lambda = fac * thresh;
            const double c0 = quench_constants(lambda, pair.lambda1).c0;
            const double bound = touchdown_bound(0.0, c0);
            for (auto kind : {SolverKind::Parabolic, SolverKind::Hyperbolic}) {
                SolveConfig cfg;
                cfg.spec = cs.spec;
                cfg.spec.lambda = lambda;
                cfg.basis = basis;
                cfg.u0 = Vector::Zero(basis->points());
                if (kind == SolverKind::Hyperbolic) cfg.u1 = Vector::Zero(basis->points());
                cfg.T_final = 1.3 * bound;
                cfg.dt = bound / (kind == SolverKind::Parabolic ? 4000.0 : 6000.0);
                cfg.sample_every = 2;
                const Trajectory traj =
                    kind == SolverKind::Parabolic ? solve_parabolic(cfg) : solve_hyperbolic(cfg);
                const std::string tag = std::string(to_string(kind)) + "/" +
                                        to_string(cs.spec.domain.kind) + "/fac=" +
                                        std::to_string(static_cast<int>(fac));
                REQUIRE_TRUE(res, traj.termination == Termination::Touchdown, tag + " touches down");
                if (traj.termination != Termination::Touchdown) continue;
                const MassReport rep = verify_mass_inequality(traj, pair, lambda, *basis);
                REQUIRE_TRUE(res, *traj.touch_time <= bound * 1.01,
                             tag + " touch time within 1.01x the comparison bound");
                if (kind == SolverKind::Parabolic) {
                    REQUIRE_TRUE(res, rep.min_residual >= -1e-3 * lambda,
                                 tag + " mass inequality residual >= -1e-3*lambda");
                }
            }
        }
        res.detail << " [" << to_string(cs.spec.domain.kind) << " lambda1=" << pair.lambda1 << " ok]";
    }
    return res;
}

// --------------------------------------------------------------- criterion 10
CriterionResult reproducibility() {
    CriterionResult res;
    const fs::path dir = fs::temp_directory_path() / "memslab_acceptance" / "repro";
    fs::remove_all(dir);
    fs::create_directories(dir);

    nlohmann::json cfg;
    cfg["command"] = "certify";
    cfg["spec"] = {{"beta", 1.0}, {"tau", 0.0}, {"lambda", 0.001}, {"domain", "interval"},
                   {"length", 1.0}, {"dim", 1}, {"bc", "navier"}};
    cfg["numerics"] = {{"N", 64}, {"K", 4}, {"dt", 1e-3}, {"T_final", 0.2}};
    cfg["certify"] = {{"kind", "global"}, {"rho", 0.005}, {"r", 5.0}, {"n_probes", 5}};
    cfg["seed"] = 424242;
    cfg["output_dir"] = dir.string();
    const auto config = parse_run_config(cfg);
    run(config);
    const auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream os;
        os << in.rdbuf();
        return os.str();
    };
    const std::string first = slurp(dir / "certificate.json");
    run(config);
    REQUIRE_TRUE(res, slurp(dir / "certificate.json") == first,
                 "seeded certify re-run is byte-identical");

    nlohmann::json scfg;
    scfg["command"] = "solve_parabolic";
    scfg["spec"] = cfg["spec"];
    scfg["spec"]["lambda"] = 5.0;
    scfg["numerics"] = {{"N", 64}, {"K", 4}, {"dt", 1e-4}, {"T_final", 0.01}};
    scfg["u0"] = {{"kind", "mode"}, {"mode", 1}, {"amp", 0.02}};
    scfg["seed"] = 7;
    scfg["output_dir"] = (dir / "solve").string();
    const auto sconfig = parse_run_config(scfg);
    run(sconfig);
    std::map<std::string, std::string> snap;
    for (const char* f : {"trajectory.csv", "coefficients.csv", "trajectory.json", "summary.json"})
        snap[f] = slurp(dir / "solve" / f);
    run(sconfig);
    bool all_equal = true;
    for (const auto& [name, content] : snap)
        all_equal = all_equal && slurp(dir / "solve" / name) == content && !content.empty();
    REQUIRE_TRUE(res, all_equal, "seeded solve re-run is byte-identical");

    // basis cache round trip passes the orthonormality re-check
    auto spec = navier_interval(1.0, 0.5);
    const Grid grid = build_grid(spec.domain, 1, 96);
    bool hit = true;
    const SpectralBasis a = basis_cache(spec, grid, 6, (dir / "cache").string(), &hit);
    REQUIRE_TRUE(res, !hit, "first cache call computes");
    const SpectralBasis b = basis_cache(spec, grid, 6, (dir / "cache").string(), &hit);
    REQUIRE_TRUE(res, hit, "second cache call loads");
    REQUIRE_TRUE(res, (a.modes - b.modes).cwiseAbs().maxCoeff() == 0.0,
                 "cached basis reloads bitwise");
    res.detail << " cache round trip ok";
    return res;
}

} // namespace

int main() {
    struct Entry {
        int num;
        const char* name;
        std::function<CriterionResult()> fn;
    };
    const std::vector<Entry> gate = {
        {1, "pinned-interval spectrum oracle", spectrum_navier_oracle},
        {2, "clamped-interval spectrum oracle", spectrum_dirichlet_oracle},
        {3, "basis properties across the domain matrix", basis_property_matrix},
        {4, "linear parabolic oracle", linear_parabolic_oracle},
        {5, "linear hyperbolic oracle", linear_hyperbolic_oracle},
        {6, "contraction suite", contraction_suite},
        {7, "certificate soundness", certificate_soundness},
        {8, "quench threshold", quench_threshold},
        {9, "touchdown bound", touchdown_bound_suite},
        {10, "reproducibility", reproducibility},
    };

    int failures = 0;
    for (const auto& entry : gate) {
        const auto t0 = std::chrono::steady_clock::now();
        CriterionResult res;
        try {
            res = entry.fn();
        } catch (const std::exception& e) {
            res.pass = false;
            res.detail << " [exception: " << e.what() << "]";
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("%s criterion %2d: %s —%s (%.1f s)\n", res.pass ? "PASS" : "FAIL", entry.num,
                    entry.name, res.detail.str().c_str(), secs);
        std::fflush(stdout);
        if (!res.pass) ++failures;
    }
    if (failures > 0) std::printf("%d of %zu criteria failed\n", failures, gate.size());
    return failures == 0 ? 0 : 1;
}
