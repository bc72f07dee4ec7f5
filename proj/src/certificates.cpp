#include "mems/certificates.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numbers>
#include <random>
#include <sstream>

#include "mems/fixed_point.hpp"
#include "mems/hyperbolic.hpp"
#include "mems/parabolic.hpp"

namespace mems {

const char* to_string(Regime r) {
    switch (r) {
        case Regime::Global: return "global";
        case Regime::Local: return "local";
        case Regime::Uncertified: return "uncertified";
    }
    return "unknown";
}

namespace {

struct Probe {
    Vector amp, freq, phase;
};

Probe make_probe(int K, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> N(0.0, 1.0);
    std::uniform_real_distribution<double> F(0.0, 4.0);
    std::uniform_real_distribution<double> P(0.0, 2.0 * std::numbers::pi);
    Probe p{Vector(K), Vector(K), Vector(K)};
    for (int k = 0; k < K; ++k) {
        p.amp[k] = N(rng) / (1.0 + k);
        p.freq[k] = F(rng);
        p.phase[k] = P(rng);
    }
    return p;
}

double probe_response(const OperatorSpec& spec, const SpectralBasis& basis, SolverKind kind,
                      const Probe& probe, double T, double dt) {
    // normalize |f|_{ W^{1,2}(0,T;L^2) } = 1 on the sampling grid
    const int n = static_cast<int>(std::llround(T / dt));
    double nrm2 = 0.0, prev = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double t = i * dt;
        double val = 0.0;
        for (int k = 0; k < basis.K; ++k) {
            const double c = probe.amp[k] * std::cos(probe.freq[k] * t + probe.phase[k]);
            const double d = -probe.amp[k] * probe.freq[k] * std::sin(probe.freq[k] * t + probe.phase[k]);
            val += c * c + d * d;
        }
        if (i > 0) nrm2 += 0.5 * (prev + val) * dt;
        prev = val;
    }
    if (!(nrm2 > 0.0)) return 0.0; // zero source contributes nothing to the max
    const double scale = 1.0 / std::sqrt(nrm2);

    SolveConfig cfg;
    cfg.spec = spec;
    cfg.spec.lambda = 0.0;
    cfg.basis = std::shared_ptr<const SpectralBasis>(&basis, [](const SpectralBasis*) {});
    cfg.u0 = Vector::Zero(basis.points());
    if (kind == SolverKind::Hyperbolic) cfg.u1 = Vector::Zero(basis.points());
    cfg.T_final = T;
    cfg.dt = dt;

    const SourceFn f = [&probe, scale, K = basis.K](double t) {
        Vector out(K);
        for (int k = 0; k < K; ++k)
            out[k] = scale * probe.amp[k] * std::cos(probe.freq[k] * t + probe.phase[k]);
        return out;
    };
    const Trajectory traj = kind == SolverKind::Parabolic ? solve_parabolic_linear(cfg, f)
                                                          : solve_hyperbolic_linear(cfg, f);
    return xt_norm(traj, basis, kind).value;
}

struct ResolvedOptions {
    int n_probes;
    double T, dt;
    std::uint64_t seed;
};

ResolvedOptions resolve(const CertifyOptions& opt, const SpectralBasis& basis, double T_fixed) {
    ResolvedOptions r;
    r.n_probes = opt.n_probes;
    r.T = T_fixed > 0.0 ? T_fixed
                        : (opt.T_probe > 0.0
                               ? opt.T_probe
                               : std::clamp(3.0 / basis.eigenvalues[0], 0.5, 50.0));
    r.dt = opt.dt > 0.0 ? opt.dt : r.T / 2000.0;
    r.seed = opt.seed;
    return r;
}

std::string provenance_text(const Certificate& c) {
    std::ostringstream os;
    os << "empirical-constant certificate; C_lin is a probe maximum (lower estimate) and "
          "C_emb a finite-K lower approximation of the sup-norm embedding constant; "
          "k(r) = (1 - C_emb*r)^-3; "
          "lambda_global = 1/(4*C_lin*(k_r + r)); "
          "T_local = (1/(2*C_lin*lambda*(k_r + r)))^2; "
          "lambda_T = 1/(4*sqrt(T)*C_lin*(k_r + r)*r). "
          "Note the hyperbolic threshold carries an extra factor r that the parabolic "
          "global threshold does not; both are implemented exactly as printed.";
    (void)c;
    return os.str();
}

Certificate base_certificate(const OperatorSpec& spec, const SpectralBasis& basis, double rho,
                             double r, SolverKind kind, const CertifyOptions& opt,
                             double T_fixed) {
    spec.validate();
    if (!(r > 0.0)) raise(ErrorCode::ConfigInvalid, "ball radius r must be positive");
    if (!(rho > 0.0)) raise(ErrorCode::ConfigInvalid, "rho must be positive");

    Certificate c;
    c.kind = kind;
    c.lambda = spec.lambda;
    c.C_emb = embedding_constant(basis);
    if (c.C_emb * r >= 1.0)
        raise(ErrorCode::BallTooLarge,
              "C_emb * r = " + std::to_string(c.C_emb * r) + " must be below 1");
    c.r = r;
    c.R = (1.0 + c.C_emb * r) / (2.0 * c.C_emb);
    c.k_r = lipschitz_factor(r, c.C_emb);

    const ResolvedOptions ro = resolve(opt, basis, T_fixed);
    c.C_lin = estimate_linear_constant(spec, basis, kind, ro.n_probes, ro.T, ro.dt, ro.seed);

    c.rho = rho;
    c.rho_max = r / (2.0 * c.C_lin);
    if (!(c.C_lin * rho + 0.5 * r < r))
        raise(ErrorCode::RhoTooLarge,
              "rho = " + std::to_string(rho) + " exceeds rho_max = " + std::to_string(c.rho_max));
    return c;
}

} // namespace

double estimate_linear_constant(const OperatorSpec& spec, const SpectralBasis& basis,
                                SolverKind kind, int n_probes, double T, double dt,
                                std::uint64_t seed) {
    if (n_probes < 5) raise(ErrorCode::ConfigInvalid, "n_probes must be >= 5");
    if (!(T > dt && dt > 0.0)) raise(ErrorCode::ConfigInvalid, "need 0 < dt < T");
    std::vector<std::future<double>> futs;
    futs.reserve(static_cast<std::size_t>(n_probes));
    for (int p = 0; p < n_probes; ++p) {
        futs.push_back(std::async(std::launch::async, [&, p] {
            return probe_response(spec, basis, kind, make_probe(basis.K, seed + static_cast<std::uint64_t>(p)),
                                  T, dt);
        }));
    }
    double best = 0.0;
    for (auto& f : futs) best = std::max(best, f.get());
    if (!(best > 0.0)) raise(ErrorCode::EigensolveFailure, "all probes degenerated to zero");
    return best;
}

double lipschitz_factor(double r, double C_emb) {
    if (r < 0.0) raise(ErrorCode::ConfigInvalid, "r must be nonnegative");
    const double x = C_emb * r;
    if (x >= 1.0)
        raise(ErrorCode::BallTooLarge, "C_emb * r = " + std::to_string(x) + " must be below 1");
    const double d = 1.0 - x;
    return 1.0 / (d * d * d);
}

Certificate certify_global(const OperatorSpec& spec, const SpectralBasis& basis, double rho,
                           double r, const CertifyOptions& opt) {
    Certificate c = base_certificate(spec, basis, rho, r, SolverKind::Parabolic, opt, 0.0);
    c.lambda_global = 1.0 / (4.0 * c.C_lin * (c.k_r + c.r));
    c.regime = spec.lambda <= c.lambda_global ? Regime::Global : Regime::Uncertified;
    c.provenance = provenance_text(c);
    return c;
}

Certificate certify_local(const OperatorSpec& spec, const SpectralBasis& basis, double rho,
                          double r, const CertifyOptions& opt) {
    if (!(spec.lambda > 0.0))
        raise(ErrorCode::ConfigInvalid,
              "the local horizon is undefined for lambda = 0; certify_global applies");
    Certificate c = base_certificate(spec, basis, rho, r, SolverKind::Parabolic, opt, 0.0);
    c.lambda_global = 1.0 / (4.0 * c.C_lin * (c.k_r + c.r));
    const double Tbar = 1.0 / (2.0 * c.C_lin * spec.lambda * (c.k_r + c.r));
    c.T_local = Tbar * Tbar;
    c.regime = Regime::Local;
    c.provenance = provenance_text(c);
    return c;
}

Certificate certify_hyperbolic(const OperatorSpec& spec, const SpectralBasis& basis, double rho,
                               double r, double T, const CertifyOptions& opt) {
    if (!(T > 0.0)) raise(ErrorCode::ConfigInvalid, "T must be positive");
    Certificate c = base_certificate(spec, basis, rho, r, SolverKind::Hyperbolic, opt, T);
    c.T_horizon = T;
    c.lambda_T = 1.0 / (4.0 * std::sqrt(T) * c.C_lin * (c.k_r + c.r) * c.r);
    c.regime = spec.lambda <= c.lambda_T ? Regime::Global : Regime::Uncertified;
    c.provenance = provenance_text(c);
    return c;
}

} // namespace mems
