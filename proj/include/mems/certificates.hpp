#pragma once

#include <cstdint>
#include <string>

#include "mems/trajectory.hpp"

namespace mems {

enum class Regime { Global, Local, Uncertified };
const char* to_string(Regime r);

/// Empirical-constant well-posedness certificate. The generic solve constant
/// is instantiated as the probe maximum C_lin (a lower empirical estimate),
/// so a certificate is a quantitative diagnostic, not a proof.
struct Certificate {
    SolverKind kind = SolverKind::Parabolic;
    double C_emb = 0.0; // finite-K embedding constant (lower approximation)
    double C_lin = 0.0; // measured linear-solve constant
    double r = 0.0;     // iteration ball radius
    double R = 0.0;     // outer radius, C_emb * R < 1
    double rho = 0.0;   // requested initial-datum size
    double rho_max = 0.0;
    double k_r = 0.0; // Lipschitz factor (1 - C_emb r)^{-3}
    double lambda = 0.0;
    double lambda_global = 0.0; // parabolic: 1/(4 C_lin (k_r + r))
    double T_local = 0.0;       // parabolic: (1/(2 C_lin lambda (k_r + r)))^2
    double lambda_T = 0.0;      // hyperbolic: 1/(4 sqrt(T) C_lin (k_r + r) r)
    double T_horizon = 0.0;
    Regime regime = Regime::Uncertified;
    std::string provenance;
};

struct CertifyOptions {
    int n_probes = 8;
    double T_probe = 0.0; // <= 0: pick from the relaxation time 3/lambda_1
    double dt = 0.0;      // <= 0: T_probe / 2000
    std::uint64_t seed = 0x5eed5eedULL;
};

/// Max over random unit-norm smooth sources (|f|_{W^{1,2}(0,T;L^2)} = 1,
/// zero initial data) of the solution's X_T norm; probe solves run
/// concurrently and reduce by max. A lower empirical estimate.
double estimate_linear_constant(const OperatorSpec& spec, const SpectralBasis& basis,
                                SolverKind kind, int n_probes, double T, double dt,
                                std::uint64_t seed);

/// (1 - C_emb r)^{-3}: bounds the difference quotients of s -> 1/(1-s)^2 and
/// the cubic-denominator terms for arguments with sup norm <= C_emb r.
double lipschitz_factor(double r, double C_emb);

Certificate certify_global(const OperatorSpec& spec, const SpectralBasis& basis, double rho,
                           double r, const CertifyOptions& opt = {});

Certificate certify_local(const OperatorSpec& spec, const SpectralBasis& basis, double rho,
                          double r, const CertifyOptions& opt = {});

Certificate certify_hyperbolic(const OperatorSpec& spec, const SpectralBasis& basis, double rho,
                               double r, double T, const CertifyOptions& opt = {});

} // namespace mems
