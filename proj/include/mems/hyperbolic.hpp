#pragma once

#include "mems/trajectory.hpp"

namespace mems {

/// One step of the trigonometric (oscillator-exact) integrator: each mode
/// rotates with frequency sqrt(lambda_k); the source is frozen at the half
/// step and fed through the exact constant-force variation of constants.
GalerkinState step_hyperbolic(const GalerkinState& state, double dt, const OperatorSpec& spec,
                              const SpectralBasis& basis);

Trajectory solve_hyperbolic(const SolveConfig& config);

/// Linear driver path: integrates u_tt + L u = f(t) with a prescribed source.
Trajectory solve_hyperbolic_linear(const SolveConfig& config, const SourceFn& source);

struct HyperbolicEnergyReport {
    std::vector<double> energy; // ||u'||_2^2 + beta||Lap u||^2 + tau||grad u||^2
    double conservation_drift = 0.0; // max |E - E0| / E0 (source-free diagnostics)

    // residual of dE/dt = 2 (f, u'), centered differences, interior samples
    std::vector<double> denergy_residual;
    double max_denergy_residual = 0.0;

    // comparison envelope E(t) <= e^{C t} (E(0) + int_0^t ||f||_2^2), C = 1
    bool envelope_holds = false;
    double fitted_C = 0.0; // smallest C >= 0 satisfying the envelope on samples

    // max (||u'||_2^2 + ||u||_{W22}^2) vs e^{CT}(||u1||_2^2 + ||u0||_{W22}^2
    // + int ||f||_2^2) with the fitted C above
    double apriori_lhs = 0.0;
    double apriori_rhs0 = 0.0;
    bool apriori_holds = false;
};

HyperbolicEnergyReport hyperbolic_energy_report(const Trajectory& traj, const OperatorSpec& spec,
                                                const SpectralBasis& basis);

} // namespace mems
