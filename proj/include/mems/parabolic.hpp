#pragma once

#include "mems/trajectory.hpp"

namespace mems {

/// Projection of lambda/(1-u)^2 onto the basis for u given on the grid.
/// Throws TouchdownImminent once max u >= 1 - touch_eps.
Vector source_from_grid(const Vector& u_grid, const SpectralBasis& basis, double lambda,
                        double touch_eps = 1e-4);

/// Same, for u synthesized from Galerkin coefficients (pseudospectral route).
Vector nonlinear_source(const Vector& coeffs, const SpectralBasis& basis, double lambda,
                        double touch_eps = 1e-4);

/// One step of the mode-wise integrating-factor scheme: the linear part
/// advances by exp(-lambda_k dt) exactly, the source by a two-stage
/// exponential Runge-Kutta update.
GalerkinState step_parabolic(const GalerkinState& state, double dt, const OperatorSpec& spec,
                             const SpectralBasis& basis);

Trajectory solve_parabolic(const SolveConfig& config);

/// Linear driver path: integrates u_t + L u = f(t) with a prescribed source.
Trajectory solve_parabolic_linear(const SolveConfig& config, const SourceFn& source);

struct ParabolicEnergyReport {
    // residual of d/dt ||u||^2/2 + beta||Lap u||^2 + tau||grad u||^2 = (f,u),
    // centered differences in t, one entry per interior sample
    std::vector<double> identity_residual;
    double max_identity_residual = 0.0;

    // running-maximum estimate: max ||u||_2^2 + int ||u||_{W22}^2 vs
    // 4 (||u0||_2^2 + int ||f||_2^2)
    double running_max_l2_sq = 0.0;
    double time_int_w22_sq = 0.0;
    double apriori_rhs = 0.0;
    bool apriori_holds = false;

    // time-integrated estimate: int ||u_t||_2^2 + (beta||Lap u(T)||^2 +
    // tau||grad u(T)||^2)/2 vs ||u0||_{W22}^2 + int ||f||_2^2
    double integrated_lhs = 0.0;
    double integrated_rhs = 0.0;
    bool integrated_holds = false;

    // weak-form residual (g_j' + lambda_j g_j - f_j) over the first <= 5 modes
    double max_weak_residual = 0.0;
};

ParabolicEnergyReport parabolic_energy_report(const Trajectory& traj, const OperatorSpec& spec,
                                              const SpectralBasis& basis);

} // namespace mems
