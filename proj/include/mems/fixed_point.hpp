#pragma once

#include <array>

#include "mems/trajectory.hpp"

namespace mems {

struct Certificate;

/// Discrete space-time norm of a sampled trajectory. Sobolev levels are
/// evaluated diagonally in the eigenbasis: (1+lambda_k) weights for the
/// second-order norm, (1+lambda_k^2) for the fourth-order one.
struct XTNorm {
    SolverKind kind = SolverKind::Parabolic;
    double value = 0.0;
    // parabolic: { int ||v_t||_{W22}^2, int ||v||_{W22}^2,
    //              max ||v||_{W42}^2,   max ||v_t||_2^2 }
    // hyperbolic: the sup of ||v||_{W42}^2 + ||v_t||_{W22}^2 + ||v_tt||_2^2
    //             split into its three terms at the argmax sample (4th = 0)
    std::array<double, 4> breakdown{0.0, 0.0, 0.0, 0.0};
};

XTNorm xt_norm(const Trajectory& traj, const SpectralBasis& basis, SolverKind kind);

/// The solution map: solves the linear problem whose source is
/// lambda/(1 - u_src(t))^2 with u_src linearly interpolated between the
/// samples of source_traj, using the configured initial data and integrator.
/// Throws TouchdownImminent when the source trajectory leaves max u < 1-eps.
Trajectory apply_F(const Trajectory& source_traj, const SolveConfig& config, SolverKind kind);

struct PicardReport {
    int iterates = 0;
    std::vector<double> distances; // d_m = |u^{m+1} - u^m|_{X_T}
    std::vector<double> ratios;    // d_{m+1} / d_m
    bool converged = false;
    bool no_contraction = false; // ratios above 1 three times in a row
    double tol = 0.0;
    double lambda = 0.0;
    double certified_threshold = 0.0; // echo of the admitting threshold (0 if forced)
    // the two theoretical contraction predictions, from the certificate
    // constants: 2 lambda C (k_r + r) and its sqrt(T)-scaled variant
    double predicted_ratio_uniform = 0.0;
    double predicted_ratio_time_scaled = 0.0;
    Trajectory fixed_point;
};

/// Picard iteration u^{m+1} = F(u^m) started from the source-free solution.
/// Requires an admitting certificate unless force is set.
PicardReport picard_solve(const SolveConfig& config, SolverKind kind, int max_iter = 50,
                          double tol = 1e-8, const Certificate* cert = nullptr,
                          bool force = false);

} // namespace mems
