#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "mems/basis.hpp"

namespace mems {

enum class SolverKind { Parabolic, Hyperbolic };
enum class Termination { Completed, Touchdown, Diverged };

const char* to_string(SolverKind k);
const char* to_string(Termination t);

struct GalerkinState {
    double t = 0.0;
    Vector coeffs;
    std::optional<Vector> velocity; // hyperbolic only
};

/// Time-dependent source in coefficient space: t -> (f(t), omega_j)_2.
using SourceFn = std::function<Vector(double)>;

struct SolveConfig {
    OperatorSpec spec;
    std::shared_ptr<const SpectralBasis> basis;
    Vector u0;                // grid values, satisfying the boundary conditions
    std::optional<Vector> u1; // grid values (hyperbolic initial velocity)
    double T_final = 1.0;
    double dt = 1e-3;
    double touch_eps = 1e-4;
    int sample_every = 1;

    void validate(SolverKind kind) const;
};

struct Trajectory {
    SolverKind kind = SolverKind::Parabolic;
    std::vector<double> times;
    Matrix coeffs;   // samples x K
    Matrix velocity; // samples x K for hyperbolic, else 0 x 0
    std::vector<double> supnorm, l2norm, energy, mass, velnorm;
    bool touched = false;
    std::optional<double> touch_time;
    Termination termination = Termination::Completed;

    int samples() const { return static_cast<int>(times.size()); }
    int K() const { return static_cast<int>(coeffs.cols()); }
    GalerkinState state_at(int i) const;
};

/// Coefficient-wise difference of two trajectories on identical time grids
/// (series are not recomputed; only times/coefficients are meaningful).
Trajectory trajectory_difference(const Trajectory& a, const Trajectory& b);

/// L^1-normalized nonnegative direction of the first basis function, used for
/// the mass series; returns the grid function and its scale so that
/// <phi, u> = scale * g_1.
Vector principal_direction(const SpectralBasis& basis, double* coeff_scale);

} // namespace mems
