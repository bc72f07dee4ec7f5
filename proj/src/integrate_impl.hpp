#pragma once

// Shared stepping loop for the parabolic and hyperbolic solvers: sampling,
// touchdown detection with in-step bisection, and divergence handling.

#include <functional>

#include "mems/trajectory.hpp"

namespace mems::detail {

struct StepResult {
    Vector g;
    Vector v; // empty for parabolic
};

/// One step of size dt from (g, v) at time t. Throws TouchdownImminent when a
/// source-stage evaluation exceeds max u >= 1 - guard_eps. The stepping loop
/// passes the configured margin; the touchdown bisection probes with half of
/// it so states just past the declared threshold can still be formed.
using Advance = std::function<StepResult(const Vector& g, const Vector& v, double t, double dt,
                                         double guard_eps)>;

Trajectory integrate(const SolveConfig& config, SolverKind kind, const Advance& advance,
                     bool detect_touchdown);

} // namespace mems::detail
