#pragma once

#include <utility>

#include "axvv/sim.hpp"

namespace axvv::detail {

struct TwinInit {
    const ScalarField* xi0 = nullptr;
    const ForcingSpec* force = nullptr;
    const ScalarField* force_shape = nullptr;  // optional custom spatial shape
};

/// Shared time loop for both solvers: reconstructs the velocity from the
/// primary field every step, advances the primary (and the twin, if any,
/// through the same velocity history), and accumulates budgets/snapshots.
/// `xi0_override`, when given, replaces the configured initial datum.
std::pair<Trajectory, Trajectory> run_core(const SimConfig& cfg, bool euler,
                                           const TwinInit* twin,
                                           const ScalarField* xi0_override = nullptr);

}  // namespace axvv::detail
