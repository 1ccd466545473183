#pragma once

#include <utility>

#include "axvv/sim.hpp"

namespace axvv {

/// One semi-Lagrangian transport step: two-stage midpoint backtrace along
/// the face velocity, monotone bilinear evaluation at the foot (even
/// reflection across the axis, zero extension outside), plus dt * g_now.
/// Feet leaving the box by more than one cell layer are counted into
/// *feet_outside when given.
ScalarField step_euler_sl(const ScalarField& xi, const FaceVelocity& vel,
                          const ScalarField& g_now, double dt, long* feet_outside = nullptr);

/// Coupled inviscid run (cfg.nu is ignored).
Trajectory run_euler(const SimConfig& cfg);

std::pair<Trajectory, Trajectory> run_euler_twin(const SimConfig& cfg,
                                                 const ScalarField& xi0_twin,
                                                 const ForcingSpec& force_twin);

/// sup over sample times of || beta(xi(t)) - eta(t) ||_{L1(R^3)} where eta
/// is transported from beta(xi_0) by the same velocity history.  Requires
/// zero forcing.
double renormalization_defect(const SimConfig& cfg, const RenormFunction& beta);

}  // namespace axvv
