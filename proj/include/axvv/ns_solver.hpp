#pragma once

#include <utility>

#include "axvv/sim.hpp"

namespace axvv {

/// Stable step from the stiffness budget: advective face speeds plus, for
/// explicit diffusion, 2 nu (1/dr^2 + 1/dz^2) and the axis-cell drift term
/// max_i 4 nu / (r_i dr).  A zero budget returns dt_cap (time to the next
/// sample); the result never exceeds dt_cap.
double cfl_dt(const FaceVelocity& vel, double nu, const Grid& g, double sigma_c,
              DiffusionTreatment diffusion, double dt_cap);

/// One Heun step of flux-form advection (limited upwind faces), conservative
/// r^4-weighted diffusion with zero flux through the axis face, and forcing.
ScalarField step_ns(const ScalarField& xi, const FaceVelocity& vel, double nu,
                    const ScalarField& g_now, double dt, Limiter limiter = Limiter::minmod,
                    DiffusionTreatment diffusion = DiffusionTreatment::explicit_cfl);

/// Coupled viscous run: Biot-Savart reconstruction every step, budgets and
/// snapshots per the config.
Trajectory run_ns(const SimConfig& cfg);

/// As run_ns, but also advances a second field through the same velocity
/// history (shared reconstruction and time steps).
std::pair<Trajectory, Trajectory> run_ns_twin(const SimConfig& cfg, const ScalarField& xi0_twin,
                                              const ForcingSpec& force_twin);

}  // namespace axvv
