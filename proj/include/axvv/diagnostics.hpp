#pragma once

#include <span>

#include "axvv/sim.hpp"

namespace axvv {

/// nu * sum over faces of |grad xi|^2 weighted by the face-averaged
/// |xi|^{p-2} and the face measure 2 pi r dr dz.  Rejects p = infinity;
/// |xi|^{p-2} uses the convention 0^{negative} := 0 for p < 2.
double dissipation_increment(const ScalarField& xi, double nu, double p);

/// int p |xi|^{p-2} xi g dmu3 (instantaneous force-work rate).
double force_work_rate(const ScalarField& xi, const ScalarField& g_now, double p);

struct EnergyBalance {
    double signed_max = 0.0;  // max over sample times of the p=2 balance defect
    double creation = 0.0;    // positive part (unphysical energy creation)
    double numerical_dissipation = 0.0;  // magnitude of the negative part
};

/// Balance defect ||xi(t)||_2^2 + 2 D_2(t) - ||xi_0||_2^2 - work(t) over the
/// trajectory's sample times.
EnergyBalance energy_balance_defect(const Trajectory& traj);

/// Cumulative p = 2 dissipation at the final time.
double anomalous_dissipation(const Trajectory& traj);

/// max over shared sample times of || xi_A(t) - xi_B(t) ||_p.  Sample grids
/// must match exactly; there is no silent interpolation.
double sup_t_lp_distance(const Trajectory& a, const Trajectory& b, double p);

struct TailTable {
    std::vector<double> radii;
    std::vector<double> times;
    std::vector<std::vector<double>> value;  // [radius index][time index], p-th powers
    std::vector<double> sup_over_time;       // per radius
};

TailTable tail_mass_series(const Trajectory& traj, double p, std::span<const double> radii);

/// ||u||_{L^{2p/(2-p)}(H)} / ||omega||_{L^p(H)} for the reconstructed
/// velocity, both in the plain half-plane measure; 0 for zero data.
double embedding_ratio(const ScalarField& xi, double p);

}  // namespace axvv
