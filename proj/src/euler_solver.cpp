#include "axvv/euler_solver.hpp"

#include <algorithm>
#include <cmath>

#include "axvv/diagnostics.hpp"
#include "run_loop.hpp"

namespace axvv {

namespace {

// Monotone bilinear evaluation of a cell-centered field at an arbitrary
// point: even reflection across the axis, zero extension elsewhere.
double sample_field(const ScalarField& q, double r, double z) {
    const Grid& g = q.grid();
    if (r < 0.0) r = -r;
    double x = r / g.dr - 0.5;
    double y = (z - g.zmin) / g.dz - 0.5;
    int i = static_cast<int>(std::floor(x));
    int j = static_cast<int>(std::floor(y));
    double fx = x - i, fy = y - j;
    auto at = [&](int ii, int jj) -> double {
        if (jj < 0 || jj >= g.nz) return 0.0;
        if (ii < 0) ii = -1 - ii;
        if (ii >= g.nr) return 0.0;
        return q(ii, jj);
    };
    return (1 - fx) * ((1 - fy) * at(i, j) + fy * at(i, j + 1)) +
           fx * ((1 - fy) * at(i + 1, j) + fy * at(i + 1, j + 1));
}

}  // namespace

ScalarField step_euler_sl(const ScalarField& xi, const FaceVelocity& vel,
                          const ScalarField& g_now, double dt, long* feet_outside) {
    const Grid& g = xi.grid();
    if (!(g == vel.grid) || !(g == g_now.grid()))
        throw InvalidArgument("step_euler_sl: grids do not match");
    VelocitySampler sampler(vel);
    ScalarField out(g, 0.0, xi.role());
    long outside = 0;
    for (int i = 0; i < g.nr; ++i) {
        double r = g.rc(i);
        for (int j = 0; j < g.nz; ++j) {
            double z = g.zc(j);
            double rm = r - 0.5 * dt * sampler.ur(r, z);
            double zm = z - 0.5 * dt * sampler.uz(r, z);
            double rfoot = r - dt * sampler.ur(rm, zm);
            double zfoot = z - dt * sampler.uz(rm, zm);
            if (rfoot > g.R + g.dr || zfoot < g.zmin - g.dz || zfoot > g.zmax + g.dz) ++outside;
            out(i, j) = sample_field(xi, rfoot, zfoot) + dt * g_now(i, j);
        }
    }
    if (feet_outside) *feet_outside += outside;
    for (int i = 0; i < g.nr; ++i)
        for (int j = 0; j < g.nz; ++j)
            if (!std::isfinite(out(i, j)))
                throw SolverError("step_euler_sl: non-finite value at cell (" +
                                      std::to_string(i) + "," + std::to_string(j) + ")",
                                  0.0);
    return out;
}

Trajectory run_euler(const SimConfig& cfg) {
    auto [main, twin] = detail::run_core(cfg, true, nullptr);
    (void)twin;
    return main;
}

std::pair<Trajectory, Trajectory> run_euler_twin(const SimConfig& cfg,
                                                 const ScalarField& xi0_twin,
                                                 const ForcingSpec& force_twin) {
    detail::TwinInit t{&xi0_twin, &force_twin};
    return detail::run_core(cfg, true, &t);
}

double renormalization_defect(const SimConfig& cfg, const RenormFunction& beta) {
    if (cfg.force.kind != ForceKind::none && cfg.force.amplitude != 0.0)
        throw InvalidArgument("renormalization_defect: requires zero forcing");
    Grid g = cfg.grid();
    ScalarField xi0 = make_initial_field(cfg.init, g);
    ScalarField eta0 = apply_renorm(xi0, beta);
    ForcingSpec none;
    auto [traj, twin] = run_euler_twin(cfg, eta0, none);
    double worst = 0.0;
    for (std::size_t k = 0; k < traj.snapshots.size(); ++k) {
        ScalarField composed = apply_renorm(traj.snapshots[k], beta);
        worst = std::max(worst, lp_norm_3d(field_difference(composed, twin.snapshots[k]), 1.0));
    }
    return worst;
}

}  // namespace axvv
