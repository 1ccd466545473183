#include "run_loop.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "axvv/diagnostics.hpp"
#include "axvv/euler_solver.hpp"
#include "axvv/ns_solver.hpp"

namespace axvv::detail {

namespace {

std::vector<double> tracked_ps(const SimConfig& cfg) {
    std::set<double> ps(cfg.norm_ps.begin(), cfg.norm_ps.end());
    ps.insert(1.0);
    ps.insert(2.0);
    return {ps.begin(), ps.end()};
}

void check_support_margin(const ScalarField& xi0, const Grid& g) {
    double peak = 0.0;
    for (double v : xi0.data()) peak = std::max(peak, std::abs(v));
    if (peak == 0.0) return;
    double thresh = 1e-5 * peak;  // box truncation below this level is the
                                  // boundary diagnostic's business
    double rmax = 0.0, zlo = g.zmax, zhi = g.zmin;
    for (int i = 0; i < g.nr; ++i)
        for (int j = 0; j < g.nz; ++j)
            if (std::abs(xi0(i, j)) > thresh) {
                rmax = std::max(rmax, g.rc(i));
                zlo = std::min(zlo, g.zc(j));
                zhi = std::max(zhi, g.zc(j));
            }
    double zext = g.zmax - g.zmin;
    if (g.R - rmax < 0.1 * g.R || zlo - g.zmin < 0.1 * zext || g.zmax - zhi < 0.1 * zext)
        throw InvalidArgument(
            "run: initial support too close to the outer boundary (need a 10% margin)");
}

struct BudgetTracker {
    const SimConfig* cfg;
    bool viscous;
    BudgetSeries* b;

    void init(const SimConfig& c, bool visc, BudgetSeries& series, const ScalarField& xi0) {
        cfg = &c;
        viscous = visc;
        b = &series;
        b->ps = tracked_ps(c);
        std::size_t np = b->ps.size();
        b->norm.assign(np, {});
        b->diss_cum.assign(np, {});
        b->work_cum.assign(np, {});
        b->gnorm_cum.assign(np, {});
        record_state(0.0, xi0);
    }

    // Accumulate interval terms for [t, t+dt] evaluated at the step start.
    void accumulate(const ScalarField& xi, const ScalarField& g_now, bool forcing_zero,
                    double dt) {
        for (std::size_t k = 0; k < b->ps.size(); ++k) {
            double p = b->ps[k];
            double diss =
                viscous && cfg->nu > 0.0 ? dt * dissipation_increment(xi, cfg->nu, p) : 0.0;
            b->diss_cum[k].push_back(b->diss_cum[k].back() + diss);
            double work = forcing_zero ? 0.0 : dt * force_work_rate(xi, g_now, p);
            b->work_cum[k].push_back(b->work_cum[k].back() + work);
            double gn = forcing_zero ? 0.0 : dt * lp_norm_3d(g_now, p);
            b->gnorm_cum[k].push_back(b->gnorm_cum[k].back() + gn);
        }
    }

    void record_state(double t, const ScalarField& xi) {
        b->times.push_back(t);
        for (std::size_t k = 0; k < b->ps.size(); ++k) {
            b->norm[k].push_back(lp_norm_3d(xi, b->ps[k]));
            if (b->times.size() == 1) {
                b->diss_cum[k].push_back(0.0);
                b->work_cum[k].push_back(0.0);
                b->gnorm_cum[k].push_back(0.0);
            }
        }
        b->norm_inf.push_back(lp_norm_3d(xi, std::numeric_limits<double>::infinity()));
    }
};

}  // namespace

std::pair<Trajectory, Trajectory> run_core(const SimConfig& cfg, bool euler,
                                           const TwinInit* twin,
                                           const ScalarField* xi0_override) {
    cfg.validate();
    Grid g = cfg.grid();

    ScalarField xi = xi0_override ? *xi0_override : make_initial_field(cfg.init, g);
    if (!(xi.grid() == g))
        throw InvalidArgument("run: initial field grid does not match config");
    check_support_margin(xi, g);
    ForcingEval forcing(cfg.force, g);

    ScalarField xi_twin;
    ForcingEval forcing_twin(ForcingSpec{}, g);
    if (twin) {
        if (!(twin->xi0->grid() == g))
            throw InvalidArgument("run: twin initial field grid does not match");
        xi_twin = *twin->xi0;
        forcing_twin = twin->force_shape
                           ? ForcingEval(*twin->force_shape, twin->force->t_decay)
                           : ForcingEval(*twin->force, g);
    }

    std::vector<double> ts = cfg.sample_times();
    Trajectory traj;
    traj.nu = euler ? 0.0 : cfg.nu;
    traj.sample_times = ts;
    Trajectory traj_twin;
    traj_twin.nu = traj.nu;
    traj_twin.sample_times = ts;

    BudgetTracker budget, budget_twin;
    budget.init(cfg, !euler, traj.budgets, xi);
    if (twin) budget_twin.init(cfg, !euler, traj_twin.budgets, xi_twin);

    traj.snapshots.push_back(xi);
    traj.sample_step_index.push_back(0);
    if (twin) {
        traj_twin.snapshots.push_back(xi_twin);
        traj_twin.sample_step_index.push_back(0);
    }

    ScalarField g_now(g, 0.0, FieldRole::forcing);
    ScalarField g_now_twin(g, 0.0, FieldRole::forcing);

    Streamfunction psi(g);  // warm start carried across steps
    const double sigma_c = euler ? cfg.cfl_euler : cfg.cfl;
    const double nu = euler ? 0.0 : cfg.nu;
    const double teps = 1e-12 * cfg.T;
    double t = 0.0;

    for (std::size_t s = 1; s < ts.size(); ++s) {
        double t_target = ts[s];
        while (t < t_target - teps) {
            psi = solve_streamfunction(xi, cfg.elliptic, &psi);
            FaceVelocity vel = velocity_from_streamfunction(psi);

            double psimax = 0.0;
            for (double v : psi.psi) psimax = std::max(psimax, std::abs(v));
            if (psimax > 0.0)
                traj.max_divergence_scaled =
                    std::max(traj.max_divergence_scaled,
                             max_cell_divergence(vel) * g.dr * g.dz / psimax);

            FaceSpeeds sp = face_speeds(vel);
            double umax = std::max(sp.max_ur, sp.max_uz);
            if (umax > 0.0) {
                double tang = boundary_tangential_speed(vel) / umax;
                traj.max_boundary_tangential_rel =
                    std::max(traj.max_boundary_tangential_rel, tang);
                if (tang > cfg.boundary_tol)
                    throw SolverError(
                        "run: outer-boundary tangential velocity exceeds the truncation "
                        "threshold; enlarge the box",
                        tang);
            }

            double dt = cfl_dt(vel, nu, g, sigma_c, cfg.diffusion, t_target - t);
            forcing.evaluate(t + 0.5 * dt, g_now);
            if (twin) forcing_twin.evaluate(t + 0.5 * dt, g_now_twin);

            budget.accumulate(xi, g_now, forcing.is_zero(), dt);
            if (twin) budget_twin.accumulate(xi_twin, g_now_twin, forcing_twin.is_zero(), dt);

            if (euler) {
                xi = step_euler_sl(xi, vel, g_now, dt, &traj.feet_outside);
                if (twin)
                    xi_twin = step_euler_sl(xi_twin, vel, g_now_twin, dt,
                                            &traj_twin.feet_outside);
            } else {
                xi = step_ns(xi, vel, nu, g_now, dt, cfg.limiter, cfg.diffusion);
                if (twin)
                    xi_twin = step_ns(xi_twin, vel, nu, g_now_twin, dt, cfg.limiter,
                                      cfg.diffusion);
            }

            t = (t_target - t - dt <= teps) ? t_target : t + dt;
            ++traj.steps;
            budget.record_state(t, xi);
            if (twin) {
                ++traj_twin.steps;
                budget_twin.record_state(t, xi_twin);
            }
        }
        t = t_target;
        traj.snapshots.push_back(xi);
        traj.sample_step_index.push_back(traj.budgets.times.size() - 1);
        if (twin) {
            traj_twin.snapshots.push_back(xi_twin);
            traj_twin.sample_step_index.push_back(traj_twin.budgets.times.size() - 1);
        }
    }
    return {std::move(traj), std::move(traj_twin)};
}

}  // namespace axvv::detail
