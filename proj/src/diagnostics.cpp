#include "axvv/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace axvv {

namespace {

// |s|^(p-2) with 0^(negative) := 0 for the p < 2 singularity.
inline double abs_pow_pm2(double s, double p) {
    if (p == 2.0) return 1.0;
    double a = std::abs(s);
    if (a == 0.0) return 0.0;
    return std::pow(a, p - 2.0);
}

}  // namespace

double dissipation_increment(const ScalarField& xi, double nu, double p) {
    if (std::isinf(p)) throw InvalidArgument("dissipation_increment: p = infinity is excluded");
    if (!(p >= 1.0)) throw InvalidArgument("dissipation_increment: p must be >= 1");
    if (nu < 0.0) throw InvalidArgument("dissipation_increment: nu must be >= 0");
    if (nu == 0.0) return 0.0;
    const Grid& g = xi.grid();
    const double cell = g.dr * g.dz;
    double sum = 0.0;
    // Radial faces; zero flux through the axis and outer faces.
    for (int k = 1; k < g.nr; ++k) {
        double rf = g.rf(k);
        for (int j = 0; j < g.nz; ++j) {
            double grad = (xi(k, j) - xi(k - 1, j)) / g.dr;
            double w = 0.5 * (abs_pow_pm2(xi(k, j), p) + abs_pow_pm2(xi(k - 1, j), p));
            sum += w * grad * grad * rf;
        }
    }
    // Axial faces.
    for (int i = 0; i < g.nr; ++i) {
        double rc = g.rc(i);
        for (int k = 1; k < g.nz; ++k) {
            double grad = (xi(i, k) - xi(i, k - 1)) / g.dz;
            double w = 0.5 * (abs_pow_pm2(xi(i, k), p) + abs_pow_pm2(xi(i, k - 1), p));
            sum += w * grad * grad * rc;
        }
    }
    return nu * 2.0 * std::numbers::pi * sum * cell;
}

double force_work_rate(const ScalarField& xi, const ScalarField& g_now, double p) {
    if (std::isinf(p)) throw InvalidArgument("force_work_rate: p = infinity is excluded");
    if (!(p >= 1.0)) throw InvalidArgument("force_work_rate: p must be >= 1");
    const Grid& g = xi.grid();
    if (!(g == g_now.grid())) throw InvalidArgument("force_work_rate: grids do not match");
    double sum = 0.0;
    for (int i = 0; i < g.nr; ++i) {
        double rc = g.rc(i);
        for (int j = 0; j < g.nz; ++j) {
            double s = xi(i, j);
            double w = (p == 2.0) ? s : abs_pow_pm2(s, p) * s;
            sum += rc * w * g_now(i, j);
        }
    }
    return p * 2.0 * std::numbers::pi * sum * g.dr * g.dz;
}

EnergyBalance energy_balance_defect(const Trajectory& traj) {
    const BudgetSeries& b = traj.budgets;
    int k2 = b.p_index(2.0);
    EnergyBalance out;
    double n0 = b.norm[k2].front();
    double init = n0 * n0;
    bool first = true;
    // The t = 0 sample is identically balanced; start from the next one.
    for (std::size_t s = 1; s < traj.sample_step_index.size(); ++s) {
        std::size_t row = traj.sample_step_index[s];
        double n = b.norm[k2][row];
        double defect = n * n + 2.0 * b.diss_cum[k2][row] - init - b.work_cum[k2][row];
        if (first || defect > out.signed_max) out.signed_max = defect;
        first = false;
        out.creation = std::max(out.creation, defect);
        out.numerical_dissipation = std::max(out.numerical_dissipation, -defect);
    }
    out.creation = std::max(out.creation, 0.0);
    out.numerical_dissipation = std::max(out.numerical_dissipation, 0.0);
    return out;
}

double anomalous_dissipation(const Trajectory& traj) {
    const BudgetSeries& b = traj.budgets;
    int k2 = b.p_index(2.0);
    return b.diss_cum[k2].back();
}

double sup_t_lp_distance(const Trajectory& a, const Trajectory& b, double p) {
    if (a.sample_times.size() != b.sample_times.size())
        throw InvalidArgument("sup_t_lp_distance: mismatched sample grids");
    double tscale = std::max(1.0, std::abs(a.sample_times.back()));
    for (std::size_t k = 0; k < a.sample_times.size(); ++k)
        if (std::abs(a.sample_times[k] - b.sample_times[k]) > 1e-12 * tscale)
            throw InvalidArgument("sup_t_lp_distance: mismatched sample grids");
    double worst = 0.0;
    for (std::size_t k = 0; k < a.snapshots.size(); ++k)
        worst = std::max(worst,
                         lp_norm_3d(field_difference(a.snapshots[k], b.snapshots[k]), p));
    return worst;
}

TailTable tail_mass_series(const Trajectory& traj, double p, std::span<const double> radii) {
    TailTable t;
    t.radii.assign(radii.begin(), radii.end());
    t.times = traj.sample_times;
    t.value.resize(t.radii.size());
    t.sup_over_time.assign(t.radii.size(), 0.0);
    for (std::size_t r = 0; r < t.radii.size(); ++r) {
        t.value[r].resize(traj.snapshots.size());
        for (std::size_t s = 0; s < traj.snapshots.size(); ++s) {
            double v = lp_norm_tail(traj.snapshots[s], p, t.radii[r]);
            t.value[r][s] = v;
            t.sup_over_time[r] = std::max(t.sup_over_time[r], v);
        }
    }
    return t;
}

double embedding_ratio(const ScalarField& xi, double p) {
    if (!(p > 1.0) || !(p <= 4.0 / 3.0))
        throw InvalidArgument("embedding_ratio: p must lie in (1, 4/3]");
    const Grid& g = xi.grid();
    const double q = 2.0 * p / (2.0 - p);

    double om_sum = 0.0;
    for (int i = 0; i < g.nr; ++i) {
        double rc = g.rc(i);
        for (int j = 0; j < g.nz; ++j) om_sum += std::pow(std::abs(rc * xi(i, j)), p);
    }
    if (om_sum == 0.0) return 0.0;
    double om_norm = std::pow(om_sum * g.dr * g.dz, 1.0 / p);

    FaceVelocity v = velocity_from_streamfunction(solve_streamfunction(xi));
    double u_sum = 0.0;
    for (int i = 0; i < g.nr; ++i) {
        double rc = g.rc(i);
        for (int j = 0; j < g.nz; ++j) {
            double url = i == 0 ? 0.0 : v.Fr(i, j) / g.rf(i);
            double urr = v.Fr(i + 1, j) / g.rf(i + 1);
            double ur = 0.5 * (url + urr);
            double uz = 0.5 * (v.Fz(i, j) + v.Fz(i, j + 1)) / rc;
            u_sum += std::pow(std::hypot(ur, uz), q);
        }
    }
    double u_norm = std::pow(u_sum * g.dr * g.dz, 1.0 / q);
    return u_norm / om_norm;
}

}  // namespace axvv
