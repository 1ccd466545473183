#include "axvv/ns_solver.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "run_loop.hpp"

namespace axvv {

namespace {

inline double minmod(double a, double b) {
    if (a * b <= 0.0) return 0.0;
    return std::abs(a) < std::abs(b) ? a : b;
}

// Ghost access: even mirror across the axis, zero extension outward.
inline double ghost_r(const ScalarField& q, int i, int j, int nr) {
    if (i < 0) i = -1 - i;
    if (i >= nr) return 0.0;
    return q(i, j);
}

inline double ghost_z(const ScalarField& q, int i, int j, int nz) {
    if (j < 0 || j >= nz) return 0.0;
    return q(i, j);
}

// Upwind face value with the selected reconstruction.
inline double face_value_r(const ScalarField& q, int k, int j, double flux, Limiter lim,
                           int nr) {
    if (flux == 0.0) return 0.0;
    int c = flux > 0.0 ? k - 1 : k;
    double qc = ghost_r(q, c, j, nr);
    if (lim == Limiter::upwind1) return qc;
    if (lim == Limiter::centered)
        return 0.5 * (ghost_r(q, k - 1, j, nr) + ghost_r(q, k, j, nr));
    double dm = qc - ghost_r(q, c - 1, j, nr);
    double dp = ghost_r(q, c + 1, j, nr) - qc;
    return flux > 0.0 ? qc + 0.5 * minmod(dm, dp) : qc - 0.5 * minmod(dp, dm);
}

inline double face_value_z(const ScalarField& q, int i, int k, double flux, Limiter lim,
                           int nz) {
    if (flux == 0.0) return 0.0;
    int c = flux > 0.0 ? k - 1 : k;
    double qc = ghost_z(q, i, c, nz);
    if (lim == Limiter::upwind1) return qc;
    if (lim == Limiter::centered)
        return 0.5 * (ghost_z(q, i, k - 1, nz) + ghost_z(q, i, k, nz));
    double dm = qc - ghost_z(q, i, c - 1, nz);
    double dp = ghost_z(q, i, c + 1, nz) - qc;
    return flux > 0.0 ? qc + 0.5 * minmod(dm, dp) : qc - 0.5 * minmod(dp, dm);
}

struct DiffusionGeometry {
    std::vector<double> rf4;     // face radii ^4
    std::vector<double> w4_inv;  // 1 / cell average of r^4
    explicit DiffusionGeometry(const Grid& g) : rf4(g.nr + 1), w4_inv(g.nr) {
        for (int k = 0; k <= g.nr; ++k) {
            double rf = g.rf(k);
            rf4[k] = rf * rf * rf * rf;
        }
        for (int i = 0; i < g.nr; ++i) {
            double lo = g.rf(i), hi = g.rf(i + 1);
            double w = (std::pow(hi, 5) - std::pow(lo, 5)) / (5.0 * g.dr);
            w4_inv[i] = 1.0 / w;
        }
    }
};

// One forward-Euler stage: advection, explicit diffusion terms, forcing.
// Split-implicit runs keep z-diffusion here and defer the stiff radial
// direction to the tridiagonal solve after the Heun combination.
void stage_rhs(const ScalarField& q, const FaceVelocity& vel, double nu,
               const ScalarField& g_now, Limiter lim, bool explicit_r_diffusion,
               const DiffusionGeometry& geo, ScalarField& out) {
    const Grid& g = q.grid();
    const int nr = g.nr, nz = g.nz;

    // Radial flux differences, one z-row of face fluxes at a time.
    static thread_local std::vector<double> fhat_r;
    fhat_r.assign(static_cast<std::size_t>(nr + 1) * nz, 0.0);
    for (int k = 0; k <= nr; ++k)
        for (int j = 0; j < nz; ++j) {
            double flux = vel.Fr(k, j);
            if (flux != 0.0)
                fhat_r[static_cast<std::size_t>(k) * nz + j] =
                    flux * face_value_r(q, k, j, flux, lim, nr);
        }

    for (int i = 0; i < nr; ++i) {
        double inv_rc = 1.0 / g.rc(i);
        for (int j = 0; j < nz; ++j) {
            double fz_hi = vel.Fz(i, j + 1);
            double fz_lo = vel.Fz(i, j);
            double fhat_hi = fz_hi == 0.0 ? 0.0 : fz_hi * face_value_z(q, i, j + 1, fz_hi, lim, nz);
            double fhat_lo = fz_lo == 0.0 ? 0.0 : fz_lo * face_value_z(q, i, j, fz_lo, lim, nz);
            double div = (fhat_r[static_cast<std::size_t>(i + 1) * nz + j] -
                          fhat_r[static_cast<std::size_t>(i) * nz + j]) /
                             g.dr +
                         (fhat_hi - fhat_lo) / g.dz;
            double val = -div * inv_rc + g_now(i, j);
            if (nu > 0.0) {
                double dz_hi = j + 1 < nz ? q(i, j + 1) - q(i, j) : 0.0;
                double dz_lo = j > 0 ? q(i, j) - q(i, j - 1) : 0.0;
                val += nu * (dz_hi - dz_lo) / (g.dz * g.dz);
                if (explicit_r_diffusion) {
                    double fr_hi = i + 1 < nr ? geo.rf4[i + 1] * (q(i + 1, j) - q(i, j)) : 0.0;
                    double fr_lo = i > 0 ? geo.rf4[i] * (q(i, j) - q(i - 1, j)) : 0.0;
                    val += nu * (fr_hi - fr_lo) * geo.w4_inv[i] / (g.dr * g.dr);
                }
            }
            out(i, j) = val;
        }
    }
}

// Backward-Euler radial diffusion, tridiagonal per z-column (Thomas).
void implicit_r_diffusion(ScalarField& q, double nu, double dt, const DiffusionGeometry& geo) {
    const Grid& g = q.grid();
    const int nr = g.nr;
    const double s = nu * dt / (g.dr * g.dr);
    std::vector<double> a(nr), b(nr), c(nr), d(nr);
    for (int j = 0; j < g.nz; ++j) {
        for (int i = 0; i < nr; ++i) {
            double lo = i > 0 ? s * geo.rf4[i] * geo.w4_inv[i] : 0.0;
            double hi = i + 1 < nr ? s * geo.rf4[i + 1] * geo.w4_inv[i] : 0.0;
            a[i] = -lo;
            b[i] = 1.0 + lo + hi;
            c[i] = -hi;
            d[i] = q(i, j);
        }
        for (int i = 1; i < nr; ++i) {
            double m = a[i] / b[i - 1];
            b[i] -= m * c[i - 1];
            d[i] -= m * d[i - 1];
        }
        d[nr - 1] /= b[nr - 1];
        for (int i = nr - 2; i >= 0; --i) d[i] = (d[i] - c[i] * d[i + 1]) / b[i];
        for (int i = 0; i < nr; ++i) q(i, j) = d[i];
    }
}

}  // namespace

double cfl_dt(const FaceVelocity& vel, double nu, const Grid& g, double sigma_c,
              DiffusionTreatment diffusion, double dt_cap) {
    if (!(sigma_c > 0.0) || sigma_c > 1.0)
        throw InvalidArgument("cfl_dt: safety factor must lie in (0,1]");
    if (!(dt_cap > 0.0)) throw InvalidArgument("cfl_dt: dt_cap must be positive");
    FaceSpeeds sp = face_speeds(vel);
    double denom = sp.max_ur / g.dr + sp.max_uz / g.dz;
    if (nu > 0.0) {
        if (diffusion == DiffusionTreatment::explicit_cfl) {
            denom += 2.0 * nu * (1.0 / (g.dr * g.dr) + 1.0 / (g.dz * g.dz));
            denom += 4.0 * nu / (g.rc(0) * g.dr);  // axis cell dominates the drift term
        } else {
            denom += 2.0 * nu / (g.dz * g.dz);  // z-diffusion stays explicit
        }
    }
    if (denom <= 0.0) return dt_cap;
    return std::min(sigma_c / denom, dt_cap);
}

ScalarField step_ns(const ScalarField& xi, const FaceVelocity& vel, double nu,
                    const ScalarField& g_now, double dt, Limiter limiter,
                    DiffusionTreatment diffusion) {
    const Grid& g = xi.grid();
    if (!(g == vel.grid) || !(g == g_now.grid()))
        throw InvalidArgument("step_ns: grids do not match");
    DiffusionGeometry geo(g);
    bool explicit_diff = diffusion == DiffusionTreatment::explicit_cfl;

    ScalarField rhs(g);
    stage_rhs(xi, vel, nu, g_now, limiter, explicit_diff, geo, rhs);
    ScalarField mid(g, 0.0, xi.role());
    for (int i = 0; i < g.nr; ++i)
        for (int j = 0; j < g.nz; ++j) mid(i, j) = xi(i, j) + dt * rhs(i, j);

    ScalarField rhs2(g);
    stage_rhs(mid, vel, nu, g_now, limiter, explicit_diff, geo, rhs2);
    ScalarField out(g, 0.0, xi.role());
    for (int i = 0; i < g.nr; ++i)
        for (int j = 0; j < g.nz; ++j)
            out(i, j) = 0.5 * xi(i, j) + 0.5 * (mid(i, j) + dt * rhs2(i, j));

    if (!explicit_diff && nu > 0.0) implicit_r_diffusion(out, nu, dt, geo);

    for (int i = 0; i < g.nr; ++i)
        for (int j = 0; j < g.nz; ++j)
            if (!std::isfinite(out(i, j)))
                throw SolverError("step_ns: non-finite value at cell (" + std::to_string(i) +
                                      "," + std::to_string(j) + ")",
                                  0.0);
    return out;
}

Trajectory run_ns(const SimConfig& cfg) {
    auto [main, twin] = detail::run_core(cfg, false, nullptr);
    (void)twin;
    return main;
}

std::pair<Trajectory, Trajectory> run_ns_twin(const SimConfig& cfg, const ScalarField& xi0_twin,
                                              const ForcingSpec& force_twin) {
    detail::TwinInit t{&xi0_twin, &force_twin};
    return detail::run_core(cfg, false, &t);
}

}  // namespace axvv
