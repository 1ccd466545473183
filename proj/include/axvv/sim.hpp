#pragma once

#include <string>
#include <vector>

#include "axvv/biot_savart.hpp"
#include "axvv/grid.hpp"

namespace axvv {

enum class InitKind { zero, gaussian, hill, snapshot };

struct InitSpec {
    InitKind kind = InitKind::gaussian;
    double r0 = 1.0;
    double z0 = 0.0;
    double sigma = 0.5;
    double amplitude = 1.0;
    double radius = 1.0;  // sphere radius for Hill's vortex (centered on the axis at z0)
    std::string path;     // snapshot file for InitKind::snapshot
};

enum class ForceKind { none, gaussian };

/// Spatial bump times an exponential time envelope exp(-t/t_decay).
struct ForcingSpec {
    ForceKind kind = ForceKind::none;
    double r0 = 1.0;
    double z0 = 0.0;
    double sigma = 0.5;
    double amplitude = 0.0;
    double t_decay = 0.0;  // <= 0 means constant in time
};

enum class Limiter { minmod, upwind1, centered };
enum class DiffusionTreatment { explicit_cfl, split_implicit };

struct SimConfig {
    int nr = 128;
    int nz = 256;
    double R = 4.0;
    double zmin = -4.0;
    double zmax = 4.0;
    double nu = 0.0;
    double T = 1.0;
    InitSpec init;
    ForcingSpec force;
    double cfl = 0.4;         // flux-form (viscous) solver
    double cfl_euler = 0.85;  // semi-Lagrangian solver
    Limiter limiter = Limiter::minmod;
    DiffusionTreatment diffusion = DiffusionTreatment::explicit_cfl;
    int samples = 16;  // sample points including t = 0 and t = T
    std::vector<double> norm_ps = {1.0, 2.0, 4.0};
    std::vector<double> probe_radii = {3.0};
    double boundary_tol = 0.15;  // tangential boundary speed / max |u| abort threshold
    StreamfunctionOptions elliptic;

    void validate() const;
    Grid grid() const;
    std::vector<double> sample_times() const;
};

/// Per-step norm and budget ledger: ||xi(t)||_p, cumulative dissipation
/// D_p(t) = nu * int int |xi|^{p-2} |grad xi|^2 dmu3 ds, cumulative force
/// work int int p |xi|^{p-2} xi g dmu3 ds, and int ||g(s)||_p ds.
struct BudgetSeries {
    std::vector<double> ps;  // finite exponents tracked
    std::vector<double> times;
    std::vector<std::vector<double>> norm;       // [p index][step]
    std::vector<double> norm_inf;                // sup norm series
    std::vector<std::vector<double>> diss_cum;   // D_p
    std::vector<std::vector<double>> work_cum;   // force work
    std::vector<std::vector<double>> gnorm_cum;  // int ||g||_p ds

    int p_index(double p) const;
};

struct Trajectory {
    double nu = 0.0;
    std::vector<double> sample_times;
    std::vector<ScalarField> snapshots;
    std::vector<std::size_t> sample_step_index;  // row of `budgets` at each sample
    BudgetSeries budgets;
    long steps = 0;
    long feet_outside = 0;               // semi-Lagrangian feet past one cell layer
    double max_divergence_scaled = 0.0;  // max over steps of div * dr * dz / max |psi|
    double max_boundary_tangential_rel = 0.0;
};

ScalarField make_initial_field(const InitSpec& spec, const Grid& g);

/// Forcing evaluator: one spatial shape scaled by the time envelope.
class ForcingEval {
public:
    ForcingEval(const ForcingSpec& spec, const Grid& g);
    /// Custom spatial shape (e.g. a mollified bump) with the same envelope.
    ForcingEval(ScalarField shape, double t_decay);
    bool is_zero() const { return zero_; }
    /// Writes amplitude(t) * shape into `out` (grids must match).
    void evaluate(double t, ScalarField& out) const;

private:
    bool zero_ = true;
    double t_decay_ = 0.0;
    ScalarField shape_;
};

}  // namespace axvv
