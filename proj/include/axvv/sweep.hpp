#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "axvv/sim.hpp"

namespace axvv {

/// One Euler reference plus a geometric viscosity ladder of viscous runs.
struct SweepConfig {
    SimConfig base;  // shared template; nu is overwritten per rung
    double nu_max = 1e-2;
    double factor = 0.5;
    int count = 6;
    std::filesystem::path out_dir;  // empty: no files written
    int workers = 0;                // 0: one per rung up to hardware width
    bool compute_floor = true;      // Euler self-distance at half resolution
    int mollify_data_n = 0;         // > 0: nu-dependent mollified data family
    std::string config_text;        // raw config text for the fingerprint

    void validate() const;
};

struct SweepRow {
    double nu = 0.0;
    double sup_dist_p1 = 0.0;
    double sup_dist_p2 = 0.0;
    double sup_dist_p4 = 0.0;
    double anom_diss = 0.0;
    double max_tail = 0.0;
    double energy_defect = 0.0;
    double wall_ms = 0.0;  // measured; the CSV reports 0 to stay byte-reproducible
    bool failed = false;
    std::string error;
};

struct RateFit {
    double slope = 0.0;
    double intercept = 0.0;
    int points_used = 0;
};

struct SweepReport {
    std::vector<SweepRow> rows;  // sorted by descending nu
    double floor_p1 = 0.0, floor_p2 = 0.0, floor_p4 = 0.0;
    std::vector<std::pair<double, RateFit>> fits;  // per norm exponent
    std::string fingerprint;
};

SweepReport run_sweep(const SweepConfig& cfg);

/// Least squares on (log nu, log err) over the points with err > floor.
RateFit fit_rate(const std::vector<std::pair<double, double>>& points, double floor);

/// Writes the pinned-schema report CSV (wall_ms column rendered as 0).
void write_sweep_csv(const SweepReport& report, const std::filesystem::path& path);

/// The three mollified linearized comparisons whose sum bounds the direct
/// viscous-to-inviscid distance, plus that direct distance.
struct MollifiedSplit {
    double term_visc = 0.0;      // sup_t || xi_nu - xi_nu_n ||_p
    double term_cross = 0.0;     // sup_t || xi_nu_n - xi_n ||_p
    double term_inviscid = 0.0;  // sup_t || xi_n - xi ||_p
    double direct = 0.0;         // sup_t || xi_nu - xi ||_p
};

MollifiedSplit mollified_linearization_experiment(const SimConfig& cfg, int n, double p);

std::string config_fingerprint(const std::string& text);

}  // namespace axvv
