#include "axvv/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <sstream>
#include <thread>

#include "axvv/diagnostics.hpp"
#include "axvv/euler_solver.hpp"
#include "axvv/io.hpp"
#include "axvv/ns_solver.hpp"
#include "run_loop.hpp"

namespace axvv {

namespace {

// mu-weighted 2x2 block restriction of a half-resolution field.
ScalarField restrict_half(const ScalarField& fine, const Grid& coarse) {
    const Grid& gf = fine.grid();
    if (gf.nr != 2 * coarse.nr || gf.nz != 2 * coarse.nz)
        throw InvalidArgument("restrict_half: grids are not a 2x refinement pair");
    ScalarField out(coarse);
    for (int i = 0; i < coarse.nr; ++i)
        for (int j = 0; j < coarse.nz; ++j) {
            double num = 0.0, den = 0.0;
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) {
                    double w = gf.rc(2 * i + a);
                    num += w * fine(2 * i + a, 2 * j + b);
                    den += w;
                }
            out(i, j) = num / den;
        }
    return out;
}

int mollify_index_for(const SimConfig& cfg, int n0, double nu, double nu_max) {
    Grid g = cfg.grid();
    int n_max = static_cast<int>(std::floor(1.0 / (2.0 * std::max(g.dr, g.dz))));
    int n = static_cast<int>(std::ceil(n0 * std::sqrt(nu_max / nu)));
    return std::clamp(n, n0, n_max);
}

}  // namespace

void SweepConfig::validate() const {
    base.validate();
    if (!(nu_max > 0.0)) throw InvalidArgument("SweepConfig: nu_max must be positive");
    if (!(factor > 0.0) || !(factor < 1.0))
        throw InvalidArgument("SweepConfig: factor must lie in (0,1)");
    if (count < 3) throw InvalidArgument("SweepConfig: count >= 3 required");
    if (workers < 0) throw InvalidArgument("SweepConfig: workers must be >= 0");
}

std::string config_fingerprint(const std::string& text) {
    // FNV-1a 64-bit over the raw bytes.
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

RateFit fit_rate(const std::vector<std::pair<double, double>>& points, double floor) {
    std::vector<std::pair<double, double>> logs;
    for (const auto& [nu, err] : points)
        if (err > floor) {
            if (!(nu > 0.0) || !(err > 0.0))
                throw InvalidArgument("fit_rate: points must be positive for the log fit");
            logs.emplace_back(std::log(nu), std::log(err));
        }
    if (logs.size() < 2) throw InvalidArgument("fit_rate: insufficient points above floor");
    double n = static_cast<double>(logs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [x, y] : logs) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    RateFit f;
    f.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    f.intercept = (sy - f.slope * sx) / n;
    f.points_used = static_cast<int>(logs.size());
    return f;
}

SweepReport run_sweep(const SweepConfig& cfg) {
    cfg.validate();
    SweepReport report;
    {
        std::string text = cfg.config_text;
        if (text.empty()) {
            std::ostringstream canon;
            canon << cfg.base.nr << "," << cfg.base.nz << "," << cfg.base.R << ","
                  << cfg.base.zmin << "," << cfg.base.zmax << "," << cfg.base.T << ","
                  << cfg.nu_max << "," << cfg.factor << "," << cfg.count << ","
                  << cfg.mollify_data_n;
            text = canon.str();
        }
        report.fingerprint = config_fingerprint(text);
    }

    SimConfig euler_cfg = cfg.base;
    euler_cfg.nu = 0.0;
    for (double p : {1.0, 2.0, 4.0})
        if (std::find(euler_cfg.norm_ps.begin(), euler_cfg.norm_ps.end(), p) ==
            euler_cfg.norm_ps.end())
            euler_cfg.norm_ps.push_back(p);

    Trajectory euler = run_euler(euler_cfg);  // reference; failure fails the sweep

    if (cfg.compute_floor) {
        SimConfig fine_cfg = euler_cfg;
        fine_cfg.nr *= 2;
        fine_cfg.nz *= 2;
        Trajectory fine = run_euler(fine_cfg);
        Grid gc = euler_cfg.grid();
        for (std::size_t s = 0; s < euler.snapshots.size(); ++s) {
            ScalarField restricted = restrict_half(fine.snapshots[s], gc);
            ScalarField diff = field_difference(euler.snapshots[s], restricted);
            report.floor_p1 = std::max(report.floor_p1, lp_norm_3d(diff, 1.0));
            report.floor_p2 = std::max(report.floor_p2, lp_norm_3d(diff, 2.0));
            report.floor_p4 = std::max(report.floor_p4, lp_norm_3d(diff, 4.0));
        }
    }

    report.rows.resize(cfg.count);
    Grid g = cfg.base.grid();
    ScalarField xi0 = make_initial_field(cfg.base.init, g);

    auto run_rung = [&](int k) {
        SweepRow& row = report.rows[k];
        row.nu = cfg.nu_max * std::pow(cfg.factor, k);
        auto t0 = std::chrono::steady_clock::now();
        try {
            SimConfig c = euler_cfg;
            c.nu = row.nu;
            Trajectory ns;
            if (cfg.mollify_data_n > 0) {
                int n = mollify_index_for(c, cfg.mollify_data_n, row.nu, cfg.nu_max);
                ScalarField xim = mollify(xi0, n);
                ns = detail::run_core(c, false, nullptr, &xim).first;
            } else {
                ns = run_ns(c);
            }
            row.sup_dist_p1 = sup_t_lp_distance(ns, euler, 1.0);
            row.sup_dist_p2 = sup_t_lp_distance(ns, euler, 2.0);
            row.sup_dist_p4 = sup_t_lp_distance(ns, euler, 4.0);
            row.anom_diss = anomalous_dissipation(ns);
            TailTable tails = tail_mass_series(ns, 2.0, cfg.base.probe_radii);
            for (double v : tails.sup_over_time) row.max_tail = std::max(row.max_tail, v);
            row.energy_defect = energy_balance_defect(ns).signed_max;
        } catch (const std::exception& e) {
            row.failed = true;
            row.error = e.what();
        }
        auto t1 = std::chrono::steady_clock::now();
        row.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    };

    int width = cfg.workers > 0 ? cfg.workers
                                : static_cast<int>(std::min<unsigned>(
                                      std::max(1u, std::thread::hardware_concurrency()),
                                      static_cast<unsigned>(cfg.count)));
    width = std::min(width, cfg.count);
    if (width <= 1) {
        for (int k = 0; k < cfg.count; ++k) run_rung(k);
    } else {
        std::vector<std::thread> pool;
        std::atomic<int> next{0};
        for (int w = 0; w < width; ++w)
            pool.emplace_back([&] {
                for (int k = next.fetch_add(1); k < cfg.count; k = next.fetch_add(1))
                    run_rung(k);
            });
        for (auto& th : pool) th.join();
    }

    // Exploratory fitted slopes; no convergence rate is assumed a priori.
    for (double p : {1.0, 2.0, 4.0}) {
        std::vector<std::pair<double, double>> pts;
        for (const auto& row : report.rows)
            if (!row.failed)
                pts.emplace_back(row.nu, p == 1.0   ? row.sup_dist_p1
                                         : p == 2.0 ? row.sup_dist_p2
                                                    : row.sup_dist_p4);
        double fl = p == 1.0 ? report.floor_p1 : p == 2.0 ? report.floor_p2 : report.floor_p4;
        try {
            report.fits.emplace_back(p, fit_rate(pts, fl));
        } catch (const InvalidArgument&) {
            // not enough resolvable points; leave this exponent out
        }
    }

    if (!cfg.out_dir.empty()) {
        std::filesystem::create_directories(cfg.out_dir);
        write_sweep_csv(report, cfg.out_dir / "report.csv");

        std::vector<PlotSeries> conv(3);
        conv[0].label = "sup_t L1 distance";
        conv[1].label = "sup_t L2 distance";
        conv[2].label = "sup_t L4 distance";
        std::vector<PlotSeries> diss(1);
        diss[0].label = "D2(T)";
        for (const auto& row : report.rows) {
            if (row.failed) continue;
            if (row.sup_dist_p1 > 0) conv[0].points.emplace_back(row.nu, row.sup_dist_p1);
            if (row.sup_dist_p2 > 0) conv[1].points.emplace_back(row.nu, row.sup_dist_p2);
            if (row.sup_dist_p4 > 0) conv[2].points.emplace_back(row.nu, row.sup_dist_p4);
            if (row.anom_diss > 0) diss[0].points.emplace_back(row.nu, row.anom_diss);
        }
        PlotLabels conv_labels{"Viscous-to-inviscid distance vs viscosity", "nu",
                               "sup_t Lp distance"};
        emit_svg_lineplot(conv, AxisScale::log, AxisScale::log, cfg.out_dir / "convergence.svg",
                          conv_labels);
        PlotLabels diss_labels{"Cumulative L2 dissipation vs viscosity", "nu", "D2(T)"};
        emit_svg_lineplot(diss, AxisScale::log, AxisScale::log, cfg.out_dir / "dissipation.svg",
                          diss_labels);

        std::vector<std::vector<double>> fit_rows;
        for (const auto& [p, f] : report.fits)
            fit_rows.push_back({p, f.slope, f.intercept, static_cast<double>(f.points_used)});
        write_csv(cfg.out_dir / "fits.csv", {"p", "slope", "intercept", "points_used"},
                  fit_rows);
    }

    return report;
}

void write_sweep_csv(const SweepReport& report, const std::filesystem::path& path) {
    std::vector<std::string> header = {"nu",       "sup_dist_p1", "sup_dist_p2",
                                       "sup_dist_p4", "anom_diss",   "max_tail",
                                       "energy_defect", "wall_ms"};
    std::vector<std::vector<double>> rows;
    for (const auto& row : report.rows) {
        if (row.failed) continue;  // failed rungs carry their error in the report object
        rows.push_back({row.nu, row.sup_dist_p1, row.sup_dist_p2, row.sup_dist_p4,
                        row.anom_diss, row.max_tail, row.energy_defect, 0.0});
    }
    write_csv(path, header, rows);
}

MollifiedSplit mollified_linearization_experiment(const SimConfig& cfg, int n, double p) {
    cfg.validate();
    Grid g = cfg.grid();
    ScalarField xi0 = make_initial_field(cfg.init, g);
    ScalarField xi0_n = mollify(xi0, n);

    ScalarField force_shape =
        cfg.force.kind == ForceKind::none || cfg.force.amplitude == 0.0
            ? ScalarField(g, 0.0, FieldRole::forcing)
            : gaussian_bump(g, cfg.force.r0, cfg.force.z0, cfg.force.sigma,
                            cfg.force.amplitude);
    ScalarField force_shape_n = mollify(force_shape, n);

    detail::TwinInit twin{&xi0_n, &cfg.force, &force_shape_n};

    auto ns_pair = detail::run_core(cfg, false, &twin);
    auto euler_pair = detail::run_core(cfg, true, &twin);

    MollifiedSplit out;
    out.term_visc = sup_t_lp_distance(ns_pair.first, ns_pair.second, p);
    out.term_cross = sup_t_lp_distance(ns_pair.second, euler_pair.second, p);
    out.term_inviscid = sup_t_lp_distance(euler_pair.second, euler_pair.first, p);
    out.direct = sup_t_lp_distance(ns_pair.first, euler_pair.first, p);
    return out;
}

}  // namespace axvv
