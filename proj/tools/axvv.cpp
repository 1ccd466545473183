// axvv: axisymmetric swirl-free vorticity laboratory.
//
// Subcommands:
//   run <config>     single simulation: snapshots + budget CSV
//   sweep <config>   Euler reference + viscosity ladder: report CSV + SVG plots
//   validate         built-in analytic checks; exit 1 on failure
//   plot <csv>       re-render the sweep SVGs from a report CSV

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "axvv/biot_savart.hpp"
#include "axvv/config.hpp"
#include "axvv/diagnostics.hpp"
#include "axvv/euler_solver.hpp"
#include "axvv/io.hpp"
#include "axvv/ns_solver.hpp"
#include "axvv/sweep.hpp"

using namespace axvv;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string p_tag(double p) {
    std::ostringstream ss;
    ss << "p" << p;
    return ss.str();
}

int cmd_run(const std::string& config_path) {
    RunConfig rc = run_config_from_text(read_file(config_path));
    std::filesystem::path out = rc.out_dir.empty() ? "axvv_out" : rc.out_dir;
    std::filesystem::create_directories(out);

    Trajectory traj =
        rc.solver == SolverChoice::euler ? run_euler(rc.sim) : run_ns(rc.sim);

    for (std::size_t s = 0; s < traj.snapshots.size(); ++s) {
        char name[32];
        std::snprintf(name, sizeof(name), "snapshot_%03zu.bin", s);
        write_snapshot(traj.snapshots[s], traj.sample_times[s], out / name);
    }

    const BudgetSeries& b = traj.budgets;
    std::vector<std::string> header = {"t"};
    for (double p : b.ps) {
        header.push_back("norm_" + p_tag(p));
        header.push_back("diss_" + p_tag(p));
        header.push_back("work_" + p_tag(p));
        header.push_back("gnorm_" + p_tag(p));
    }
    header.push_back("norm_inf");
    std::vector<std::vector<double>> rows;
    for (std::size_t s = 0; s < b.times.size(); ++s) {
        std::vector<double> row = {b.times[s]};
        for (std::size_t k = 0; k < b.ps.size(); ++k) {
            row.push_back(b.norm[k][s]);
            row.push_back(b.diss_cum[k][s]);
            row.push_back(b.work_cum[k][s]);
            row.push_back(b.gnorm_cum[k][s]);
        }
        row.push_back(b.norm_inf[s]);
        rows.push_back(std::move(row));
    }
    write_csv(out / "budgets.csv", header, rows);

    TailTable tails = tail_mass_series(traj, 2.0, rc.sim.probe_radii);
    {
        std::vector<std::string> th = {"t"};
        for (double r : tails.radii) {
            std::ostringstream ss;
            ss << "tail_r" << r;
            th.push_back(ss.str());
        }
        std::vector<std::vector<double>> trows;
        for (std::size_t s = 0; s < tails.times.size(); ++s) {
            std::vector<double> row = {tails.times[s]};
            for (std::size_t r = 0; r < tails.radii.size(); ++r)
                row.push_back(tails.value[r][s]);
            trows.push_back(std::move(row));
        }
        write_csv(out / "tails.csv", th, trows);
    }

    std::printf("run complete: %ld steps, %zu snapshots in %s\n", traj.steps,
                traj.snapshots.size(), out.string().c_str());
    std::printf("  max scaled divergence     %.3e\n", traj.max_divergence_scaled);
    std::printf("  boundary tangential / |u| %.3e\n", traj.max_boundary_tangential_rel);
    if (traj.feet_outside > 0)
        std::printf("  backtrace feet outside    %ld\n", traj.feet_outside);
    return 0;
}

int cmd_sweep(const std::string& config_path) {
    SweepConfig sc = sweep_config_from_text(read_file(config_path));
    if (sc.out_dir.empty()) sc.out_dir = "axvv_out";
    SweepReport report = run_sweep(sc);

    std::printf("sweep fingerprint %s\n", report.fingerprint.c_str());
    std::printf("resolution floor (Euler h vs h/2): L1 %.3e  L2 %.3e  L4 %.3e\n",
                report.floor_p1, report.floor_p2, report.floor_p4);
    std::printf("%12s %12s %12s %12s %12s %12s %12s %9s\n", "nu", "sup_dist_p1",
                "sup_dist_p2", "sup_dist_p4", "anom_diss", "max_tail", "energy_def",
                "wall_ms");
    bool any_failed = false;
    for (const auto& row : report.rows) {
        if (row.failed) {
            std::printf("%12.5e FAILED: %s\n", row.nu, row.error.c_str());
            any_failed = true;
            continue;
        }
        const char* limited =
            (report.floor_p2 > 0.0 && row.sup_dist_p2 <= report.floor_p2)
                ? "  [resolution-limited]"
                : "";
        std::printf("%12.5e %12.5e %12.5e %12.5e %12.5e %12.5e %12.5e %9.1f%s\n", row.nu,
                    row.sup_dist_p1, row.sup_dist_p2, row.sup_dist_p4, row.anom_diss,
                    row.max_tail, row.energy_defect, row.wall_ms, limited);
    }
    for (const auto& [p, fit] : report.fits)
        std::printf("fitted slope p=%g: %.3f (intercept %.3f, %d points above floor)\n", p,
                    fit.slope, fit.intercept, fit.points_used);
    std::printf("artifacts in %s (timings go to stdout only; the CSV is byte-reproducible)\n",
                sc.out_dir.string().c_str());
    return any_failed ? 1 : 0;
}

int cmd_plot(const std::string& csv_path, std::string out_dir) {
    auto [header, rows] = read_csv(csv_path);
    const std::vector<std::string> expected = {"nu",        "sup_dist_p1", "sup_dist_p2",
                                               "sup_dist_p4", "anom_diss",   "max_tail",
                                               "energy_defect", "wall_ms"};
    if (header != expected) throw ConfigError("plot: '" + csv_path + "' is not a sweep report");
    if (out_dir.empty()) out_dir = std::filesystem::path(csv_path).parent_path().string();
    std::filesystem::path out = out_dir.empty() ? "." : out_dir;
    std::filesystem::create_directories(out);

    std::vector<PlotSeries> conv(3);
    conv[0].label = "sup_t L1 distance";
    conv[1].label = "sup_t L2 distance";
    conv[2].label = "sup_t L4 distance";
    std::vector<PlotSeries> diss(1);
    diss[0].label = "D2(T)";
    for (const auto& row : rows) {
        if (row.size() < 8) continue;
        for (int c = 0; c < 3; ++c)
            if (row[1 + c] > 0) conv[c].points.emplace_back(row[0], row[1 + c]);
        if (row[4] > 0) diss[0].points.emplace_back(row[0], row[4]);
    }
    emit_svg_lineplot(conv, AxisScale::log, AxisScale::log, out / "convergence.svg",
                      {"Viscous-to-inviscid distance vs viscosity", "nu", "sup_t Lp distance"});
    emit_svg_lineplot(diss, AxisScale::log, AxisScale::log, out / "dissipation.svg",
                      {"Cumulative L2 dissipation vs viscosity", "nu", "D2(T)"});
    std::printf("plots written to %s\n", out.string().c_str());
    return 0;
}

// --- built-in analytic validation suite ---

double heat6(double r, double z, double t, double nu, double sig) {
    double S = sig * sig + 2.0 * nu * t;
    return std::pow(sig * sig / S, 3.0) * std::exp(-(r * r + z * z) / (2.0 * S));
}

double validate_diffusion_error(int nr, int nz) {
    const double nu = 0.01, sig = 0.5, T = 1.0;
    Grid g = make_grid(nr, nz, 4.0, -4.0, 4.0);
    ScalarField xi = gaussian_bump(g, 0.0, 0.0, sig, 1.0);
    ScalarField gz(g);
    FaceVelocity v0(g);
    double t = 0.0;
    while (t < T - 1e-12) {
        double dt = cfl_dt(v0, nu, g, 0.4, DiffusionTreatment::explicit_cfl, T - t);
        xi = step_ns(xi, v0, nu, gz, dt);
        t += dt;
    }
    ScalarField exact(g);
    for (int i = 0; i < g.nr; ++i)
        for (int j = 0; j < g.nz; ++j) exact(i, j) = heat6(g.rc(i), g.zc(j), T, nu, sig);
    return lp_norm_3d(field_difference(xi, exact), 2.0) / lp_norm_3d(exact, 2.0);
}

double validate_translation_error(int nr) {
    Grid g = make_grid(nr, 2 * nr, 4.0, -4.0, 4.0);
    Streamfunction psi(g);
    for (int i = 0; i <= g.nr; ++i)
        for (int j = 0; j <= g.nz; ++j) psi.at(i, j) = 0.5 * g.rf(i) * g.rf(i);
    FaceVelocity v = velocity_from_streamfunction(psi);
    ScalarField xi = gaussian_bump(g, 1.0, -1.0, 0.5, 1.0);
    ScalarField gz(g);
    double t = 0.0;
    while (t < 1.0 - 1e-12) {
        double dt = cfl_dt(v, 0.0, g, 0.4, DiffusionTreatment::explicit_cfl, 1.0 - t);
        xi = step_ns(xi, v, 0.0, gz, dt);
        t += dt;
    }
    ScalarField shifted = gaussian_bump(g, 1.0, 0.0, 0.5, 1.0);
    return lp_norm_3d(field_difference(xi, shifted), 1.0);
}

double validate_manufactured_error(int n) {
    Grid g = make_grid(n, n, 2.0, -1.0, 1.0);
    double Lz = g.zmax - g.zmin;
    double k = M_PI / Lz;
    ScalarField xi(g);
    for (int i = 0; i < g.nr; ++i)
        for (int j = 0; j < g.nz; ++j) {
            double r = g.rc(i), z = g.zc(j);
            double rho = r * r * (g.R - r) * (g.R - r);
            double S = std::sin(k * (z - g.zmin));
            xi(i, j) = -S * ((8 * r * r - 6 * g.R * r) - k * k * rho) / (r * r);
        }
    Streamfunction psi = solve_streamfunction(xi);
    double err2 = 0.0;
    for (int i = 1; i < g.nr; ++i)
        for (int j = 1; j < g.nz; ++j) {
            double r = g.rf(i), z = g.zf(j);
            double exact = r * r * (g.R - r) * (g.R - r) * std::sin(k * (z - g.zmin));
            double d = psi.at(i, j) - exact;
            err2 += d * d;
        }
    return std::sqrt(err2 * g.dr * g.dz);
}

int cmd_validate() {
    int failures = 0;
    auto report = [&](const char* name, bool ok, const std::string& detail) {
        std::printf("[%s] %-34s %s\n", ok ? "PASS" : "FAIL", name, detail.c_str());
        if (!ok) ++failures;
    };
    char buf[160];

    {
        double e64 = validate_diffusion_error(64, 128);
        double e128 = validate_diffusion_error(128, 256);
        double ratio = e64 / e128;
        std::snprintf(buf, sizeof(buf), "rel L2 err %.3e (<= 2e-3), order ratio %.2f in [3.2,4.8]",
                      e128, ratio);
        report("diffusion Gaussian vs exact kernel", e128 <= 2e-3 && ratio >= 3.2 && ratio <= 4.8,
               buf);
    }
    {
        double e64 = validate_translation_error(64);
        double e128 = validate_translation_error(128);
        std::snprintf(buf, sizeof(buf), "L1 err %.3e -> %.3e, ratio %.2f (>= 1.7)", e64, e128,
                      e64 / e128);
        report("rigid translation vs shift oracle", e64 / e128 >= 1.7, buf);
    }
    {
        double e32 = validate_manufactured_error(32);
        double e64 = validate_manufactured_error(64);
        double ratio = e32 / e64;
        std::snprintf(buf, sizeof(buf), "L2 err %.3e, order ratio %.2f in [3.2,4.8]", e64, ratio);
        report("manufactured streamfunction solve", ratio >= 3.2 && ratio <= 4.8, buf);
    }
    {
        Grid g = make_grid(64, 128, 4.0, -4.0, 4.0);
        ScalarField xi = gaussian_bump(g, 1.0, 0.0, 0.5, 1.0);
        Streamfunction psi = solve_streamfunction(xi);
        FaceVelocity v = velocity_from_streamfunction(psi);
        double psimax = 0.0;
        for (double x : psi.psi) psimax = std::max(psimax, std::abs(x));
        double scaled = max_cell_divergence(v) * g.dr * g.dz / psimax;
        std::snprintf(buf, sizeof(buf), "max scaled divergence %.3e (<= 1e-13)", scaled);
        report("discrete incompressibility", scaled <= 1e-13, buf);
    }
    return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"axisymmetric swirl-free vorticity laboratory"};
    app.require_subcommand(1);

    std::string run_config, sweep_config, plot_csv, plot_out;
    CLI::App* run = app.add_subcommand("run", "single simulation from a config file");
    run->add_option("config", run_config, "flat key = value config file")->required();
    CLI::App* sweep = app.add_subcommand("sweep", "vanishing-viscosity sweep from a config file");
    sweep->add_option("config", sweep_config, "flat key = value config file")->required();
    CLI::App* validate = app.add_subcommand("validate", "built-in analytic checks");
    CLI::App* plot = app.add_subcommand("plot", "re-render SVGs from a sweep report CSV");
    plot->add_option("csv", plot_csv, "report.csv from a sweep")->required();
    plot->add_option("--out", plot_out, "output directory (default: beside the CSV)");

    try {
        app.parse(argc, argv);
        if (*run) return cmd_run(run_config);
        if (*sweep) return cmd_sweep(sweep_config);
        if (*validate) return cmd_validate();
        if (*plot) return cmd_plot(plot_csv, plot_out);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
