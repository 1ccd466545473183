#include "axvv/biot_savart.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace axvv {

namespace {

// --- geometric multigrid for the corner-based streamfunction operator ---
//
// L psi = rf_i * [ (psi_E - psi_C)/rm_p - (psi_C - psi_W)/rm_m ] / dr^2
//         + (psi_N - 2 psi_C + psi_S) / dz^2
// with rf_i = i*dr, rm_{p,m} = (i +- 1/2)*dr.  This flux form equals the
// five-point discretization of d^2_r - (1/r) d_r + d^2_z and keeps the
// matrix symmetrizable by the diagonal weight 1/rf_i.

struct MgLevel {
    int nr = 0, nz = 0;  // cells; corner arrays are (nr+1) x (nz+1)
    double dr = 0.0, dz = 0.0;
    std::vector<double> u, rhs, res;

    std::size_t idx(int i, int j) const { return static_cast<std::size_t>(i) * (nz + 1) + j; }
    void alloc() {
        std::size_t n = static_cast<std::size_t>(nr + 1) * (nz + 1);
        u.assign(n, 0.0);
        rhs.assign(n, 0.0);
        res.assign(n, 0.0);
    }
};

struct StencilRow {
    double aE, aW, aN, aS, diag;
};

inline StencilRow stencil(const MgLevel& L, int i) {
    double rf = i * L.dr;
    double rmp = (i + 0.5) * L.dr;
    double rmm = (i - 0.5) * L.dr;
    StencilRow s;
    s.aE = rf / (rmp * L.dr * L.dr);
    s.aW = rf / (rmm * L.dr * L.dr);
    s.aN = 1.0 / (L.dz * L.dz);
    s.aS = s.aN;
    s.diag = -(s.aE + s.aW) - 2.0 * s.aN;
    return s;
}

void smooth_rb(MgLevel& L, int sweeps) {
    for (int s = 0; s < sweeps; ++s) {
        for (int color = 0; color < 2; ++color) {
            for (int i = 1; i < L.nr; ++i) {
                StencilRow st = stencil(L, i);
                int jstart = 1 + ((i + 1 + color) & 1);
                for (int j = jstart; j < L.nz; j += 2) {
                    std::size_t c = L.idx(i, j);
                    double nb = st.aE * L.u[c + L.nz + 1] + st.aW * L.u[c - (L.nz + 1)] +
                                st.aN * L.u[c + 1] + st.aS * L.u[c - 1];
                    L.u[c] = (L.rhs[c] - nb) / st.diag;
                }
            }
        }
    }
}

double residual(MgLevel& L) {
    double worst = 0.0;
    for (int i = 1; i < L.nr; ++i) {
        StencilRow st = stencil(L, i);
        for (int j = 1; j < L.nz; ++j) {
            std::size_t c = L.idx(i, j);
            double lu = st.aE * L.u[c + L.nz + 1] + st.aW * L.u[c - (L.nz + 1)] +
                        st.aN * L.u[c + 1] + st.aS * L.u[c - 1] + st.diag * L.u[c];
            double r = L.rhs[c] - lu;
            L.res[c] = r;
            worst = std::max(worst, std::abs(r));
        }
    }
    return worst;
}

void restrict_residual(const MgLevel& fine, MgLevel& coarse) {
    std::fill(coarse.rhs.begin(), coarse.rhs.end(), 0.0);
    for (int I = 1; I < coarse.nr; ++I) {
        int i = 2 * I;
        for (int J = 1; J < coarse.nz; ++J) {
            int j = 2 * J;
            auto rs = [&](int a, int b) { return fine.res[fine.idx(a, b)]; };
            coarse.rhs[coarse.idx(I, J)] =
                (4.0 * rs(i, j) +
                 2.0 * (rs(i + 1, j) + rs(i - 1, j) + rs(i, j + 1) + rs(i, j - 1)) +
                 rs(i + 1, j + 1) + rs(i + 1, j - 1) + rs(i - 1, j + 1) + rs(i - 1, j - 1)) /
                16.0;
        }
    }
}

void prolongate_add(const MgLevel& coarse, MgLevel& fine) {
    for (int I = 0; I < coarse.nr; ++I) {
        for (int J = 0; J < coarse.nz; ++J) {
            double c00 = coarse.u[coarse.idx(I, J)];
            double c10 = coarse.u[coarse.idx(I + 1, J)];
            double c01 = coarse.u[coarse.idx(I, J + 1)];
            double c11 = coarse.u[coarse.idx(I + 1, J + 1)];
            int i = 2 * I, j = 2 * J;
            fine.u[fine.idx(i, j)] += c00;
            fine.u[fine.idx(i + 1, j)] += 0.5 * (c00 + c10);
            fine.u[fine.idx(i, j + 1)] += 0.5 * (c00 + c01);
            fine.u[fine.idx(i + 1, j + 1)] += 0.25 * (c00 + c10 + c01 + c11);
        }
    }
    // Dirichlet boundaries stay pinned at zero correction.
    for (int j = 0; j <= fine.nz; ++j) {
        fine.u[fine.idx(0, j)] = 0.0;
        fine.u[fine.idx(fine.nr, j)] = 0.0;
    }
    for (int i = 0; i <= fine.nr; ++i) {
        fine.u[fine.idx(i, 0)] = 0.0;
        fine.u[fine.idx(i, fine.nz)] = 0.0;
    }
}

void vcycle(std::vector<MgLevel>& levels, std::size_t l) {
    if (l + 1 == levels.size()) {
        smooth_rb(levels[l], 60);
        return;
    }
    smooth_rb(levels[l], 2);
    residual(levels[l]);
    restrict_residual(levels[l], levels[l + 1]);
    std::fill(levels[l + 1].u.begin(), levels[l + 1].u.end(), 0.0);
    vcycle(levels, l + 1);
    prolongate_add(levels[l + 1], levels[l]);
    smooth_rb(levels[l], 2);
}

}  // namespace

Streamfunction solve_streamfunction(const ScalarField& xi, const StreamfunctionOptions& opts,
                                    const Streamfunction* warm_start) {
    const Grid& g = xi.grid();
    if (!field_all_finite(xi))
        throw InvalidArgument("solve_streamfunction: non-finite vorticity input");

    std::vector<MgLevel> levels;
    {
        MgLevel top;
        top.nr = g.nr;
        top.nz = g.nz;
        top.dr = g.dr;
        top.dz = g.dz;
        levels.push_back(top);
        while (levels.back().nr % 2 == 0 && levels.back().nz % 2 == 0 &&
               levels.back().nr >= 8 && levels.back().nz >= 8) {
            MgLevel next;
            next.nr = levels.back().nr / 2;
            next.nz = levels.back().nz / 2;
            next.dr = levels.back().dr * 2.0;
            next.dz = levels.back().dz * 2.0;
            levels.push_back(next);
        }
        for (auto& L : levels) L.alloc();
    }

    MgLevel& top = levels.front();

    // RHS = -r^2 xi = -r * omega at interior corners.  Averaging omega = r*xi
    // (bounded and smooth up to the axis) keeps the interpolation second
    // order even when xi itself grows like 1/r toward the axis.
    double bnorm = 0.0;
    for (int i = 1; i < g.nr; ++i) {
        double rf = g.rf(i);
        double rm = g.rc(i - 1), rp = g.rc(i);
        for (int j = 1; j < g.nz; ++j) {
            double oc = 0.25 * (rm * (xi(i - 1, j - 1) + xi(i - 1, j)) +
                                rp * (xi(i, j - 1) + xi(i, j)));
            double v = -rf * oc;
            top.rhs[top.idx(i, j)] = v;
            bnorm = std::max(bnorm, std::abs(v));
        }
    }

    Streamfunction out(g);
    if (bnorm == 0.0) return out;  // zero data -> zero streamfunction

    if (warm_start && warm_start->grid == g) top.u = warm_start->psi;

    double res = 0.0;
    for (int cycle = 0; cycle < opts.max_cycles; ++cycle) {
        vcycle(levels, 0);
        res = residual(top);
        if (res <= opts.rtol * bnorm) {
            out.psi = top.u;
            return out;
        }
    }
    throw SolverError("solve_streamfunction: multigrid failed to reach tolerance", res);
}

FaceVelocity velocity_from_streamfunction(const Streamfunction& psi) {
    const Grid& g = psi.grid;
    FaceVelocity v(g);
    for (int k = 0; k <= g.nr; ++k)
        for (int j = 0; j < g.nz; ++j)
            v.Fr(k, j) = -(psi.at(k, j + 1) - psi.at(k, j)) / g.dz;
    for (int i = 0; i < g.nr; ++i)
        for (int k = 0; k <= g.nz; ++k)
            v.Fz(i, k) = (psi.at(i + 1, k) - psi.at(i, k)) / g.dr;
    return v;
}

double boundary_tangential_speed(const FaceVelocity& v) {
    const Grid& g = v.grid;
    double worst = 0.0;
    // u_z along the outer radial boundary (outermost cell column).
    double rc_last = g.rc(g.nr - 1);
    for (int k = 0; k <= g.nz; ++k)
        worst = std::max(worst, std::abs(v.Fz(g.nr - 1, k)) / rc_last);
    // u_r along both axial boundaries (outermost face rows).
    for (int k = 1; k <= g.nr; ++k) {
        double rf = g.rf(k);
        worst = std::max(worst, std::abs(v.Fr(k, 0)) / rf);
        worst = std::max(worst, std::abs(v.Fr(k, g.nz - 1)) / rf);
    }
    return worst;
}

VelocitySampler::VelocitySampler(const FaceVelocity& v) : grid_(v.grid) {
    const Grid& g = grid_;
    ur_.assign(static_cast<std::size_t>(g.nr + 1) * g.nz, 0.0);
    uz_.assign(static_cast<std::size_t>(g.nr) * (g.nz + 1), 0.0);
    for (int k = 1; k <= g.nr; ++k)
        for (int j = 0; j < g.nz; ++j)
            ur_[static_cast<std::size_t>(k) * g.nz + j] = v.Fr(k, j) / g.rf(k);
    for (int i = 0; i < g.nr; ++i)
        for (int k = 0; k <= g.nz; ++k)
            uz_[static_cast<std::size_t>(i) * (g.nz + 1) + k] = v.Fz(i, k) / g.rc(i);
}

double VelocitySampler::ur(double r, double z) const {
    const Grid& g = grid_;
    double sign = 1.0;
    if (r < 0.0) {
        r = -r;  // u_r is odd across the axis
        sign = -1.0;
    }
    double x = r / g.dr;
    int k = std::clamp(static_cast<int>(std::floor(x)), 0, g.nr - 1);
    double fx = std::clamp(x - k, 0.0, 1.0);
    double y = (z - g.zmin) / g.dz - 0.5;
    int j = std::clamp(static_cast<int>(std::floor(y)), 0, g.nz - 2);
    double fy = std::clamp(y - j, 0.0, 1.0);
    auto at = [&](int kk, int jj) { return ur_[static_cast<std::size_t>(kk) * g.nz + jj]; };
    double val = (1 - fx) * ((1 - fy) * at(k, j) + fy * at(k, j + 1)) +
                 fx * ((1 - fy) * at(k + 1, j) + fy * at(k + 1, j + 1));
    return sign * val;
}

double VelocitySampler::uz(double r, double z) const {
    const Grid& g = grid_;
    if (r < 0.0) r = -r;  // u_z is even across the axis
    double x = r / g.dr - 0.5;
    int i = std::clamp(static_cast<int>(std::floor(x)), 0, g.nr - 2);
    double fx = std::clamp(x - i, 0.0, 1.0);
    double y = (z - g.zmin) / g.dz;
    int k = std::clamp(static_cast<int>(std::floor(y)), 0, g.nz - 1);
    double fy = std::clamp(y - k, 0.0, 1.0);
    auto at = [&](int ii, int kk) { return uz_[static_cast<std::size_t>(ii) * (g.nz + 1) + kk]; };
    return (1 - fx) * ((1 - fy) * at(i, k) + fy * at(i, k + 1)) +
           fx * ((1 - fy) * at(i + 1, k) + fy * at(i + 1, k + 1));
}

namespace {

// Shared cosine tables for the periodic trapezoid rule, per node count.
const std::vector<double>& cos_table(int n) {
    thread_local std::vector<std::pair<int, std::vector<double>>> cache;
    for (auto& e : cache)
        if (e.first == n) return e.second;
    std::vector<double> t(n);
    for (int m = 0; m < n; ++m) t[m] = std::cos(2.0 * std::numbers::pi * m / n);
    cache.emplace_back(n, std::move(t));
    return cache.back().second;
}

// Integrals A = int dphi / D^{3/2} and B = int cos(phi) dphi / D^{3/2}
// with D = a - b cos(phi), evaluated by the periodic trapezoid rule with
// node doubling until the relative change drops below tol.
struct AzimuthalAB {
    double A = 0.0, B = 0.0;
};

AzimuthalAB azimuthal_ab(double a, double b, const DirectQuadOptions& opts) {
    auto raw_sums = [&](int n, bool odd_only, double& SA, double& SB) {
        const auto& ct = cos_table(n);
        SA = 0.0;
        SB = 0.0;
        int start = odd_only ? 1 : 0;
        int step = odd_only ? 2 : 1;
        for (int m = start; m < n; m += step) {
            double c = ct[m];
            double d = a - b * c;
            double inv = 1.0 / (d * std::sqrt(d));
            SA += inv;
            SB += c * inv;
        }
    };

    int n = opts.base_nodes;
    double SA, SB;
    raw_sums(n, false, SA, SB);
    double A = SA * (2.0 * std::numbers::pi / n);
    double B = SB * (2.0 * std::numbers::pi / n);
    while (n < opts.max_nodes) {
        int n2 = 2 * n;
        double SA_odd, SB_odd;
        raw_sums(n2, true, SA_odd, SB_odd);
        SA += SA_odd;
        SB += SB_odd;
        double A2 = SA * (2.0 * std::numbers::pi / n2);
        double B2 = SB * (2.0 * std::numbers::pi / n2);
        double change = std::abs(A2 - A) + std::abs(B2 - B);
        double scale = std::abs(A2) + std::abs(B2);
        A = A2;
        B = B2;
        n = n2;
        if (change <= opts.tol * scale + 1e-300) return {A, B};
    }
    throw SolverError("biot_savart_direct: azimuthal quadrature did not converge",
                      std::abs(A) + std::abs(B));
}

Vec2 direct_velocity_at(const ScalarField& xi, double r, double z, const DirectQuadOptions& opts,
                        double exclusion) {
    const Grid& g = xi.grid();
    const double cell = g.dr * g.dz;
    const double excl2 = exclusion * exclusion;
    double ur = 0.0, uz = 0.0;
    for (int i = 0; i < g.nr; ++i) {
        double rho = g.rc(i);
        for (int j = 0; j < g.nz; ++j) {
            double w = xi(i, j);
            if (w == 0.0) continue;
            double zeta = g.zc(j);
            double dzp = z - zeta;
            double dplane2 = (r - rho) * (r - rho) + dzp * dzp;
            if (dplane2 < excl2) continue;
            double a = r * r + rho * rho + dzp * dzp;
            double b = 2.0 * r * rho;
            AzimuthalAB ab = azimuthal_ab(a, b, opts);
            double omega_meas = w * rho * rho * cell;  // omega = r*xi times cell area
            ur += omega_meas * dzp * ab.B;
            uz += omega_meas * (rho * ab.A - r * ab.B);
        }
    }
    double c = 1.0 / (4.0 * std::numbers::pi);
    return {c * ur, c * uz};
}

}  // namespace

std::vector<Vec2> biot_savart_direct(const ScalarField& xi,
                                     const std::vector<std::pair<double, double>>& points,
                                     const DirectQuadOptions& opts) {
    const Grid& g = xi.grid();
    for (std::size_t k = 0; k < points.size(); ++k) {
        auto [r, z] = points[k];
        if (!(r > 0.0) || r >= g.R || z <= g.zmin || z >= g.zmax)
            throw InvalidArgument("biot_savart_direct: point " + std::to_string(k) +
                                  " is outside the grid or on the axis");
        // Distance to the nearest cell centers; the integrand is singular there.
        double mind = std::numeric_limits<double>::infinity();
        int i0 = std::clamp(static_cast<int>(std::floor(r / g.dr - 0.5)), 0, g.nr - 1);
        int j0 = std::clamp(static_cast<int>(std::floor((z - g.zmin) / g.dz - 0.5)), 0, g.nz - 1);
        for (int i = std::max(0, i0 - 1); i <= std::min(g.nr - 1, i0 + 2); ++i)
            for (int j = std::max(0, j0 - 1); j <= std::min(g.nz - 1, j0 + 2); ++j)
                mind = std::min(mind, std::hypot(r - g.rc(i), z - g.zc(j)));
        if (mind < 0.5 * g.dr)
            throw InvalidArgument("biot_savart_direct: point " + std::to_string(k) +
                                  " is closer than dr/2 to a source cell center");
    }
    std::vector<Vec2> out;
    out.reserve(points.size());
    for (const auto& [r, z] : points) out.push_back(direct_velocity_at(xi, r, z, opts, 0.0));
    return out;
}

std::pair<Vec2, Vec2> kernel_split_probe(const ScalarField& xi, int ip, int jp, double cutoff) {
    const Grid& g = xi.grid();
    const double cell = g.dr * g.dz;
    const double rp = g.rc(ip), zp = g.zc(jp);
    const double excl = 0.5 * g.dr;
    DirectQuadOptions opts;
    Vec2 near, far;
    for (int i = 0; i < g.nr; ++i) {
        double rho = g.rc(i);
        for (int j = 0; j < g.nz; ++j) {
            double w = xi(i, j);
            if (w == 0.0) continue;
            double zeta = g.zc(j);
            double dzp = zp - zeta;
            double dplane = std::hypot(rp - rho, dzp);
            if (dplane < excl) continue;  // source-cell exclusion radius
            double a = rp * rp + rho * rho + dzp * dzp;
            double b = 2.0 * rp * rho;
            AzimuthalAB ab = azimuthal_ab(a, b, opts);
            double omega_meas = w * rho * rho * cell;
            double cur = omega_meas * dzp * ab.B;
            double cuz = omega_meas * (rho * ab.A - rp * ab.B);
            Vec2& dst = (dplane <= cutoff) ? near : far;
            dst.ur += cur;
            dst.uz += cuz;
        }
    }
    double c = 1.0 / (4.0 * std::numbers::pi);
    near.ur *= c;
    near.uz *= c;
    far.ur *= c;
    far.uz *= c;
    return {near, far};
}

KernelSplitNorms kernel_split_norms(const ScalarField& xi, double cutoff, int probe_stride) {
    if (!(cutoff > 0.0))
        throw InvalidArgument("kernel_split_norms: cutoff must be positive");
    const Grid& g = xi.grid();
    int stride = probe_stride;
    if (stride <= 0) {
        stride = 1;
        while ((g.nr / stride) * (g.nz / stride) > 4096) ++stride;
    }
    const double cell = g.dr * g.dz;
    const double excl = 0.5 * g.dr;
    DirectQuadOptions opts;

    // The azimuthal integrals depend on (r_probe, r_source, |z offset|) only,
    // so one table serves every probe row.
    int npr = 0;
    for (int ip = stride / 2; ip < g.nr; ip += stride) ++npr;
    std::vector<AzimuthalAB> table(static_cast<std::size_t>(npr) * g.nr * g.nz);
    {
        int pi = 0;
        for (int ip = stride / 2; ip < g.nr; ip += stride, ++pi) {
            double rp = g.rc(ip);
            for (int i = 0; i < g.nr; ++i) {
                double rho = g.rc(i);
                double b = 2.0 * rp * rho;
                for (int dj = 0; dj < g.nz; ++dj) {
                    double dzp = dj * g.dz;
                    double dplane = std::hypot(rp - rho, dzp);
                    if (dplane < excl) continue;  // excluded pairs never read
                    double a = rp * rp + rho * rho + dzp * dzp;
                    table[(static_cast<std::size_t>(pi) * g.nr + i) * g.nz + dj] =
                        azimuthal_ab(a, b, opts);
                }
            }
        }
    }

    KernelSplitNorms out;
    const double c4pi = 1.0 / (4.0 * std::numbers::pi);
    int pi = 0;
    for (int ip = stride / 2; ip < g.nr; ip += stride, ++pi) {
        double rp = g.rc(ip);
        for (int jp = stride / 2; jp < g.nz; jp += stride) {
            double zp = g.zc(jp);
            Vec2 near, far;
            for (int i = 0; i < g.nr; ++i) {
                double rho = g.rc(i);
                for (int j = 0; j < g.nz; ++j) {
                    double w = xi(i, j);
                    if (w == 0.0) continue;
                    double dzp = zp - g.zc(j);
                    double dplane = std::hypot(rp - rho, dzp);
                    if (dplane < excl) continue;
                    const AzimuthalAB& ab =
                        table[(static_cast<std::size_t>(pi) * g.nr + i) * g.nz +
                              std::abs(jp - j)];
                    double omega_meas = w * rho * rho * cell;
                    double cur = omega_meas * dzp * ab.B;
                    double cuz = omega_meas * (rho * ab.A - rp * ab.B);
                    Vec2& dst = (dplane <= cutoff) ? near : far;
                    dst.ur += cur;
                    dst.uz += cuz;
                }
            }
            double s1 = std::hypot(near.ur, near.uz) * c4pi;
            double s2 = std::hypot(far.ur, far.uz) * c4pi;
            out.u1_l1 += s1 * stride * g.dr * stride * g.dz;
            out.u2_linf = std::max(out.u2_linf, s2);
        }
    }
    return out;
}

}  // namespace axvv
