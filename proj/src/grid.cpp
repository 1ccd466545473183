#include "axvv/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace axvv {

Grid make_grid(int nr, int nz, double R, double zmin, double zmax) {
    if (nr < 4 || nz < 4)
        throw InvalidArgument("make_grid: cell counts must be >= 4");
    if (!(R > 0.0))
        throw InvalidArgument("make_grid: empty radial extent");
    if (!(zmax > zmin))
        throw InvalidArgument("make_grid: empty axial extent");
    Grid g;
    g.nr = nr;
    g.nz = nz;
    g.R = R;
    g.zmin = zmin;
    g.zmax = zmax;
    g.dr = R / nr;
    g.dz = (zmax - zmin) / nz;
    return g;
}

double max_cell_divergence(const FaceVelocity& v) {
    const Grid& g = v.grid;
    double worst = 0.0;
    for (int i = 0; i < g.nr; ++i)
        for (int j = 0; j < g.nz; ++j) {
            double div = (v.Fr(i + 1, j) - v.Fr(i, j)) / g.dr +
                         (v.Fz(i, j + 1) - v.Fz(i, j)) / g.dz;
            worst = std::max(worst, std::abs(div));
        }
    return worst;
}

FaceSpeeds face_speeds(const FaceVelocity& v) {
    const Grid& g = v.grid;
    FaceSpeeds s;
    for (int k = 1; k <= g.nr; ++k) {  // axis face carries no flux
        double rfk = g.rf(k);
        for (int j = 0; j < g.nz; ++j)
            s.max_ur = std::max(s.max_ur, std::abs(v.Fr(k, j)) / rfk);
    }
    for (int i = 0; i < g.nr; ++i) {
        double rci = g.rc(i);
        for (int k = 0; k <= g.nz; ++k)
            s.max_uz = std::max(s.max_uz, std::abs(v.Fz(i, k)) / rci);
    }
    return s;
}

RenormFunction make_zero_renorm() {
    RenormFunction b;
    b.beta = [](double) { return 0.0; };
    b.dbeta = [](double) { return 0.0; };
    b.bound = 0.0;
    b.vanish_radius = std::numeric_limits<double>::infinity();
    b.descriptor = "zero map";
    return b;
}

RenormFunction make_smooth_clamp(double eps, double bound) {
    if (!(eps > 0.0) || !(bound > 0.0))
        throw InvalidArgument("make_smooth_clamp: eps and bound must be positive");
    const double w = eps;
    RenormFunction b;
    b.beta = [eps, bound, w](double s) {
        double a = std::abs(s) - eps;
        if (a <= 0.0) return 0.0;
        double t = a / w;
        return bound * (1.0 - std::exp(-t * t));
    };
    b.dbeta = [eps, bound, w](double s) {
        double a = std::abs(s) - eps;
        if (a <= 0.0) return 0.0;
        double t = a / w;
        double d = bound * 2.0 * t / w * std::exp(-t * t);
        return s > 0.0 ? d : -d;
    };
    b.bound = bound;
    b.vanish_radius = eps;
    b.descriptor = "smooth clamp vanishing on |s|<" + std::to_string(eps);
    return b;
}

namespace {

// Cubic Hermite on [y0,y1] with prescribed endpoint values and slopes.
double hermite(double y, double y0, double y1, double v0, double v1, double m0, double m1) {
    double h = y1 - y0;
    double t = (y - y0) / h;
    double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * v0 + (t3 - 2 * t2 + t) * h * m0 +
           (-2 * t3 + 3 * t2) * v1 + (t3 - t2) * h * m1;
}

double hermite_deriv(double y, double y0, double y1, double v0, double v1, double m0, double m1) {
    double h = y1 - y0;
    double t = (y - y0) / h;
    double t2 = t * t;
    return ((6 * t2 - 6 * t) * v0 + (3 * t2 - 4 * t + 1) * h * m0 +
            (-6 * t2 + 6 * t) * v1 + (3 * t2 - 2 * t) * h * m1) / h;
}

}  // namespace

RenormFunction make_clamped_square(double eps, double cap) {
    if (!(eps > 0.0) || !(cap > eps * eps * 2.0))
        throw InvalidArgument("make_clamped_square: need eps > 0 and cap well above eps^2");
    // In the variable y = s^2: zero below y_a, Hermite blend to the identity
    // on [y_a, y_b], exactly y on [y_b, y_c], blend to the constant cap on
    // [y_c, y_d].  Choosing y_d - y_c = 2*(cap - y_c) keeps the blend monotone.
    const double ya = 0.25 * eps * eps;
    const double yb = eps * eps;
    const double yc = 0.8 * cap;
    const double yd = yc + 2.0 * (cap - yc);
    RenormFunction b;
    b.beta = [=](double s) {
        double y = s * s;
        if (y <= ya) return 0.0;
        if (y <= yb) return hermite(y, ya, yb, 0.0, yb, 0.0, 1.0);
        if (y <= yc) return y;
        if (y <= yd) return hermite(y, yc, yd, yc, cap, 1.0, 0.0);
        return cap;
    };
    b.dbeta = [=](double s) {
        double y = s * s;
        double dy = 2.0 * s;
        if (y <= ya) return 0.0;
        if (y <= yb) return hermite_deriv(y, ya, yb, 0.0, yb, 0.0, 1.0) * dy;
        if (y <= yc) return dy;
        if (y <= yd) return hermite_deriv(y, yc, yd, yc, cap, 1.0, 0.0) * dy;
        return 0.0;
    };
    b.bound = cap;
    b.vanish_radius = 0.5 * eps;
    b.descriptor = "clamped square, exact on [" + std::to_string(eps) + ", sqrt(0.8*cap)]";
    return b;
}

double lp_norm_3d(const ScalarField& f, double p) {
    if (!(p >= 1.0))
        throw InvalidArgument("lp_norm_3d: exponent must satisfy p >= 1");
    const Grid& g = f.grid();
    if (std::isinf(p)) {
        double m = 0.0;
        for (double v : f.data()) m = std::max(m, std::abs(v));
        return m;
    }
    const double cell = g.dr * g.dz;
    double sum = 0.0;
    for (int i = 0; i < g.nr; ++i) {
        double w = g.rc(i) * cell;
        double rowsum = 0.0;
        for (int j = 0; j < g.nz; ++j)
            rowsum += std::pow(std::abs(f(i, j)), p);
        sum += w * rowsum;
    }
    return std::pow(2.0 * std::numbers::pi * sum, 1.0 / p);
}

double lp_norm_tail(const ScalarField& f, double p, double radius) {
    if (!(p >= 1.0) || std::isinf(p))
        throw InvalidArgument("lp_norm_tail: exponent must be finite and >= 1");
    if (radius < 0.0)
        throw InvalidArgument("lp_norm_tail: radius must be nonnegative");
    const Grid& g = f.grid();
    const double cell = g.dr * g.dz;
    const double rad2 = radius * radius;
    double sum = 0.0;
    for (int i = 0; i < g.nr; ++i) {
        double r = g.rc(i);
        double w = r * cell;
        for (int j = 0; j < g.nz; ++j) {
            double z = g.zc(j);
            if (r * r + z * z > rad2)
                sum += w * std::pow(std::abs(f(i, j)), p);
        }
    }
    return 2.0 * std::numbers::pi * sum;
}

ScalarField mollify(const ScalarField& f, int n) {
    if (n < 1)
        throw InvalidArgument("mollify: smoothing index must be >= 1");
    const Grid& g = f.grid();
    const double eps = 1.0 / n;
    if (eps < 2.0 * std::max(g.dr, g.dz))
        throw InvalidArgument("mollify: width 1/n not resolvable on this grid");

    const int kr = static_cast<int>(std::ceil(eps / g.dr));
    const int kz = static_cast<int>(std::ceil(eps / g.dz));

    // Raw bump weights, normalized to unit sum once.
    std::vector<double> w(static_cast<std::size_t>(2 * kr + 1) * (2 * kz + 1), 0.0);
    auto wat = [&](int di, int dj) -> double& {
        return w[static_cast<std::size_t>(di + kr) * (2 * kz + 1) + (dj + kz)];
    };
    double wsum = 0.0;
    for (int di = -kr; di <= kr; ++di)
        for (int dj = -kz; dj <= kz; ++dj) {
            double d2 = (di * g.dr) * (di * g.dr) + (dj * g.dz) * (dj * g.dz);
            double u2 = d2 / (eps * eps);
            if (u2 < 1.0) {
                double val = std::exp(-1.0 / (1.0 - u2));
                wat(di, dj) = val;
                wsum += val;
            }
        }
    for (double& v : w) v /= wsum;

    // Measure weight |r| at (possibly ghost) radial index; the mirrored
    // index -1-i carries the same |r|, so the formula is uniform.
    auto mstar = [&](int i) { return std::abs((i + 0.5) * g.dr); };

    // Per-column denominator: sum of kernel weights times measure weight.
    std::vector<double> den(g.nr, 0.0);
    for (int i = 0; i < g.nr; ++i) {
        double d = 0.0;
        for (int di = -kr; di <= kr; ++di) {
            double col = 0.0;
            for (int dj = -kz; dj <= kz; ++dj) col += wat(di, dj);
            d += col * mstar(i + di);
        }
        den[i] = d;
    }

    ScalarField out(g, 0.0, f.role());
    for (int i = 0; i < g.nr; ++i) {
        for (int j = 0; j < g.nz; ++j) {
            double num = 0.0;
            for (int di = -kr; di <= kr; ++di) {
                int si = i + di;
                double m = mstar(si);
                if (si < 0) si = -1 - si;  // even reflection across the axis
                if (si >= g.nr) continue;  // zero extension outward
                for (int dj = -kz; dj <= kz; ++dj) {
                    int sj = j + dj;
                    if (sj < 0 || sj >= g.nz) continue;  // zero extension
                    num += wat(di, dj) * m * f(si, sj);
                }
            }
            out(i, j) = num / den[i];
        }
    }
    return out;
}

ScalarField gaussian_bump(const Grid& g, double r0, double z0, double sigma, double amplitude) {
    if (!(sigma > 0.0))
        throw InvalidArgument("gaussian_bump: sigma must be positive");
    ScalarField f(g);
    const double inv2s2 = 1.0 / (2.0 * sigma * sigma);
    for (int i = 0; i < g.nr; ++i) {
        double r = g.rc(i);
        for (int j = 0; j < g.nz; ++j) {
            double z = g.zc(j);
            double d2 = (r - r0) * (r - r0) + (z - z0) * (z - z0);
            f(i, j) = amplitude * std::exp(-d2 * inv2s2);
        }
    }
    return f;
}

ScalarField apply_renorm(const ScalarField& f, const RenormFunction& beta) {
    ScalarField out(f.grid(), 0.0, f.role());
    auto src = f.data();
    auto dst = out.data();
    for (std::size_t k = 0; k < src.size(); ++k) dst[k] = beta.beta(src[k]);
    return out;
}

ScalarField field_difference(const ScalarField& a, const ScalarField& b) {
    if (!(a.grid() == b.grid()))
        throw InvalidArgument("field_difference: grids do not match");
    ScalarField out(a.grid());
    auto pa = a.data(), pb = b.data();
    auto pd = out.data();
    for (std::size_t k = 0; k < pa.size(); ++k) pd[k] = pa[k] - pb[k];
    return out;
}

bool field_all_finite(const ScalarField& f) {
    for (double v : f.data())
        if (!std::isfinite(v)) return false;
    return true;
}

}  // namespace axvv
