#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "axvv/grid.hpp"
#include "oracle_quadrature.hpp"

using namespace axvv;

namespace {

double weighted_mass(const ScalarField& f) {
    const Grid& g = f.grid();
    double s = 0.0;
    for (int i = 0; i < g.nr; ++i)
        for (int j = 0; j < g.nz; ++j) s += f(i, j) * g.rc(i);
    return 2.0 * std::numbers::pi * s * g.dr * g.dz;
}

}  // namespace

TEST_CASE("make_grid basic geometry") {
    Grid g = make_grid(4, 4, 1.0, -1.0, 1.0);
    CHECK(g.dr == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(g.dz == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(g.rc(0) == doctest::Approx(0.125).epsilon(1e-15));
    CHECK(g.rf(0) == 0.0);

    Grid g2 = make_grid(128, 256, 4.0, -4.0, 4.0);
    CHECK(g2.dr == doctest::Approx(0.03125).epsilon(1e-15));
    CHECK(g2.dz == doctest::Approx(0.03125).epsilon(1e-15));
}

TEST_CASE("make_grid rejects degenerate input") {
    CHECK_THROWS_WITH_AS(make_grid(4, 4, 0.0, -1.0, 1.0), "make_grid: empty radial extent",
                         InvalidArgument);
    CHECK_THROWS_AS(make_grid(3, 4, 1.0, -1.0, 1.0), InvalidArgument);
    CHECK_THROWS_AS(make_grid(4, 2, 1.0, -1.0, 1.0), InvalidArgument);
    CHECK_THROWS_AS(make_grid(4, 4, 1.0, 1.0, 1.0), InvalidArgument);
}

TEST_CASE("lp_norm_3d trivial values") {
    Grid g = make_grid(16, 16, 1.0, 0.0, 1.0);
    ScalarField zero(g);
    CHECK(lp_norm_3d(zero, 1.0) == 0.0);
    CHECK(lp_norm_3d(zero, 2.0) == 0.0);
    CHECK(lp_norm_3d(zero, std::numeric_limits<double>::infinity()) == 0.0);

    // f == 1 over r in (0,1], z in [0,1]: 2*pi*int r = pi, so ||f||_2 = sqrt(pi).
    ScalarField one(g, 1.0);
    CHECK(lp_norm_3d(one, 2.0) == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-13));

    CHECK_THROWS_AS(lp_norm_3d(one, 0.5), InvalidArgument);
}

TEST_CASE("lp_norm_3d matches adaptive quadrature for a Gaussian bump") {
    Grid g = make_grid(256, 512, 4.0, -4.0, 4.0);
    const double r0 = 1.0, z0 = 0.0, sigma = 0.5;
    ScalarField f = gaussian_bump(g, r0, z0, sigma, 1.0);
    auto fn = [&](double r, double z) {
        return std::exp(-((r - r0) * (r - r0) + (z - z0) * (z - z0)) / (2 * sigma * sigma));
    };

    double ref1 = oracle::lp_mass_3d(fn, 1.0, 0.0, 4.0, -4.0, 4.0);
    CHECK(lp_norm_3d(f, 1.0) == doctest::Approx(ref1).epsilon(1e-6));

    double ref2 = std::sqrt(oracle::lp_mass_3d(fn, 2.0, 0.0, 4.0, -4.0, 4.0));
    CHECK(lp_norm_3d(f, 2.0) == doctest::Approx(ref2).epsilon(1e-6));
}

TEST_CASE("lp_norm_3d absolute homogeneity") {
    Grid g = make_grid(32, 48, 2.0, -1.5, 1.5);
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    ScalarField f(g);
    for (double& v : f.data()) v = U(rng);

    const double inf = std::numeric_limits<double>::infinity();
    for (double p : {1.0, 2.0, 3.5, 4.0, inf}) {
        for (double c : {-3.25, 0.5, 7.0}) {
            ScalarField cf(g);
            auto src = f.data();
            auto dst = cf.data();
            for (std::size_t k = 0; k < src.size(); ++k) dst[k] = c * src[k];
            CHECK(lp_norm_3d(cf, p) ==
                  doctest::Approx(std::abs(c) * lp_norm_3d(f, p)).epsilon(1e-13));
        }
    }
}

TEST_CASE("lp_norm_tail trivial and derived values") {
    Grid g = make_grid(256, 512, 4.0, -4.0, 4.0);

    {
        ScalarField f = gaussian_bump(g, 1.0, 0.0, 0.5, 1.0);
        double full = lp_norm_3d(f, 2.0);
        CHECK(lp_norm_tail(f, 2.0, 0.0) == doctest::Approx(full * full).epsilon(1e-13));
        double diag = std::hypot(4.0, 4.0);
        CHECK(lp_norm_tail(f, 2.0, diag) == 0.0);
        CHECK_THROWS_AS(lp_norm_tail(f, 0.5, 1.0), InvalidArgument);
    }

    // radius = 2*sigma with the cut surface well off the support: the
    // cell-center in/out rule agrees with exact-region quadrature to 1e-6.
    {
        const double sigma = 0.2, r0 = 1.6;
        ScalarField f = gaussian_bump(g, r0, 0.0, sigma, 1.0);
        auto fn = [&](double r, double z) {
            return std::exp(-((r - r0) * (r - r0) + z * z) / (2 * sigma * sigma));
        };
        double ref = oracle::lp_mass_tail_3d(fn, 2.0, 2.0 * sigma, 8.0);
        CHECK(lp_norm_tail(f, 2.0, 2.0 * sigma) == doctest::Approx(ref).epsilon(1e-6));
    }

    // A cut slicing through the peak is limited by the O(h) staircase of the
    // cell-center rule; at this resolution the two quadratures agree to ~1%.
    {
        const double sigma = 0.5;
        ScalarField f = gaussian_bump(g, 1.0, 0.0, sigma, 1.0);
        auto fn = [&](double r, double z) {
            return std::exp(-((r - 1.0) * (r - 1.0) + z * z) / (2 * sigma * sigma));
        };
        double ref = oracle::lp_mass_tail_3d(fn, 2.0, 2.0 * sigma, 8.0);
        CHECK(lp_norm_tail(f, 2.0, 2.0 * sigma) == doctest::Approx(ref).epsilon(0.01));
    }
}

TEST_CASE("lp_norm_tail monotone in radius") {
    Grid g = make_grid(48, 64, 3.0, -2.0, 2.0);
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    ScalarField f(g);
    for (double& v : f.data()) v = U(rng);
    double prev = lp_norm_tail(f, 2.0, 0.0);
    for (double rad : {0.3, 0.9, 1.4, 2.2, 3.0}) {
        double cur = lp_norm_tail(f, 2.0, rad);
        CHECK(cur <= prev * (1.0 + 1e-15));
        prev = cur;
    }
}

TEST_CASE("mollify preserves constants away from outer boundaries") {
    Grid g = make_grid(64, 64, 2.0, -1.0, 1.0);
    ScalarField f(g, 3.75);
    int n = 10;  // width 0.1, dr = dz = 0.03125
    ScalarField m = mollify(f, n);
    double eps = 1.0 / n;
    for (int i = 0; i < g.nr; ++i)
        for (int j = 0; j < g.nz; ++j) {
            bool interior = g.rc(i) < g.R - eps && g.zc(j) > g.zmin + eps && g.zc(j) < g.zmax - eps;
            if (interior) CHECK(m(i, j) == doctest::Approx(3.75).epsilon(1e-13));
        }
}

TEST_CASE("mollify preserves the weighted mass of an interior spike") {
    Grid g = make_grid(64, 64, 2.0, -1.0, 1.0);
    ScalarField f(g);
    f(32, 32) = 5.0;  // r ~ 1.02, well away from axis and boundaries
    double before = weighted_mass(f);
    ScalarField m = mollify(f, 10);
    double after = weighted_mass(m);
    CHECK(after == doctest::Approx(before).epsilon(1e-12));
}

TEST_CASE("mollify matches a dense-grid convolution oracle") {
    // Gaussian sigma=0.5 at (1,0), width 1/n = 0.1.  The oracle re-implements
    // the r-weighted bump convolution on a grid twice as fine and integrates
    // the analytic field, so it approximates the exact convolution.
    const double sigma = 0.5, eps = 0.1;
    const int n = 10;
    auto fn = [&](double r, double z) {
        return std::exp(-((r - 1.0) * (r - 1.0) + z * z) / (2 * sigma * sigma));
    };

    auto conv_distance = [&](int nr, int nz, double Rbox, double zhalf) {
        double dr = Rbox / nr, dz = 2 * zhalf / nz;
        int kr = static_cast<int>(std::ceil(eps / dr));
        int kz = static_cast<int>(std::ceil(eps / dz));
        std::vector<double> w((2 * kr + 1) * (2 * kz + 1), 0.0);
        double ws = 0.0;
        for (int a = -kr; a <= kr; ++a)
            for (int b = -kz; b <= kz; ++b) {
                double u2 = (a * dr * a * dr + b * dz * b * dz) / (eps * eps);
                if (u2 < 1.0) {
                    double v = std::exp(-1.0 / (1.0 - u2));
                    w[(a + kr) * (2 * kz + 1) + b + kz] = v;
                    ws += v;
                }
            }
        for (double& v : w) v /= ws;
        auto rc = [&](int i) { return (i + 0.5) * dr; };
        auto zc = [&](int j) { return -zhalf + (j + 0.5) * dz; };
        std::vector<double> field(static_cast<std::size_t>(nr) * nz);
        for (int i = 0; i < nr; ++i)
            for (int j = 0; j < nz; ++j) field[i * nz + j] = fn(rc(i), zc(j));
        double dist2 = 0.0;
        for (int i = 0; i < nr; ++i) {
            for (int j = 0; j < nz; ++j) {
                double num = 0.0, den = 0.0;
                for (int a = -kr; a <= kr; ++a) {
                    int si = i + a;
                    double mw = std::abs((si + 0.5) * dr);
                    if (si < 0) si = -1 - si;
                    for (int b = -kz; b <= kz; ++b) {
                        int sj = j + b;
                        double wk = w[(a + kr) * (2 * kz + 1) + b + kz];
                        den += wk * mw;
                        if (si < nr && sj >= 0 && sj < nz)
                            num += wk * mw * field[si * nz + sj];
                    }
                }
                double diff = num / den - field[i * nz + j];
                dist2 += diff * diff * rc(i);
            }
        }
        return std::sqrt(2.0 * std::numbers::pi * dist2 * dr * dz);
    };

    Grid g = make_grid(384, 384, 3.0, -1.5, 1.5);
    ScalarField f = gaussian_bump(g, 1.0, 0.0, sigma, 1.0);
    ScalarField m = mollify(f, n);
    double dist_impl = lp_norm_3d(field_difference(m, f), 2.0);
    double dist_ref = conv_distance(768, 768, 3.0, 1.5);
    CHECK(dist_impl == doctest::Approx(dist_ref).epsilon(0.01));
}

TEST_CASE("mollify is Lp-nonexpansive for fields away from outer boundaries") {
    Grid g = make_grid(64, 96, 2.0, -1.5, 1.5);
    const double inf = std::numeric_limits<double>::infinity();
    // Bumps near the axis exercise the even-reflection path.
    std::vector<ScalarField> fields;
    fields.push_back(gaussian_bump(g, 0.0, 0.0, 0.3, 1.0));
    fields.push_back(gaussian_bump(g, 0.8, 0.4, 0.2, -2.0));
    {
        ScalarField mix = gaussian_bump(g, 0.5, -0.5, 0.25, 1.0);
        ScalarField b = gaussian_bump(g, 1.2, 0.3, 0.15, -0.7);
        auto pm = mix.data();
        auto pb = b.data();
        for (std::size_t k = 0; k < pm.size(); ++k) pm[k] += pb[k];
        fields.push_back(mix);
    }
    for (const auto& f : fields) {
        ScalarField m = mollify(f, 8);
        for (double p : {1.0, 2.0, inf}) {
            CHECK(lp_norm_3d(m, p) <= lp_norm_3d(f, p) * (1.0 + 1e-12));
        }
    }
}

TEST_CASE("mollify commutes with even reflection at the axis") {
    Grid g = make_grid(48, 64, 1.5, -1.0, 1.0);
    ScalarField f = gaussian_bump(g, 0.2, 0.1, 0.3, 1.3);
    int n = 8;
    double eps = 1.0 / n;
    ScalarField m = mollify(f, n);

    // Full-plane computation: indices i in [-nr, nr), even extension, |r| weights.
    int kr = static_cast<int>(std::ceil(eps / g.dr));
    int kz = static_cast<int>(std::ceil(eps / g.dz));
    std::vector<double> w((2 * kr + 1) * (2 * kz + 1), 0.0);
    double ws = 0.0;
    for (int a = -kr; a <= kr; ++a)
        for (int b = -kz; b <= kz; ++b) {
            double u2 = (a * g.dr * a * g.dr + b * g.dz * b * g.dz) / (eps * eps);
            if (u2 < 1.0) {
                double v = std::exp(-1.0 / (1.0 - u2));
                w[(a + kr) * (2 * kz + 1) + b + kz] = v;
                ws += v;
            }
        }
    for (double& v : w) v /= ws;
    auto fext = [&](int i, int j) -> double {
        if (j < 0 || j >= g.nz) return 0.0;
        int ii = i < 0 ? -1 - i : i;
        if (ii >= g.nr) return 0.0;
        return f(ii, j);
    };
    for (int i = 0; i < g.nr; ++i)
        for (int j = 0; j < g.nz; ++j) {
            double num = 0.0, den = 0.0;
            for (int a = -kr; a <= kr; ++a)
                for (int b = -kz; b <= kz; ++b) {
                    double wk = w[(a + kr) * (2 * kz + 1) + b + kz];
                    double mw = std::abs((i + a + 0.5) * g.dr);
                    den += wk * mw;
                    num += wk * mw * fext(i + a, j + b);
                }
            CHECK(m(i, j) == doctest::Approx(num / den).epsilon(1e-13));
        }
}

TEST_CASE("mollify rejects unresolvable widths") {
    Grid g = make_grid(8, 8, 1.0, -1.0, 1.0);  // dr = 0.125, dz = 0.25
    ScalarField f(g, 1.0);
    CHECK_THROWS_AS(mollify(f, 4), InvalidArgument);  // width 0.25 < 2*dz
}

TEST_CASE("gaussian_bump values and norm") {
    Grid g = make_grid(128, 256, 4.0, -4.0, 4.0);
    ScalarField zero = gaussian_bump(g, 1.0, 0.0, 0.5, 0.0);
    for (double v : zero.data()) CHECK(v == 0.0);

    ScalarField f = gaussian_bump(g, 1.0, 0.0, 0.5, 2.0);
    // Cell center nearest (1,0): value within continuity bound of the peak.
    int i0 = static_cast<int>(std::floor(1.0 / g.dr));
    int j0 = static_cast<int>(std::floor(4.0 / g.dz));
    double d2max = 0.5 * (g.dr * g.dr + g.dz * g.dz);
    CHECK(f(i0, j0) >= 2.0 * std::exp(-d2max / (2 * 0.25)) - 1e-12);
    CHECK(f(i0, j0) <= 2.0);

    auto fn = [&](double r, double z) {
        return 2.0 * std::exp(-((r - 1.0) * (r - 1.0) + z * z) / (2 * 0.25));
    };
    double ref = std::sqrt(oracle::lp_mass_3d(fn, 2.0, 0.0, 4.0, -4.0, 4.0));
    CHECK(lp_norm_3d(f, 2.0) == doctest::Approx(ref).epsilon(1e-6));

    CHECK_THROWS_AS(gaussian_bump(g, 1.0, 0.0, 0.0, 1.0), InvalidArgument);
}

TEST_CASE("apply_renorm pointwise behaviour") {
    Grid g = make_grid(32, 32, 2.0, -1.0, 1.0);
    ScalarField f = gaussian_bump(g, 1.0, 0.0, 0.4, 1.0);

    ScalarField z = apply_renorm(f, make_zero_renorm());
    for (double v : z.data()) CHECK(v == 0.0);

    // Fields identically below the vanishing radius map to zero.
    RenormFunction clamp = make_smooth_clamp(0.25, 1.0);
    ScalarField small(g, 0.1);
    ScalarField sz = apply_renorm(small, clamp);
    for (double v : sz.data()) CHECK(v == 0.0);

    // Clamped square equals s^2 on its exact window.
    RenormFunction sq = make_clamped_square(0.05, 10.0);
    ScalarField fs = apply_renorm(f, sq);
    for (int i = 0; i < g.nr; ++i)
        for (int j = 0; j < g.nz; ++j) {
            double s = f(i, j);
            if (s > 0.05 && s * s < 0.8 * 10.0)
                CHECK(fs(i, j) == doctest::Approx(s * s).epsilon(1e-14));
        }
}

TEST_CASE("apply_renorm respects the bound exactly") {
    Grid g = make_grid(32, 32, 2.0, -1.0, 1.0);
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> U(-30.0, 30.0);
    ScalarField f(g);
    for (double& v : f.data()) v = U(rng);
    for (const RenormFunction& b : {make_smooth_clamp(0.5, 2.5), make_clamped_square(0.1, 4.0)}) {
        ScalarField out = apply_renorm(f, b);
        double m = lp_norm_3d(out, std::numeric_limits<double>::infinity());
        CHECK(m <= b.bound);
    }
}
