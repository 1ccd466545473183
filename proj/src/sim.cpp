#include "axvv/sim.hpp"

#include <algorithm>
#include <cmath>

#include "axvv/io.hpp"

namespace axvv {

void SimConfig::validate() const {
    if (nr < 4 || nz < 4) throw InvalidArgument("SimConfig: grid counts must be >= 4");
    if (!(R > 0.0) || !(zmax > zmin)) throw InvalidArgument("SimConfig: empty domain");
    if (nu < 0.0) throw InvalidArgument("SimConfig: nu must be >= 0");
    if (!(T > 0.0)) throw InvalidArgument("SimConfig: T must be positive");
    if (!(cfl > 0.0) || cfl > 1.0) throw InvalidArgument("SimConfig: cfl must lie in (0,1]");
    if (!(cfl_euler > 0.0) || cfl_euler > 1.0)
        throw InvalidArgument("SimConfig: cfl_euler must lie in (0,1]");
    if (samples < 2) throw InvalidArgument("SimConfig: need at least 2 sample points");
    for (double p : norm_ps)
        if (!(p >= 1.0) || std::isinf(p))
            throw InvalidArgument("SimConfig: norm exponents must be finite and >= 1");
    for (double r : probe_radii)
        if (r < 0.0) throw InvalidArgument("SimConfig: probe radii must be nonnegative");
    if (!(boundary_tol > 0.0)) throw InvalidArgument("SimConfig: boundary_tol must be positive");
    if (init.kind == InitKind::gaussian && !(init.sigma > 0.0))
        throw InvalidArgument("SimConfig: init sigma must be positive");
    if (init.kind == InitKind::hill && !(init.radius > 0.0))
        throw InvalidArgument("SimConfig: hill radius must be positive");
}

Grid SimConfig::grid() const { return make_grid(nr, nz, R, zmin, zmax); }

std::vector<double> SimConfig::sample_times() const {
    std::vector<double> ts(samples);
    for (int k = 0; k < samples; ++k) ts[k] = T * k / (samples - 1);
    ts.back() = T;
    return ts;
}

int BudgetSeries::p_index(double p) const {
    for (std::size_t k = 0; k < ps.size(); ++k)
        if (ps[k] == p) return static_cast<int>(k);
    throw InvalidArgument("BudgetSeries: exponent not tracked in this run");
}

ScalarField make_initial_field(const InitSpec& spec, const Grid& g) {
    switch (spec.kind) {
        case InitKind::zero:
            return ScalarField(g, 0.0, FieldRole::relative_vorticity);
        case InitKind::gaussian: {
            ScalarField f = gaussian_bump(g, spec.r0, spec.z0, spec.sigma, spec.amplitude);
            f.set_role(FieldRole::relative_vorticity);
            return f;
        }
        case InitKind::hill: {
            ScalarField f(g, 0.0, FieldRole::relative_vorticity);
            double a2 = spec.radius * spec.radius;
            for (int i = 0; i < g.nr; ++i)
                for (int j = 0; j < g.nz; ++j) {
                    double r = g.rc(i), z = g.zc(j) - spec.z0;
                    if (r * r + z * z < a2) f(i, j) = spec.amplitude;
                }
            return f;
        }
        case InitKind::snapshot: {
            auto [f, t] = read_snapshot(spec.path);
            (void)t;
            if (!(f.grid() == g))
                throw InvalidArgument("make_initial_field: snapshot grid does not match config");
            f.set_role(FieldRole::relative_vorticity);
            return f;
        }
    }
    throw InvalidArgument("make_initial_field: unknown init kind");
}

ForcingEval::ForcingEval(const ForcingSpec& spec, const Grid& g) {
    if (spec.kind == ForceKind::none || spec.amplitude == 0.0) {
        shape_ = ScalarField(g, 0.0, FieldRole::forcing);
        zero_ = true;
        return;
    }
    shape_ = gaussian_bump(g, spec.r0, spec.z0, spec.sigma, spec.amplitude);
    shape_.set_role(FieldRole::forcing);
    zero_ = false;
    t_decay_ = spec.t_decay;
}

ForcingEval::ForcingEval(ScalarField shape, double t_decay)
    : t_decay_(t_decay), shape_(std::move(shape)) {
    zero_ = true;
    for (double v : shape_.data())
        if (v != 0.0) {
            zero_ = false;
            break;
        }
}

void ForcingEval::evaluate(double t, ScalarField& out) const {
    if (!(out.grid() == shape_.grid()))
        throw InvalidArgument("ForcingEval: output grid does not match");
    if (zero_) {
        std::fill(out.data().begin(), out.data().end(), 0.0);
        return;
    }
    double env = t_decay_ > 0.0 ? std::exp(-t / t_decay_) : 1.0;
    auto src = shape_.data();
    auto dst = out.data();
    for (std::size_t k = 0; k < src.size(); ++k) dst[k] = env * src[k];
}

}  // namespace axvv
