#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace axvv {

/// Error raised when a precondition on user-supplied input is violated.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Cell-centered discretization of the half-plane {(r,z) : r > 0},
/// truncated to r in (0,R], z in [zmin,zmax].
///
/// Cell centers sit at r_i = (i+1/2)dr, z_j = zmin + (j+1/2)dz, so no
/// center ever touches the symmetry axis r = 0.  Corners sit at r = i*dr,
/// z = zmin + j*dz; the corner column i = 0 lies exactly on the axis.
struct Grid {
    int nr = 0;
    int nz = 0;
    double R = 0.0;
    double zmin = 0.0;
    double zmax = 0.0;
    double dr = 0.0;
    double dz = 0.0;

    double rc(int i) const { return (i + 0.5) * dr; }
    double zc(int j) const { return zmin + (j + 0.5) * dz; }
    double rf(int i) const { return i * dr; }
    double zf(int j) const { return zmin + j * dz; }

    std::size_t cells() const { return static_cast<std::size_t>(nr) * nz; }
    std::size_t idx(int i, int j) const { return static_cast<std::size_t>(i) * nz + j; }

    bool operator==(const Grid&) const = default;
};

Grid make_grid(int nr, int nz, double R, double zmin, double zmax);

enum class FieldRole { generic, relative_vorticity, forcing, streamfunction_residual };

/// Cell-centered scalar samples on a Grid.  Value-semantic: copies are
/// independent buffers, safe to hand between threads.
class ScalarField {
public:
    ScalarField() = default;
    explicit ScalarField(const Grid& g, double fill = 0.0, FieldRole role = FieldRole::generic)
        : grid_(g), role_(role), data_(g.cells(), fill) {}

    const Grid& grid() const { return grid_; }
    FieldRole role() const { return role_; }
    void set_role(FieldRole r) { role_ = r; }

    double& operator()(int i, int j) { return data_[grid_.idx(i, j)]; }
    double operator()(int i, int j) const { return data_[grid_.idx(i, j)]; }

    std::span<double> data() { return data_; }
    std::span<const double> data() const { return data_; }

private:
    Grid grid_;
    FieldRole role_ = FieldRole::generic;
    std::vector<double> data_;
};

/// Flux-form velocity on cell faces: fr = r*u_r on radial faces
/// ((nr+1) x nz, fr[k*nz+j] at r = k*dr, z = z_j), fz = r*u_z on axial
/// faces (nr x (nz+1), fz[i*(nz+1)+k] at r = r_i, z = zmin + k*dz).
///
/// fr on the axis face k = 0 is identically zero, and the discrete
/// divergence (fr_{i+1,j}-fr_{i,j})/dr + (fz_{i,j+1}-fz_{i,j})/dz vanishes
/// at every cell when constructed from a streamfunction.
struct FaceVelocity {
    Grid grid;
    std::vector<double> fr;
    std::vector<double> fz;

    explicit FaceVelocity(const Grid& g)
        : grid(g),
          fr(static_cast<std::size_t>(g.nr + 1) * g.nz, 0.0),
          fz(static_cast<std::size_t>(g.nr) * (g.nz + 1), 0.0) {}

    double& Fr(int k, int j) { return fr[static_cast<std::size_t>(k) * grid.nz + j]; }
    double Fr(int k, int j) const { return fr[static_cast<std::size_t>(k) * grid.nz + j]; }
    double& Fz(int i, int k) { return fz[static_cast<std::size_t>(i) * (grid.nz + 1) + k]; }
    double Fz(int i, int k) const { return fz[static_cast<std::size_t>(i) * (grid.nz + 1) + k]; }
};

/// Maximum cell-wise discrete divergence of a face field.
double max_cell_divergence(const FaceVelocity& v);

/// Largest |u_r| and |u_z| over faces (point velocities, not fluxes).
struct FaceSpeeds {
    double max_ur = 0.0;
    double max_uz = 0.0;
};
FaceSpeeds face_speeds(const FaceVelocity& v);

/// Bounded C^1 renormalization nonlinearity that vanishes near zero,
/// together with its derivative.
struct RenormFunction {
    std::function<double(double)> beta;
    std::function<double(double)> dbeta;
    double bound = 0.0;          // sup |beta|
    double vanish_radius = 0.0;  // beta(s) == 0 for |s| <= vanish_radius
    std::string descriptor;
};

RenormFunction make_zero_renorm();
/// 0 on |s|<=eps, rising C^1 to the saturation level `bound`.
RenormFunction make_smooth_clamp(double eps, double bound);
/// Equals s^2 on a middle window, vanishes near zero, saturates at `cap`.
RenormFunction make_clamped_square(double eps, double cap);

// --- weighted norms realizing the 3D measure 2*pi*r dr dz ---

/// L^p norm over R^3 of an axisymmetric field; p = infinity gives max|f|.
double lp_norm_3d(const ScalarField& f, double p);

/// Weighted p-th-power mass restricted to cells with r^2 + z^2 > radius^2
/// (complement of the 3D ball).  Reported as the p-th power, not the root.
double lp_norm_tail(const ScalarField& f, double p, double radius);

/// Discrete mollification with the standard compactly supported bump of
/// radius 1/n, renormalized cell-by-cell against the r-weighted measure.
/// Even reflection across the axis, zero extension past outer boundaries.
ScalarField mollify(const ScalarField& f, int n);

ScalarField gaussian_bump(const Grid& g, double r0, double z0, double sigma, double amplitude);

ScalarField apply_renorm(const ScalarField& f, const RenormFunction& beta);

// --- small field helpers ---

/// a - b (grids must match).
ScalarField field_difference(const ScalarField& a, const ScalarField& b);
bool field_all_finite(const ScalarField& f);

}  // namespace axvv
