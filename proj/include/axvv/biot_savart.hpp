#pragma once

#include <utility>
#include <vector>

#include "axvv/grid.hpp"

namespace axvv {

/// Raised when an iterative solve exhausts its budget; carries the residual.
class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& what, double residual)
        : std::runtime_error(what), residual_(residual) {}
    double residual() const { return residual_; }

private:
    double residual_ = 0.0;
};

/// Stokes streamfunction on cell corners ((nr+1) x (nz+1)); the solver
/// imposes psi = 0 on the axis column and on all outer boundary corners.
struct Streamfunction {
    Grid grid;
    std::vector<double> psi;

    explicit Streamfunction(const Grid& g)
        : grid(g), psi(static_cast<std::size_t>(g.nr + 1) * (g.nz + 1), 0.0) {}

    double& at(int i, int j) { return psi[static_cast<std::size_t>(i) * (grid.nz + 1) + j]; }
    double at(int i, int j) const { return psi[static_cast<std::size_t>(i) * (grid.nz + 1) + j]; }
};

struct StreamfunctionOptions {
    double rtol = 1e-10;  // residual max-norm relative to max |r^2 xi|
    int max_cycles = 200;
};

/// Solves d^2_r psi - (1/r) d_r psi + d^2_z psi = -r^2 xi by geometric
/// multigrid on the five-point corner stencil.  `warm_start`, when given,
/// seeds the iteration (it is not modified).
Streamfunction solve_streamfunction(const ScalarField& xi,
                                    const StreamfunctionOptions& opts = {},
                                    const Streamfunction* warm_start = nullptr);

/// Face fluxes from corner differences; the discrete divergence of the
/// result telescopes to zero exactly.
FaceVelocity velocity_from_streamfunction(const Streamfunction& psi);

/// Largest tangential speed observed along the outer (non-axis) boundary,
/// used as the domain-truncation diagnostic.
double boundary_tangential_speed(const FaceVelocity& v);

/// Bilinear point samples of (u_r, u_z) built from face fluxes.  Queries
/// may cross the axis (u_r odd, u_z even) and are clamped elsewhere.
class VelocitySampler {
public:
    explicit VelocitySampler(const FaceVelocity& v);
    double ur(double r, double z) const;
    double uz(double r, double z) const;

private:
    Grid grid_;
    std::vector<double> ur_;  // (nr+1) x nz nodes at (i*dr, zc_j)
    std::vector<double> uz_;  // nr x (nz+1) nodes at (rc_i, zmin + k*dz)
};

struct Vec2 {
    double ur = 0.0;
    double uz = 0.0;
};

struct DirectQuadOptions {
    int base_nodes = 256;
    double tol = 1e-8;      // relative change under node doubling
    int max_nodes = 1 << 15;
};

/// Direct evaluation of the 3D Biot-Savart integral u = (1/4pi) int
/// omega(y) x (x-y)/|x-y|^3 dy by azimuthal quadrature over each source
/// cell.  Points must be strictly inside the grid, off the axis, and at
/// least dr/2 away from every source cell center.
std::vector<Vec2> biot_savart_direct(const ScalarField& xi,
                                     const std::vector<std::pair<double, double>>& points,
                                     const DirectQuadOptions& opts = {});

struct KernelSplitNorms {
    double u1_l1 = 0.0;    // L1(H) of the near-field part, plain dr dz measure
    double u2_linf = 0.0;  // Linf(H) of the far-field part
};

/// Splits the axisymmetric Biot-Savart kernel at the given half-plane
/// radius and reports (||u1||_L1(H), ||u2||_Linf(H)) from direct quadrature
/// on a subsampled probe lattice.  probe_stride = 0 picks one automatically.
KernelSplitNorms kernel_split_norms(const ScalarField& xi, double cutoff = 1.0,
                                    int probe_stride = 0);

/// Near/far kernel contributions at one cell-center probe (test hook; the
/// source cell under the probe is excluded).
std::pair<Vec2, Vec2> kernel_split_probe(const ScalarField& xi, int ip, int jp, double cutoff);

}  // namespace axvv
