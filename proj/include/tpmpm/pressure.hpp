#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Sparse>

#include "tpmpm/basis.hpp"
#include "tpmpm/grid.hpp"
#include "tpmpm/particles.hpp"

namespace tpmpm {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

//! Pressure-increment system L dp = r over the free (non-drained) active
//! nodes. Stored negated so that L is symmetric positive definite.
struct PressureSystem {
  SparseMatrix matrix;
  Eigen::VectorXd rhs;
  //! grid node of each free DOF
  std::vector<std::size_t> dof_nodes;
  //! drained nodes and their prescribed increments
  std::vector<std::size_t> dirichlet_nodes;
  std::vector<double> dirichlet_values;

  std::size_t size() const { return dof_nodes.size(); }
};

//! Scalar factor of the pressure Laplacian,
//! k/(rho_w g) (rho_w/rho - n) - dt/rho with rho_w = n rho_wR.
//! Negative for physical inputs.
double pressure_laplacian_coefficient(double permeability, double porosity,
                                      double water_density,
                                      double mixture_density, double dt,
                                      double gravity = kStandardGravity);

//! Assemble L (particle quadrature of grad N_i . grad N_j weighted by V_k and
//! the negated coefficient) and r = -sum V_k N_i (div v_s* + n div v_wR*).
//! Drained nodes are eliminated with dp = -p^t. Assigns
//! TwoPhaseNodeFields::pressure_dof.
PressureSystem assemble_pressure_system(
    std::span<const TwoPhaseParticle> particles,
    std::span<const BasisEvaluation> basis, BackgroundGrid& grid, double dt,
    double cutoff);

struct SolveReport {
  int iterations = 0;
  double residual = 0.0;  // ||L x - r||
  double rhs_norm = 0.0;
};

//! Jacobi-preconditioned conjugate gradient. Returns x with
//! ||L x - r|| <= tol ||r||; throws SolverError otherwise.
Eigen::VectorXd solve_cg(const SparseMatrix& matrix, const Eigen::VectorXd& rhs,
                         double tol, int max_iter, SolveReport* report = nullptr);

inline Eigen::VectorXd solve_cg(const PressureSystem& system, double tol,
                                int max_iter, SolveReport* report = nullptr) {
  return solve_cg(system.matrix, system.rhs, tol, max_iter, report);
}

//! Write the solution and the drained values into
//! TwoPhaseNodeFields::pressure_increment
void store_pressure_increment(const PressureSystem& system,
                              const Eigen::VectorXd& solution,
                              BackgroundGrid& grid);

//! Nodal force of the pressure increment, sum_p V_p dp(X_p) grad N_i, the
//! weak form of -grad dp including the boundary term.
void scatter_pressure_gradient(std::span<const TwoPhaseParticle> particles,
                               std::span<const BasisEvaluation> basis,
                               BackgroundGrid& grid);

//! Discrete mixture divergence sum_p V_p N_i (div v_s + n div v_wR) at every
//! node, for the given nodal solid velocity and seepage fields
std::vector<double> mixture_divergence(
    std::span<const TwoPhaseParticle> particles,
    std::span<const BasisEvaluation> basis, const BackgroundGrid& grid,
    Vec2 TwoPhaseNodeFields::*solid_velocity,
    Vec2 TwoPhaseNodeFields::*seepage_velocity);

//! Coordinate-format dump: one "row col value" line per stored entry
void write_matrix_coordinates(const SparseMatrix& matrix, std::ostream& out);
void write_matrix_coordinates(const SparseMatrix& matrix,
                              const std::string& path);

}  // namespace tpmpm
