#include "tpmpm/pressure.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "tpmpm/error.hpp"

namespace tpmpm {

double pressure_laplacian_coefficient(double permeability, double porosity,
                                      double water_density,
                                      double mixture_density, double dt,
                                      double gravity) {
  const double partial_water = porosity * water_density;
  return permeability / (partial_water * gravity) *
             (partial_water / mixture_density - porosity) -
         dt / mixture_density;
}

PressureSystem assemble_pressure_system(
    std::span<const TwoPhaseParticle> particles,
    std::span<const BasisEvaluation> basis, BackgroundGrid& grid, double dt,
    double cutoff) {
  PressureSystem sys;
  const std::size_t nn = grid.num_nodes();
  // dof >= 0: free, -2: drained, -1: inactive
  std::vector<double> prescribed(nn, 0.0);
  for (std::size_t i = 0; i < nn; ++i) {
    auto& tb = grid.node(i).tb;
    tb.pressure_dof = -1;
    if (tb.mass_mix <= cutoff) continue;
    if (grid.constraints(i).drained) {
      tb.pressure_dof = -2;
      prescribed[i] = -tb.pressure;
      sys.dirichlet_nodes.push_back(i);
      sys.dirichlet_values.push_back(prescribed[i]);
    } else {
      tb.pressure_dof = static_cast<int>(sys.dof_nodes.size());
      sys.dof_nodes.push_back(i);
    }
  }

  const auto n = static_cast<Eigen::Index>(sys.dof_nodes.size());
  sys.rhs = Eigen::VectorXd::Zero(n);
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(particles.size() * 16);

  for (std::size_t p = 0; p < particles.size(); ++p) {
    const auto& pt = particles[p];
    const auto& b = basis[p];
    const double coef = -pressure_laplacian_coefficient(
        pt.permeability, pt.porosity, pt.water_density, pt.mixture_density(),
        dt);
    const double vc = pt.volume * coef;

    double div_solid = 0.0, div_seepage = 0.0;
    for (int k = 0; k < b.count; ++k) {
      const auto& tb = grid.node(b.nodes[k]).tb;
      div_solid += b.gradients[k].dot(tb.velocity_star);
      div_seepage += b.gradients[k].dot(tb.seepage_star);
    }
    const double div = div_solid + pt.porosity * div_seepage;

    for (int a = 0; a < b.count; ++a) {
      const int row = grid.node(b.nodes[a]).tb.pressure_dof;
      if (row < 0) continue;
      sys.rhs[row] -= pt.volume * b.weights[a] * div;
      for (int c = 0; c < b.count; ++c) {
        const int col = grid.node(b.nodes[c]).tb.pressure_dof;
        if (col == -1) continue;
        const double val = vc * b.gradients[a].dot(b.gradients[c]);
        if (col >= 0)
          triplets.emplace_back(row, col, val);
        else
          sys.rhs[row] -= val * prescribed[b.nodes[c]];
      }
    }
  }
  sys.matrix.resize(n, n);
  sys.matrix.setFromTriplets(triplets.begin(), triplets.end());
  return sys;
}

Eigen::VectorXd solve_cg(const SparseMatrix& matrix, const Eigen::VectorXd& rhs,
                         double tol, int max_iter, SolveReport* report) {
  const Eigen::Index n = rhs.size();
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  const double bnorm = rhs.norm();
  if (report) *report = SolveReport{0, 0.0, bnorm};
  if (n == 0 || bnorm == 0.0) return x;

  Eigen::VectorXd inv_diag(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double d = matrix.coeff(i, i);
    inv_diag[i] = d > 0.0 ? 1.0 / d : 1.0;
  }

  const double target = tol * bnorm;
  int it = 0;
  double true_res = bnorm;
  // restarts guard against drift between the recursive and true residual
  for (int restart = 0; restart < 5 && it < max_iter; ++restart) {
    Eigen::VectorXd r = rhs - matrix * x;
    Eigen::VectorXd z = inv_diag.cwiseProduct(r);
    Eigen::VectorXd p = z;
    double rz = r.dot(z);
    while (it < max_iter && r.norm() > target) {
      const Eigen::VectorXd ap = matrix * p;
      const double pap = p.dot(ap);
      if (!(pap > 0.0)) break;
      const double alpha = rz / pap;
      x += alpha * p;
      r -= alpha * ap;
      ++it;
      z = inv_diag.cwiseProduct(r);
      const double rz_new = r.dot(z);
      p = z + (rz_new / rz) * p;
      rz = rz_new;
    }
    true_res = (rhs - matrix * x).norm();
    if (true_res <= target) break;
  }
  if (report) *report = SolveReport{it, true_res, bnorm};
  if (!(true_res <= target)) {
    std::ostringstream msg;
    msg << "no convergence after " << it << " iterations, residual "
        << true_res << " > " << target << " (" << n << " dofs)";
    throw SolverError(msg.str(), true_res, it);
  }
  return x;
}

void store_pressure_increment(const PressureSystem& system,
                              const Eigen::VectorXd& solution,
                              BackgroundGrid& grid) {
  for (auto& node : grid.nodes()) node.tb.pressure_increment = 0.0;
  for (std::size_t d = 0; d < system.dof_nodes.size(); ++d)
    grid.node(system.dof_nodes[d]).tb.pressure_increment =
        solution[static_cast<Eigen::Index>(d)];
  for (std::size_t d = 0; d < system.dirichlet_nodes.size(); ++d)
    grid.node(system.dirichlet_nodes[d]).tb.pressure_increment =
        system.dirichlet_values[d];
}

void scatter_pressure_gradient(std::span<const TwoPhaseParticle> particles,
                               std::span<const BasisEvaluation> basis,
                               BackgroundGrid& grid) {
  for (auto& node : grid.nodes())
    node.tb.pressure_increment_force = Vec2::Zero();
  for (std::size_t p = 0; p < particles.size(); ++p) {
    const auto& b = basis[p];
    double dp = 0.0;
    for (int k = 0; k < b.count; ++k)
      dp += b.weights[k] * grid.node(b.nodes[k]).tb.pressure_increment;
    const double vdp = particles[p].volume * dp;
    for (int k = 0; k < b.count; ++k)
      grid.node(b.nodes[k]).tb.pressure_increment_force +=
          vdp * b.gradients[k];
  }
}

std::vector<double> mixture_divergence(
    std::span<const TwoPhaseParticle> particles,
    std::span<const BasisEvaluation> basis, const BackgroundGrid& grid,
    Vec2 TwoPhaseNodeFields::*solid_velocity,
    Vec2 TwoPhaseNodeFields::*seepage_velocity) {
  std::vector<double> out(grid.num_nodes(), 0.0);
  for (std::size_t p = 0; p < particles.size(); ++p) {
    const auto& pt = particles[p];
    const auto& b = basis[p];
    double ds = 0.0, dw = 0.0;
    for (int k = 0; k < b.count; ++k) {
      const auto& tb = grid.node(b.nodes[k]).tb;
      ds += b.gradients[k].dot(tb.*solid_velocity);
      dw += b.gradients[k].dot(tb.*seepage_velocity);
    }
    const double div = ds + pt.porosity * dw;
    for (int k = 0; k < b.count; ++k)
      out[b.nodes[k]] += pt.volume * b.weights[k] * div;
  }
  return out;
}

void write_matrix_coordinates(const SparseMatrix& matrix, std::ostream& out) {
  out << std::setprecision(17) << std::scientific;
  for (Eigen::Index r = 0; r < matrix.outerSize(); ++r)
    for (SparseMatrix::InnerIterator it(matrix, r); it; ++it)
      out << it.row() << ' ' << it.col() << ' ' << it.value() << '\n';
}

void write_matrix_coordinates(const SparseMatrix& matrix,
                              const std::string& path) {
  std::ofstream f(path);
  if (!f) throw IoError("cannot open " + path);
  write_matrix_coordinates(matrix, f);
  if (!f) throw IoError("write failed for " + path);
}

}  // namespace tpmpm
