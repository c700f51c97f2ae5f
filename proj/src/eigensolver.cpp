#include "jch/eigensolver.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <span>
#include <stdexcept>

namespace jch {

namespace {

void apply(const SparseOperator& op, const Eigen::VectorXd& x, Eigen::VectorXd& y) {
  op.apply(std::span<const double>(x.data(), x.size()),
           std::span<double>(y.data(), y.size()));
}

}  // namespace

GroundState ground_state(const SparseOperator& op, const SolverOptions& opts) {
  const std::size_t n = op.dim();
  if (n == 0) throw std::invalid_argument("ground_state: empty operator");
  if (opts.tol <= 0.0) throw std::invalid_argument("ground_state: tol must be > 0");

  GroundState result;
  if (n == 1) {
    result.energy = op.row_values(0).empty() ? 0.0 : op.row_values(0)[0];
    result.vector = {1.0};
    result.converged = true;
    result.iterations = 1;
    return result;
  }

  const double scale = std::max(op.norm_inf(), 1e-300);
  const double abs_tol = opts.tol * scale;
  const int m_cap = static_cast<int>(std::min<std::size_t>(opts.krylov_dim, n));
  if (m_cap < 2) throw std::invalid_argument("ground_state: krylov_dim must be >= 2");
  const int k_keep = std::min(8, m_cap - 1);  // Ritz vectors kept at restart

  Eigen::MatrixXd basis(n, m_cap);   // orthonormal columns
  Eigen::MatrixXd proj = Eigen::MatrixXd::Zero(m_cap, m_cap);  // basis^T H basis

  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> dist;
  if (opts.start && opts.start->size() == n) {
    for (std::size_t i = 0; i < n; ++i) basis(i, 0) = (*opts.start)[i];
  } else {
    for (std::size_t i = 0; i < n; ++i) basis(i, 0) = dist(rng);
  }
  const double n0 = basis.col(0).norm();
  if (n0 == 0.0) throw std::invalid_argument("ground_state: zero start vector");
  basis.col(0) /= n0;

  Eigen::VectorXd w(n), hx(n), x(n);
  int m = 1;            // current basis size; H has been applied to columns [0, m-1)
  int applications = 0;

  auto record = [&](double energy, double residual) {
    result.energy = energy;
    result.residual = residual;
    result.iterations = applications;
    result.vector.assign(x.data(), x.data() + n);
  };

  while (applications < opts.max_iter) {
    // one Lanczos step from the newest basis vector, fully reorthogonalized
    apply(op, basis.col(m - 1), w);
    ++applications;
    Eigen::VectorXd h = basis.leftCols(m).transpose() * w;
    w.noalias() -= basis.leftCols(m) * h;
    Eigen::VectorXd h2 = basis.leftCols(m).transpose() * w;
    w.noalias() -= basis.leftCols(m) * h2;
    h += h2;
    proj.block(0, m - 1, m, 1) = h;
    proj.block(m - 1, 0, 1, m) = h.transpose();

    const double b_next = w.norm();
    const bool invariant = b_next < 1e-14 * scale;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(proj.topLeftCorner(m, m));
    const double est = b_next * std::abs(es.eigenvectors()(m - 1, 0));

    if (est < 0.1 * abs_tol || invariant || m == m_cap || applications >= opts.max_iter) {
      // candidate looks good (or we must restart): verify the true residual
      x.noalias() = basis.leftCols(m) * es.eigenvectors().col(0);
      x.normalize();
      apply(op, x, hx);
      ++applications;
      const double energy = x.dot(hx);
      const double res = (hx - energy * x).norm();
      record(energy, res);
      if (res <= abs_tol || invariant) {
        result.converged = true;
        return result;
      }
      if (m == m_cap) {
        // thick restart: keep the k_keep lowest Ritz vectors plus the
        // current Lanczos residual direction
        const Eigen::MatrixXd kept = basis.leftCols(m) * es.eigenvectors().leftCols(k_keep);
        basis.leftCols(k_keep) = kept;
        proj.setZero();
        for (int i = 0; i < k_keep; ++i) proj(i, i) = es.eigenvalues()(i);
        if (invariant || b_next == 0.0) {
          for (std::size_t i = 0; i < n; ++i) w(i) = dist(rng);
        }
        // one safety pass against the kept vectors
        w.noalias() -= basis.leftCols(k_keep) * (basis.leftCols(k_keep).transpose() * w);
        basis.col(k_keep) = w / w.norm();
        m = k_keep + 1;
        continue;
      }
    }
    if (m < m_cap && !invariant) {
      basis.col(m) = w / b_next;
      ++m;
    }
  }
  result.converged = false;
  return result;
}

std::vector<double> dense_spectrum(const SparseOperator& op) {
  const std::size_t n = op.dim();
  if (n > 4000) throw std::invalid_argument("dense_spectrum: dimension exceeds 4000");
  Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    const auto cols = op.row_cols(r);
    const auto vals = op.row_values(r);
    for (std::size_t k = 0; k < cols.size(); ++k) dense(r, cols[k]) = vals[k];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense, Eigen::EigenvaluesOnly);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = es.eigenvalues()(i);
  return out;
}

}  // namespace jch
