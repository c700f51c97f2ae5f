#ifndef JCH_EIGENSOLVER_HPP
#define JCH_EIGENSOLVER_HPP

#include <vector>

#include "jch/sparse.hpp"

namespace jch {

// Converged (or not) lowest eigenpair with residual diagnostics.
struct GroundState {
  double energy = 0.0;
  std::vector<double> vector;
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

struct SolverOptions {
  double tol = 1e-10;  // relative to the matrix norm_inf
  int max_iter = 5000; // matrix applications
  unsigned seed = 12345;
  int krylov_dim = 200;                 // restart threshold
  const std::vector<double>* start = nullptr;  // optional warm start
};

// Lanczos with full reorthogonalization and thick restart (the lowest few
// Ritz vectors are kept across restarts). Deterministic given the seed.
// Never throws on non-convergence; the result carries converged=false and
// the last iterate.
GroundState ground_state(const SparseOperator& op, const SolverOptions& opts = {});

// Dense full spectrum, ascending. Test oracle and small-block workhorse;
// refuses dimensions above 4000.
std::vector<double> dense_spectrum(const SparseOperator& op);

}  // namespace jch

#endif
