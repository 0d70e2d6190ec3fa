// Sparse direct solve (LU) with symbolic-analysis reuse across factorizations
// that share a sparsity pattern.

#ifndef SMP_LINEAR_SOLVER_HPP
#define SMP_LINEAR_SOLVER_HPP

#include <cstdint>
#include <memory>

#include "smp/types.hpp"

namespace smp {

class DirectSolver {
 public:
  DirectSolver();
  ~DirectSolver();
  DirectSolver(DirectSolver&&) noexcept;
  DirectSolver& operator=(DirectSolver&&) noexcept;

  // Factorizes A. pattern_key identifies the sparsity pattern; the symbolic
  // analysis is redone only when the key changes. Returns false when the
  // matrix is singular.
  bool factor(const SpMat& A, std::uint64_t pattern_key);
  VecX solve(const VecX& b) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace smp

#endif
