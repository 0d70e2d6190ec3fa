#include "smp/linear_solver.hpp"

#include <Eigen/SparseLU>
#include <stdexcept>

namespace smp {

struct DirectSolver::Impl {
  Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>> lu;
  std::uint64_t key = ~std::uint64_t{0};
  bool analyzed = false;
  bool factored = false;
};

DirectSolver::DirectSolver() : impl_(std::make_unique<Impl>()) {}
DirectSolver::~DirectSolver() = default;
DirectSolver::DirectSolver(DirectSolver&&) noexcept = default;
DirectSolver& DirectSolver::operator=(DirectSolver&&) noexcept = default;

bool DirectSolver::factor(const SpMat& A, std::uint64_t pattern_key) {
  SpMat compressed = A;
  compressed.makeCompressed();
  if (!impl_->analyzed || impl_->key != pattern_key) {
    impl_->lu.analyzePattern(compressed);
    impl_->analyzed = true;
    impl_->key = pattern_key;
  }
  impl_->lu.factorize(compressed);
  impl_->factored = impl_->lu.info() == Eigen::Success;
  return impl_->factored;
}

VecX DirectSolver::solve(const VecX& b) const {
  if (!impl_->factored)
    throw std::logic_error("DirectSolver::solve without valid factorization");
  return impl_->lu.solve(b);
}

}  // namespace smp
