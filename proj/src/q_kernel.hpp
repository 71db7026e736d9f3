#pragma once

#include "parallel.hpp"
#include "qlab/spin.hpp"

#include <algorithm>
#include <vector>

namespace qlab::detail {

/// Two-party Q values on a product grid, produced in row blocks so large
/// tables never need to be materialized.
///
/// Q(i, j) = scale * sum_k w_k |(C_A^H Psi_k conj(C_B))(i, j)|^2
class QKernel {
 public:
  QKernel(const StateEnsemble& state, const Matrix& coh_a, const Matrix& coh_b)
      : coh_a_(coh_a), cols_(coh_b.cols()), weights_(state.weights) {
    const double f = (state.spin.dim()) / (4.0 * kPi);
    scale_ = f * f;
    const Matrix conj_b = coh_b.conjugate();
    projected_.reserve(state.components.size());
    for (const Matrix& psi : state.components) {
      projected_.push_back(psi * conj_b);
    }
  }

  Eigen::Index rows() const { return coh_a_.cols(); }
  Eigen::Index cols() const { return cols_; }

  void fill(Eigen::Index begin, Eigen::Index end, RealMatrix& out) const {
    const Eigen::Index n = end - begin;
    out.setZero(n, cols_);
    const Matrix bra = coh_a_.middleCols(begin, n).adjoint();
    for (std::size_t k = 0; k < projected_.size(); ++k) {
      const Matrix amp = bra * projected_[k];
      out += (scale_ * weights_[k]) * amp.cwiseAbs2();
    }
  }

 private:
  const Matrix& coh_a_;
  Eigen::Index cols_;
  std::vector<double> weights_;
  std::vector<Matrix> projected_;
  double scale_ = 1.0;
};

inline constexpr Eigen::Index kRowBlock = 32;

/// Calls body(begin, end) -> T for each row block in parallel and returns the
/// per-block results in block order.
template <typename T, typename Body>
std::vector<T> map_row_blocks(Eigen::Index rows, Body body) {
  const std::size_t blocks = static_cast<std::size_t>((rows + kRowBlock - 1) / kRowBlock);
  std::vector<T> results(blocks);
  parallel_for(blocks, [&](std::size_t b) {
    const Eigen::Index begin = static_cast<Eigen::Index>(b) * kRowBlock;
    const Eigen::Index end = std::min(rows, begin + kRowBlock);
    results[b] = body(begin, end);
  });
  return results;
}

}  // namespace qlab::detail
