#include "qlab/povm.hpp"

#include "parallel.hpp"
#include "qlab/error.hpp"
#include "qlab/husimi.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qlab {

namespace {

constexpr double kClampTolerance = 1e-10;

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

void check_povm_spin(const SlotPovm& povm, SpinLength s) {
  for (const auto& e : povm.elements) {
    if (e.spin != s) {
      throw std::invalid_argument("POVM spin does not match state spin");
    }
  }
}

}  // namespace

double SlotPovm::completeness_residual() const {
  if (elements.empty()) {
    return 0.0;
  }
  const int d = elements.front().spin.dim();
  Matrix sum = Matrix::Zero(d, d);
  for (const auto& e : elements) {
    sum += e.matrix;
  }
  return (sum - Matrix::Identity(d, d)).cwiseAbs().maxCoeff();
}

double HiddenJointTable::total() const {
  double sum = 0.0;
  for (double v : p) {
    sum += v;
  }
  return sum;
}

RealMatrix HiddenJointTable::marginal_first() const {
  RealMatrix out = RealMatrix::Zero(shape[0], shape[2]);
  for (int m = 0; m < shape[0]; ++m)
    for (int mb = 0; mb < shape[1]; ++mb)
      for (int n = 0; n < shape[2]; ++n)
        for (int nb = 0; nb < shape[3]; ++nb) out(m, n) += at(m, mb, n, nb);
  return out;
}

RealMatrix HiddenJointTable::marginal_second() const {
  RealMatrix out = RealMatrix::Zero(shape[1], shape[3]);
  for (int m = 0; m < shape[0]; ++m)
    for (int mb = 0; mb < shape[1]; ++mb)
      for (int n = 0; n < shape[2]; ++n)
        for (int nb = 0; nb < shape[3]; ++nb) out(mb, nb) += at(m, mb, n, nb);
  return out;
}

RealMatrix HiddenJointTable::marginal_first_second() const {
  RealMatrix out = RealMatrix::Zero(shape[0], shape[3]);
  for (int m = 0; m < shape[0]; ++m)
    for (int mb = 0; mb < shape[1]; ++mb)
      for (int n = 0; n < shape[2]; ++n)
        for (int nb = 0; nb < shape[3]; ++nb) out(m, nb) += at(m, mb, n, nb);
  return out;
}

RealMatrix HiddenJointTable::marginal_second_first() const {
  RealMatrix out = RealMatrix::Zero(shape[1], shape[2]);
  for (int m = 0; m < shape[0]; ++m)
    for (int mb = 0; mb < shape[1]; ++mb)
      for (int n = 0; n < shape[2]; ++n)
        for (int nb = 0; nb < shape[3]; ++nb) out(mb, n) += at(m, mb, n, nb);
  return out;
}

SlotPovm povm_elements(PartitionPtr partition, SpinLength s) {
  if (!partition) {
    throw std::invalid_argument("POVM needs a partition");
  }
  const CoherentTable table(s, partition->grid);
  const Matrix& c = table.amplitudes();
  const double f = s.dim() / (4.0 * kPi);

  std::vector<std::vector<Eigen::Index>> members(partition->n_slots);
  for (std::size_t j = 0; j < partition->labels.size(); ++j) {
    members[partition->labels[j]].push_back(static_cast<Eigen::Index>(j));
  }

  SlotPovm povm{partition, std::vector<PovmElement>(partition->n_slots, PovmElement{s, 0, {}})};
  detail::parallel_for(members.size(), [&](std::size_t k) {
    const auto& idx = members[k];
    Matrix scaled(s.dim(), static_cast<Eigen::Index>(idx.size()));
    for (std::size_t col = 0; col < idx.size(); ++col) {
      scaled.col(static_cast<Eigen::Index>(col)) = std::sqrt(partition->grid->weights[idx[col]]) * c.col(idx[col]);
    }
    Matrix p = f * (scaled * scaled.adjoint());
    povm.elements[k].slot = static_cast<int>(k);
    povm.elements[k].matrix = 0.5 * (p + p.adjoint());
  });
  return povm;
}

KrausOperator kraus_from_povm(const PovmElement& element) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(element.matrix);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("eigendecomposition of POVM element failed");
  }
  RealVector values = solver.eigenvalues();
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (values(i) < -kClampTolerance) {
      throw NumericalError("POVM element for slot " + std::to_string(element.slot) + " has eigenvalue " +
                           std::to_string(values(i)) + "; quadrature grid too coarse");
    }
    values(i) = std::sqrt(std::max(0.0, values(i)));
  }
  const Matrix& v = solver.eigenvectors();
  return {v * values.cast<Complex>().asDiagonal() * v.adjoint()};
}

std::vector<KrausOperator> kraus_from_povm(const SlotPovm& povm) {
  std::vector<KrausOperator> out;
  out.reserve(povm.elements.size());
  for (const auto& e : povm.elements) {
    out.push_back(kraus_from_povm(e));
  }
  return out;
}

JointOutcomeTable joint_probabilities(const StateEnsemble& state, const SlotPovm& a, const SlotPovm& b,
                                      ProbabilityRoute route) {
  check_povm_spin(a, state.spin);
  check_povm_spin(b, state.spin);
  JointOutcomeTable table;
  table.route = route;
  if (route == ProbabilityRoute::q_integration) {
    if (!a.partition || !b.partition) {
      throw std::invalid_argument("Q-integration route needs the POVM partitions");
    }
    table.w = integrate_q_over_slots(state, *a.partition, *b.partition);
  } else {
    const auto na = static_cast<Eigen::Index>(a.elements.size());
    const auto nb = static_cast<Eigen::Index>(b.elements.size());
    table.w = RealMatrix::Zero(na, nb);
    for (std::size_t k = 0; k < state.components.size(); ++k) {
      const Matrix& psi = state.components[k];
      for (Eigen::Index m = 0; m < na; ++m) {
        const Matrix left = a.elements[m].matrix * psi;
        for (Eigen::Index n = 0; n < nb; ++n) {
          const Matrix both = left * b.elements[n].matrix.transpose();
          table.w(m, n) += state.weights[k] * psi.cwiseProduct(both.conjugate()).sum().real();
        }
      }
    }
  }
  for (Eigen::Index i = 0; i < table.w.size(); ++i) {
    double& v = table.w.data()[i];
    if (v < 0.0) {
      if (v < -1e-12) {
        ++table.clamped_entries;
      }
      v = 0.0;
    }
  }
  return table;
}

JointOutcomeTable joint_probabilities(const TwoSpinState& state, const SlotPovm& a, const SlotPovm& b,
                                      ProbabilityRoute route) {
  return joint_probabilities(StateEnsemble::from_state(state), a, b, route);
}

DensityOperator reduced_state(const DensityOperator& rho, const std::vector<KrausOperator>& kraus_a,
                              const std::vector<KrausOperator>& kraus_b, int m, int n, double threshold) {
  if (m < 0 || m >= static_cast<int>(kraus_a.size()) || n < 0 || n >= static_cast<int>(kraus_b.size())) {
    throw std::invalid_argument("outcome index out of range");
  }
  const int d = rho.spin.dim();
  if (rho.rho.rows() != d * d || kraus_a[m].matrix.rows() != d || kraus_b[n].matrix.rows() != d) {
    throw std::invalid_argument("Kraus operator dimension does not match state");
  }
  const Matrix k = kron(kraus_a[m].matrix, kraus_b[n].matrix);
  Matrix out = k * rho.rho * k.adjoint();
  const double w = out.trace().real();
  if (!(w >= threshold)) {
    throw std::domain_error("outcome (" + std::to_string(m) + ", " + std::to_string(n) + ") has probability " +
                            std::to_string(w) + "; reduced state undefined");
  }
  out /= w;
  return {rho.spin, 0.5 * (out + out.adjoint())};
}

StateEnsemble apply_kraus(const StateEnsemble& state, const KrausOperator& a, const KrausOperator& b) {
  StateEnsemble out{state.spin, state.weights, {}};
  out.components.reserve(state.components.size());
  const Matrix bt = b.matrix.transpose();
  for (const Matrix& psi : state.components) {
    out.components.push_back(a.matrix * psi * bt);
  }
  return out;
}

HiddenJointTable hidden_joint_distribution(const StateEnsemble& state, const SlotPartition& part_a,
                                           const SlotPartition& part_a_bar, const SlotPartition& part_b,
                                           const SlotPartition& part_b_bar) {
  const PartitionPtr cells_a = partition_intersection(part_a, part_a_bar);
  const PartitionPtr cells_b = partition_intersection(part_b, part_b_bar);
  const RealMatrix bins = integrate_q_over_slots(state, *cells_a, *cells_b);

  HiddenJointTable table;
  table.shape = {part_a.n_slots, part_a_bar.n_slots, part_b.n_slots, part_b_bar.n_slots};
  table.p.assign(static_cast<std::size_t>(table.shape[0]) * table.shape[1] * table.shape[2] * table.shape[3], 0.0);
  for (int i = 0; i < cells_a->n_slots; ++i) {
    const auto [m, mbar] = cells_a->parents[i];
    for (int j = 0; j < cells_b->n_slots; ++j) {
      const auto [n, nbar] = cells_b->parents[j];
      table.at(m, mbar, n, nbar) = bins(i, j);
    }
  }
  return table;
}

}  // namespace qlab
