// Deformation-gradient kinematics and the Eulerian <-> Lagrangian
// transformation algebra for differential forms and constitutive tensors.
//
// Conventions (X: undeformed coordinates, x = X + u):
//   F = I + Grad u,  J = det F,  E = 1/2 (F^T F - I)
//   one-forms pull back by F^T          (E_L = F^T e, A_s = F^T a_s)
//   two-forms pull back by J F^-1       (B_L = J F^-1 b, J_L = J F^-1 j)
//   conductivity-like tensors by J F^-1 (.) F^-T, reluctivity-like by
//   J^-1 F^T (.) F
//   stresses: P = F S, sigma = J^-1 F S F^T
//   matter flow V = -F^-1 v

#ifndef SMP_KINEMATICS_HPP
#define SMP_KINEMATICS_HPP

#include <stdexcept>

#include "smp/types.hpp"

namespace smp {

struct DeformationState {
  Mat3 F;
  double J;
  Mat3 Finv;
  Mat3 E;
};

// Closed-form 3x3 inverse via the adjugate; deterministic, no pivoting.
template <typename Derived>
Mat3 inverse3(const Eigen::MatrixBase<Derived>& m, double det) {
  Mat3 adj;
  adj(0, 0) = m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1);
  adj(0, 1) = m(0, 2) * m(2, 1) - m(0, 1) * m(2, 2);
  adj(0, 2) = m(0, 1) * m(1, 2) - m(0, 2) * m(1, 1);
  adj(1, 0) = m(1, 2) * m(2, 0) - m(1, 0) * m(2, 2);
  adj(1, 1) = m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0);
  adj(1, 2) = m(0, 2) * m(1, 0) - m(0, 0) * m(1, 2);
  adj(2, 0) = m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0);
  adj(2, 1) = m(0, 1) * m(2, 0) - m(0, 0) * m(2, 1);
  adj(2, 2) = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  return adj / det;
}

inline DeformationState deformation_from_displacement(const Mat3& grad_u) {
  DeformationState d;
  d.F = Mat3::Identity() + grad_u;
  d.J = d.F.determinant();
  if (d.J <= 1e-12) throw std::runtime_error("element inversion: det F <= 0");
  d.Finv = inverse3(d.F, d.J);
  d.E = 0.5 * (d.F.transpose() * d.F - Mat3::Identity());
  return d;
}

inline Mat3 green_lagrange(const Mat3& F) {
  return 0.5 * (F.transpose() * F - Mat3::Identity());
}

// One-forms: Lagrangian = F^T (Eulerian).
template <typename VecDerived, typename MatDerived>
Vec3 pull_one_form(const Eigen::MatrixBase<VecDerived>& f_eulerian,
                   const Eigen::MatrixBase<MatDerived>& F) {
  return F.transpose() * f_eulerian;
}

template <typename VecDerived, typename MatDerived>
Vec3 push_one_form(const Eigen::MatrixBase<VecDerived>& f_lagrangian,
                   const Eigen::MatrixBase<MatDerived>& Finv) {
  return Finv.transpose() * f_lagrangian;
}

// Two-forms: Lagrangian = J F^-1 (Eulerian).
template <typename VecDerived, typename MatDerived>
Vec3 pull_two_form(const Eigen::MatrixBase<VecDerived>& f_eulerian,
                   const Eigen::MatrixBase<MatDerived>& Finv, double J) {
  return J * (Finv * f_eulerian);
}

template <typename VecDerived, typename MatDerived>
Vec3 push_two_form(const Eigen::MatrixBase<VecDerived>& f_lagrangian,
                   const Eigen::MatrixBase<MatDerived>& F, double J) {
  return (F * f_lagrangian) / J;
}

// Conductivity-like second-order tensors: J F^-1 (.) F^-T.
template <typename TDerived, typename MatDerived>
Mat3 pull_tensor_two(const Eigen::MatrixBase<TDerived>& t_eulerian,
                     const Eigen::MatrixBase<MatDerived>& Finv, double J) {
  return J * (Finv * t_eulerian * Finv.transpose());
}

template <typename TDerived, typename MatDerived>
Mat3 push_tensor_two(const Eigen::MatrixBase<TDerived>& t_lagrangian,
                     const Eigen::MatrixBase<MatDerived>& F, double J) {
  return (F * t_lagrangian * F.transpose()) / J;
}

// Reluctivity-like second-order tensors: J^-1 F^T (.) F.
template <typename TDerived, typename MatDerived>
Mat3 pull_tensor_reluctivity(const Eigen::MatrixBase<TDerived>& t_eulerian,
                             const Eigen::MatrixBase<MatDerived>& F, double J) {
  return (F.transpose() * t_eulerian * F) / J;
}

template <typename TDerived, typename MatDerived>
Mat3 push_tensor_reluctivity(const Eigen::MatrixBase<TDerived>& t_lagrangian,
                             const Eigen::MatrixBase<MatDerived>& Finv,
                             double J) {
  return J * (Finv.transpose() * t_lagrangian * Finv);
}

struct PiolaStresses {
  Mat3 P;      // first Piola-Kirchhoff, P = F S
  Mat3 sigma;  // Cauchy, sigma = J^-1 F S F^T
};

template <typename SDerived, typename MatDerived>
PiolaStresses piola_stress_maps(const Eigen::MatrixBase<SDerived>& S,
                                const Eigen::MatrixBase<MatDerived>& F,
                                double J) {
  PiolaStresses out;
  out.P = F * S;
  out.sigma = (out.P * F.transpose()) / J;
  return out;
}

template <typename SigmaDerived, typename MatDerived>
Mat3 pk2_from_cauchy(const Eigen::MatrixBase<SigmaDerived>& sigma,
                     const Eigen::MatrixBase<MatDerived>& Finv, double J) {
  return J * (Finv * sigma * Finv.transpose());
}

// Lagrangian matter flow for an Eulerian velocity v: V = -F^-1 v.
template <typename VecDerived, typename MatDerived>
Vec3 matter_flow(const Eigen::MatrixBase<VecDerived>& v_eulerian,
                 const Eigen::MatrixBase<MatDerived>& Finv) {
  return -(Finv * v_eulerian);
}

}  // namespace smp

#endif
