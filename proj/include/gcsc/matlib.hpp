#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <vector>

namespace gcsc {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

enum class ErrorKind {
  NotPsd,
  RankDeficient,
  NotHurwitz,
  SingularSystem,
  NoStabilizingSolution,
  NotStructured,
  Sc1Violated,
  TailTooLarge,
  NotStabilizing,
  NoIndividuallyRationalPoint,
  Validation,
  Dimension,
  EigenFailure,
  InvalidArgument,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

inline Matrix symmetrize(const Matrix& m) { return 0.5 * (m + m.transpose()); }

inline void require_finite(const Matrix& m, const std::string& name) {
  if (!m.allFinite())
    throw Error(ErrorKind::Validation, name + ": non-finite entries");
}

struct SymEig {
  Vector eigenvalues;   // ascending
  Matrix eigenvectors;  // orthonormal columns
};

inline SymEig sym_eig(const Matrix& m) {
  if (m.rows() != m.cols())
    throw Error(ErrorKind::Dimension, "sym_eig: matrix not square");
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(m));
  if (es.info() != Eigen::Success)
    throw Error(ErrorKind::EigenFailure, "sym_eig: eigensolver failed");
  return {es.eigenvalues(), es.eigenvectors()};
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline Matrix direct_sum(const std::vector<Matrix>& blocks) {
  Eigen::Index n = 0;
  for (const auto& b : blocks) {
    if (b.rows() != b.cols())
      throw Error(ErrorKind::Dimension, "direct_sum: non-square block");
    n += b.rows();
  }
  Matrix out = Matrix::Zero(n, n);
  Eigen::Index off = 0;
  for (const auto& b : blocks) {
    out.block(off, off, b.rows(), b.rows()) = b;
    off += b.rows();
  }
  return out;
}

// Symmetric PSD square root. Eigenvalues below -1e-10 are rejected, tiny
// negatives from rounding are clamped to zero.
inline Matrix sym_sqrt_psd(const Matrix& m) {
  SymEig e = sym_eig(m);
  Vector w = e.eigenvalues;
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    if (w(i) < -1e-10)
      throw Error(ErrorKind::NotPsd,
                  "sym_sqrt_psd: eigenvalue " + std::to_string(w(i)));
    if (w(i) < 1e-12) w(i) = 0.0;
  }
  return e.eigenvectors * w.cwiseSqrt().asDiagonal() *
         e.eigenvectors.transpose();
}

// Orthonormal basis of the kernel, rank determined by singular values above
// 1e-10 * sigma_max.
inline Matrix orthonormal_null_basis(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  double smax = sv.size() > 0 ? sv(0) : 0.0;
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > 1e-10 * smax) ++rank;
  Matrix v = svd.matrixV();
  return v.rightCols(v.cols() - rank);
}

// I - C'(CC')^{-1} C, the projector onto the orthogonal complement of the
// row space of C. Requires full row rank.
inline Matrix rowspace_complement_projector(const Matrix& c) {
  Matrix gram = c * c.transpose();
  SymEig e = sym_eig(gram);
  double lo = e.eigenvalues(0);
  double hi = e.eigenvalues(e.eigenvalues.size() - 1);
  if (lo <= 0.0 || hi / lo > 1e12)
    throw Error(ErrorKind::RankDeficient,
                "rowspace_complement_projector: C C' ill conditioned");
  Matrix pi = Matrix::Identity(c.cols(), c.cols()) -
              c.transpose() * gram.llt().solve(c);
  return symmetrize(pi);
}

inline double hurwitz_margin(const Matrix& m) {
  if (m.rows() != m.cols())
    throw Error(ErrorKind::Dimension, "hurwitz_margin: matrix not square");
  Eigen::EigenSolver<Matrix> es(m, false);
  if (es.info() != Eigen::Success)
    throw Error(ErrorKind::EigenFailure, "hurwitz_margin: eigensolver failed");
  return es.eigenvalues().real().maxCoeff();
}

inline double spectral_radius(const Matrix& m) {
  Eigen::EigenSolver<Matrix> es(m, false);
  if (es.info() != Eigen::Success)
    throw Error(ErrorKind::EigenFailure, "spectral_radius: eigensolver failed");
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace gcsc
