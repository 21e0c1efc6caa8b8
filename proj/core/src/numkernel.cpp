#include "adrc/numkernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace adrc {

bool all_finite(const Matrix& x) { return x.allFinite(); }

void require_finite(const Matrix& x, const std::string& what) {
  if (!x.allFinite()) {
    throw std::invalid_argument(what + ": non-finite entry");
  }
}

Matrix pinv_tall(const Matrix& b) {
  require_finite(b, "pinv_tall");
  if (b.rows() < b.cols() || b.cols() == 0) {
    throw NumericalError("singular normal equations: matrix is not tall");
  }
  Eigen::JacobiSVD<Matrix> svd(b);
  const auto& s = svd.singularValues();
  const double smax = s.maxCoeff();
  if (smax == 0.0 || s.minCoeff() <= kRankTolerance * smax) {
    throw NumericalError("singular normal equations");
  }
  const Matrix gram = b.transpose() * b;
  Eigen::LDLT<Matrix> ldlt(gram);
  if (ldlt.info() != Eigen::Success) {
    throw NumericalError("singular normal equations");
  }
  return ldlt.solve(b.transpose());
}

ComplexVector eigenvalues(const Matrix& x) {
  if (x.rows() != x.cols()) {
    throw std::invalid_argument("eigenvalues: matrix must be square");
  }
  require_finite(x, "eigenvalues");
  Eigen::EigenSolver<Matrix> es(x, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success) {
    throw NumericalError("spectrum failure");
  }
  return es.eigenvalues();
}

double spectral_abscissa(const Matrix& x) {
  const ComplexVector ev = eigenvalues(x);
  double worst = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    worst = std::max(worst, ev[i].real());
  }
  return worst;
}

bool is_hurwitz(const Matrix& x, double tol) {
  if (!(tol > 0.0)) {
    throw std::invalid_argument("is_hurwitz: tol must be positive");
  }
  return spectral_abscissa(x) < -tol;
}

bool is_symmetric(const Matrix& x, double tol) {
  if (x.rows() != x.cols()) return false;
  const double scale = std::max(1.0, x.cwiseAbs().maxCoeff());
  return (x - x.transpose()).cwiseAbs().maxCoeff() <= tol * scale;
}

bool is_positive_definite(const Matrix& x) {
  if (x.rows() != x.cols() || x.rows() == 0) return false;
  const Matrix sym = 0.5 * (x + x.transpose());
  Eigen::LLT<Matrix> llt(sym);
  return llt.info() == Eigen::Success;
}

Matrix solve_lyapunov(const Matrix& h, const Matrix& m) {
  const Eigen::Index d = h.rows();
  if (h.cols() != d || m.rows() != d || m.cols() != d) {
    throw std::invalid_argument("solve_lyapunov: dimension mismatch");
  }
  if (!is_symmetric(m) || !is_positive_definite(m)) {
    throw std::invalid_argument("solve_lyapunov: M must be symmetric positive definite");
  }
  if (!is_hurwitz(h)) {
    throw NumericalError("no positive-definite solution: H is not Hurwitz");
  }

  // Column-major vec: vec(HᵀN) = (I ⊗ Hᵀ) vec N, vec(NH) = (Hᵀ ⊗ I) vec N.
  const Matrix ht = h.transpose();
  Matrix op = Matrix::Zero(d * d, d * d);
  for (Eigen::Index j = 0; j < d; ++j) {
    op.block(j * d, j * d, d, d) += ht;
    for (Eigen::Index i = 0; i < d; ++i) {
      op.block(j * d, i * d, d, d).diagonal().array() += ht(j, i);
    }
  }
  const Vector rhs = -2.0 * Eigen::Map<const Vector>(m.data(), d * d);
  Eigen::FullPivLU<Matrix> lu(op);
  if (!lu.isInvertible()) {
    throw NumericalError("no positive-definite solution: singular Lyapunov operator");
  }
  const Vector sol = lu.solve(rhs);
  Matrix n = Eigen::Map<const Matrix>(sol.data(), d, d);
  n = 0.5 * (n + n.transpose());

  const double residual = (ht * n + n * h + 2.0 * m).norm();
  if (residual > 1e-9 * std::max(1.0, m.norm()) * std::max(1.0, n.norm())) {
    throw NumericalError("no positive-definite solution: residual check failed");
  }
  if (!is_positive_definite(n)) {
    throw NumericalError("no positive-definite solution");
  }
  return n;
}

double sym_min_eig(const Matrix& s) {
  if (s.rows() != s.cols() || s.rows() == 0) {
    throw std::invalid_argument("sym_min_eig: matrix must be square and non-empty");
  }
  require_finite(s, "sym_min_eig");
  if (!is_symmetric(s)) {
    throw std::invalid_argument("sym_min_eig: matrix is not symmetric");
  }
  const Matrix sym = 0.5 * (s + s.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw NumericalError("spectrum failure");
  }
  return es.eigenvalues().minCoeff();
}

SigmaExtrema sigma_extrema(const Matrix& x) {
  if (x.size() == 0) return {};
  require_finite(x, "sigma_extrema");
  Eigen::JacobiSVD<Matrix> svd(x);
  const auto& s = svd.singularValues();
  return {s.minCoeff(), s.maxCoeff()};
}

double norm2(const Matrix& x) { return sigma_extrema(x).max; }

int numerical_rank(const Matrix& x) {
  if (x.size() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(x);
  const auto& s = svd.singularValues();
  const double smax = s.maxCoeff();
  if (smax == 0.0) return 0;
  return static_cast<int>((s.array() >= kRankTolerance * smax).count());
}

int pair_rank(const Matrix& a, const Matrix& g, PairMode mode) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n) {
    throw std::invalid_argument("pair_rank: A must be square");
  }
  if (mode == PairMode::Reachability) {
    if (g.rows() != n) throw std::invalid_argument("pair_rank: G rows must match A");
    const Eigen::Index q = g.cols();
    Matrix r(n, n * q);
    Matrix block = g;
    for (Eigen::Index i = 0; i < n; ++i) {
      r.middleCols(i * q, q) = block;
      block = a * block;
    }
    return numerical_rank(r);
  }
  if (g.cols() != n) throw std::invalid_argument("pair_rank: C cols must match A");
  const Eigen::Index l = g.rows();
  Matrix o(n * l, n);
  Matrix block = g;
  for (Eigen::Index i = 0; i < n; ++i) {
    o.middleRows(i * l, l) = block;
    block = block * a;
  }
  return numerical_rank(o);
}

}  // namespace adrc
