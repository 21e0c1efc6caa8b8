#pragma once

// Dense real-matrix primitives shared by every other module.
//
// All routines are pure functions on small (dimension <= ~32) matrices. They
// throw NumericalError when a numerical precondition fails.

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace adrc {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using ComplexVector = Eigen::VectorXcd;

class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Relative singular-value threshold used for every rank decision.
inline constexpr double kRankTolerance = 1e-9;
// Default stability margin for is_hurwitz.
inline constexpr double kHurwitzTolerance = 1e-9;

enum class PairMode { Reachability, Observability };

bool all_finite(const Matrix& x);
void require_finite(const Matrix& x, const std::string& what);

// B† = (BᵀB)⁻¹Bᵀ for a tall matrix with full column rank.
// Throws NumericalError("singular normal equations") otherwise.
Matrix pinv_tall(const Matrix& b);

// Eigenvalues of a general square matrix (Hessenberg reduction + shifted QR).
ComplexVector eigenvalues(const Matrix& x);

// True iff every eigenvalue has real part < -tol.
bool is_hurwitz(const Matrix& x, double tol = kHurwitzTolerance);

// Largest real part over the spectrum.
double spectral_abscissa(const Matrix& x);

// Solves HᵀN + NH = -2M for symmetric positive-definite N.
// H must be Hurwitz and M symmetric positive definite.
Matrix solve_lyapunov(const Matrix& h, const Matrix& m);

// Smallest eigenvalue of (S + Sᵀ)/2. S must be symmetric to 1e-9 (relative).
double sym_min_eig(const Matrix& s);

struct SigmaExtrema {
  double min = 0.0;
  double max = 0.0;
};

SigmaExtrema sigma_extrema(const Matrix& x);

// Spectral norm (largest singular value); 0 for empty matrices.
double norm2(const Matrix& x);

// Rank of [G, AG, ..., Aⁿ⁻¹G] (reachability) or of [G; GA; ...; GAⁿ⁻¹]
// (observability, where G plays the role of C).
int pair_rank(const Matrix& a, const Matrix& g, PairMode mode);

// Numerical rank by singular-value threshold kRankTolerance * σmax.
int numerical_rank(const Matrix& x);

// Symmetric positive-definiteness test via Cholesky on the symmetrized matrix.
bool is_symmetric(const Matrix& x, double tol = 1e-9);
bool is_positive_definite(const Matrix& x);

}  // namespace adrc
