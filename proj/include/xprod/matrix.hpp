#ifndef XPROD_MATRIX_HPP
#define XPROD_MATRIX_HPP

/// Dense complex matrices and the operator predicates (projection,
/// partial isometry) the rest of the library is built on.  Matrices are
/// Eigen under the hood; everything here is plain value semantics.

#include <complex>
#include <random>

#include <Eigen/Dense>

#include "xprod/errors.hpp"

namespace xprod {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using Rng = std::mt19937_64;

struct Tolerance {
    double eps = 1e-9;
};

bool all_finite(const ComplexMatrix& m);

/// Largest singular value.  Computed from the top eigenvalue of m* m, which
/// is accurate for the dominant singular value even on large matrices.
double spectral_norm(const ComplexMatrix& m);

/// Smallest eigenvalue of the Hermitian part (m + m*)/2.
double min_hermitian_eigenvalue(const ComplexMatrix& m);

bool is_projection(const ComplexMatrix& m, Tolerance tol = {});

/// ||M M* M - M|| <= eps.  Requires a square matrix.
bool is_partial_isometry(const ComplexMatrix& m, Tolerance tol = {});

struct HalmosWallenResult {
    bool predicted;         // S*S commutes with TT*
    bool actual;            // ST is a partial isometry
    double commutator_norm; // ||[S*S, TT*]||
};

/// Product-of-partial-isometries criterion: ST is a partial isometry iff
/// S*S commutes with TT*.  Throws NotPartialIsometry if S or T fails the
/// pre-check.
HalmosWallenResult halmos_wallen_check(const ComplexMatrix& s, const ComplexMatrix& t,
                                       Tolerance tol = {});

ComplexMatrix random_gaussian_matrix(int rows, int cols, Rng& rng);
ComplexMatrix random_unitary(int n, Rng& rng);

/// Gaussian matrix, SVD, then each singular value is independently snapped
/// to 0 or 1.  Covers every rank including 0 and n.
ComplexMatrix random_partial_isometry(int n, Rng& rng);

} // namespace xprod

#endif
