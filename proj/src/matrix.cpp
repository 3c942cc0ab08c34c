#include "xprod/matrix.hpp"

#include <cmath>

namespace xprod {

bool all_finite(const ComplexMatrix& m) {
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) return false;
    return true;
}

double spectral_norm(const ComplexMatrix& m) {
    if (m.size() == 0) return 0.0;
    ComplexMatrix gram = m.adjoint() * m;
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(gram, Eigen::EigenvaluesOnly);
    double top = es.eigenvalues().maxCoeff();
    return std::sqrt(std::max(0.0, top));
}

double min_hermitian_eigenvalue(const ComplexMatrix& m) {
    ComplexMatrix h = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

bool is_projection(const ComplexMatrix& m, Tolerance tol) {
    if (m.rows() != m.cols()) return false;
    if (spectral_norm(m - m.adjoint()) > tol.eps) return false;
    return spectral_norm(m * m - m) <= tol.eps;
}

bool is_partial_isometry(const ComplexMatrix& m, Tolerance tol) {
    if (m.rows() != m.cols()) throw Error("is_partial_isometry: matrix must be square");
    return spectral_norm(m * m.adjoint() * m - m) <= tol.eps;
}

HalmosWallenResult halmos_wallen_check(const ComplexMatrix& s, const ComplexMatrix& t,
                                       Tolerance tol) {
    if (s.rows() != s.cols() || t.rows() != t.cols() || s.rows() != t.rows())
        throw NotPartialIsometry("halmos_wallen_check: operands must be square and equal size");
    if (!is_partial_isometry(s, tol))
        throw NotPartialIsometry("halmos_wallen_check: first operand is not a partial isometry");
    if (!is_partial_isometry(t, tol))
        throw NotPartialIsometry("halmos_wallen_check: second operand is not a partial isometry");

    ComplexMatrix initial = s.adjoint() * s;  // initial projection of S
    ComplexMatrix range = t * t.adjoint();    // range projection of T
    double comm = spectral_norm(initial * range - range * initial);
    HalmosWallenResult r;
    r.commutator_norm = comm;
    r.predicted = comm <= tol.eps;
    r.actual = is_partial_isometry(s * t, tol);
    return r;
}

ComplexMatrix random_gaussian_matrix(int rows, int cols, Rng& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    ComplexMatrix m(rows, cols);
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rows; ++i) m(i, j) = Complex(gauss(rng), gauss(rng)) / std::sqrt(2.0);
    return m;
}

ComplexMatrix random_unitary(int n, Rng& rng) {
    ComplexMatrix g = random_gaussian_matrix(n, n, rng);
    Eigen::HouseholderQR<ComplexMatrix> qr(g);
    ComplexMatrix q = qr.householderQ();
    ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    // Fix the phases so the factorization is unique; keeps Q exactly unitary.
    for (int i = 0; i < n; ++i) {
        Complex d = r(i, i);
        double a = std::abs(d);
        q.col(i) *= (a > 0) ? d / a : Complex(1, 0);
    }
    return q;
}

ComplexMatrix random_partial_isometry(int n, Rng& rng) {
    ComplexMatrix g = random_gaussian_matrix(n, n, rng);
    Eigen::JacobiSVD<ComplexMatrix> svd(g, Eigen::ComputeFullU | Eigen::ComputeFullV);
    std::bernoulli_distribution keep(0.5);
    Eigen::VectorXd sv = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < n; ++i) sv(i) = keep(rng) ? 1.0 : 0.0;
    return svd.matrixU() * sv.asDiagonal() * svd.matrixV().adjoint();
}

} // namespace xprod
