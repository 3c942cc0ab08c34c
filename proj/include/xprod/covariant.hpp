#ifndef XPROD_COVARIANT_HPP
#define XPROD_COVARIANT_HPP

/// Covariant representations: a faithful unital embedding sigma of the
/// algebra into matrices on a concrete Hilbert space together with a
/// partial-isometry semigroup generated by U1.

#include "xprod/interaction.hpp"

namespace xprod {

class CovariantRep {
  public:
    /// sigma_units[b] lists the images of the matrix units of block b in
    /// row-major order.  Construction validates that the linear extension is
    /// a unital *-monomorphism and that U1 is a partial isometry.
    CovariantRep(FiniteCStarAlgebra algebra, int hilbert_dim,
                 std::vector<std::vector<ComplexMatrix>> sigma_units, ComplexMatrix u1,
                 Tolerance tol = {});

    /// Defining block-diagonal embedding; hilbert_dim is the ambient size.
    static CovariantRep inclusion(const FiniteCStarAlgebra& algebra, ComplexMatrix u1,
                                  Tolerance tol = {});

    const FiniteCStarAlgebra& algebra() const { return algebra_; }
    int hilbert_dim() const { return hilbert_dim_; }

    ComplexMatrix sigma(const AlgebraElement& a) const;
    const ComplexMatrix& sigma_unit(int block, int i, int j) const;

    /// U1^n, cached; n = 0 is the identity.
    const ComplexMatrix& u_power(int n) const;

    /// Least-squares decomposition of m over sigma's image.
    struct MembershipResult {
        AlgebraElement element;
        double residual;
    };
    MembershipResult project_to_image(const ComplexMatrix& m) const;

    /// Same representation with U1 scaled by a unimodular lambda (so U_n
    /// picks up lambda^n).  Throws NotUnimodular.
    CovariantRep gauge_rotate(Complex lambda, Tolerance tol = {}) const;

  private:
    FiniteCStarAlgebra algebra_;
    int hilbert_dim_ = 0;
    std::vector<std::vector<ComplexMatrix>> sigma_units_;
    ComplexMatrix u1_;
    struct Cache {
        std::mutex mu;
        std::vector<ComplexMatrix> powers;
        std::optional<Eigen::CompleteOrthogonalDecomposition<ComplexMatrix>> image_solver;
        std::optional<ComplexMatrix> image_basis;
    };
    std::shared_ptr<Cache> cache_;

    void validate(Tolerance tol) const;
};

/// Covariance of the representation against a certified interaction: every
/// U_x is a partial isometry, sigma(V_x(a)) = U_x sigma(a) U_x*, and
/// U_x* sigma(a) U_x lands in sigma(A) where it equals sigma(H_x(a)).
InteractionReport verify_covariant(const CovariantRep& rep, const Interaction& in, int x_max,
                                   int num_samples, Tolerance tol, Rng& rng);

/// Certifies that U_x is a partial isometry for every x <= x_max from the
/// product criterion alone: with U1 a partial isometry and the initial
/// projection of each U_x commuting with the range projection of U1, the
/// powers stay partial isometries inductively.
struct PartialIsometryCertificate {
    bool certified = true;
    int up_to = 0;
    double worst_commutator = 0.0;
};
PartialIsometryCertificate strengthened_partial_isometry_certificate(const CovariantRep& rep,
                                                                     int x_max, Tolerance tol);

/// Truncated copy of the representation living on the window [-W, W] of
/// integer coordinates: algebra elements act block-diagonally, the step
/// generators shift the coordinate and apply the corresponding U power,
/// and anything shifted outside the window is cut to zero.
class RegularAmplification {
  public:
    RegularAmplification(CovariantRep base, int window);

    const CovariantRep& base() const { return base_; }
    int window() const { return window_; }
    int dim() const { return (2 * window_ + 1) * base_.hilbert_dim(); }

    /// Row offset of integer coordinate g in the stacked space.
    int offset(int g) const { return (g + window_) * base_.hilbert_dim(); }

  private:
    CovariantRep base_;
    int window_;
};

RegularAmplification amplify_regular(const CovariantRep& rep, int window);

} // namespace xprod

#endif
