#ifndef XPROD_MAPS_HPP
#define XPROD_MAPS_HPP

/// Positive linear maps on a finite-dimensional C*-algebra and the
/// semigroup actions of the naturals they generate.  A map is carried
/// either as a conjugation a -> K a K* (positive by construction) or as a
/// superoperator matrix acting on matrix-unit coordinates.

#include <map>
#include <memory>
#include <mutex>
#include <optional>

#include "xprod/algebra.hpp"

namespace xprod {

class LinearMapOnAlgebra {
  public:
    enum class Form { Conjugation, Superoperator };

    static LinearMapOnAlgebra identity(const FiniteCStarAlgebra& algebra);
    static LinearMapOnAlgebra conjugation(AlgebraElement k);
    static LinearMapOnAlgebra superoperator(FiniteCStarAlgebra algebra, ComplexMatrix m);

    /// Superoperator built column-by-column from the images of the
    /// matrix-unit basis under `fn`.
    template <class Fn>
    static LinearMapOnAlgebra from_function(const FiniteCStarAlgebra& algebra, Fn&& fn) {
        ComplexMatrix m(algebra.dim(), algebra.dim());
        int col = 0;
        for (int b = 0; b < algebra.num_blocks(); ++b)
            for (int i = 0; i < algebra.block_dim(b); ++i)
                for (int j = 0; j < algebra.block_dim(b); ++j)
                    m.col(col++) = fn(algebra.matrix_unit(b, i, j)).vec();
        return superoperator(algebra, std::move(m));
    }

    const FiniteCStarAlgebra& algebra() const { return algebra_; }
    Form form() const { return form_; }

    AlgebraElement apply(const AlgebraElement& a) const;
    LinearMapOnAlgebra compose(const LinearMapOnAlgebra& inner) const;  // this after inner

    const ComplexMatrix& superoperator_matrix() const;

    /// ||f(a*) - f(a)*|| over the matrix-unit basis.
    double star_preservation_defect() const;

  private:
    LinearMapOnAlgebra() = default;
    FiniteCStarAlgebra algebra_;
    Form form_ = Form::Superoperator;
    std::optional<AlgebraElement> k_;
    mutable std::optional<ComplexMatrix> sup_;
};

/// Semigroup action of the naturals generated by one map; iterates are
/// memoized behind a shared, lock-protected cache so copies stay cheap and
/// concurrent readers see consistent values.
class Action {
  public:
    explicit Action(LinearMapOnAlgebra generator);

    const FiniteCStarAlgebra& algebra() const { return generator_.algebra(); }
    const LinearMapOnAlgebra& generator() const { return generator_; }

    /// n-fold iterate; n = 0 is the identity.
    const LinearMapOnAlgebra& iterate(int n) const;
    /// apply(0, a) returns a unchanged, bit for bit.
    AlgebraElement apply(int n, const AlgebraElement& a) const;
    /// Pre-computes iterates up to n so later reads are cache hits.
    void warm(int n) const;

  private:
    struct Cache {
        std::mutex mu;
        std::map<int, LinearMapOnAlgebra> iterates;
    };
    LinearMapOnAlgebra generator_;
    std::shared_ptr<Cache> cache_;
};

struct PositivityReport {
    bool positive = true;
    double min_eigenvalue = 0.0;  // most negative eigenvalue seen across samples
    std::optional<AlgebraElement> witness;
};

/// Samples random positives p = b*b and checks min eig f(p) >= -eps.
/// A true verdict is sampling evidence; a false one carries the witness.
PositivityReport positivity_check(const LinearMapOnAlgebra& f, int num_samples, Tolerance tol,
                                  Rng& rng);

struct IdentityCheckReport {
    bool pass = true;
    double worst_residual = 0.0;
    std::optional<std::pair<AlgebraElement, AlgebraElement>> witness;
    explicit operator bool() const { return pass; }
};

/// L_n(alpha_n(a) b) = a L_n(b) on sampled pairs.
IdentityCheckReport check_transfer_identity(const Action& alpha, const Action& l, int n,
                                            int num_samples, Tolerance tol, Rng& rng);

/// alpha_n(L_n(a)) = alpha_n(1) a alpha_n(1) on samples.
IdentityCheckReport check_complete_transfer(const Action& alpha, const Action& l, int n,
                                            int num_samples, Tolerance tol, Rng& rng);

} // namespace xprod

#endif
