#ifndef XPROD_ELEMENT_HPP
#define XPROD_ELEMENT_HPP

/// The dense symbolic *-algebra of the crossed product: finite sums of
/// non-mixed monomials with integer degree grading.  Multiplication
/// concatenates words and rewrites every mixed junction
///
///     U_x a U_y*  ->  V_x(a) U_{y-x}*   (x <= y)   or   U_{x-y} V_y(a)
///     U_x* a U_y  ->  H_x(a) U_{y-x}    (x <= y)   or   U_{x-y}* H_y(a)
///
/// until the word is non-mixed again.  Equality of symbolic elements is
/// undecidable here; correctness of the rewrite rules is enforced through
/// evaluation in covariant representations (see the tests).

#include <set>

#include "xprod/covariant.hpp"
#include "xprod/interaction.hpp"

namespace xprod {

/// One non-mixed word  c0 S_{s1} c1 S_{s2} ... S_{sk} ck  where S is the
/// step generator (negative = adjoint steps).  Canonical form: steps are
/// all >= 1 (zero steps merge their neighbouring coefficients) and a
/// degree-0 monomial is a single coefficient.
struct Monomial {
    bool negative = false;
    std::vector<int> steps;               // size k, each >= 1
    std::vector<AlgebraElement> coeffs;   // size k + 1

    int degree() const;
    int signed_degree() const { return negative ? -degree() : degree(); }
    Monomial adjoint() const;
    bool exactly_equal(const Monomial& o) const;
};

class CrossedProductElement {
  public:
    explicit CrossedProductElement(FiniteCStarAlgebra algebra);

    static CrossedProductElement from(const AlgebraElement& a);
    /// The step generator of degree x (its adjoint when `adjoint` is set);
    /// x = 0 gives the unit.
    static CrossedProductElement step(const FiniteCStarAlgebra& algebra, int x,
                                      bool adjoint = false);
    /// Builds a term from a raw (coefficient, step) word of one type,
    /// merging zero steps into the canonical form.
    static CrossedProductElement monomial(const FiniteCStarAlgebra& algebra, bool negative,
                                          const std::vector<std::pair<AlgebraElement, int>>& word);

    const FiniteCStarAlgebra& algebra() const { return algebra_; }
    const std::vector<Monomial>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    CrossedProductElement operator+(const CrossedProductElement& o) const;
    CrossedProductElement operator-(const CrossedProductElement& o) const;
    CrossedProductElement operator*(Complex scalar) const;
    CrossedProductElement adjoint() const;

    /// Signed degrees of the nonzero-degree terms (positive type counts as
    /// +degree, negative type as -degree).
    std::set<int> degree_support() const;
    int max_abs_degree() const;

    /// The degree-0 coefficient: sum of all degree-0 terms.
    AlgebraElement zero_degree_part() const;

    bool exactly_equal(const CrossedProductElement& o) const;

    /// Internal: rebuilds the canonical combined term list.
    static CrossedProductElement from_terms(FiniteCStarAlgebra algebra,
                                            std::vector<Monomial> terms);

  private:
    FiniteCStarAlgebra algebra_;
    std::vector<Monomial> terms_;
};

/// Conditional-expectation extraction of the degree-0 coefficient.
inline AlgebraElement E0(const CrossedProductElement& a) { return a.zero_degree_part(); }

/// Product in the crossed product over the given interaction.  The
/// term-pair products run in parallel when OpenMP is enabled; the result is
/// bit-identical to multiply_serial.
CrossedProductElement multiply(const CrossedProductElement& a, const CrossedProductElement& b,
                               const Interaction& in);
/// Reference kernel: the same product computed on one thread.
CrossedProductElement multiply_serial(const CrossedProductElement& a,
                                      const CrossedProductElement& b, const Interaction& in);

/// Evaluation through a covariant representation: coefficients through
/// sigma, steps through the U powers.
ComplexMatrix evaluate(const CovariantRep& rep, const CrossedProductElement& a);

/// Evaluation on the truncated window representation.  Throws
/// WindowTooSmall when the window cannot hold the element's degrees.
ComplexMatrix evaluate(const RegularAmplification& amp, const CrossedProductElement& a);

/// Applies the truncated evaluation to a stacked vector without
/// materializing the matrix.
ComplexVector apply(const RegularAmplification& amp, const CrossedProductElement& a,
                    const ComplexVector& xi);

struct NormEnclosure {
    double lower = 0.0;
    double upper = 0.0;
    int k_used = 0;
    std::vector<int> growth_trace;        // |F_k| per k (distinct positive degrees)
    std::vector<double> lower_per_k;
    std::vector<double> upper_per_k;
    bool growth_bound_ok = true;          // |F_k| <= 1 + k * max degree seen at k = 1
};

/// Certified enclosure of the universal norm from the degree-0 expectation
/// of powers of a a*:  for every k,
///   ||E0[(a a*)^{2k}]||^{1/4k}  <=  ||a||  <=  ((2|F_k|+1) ||E0[(a a*)^{2k}]||)^{1/4k}
/// with F_k the degree support of (a a*)^k.  Lower takes the max over k,
/// upper the min.
NormEnclosure norm_enclosure(const CrossedProductElement& a, const Interaction& in, int k_max);

/// ||E0(a)|| <= ||evaluate(rep, a)|| + eps; fails exactly when the
/// representation forgets part of the degree-0 coefficient.
bool property_star_check(const CovariantRep& rep, const CrossedProductElement& a,
                         Tolerance tol = {});

/// Random element with the given signed degree support; each degree
/// contributes one term whose word has up to `max_steps` steps.
CrossedProductElement random_element(const FiniteCStarAlgebra& algebra,
                                     const std::vector<int>& degrees, int max_steps, Rng& rng);

} // namespace xprod

#endif
