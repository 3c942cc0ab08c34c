#ifndef XPROD_INTERACTION_HPP
#define XPROD_INTERACTION_HPP

/// Pairs of actions (V, H) and the machinery around them: the four
/// interaction axioms, completeness, the induced projection families and
/// conditional expectations, and the two routes for recovering the dual
/// action H from V (via an implementing partial isometry, or by inverting
/// V on corner subspaces).

#include <string>
#include <vector>

#include "json.hpp"

#include "xprod/maps.hpp"

namespace xprod {

/// A pair of actions on the same algebra.
///
/// `certified_up_to` records the largest degree for which check_interaction
/// has verified the axioms; downstream checks that assume an interaction
/// refuse to run past it.
class Interaction {
  public:
    Interaction(Action v, Action h);

    const FiniteCStarAlgebra& algebra() const { return v_.algebra(); }
    const Action& v_action() const { return v_; }
    const Action& h_action() const { return h_; }

    AlgebraElement v(int x, const AlgebraElement& a) const { return v_.apply(x, a); }
    AlgebraElement h(int x, const AlgebraElement& a) const { return h_.apply(x, a); }

    /// V_x(1) and H_x(1); memoized, these are the range projections.
    const AlgebraElement& v_unit(int x) const;
    const AlgebraElement& h_unit(int x) const;

    int certified_up_to() const;
    void set_certified_up_to(int x) const;

  private:
    struct Cache {
        std::mutex mu;
        std::vector<AlgebraElement> v_units, h_units;  // index = degree
        int certified = 0;
    };
    Action v_, h_;
    std::shared_ptr<Cache> cache_;
};

struct CheckItem {
    std::string check;
    int x = 0;
    bool pass = true;
    double residual = 0.0;
    nlohmann::json witness;  // null when the check passed
};

struct InteractionReport {
    std::vector<CheckItem> items;

    bool all_pass() const;
    double worst_residual() const;
    const CheckItem* find(const std::string& check, int x) const;
    void add(std::string check, int x, double residual, Tolerance tol,
             nlohmann::json witness = nullptr);
    nlohmann::json to_json() const;
};

/// Verifies the four axioms for every degree 1..x_max on random samples:
/// (i) V H V = V, (ii) H V H = H, (iii) V multiplicative against the range
/// of H, (iv) H multiplicative against the range of V.  On full success the
/// interaction is marked certified up to x_max.
InteractionReport check_interaction(const Interaction& in, int x_max, int num_samples,
                                    Tolerance tol, Rng& rng);

/// Completeness: H_x(V_x(a)) = H_x(1) a H_x(1), V_x(H_x(a)) = V_x(1) a V_x(1),
/// and commuting range projections for all pairs of degrees.
/// Requires certification up to x_max (NotAnInteraction otherwise).
InteractionReport check_complete(const Interaction& in, int x_max, int num_samples, Tolerance tol,
                                 Rng& rng);

/// Range units are decreasing projections; absorption identities; corner
/// identities for range elements.
InteractionReport check_projection_family(const Interaction& in, int x_max, int num_samples,
                                          Tolerance tol, Rng& rng);

/// E = V_x . H_x is a conditional expectation onto the range of V_x:
/// idempotent, positive on samples, with the bimodule property, and H_x
/// inverts V_x on the range of H_x.
InteractionReport check_conditional_expectations(const Interaction& in, int x, int num_samples,
                                                 Tolerance tol, Rng& rng);

/// Dual action generated by a |-> U1* a U1 for a partial isometry U1 acting
/// on the defining representation.  Throws NotPartialIsometry or
/// NotInvariant (conjugation leaves the algebra) on bad input.
Action derive_dual_from_rep(const Action& v, const ComplexMatrix& u1, Tolerance tol = {});

struct DerivedDual {
    std::vector<LinearMapOnAlgebra> maps;  // maps[x-1] is the degree-x dual map
    double worst_solve_residual = 0.0;
    double worst_semigroup_residual = 0.0;
    double smallest_singular_value = 0.0;

    const LinearMapOnAlgebra& at(int x) const { return maps.at(x - 1); }
    int x_max() const { return static_cast<int>(maps.size()); }
};

/// Recovers the dual maps H_x as the unique solutions h in P_x A P_x of
/// V_x(h) = V_x(1) a V_x(1), by least squares on the corner subspace.
/// `projections[x-1]` is P_x.  Hypotheses checked first: V_x(1) projections,
/// P_x a decreasing family of projections commuting with every V_y(1),
/// V_x(P_{x+y}) = V_x(1) P_y, and injectivity of V_x on the corner
/// (smallest singular value >= 1e-7, else SingularRestriction).
/// Throws HypothesisFailed naming the first failing hypothesis.
DerivedDual derive_dual_from_projections(const Action& v,
                                         const std::vector<AlgebraElement>& projections,
                                         Tolerance tol = {});

} // namespace xprod

#endif
