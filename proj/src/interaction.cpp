#include "xprod/interaction.hpp"

#include <cmath>

#include "xprod/json_io.hpp"

namespace xprod {

Interaction::Interaction(Action v, Action h)
    : v_(std::move(v)), h_(std::move(h)), cache_(std::make_shared<Cache>()) {
    if (v_.algebra() != h_.algebra())
        throw AlgebraMismatch("interaction actions live on different algebras");
}

const AlgebraElement& Interaction::v_unit(int x) const {
    std::lock_guard<std::mutex> lock(cache_->mu);
    while (static_cast<int>(cache_->v_units.size()) <= x)
        cache_->v_units.push_back(
            v_.apply(static_cast<int>(cache_->v_units.size()), algebra().unit()));
    return cache_->v_units[x];
}

const AlgebraElement& Interaction::h_unit(int x) const {
    std::lock_guard<std::mutex> lock(cache_->mu);
    while (static_cast<int>(cache_->h_units.size()) <= x)
        cache_->h_units.push_back(
            h_.apply(static_cast<int>(cache_->h_units.size()), algebra().unit()));
    return cache_->h_units[x];
}

int Interaction::certified_up_to() const {
    std::lock_guard<std::mutex> lock(cache_->mu);
    return cache_->certified;
}

void Interaction::set_certified_up_to(int x) const {
    std::lock_guard<std::mutex> lock(cache_->mu);
    cache_->certified = std::max(cache_->certified, x);
}

bool InteractionReport::all_pass() const {
    for (const auto& it : items)
        if (!it.pass) return false;
    return true;
}

double InteractionReport::worst_residual() const {
    double w = 0.0;
    for (const auto& it : items) w = std::max(w, it.residual);
    return w;
}

const CheckItem* InteractionReport::find(const std::string& check, int x) const {
    for (const auto& it : items)
        if (it.check == check && it.x == x) return &it;
    return nullptr;
}

void InteractionReport::add(std::string check, int x, double residual, Tolerance tol,
                            nlohmann::json witness) {
    CheckItem item;
    item.check = std::move(check);
    item.x = x;
    item.residual = residual;
    item.pass = residual <= tol.eps;
    if (!item.pass) item.witness = std::move(witness);
    items.push_back(std::move(item));
}

nlohmann::json InteractionReport::to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& it : items) {
        arr.push_back({{"check", it.check},
                       {"x", it.x},
                       {"pass", it.pass},
                       {"residual", it.residual},
                       {"witness", it.witness}});
    }
    return {{"pass", all_pass()}, {"items", arr}};
}

namespace {

/// Runs `residual` over pre-drawn samples and records the worst case.
/// The sample loop is the hot path of every axiom check, so residuals are
/// evaluated in parallel over an up-front sample vector; the scan for the
/// worst index stays sequential to keep reports deterministic.
template <class Fn>
void sampled_check(InteractionReport& report, const std::string& name, int x, int num_samples,
                   Tolerance tol, Rng& rng, const FiniteCStarAlgebra& algebra, Fn&& residual,
                   int elements_per_sample = 2) {
    std::vector<std::vector<AlgebraElement>> samples(num_samples);
    for (auto& s : samples) {
        s.reserve(elements_per_sample);
        for (int k = 0; k < elements_per_sample; ++k) s.push_back(random_element(algebra, rng));
    }
    std::vector<double> res(num_samples, 0.0);
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < num_samples; ++i) res[i] = residual(samples[i]);
    double worst = 0.0;
    int worst_i = -1;
    for (int i = 0; i < num_samples; ++i)
        if (res[i] > worst) {
            worst = res[i];
            worst_i = i;
        }
    nlohmann::json witness;
    if (worst_i >= 0 && worst > tol.eps) {
        witness = nlohmann::json::array();
        for (const auto& e : samples[worst_i]) witness.push_back(io::to_json(e));
    }
    report.add(name, x, worst, tol, witness);
}

} // namespace

InteractionReport check_interaction(const Interaction& in, int x_max, int num_samples,
                                    Tolerance tol, Rng& rng) {
    if (x_max < 1) throw Error("check_interaction: x_max must be at least 1");
    InteractionReport report;
    const auto& algebra = in.algebra();
    for (int x = 1; x <= x_max; ++x) {
        in.v_action().warm(x);
        in.h_action().warm(x);
        sampled_check(report, "axiom_i_vhv", x, num_samples, tol, rng, algebra,
                      [&](const std::vector<AlgebraElement>& s) {
                          return norm_diff(in.v(x, in.h(x, in.v(x, s[0]))), in.v(x, s[0]));
                      },
                      1);
        sampled_check(report, "axiom_ii_hvh", x, num_samples, tol, rng, algebra,
                      [&](const std::vector<AlgebraElement>& s) {
                          return norm_diff(in.h(x, in.v(x, in.h(x, s[0]))), in.h(x, s[0]));
                      },
                      1);
        sampled_check(report, "axiom_iii_v_mult", x, num_samples, tol, rng, algebra,
                      [&](const std::vector<AlgebraElement>& s) {
                          AlgebraElement a = in.h(x, s[0]);  // range element of H_x
                          const AlgebraElement& b = s[1];
                          double r1 = norm_diff(in.v(x, a * b), in.v(x, a) * in.v(x, b));
                          double r2 = norm_diff(in.v(x, b * a), in.v(x, b) * in.v(x, a));
                          return std::max(r1, r2);
                      });
        sampled_check(report, "axiom_iv_h_mult", x, num_samples, tol, rng, algebra,
                      [&](const std::vector<AlgebraElement>& s) {
                          AlgebraElement a = in.v(x, s[0]);  // range element of V_x
                          const AlgebraElement& b = s[1];
                          double r1 = norm_diff(in.h(x, a * b), in.h(x, a) * in.h(x, b));
                          double r2 = norm_diff(in.h(x, b * a), in.h(x, b) * in.h(x, a));
                          return std::max(r1, r2);
                      });
    }
    if (report.all_pass()) in.set_certified_up_to(x_max);
    return report;
}

InteractionReport check_complete(const Interaction& in, int x_max, int num_samples, Tolerance tol,
                                 Rng& rng) {
    if (in.certified_up_to() < x_max)
        throw NotAnInteraction("check_complete requires certification up to x_max");
    InteractionReport report;
    const auto& algebra = in.algebra();
    for (int x = 1; x <= x_max; ++x) {
        const AlgebraElement& v1 = in.v_unit(x);
        const AlgebraElement& h1 = in.h_unit(x);
        sampled_check(report, "complete_hv_corner", x, num_samples, tol, rng, algebra,
                      [&](const std::vector<AlgebraElement>& s) {
                          return norm_diff(in.h(x, in.v(x, s[0])), h1 * s[0] * h1);
                      },
                      1);
        sampled_check(report, "complete_vh_corner", x, num_samples, tol, rng, algebra,
                      [&](const std::vector<AlgebraElement>& s) {
                          return norm_diff(in.v(x, in.h(x, s[0])), v1 * s[0] * v1);
                      },
                      1);
    }
    for (int x = 1; x <= x_max; ++x)
        for (int y = 1; y <= x_max; ++y) {
            const AlgebraElement& v1 = in.v_unit(x);
            const AlgebraElement& h1 = in.h_unit(y);
            report.add("complete_units_commute", x * 100 + y, norm_diff(h1 * v1, v1 * h1), tol);
        }
    return report;
}

InteractionReport check_projection_family(const Interaction& in, int x_max, int num_samples,
                                          Tolerance tol, Rng& rng) {
    if (in.certified_up_to() < 1)
        throw NotAnInteraction("check_projection_family requires a certified interaction");
    InteractionReport report;
    const auto& algebra = in.algebra();
    for (int x = 1; x <= x_max; ++x) {
        const AlgebraElement& v1 = in.v_unit(x);
        const AlgebraElement& h1 = in.h_unit(x);
        double pv = std::max(norm_diff(v1, v1.adjoint()), norm_diff(v1 * v1, v1));
        double ph = std::max(norm_diff(h1, h1.adjoint()), norm_diff(h1 * h1, h1));
        report.add("unit_v_projection", x, pv, tol);
        report.add("unit_h_projection", x, ph, tol);
    }
    for (int x = 1; x <= x_max; ++x)
        for (int y = x; y <= x_max; ++y) {
            report.add("unit_v_decreasing", x * 100 + y,
                       norm_diff(in.v_unit(x) * in.v_unit(y), in.v_unit(y)), tol);
            report.add("unit_h_decreasing", x * 100 + y,
                       norm_diff(in.h_unit(x) * in.h_unit(y), in.h_unit(y)), tol);
        }
    for (int x = 1; x <= x_max; ++x)
        for (int y = x; y <= x_max; ++y) {
            const AlgebraElement h1 = in.h_unit(x);
            const AlgebraElement v1 = in.v_unit(x);
            sampled_check(report, "absorb_v", x * 100 + y, num_samples, tol, rng, algebra,
                          [&, y](const std::vector<AlgebraElement>& s) {
                              double r1 = norm_diff(in.v(y, h1 * s[0]), in.v(y, s[0]));
                              double r2 = norm_diff(in.v(y, s[0] * h1), in.v(y, s[0]));
                              return std::max(r1, r2);
                          },
                          1);
            sampled_check(report, "absorb_h", x * 100 + y, num_samples, tol, rng, algebra,
                          [&, y](const std::vector<AlgebraElement>& s) {
                              double r1 = norm_diff(in.h(y, v1 * s[0]), in.h(y, s[0]));
                              double r2 = norm_diff(in.h(y, s[0] * v1), in.h(y, s[0]));
                              return std::max(r1, r2);
                          },
                          1);
            sampled_check(report, "range_corner_identity", x * 100 + y, num_samples, tol, rng,
                          algebra,
                          [&, y](const std::vector<AlgebraElement>& s) {
                              AlgebraElement a = in.v(y, s[0]);
                              double r = std::max(norm_diff(v1 * a, a), norm_diff(a * v1, a));
                              AlgebraElement b = in.h(y, s[1]);
                              r = std::max(r, norm_diff(h1 * b, b));
                              r = std::max(r, norm_diff(b * h1, b));
                              return r;
                          });
        }
    return report;
}

InteractionReport check_conditional_expectations(const Interaction& in, int x, int num_samples,
                                                 Tolerance tol, Rng& rng) {
    if (in.certified_up_to() < x)
        throw NotAnInteraction("check_conditional_expectations requires certification at x");
    InteractionReport report;
    const auto& algebra = in.algebra();
    auto ev = [&](const AlgebraElement& a) { return in.v(x, in.h(x, a)); };
    sampled_check(report, "expectation_idempotent", x, num_samples, tol, rng, algebra,
                  [&](const std::vector<AlgebraElement>& s) {
                      AlgebraElement e = ev(s[0]);
                      return norm_diff(ev(e), e);
                  },
                  1);
    sampled_check(report, "expectation_module", x, num_samples, tol, rng, algebra,
                  [&](const std::vector<AlgebraElement>& s) {
                      AlgebraElement ea = ev(s[0]);
                      AlgebraElement ec = ev(s[2]);
                      return norm_diff(ev(ea * s[1] * ec), ea * ev(s[1]) * ec);
                  },
                  3);
    {
        // Positivity of E on sampled positives.
        double worst = 0.0;
        nlohmann::json witness;
        for (int i = 0; i < num_samples; ++i) {
            AlgebraElement p = random_positive(algebra, rng);
            AlgebraElement e = ev(p);
            double min_eig = 0.0;
            for (int b = 0; b < e.num_blocks(); ++b)
                min_eig = std::min(min_eig, min_hermitian_eigenvalue(e.block(b)));
            if (-min_eig > worst) {
                worst = -min_eig;
                if (worst > tol.eps) witness = io::to_json(p);
            }
        }
        report.add("expectation_positive", x, worst, tol, witness);
    }
    sampled_check(report, "inverse_pair", x, num_samples, tol, rng, algebra,
                  [&](const std::vector<AlgebraElement>& s) {
                      AlgebraElement h = in.h(x, s[0]);
                      return norm_diff(in.h(x, in.v(x, h)), h);
                  },
                  1);
    return report;
}

Action derive_dual_from_rep(const Action& v, const ComplexMatrix& u1, Tolerance tol) {
    const FiniteCStarAlgebra& algebra = v.algebra();
    int n = algebra.ambient_dim();
    if (u1.rows() != n || u1.cols() != n)
        throw Error("derive_dual_from_rep: U1 must act on the defining representation");
    if (!is_partial_isometry(u1, tol))
        throw NotPartialIsometry("derive_dual_from_rep: U1 is not a partial isometry");

    ComplexMatrix sup(algebra.dim(), algebra.dim());
    int col = 0;
    for (int b = 0; b < algebra.num_blocks(); ++b)
        for (int i = 0; i < algebra.block_dim(b); ++i)
            for (int j = 0; j < algebra.block_dim(b); ++j) {
                ComplexMatrix m = u1.adjoint() * algebra.matrix_unit(b, i, j).embed_flat() * u1;
                double off = 0.0;
                AlgebraElement image = AlgebraElement::extract_flat(algebra, m, &off);
                if (off > tol.eps)
                    throw NotInvariant("derive_dual_from_rep: U1* A U1 leaves the algebra");
                sup.col(col++) = image.vec();
            }
    return Action(LinearMapOnAlgebra::superoperator(algebra, std::move(sup)));
}

namespace {

/// Orthonormal coordinate basis of the corner p A p, read off from the
/// eigenvectors of the (self-adjoint, idempotent) compression superoperator.
ComplexMatrix corner_basis(const FiniteCStarAlgebra& algebra, const AlgebraElement& p) {
    ComplexMatrix comp = LinearMapOnAlgebra::conjugation(p).superoperator_matrix();
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(comp);
    int rank = 0;
    for (int i = 0; i < es.eigenvalues().size(); ++i)
        if (es.eigenvalues()(i) > 0.5) ++rank;
    ComplexMatrix basis(algebra.dim(), rank);
    int c = 0;
    for (int i = 0; i < es.eigenvalues().size(); ++i)
        if (es.eigenvalues()(i) > 0.5) basis.col(c++) = es.eigenvectors().col(i);
    return basis;
}

} // namespace

DerivedDual derive_dual_from_projections(const Action& v,
                                         const std::vector<AlgebraElement>& projections,
                                         Tolerance tol) {
    const FiniteCStarAlgebra& algebra = v.algebra();
    int x_max = static_cast<int>(projections.size());
    if (x_max < 1) throw Error("derive_dual_from_projections: need at least one projection");

    auto p_at = [&](int x) -> AlgebraElement {
        return x == 0 ? algebra.unit() : projections[x - 1];
    };

    for (int x = 1; x <= x_max; ++x) {
        if (!is_projection(v.apply(x, algebra.unit()), tol))
            throw HypothesisFailed("range unit of degree " + std::to_string(x) +
                                   " is not a projection");
        if (!is_projection(p_at(x), tol))
            throw HypothesisFailed("supplied P_" + std::to_string(x) + " is not a projection");
    }
    for (int x = 1; x <= x_max; ++x)
        for (int y = x; y <= x_max; ++y)
            if (norm_diff(p_at(x) * p_at(y), p_at(y)) > tol.eps)
                throw HypothesisFailed("projection family is not decreasing at (" +
                                       std::to_string(x) + "," + std::to_string(y) + ")");
    for (int x = 1; x <= x_max; ++x)
        for (int y = 1; y <= x_max; ++y) {
            AlgebraElement v1 = v.apply(x, algebra.unit());
            if (norm_diff(v1 * p_at(y), p_at(y) * v1) > tol.eps)
                throw HypothesisFailed("P_" + std::to_string(y) +
                                       " does not commute with the degree-" + std::to_string(x) +
                                       " range unit");
        }
    for (int x = 1; x <= x_max; ++x)
        for (int y = 0; x + y <= x_max; ++y) {
            AlgebraElement lhs = v.apply(x, p_at(x + y));
            AlgebraElement rhs = v.apply(x, algebra.unit()) * p_at(y);
            if (norm_diff(lhs, rhs) > tol.eps)
                throw HypothesisFailed("V_x(P_{x+y}) = V_x(1) P_y fails at (" + std::to_string(x) +
                                       "," + std::to_string(y) + ")");
        }

    DerivedDual dual;
    dual.smallest_singular_value = std::numeric_limits<double>::infinity();
    for (int x = 1; x <= x_max; ++x) {
        ComplexMatrix basis = corner_basis(algebra, p_at(x));
        ComplexMatrix restricted =
            v.iterate(x).superoperator_matrix() * basis;  // V_x on the corner
        Eigen::JacobiSVD<ComplexMatrix> svd(restricted,
                                            Eigen::ComputeThinU | Eigen::ComputeThinV);
        double smin = basis.cols() == 0 ? 0.0 : svd.singularValues().minCoeff();
        dual.smallest_singular_value = std::min(dual.smallest_singular_value, smin);
        if (basis.cols() > 0 && smin < 1e-7)
            throw SingularRestriction("compression is not injective on the corner at degree " +
                                      std::to_string(x));

        AlgebraElement v1 = v.apply(x, algebra.unit());
        ComplexMatrix sup(algebra.dim(), algebra.dim());
        int col = 0;
        for (int b = 0; b < algebra.num_blocks(); ++b)
            for (int i = 0; i < algebra.block_dim(b); ++i)
                for (int j = 0; j < algebra.block_dim(b); ++j) {
                    AlgebraElement target = v1 * algebra.matrix_unit(b, i, j) * v1;
                    ComplexVector z = svd.solve(target.vec());
                    ComplexVector h = basis * z;
                    AlgebraElement sol = AlgebraElement::unvec(algebra, h);
                    double residual = norm_diff(v.apply(x, sol), target);
                    dual.worst_solve_residual = std::max(dual.worst_solve_residual, residual);
                    if (residual > tol.eps)
                        throw HypothesisFailed(
                            "corner equation residual " + std::to_string(residual) +
                            " exceeds tolerance at degree " + std::to_string(x));
                    sup.col(col++) = h;
                }
        dual.maps.push_back(LinearMapOnAlgebra::superoperator(algebra, std::move(sup)));
    }

    // Semigroup coherence of the recovered maps.
    for (int x = 1; x <= x_max; ++x)
        for (int y = 1; x + y <= x_max; ++y) {
            for (int b = 0; b < algebra.num_blocks(); ++b)
                for (int i = 0; i < algebra.block_dim(b); ++i)
                    for (int j = 0; j < algebra.block_dim(b); ++j) {
                        AlgebraElement e = algebra.matrix_unit(b, i, j);
                        double r = norm_diff(dual.at(x).apply(dual.at(y).apply(e)),
                                             dual.at(x + y).apply(e));
                        dual.worst_semigroup_residual =
                            std::max(dual.worst_semigroup_residual, r);
                    }
        }
    if (dual.worst_semigroup_residual > tol.eps)
        throw HypothesisFailed("recovered dual maps do not compose as a semigroup");
    return dual;
}

} // namespace xprod
