#include "xprod/element.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <map>
#include <unordered_map>

namespace xprod {

namespace {

/// Coefficients at or below this norm kill their whole monomial.
constexpr double kPruneEps = 1e-14;

void append_canonical_bytes(const AlgebraElement& a, std::string& out) {
    for (int b = 0; b < a.num_blocks(); ++b) {
        const ComplexMatrix& m = a.block(b);
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            for (Eigen::Index i = 0; i < m.rows(); ++i) {
                double re = m(i, j).real(), im = m(i, j).imag();
                if (re == 0.0) re = 0.0;  // collapse -0.0
                if (im == 0.0) im = 0.0;
                out.append(reinterpret_cast<const char*>(&re), sizeof(double));
                out.append(reinterpret_cast<const char*>(&im), sizeof(double));
            }
    }
}

bool term_is_negligible(const Monomial& m) {
    for (const auto& c : m.coeffs)
        if (operator_norm(c) <= kPruneEps) return true;
    return false;
}

/// Canonical-form pass on one word: merge zero steps, pull exact scalar
/// slots into the leading coefficient (scalars commute past the steps),
/// and fuse steps across interior slots that are exactly the unit.
/// Returns true when anything changed.
bool canonicalize_inplace(Monomial& m, const FiniteCStarAlgebra& algebra) {
    bool changed = false;
    for (size_t i = 0; i < m.steps.size();) {
        if (m.steps[i] == 0) {
            m.coeffs[i] = m.coeffs[i] * m.coeffs[i + 1];
            m.coeffs.erase(m.coeffs.begin() + static_cast<long>(i) + 1);
            m.steps.erase(m.steps.begin() + static_cast<long>(i));
            changed = true;
        } else {
            ++i;
        }
    }
    for (size_t i = 1; i < m.coeffs.size(); ++i) {
        Complex z;
        if (m.coeffs[i].is_scalar_multiple_of_unit(&z) && z != Complex(1.0, 0.0)) {
            m.coeffs[0] = m.coeffs[0] * z;
            m.coeffs[i] = algebra.unit();
            changed = true;
        }
    }
    for (size_t i = 1; i + 1 < m.coeffs.size();) {
        Complex z;
        if (m.coeffs[i].is_scalar_multiple_of_unit(&z) && z == Complex(1.0, 0.0)) {
            m.steps[i - 1] += m.steps[i];
            m.steps.erase(m.steps.begin() + static_cast<long>(i));
            m.coeffs.erase(m.coeffs.begin() + static_cast<long>(i));
            changed = true;
        } else {
            ++i;
        }
    }
    if (m.steps.empty()) m.negative = false;
    return changed;
}

std::string all_but_slot_key(const Monomial& m, size_t slot) {
    std::string key;
    for (size_t i = 0; i < m.coeffs.size(); ++i) {
        if (i == slot) continue;
        append_canonical_bytes(m.coeffs[i], key);
        key.push_back('|');
    }
    return key;
}

/// Combines a formal sum into canonical form.  Terms sharing a word
/// pattern that agree in all but one coefficient slot are summed in that
/// slot (the monomial is multilinear in its slots, so this is lossless).
std::vector<Monomial> combine_terms(std::vector<Monomial> terms,
                                    const FiniteCStarAlgebra& algebra) {
    bool changed = true;
    while (changed) {
        changed = false;
        for (auto& t : terms) changed |= canonicalize_inplace(t, algebra);
        std::vector<Monomial> kept;
        kept.reserve(terms.size());
        for (auto& t : terms) {
            if (term_is_negligible(t))
                changed = true;
            else
                kept.push_back(std::move(t));
        }
        terms = std::move(kept);

        std::map<std::pair<int, std::vector<int>>, std::vector<size_t>> groups;
        for (size_t i = 0; i < terms.size(); ++i)
            groups[{terms[i].negative ? 1 : 0, terms[i].steps}].push_back(i);

        std::vector<bool> dead(terms.size(), false);
        for (auto& [key, idxs] : groups) {
            if (idxs.size() < 2) continue;
            size_t nslots = key.second.size() + 1;
            bool merged = true;
            while (merged) {
                merged = false;
                for (size_t j = 0; j < nslots; ++j) {
                    std::unordered_map<std::string, size_t> reps;
                    for (size_t idx : idxs) {
                        if (dead[idx]) continue;
                        auto [it, inserted] =
                            reps.try_emplace(all_but_slot_key(terms[idx], j), idx);
                        if (!inserted) {
                            Monomial& keep = terms[it->second];
                            keep.coeffs[j] = keep.coeffs[j] + terms[idx].coeffs[j];
                            dead[idx] = true;
                            merged = true;
                            changed = true;
                        }
                    }
                }
            }
        }
        if (std::any_of(dead.begin(), dead.end(), [](bool d) { return d; })) {
            std::vector<Monomial> alive;
            alive.reserve(terms.size());
            for (size_t i = 0; i < terms.size(); ++i)
                if (!dead[i]) alive.push_back(std::move(terms[i]));
            terms = std::move(alive);
        }
    }
    std::stable_sort(terms.begin(), terms.end(), [](const Monomial& a, const Monomial& b) {
        if (a.negative != b.negative) return !a.negative;
        return a.steps < b.steps;
    });
    return terms;
}

/// Concatenates two non-mixed words and rewrites the mixed junction until
/// the result is non-mixed.  Returns an empty optional when a coefficient
/// collapses below the pruning threshold.
std::optional<Monomial> product_monomial(const Monomial& a, const Monomial& b,
                                         const Interaction& in) {
    std::vector<int> steps;  // signed: negative entries are adjoint steps
    steps.reserve(a.steps.size() + b.steps.size());
    for (int s : a.steps) steps.push_back(a.negative ? -s : s);
    for (int s : b.steps) steps.push_back(b.negative ? -s : s);

    std::vector<AlgebraElement> coeffs;
    coeffs.reserve(a.coeffs.size() + b.coeffs.size() - 1);
    coeffs.insert(coeffs.end(), a.coeffs.begin(), a.coeffs.end() - 1);
    coeffs.push_back(a.coeffs.back() * b.coeffs.front());
    coeffs.insert(coeffs.end(), b.coeffs.begin() + 1, b.coeffs.end());

    // Rewrite adjacent opposite-sign steps; each pass removes at least one
    // step, so this terminates.
    bool found = true;
    while (found) {
        found = false;
        for (size_t i = 0; i + 1 < steps.size(); ++i) {
            bool pos_neg = steps[i] > 0 && steps[i + 1] < 0;
            bool neg_pos = steps[i] < 0 && steps[i + 1] > 0;
            if (!pos_neg && !neg_pos) continue;
            int x = std::abs(steps[i]);
            int y = std::abs(steps[i + 1]);
            const AlgebraElement& c = coeffs[i + 1];
            AlgebraElement mapped =
                pos_neg ? in.v(std::min(x, y), c) : in.h(std::min(x, y), c);
            if (x < y) {
                coeffs[i] = coeffs[i] * mapped;
                coeffs.erase(coeffs.begin() + static_cast<long>(i) + 1);
                steps.erase(steps.begin() + static_cast<long>(i));
                steps[i] = pos_neg ? -(y - x) : (y - x);
            } else if (x == y) {
                coeffs[i] = coeffs[i] * mapped * coeffs[i + 2];
                coeffs.erase(coeffs.begin() + static_cast<long>(i) + 1,
                             coeffs.begin() + static_cast<long>(i) + 3);
                steps.erase(steps.begin() + static_cast<long>(i),
                            steps.begin() + static_cast<long>(i) + 2);
            } else {
                steps[i] = pos_neg ? (x - y) : -(x - y);
                coeffs[i + 1] = mapped * coeffs[i + 2];
                coeffs.erase(coeffs.begin() + static_cast<long>(i) + 2);
                steps.erase(steps.begin() + static_cast<long>(i) + 1);
            }
            found = true;
            break;
        }
    }

    Monomial out;
    out.negative = !steps.empty() && steps.front() < 0;
    out.steps.reserve(steps.size());
    for (int s : steps) out.steps.push_back(std::abs(s));
    out.coeffs = std::move(coeffs);
    if (term_is_negligible(out)) return std::nullopt;
    return out;
}

int max_term_degree(const CrossedProductElement& a) {
    int d = 0;
    for (const auto& t : a.terms()) d = std::max(d, t.degree());
    return d;
}

CrossedProductElement multiply_impl(const CrossedProductElement& a,
                                    const CrossedProductElement& b, const Interaction& in,
                                    bool parallel) {
    if (a.algebra() != b.algebra() || a.algebra() != in.algebra())
        throw AlgebraMismatch("product across algebras");
    const auto& ta = a.terms();
    const auto& tb = b.terms();
    int warm = std::max(max_term_degree(a), max_term_degree(b));
    in.v_action().warm(warm);
    in.h_action().warm(warm);

    const long total = static_cast<long>(ta.size()) * static_cast<long>(tb.size());
    std::vector<std::optional<Monomial>> products(total);
#pragma omp parallel for schedule(dynamic, 16) if (parallel)
    for (long idx = 0; idx < total; ++idx) {
        const Monomial& x = ta[static_cast<size_t>(idx) / tb.size()];
        const Monomial& y = tb[static_cast<size_t>(idx) % tb.size()];
        products[idx] = product_monomial(x, y, in);
    }
    std::vector<Monomial> terms;
    terms.reserve(products.size());
    for (auto& p : products)
        if (p) terms.push_back(std::move(*p));
    return CrossedProductElement::from_terms(a.algebra(), std::move(terms));
}

} // namespace

int Monomial::degree() const {
    int d = 0;
    for (int s : steps) d += s;
    return d;
}

Monomial Monomial::adjoint() const {
    Monomial out;
    out.negative = steps.empty() ? false : !negative;
    out.steps.assign(steps.rbegin(), steps.rend());
    out.coeffs.reserve(coeffs.size());
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) out.coeffs.push_back(it->adjoint());
    return out;
}

bool Monomial::exactly_equal(const Monomial& o) const {
    if (negative != o.negative || steps != o.steps || coeffs.size() != o.coeffs.size())
        return false;
    for (size_t i = 0; i < coeffs.size(); ++i)
        if (!coeffs[i].exactly_equal(o.coeffs[i])) return false;
    return true;
}

CrossedProductElement::CrossedProductElement(FiniteCStarAlgebra algebra)
    : algebra_(std::move(algebra)) {}

CrossedProductElement CrossedProductElement::from(const AlgebraElement& a) {
    Monomial m;
    m.coeffs.push_back(a);
    return from_terms(a.algebra(), {std::move(m)});
}

CrossedProductElement CrossedProductElement::step(const FiniteCStarAlgebra& algebra, int x,
                                                  bool adjoint) {
    if (x < 0) throw Error("step degree must be nonnegative");
    if (x == 0) return from(algebra.unit());
    Monomial m;
    m.negative = adjoint;
    m.steps.push_back(x);
    m.coeffs.push_back(algebra.unit());
    m.coeffs.push_back(algebra.unit());
    return from_terms(algebra, {std::move(m)});
}

CrossedProductElement CrossedProductElement::monomial(
    const FiniteCStarAlgebra& algebra, bool negative,
    const std::vector<std::pair<AlgebraElement, int>>& word) {
    if (word.empty()) throw Error("monomial word must not be empty");
    Monomial m;
    m.negative = negative;
    for (const auto& [coeff, step] : word) {
        if (step < 0) throw Error("monomial steps must be nonnegative");
        if (coeff.algebra() != algebra) throw AlgebraMismatch("monomial coefficient algebra");
        m.coeffs.push_back(coeff);
        m.steps.push_back(step);
    }
    m.coeffs.push_back(algebra.unit());  // trailing slot; zero steps merge it away
    return from_terms(algebra, {std::move(m)});
}

CrossedProductElement CrossedProductElement::from_terms(FiniteCStarAlgebra algebra,
                                                        std::vector<Monomial> terms) {
    CrossedProductElement el(algebra);
    el.terms_ = combine_terms(std::move(terms), algebra);
    return el;
}

CrossedProductElement CrossedProductElement::operator+(const CrossedProductElement& o) const {
    if (algebra_ != o.algebra_) throw AlgebraMismatch("sum across algebras");
    std::vector<Monomial> terms = terms_;
    terms.insert(terms.end(), o.terms_.begin(), o.terms_.end());
    return from_terms(algebra_, std::move(terms));
}

CrossedProductElement CrossedProductElement::operator-(const CrossedProductElement& o) const {
    return *this + (o * Complex(-1.0, 0.0));
}

CrossedProductElement CrossedProductElement::operator*(Complex scalar) const {
    std::vector<Monomial> terms = terms_;
    for (auto& t : terms) t.coeffs[0] = t.coeffs[0] * scalar;
    return from_terms(algebra_, std::move(terms));
}

CrossedProductElement CrossedProductElement::adjoint() const {
    std::vector<Monomial> terms;
    terms.reserve(terms_.size());
    for (const auto& t : terms_) terms.push_back(t.adjoint());
    return from_terms(algebra_, std::move(terms));
}

std::set<int> CrossedProductElement::degree_support() const {
    std::set<int> support;
    for (const auto& t : terms_)
        if (t.degree() > 0) support.insert(t.signed_degree());
    return support;
}

int CrossedProductElement::max_abs_degree() const {
    int d = 0;
    for (const auto& t : terms_) d = std::max(d, t.degree());
    return d;
}

AlgebraElement CrossedProductElement::zero_degree_part() const {
    AlgebraElement sum = algebra_.zero();
    for (const auto& t : terms_)
        if (t.steps.empty()) sum = sum + t.coeffs[0];
    return sum;
}

bool CrossedProductElement::exactly_equal(const CrossedProductElement& o) const {
    if (algebra_ != o.algebra_ || terms_.size() != o.terms_.size()) return false;
    for (size_t i = 0; i < terms_.size(); ++i)
        if (!terms_[i].exactly_equal(o.terms_[i])) return false;
    return true;
}

CrossedProductElement multiply(const CrossedProductElement& a, const CrossedProductElement& b,
                               const Interaction& in) {
    return multiply_impl(a, b, in, true);
}

CrossedProductElement multiply_serial(const CrossedProductElement& a,
                                      const CrossedProductElement& b, const Interaction& in) {
    return multiply_impl(a, b, in, false);
}

namespace {

ComplexMatrix eval_term(const CovariantRep& rep, const Monomial& m) {
    ComplexMatrix out = rep.sigma(m.coeffs[0]);
    for (size_t i = 0; i < m.steps.size(); ++i) {
        const ComplexMatrix& u = rep.u_power(m.steps[i]);
        if (m.negative)
            out = out * u.adjoint();
        else
            out = out * u;
        out = out * rep.sigma(m.coeffs[i + 1]);
    }
    return out;
}

} // namespace

ComplexMatrix evaluate(const CovariantRep& rep, const CrossedProductElement& a) {
    if (rep.algebra() != a.algebra())
        throw AlgebraMismatch("evaluation across algebras");
    ComplexMatrix out = ComplexMatrix::Zero(rep.hilbert_dim(), rep.hilbert_dim());
    for (const auto& t : a.terms()) out += eval_term(rep, t);
    return out;
}

ComplexMatrix evaluate(const RegularAmplification& amp, const CrossedProductElement& a) {
    const CovariantRep& rep = amp.base();
    if (rep.algebra() != a.algebra())
        throw AlgebraMismatch("evaluation across algebras");
    if (a.max_abs_degree() > amp.window())
        throw WindowTooSmall("window " + std::to_string(amp.window()) +
                             " cannot hold degree " + std::to_string(a.max_abs_degree()));
    int d = rep.hilbert_dim();
    int w = amp.window();
    ComplexMatrix out = ComplexMatrix::Zero(amp.dim(), amp.dim());
    for (const auto& t : a.terms()) {
        ComplexMatrix m = eval_term(rep, t);
        int deg = t.signed_degree();
        for (int g = -w; g <= w; ++g) {
            int h = g + deg;
            if (h < -w || h > w) continue;
            out.block(amp.offset(h), amp.offset(g), d, d) += m;
        }
    }
    return out;
}

ComplexVector apply(const RegularAmplification& amp, const CrossedProductElement& a,
                    const ComplexVector& xi) {
    const CovariantRep& rep = amp.base();
    if (xi.size() != amp.dim()) throw Error("stacked vector has the wrong size");
    if (a.max_abs_degree() > amp.window())
        throw WindowTooSmall("window cannot hold the element's degrees");
    int d = rep.hilbert_dim();
    int w = amp.window();
    ComplexVector out = ComplexVector::Zero(amp.dim());
    for (const auto& t : a.terms()) {
        ComplexMatrix m = eval_term(rep, t);
        int deg = t.signed_degree();
        for (int g = -w; g <= w; ++g) {
            int h = g + deg;
            if (h < -w || h > w) continue;
            out.segment(amp.offset(h), d) += m * xi.segment(amp.offset(g), d);
        }
    }
    return out;
}

NormEnclosure norm_enclosure(const CrossedProductElement& a, const Interaction& in, int k_max) {
    if (k_max < 1) throw Error("norm_enclosure: k_max must be at least 1");
    NormEnclosure out;
    out.k_used = k_max;

    CrossedProductElement r = multiply(a, a.adjoint(), in);
    std::vector<CrossedProductElement> powers;
    powers.reserve(2 * k_max + 1);
    powers.push_back(CrossedProductElement::from(in.algebra().unit()));  // unused slot 0
    powers.push_back(r);
    for (int k = 2; k <= 2 * k_max; ++k)
        powers.push_back(multiply(powers[k / 2], powers[k - k / 2], in));

    int base_max_degree = 0;
    for (int s : r.degree_support()) base_max_degree = std::max(base_max_degree, std::abs(s));

    out.lower = 0.0;
    out.upper = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= k_max; ++k) {
        std::set<int> abs_support;
        for (int s : powers[k].degree_support()) abs_support.insert(std::abs(s));
        int fk = static_cast<int>(abs_support.size());
        out.growth_trace.push_back(fk);
        if (fk > 1 + k * base_max_degree) out.growth_bound_ok = false;

        double nk = operator_norm(E0(powers[2 * k]));
        double root = 1.0 / (4.0 * k);
        double lo = std::pow(nk, root);
        double hi = std::pow((2.0 * fk + 1.0) * nk, root);
        out.lower_per_k.push_back(lo);
        out.upper_per_k.push_back(hi);
        out.lower = std::max(out.lower, lo);
        out.upper = std::min(out.upper, hi);
    }
    if (out.lower > out.upper) {
        // The bounds meet at zero width; round-off may cross them slightly.
        if (out.lower - out.upper < 1e-10 * std::max(1.0, out.lower)) {
            double mid = 0.5 * (out.lower + out.upper);
            out.lower = out.upper = mid;
        } else {
            throw Error("norm enclosure inverted; this is a bug");
        }
    }
    return out;
}

bool property_star_check(const CovariantRep& rep, const CrossedProductElement& a, Tolerance tol) {
    double e0 = operator_norm(E0(a));
    double ev = spectral_norm(evaluate(rep, a));
    return e0 <= ev + tol.eps;
}

CrossedProductElement random_element(const FiniteCStarAlgebra& algebra,
                                     const std::vector<int>& degrees, int max_steps, Rng& rng) {
    std::vector<Monomial> terms;
    for (int d : degrees) {
        Monomial m;
        if (d == 0) {
            m.coeffs.push_back(random_element(algebra, rng));
        } else {
            m.negative = d < 0;
            int remaining = std::abs(d);
            std::uniform_int_distribution<int> u(1, std::max(1, remaining));
            m.coeffs.push_back(random_element(algebra, rng));
            int parts = 0;
            while (remaining > 0 && parts + 1 < max_steps) {
                int s = std::min(remaining, u(rng));
                m.steps.push_back(s);
                m.coeffs.push_back(random_element(algebra, rng));
                remaining -= s;
                ++parts;
            }
            if (remaining > 0) {
                m.steps.push_back(remaining);
                m.coeffs.push_back(random_element(algebra, rng));
            }
        }
        terms.push_back(std::move(m));
    }
    return CrossedProductElement::from_terms(algebra, std::move(terms));
}

} // namespace xprod
