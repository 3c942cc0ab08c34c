#include "xprod/maps.hpp"

#include <functional>

namespace xprod {

LinearMapOnAlgebra LinearMapOnAlgebra::identity(const FiniteCStarAlgebra& algebra) {
    return conjugation(algebra.unit());
}

LinearMapOnAlgebra LinearMapOnAlgebra::conjugation(AlgebraElement k) {
    LinearMapOnAlgebra f;
    f.algebra_ = k.algebra();
    f.form_ = Form::Conjugation;
    f.k_ = std::move(k);
    return f;
}

LinearMapOnAlgebra LinearMapOnAlgebra::superoperator(FiniteCStarAlgebra algebra, ComplexMatrix m) {
    if (m.rows() != algebra.dim() || m.cols() != algebra.dim())
        throw Error("superoperator matrix must be dim(A) x dim(A)");
    if (!all_finite(m)) throw Error("superoperator has non-finite entries");
    LinearMapOnAlgebra f;
    f.algebra_ = std::move(algebra);
    f.form_ = Form::Superoperator;
    f.sup_ = std::move(m);
    return f;
}

AlgebraElement LinearMapOnAlgebra::apply(const AlgebraElement& a) const {
    if (a.algebra() != algebra_) throw AlgebraMismatch("map applied across algebras");
    if (form_ == Form::Conjugation) return (*k_) * a * k_->adjoint();
    return AlgebraElement::unvec(algebra_, (*sup_) * a.vec());
}

const ComplexMatrix& LinearMapOnAlgebra::superoperator_matrix() const {
    if (!sup_) {
        ComplexMatrix m(algebra_.dim(), algebra_.dim());
        int col = 0;
        for (int b = 0; b < algebra_.num_blocks(); ++b)
            for (int i = 0; i < algebra_.block_dim(b); ++i)
                for (int j = 0; j < algebra_.block_dim(b); ++j)
                    m.col(col++) = apply(algebra_.matrix_unit(b, i, j)).vec();
        sup_ = std::move(m);
    }
    return *sup_;
}

LinearMapOnAlgebra LinearMapOnAlgebra::compose(const LinearMapOnAlgebra& inner) const {
    if (algebra_ != inner.algebra_) throw AlgebraMismatch("composition across algebras");
    if (form_ == Form::Conjugation && inner.form_ == Form::Conjugation)
        return conjugation((*k_) * (*inner.k_));
    return superoperator(algebra_, superoperator_matrix() * inner.superoperator_matrix());
}

double LinearMapOnAlgebra::star_preservation_defect() const {
    double worst = 0.0;
    for (int b = 0; b < algebra_.num_blocks(); ++b)
        for (int i = 0; i < algebra_.block_dim(b); ++i)
            for (int j = 0; j < algebra_.block_dim(b); ++j) {
                AlgebraElement e = algebra_.matrix_unit(b, i, j);
                worst = std::max(worst, norm_diff(apply(e.adjoint()), apply(e).adjoint()));
            }
    return worst;
}

Action::Action(LinearMapOnAlgebra generator)
    : generator_(std::move(generator)), cache_(std::make_shared<Cache>()) {}

const LinearMapOnAlgebra& Action::iterate(int n) const {
    if (n < 0) throw Error("action degree must be nonnegative");
    std::lock_guard<std::mutex> lock(cache_->mu);
    auto it = cache_->iterates.find(n);
    if (it != cache_->iterates.end()) return it->second;
    if (n == 0)
        return cache_->iterates.emplace(0, LinearMapOnAlgebra::identity(algebra())).first->second;
    if (n == 1) return cache_->iterates.emplace(1, generator_).first->second;
    // Build up from the largest cached iterate below n.
    auto below = cache_->iterates.lower_bound(n);
    int base = 1;
    LinearMapOnAlgebra cur = generator_;
    if (below != cache_->iterates.begin()) {
        --below;
        if (below->first >= 1) {
            base = below->first;
            cur = below->second;
        }
    }
    for (int k = base; k < n; ++k) {
        cur = generator_.compose(cur);
        cache_->iterates.emplace(k + 1, cur);
    }
    return cache_->iterates.at(n);
}

AlgebraElement Action::apply(int n, const AlgebraElement& a) const {
    if (n == 0) return a;
    return iterate(n).apply(a);
}

void Action::warm(int n) const { iterate(std::max(0, n)); }

PositivityReport positivity_check(const LinearMapOnAlgebra& f, int num_samples, Tolerance tol,
                                  Rng& rng) {
    PositivityReport report;
    report.min_eigenvalue = 0.0;
    for (int s = 0; s < num_samples; ++s) {
        AlgebraElement p = random_positive(f.algebra(), rng);
        AlgebraElement fp = f.apply(p);
        double min_eig = 0.0;
        for (int b = 0; b < fp.num_blocks(); ++b)
            min_eig = std::min(min_eig, min_hermitian_eigenvalue(fp.block(b)));
        if (min_eig < report.min_eigenvalue) report.min_eigenvalue = min_eig;
        if (min_eig < -tol.eps && report.positive) {
            report.positive = false;
            report.witness = p;
        }
    }
    return report;
}

namespace {

IdentityCheckReport sampled_identity(int num_samples, Tolerance tol, Rng& rng,
                                     const FiniteCStarAlgebra& algebra,
                                     const std::function<double(const AlgebraElement&,
                                                                const AlgebraElement&)>& residual) {
    IdentityCheckReport report;
    for (int s = 0; s < num_samples; ++s) {
        AlgebraElement a = random_element(algebra, rng);
        AlgebraElement b = random_element(algebra, rng);
        double r = residual(a, b);
        if (r > report.worst_residual) {
            report.worst_residual = r;
            if (r > tol.eps) report.witness = std::make_pair(a, b);
        }
    }
    report.pass = report.worst_residual <= tol.eps;
    return report;
}

} // namespace

IdentityCheckReport check_transfer_identity(const Action& alpha, const Action& l, int n,
                                            int num_samples, Tolerance tol, Rng& rng) {
    if (alpha.algebra() != l.algebra()) throw AlgebraMismatch("transfer identity across algebras");
    return sampled_identity(num_samples, tol, rng, alpha.algebra(),
                            [&](const AlgebraElement& a, const AlgebraElement& b) {
                                return norm_diff(l.apply(n, alpha.apply(n, a) * b),
                                                 a * l.apply(n, b));
                            });
}

IdentityCheckReport check_complete_transfer(const Action& alpha, const Action& l, int n,
                                            int num_samples, Tolerance tol, Rng& rng) {
    if (alpha.algebra() != l.algebra()) throw AlgebraMismatch("transfer identity across algebras");
    AlgebraElement a1 = alpha.apply(n, alpha.algebra().unit());
    return sampled_identity(num_samples, tol, rng, alpha.algebra(),
                            [&](const AlgebraElement& a, const AlgebraElement&) {
                                return norm_diff(alpha.apply(n, l.apply(n, a)), a1 * a * a1);
                            });
}

} // namespace xprod
