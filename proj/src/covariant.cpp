#include "xprod/covariant.hpp"

namespace xprod {

CovariantRep::CovariantRep(FiniteCStarAlgebra algebra, int hilbert_dim,
                           std::vector<std::vector<ComplexMatrix>> sigma_units, ComplexMatrix u1,
                           Tolerance tol)
    : algebra_(std::move(algebra)),
      hilbert_dim_(hilbert_dim),
      sigma_units_(std::move(sigma_units)),
      u1_(std::move(u1)),
      cache_(std::make_shared<Cache>()) {
    validate(tol);
}

CovariantRep CovariantRep::inclusion(const FiniteCStarAlgebra& algebra, ComplexMatrix u1,
                                     Tolerance tol) {
    int d = algebra.ambient_dim();
    std::vector<std::vector<ComplexMatrix>> units(algebra.num_blocks());
    for (int b = 0; b < algebra.num_blocks(); ++b) {
        int n = algebra.block_dim(b);
        units[b].reserve(n * n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                units[b].push_back(algebra.matrix_unit(b, i, j).embed_flat());
    }
    (void)d;
    return CovariantRep(algebra, algebra.ambient_dim(), std::move(units), std::move(u1), tol);
}

void CovariantRep::validate(Tolerance tol) const {
    if (hilbert_dim_ <= 0) throw Error("representation space must have positive dimension");
    if (static_cast<int>(sigma_units_.size()) != algebra_.num_blocks())
        throw Error("sigma images must cover every block");
    for (int b = 0; b < algebra_.num_blocks(); ++b) {
        int n = algebra_.block_dim(b);
        if (static_cast<int>(sigma_units_[b].size()) != n * n)
            throw Error("sigma images must cover every matrix unit");
        for (const auto& m : sigma_units_[b])
            if (m.rows() != hilbert_dim_ || m.cols() != hilbert_dim_)
                throw Error("sigma image has the wrong size");
    }
    if (u1_.rows() != hilbert_dim_ || u1_.cols() != hilbert_dim_)
        throw Error("U1 has the wrong size");
    if (!is_partial_isometry(u1_, tol))
        throw NotPartialIsometry("U1 is not a partial isometry");

    // sigma is unital.
    if (spectral_norm(sigma(algebra_.unit()) -
                      ComplexMatrix::Identity(hilbert_dim_, hilbert_dim_)) > tol.eps)
        throw Error("sigma is not unital");
    // *-homomorphism on the matrix-unit basis.
    for (int b = 0; b < algebra_.num_blocks(); ++b) {
        int n = algebra_.block_dim(b);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const ComplexMatrix& eij = sigma_unit(b, i, j);
                if (spectral_norm(eij.adjoint() - sigma_unit(b, j, i)) > tol.eps)
                    throw Error("sigma does not preserve adjoints");
                for (int k = 0; k < n; ++k)
                    for (int l = 0; l < n; ++l) {
                        ComplexMatrix want = (j == k)
                                                 ? sigma_unit(b, i, l)
                                                 : ComplexMatrix::Zero(hilbert_dim_, hilbert_dim_);
                        if (spectral_norm(eij * sigma_unit(b, k, l) - want) > tol.eps)
                            throw Error("sigma is not multiplicative");
                    }
                // Cross-block products vanish.
                for (int b2 = 0; b2 < algebra_.num_blocks(); ++b2) {
                    if (b2 == b) continue;
                    if (spectral_norm(eij * sigma_unit(b2, 0, 0)) > tol.eps)
                        throw Error("sigma images of distinct blocks do not annihilate");
                }
            }
    }
    // Injectivity: stacked images have full column rank.
    ComplexMatrix basis(hilbert_dim_ * hilbert_dim_, algebra_.dim());
    int col = 0;
    for (int b = 0; b < algebra_.num_blocks(); ++b)
        for (const auto& m : sigma_units_[b]) {
            basis.col(col++) = Eigen::Map<const ComplexVector>(m.data(), m.size());
        }
    Eigen::JacobiSVD<ComplexMatrix> svd(basis);
    if (svd.singularValues().minCoeff() < 1e-9)
        throw Error("sigma is not injective");
}

ComplexMatrix CovariantRep::sigma(const AlgebraElement& a) const {
    if (a.algebra() != algebra_) throw AlgebraMismatch("sigma applied across algebras");
    ComplexMatrix out = ComplexMatrix::Zero(hilbert_dim_, hilbert_dim_);
    for (int b = 0; b < algebra_.num_blocks(); ++b) {
        int n = algebra_.block_dim(b);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                Complex c = a.block(b)(i, j);
                if (c != Complex(0, 0)) out += c * sigma_units_[b][i * n + j];
            }
    }
    return out;
}

const ComplexMatrix& CovariantRep::sigma_unit(int block, int i, int j) const {
    return sigma_units_[block][i * algebra_.block_dim(block) + j];
}

const ComplexMatrix& CovariantRep::u_power(int n) const {
    if (n < 0) throw Error("u_power wants a nonnegative exponent");
    std::lock_guard<std::mutex> lock(cache_->mu);
    if (cache_->powers.empty()) {
        cache_->powers.push_back(ComplexMatrix::Identity(hilbert_dim_, hilbert_dim_));
        cache_->powers.push_back(u1_);
    }
    while (static_cast<int>(cache_->powers.size()) <= n)
        cache_->powers.push_back(cache_->powers.back() * u1_);
    return cache_->powers[n];
}

CovariantRep::MembershipResult CovariantRep::project_to_image(const ComplexMatrix& m) const {
    if (m.rows() != hilbert_dim_ || m.cols() != hilbert_dim_)
        throw Error("project_to_image: wrong size");
    {
        std::lock_guard<std::mutex> lock(cache_->mu);
        if (!cache_->image_solver) {
            ComplexMatrix basis(hilbert_dim_ * hilbert_dim_, algebra_.dim());
            int col = 0;
            for (int b = 0; b < algebra_.num_blocks(); ++b)
                for (const auto& u : sigma_units_[b])
                    basis.col(col++) = Eigen::Map<const ComplexVector>(u.data(), u.size());
            cache_->image_basis = basis;
            cache_->image_solver.emplace(basis);
        }
    }
    ComplexVector rhs = Eigen::Map<const ComplexVector>(m.data(), m.size());
    ComplexVector coeffs = cache_->image_solver->solve(rhs);
    AlgebraElement el = AlgebraElement::unvec(algebra_, coeffs);
    double residual = spectral_norm(m - sigma(el));
    return {std::move(el), residual};
}

CovariantRep CovariantRep::gauge_rotate(Complex lambda, Tolerance tol) const {
    if (std::abs(std::abs(lambda) - 1.0) > tol.eps)
        throw NotUnimodular("gauge_rotate: |lambda| must be 1");
    return CovariantRep(algebra_, hilbert_dim_, sigma_units_, lambda * u1_, tol);
}

InteractionReport verify_covariant(const CovariantRep& rep, const Interaction& in, int x_max,
                                   int num_samples, Tolerance tol, Rng& rng) {
    if (rep.algebra() != in.algebra())
        throw AlgebraMismatch("representation and interaction algebras differ");
    if (in.certified_up_to() < x_max)
        throw NotAnInteraction("verify_covariant requires certification up to x_max");
    InteractionReport report;
    for (int x = 1; x <= x_max; ++x) {
        const ComplexMatrix& ux = rep.u_power(x);
        report.add("u_partial_isometry", x, spectral_norm(ux * ux.adjoint() * ux - ux), tol);

        std::vector<AlgebraElement> samples;
        samples.reserve(num_samples);
        for (int s = 0; s < num_samples; ++s) samples.push_back(random_element(in.algebra(), rng));

        std::vector<double> cov(num_samples), mem(num_samples), dual(num_samples);
#pragma omp parallel for schedule(dynamic)
        for (int s = 0; s < num_samples; ++s) {
            const AlgebraElement& a = samples[s];
            ComplexMatrix sa = rep.sigma(a);
            cov[s] = spectral_norm(rep.sigma(in.v(x, a)) - ux * sa * ux.adjoint());
            ComplexMatrix compressed = ux.adjoint() * sa * ux;
            auto proj = rep.project_to_image(compressed);
            mem[s] = proj.residual;
            dual[s] = spectral_norm(compressed - rep.sigma(in.h(x, a)));
        }
        auto worst_of = [&](const std::vector<double>& r, const char* name) {
            double worst = 0.0;
            int wi = -1;
            for (int s = 0; s < num_samples; ++s)
                if (r[s] > worst) {
                    worst = r[s];
                    wi = s;
                }
            nlohmann::json witness;
            (void)wi;
            report.add(name, x, worst, tol, witness);
        };
        worst_of(cov, "covariance_v");
        worst_of(mem, "compression_in_image");
        worst_of(dual, "compression_equals_dual");
    }
    return report;
}

PartialIsometryCertificate strengthened_partial_isometry_certificate(const CovariantRep& rep,
                                                                     int x_max, Tolerance tol) {
    PartialIsometryCertificate cert;
    const ComplexMatrix& u1 = rep.u_power(1);
    ComplexMatrix range1 = u1 * u1.adjoint();
    if (!is_partial_isometry(u1, tol)) {
        cert.certified = false;
        return cert;
    }
    cert.up_to = 1;
    for (int x = 1; x < x_max; ++x) {
        const ComplexMatrix& ux = rep.u_power(x);
        ComplexMatrix initial = ux.adjoint() * ux;
        double comm = spectral_norm(initial * range1 - range1 * initial);
        cert.worst_commutator = std::max(cert.worst_commutator, comm);
        if (comm > tol.eps) {
            cert.certified = false;
            return cert;
        }
        cert.up_to = x + 1;
    }
    return cert;
}

RegularAmplification::RegularAmplification(CovariantRep base, int window)
    : base_(std::move(base)), window_(window) {
    if (window_ < 1) throw Error("amplification window must be at least 1");
}

RegularAmplification amplify_regular(const CovariantRep& rep, int window) {
    return RegularAmplification(rep, window);
}

} // namespace xprod
