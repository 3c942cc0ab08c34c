#include "xprod/algebra.hpp"

#include <algorithm>

namespace xprod {

FiniteCStarAlgebra::FiniteCStarAlgebra(std::vector<int> block_dims)
    : block_dims_(std::move(block_dims)) {
    if (block_dims_.empty()) throw Error("algebra needs at least one block");
    for (int n : block_dims_) {
        if (n <= 0) throw Error("block dimensions must be positive");
        dim_ += n * n;
        ambient_dim_ += n;
    }
}

AlgebraElement FiniteCStarAlgebra::unit() const {
    std::vector<ComplexMatrix> blocks;
    blocks.reserve(block_dims_.size());
    for (int n : block_dims_) blocks.push_back(ComplexMatrix::Identity(n, n));
    return AlgebraElement(*this, std::move(blocks));
}

AlgebraElement FiniteCStarAlgebra::zero() const {
    std::vector<ComplexMatrix> blocks;
    blocks.reserve(block_dims_.size());
    for (int n : block_dims_) blocks.push_back(ComplexMatrix::Zero(n, n));
    return AlgebraElement(*this, std::move(blocks));
}

AlgebraElement FiniteCStarAlgebra::matrix_unit(int block, int i, int j) const {
    AlgebraElement e = zero();
    e.block(block)(i, j) = 1.0;
    return e;
}

int FiniteCStarAlgebra::coord_index(int block, int i, int j) const {
    int off = 0;
    for (int b = 0; b < block; ++b) off += block_dims_[b] * block_dims_[b];
    return off + i * block_dims_[block] + j;
}

AlgebraElement::AlgebraElement(FiniteCStarAlgebra algebra, std::vector<ComplexMatrix> blocks)
    : algebra_(std::move(algebra)), blocks_(std::move(blocks)) {
    if (static_cast<int>(blocks_.size()) != algebra_.num_blocks())
        throw Error("element block count does not match the algebra");
    for (int b = 0; b < algebra_.num_blocks(); ++b) {
        int n = algebra_.block_dim(b);
        if (blocks_[b].rows() != n || blocks_[b].cols() != n)
            throw Error("element block size does not match the algebra");
        if (!all_finite(blocks_[b])) throw Error("element has non-finite entries");
    }
}

AlgebraElement AlgebraElement::operator+(const AlgebraElement& o) const {
    if (algebra_ != o.algebra_) throw AlgebraMismatch("element addition across algebras");
    std::vector<ComplexMatrix> blocks(blocks_.size());
    for (size_t b = 0; b < blocks_.size(); ++b) blocks[b] = blocks_[b] + o.blocks_[b];
    return AlgebraElement(algebra_, std::move(blocks));
}

AlgebraElement AlgebraElement::operator-(const AlgebraElement& o) const {
    if (algebra_ != o.algebra_) throw AlgebraMismatch("element subtraction across algebras");
    std::vector<ComplexMatrix> blocks(blocks_.size());
    for (size_t b = 0; b < blocks_.size(); ++b) blocks[b] = blocks_[b] - o.blocks_[b];
    return AlgebraElement(algebra_, std::move(blocks));
}

AlgebraElement AlgebraElement::operator*(const AlgebraElement& o) const {
    if (algebra_ != o.algebra_) throw AlgebraMismatch("element product across algebras");
    std::vector<ComplexMatrix> blocks(blocks_.size());
    for (size_t b = 0; b < blocks_.size(); ++b) blocks[b] = blocks_[b] * o.blocks_[b];
    return AlgebraElement(algebra_, std::move(blocks));
}

AlgebraElement AlgebraElement::operator*(Complex scalar) const {
    std::vector<ComplexMatrix> blocks(blocks_.size());
    for (size_t b = 0; b < blocks_.size(); ++b) blocks[b] = scalar * blocks_[b];
    return AlgebraElement(algebra_, std::move(blocks));
}

AlgebraElement AlgebraElement::operator-() const { return *this * Complex(-1.0, 0.0); }

AlgebraElement AlgebraElement::adjoint() const {
    std::vector<ComplexMatrix> blocks(blocks_.size());
    for (size_t b = 0; b < blocks_.size(); ++b) blocks[b] = blocks_[b].adjoint();
    return AlgebraElement(algebra_, std::move(blocks));
}

ComplexVector AlgebraElement::vec() const {
    ComplexVector v(algebra_.dim());
    int k = 0;
    for (int b = 0; b < algebra_.num_blocks(); ++b) {
        int n = algebra_.block_dim(b);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) v(k++) = blocks_[b](i, j);
    }
    return v;
}

AlgebraElement AlgebraElement::unvec(const FiniteCStarAlgebra& algebra, const ComplexVector& v) {
    if (v.size() != algebra.dim()) throw Error("unvec: wrong coordinate length");
    std::vector<ComplexMatrix> blocks;
    blocks.reserve(algebra.num_blocks());
    int k = 0;
    for (int b = 0; b < algebra.num_blocks(); ++b) {
        int n = algebra.block_dim(b);
        ComplexMatrix m(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) m(i, j) = v(k++);
        blocks.push_back(std::move(m));
    }
    return AlgebraElement(algebra, std::move(blocks));
}

ComplexMatrix AlgebraElement::embed_flat() const {
    ComplexMatrix m = ComplexMatrix::Zero(algebra_.ambient_dim(), algebra_.ambient_dim());
    int off = 0;
    for (int b = 0; b < algebra_.num_blocks(); ++b) {
        int n = algebra_.block_dim(b);
        m.block(off, off, n, n) = blocks_[b];
        off += n;
    }
    return m;
}

AlgebraElement AlgebraElement::extract_flat(const FiniteCStarAlgebra& algebra,
                                            const ComplexMatrix& m, double* off_block) {
    if (m.rows() != algebra.ambient_dim() || m.cols() != algebra.ambient_dim())
        throw Error("extract_flat: wrong ambient size");
    std::vector<ComplexMatrix> blocks;
    blocks.reserve(algebra.num_blocks());
    ComplexMatrix rest = m;
    int off = 0;
    for (int b = 0; b < algebra.num_blocks(); ++b) {
        int n = algebra.block_dim(b);
        blocks.push_back(m.block(off, off, n, n));
        rest.block(off, off, n, n).setZero();
        off += n;
    }
    if (off_block) *off_block = spectral_norm(rest);
    return AlgebraElement(algebra, std::move(blocks));
}

bool AlgebraElement::exactly_equal(const AlgebraElement& o) const {
    if (algebra_ != o.algebra_) return false;
    for (size_t b = 0; b < blocks_.size(); ++b)
        if (blocks_[b] != o.blocks_[b]) return false;
    return true;
}

bool AlgebraElement::is_scalar_multiple_of_unit(Complex* scalar) const {
    Complex z = blocks_[0](0, 0);
    for (int b = 0; b < algebra_.num_blocks(); ++b) {
        int n = algebra_.block_dim(b);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                Complex want = (i == j) ? z : Complex(0, 0);
                if (blocks_[b](i, j) != want) return false;
            }
    }
    if (scalar) *scalar = z;
    return true;
}

double operator_norm(const AlgebraElement& a) {
    double n = 0.0;
    for (int b = 0; b < a.num_blocks(); ++b) n = std::max(n, spectral_norm(a.block(b)));
    return n;
}

double norm_diff(const AlgebraElement& a, const AlgebraElement& b) {
    return operator_norm(a - b);
}

bool is_projection(const AlgebraElement& a, Tolerance tol) {
    return operator_norm(a - a.adjoint()) <= tol.eps && operator_norm(a * a - a) <= tol.eps;
}

bool hereditary_corner_membership(const AlgebraElement& p, const AlgebraElement& a,
                                  Tolerance tol) {
    if (!is_projection(p, tol)) throw NotProjection("hereditary_corner_membership: p");
    return norm_diff(p * a * p, a) <= tol.eps;
}

AlgebraElement random_element(const FiniteCStarAlgebra& algebra, Rng& rng) {
    std::vector<ComplexMatrix> blocks;
    blocks.reserve(algebra.num_blocks());
    for (int b = 0; b < algebra.num_blocks(); ++b)
        blocks.push_back(random_gaussian_matrix(algebra.block_dim(b), algebra.block_dim(b), rng));
    return AlgebraElement(algebra, std::move(blocks));
}

AlgebraElement random_hermitian(const FiniteCStarAlgebra& algebra, Rng& rng) {
    AlgebraElement a = random_element(algebra, rng);
    return (a + a.adjoint()) * Complex(0.5, 0.0);
}

AlgebraElement random_positive(const FiniteCStarAlgebra& algebra, Rng& rng) {
    AlgebraElement b = random_element(algebra, rng);
    return b.adjoint() * b;
}

} // namespace xprod
