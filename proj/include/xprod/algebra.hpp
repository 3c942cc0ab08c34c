#ifndef XPROD_ALGEBRA_HPP
#define XPROD_ALGEBRA_HPP

/// Finite-dimensional C*-algebras as direct sums of full matrix blocks,
/// and their elements.  The block decomposition is kept explicit so the
/// primitive ideal space is the block index set {0..m-1} by construction.

#include <initializer_list>
#include <vector>

#include "xprod/matrix.hpp"

namespace xprod {

class AlgebraElement;

class FiniteCStarAlgebra {
  public:
    FiniteCStarAlgebra() = default;
    explicit FiniteCStarAlgebra(std::vector<int> block_dims);

    int num_blocks() const { return static_cast<int>(block_dims_.size()); }
    int block_dim(int b) const { return block_dims_[b]; }
    const std::vector<int>& block_dims() const { return block_dims_; }

    /// Linear dimension, sum of squared block sizes.
    int dim() const { return dim_; }
    /// Size of the defining block-diagonal representation, sum of block sizes.
    int ambient_dim() const { return ambient_dim_; }

    AlgebraElement unit() const;
    AlgebraElement zero() const;
    /// Matrix unit e_{ij} of block b (zero elsewhere).
    AlgebraElement matrix_unit(int block, int i, int j) const;

    /// Position of the (block, i, j) matrix-unit coordinate in the flattened
    /// basis ordering: blocks in order, row-major inside each block.
    int coord_index(int block, int i, int j) const;

    bool operator==(const FiniteCStarAlgebra& o) const { return block_dims_ == o.block_dims_; }
    bool operator!=(const FiniteCStarAlgebra& o) const { return !(*this == o); }

  private:
    std::vector<int> block_dims_;
    int dim_ = 0;
    int ambient_dim_ = 0;
};

class AlgebraElement {
  public:
    AlgebraElement() = default;
    AlgebraElement(FiniteCStarAlgebra algebra, std::vector<ComplexMatrix> blocks);

    const FiniteCStarAlgebra& algebra() const { return algebra_; }
    const ComplexMatrix& block(int b) const { return blocks_[b]; }
    ComplexMatrix& block(int b) { return blocks_[b]; }
    int num_blocks() const { return static_cast<int>(blocks_.size()); }

    AlgebraElement operator+(const AlgebraElement& o) const;
    AlgebraElement operator-(const AlgebraElement& o) const;
    AlgebraElement operator*(const AlgebraElement& o) const;  // algebra product
    AlgebraElement operator*(Complex scalar) const;
    AlgebraElement operator-() const;
    AlgebraElement adjoint() const;

    /// Coordinate vector in the matrix-unit basis (see coord_index).
    ComplexVector vec() const;
    static AlgebraElement unvec(const FiniteCStarAlgebra& algebra, const ComplexVector& v);

    /// Block-diagonal matrix of size ambient_dim().
    ComplexMatrix embed_flat() const;
    /// Reads the block-diagonal part of an ambient matrix; if off_block is
    /// non-null it receives the norm of what was discarded.
    static AlgebraElement extract_flat(const FiniteCStarAlgebra& algebra, const ComplexMatrix& m,
                                       double* off_block = nullptr);

    bool exactly_equal(const AlgebraElement& o) const;
    /// True when the element is z * 1; z is written through `scalar`.
    bool is_scalar_multiple_of_unit(Complex* scalar = nullptr) const;

  private:
    FiniteCStarAlgebra algebra_;
    std::vector<ComplexMatrix> blocks_;
};

inline AlgebraElement operator*(Complex scalar, const AlgebraElement& a) { return a * scalar; }

/// Max over blocks of the largest singular value.
double operator_norm(const AlgebraElement& a);
double norm_diff(const AlgebraElement& a, const AlgebraElement& b);

bool is_projection(const AlgebraElement& a, Tolerance tol = {});

/// ||p a p - a|| <= eps, i.e. a lies in the hereditary corner p A p.
/// Throws NotProjection when p fails is_projection.
bool hereditary_corner_membership(const AlgebraElement& p, const AlgebraElement& a,
                                  Tolerance tol = {});

AlgebraElement random_element(const FiniteCStarAlgebra& algebra, Rng& rng);
AlgebraElement random_hermitian(const FiniteCStarAlgebra& algebra, Rng& rng);
AlgebraElement random_positive(const FiniteCStarAlgebra& algebra, Rng& rng);

} // namespace xprod

#endif
