#pragma once

// Dense real linear algebra for the small systems the engine manipulates:
// Givens QR, Jacobi SVD/eigendecomposition, pseudoinverses, semidefinite
// Cholesky and orthonormal subspaces with a canonical basis.

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace gqa {

/// Relative tolerance used for every rank decision in the engine.
inline constexpr double kRankTolerance = 1e-9;

using Vector = std::vector<double>;

/// Row-major dense matrix. Zero-sized dimensions are allowed.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
    Matrix(std::initializer_list<std::initializer_list<double>> rows);

    static Matrix identity(std::size_t n);
    static Matrix zeros(std::size_t rows, std::size_t cols) { return Matrix(rows, cols); }
    static Matrix diagonal(std::span<const double> d);
    static Matrix column(std::span<const double> v);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return data_.empty(); }

    double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

    std::span<double> data() noexcept { return data_; }
    std::span<const double> data() const noexcept { return data_; }

    Matrix transpose() const;
    Vector col(std::size_t j) const;
    void set_col(std::size_t j, std::span<const double> v);
    Vector row(std::size_t i) const;

    /// Copy of the sub-block starting at (r0, c0).
    Matrix block(std::size_t r0, std::size_t c0, std::size_t nrows, std::size_t ncols) const;
    void set_block(std::size_t r0, std::size_t c0, const Matrix& b);

    /// Keep only the listed columns, in order.
    Matrix select_cols(std::span<const std::size_t> idx) const;

    double max_abs() const noexcept;
    double max_col_norm() const noexcept;
    double frobenius_norm() const noexcept;

    Matrix& operator+=(const Matrix& o);
    Matrix& operator-=(const Matrix& o);
    Matrix& operator*=(double s) noexcept;

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator*(Matrix a, double s);
Matrix operator*(double s, Matrix a);
Matrix operator*(const Matrix& a, const Matrix& b);
Vector operator*(const Matrix& a, std::span<const double> x);

Vector add(std::span<const double> a, std::span<const double> b);
Vector sub(std::span<const double> a, std::span<const double> b);
Vector scaled(std::span<const double> a, double s);
double dot(std::span<const double> a, std::span<const double> b);
double norm(std::span<const double> a);
Vector concat(std::span<const double> a, std::span<const double> b);

/// [a 0; 0 b]
Matrix block_diag(const Matrix& a, const Matrix& b);
/// [a b]
Matrix hstack(const Matrix& a, const Matrix& b);
/// [a; b]
Matrix vstack(const Matrix& a, const Matrix& b);

/// (M + M^T) / 2
Matrix symmetrized(const Matrix& m);

/// Largest |a_ij - b_ij|; shapes must agree.
double max_abs_diff(const Matrix& a, const Matrix& b);

// ---------------------------------------------------------------------------
// Decompositions

struct QrResult {
    Matrix q; ///< orthogonal, rows x rows
    Matrix r; ///< upper triangular, rows x cols
};

/// Full QR by Givens rotations; works for any shape.
QrResult givens_qr(const Matrix& a);

struct PivotedQr {
    Matrix q;
    Matrix r;
    std::vector<std::size_t> perm; ///< A(:, perm) = Q R
    std::size_t rank = 0;
};

/// Givens QR with column pivoting by descending remaining column norm.
/// rank counts |R_kk| above tol * (largest column norm of A).
PivotedQr pivoted_qr(const Matrix& a, double tol = kRankTolerance);

struct Svd {
    Matrix u;  ///< rows x k, orthonormal columns
    Vector s;  ///< k singular values, descending
    Matrix v;  ///< cols x k, orthonormal columns
};

/// Thin SVD by one-sided Jacobi rotations, k = min(rows, cols).
Svd svd(const Matrix& a);

struct SymmetricEigen {
    Vector values;  ///< ascending
    Matrix vectors; ///< columns are eigenvectors
};

/// Cyclic Jacobi eigendecomposition of a symmetric matrix.
SymmetricEigen symmetric_eigen(const Matrix& a);

/// Numerical rank with threshold tol * max(largest column norm, scale_floor).
std::size_t rank(const Matrix& a, double tol = kRankTolerance, double scale_floor = 0.0);

/// Moore-Penrose pseudoinverse through the SVD. Singular values below
/// tol * max(largest column norm, scale_floor) are treated as zero.
Matrix pseudoinverse(const Matrix& a, double tol = kRankTolerance, double scale_floor = 0.0);

/// Lower-triangular L with L L^T = sigma for symmetric PSD sigma.
/// Pivots below tol * max diagonal become exact zeros; throws NotPsd on a
/// pivot below -tol * max diagonal or on an off-diagonal entry that no PSD
/// matrix could have.
Matrix psd_factor(const Matrix& sigma, double tol = kRankTolerance);

// ---------------------------------------------------------------------------
// Subspaces

/// A linear subspace of R^n held by an orthonormal basis in canonical form:
/// the basis is the Q factor of a pivoted QR of the orthogonal projector, with
/// each column sign-fixed so its first entry of largest magnitude is positive.
class Subspace {
public:
    Subspace() = default;
    /// Zero subspace of R^n.
    explicit Subspace(std::size_t ambient_dim);

    static Subspace zero(std::size_t n) { return Subspace(n); }
    static Subspace full(std::size_t n);
    /// Canonicalize an orthonormal (not necessarily canonical) basis.
    static Subspace from_orthonormal(const Matrix& basis);
    /// Canonical basis of the range of a symmetric projector of known rank.
    static Subspace from_projector(const Matrix& projector, std::size_t rank);

    std::size_t ambient_dim() const noexcept { return n_; }
    std::size_t rank() const noexcept { return basis_.cols(); }
    const Matrix& basis() const noexcept { return basis_; }
    Matrix projector() const;

    friend bool operator==(const Subspace&, const Subspace&) = default;

private:
    std::size_t n_ = 0;
    Matrix basis_;
};

Subspace image(const Matrix& a, double tol = kRankTolerance, double scale_floor = 0.0);
Subspace kernel(const Matrix& a, double tol = kRankTolerance, double scale_floor = 0.0);
Subspace orth_complement(const Subspace& s);
/// im(T * basis(S))
Subspace subspace_image(const Matrix& t, const Subspace& s);
Subspace subspace_sum(const Subspace& a, const Subspace& b);
Subspace subspace_intersection(const Subspace& a, const Subspace& b);
Vector project(const Subspace& s, std::span<const double> x);
/// Projector equality within tol.
bool subspaces_equal(const Subspace& a, const Subspace& b, double tol = kRankTolerance);

} // namespace gqa
