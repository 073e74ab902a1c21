#include "gqa/linalg.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "gqa/error.hpp"
#include "gqa/parallel.hpp"

namespace gqa {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

void require(bool ok, const char* what)
{
    if (!ok) {
        throw DimensionMismatch(what);
    }
}

// Rotate rows i and k of m: (row_i, row_k) <- (c row_i + s row_k, -s row_i + c row_k).
void rotate_rows(Matrix& m, std::size_t i, std::size_t k, double c, double s)
{
    for (std::size_t j = 0; j < m.cols(); ++j) {
        const double a = m(i, j);
        const double b = m(k, j);
        m(i, j) = c * a + s * b;
        m(k, j) = -s * a + c * b;
    }
}

void swap_cols(Matrix& m, std::size_t a, std::size_t b)
{
    if (a == b) {
        return;
    }
    for (std::size_t i = 0; i < m.rows(); ++i) {
        std::swap(m(i, a), m(i, b));
    }
}

// Flip column signs so the first entry of largest magnitude is positive.
void fix_signs(Matrix& basis)
{
    for (std::size_t j = 0; j < basis.cols(); ++j) {
        std::size_t best = 0;
        double best_abs = -1.0;
        for (std::size_t i = 0; i < basis.rows(); ++i) {
            // Near-ties are broken toward the first index so that rounding
            // noise cannot flip the choice.
            const double v = std::abs(basis(i, j));
            if (v > best_abs * (1.0 + 1e-8)) {
                best_abs = v;
                best = i;
            }
        }
        if (basis.rows() > 0 && basis(best, j) < 0.0) {
            for (std::size_t i = 0; i < basis.rows(); ++i) {
                basis(i, j) = -basis(i, j);
            }
        }
        for (std::size_t i = 0; i < basis.rows(); ++i) {
            if (basis(i, j) == 0.0) {
                basis(i, j) = 0.0; // no negative zeros in serialized output
            }
        }
    }
}

} // namespace

// ---------------------------------------------------------------------------
// Matrix

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows)
    , cols_(cols)
    , data_(rows * cols, fill)
{}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows)
    : rows_(rows.size())
    , cols_(rows.size() == 0 ? 0 : rows.begin()->size())
{
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        require(r.size() == cols_, "ragged matrix literal");
        data_.insert(data_.end(), r.begin(), r.end());
    }
}

Matrix Matrix::identity(std::size_t n)
{
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = 1.0;
    }
    return m;
}

Matrix Matrix::diagonal(std::span<const double> d)
{
    Matrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
        m(i, i) = d[i];
    }
    return m;
}

Matrix Matrix::column(std::span<const double> v)
{
    Matrix m(v.size(), 1);
    std::copy(v.begin(), v.end(), m.data_.begin());
    return m;
}

Matrix Matrix::transpose() const
{
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) {
            t(j, i) = (*this)(i, j);
        }
    }
    return t;
}

Vector Matrix::col(std::size_t j) const
{
    Vector v(rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
        v[i] = (*this)(i, j);
    }
    return v;
}

void Matrix::set_col(std::size_t j, std::span<const double> v)
{
    require(v.size() == rows_, "set_col: length mismatch");
    for (std::size_t i = 0; i < rows_; ++i) {
        (*this)(i, j) = v[i];
    }
}

Vector Matrix::row(std::size_t i) const
{
    return Vector(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                  data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
}

Matrix Matrix::block(std::size_t r0, std::size_t c0, std::size_t nrows, std::size_t ncols) const
{
    require(r0 + nrows <= rows_ && c0 + ncols <= cols_, "block out of range");
    Matrix b(nrows, ncols);
    for (std::size_t i = 0; i < nrows; ++i) {
        for (std::size_t j = 0; j < ncols; ++j) {
            b(i, j) = (*this)(r0 + i, c0 + j);
        }
    }
    return b;
}

void Matrix::set_block(std::size_t r0, std::size_t c0, const Matrix& b)
{
    require(r0 + b.rows() <= rows_ && c0 + b.cols() <= cols_, "set_block out of range");
    for (std::size_t i = 0; i < b.rows(); ++i) {
        for (std::size_t j = 0; j < b.cols(); ++j) {
            (*this)(r0 + i, c0 + j) = b(i, j);
        }
    }
}

Matrix Matrix::select_cols(std::span<const std::size_t> idx) const
{
    Matrix m(rows_, idx.size());
    for (std::size_t k = 0; k < idx.size(); ++k) {
        require(idx[k] < cols_, "select_cols out of range");
        for (std::size_t i = 0; i < rows_; ++i) {
            m(i, k) = (*this)(i, idx[k]);
        }
    }
    return m;
}

double Matrix::max_abs() const noexcept
{
    double m = 0.0;
    for (double v : data_) {
        m = std::max(m, std::abs(v));
    }
    return m;
}

double Matrix::max_col_norm() const noexcept
{
    double m = 0.0;
    for (std::size_t j = 0; j < cols_; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < rows_; ++i) {
            s += (*this)(i, j) * (*this)(i, j);
        }
        m = std::max(m, std::sqrt(s));
    }
    return m;
}

double Matrix::frobenius_norm() const noexcept
{
    double s = 0.0;
    for (double v : data_) {
        s += v * v;
    }
    return std::sqrt(s);
}

Matrix& Matrix::operator+=(const Matrix& o)
{
    require(rows_ == o.rows_ && cols_ == o.cols_, "matrix +: shape mismatch");
    for (std::size_t k = 0; k < data_.size(); ++k) {
        data_[k] += o.data_[k];
    }
    return *this;
}

Matrix& Matrix::operator-=(const Matrix& o)
{
    require(rows_ == o.rows_ && cols_ == o.cols_, "matrix -: shape mismatch");
    for (std::size_t k = 0; k < data_.size(); ++k) {
        data_[k] -= o.data_[k];
    }
    return *this;
}

Matrix& Matrix::operator*=(double s) noexcept
{
    for (double& v : data_) {
        v *= s;
    }
    return *this;
}

Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
Matrix operator*(Matrix a, double s) { return a *= s; }
Matrix operator*(double s, Matrix a) { return a *= s; }

Matrix operator*(const Matrix& a, const Matrix& b)
{
    return matmul(a, b);
}

Vector operator*(const Matrix& a, std::span<const double> x)
{
    require(a.cols() == x.size(), "matrix-vector product: length mismatch");
    Vector y(a.rows(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < a.cols(); ++j) {
            s += a(i, j) * x[j];
        }
        y[i] = s;
    }
    return y;
}

Vector add(std::span<const double> a, std::span<const double> b)
{
    require(a.size() == b.size(), "vector add: length mismatch");
    Vector r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        r[i] = a[i] + b[i];
    }
    return r;
}

Vector sub(std::span<const double> a, std::span<const double> b)
{
    require(a.size() == b.size(), "vector sub: length mismatch");
    Vector r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        r[i] = a[i] - b[i];
    }
    return r;
}

Vector scaled(std::span<const double> a, double s)
{
    Vector r(a.begin(), a.end());
    for (double& v : r) {
        v *= s;
    }
    return r;
}

double dot(std::span<const double> a, std::span<const double> b)
{
    require(a.size() == b.size(), "dot: length mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        s += a[i] * b[i];
    }
    return s;
}

double norm(std::span<const double> a)
{
    return std::sqrt(dot(a, a));
}

Vector concat(std::span<const double> a, std::span<const double> b)
{
    Vector r(a.begin(), a.end());
    r.insert(r.end(), b.begin(), b.end());
    return r;
}

Matrix block_diag(const Matrix& a, const Matrix& b)
{
    Matrix m(a.rows() + b.rows(), a.cols() + b.cols());
    m.set_block(0, 0, a);
    m.set_block(a.rows(), a.cols(), b);
    return m;
}

Matrix hstack(const Matrix& a, const Matrix& b)
{
    require(a.rows() == b.rows(), "hstack: row mismatch");
    Matrix m(a.rows(), a.cols() + b.cols());
    m.set_block(0, 0, a);
    m.set_block(0, a.cols(), b);
    return m;
}

Matrix vstack(const Matrix& a, const Matrix& b)
{
    require(a.cols() == b.cols(), "vstack: column mismatch");
    Matrix m(a.rows() + b.rows(), a.cols());
    m.set_block(0, 0, a);
    m.set_block(a.rows(), 0, b);
    return m;
}

Matrix symmetrized(const Matrix& m)
{
    require(m.rows() == m.cols(), "symmetrized: not square");
    Matrix s(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            s(i, j) = 0.5 * (m(i, j) + m(j, i));
        }
    }
    return s;
}

double max_abs_diff(const Matrix& a, const Matrix& b)
{
    require(a.rows() == b.rows() && a.cols() == b.cols(), "max_abs_diff: shape mismatch");
    double m = 0.0;
    for (std::size_t k = 0; k < a.data().size(); ++k) {
        m = std::max(m, std::abs(a.data()[k] - b.data()[k]));
    }
    return m;
}

// ---------------------------------------------------------------------------
// Decompositions

QrResult givens_qr(const Matrix& a)
{
    const std::size_t n = a.rows();
    Matrix r = a;
    Matrix qt = Matrix::identity(n);
    const std::size_t steps = std::min(n == 0 ? 0 : n - 1, a.cols());
    for (std::size_t j = 0; j < steps; ++j) {
        for (std::size_t i = n - 1; i > j; --i) {
            const double x = r(i - 1, j);
            const double y = r(i, j);
            if (y == 0.0) {
                continue;
            }
            const double h = std::hypot(x, y);
            const double c = x / h;
            const double s = y / h;
            rotate_rows(r, i - 1, i, c, s);
            rotate_rows(qt, i - 1, i, c, s);
            r(i, j) = 0.0;
        }
    }
    return {qt.transpose(), r};
}

PivotedQr pivoted_qr(const Matrix& a, double tol)
{
    const std::size_t n = a.rows();
    const std::size_t m = a.cols();
    Matrix r = a;
    Matrix qt = Matrix::identity(n);
    std::vector<std::size_t> perm(m);
    std::iota(perm.begin(), perm.end(), 0);

    const double threshold = tol * a.max_col_norm();
    std::size_t rank = 0;
    const std::size_t steps = std::min(n, m);
    for (std::size_t j = 0; j < steps; ++j) {
        // Pivot: the remaining column with the largest trailing norm. Ties go
        // to the lowest index, so near-equal norms choose deterministically.
        std::size_t best = j;
        double best_norm = -1.0;
        for (std::size_t k = j; k < m; ++k) {
            double s = 0.0;
            for (std::size_t i = j; i < n; ++i) {
                s += r(i, k) * r(i, k);
            }
            if (s > best_norm * (1.0 + 1e-10) + 1e-300) {
                best_norm = s;
                best = k;
            }
        }
        swap_cols(r, j, best);
        std::swap(perm[j], perm[best]);

        for (std::size_t i = n - 1; i > j; --i) {
            const double x = r(i - 1, j);
            const double y = r(i, j);
            if (y == 0.0) {
                continue;
            }
            const double h = std::hypot(x, y);
            rotate_rows(r, i - 1, i, x / h, y / h);
            rotate_rows(qt, i - 1, i, x / h, y / h);
            r(i, j) = 0.0;
        }
    }
    for (std::size_t j = 0; j < steps; ++j) {
        if (!(std::abs(r(j, j)) > threshold) || r(j, j) == 0.0) {
            break;
        }
        ++rank;
    }
    return {qt.transpose(), r, perm, rank};
}

Svd svd(const Matrix& a)
{
    if (a.rows() < a.cols()) {
        Svd t = svd(a.transpose());
        return {t.v, t.s, t.u};
    }
    const std::size_t n = a.rows();
    const std::size_t m = a.cols();
    Matrix u = a;
    Matrix v = Matrix::identity(m);

    constexpr double eps = 1e-15;
    for (int sweep = 0; sweep < 80; ++sweep) {
        bool rotated = false;
        for (std::size_t p = 0; p + 1 < m; ++p) {
            for (std::size_t q = p + 1; q < m; ++q) {
                double alpha = 0.0;
                double beta = 0.0;
                double gamma = 0.0;
                for (std::size_t i = 0; i < n; ++i) {
                    alpha += u(i, p) * u(i, p);
                    beta += u(i, q) * u(i, q);
                    gamma += u(i, p) * u(i, q);
                }
                if (gamma == 0.0 || std::abs(gamma) <= eps * std::sqrt(alpha * beta)) {
                    continue;
                }
                rotated = true;
                const double zeta = (beta - alpha) / (2.0 * gamma);
                const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                for (std::size_t i = 0; i < n; ++i) {
                    const double up = u(i, p);
                    const double uq = u(i, q);
                    u(i, p) = c * up - s * uq;
                    u(i, q) = s * up + c * uq;
                }
                for (std::size_t i = 0; i < m; ++i) {
                    const double vp = v(i, p);
                    const double vq = v(i, q);
                    v(i, p) = c * vp - s * vq;
                    v(i, q) = s * vp + c * vq;
                }
            }
        }
        if (!rotated) {
            break;
        }
    }

    Vector s(m);
    for (std::size_t j = 0; j < m; ++j) {
        double ss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            ss += u(i, j) * u(i, j);
        }
        s[j] = std::sqrt(ss);
    }
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return s[x] > s[y]; });

    Svd out{Matrix(n, m), Vector(m), Matrix(m, m)};
    for (std::size_t k = 0; k < m; ++k) {
        const std::size_t j = order[k];
        out.s[k] = s[j];
        for (std::size_t i = 0; i < n; ++i) {
            out.u(i, k) = s[j] > 0.0 ? u(i, j) / s[j] : 0.0;
        }
        for (std::size_t i = 0; i < m; ++i) {
            out.v(i, k) = v(i, j);
        }
    }
    return out;
}

SymmetricEigen symmetric_eigen(const Matrix& a)
{
    require(a.rows() == a.cols(), "symmetric_eigen: not square");
    const std::size_t n = a.rows();
    Matrix m = symmetrized(a);
    Matrix v = Matrix::identity(n);

    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                total += m(i, j) * m(i, j);
                if (i != j) {
                    off += m(i, j) * m(i, j);
                }
            }
        }
        if (off <= 1e-30 * total || off == 0.0) {
            break;
        }
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                if (m(p, q) == 0.0) {
                    continue;
                }
                const double theta = (m(q, q) - m(p, p)) / (2.0 * m(p, q));
                const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double mkp = m(k, p);
                    const double mkq = m(k, q);
                    m(k, p) = c * mkp - s * mkq;
                    m(k, q) = s * mkp + c * mkq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double mpk = m(p, k);
                    const double mqk = m(q, k);
                    m(p, k) = c * mpk - s * mqk;
                    m(q, k) = s * mpk + c * mqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v(k, p);
                    const double vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return m(x, x) < m(y, y); });
    SymmetricEigen out{Vector(n), Matrix(n, n)};
    for (std::size_t k = 0; k < n; ++k) {
        out.values[k] = m(order[k], order[k]);
        for (std::size_t i = 0; i < n; ++i) {
            out.vectors(i, k) = v(i, order[k]);
        }
    }
    return out;
}

std::size_t rank(const Matrix& a, double tol, double scale_floor)
{
    if (a.empty()) {
        return 0;
    }
    const double threshold = tol * std::max(a.max_col_norm(), scale_floor);
    const Svd d = svd(a);
    return static_cast<std::size_t>(
        std::count_if(d.s.begin(), d.s.end(), [&](double s) { return s > threshold && s > 0.0; }));
}

Matrix pseudoinverse(const Matrix& a, double tol, double scale_floor)
{
    Matrix g(a.cols(), a.rows());
    if (a.empty()) {
        return g;
    }
    const double threshold = tol * std::max(a.max_col_norm(), scale_floor);
    const Svd d = svd(a);
    for (std::size_t k = 0; k < d.s.size(); ++k) {
        if (!(d.s[k] > threshold) || d.s[k] == 0.0) {
            continue;
        }
        const double inv = 1.0 / d.s[k];
        for (std::size_t i = 0; i < a.cols(); ++i) {
            for (std::size_t j = 0; j < a.rows(); ++j) {
                g(i, j) += d.v(i, k) * inv * d.u(j, k);
            }
        }
    }
    return g;
}

Matrix psd_factor(const Matrix& sigma, double tol)
{
    require(sigma.rows() == sigma.cols(), "psd_factor: not square");
    const std::size_t n = sigma.rows();
    Matrix w = symmetrized(sigma);
    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        scale = std::max(scale, std::abs(w(i, i)));
    }
    Matrix l(n, n);
    if (scale == 0.0) {
        if (w.max_abs() > 0.0) {
            throw NotPsd("psd_factor: zero diagonal with nonzero off-diagonal entries");
        }
        return l;
    }
    const double threshold = tol * scale;
    const double off_limit = 10.0 * std::sqrt(threshold * scale);

    // Right-looking Cholesky on the working copy w (lower triangle only).
    for (std::size_t k = 0; k < n; ++k) {
        const double pivot = w(k, k);
        if (pivot < -threshold) {
            throw NotPsd("psd_factor: negative pivot " + std::to_string(pivot));
        }
        if (pivot <= threshold) {
            for (std::size_t i = k + 1; i < n; ++i) {
                if (std::abs(w(i, k)) > off_limit) {
                    throw NotPsd("psd_factor: matrix is not positive semidefinite");
                }
            }
            continue; // column k of L stays zero
        }
        const double d = std::sqrt(pivot);
        l(k, k) = d;
        for (std::size_t i = k + 1; i < n; ++i) {
            l(i, k) = w(i, k) / d;
        }
        for (std::size_t j = k + 1; j < n; ++j) {
            for (std::size_t i = j; i < n; ++i) {
                w(i, j) -= l(i, k) * l(j, k);
            }
        }
    }
    return l;
}

// ---------------------------------------------------------------------------
// Subspaces

Subspace::Subspace(std::size_t ambient_dim)
    : n_(ambient_dim)
    , basis_(ambient_dim, 0)
{}

Subspace Subspace::full(std::size_t n)
{
    return from_projector(Matrix::identity(n), n);
}

Subspace Subspace::from_orthonormal(const Matrix& basis)
{
    Subspace s = from_projector(basis * basis.transpose(), basis.cols());
    // A basis that is already canonical up to rounding is kept bit for bit.
    if (s.basis_.cols() == basis.cols() && max_abs_diff(s.basis_, basis) <= 16 * kEps) {
        s.basis_ = basis;
    }
    return s;
}

Subspace Subspace::from_projector(const Matrix& projector, std::size_t rank)
{
    Subspace s(projector.rows());
    if (rank == 0) {
        return s;
    }
    if (rank == projector.rows()) {
        s.basis_ = Matrix::identity(rank);
        return s;
    }
    const PivotedQr qr = pivoted_qr(symmetrized(projector), 0.0);
    std::vector<std::size_t> first(rank);
    std::iota(first.begin(), first.end(), 0);
    s.basis_ = qr.q.select_cols(first);
    fix_signs(s.basis_);
    return s;
}

Matrix Subspace::projector() const
{
    return basis_ * basis_.transpose();
}

Subspace image(const Matrix& a, double tol, double scale_floor)
{
    const std::size_t n = a.rows();
    if (a.cols() == 0 || n == 0) {
        return Subspace(n);
    }
    const double threshold = tol * std::max(a.max_col_norm(), scale_floor);
    const Svd d = svd(a);
    std::vector<std::size_t> keep;
    for (std::size_t k = 0; k < d.s.size(); ++k) {
        if (d.s[k] > threshold && d.s[k] > 0.0) {
            keep.push_back(k);
        }
    }
    return Subspace::from_orthonormal(d.u.select_cols(keep));
}

Subspace kernel(const Matrix& a, double tol, double scale_floor)
{
    return orth_complement(image(a.transpose(), tol, scale_floor));
}

Subspace orth_complement(const Subspace& s)
{
    const std::size_t n = s.ambient_dim();
    return Subspace::from_projector(Matrix::identity(n) - s.projector(), n - s.rank());
}

Subspace subspace_image(const Matrix& t, const Subspace& s)
{
    require(t.cols() == s.ambient_dim(), "subspace_image: dimension mismatch");
    if (s.rank() == 0) {
        return Subspace(t.rows());
    }
    // The basis is orthonormal, so the column-norm scale of T * basis is the
    // scale of T on S; a floor of ||T|| keeps near-annihilated directions out.
    return image(t * s.basis(), kRankTolerance, t.max_col_norm());
}

Subspace subspace_sum(const Subspace& a, const Subspace& b)
{
    require(a.ambient_dim() == b.ambient_dim(), "subspace_sum: dimension mismatch");
    if (a.rank() == 0) {
        return b;
    }
    if (b.rank() == 0) {
        return a;
    }
    return image(hstack(a.basis(), b.basis()), kRankTolerance, 1.0);
}

Subspace subspace_intersection(const Subspace& a, const Subspace& b)
{
    return orth_complement(subspace_sum(orth_complement(a), orth_complement(b)));
}

Vector project(const Subspace& s, std::span<const double> x)
{
    require(x.size() == s.ambient_dim(), "project: dimension mismatch");
    const Matrix bt = s.basis().transpose();
    return s.basis() * (bt * x);
}

bool subspaces_equal(const Subspace& a, const Subspace& b, double tol)
{
    if (a.ambient_dim() != b.ambient_dim() || a.rank() != b.rank()) {
        return false;
    }
    return max_abs_diff(a.projector(), b.projector()) <= tol;
}

} // namespace gqa
