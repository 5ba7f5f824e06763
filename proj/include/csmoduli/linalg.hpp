#pragma once

// Small dense linear algebra over an abstract scalar (double or Rational).
// Hand-rolled so the exact and floating paths share one code base; pivoting
// is deterministic, so repeated runs are bit-identical.

#include <cassert>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "csmoduli/rational.hpp"

namespace csm {

template <class T>
class Mat {
  public:
    Mat() = default;
    Mat(size_t r, size_t c) : rows_(r), cols_(c), a_(r * c, scalar_traits<T>::zero()) {}

    static Mat identity(size_t n) {
        Mat m(n, n);
        for (size_t i = 0; i < n; ++i) m(i, i) = scalar_traits<T>::one();
        return m;
    }

    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }
    T& operator()(size_t i, size_t j) { return a_[i * cols_ + j]; }
    const T& operator()(size_t i, size_t j) const { return a_[i * cols_ + j]; }

    friend Mat operator+(const Mat& x, const Mat& y) {
        assert(x.rows_ == y.rows_ && x.cols_ == y.cols_);
        Mat r = x;
        for (size_t i = 0; i < r.a_.size(); ++i) r.a_[i] = r.a_[i] + y.a_[i];
        return r;
    }
    friend Mat operator-(const Mat& x, const Mat& y) {
        assert(x.rows_ == y.rows_ && x.cols_ == y.cols_);
        Mat r = x;
        for (size_t i = 0; i < r.a_.size(); ++i) r.a_[i] = r.a_[i] - y.a_[i];
        return r;
    }
    Mat operator-() const {
        Mat r = *this;
        for (auto& v : r.a_) v = -v;
        return r;
    }
    friend Mat operator*(const Mat& x, const Mat& y) {
        assert(x.cols_ == y.rows_);
        Mat r(x.rows_, y.cols_);
        for (size_t i = 0; i < x.rows_; ++i)
            for (size_t k = 0; k < x.cols_; ++k) {
                const T& xv = x(i, k);
                if (scalar_traits<T>::is_zero(xv)) continue;
                for (size_t j = 0; j < y.cols_; ++j) r(i, j) += xv * y(k, j);
            }
        return r;
    }
    friend Mat operator*(const T& s, const Mat& x) {
        Mat r = x;
        for (auto& v : r.a_) v = s * v;
        return r;
    }

    Mat transpose() const {
        Mat r(cols_, rows_);
        for (size_t i = 0; i < rows_; ++i)
            for (size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
        return r;
    }

    std::vector<T> apply(const std::vector<T>& v) const {
        assert(v.size() == cols_);
        std::vector<T> r(rows_, scalar_traits<T>::zero());
        for (size_t i = 0; i < rows_; ++i)
            for (size_t j = 0; j < cols_; ++j) r[i] += (*this)(i, j) * v[j];
        return r;
    }

    double max_abs() const {
        double m = 0;
        for (const auto& v : a_) {
            double x = std::fabs(scalar_traits<T>::to_double(v));
            if (x > m) m = x;
        }
        return m;
    }

    bool is_zero_exact() const {
        for (const auto& v : a_)
            if (!scalar_traits<T>::is_zero(v)) return false;
        return true;
    }

  private:
    size_t rows_ = 0, cols_ = 0;
    std::vector<T> a_;
};

template <class T>
T dot(const std::vector<T>& x, const std::vector<T>& y) {
    assert(x.size() == y.size());
    T s = scalar_traits<T>::zero();
    for (size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

namespace detail {
template <class T>
bool pivot_better(const T& cand, const T& best) {
    // Exact scalars only need a nonzero pivot; pick the largest magnitude for
    // floats. Using the same comparison keeps the code path shared.
    return scalar_traits<T>::abs(best) < scalar_traits<T>::abs(cand);
}
}  // namespace detail

// Gauss-Jordan inverse. Throws on (numerically) singular input.
template <class T>
Mat<T> inverse(Mat<T> m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("inverse: not square");
    size_t n = m.rows();
    Mat<T> inv = Mat<T>::identity(n);
    for (size_t col = 0; col < n; ++col) {
        size_t piv = col;
        for (size_t r = col + 1; r < n; ++r)
            if (detail::pivot_better(m(r, col), m(piv, col))) piv = r;
        if (scalar_traits<T>::is_zero(m(piv, col)))
            throw std::runtime_error("inverse: singular matrix");
        if (piv != col)
            for (size_t j = 0; j < n; ++j) {
                std::swap(m(piv, j), m(col, j));
                std::swap(inv(piv, j), inv(col, j));
            }
        T d = m(col, col);
        for (size_t j = 0; j < n; ++j) {
            m(col, j) /= d;
            inv(col, j) /= d;
        }
        for (size_t r = 0; r < n; ++r) {
            if (r == col || scalar_traits<T>::is_zero(m(r, col))) continue;
            T f = m(r, col);
            for (size_t j = 0; j < n; ++j) {
                m(r, j) -= f * m(col, j);
                inv(r, j) -= f * inv(col, j);
            }
        }
    }
    return inv;
}

// Null space basis (columns), by reduced row echelon form. `tol` separates
// zero pivots for the floating path; exact scalars ignore it.
template <class T>
Mat<T> kernel_basis(Mat<T> m, double tol = 1e-9) {
    size_t rows = m.rows(), cols = m.cols();
    std::vector<size_t> pivot_col;
    size_t r = 0;
    double scale = m.max_abs();
    if (scale == 0) scale = 1;
    for (size_t c = 0; c < cols && r < rows; ++c) {
        size_t piv = r;
        for (size_t i = r + 1; i < rows; ++i)
            if (detail::pivot_better(m(i, c), m(piv, c))) piv = i;
        bool zero = scalar_traits<T>::exact
                        ? scalar_traits<T>::is_zero(m(piv, c))
                        : std::fabs(scalar_traits<T>::to_double(m(piv, c))) <= tol * scale;
        if (zero) continue;
        if (piv != r)
            for (size_t j = 0; j < cols; ++j) std::swap(m(piv, j), m(r, j));
        T d = m(r, c);
        for (size_t j = 0; j < cols; ++j) m(r, j) /= d;
        for (size_t i = 0; i < rows; ++i) {
            if (i == r || scalar_traits<T>::is_zero(m(i, c))) continue;
            T f = m(i, c);
            for (size_t j = 0; j < cols; ++j) m(i, j) -= f * m(r, j);
        }
        pivot_col.push_back(c);
        ++r;
    }
    std::vector<bool> is_pivot(cols, false);
    for (size_t c : pivot_col) is_pivot[c] = true;
    size_t nullity = cols - pivot_col.size();
    Mat<T> basis(cols, nullity);
    size_t k = 0;
    for (size_t c = 0; c < cols; ++c) {
        if (is_pivot[c]) continue;
        basis(c, k) = scalar_traits<T>::one();
        for (size_t i = 0; i < pivot_col.size(); ++i)
            basis(pivot_col[i], k) = -m(i, c);
        ++k;
    }
    return basis;
}

template <class T>
T det(Mat<T> m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("det: not square");
    size_t n = m.rows();
    T d = scalar_traits<T>::one();
    for (size_t col = 0; col < n; ++col) {
        size_t piv = col;
        for (size_t r = col + 1; r < n; ++r)
            if (detail::pivot_better(m(r, col), m(piv, col))) piv = r;
        if (scalar_traits<T>::is_zero(m(piv, col))) return scalar_traits<T>::zero();
        if (piv != col) {
            for (size_t j = 0; j < n; ++j) std::swap(m(piv, j), m(col, j));
            d = -d;
        }
        d *= m(col, col);
        for (size_t r = col + 1; r < n; ++r) {
            if (scalar_traits<T>::is_zero(m(r, col))) continue;
            T f = m(r, col) / m(col, col);
            for (size_t j = col; j < n; ++j) m(r, j) -= f * m(col, j);
        }
    }
    return d;
}

// Cholesky factor of a symmetric positive-definite matrix (doubles only);
// returns false if the matrix is not positive definite.
inline bool cholesky(const Mat<double>& g, Mat<double>& lower) {
    size_t n = g.rows();
    if (g.cols() != n) return false;
    lower = Mat<double>(n, n);
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j <= i; ++j) {
            double s = g(i, j);
            for (size_t k = 0; k < j; ++k) s -= lower(i, k) * lower(j, k);
            if (i == j) {
                if (s <= 0) return false;
                lower(i, i) = std::sqrt(s);
            } else {
                lower(i, j) = s / lower(j, j);
            }
        }
    }
    return true;
}

// Exact positive definiteness: all leading principal minors positive.
inline bool positive_definite(const Mat<Rational>& g) {
    size_t n = g.rows();
    for (size_t k = 1; k <= n; ++k) {
        Mat<Rational> sub(k, k);
        for (size_t i = 0; i < k; ++i)
            for (size_t j = 0; j < k; ++j) sub(i, j) = g(i, j);
        if (!(Rational(0) < det(sub))) return false;
    }
    return true;
}
inline bool positive_definite(const Mat<double>& g) {
    Mat<double> l;
    return cholesky(g, l);
}

// Cyclic Jacobi eigensolver for symmetric matrices. Eigenvalues ascending,
// eigenvectors in columns.
inline void symmetric_eigen(Mat<double> a, std::vector<double>& evals, Mat<double>& evecs) {
    size_t n = a.rows();
    evecs = Mat<double>::identity(n);
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0;
        for (size_t i = 0; i < n; ++i)
            for (size_t j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
        if (off < 1e-30) break;
        for (size_t p = 0; p < n; ++p)
            for (size_t q = p + 1; q < n; ++q) {
                if (std::fabs(a(p, q)) < 1e-300) continue;
                double theta = (a(q, q) - a(p, p)) / (2 * a(p, q));
                double t = (theta >= 0 ? 1.0 : -1.0) /
                           (std::fabs(theta) + std::sqrt(theta * theta + 1));
                double c = 1 / std::sqrt(t * t + 1), s = t * c;
                for (size_t k = 0; k < n; ++k) {
                    double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (size_t k = 0; k < n; ++k) {
                    double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                for (size_t k = 0; k < n; ++k) {
                    double vkp = evecs(k, p), vkq = evecs(k, q);
                    evecs(k, p) = c * vkp - s * vkq;
                    evecs(k, q) = s * vkp + c * vkq;
                }
            }
    }
    evals.resize(n);
    for (size_t i = 0; i < n; ++i) evals[i] = a(i, i);
    // deterministic ascending order
    for (size_t i = 0; i < n; ++i) {
        size_t best = i;
        for (size_t j = i + 1; j < n; ++j)
            if (evals[j] < evals[best]) best = j;
        if (best != i) {
            std::swap(evals[i], evals[best]);
            for (size_t k = 0; k < n; ++k) std::swap(evecs(k, i), evecs(k, best));
        }
    }
}

}  // namespace csm
