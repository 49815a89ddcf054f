#ifndef MATBALL_CMATRIX_HPP
#define MATBALL_CMATRIX_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <vector>

namespace matball {

using cplx = std::complex<double>;

inline constexpr double kAbsTolFloor = 1e-12;

/// Dense complex matrix, row-major.  The universal numeric carrier of the
/// library; everything here is value-semantic and sized for n <= ~16.
class CMatrix {
public:
    CMatrix() : rows_(0), cols_(0) {}

    CMatrix(std::size_t r, std::size_t c, cplx fill = cplx(0.0, 0.0))
        : rows_(r), cols_(c), a_(r * c, fill) {
        if (r == 0 || c == 0) throw std::invalid_argument("CMatrix: zero dimension");
    }

    CMatrix(std::size_t r, std::size_t c, std::initializer_list<cplx> entries)
        : rows_(r), cols_(c), a_(entries) {
        if (r == 0 || c == 0) throw std::invalid_argument("CMatrix: zero dimension");
        if (a_.size() != r * c) throw std::invalid_argument("CMatrix: entry count mismatch");
    }

    static CMatrix zero(std::size_t r, std::size_t c) { return CMatrix(r, c); }

    static CMatrix identity(std::size_t n) {
        CMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    /// E_{ij} elementary matrix (1-based indices not used; i, j are 0-based).
    static CMatrix unit(std::size_t r, std::size_t c, std::size_t i, std::size_t j) {
        CMatrix m(r, c);
        m(i, j) = 1.0;
        return m;
    }

    static CMatrix diag(std::initializer_list<cplx> d) {
        CMatrix m(d.size(), d.size());
        std::size_t i = 0;
        for (cplx v : d) { m(i, i) = v; ++i; }
        return m;
    }

    static CMatrix row_vector(std::initializer_list<cplx> v) {
        return CMatrix(1, v.size(), v);
    }

    static CMatrix column_vector(std::initializer_list<cplx> v) {
        return CMatrix(v.size(), 1, v);
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return a_.size(); }

    cplx& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    cplx* data() { return a_.data(); }
    const cplx* data() const { return a_.data(); }

    bool is_finite() const {
        for (const cplx& z : a_)
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
        return true;
    }

    void require_finite(const char* who) const {
        if (!is_finite()) throw std::invalid_argument(std::string(who) + ": non-finite entry");
    }

    bool same_shape(const CMatrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }

    CMatrix transpose() const {
        CMatrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    CMatrix conjugate() const {
        CMatrix c = *this;
        for (cplx& z : c.a_) z = std::conj(z);
        return c;
    }

    CMatrix adjoint() const { return transpose().conjugate(); }

    cplx trace() const {
        cplx t = 0.0;
        for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
        return t;
    }

    double frobenius_norm() const {
        double s = 0.0;
        for (const cplx& z : a_) s += std::norm(z);
        return std::sqrt(s);
    }

    double max_abs() const {
        double m = 0.0;
        for (const cplx& z : a_) m = std::max(m, std::abs(z));
        return m;
    }

    CMatrix& operator+=(const CMatrix& o) {
        check_shape(o);
        for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += o.a_[k];
        return *this;
    }

    CMatrix& operator-=(const CMatrix& o) {
        check_shape(o);
        for (std::size_t k = 0; k < a_.size(); ++k) a_[k] -= o.a_[k];
        return *this;
    }

    CMatrix& operator*=(cplx s) {
        for (cplx& z : a_) z *= s;
        return *this;
    }

    friend CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
    friend CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
    friend CMatrix operator*(cplx s, CMatrix a) { return a *= s; }
    friend CMatrix operator*(CMatrix a, cplx s) { return a *= s; }

    friend CMatrix operator*(const CMatrix& a, const CMatrix& b) {
        if (a.cols_ != b.rows_) throw std::invalid_argument("CMatrix: product shape mismatch");
        CMatrix c(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const cplx aik = a(i, k);
                if (aik == cplx(0.0, 0.0)) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
            }
        return c;
    }

    /// Column j as an std::vector.
    std::vector<cplx> column(std::size_t j) const {
        std::vector<cplx> v(rows_);
        for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
        return v;
    }

private:
    void check_shape(const CMatrix& o) const {
        if (!same_shape(o)) throw std::invalid_argument("CMatrix: shape mismatch");
    }

    std::size_t rows_, cols_;
    std::vector<cplx> a_;
};

/// Kronecker product; (i,j) block of the result is a_ij * B.
inline CMatrix kron(const CMatrix& a, const CMatrix& b) {
    CMatrix k(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const cplx s = a(i, j);
            if (s == cplx(0.0, 0.0)) continue;
            for (std::size_t p = 0; p < b.rows(); ++p)
                for (std::size_t q = 0; q < b.cols(); ++q)
                    k(i * b.rows() + p, j * b.cols() + q) = s * b(p, q);
        }
    return k;
}

/// Determinant by Gaussian elimination with partial pivoting.
inline cplx det(CMatrix m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("det: matrix not square");
    const std::size_t n = m.rows();
    cplx d = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(m(i, k)) > std::abs(m(piv, k))) piv = i;
        if (std::abs(m(piv, k)) == 0.0) return 0.0;
        if (piv != k) {
            for (std::size_t j = k; j < n; ++j) std::swap(m(piv, j), m(k, j));
            d = -d;
        }
        d *= m(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            const cplx f = m(i, k) / m(k, k);
            for (std::size_t j = k; j < n; ++j) m(i, j) -= f * m(k, j);
        }
    }
    return d;
}

/// Solve m x = rhs for square m (partial pivoting); throws if singular to
/// working precision relative to the pivot scale.
inline std::vector<cplx> solve(CMatrix m, std::vector<cplx> rhs) {
    const std::size_t n = m.rows();
    if (m.cols() != n || rhs.size() != n) throw std::invalid_argument("solve: shape mismatch");
    const double scale = std::max(m.max_abs(), 1.0);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(m(i, k)) > std::abs(m(piv, k))) piv = i;
        if (std::abs(m(piv, k)) <= 1e-14 * scale) throw std::runtime_error("solve: singular system");
        if (piv != k) {
            for (std::size_t j = k; j < n; ++j) std::swap(m(piv, j), m(k, j));
            std::swap(rhs[piv], rhs[k]);
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            const cplx f = m(i, k) / m(k, k);
            for (std::size_t j = k; j < n; ++j) m(i, j) -= f * m(k, j);
            rhs[i] -= f * rhs[k];
        }
    }
    std::vector<cplx> x(n);
    for (std::size_t i = n; i-- > 0;) {
        cplx s = rhs[i];
        for (std::size_t j = i + 1; j < n; ++j) s -= m(i, j) * x[j];
        x[i] = s / m(i, i);
    }
    return x;
}

inline CMatrix inverse(const CMatrix& m) {
    const std::size_t n = m.rows();
    if (m.cols() != n) throw std::invalid_argument("inverse: matrix not square");
    CMatrix inv(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<cplx> e(n, 0.0);
        e[j] = 1.0;
        std::vector<cplx> x = solve(m, std::move(e));
        for (std::size_t i = 0; i < n; ++i) inv(i, j) = x[i];
    }
    return inv;
}

// Small vector helpers used throughout the numeric modules.

inline double vec_norm2(const std::vector<cplx>& v) {
    double s = 0.0;
    for (const cplx& z : v) s += std::norm(z);
    return std::sqrt(s);
}

/// Hermitian inner product <u, v> = sum u_i conj(v_i).
inline cplx vec_dot(const std::vector<cplx>& u, const std::vector<cplx>& v) {
    cplx s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * std::conj(v[i]);
    return s;
}

inline std::vector<cplx> mat_vec(const CMatrix& m, const std::vector<cplx>& v) {
    if (m.cols() != v.size()) throw std::invalid_argument("mat_vec: shape mismatch");
    std::vector<cplx> w(m.rows(), 0.0);
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) w[i] += m(i, j) * v[j];
    return w;
}

/// Quadratic form <H beta, beta> of a Hermitian H; the result is real up to
/// roundoff, so the real part is returned.
inline double herm_form(const CMatrix& h, const std::vector<cplx>& beta) {
    cplx s = 0.0;
    for (std::size_t i = 0; i < h.rows(); ++i)
        for (std::size_t j = 0; j < h.cols(); ++j) s += h(i, j) * beta[j] * std::conj(beta[i]);
    return s.real();
}

/// Sesquilinear form <M beta, beta> for arbitrary square M (complex valued).
inline cplx sesq_form(const CMatrix& m, const std::vector<cplx>& beta) {
    cplx s = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) s += m(i, j) * beta[j] * std::conj(beta[i]);
    return s;
}

}  // namespace matball

#endif  // MATBALL_CMATRIX_HPP
