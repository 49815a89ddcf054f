#ifndef MATBALL_EIG_HPP
#define MATBALL_EIG_HPP

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "matball/cmatrix.hpp"

namespace matball {

/// Full spectral decomposition of a Hermitian matrix.  Eigenvalues are sorted
/// non-increasing; eigenvector k is the k-th column of `vectors`.
struct HermitianEig {
    std::vector<double> values;
    CMatrix vectors;
};

namespace detail {

inline bool nearly_hermitian(const CMatrix& m) {
    if (m.rows() != m.cols()) return false;
    double defect = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) {
            defect += std::norm(m(i, j) - std::conj(m(j, i)));
            scale += std::norm(m(i, j));
        }
    return std::sqrt(defect) <= 1e-11 * std::max(1.0, std::sqrt(scale));
}

}  // namespace detail

/// Cyclic complex Jacobi diagonalization.  Sizes here are tiny (n <= ~16), so
/// robustness wins over speed: quadratic convergence, unconditionally stable.
inline HermitianEig hermitian_eig(const CMatrix& m_in) {
    m_in.require_finite("hermitian_eig");
    if (m_in.rows() != m_in.cols())
        throw std::invalid_argument("hermitian_eig: matrix not square");
    if (!detail::nearly_hermitian(m_in))
        throw std::invalid_argument("hermitian_eig: matrix not Hermitian");

    const std::size_t n = m_in.rows();
    CMatrix m = m_in;
    // Symmetrize exactly so roundoff in the input cannot bias the iteration.
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const cplx avg = 0.5 * (m(i, j) + std::conj(m(j, i)));
            m(i, j) = avg;
            m(j, i) = std::conj(avg);
        }
        m(i, i) = cplx(m(i, i).real(), 0.0);
    }
    CMatrix v = CMatrix::identity(n);
    const double stop = 1e-15 * std::max(1.0, m.frobenius_norm());

    for (int sweep = 0; sweep < 80; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off = std::max(off, std::abs(m(p, q)));
        if (off <= stop) break;

        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const cplx beta = m(p, q);
                const double ab = std::abs(beta);
                if (ab <= stop) continue;
                const cplx phase = beta / ab;  // e^{i phi}
                const double alpha = m(p, p).real();
                const double gamma = m(q, q).real();
                const double tau = (alpha - gamma) / (2.0 * ab);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                // Plane unitary J: J(p,p)=c, J(p,q)=-s, J(q,p)=s conj(phase),
                // J(q,q)=c conj(phase); phase absorbs arg(m_pq) first.
                const cplx jqp = s * std::conj(phase);
                const cplx jqq = c * std::conj(phase);
                for (std::size_t k = 0; k < n; ++k) {  // M <- J* M
                    const cplx mp = m(p, k), mq = m(q, k);
                    m(p, k) = c * mp + std::conj(jqp) * mq;
                    m(q, k) = -s * mp + std::conj(jqq) * mq;
                }
                for (std::size_t k = 0; k < n; ++k) {  // M <- M J,  V <- V J
                    const cplx mp = m(k, p), mq = m(k, q);
                    m(k, p) = mp * c + mq * jqp;
                    m(k, q) = mp * (-s) + mq * jqq;
                    const cplx vp = v(k, p), vq = v(k, q);
                    v(k, p) = vp * c + vq * jqp;
                    v(k, q) = vp * (-s) + vq * jqq;
                }
                m(p, q) = cplx(0.0, 0.0);
                m(q, p) = cplx(0.0, 0.0);
                m(p, p) = cplx(m(p, p).real(), 0.0);
                m(q, q) = cplx(m(q, q).real(), 0.0);
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return m(a, a).real() > m(b, b).real(); });

    HermitianEig out;
    out.values.resize(n);
    out.vectors = CMatrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        out.values[k] = m(order[k], order[k]).real();
        for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
    }
    return out;
}

/// Largest eigenvalue of a Hermitian matrix, closed form for 2x2.
inline double hermitian_lambda_max(const CMatrix& h) {
    if (h.rows() == 1) return h(0, 0).real();
    if (h.rows() == 2) {
        const double a = h(0, 0).real(), d = h(1, 1).real();
        const double disc = (a - d) * (a - d) + 4.0 * std::norm(h(0, 1));
        return 0.5 * (a + d + std::sqrt(std::max(0.0, disc)));
    }
    return hermitian_eig(h).values.front();
}

inline double hermitian_lambda_min(const CMatrix& h) {
    if (h.rows() == 1) return h(0, 0).real();
    if (h.rows() == 2) {
        const double a = h(0, 0).real(), d = h(1, 1).real();
        const double disc = (a - d) * (a - d) + 4.0 * std::norm(h(0, 1));
        return 0.5 * (a + d - std::sqrt(std::max(0.0, disc)));
    }
    return hermitian_eig(h).values.back();
}

/// Operator norm sigma_max(M).  Closed form through 2x2 Grams, Jacobi above.
inline double op_norm(const CMatrix& m) {
    m.require_finite("op_norm");
    const std::size_t r = m.rows(), c = m.cols();
    if (r == 1 || c == 1) {
        double s = 0.0;
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < c; ++j) s += std::norm(m(i, j));
        return std::sqrt(s);
    }
    if (r == 2 && c == 2) {
        const double f2 = std::norm(m(0, 0)) + std::norm(m(0, 1)) + std::norm(m(1, 0)) + std::norm(m(1, 1));
        const double ad = std::norm(m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0));
        const double disc = std::max(0.0, f2 * f2 - 4.0 * ad);
        return std::sqrt(0.5 * (f2 + std::sqrt(disc)));
    }
    const CMatrix g = (r <= c) ? m * m.adjoint() : m.adjoint() * m;
    return std::sqrt(std::max(0.0, hermitian_lambda_max(g)));
}

/// Closed form for || [[a1 I_m, B],[0, a2 I_n]] ||_op.  The inner square root
/// lives on the Gram spectrum; the outer one converts back to a singular value.
inline double block_upper_norm(cplx alpha1, cplx alpha2, const CMatrix& b) {
    b.require_finite("block_upper_norm");
    const double a1 = std::norm(alpha1), a2 = std::norm(alpha2);
    const double nb = op_norm(b), nb2 = nb * nb;
    const double inner = (a2 + nb2 - a1) * (a2 + nb2 - a1) + 4.0 * nb2 * a1;
    return std::sqrt(0.5 * (a2 + nb2 + a1 + std::sqrt(inner)));
}

/// Assembles the block matrix that block_upper_norm describes; used by tests
/// and by callers that need the operator itself.
inline CMatrix block_upper_matrix(cplx alpha1, cplx alpha2, const CMatrix& b) {
    const std::size_t m = b.rows(), n = b.cols();
    CMatrix t(m + n, m + n);
    for (std::size_t i = 0; i < m; ++i) t(i, i) = alpha1;
    for (std::size_t j = 0; j < n; ++j) t(m + j, m + j) = alpha2;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) t(i, m + j) = b(i, j);
    return t;
}

struct PsdVerdict {
    bool psd;
    double lambda_min;
};

/// PSD test with the slack -1e-10 * max(1, ||M||_op); also reports lambda_min.
inline PsdVerdict schur_psd_check(const CMatrix& m) {
    m.require_finite("schur_psd_check");
    if (!detail::nearly_hermitian(m))
        throw std::invalid_argument("schur_psd_check: matrix not Hermitian");
    const HermitianEig eig = hermitian_eig(m);
    const double lmin = eig.values.back();
    const double lmax_abs = std::max(std::abs(eig.values.front()), std::abs(lmin));
    return PsdVerdict{lmin >= -1e-10 * std::max(1.0, lmax_abs), lmin};
}

/// Hermitian inverse square root, via the spectral decomposition.
inline CMatrix hermitian_inv_sqrt(const CMatrix& m) {
    const HermitianEig eig = hermitian_eig(m);
    const std::size_t n = m.rows();
    if (eig.values.back() <= 0.0)
        throw std::runtime_error("hermitian_inv_sqrt: matrix not positive definite");
    CMatrix out(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            cplx s = 0.0;
            for (std::size_t k = 0; k < n; ++k)
                s += eig.vectors(i, k) * std::conj(eig.vectors(j, k)) / std::sqrt(eig.values[k]);
            out(i, j) = s;
        }
    return out;
}

inline CMatrix hermitian_sqrt(const CMatrix& m) {
    const HermitianEig eig = hermitian_eig(m);
    const std::size_t n = m.rows();
    CMatrix out(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            cplx s = 0.0;
            for (std::size_t k = 0; k < n; ++k)
                s += eig.vectors(i, k) * std::conj(eig.vectors(j, k)) * std::sqrt(std::max(0.0, eig.values[k]));
            out(i, j) = s;
        }
    return out;
}

}  // namespace matball

#endif  // MATBALL_EIG_HPP
