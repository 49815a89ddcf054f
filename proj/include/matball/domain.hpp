#ifndef MATBALL_DOMAIN_HPP
#define MATBALL_DOMAIN_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "matball/cmatrix.hpp"
#include "matball/eig.hpp"
#include "matball/optim.hpp"
#include "matball/rng.hpp"

namespace matball {

/// An m-tuple (A_1,...,A_m) of n x n matrices; the open set
/// { z : || z_1 A_1 + ... + z_m A_m ||_op < 1 } is the matrix-ball domain it
/// carves out of C^m.
struct DomainSpec {
    std::size_t m = 0;
    std::size_t n = 0;
    std::vector<CMatrix> mats;

    static DomainSpec make(std::vector<CMatrix> as) {
        DomainSpec d;
        d.m = as.size();
        d.n = as.empty() ? 0 : as.front().rows();
        d.mats = std::move(as);
        d.validate();
        return d;
    }

    DomainSpec transposed() const {
        DomainSpec d = *this;
        for (CMatrix& a : d.mats) a = a.transpose();
        return d;
    }

    /// Shape, finiteness and linear independence of the tuple.  Independence
    /// is a rank test on the m x n^2 stacking with singular-value threshold
    /// 1e-10.
    void validate() const {
        if (m == 0 || mats.size() != m) throw std::invalid_argument("DomainSpec: empty tuple");
        for (const CMatrix& a : mats) {
            if (a.rows() != n || a.cols() != n)
                throw std::invalid_argument("DomainSpec: matrices must all be n x n");
            a.require_finite("DomainSpec");
        }
        if (m > n * n) throw std::invalid_argument("DomainSpec: more matrices than dimensions");
        // Gram matrix of the vectorized tuple; sigma_min^2 = lambda_min.
        CMatrix gram(m, m);
        double scale2 = 0.0;
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j) {
                cplx s = 0.0;
                for (std::size_t k = 0; k < n * n; ++k)
                    s += mats[i].data()[k] * std::conj(mats[j].data()[k]);
                gram(i, j) = s;
                if (i == j) scale2 = std::max(scale2, s.real());
            }
        const double lmin = hermitian_eig(gram).values.back();
        const double thr = 1e-10 * std::max(1.0, std::sqrt(scale2));
        if (lmin < thr * thr)
            throw std::invalid_argument("DomainSpec: matrices are linearly dependent");
    }
};

inline CMatrix defining_polynomial(const DomainSpec& d, const std::vector<cplx>& z) {
    if (z.size() != d.m) throw std::invalid_argument("defining_polynomial: dimension mismatch");
    CMatrix p(d.n, d.n);
    for (std::size_t i = 0; i < d.m; ++i) p += z[i] * d.mats[i];
    return p;
}

inline double domain_norm(const DomainSpec& d, const std::vector<cplx>& z) {
    return op_norm(defining_polynomial(d, z));
}

// ---------------------------------------------------------------------------
// Dual norm
// ---------------------------------------------------------------------------

enum class DualNormMethod { closed_x, numeric };

struct DualNormOptions {
    std::size_t samples = 20000;
    std::size_t refine_starts = 10;
    int refine_iters = 300;
};

/// True when the tuple is exactly (I_2, E_12), the one domain with a closed
/// dual norm in this library.
inline bool is_I_E12_pair(const DomainSpec& d, double tol = 1e-10) {
    if (d.m != 2 || d.n != 2) return false;
    const CMatrix i2 = CMatrix::identity(2);
    const CMatrix e12 = CMatrix::unit(2, 2, 0, 1);
    return (d.mats[0] - i2).max_abs() <= tol && (d.mats[1] - e12).max_abs() <= tol;
}

/// Piecewise dual norm of the (I_2, E_12) domain.
inline double dual_norm_closed_x(cplx alpha, cplx beta) {
    const double a = std::abs(alpha), b = std::abs(beta);
    if (b >= 0.5 * a && b > 0.0) return (a * a + 4.0 * b * b) / (4.0 * b);
    return a;
}

/// sup { |sum w_i z_i| : ||z||_A <= 1 } by quasi-random boundary sampling
/// followed by Nelder-Mead refinement of the best starts.  The objective is
/// evaluated on z/||z||_A, so the parametrization is scale-free.
inline double dual_norm_numeric(const DomainSpec& d, const std::vector<cplx>& w,
                                const DualNormOptions& opt = {}) {
    if (w.size() != d.m) throw std::invalid_argument("dual_norm: dimension mismatch");
    const std::size_t m = d.m;

    auto pairing = [&](const std::vector<double>& x) -> double {
        std::vector<cplx> z(m);
        for (std::size_t i = 0; i < m; ++i) z[i] = cplx(x[2 * i], x[2 * i + 1]);
        double raw = 0.0;
        for (const cplx& zi : z) raw += std::norm(zi);
        if (raw < 1e-20) return 0.0;
        const double dn = domain_norm(d, z);
        if (dn < 1e-14) return 0.0;
        cplx f = 0.0;
        for (std::size_t i = 0; i < m; ++i) f += w[i] * z[i];
        return std::abs(f) / dn;
    };

    QuasiRandom seq(2 * m);
    std::vector<std::pair<double, std::vector<double>>> best;
    for (std::size_t k = 0; k < opt.samples; ++k) {
        const std::vector<double>& u = seq.next();
        std::vector<double> x(2 * m);
        for (std::size_t i = 0; i < 2 * m; ++i) x[i] = 2.0 * u[i] - 1.0;
        const double v = pairing(x);
        best.emplace_back(v, x);
        std::push_heap(best.begin(), best.end(),
                       [](const auto& a, const auto& b) { return a.first > b.first; });
        if (best.size() > opt.refine_starts) {
            std::pop_heap(best.begin(), best.end(),
                          [](const auto& a, const auto& b) { return a.first > b.first; });
            best.pop_back();
        }
    }

    double out = 0.0;
    for (const auto& [v0, x0] : best) {
        out = std::max(out, v0);
        const NelderMeadResult r = nelder_mead([&](const std::vector<double>& x) { return -pairing(x); },
                                               x0, 0.15, 1e-14, opt.refine_iters);
        out = std::max(out, -r.value);
    }
    return out;
}

inline double dual_norm(const DomainSpec& d, const std::vector<cplx>& w, DualNormMethod method,
                        const DualNormOptions& opt = {}) {
    if (w.size() != d.m) throw std::invalid_argument("dual_norm: dimension mismatch");
    if (method == DualNormMethod::closed_x) {
        if (!is_I_E12_pair(d))
            throw std::domain_error("dual_norm: closed_x only supports the (I2, E12) pair");
        return dual_norm_closed_x(w[0], w[1]);
    }
    return dual_norm_numeric(d, w, opt);
}

// ---------------------------------------------------------------------------
// Linear equivalence
// ---------------------------------------------------------------------------

/// Looks for an invertible R with  tilde(A)_i = sum_j R_ij A_j, i.e. the
/// linear change of variables carrying one domain onto the other.  Solved by
/// least squares on the stacked n^2 coordinates; absent when some tilde(A)_i
/// leaves the span or the induced R is singular.
inline std::optional<CMatrix> linear_equivalent(const DomainSpec& d1, const DomainSpec& d2) {
    if (d1.m != d2.m || d1.n != d2.n) throw std::invalid_argument("linear_equivalent: shape mismatch");
    const std::size_t m = d1.m, nn = d1.n * d1.n;

    CMatrix gram(m, m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            cplx s = 0.0;
            for (std::size_t k = 0; k < nn; ++k)
                s += std::conj(d1.mats[i].data()[k]) * d1.mats[j].data()[k];
            gram(i, j) = s;
        }

    CMatrix r(m, m);
    for (std::size_t i = 0; i < m; ++i) {
        std::vector<cplx> rhs(m, 0.0);
        for (std::size_t j = 0; j < m; ++j)
            for (std::size_t k = 0; k < nn; ++k)
                rhs[j] += std::conj(d1.mats[j].data()[k]) * d2.mats[i].data()[k];
        const std::vector<cplx> coef = solve(gram, std::move(rhs));

        CMatrix resid = d2.mats[i];
        for (std::size_t j = 0; j < m; ++j) resid -= coef[j] * d1.mats[j];
        if (resid.frobenius_norm() > 1e-8 * std::max(1.0, d2.mats[i].frobenius_norm()))
            return std::nullopt;
        for (std::size_t j = 0; j < m; ++j) r(i, j) = coef[j];
    }

    const double dr = std::abs(det(r));
    const double scale = std::max(1.0, r.max_abs());
    if (dr < 1e-10 * std::pow(scale, static_cast<double>(m))) return std::nullopt;
    return r;
}

// ---------------------------------------------------------------------------
// Canonical form for 2x2 pairs
// ---------------------------------------------------------------------------

enum class A1Kind { diag_1_d2, diag_d1_1 };
enum class A2Kind { antidiag, upper_unit, lower_unit };

/// Canonical representative of a pair (A_1, A_2) of 2x2 matrices under
///   A_i -> U A_i V        (unitaries, same domain)
///   A_i -> sum_j R_ij A_j (invertible change of variables, equivalent domain)
/// A_1 lands on diag(1, d2) with d2 in [0,1]; A_2 on one of the three shapes
/// below with one of b, c real >= 0.
struct CanonicalForm2D {
    A1Kind a1_kind = A1Kind::diag_1_d2;
    A2Kind a2_kind = A2Kind::antidiag;
    cplx d = 0.0;  // the free diagonal parameter of A_1
    cplx b = 0.0;
    cplx c = 0.0;
    CMatrix transform;  // R, 2x2 invertible
    CMatrix u, v;       // unitaries applied as A_i -> U A_i V
    bool degenerate_span = false;  // no invertible member in span{A_1, A_2}

    std::array<CMatrix, 2> canonical_mats() const {
        CMatrix a1 = (a1_kind == A1Kind::diag_1_d2) ? CMatrix::diag({1.0, d}) : CMatrix::diag({d, 1.0});
        CMatrix a2(2, 2);
        switch (a2_kind) {
            case A2Kind::antidiag:
                a2(0, 1) = b;
                a2(1, 0) = c;
                break;
            case A2Kind::upper_unit:
                a2(0, 0) = 1.0;
                a2(0, 1) = b;
                a2(1, 0) = c;
                break;
            case A2Kind::lower_unit:
                a2(0, 1) = b;
                a2(1, 0) = c;
                a2(1, 1) = 1.0;
                break;
        }
        return {a1, a2};
    }

    /// Pulls the canonical pair back through R^{-1}, U*, V*; spans the same
    /// two-dimensional subspace of M_2 as the input pair.
    std::array<CMatrix, 2> reconstruct() const {
        const std::array<CMatrix, 2> cm = canonical_mats();
        const CMatrix rinv = inverse(transform);
        std::array<CMatrix, 2> out = {CMatrix(2, 2), CMatrix(2, 2)};
        const CMatrix us = u.adjoint(), vs = v.adjoint();
        for (std::size_t i = 0; i < 2; ++i) {
            CMatrix mix(2, 2);
            for (std::size_t j = 0; j < 2; ++j) mix += rinv(i, j) * cm[j];
            out[i] = us * mix * vs;
        }
        return out;
    }
};

/// Distance between the spans of two tuples of equally sized matrices, as the
/// operator-norm gap of the orthogonal projectors in the vectorized space.
inline double span_distance(const std::vector<CMatrix>& a, const std::vector<CMatrix>& b) {
    const std::size_t nn = a.front().rows() * a.front().cols();
    auto projector = [nn](const std::vector<CMatrix>& fam) {
        std::vector<std::vector<cplx>> basis;
        for (const CMatrix& f : fam) {
            std::vector<cplx> v(f.data(), f.data() + nn);
            for (const auto& q : basis) {
                const cplx proj = vec_dot(v, q);
                for (std::size_t k = 0; k < nn; ++k) v[k] -= proj * q[k];
            }
            const double norm = vec_norm2(v);
            if (norm > 1e-12) {
                for (cplx& z : v) z /= norm;
                basis.push_back(std::move(v));
            }
        }
        CMatrix p(nn, nn);
        for (const auto& q : basis)
            for (std::size_t i = 0; i < nn; ++i)
                for (std::size_t j = 0; j < nn; ++j) p(i, j) += q[i] * std::conj(q[j]);
        return p;
    };
    return op_norm(projector(a) - projector(b));
}

namespace detail {

/// 2x2 SVD through the Gram matrix; returns unitaries with  U A V = diag(s).
struct Svd2 {
    CMatrix u, v;
    double s1 = 0.0, s2 = 0.0;
};

inline Svd2 svd_2x2(const CMatrix& a) {
    const HermitianEig eig = hermitian_eig(a.adjoint() * a);
    Svd2 out;
    out.s1 = std::sqrt(std::max(0.0, eig.values[0]));
    out.s2 = std::sqrt(std::max(0.0, eig.values[1]));
    const CMatrix& v = eig.vectors;

    CMatrix u(2, 2);
    std::vector<cplx> u0 = mat_vec(a, v.column(0));
    if (out.s1 > 1e-14) {
        u(0, 0) = u0[0] / out.s1;
        u(1, 0) = u0[1] / out.s1;
    } else {
        u(0, 0) = 1.0;  // a ~ 0; any unitary works
    }
    if (out.s2 > 1e-14 * std::max(1.0, out.s1)) {
        std::vector<cplx> u1 = mat_vec(a, v.column(1));
        u(0, 1) = u1[0] / out.s2;
        u(1, 1) = u1[1] / out.s2;
    } else {
        u(0, 1) = -std::conj(u(1, 0));  // orthogonal completion
        u(1, 1) = std::conj(u(0, 0));
    }
    out.u = u.adjoint();
    out.v = v;
    return out;
}

}  // namespace detail

/// True when no member of span{A_1, A_2} is invertible, i.e. the quadratic
/// det(z_1 A_1 + z_2 A_2) vanishes identically.
inline bool degenerate_span_2d(const CMatrix& a1, const CMatrix& a2) {
    const cplx c20 = det(a1);
    const cplx c02 = det(a2);
    const cplx c11 = a1.trace() * a2.trace() - (a1 * a2).trace();
    const double s = std::max({a1.frobenius_norm(), a2.frobenius_norm(), 1.0});
    const double tol = 1e-12 * s * s;
    return std::abs(c20) <= tol && std::abs(c02) <= tol && std::abs(c11) <= tol;
}

inline CanonicalForm2D canonicalize_2d(const DomainSpec& dom) {
    if (dom.m != 2 || dom.n != 2) throw std::invalid_argument("canonicalize_2d: need m=2, n=2");
    dom.validate();

    CanonicalForm2D out;
    out.degenerate_span = degenerate_span_2d(dom.mats[0], dom.mats[1]);

    // Unitaries from the SVD of A_1; the larger singular value is scaled to 1,
    // so a1_kind is always diag_1_d2 and d in [0,1].
    const detail::Svd2 svd = detail::svd_2x2(dom.mats[0]);
    const double s1 = svd.s1, s2 = svd.s2;
    CMatrix a2p = svd.u * dom.mats[1] * svd.v;
    const cplx a = a2p(0, 0), b0 = a2p(0, 1), c0 = a2p(1, 0), dd = a2p(1, 1);

    out.a1_kind = A1Kind::diag_1_d2;
    out.d = s2 / s1;

    CMatrix r(2, 2);
    r(0, 0) = 1.0 / s1;

    const double scale = std::max(1.0, a2p.max_abs());
    if (s2 > 1e-12 * s1) {
        // Kill the (2,2) entry of r A_1 + s A_2.
        const cplx det2 = s1 * dd - s2 * a;
        if (std::abs(det2) <= 1e-12 * s1 * scale) {
            out.a2_kind = A2Kind::antidiag;
            const double s = 1.0 / std::max(std::abs(b0), std::abs(c0));
            r(1, 0) = -s * dd / s2;
            r(1, 1) = s;
            out.b = s * b0;
            out.c = s * c0;
        } else {
            out.a2_kind = A2Kind::upper_unit;
            const cplx s = -s2 / det2;
            r(1, 0) = -s * dd / s2;
            r(1, 1) = s;
            out.b = s * b0;
            out.c = s * c0;
        }
    } else {
        // A_1 = diag(1, 0) after scaling; kill the (1,1) entry instead.
        if (std::abs(dd) > 1e-12 * scale) {
            out.a2_kind = A2Kind::lower_unit;
            const cplx s = 1.0 / dd;
            r(1, 0) = -s * a / s1;
            r(1, 1) = s;
            out.b = s * b0;
            out.c = s * c0;
        } else {
            out.a2_kind = A2Kind::antidiag;
            const double s = 1.0 / std::max(std::abs(b0), std::abs(c0));
            r(1, 0) = -s * a / s1;
            r(1, 1) = s;
            out.b = s * b0;
            out.c = s * c0;
        }
    }

    // Phase normalization: conjugate by diag(e^{i th}, e^{i ph}), which fixes
    // both diagonal shapes and rotates b, c by opposite phases.  Make c real
    // >= 0 when c != 0, else b.
    double rot = 0.0;  // ph - th
    if (std::abs(out.c) > 1e-12) {
        rot = -std::arg(out.c);
    } else if (std::abs(out.b) > 1e-12) {
        rot = std::arg(out.b);
    }
    const cplx eb = std::polar(1.0, -rot);  // multiplies b
    const cplx ec = std::polar(1.0, rot);   // multiplies c
    out.b *= eb;
    out.c *= ec;
    if (std::abs(out.c) > 1e-12) {
        out.c = cplx(std::abs(out.c), 0.0);
    } else if (std::abs(out.b) > 1e-12) {
        out.b = cplx(std::abs(out.b), 0.0);
    }
    CMatrix w(2, 2);
    w(0, 0) = 1.0;
    w(1, 1) = std::polar(1.0, rot);

    out.transform = r;
    out.u = w * svd.u;
    out.v = svd.v * w.adjoint();
    return out;
}

}  // namespace matball

#endif  // MATBALL_DOMAIN_HPP
