#ifndef MATBALL_BERGMAN_HPP
#define MATBALL_BERGMAN_HPP

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "matball/cmatrix.hpp"
#include "matball/contractivity.hpp"
#include "matball/eig.hpp"

namespace matball {

enum class KernelKind { matrix_ball, nil2, reinhardt3 };

/// A weighted Bergman-type kernel B_Omega(z,w)^lambda on one of the three
/// built-in domains:
///   matrix_ball(r,s) : { Z in M_{r,s} : ||Z||_op < 1 }
///   nil2             : { (z1,z2) : |z2| < 1 - |z1|^2 } in C^2
///   reinhardt3       : { z : |z2|^2 < (1-|z1|^2)(1-|z3|^2) } in C^3
struct KernelSpec {
    KernelKind kind = KernelKind::matrix_ball;
    std::size_t r = 1, s = 1;
    double lambda = 1.0;

    static KernelSpec matrix_ball_spec(std::size_t r, std::size_t s, double lambda) {
        if (r == 0 || s == 0) throw std::invalid_argument("KernelSpec: r, s >= 1");
        if (lambda <= 0.0) throw std::invalid_argument("KernelSpec: lambda > 0 required");
        return KernelSpec{KernelKind::matrix_ball, r, s, lambda};
    }
    static KernelSpec nil2_spec(double lambda) {
        if (lambda <= 0.0) throw std::invalid_argument("KernelSpec: lambda > 0 required");
        return KernelSpec{KernelKind::nil2, 0, 0, lambda};
    }
    static KernelSpec reinhardt3_spec(double lambda) {
        if (lambda <= 0.0) throw std::invalid_argument("KernelSpec: lambda > 0 required");
        return KernelSpec{KernelKind::reinhardt3, 0, 0, lambda};
    }

    std::size_t dim() const {
        switch (kind) {
            case KernelKind::matrix_ball: return r * s;
            case KernelKind::nil2: return 2;
            case KernelKind::reinhardt3: return 3;
        }
        return 0;
    }
};

namespace detail {

inline CMatrix point_to_matrix(const KernelSpec& spec, const std::vector<cplx>& z) {
    CMatrix m(spec.r, spec.s);
    for (std::size_t i = 0; i < spec.r; ++i)
        for (std::size_t j = 0; j < spec.s; ++j) m(i, j) = z[i * spec.s + j];
    return m;
}

inline void check_point(const KernelSpec& spec, const std::vector<cplx>& z, const char* who) {
    if (z.size() != spec.dim()) throw std::invalid_argument(std::string(who) + ": point dimension mismatch");
    switch (spec.kind) {
        case KernelKind::matrix_ball: {
            if (op_norm(point_to_matrix(spec, z)) >= 1.0)
                throw std::invalid_argument(std::string(who) + ": point outside the matrix ball");
            break;
        }
        case KernelKind::nil2: {
            if (std::abs(z[1]) >= (1.0 - std::norm(z[0])))
                throw std::invalid_argument(std::string(who) + ": point outside the nil2 domain");
            break;
        }
        case KernelKind::reinhardt3: {
            // Series evaluation window: |z1|, |z3| <= 0.8 and domain
            // inequality with margin 0.05.
            if (std::abs(z[0]) > 0.8 || std::abs(z[2]) > 0.8)
                throw std::invalid_argument(std::string(who) + ": reinhardt3 point outside evaluation window");
            if (std::norm(z[1]) > 0.95 * (1.0 - std::norm(z[0])) * (1.0 - std::norm(z[2])))
                throw std::invalid_argument(std::string(who) + ": point outside the reinhardt3 domain");
            break;
        }
    }
}

/// Log of the unweighted kernel B_Omega(z, w), polarized; principal branch.
inline cplx log_kernel_base(const KernelSpec& spec, const std::vector<cplx>& z,
                            const std::vector<cplx>& w) {
    switch (spec.kind) {
        case KernelKind::matrix_ball: {
            const CMatrix zm = point_to_matrix(spec, z);
            const CMatrix wm = point_to_matrix(spec, w);
            const cplx d = det(CMatrix::identity(spec.r) - zm * wm.adjoint());
            const double p = static_cast<double>(spec.r + spec.s);
            return -p * std::log(d);
        }
        case KernelKind::nil2: {
            const cplx f = 1.0 - z[0] * std::conj(w[0]);
            const cplx y = z[1] * std::conj(w[1]);
            const cplx num = 3.0 * f * f + y;
            const cplx den = f * f - y;
            return std::log(num) - 3.0 * std::log(den);
        }
        case KernelKind::reinhardt3: {
            // Triple monomial series with the n and p sums carried out in
            // closed form (negative binomial identity), leaving
            //   B = (1-x)^{-3} (1-t)^{-3} sum_m (m+1)(m+2)^2/4 q^m,
            // q = y / ((1-x)(1-t)).  Truncated at m = 60 with a geometric
            // tail bound.
            const cplx x = z[0] * std::conj(w[0]);
            const cplx y = z[1] * std::conj(w[1]);
            const cplx t = z[2] * std::conj(w[2]);
            const cplx q = y / ((1.0 - x) * (1.0 - t));
            constexpr int kMaxIndex = 60;
            cplx sum = 0.0;
            for (int m = kMaxIndex; m >= 0; --m) {
                const double coeff = (m + 1.0) * (m + 2.0) * (m + 2.0) / 4.0;
                sum = sum * q + coeff;
            }
            const double aq = std::abs(q);
            const double ratio = aq * (kMaxIndex + 3.0) * (kMaxIndex + 3.0) /
                                 ((kMaxIndex + 1.0) * (kMaxIndex + 2.0));
            const double head = (kMaxIndex + 2.0) * (kMaxIndex + 3.0) * (kMaxIndex + 3.0) / 4.0 *
                                std::pow(aq, kMaxIndex + 1);
            if (ratio >= 1.0 || head / (1.0 - ratio) > 1e-10 * std::abs(sum))
                throw std::runtime_error("kernel_eval: reinhardt3 series tail bound " +
                                         std::to_string(ratio >= 1.0 ? head : head / (1.0 - ratio)) +
                                         " too large at truncation index 60");
            return std::log(sum) - 3.0 * std::log(1.0 - x) - 3.0 * std::log(1.0 - t);
        }
    }
    throw std::logic_error("log_kernel_base: unreachable");
}

}  // namespace detail

/// B_Omega(z, w)^lambda, the polarized weighted kernel.
inline cplx kernel_eval(const KernelSpec& spec, const std::vector<cplx>& z,
                        const std::vector<cplx>& w) {
    detail::check_point(spec, z, "kernel_eval");
    detail::check_point(spec, w, "kernel_eval");
    return std::exp(spec.lambda * detail::log_kernel_base(spec, z, w));
}

/// Derivative of the Mobius automorphism of the r x s matrix ball at its own
/// base point: u -> (I-WW*)^{-1/2} u (I-W*W)^{-1/2}, returned as the rs x rs
/// matrix acting on row-major vec(u).
inline CMatrix mobius_derivative(const KernelSpec& spec, const std::vector<cplx>& w) {
    if (spec.kind != KernelKind::matrix_ball)
        throw std::invalid_argument("mobius_derivative: matrix_ball kernels only");
    const CMatrix wm = detail::point_to_matrix(spec, w);
    if (op_norm(wm) >= 1.0) throw std::invalid_argument("mobius_derivative: ||W|| >= 1");
    const CMatrix p = hermitian_inv_sqrt(CMatrix::identity(spec.r) - wm * wm.adjoint());
    const CMatrix q = hermitian_inv_sqrt(CMatrix::identity(spec.s) - wm.adjoint() * wm);
    return kron(p, q.transpose());
}

/// Curvature coefficient matrix K(w) (Hessian of log B^lambda, stored
/// positive definite) together with the localization matrix A(w) solving
/// A^t conj(A) = (K^t)^{-1}.
struct CurvatureResult {
    CMatrix k;
    CMatrix a0;
    std::vector<cplx> w;
};

/// Finite-difference curvature: central 4-point stencils on the polarized
/// log-kernel with one Richardson level, step h = 1e-3.
inline CMatrix curvature_fd(const KernelSpec& spec, const std::vector<cplx>& w, double h = 1e-3) {
    detail::check_point(spec, w, "curvature");
    const std::size_t m = spec.dim();
    auto logk = [&](const std::vector<cplx>& z, const std::vector<cplx>& ww) {
        return spec.lambda * detail::log_kernel_base(spec, z, ww);
    };
    auto stencil = [&](std::size_t i, std::size_t j, double step) {
        std::vector<cplx> zp = w, zm = w, wp = w, wm = w;
        zp[i] += step;
        zm[i] -= step;
        wp[j] += step;
        wm[j] -= step;
        const cplx val = logk(zp, wp) - logk(zp, wm) - logk(zm, wp) + logk(zm, wm);
        return val / (4.0 * step * step);
    };
    CMatrix k(m, m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            const cplx d1 = stencil(i, j, h);
            const cplx d2 = stencil(i, j, 0.5 * h);
            k(i, j) = (4.0 * d2 - d1) / 3.0;
        }
    // Hermitian by construction of the mixed derivative; symmetrize roundoff.
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i; j < m; ++j) {
            const cplx avg = 0.5 * (k(i, j) + std::conj(k(j, i)));
            k(i, j) = avg;
            k(j, i) = std::conj(avg);
        }
    return k;
}

/// Closed-form curvature where available (matrix ball anywhere through the
/// homogeneity transformation rule, nil2 anywhere, reinhardt3 at 0);
/// finite differences otherwise.
inline CMatrix curvature_matrix(const KernelSpec& spec, const std::vector<cplx>& w) {
    detail::check_point(spec, w, "curvature");
    const double lam = spec.lambda;
    switch (spec.kind) {
        case KernelKind::matrix_ball: {
            const CMatrix wm = detail::point_to_matrix(spec, w);
            const double p = static_cast<double>(spec.r + spec.s);
            const CMatrix left = inverse(CMatrix::identity(spec.r) - wm * wm.adjoint());
            const CMatrix right = inverse(CMatrix::identity(spec.s) - wm.adjoint() * wm);
            CMatrix k = kron(left.transpose(), right);
            k *= lam * p;
            return k;
        }
        case KernelKind::nil2: {
            const double r1 = std::norm(w[0]);
            const double c = (1.0 - r1) * (1.0 - r1) - std::norm(w[1]);
            const double d = 3.0 * (1.0 - r1) * (1.0 - r1) + std::norm(w[1]);
            const double sq = 1.0 / (c * c) + 1.0 / (d * d);
            CMatrix k(2, 2);
            k(0, 0) = 6.0 * (1.0 / c - 1.0 / d) + 12.0 * std::norm(w[0]) * std::norm(w[1]) * sq;
            k(0, 1) = 6.0 * std::conj(w[0]) * w[1] * (1.0 - r1) * sq;
            k(1, 0) = std::conj(k(0, 1));
            k(1, 1) = 3.0 * (1.0 - r1) * (1.0 - r1) * sq;
            k *= lam;
            return k;
        }
        case KernelKind::reinhardt3: {
            double at0 = 0.0;
            for (const cplx& zi : w) at0 += std::norm(zi);
            if (at0 < 1e-28) {
                CMatrix k(3, 3);
                k(0, 0) = 3.0 * lam;
                k(1, 1) = 4.5 * lam;
                k(2, 2) = 3.0 * lam;
                return k;
            }
            return curvature_fd(spec, w);
        }
    }
    throw std::logic_error("curvature_matrix: unreachable");
}

inline CurvatureResult curvature(const KernelSpec& spec, const std::vector<cplx>& w) {
    CurvatureResult out;
    out.w = w;
    out.k = curvature_matrix(spec, w);
    const double lmin = hermitian_eig(out.k).values.back();
    if (lmin <= 1e-12 * std::max(1.0, op_norm(out.k)))
        throw std::runtime_error("curvature: metric degenerate (K not positive definite)");
    // A = K^{-1/2} (Hermitian); then A^t conj(A) = conj(K^{-1}) = (K^t)^{-1}.
    out.a0 = hermitian_inv_sqrt(out.k);
    return out;
}

/// The (m+1) x (m+1) jet Gram matrix ((d_j dbar_i K^lambda))_{i,j=0..m} at
/// (w, w); positive definite for every lambda > 0.  A failure beyond the PSD
/// tolerance throws rather than returning a broken Gram silently.
inline CMatrix jet_gram(const KernelSpec& spec, const std::vector<cplx>& w, double h = 1e-3) {
    detail::check_point(spec, w, "jet_gram");
    const std::size_t m = spec.dim();
    auto kv = [&](const std::vector<cplx>& z, const std::vector<cplx>& ww) {
        return std::exp(spec.lambda * detail::log_kernel_base(spec, z, ww));
    };
    auto entry_h = [&](std::size_t i, std::size_t j, double step) -> cplx {
        // Row index i differentiates the anti-holomorphic slot, column j the
        // holomorphic one; index 0 means no derivative.
        if (i == 0 && j == 0) return kv(w, w);
        if (i == 0) {
            std::vector<cplx> zp = w, zm = w;
            zp[j - 1] += step;
            zm[j - 1] -= step;
            return (kv(zp, w) - kv(zm, w)) / (2.0 * step);
        }
        if (j == 0) {
            std::vector<cplx> wp = w, wm = w;
            wp[i - 1] += step;
            wm[i - 1] -= step;
            return (kv(w, wp) - kv(w, wm)) / (2.0 * step);
        }
        std::vector<cplx> zp = w, zm = w, wp = w, wm = w;
        zp[j - 1] += step;
        zm[j - 1] -= step;
        wp[i - 1] += step;
        wm[i - 1] -= step;
        return (kv(zp, wp) - kv(zp, wm) - kv(zm, wp) + kv(zm, wm)) / (4.0 * step * step);
    };
    CMatrix g(m + 1, m + 1);
    for (std::size_t i = 0; i <= m; ++i)
        for (std::size_t j = 0; j <= m; ++j) {
            const cplx d1 = entry_h(i, j, h);
            const cplx d2 = entry_h(i, j, 0.5 * h);
            g(i, j) = (4.0 * d2 - d1) / 3.0;
        }
    for (std::size_t i = 0; i <= m; ++i)
        for (std::size_t j = i; j <= m; ++j) {
            const cplx avg = 0.5 * (g(i, j) + std::conj(g(j, i)));
            g(i, j) = avg;
            g(j, i) = std::conj(avg);
        }
    const PsdVerdict verdict = schur_psd_check(g);
    if (!verdict.psd)
        throw std::runtime_error("jet_gram: positivity violated (lambda_min = " +
                                 std::to_string(verdict.lambda_min) + ")");
    return g;
}

// ---------------------------------------------------------------------------
// Localization thresholds
// ---------------------------------------------------------------------------

struct ThresholdRow {
    std::string test;                 // "contractive" or "complete_PA"
    bool holds_at_lambda = false;
    double computed_critical = 0.0;   // from the closed-form criterion
    double paper_stated = 0.0;
    bool agree = false;
};

struct ThresholdReport {
    KernelKind kind = KernelKind::matrix_ball;
    std::size_t r = 0, s = 0;
    double lambda = 0.0;
    double nu = 0.0;                  // lambda * (r+s), matrix ball only
    std::vector<double> a_squared;    // diagonal entries of A(0)^t conj(A(0))
    std::vector<ThresholdRow> rows;
};

/// Contractivity / complete-contractivity thresholds of the localization
/// homomorphism at 0.  The A(0) entries come from the closed-form curvature;
/// the criteria are the closed forms of the respective domains, with critical
/// lambdas worked out in exact rational arithmetic.
inline ThresholdReport threshold_check(const KernelSpec& spec) {
    ThresholdReport rep;
    rep.kind = spec.kind;
    rep.r = spec.r;
    rep.s = spec.s;
    rep.lambda = spec.lambda;
    const double lam = spec.lambda;

    const std::vector<cplx> origin(spec.dim(), cplx(0.0, 0.0));
    const CMatrix k0 = curvature_matrix(spec, origin);
    for (std::size_t i = 0; i < spec.dim(); ++i) rep.a_squared.push_back(1.0 / k0(i, i).real());

    switch (spec.kind) {
        case KernelKind::matrix_ball: {
            const double p = static_cast<double>(spec.r + spec.s);
            rep.nu = lam * p;
            ThresholdRow con{"contractive", rep.nu >= 1.0, 1.0 / p, 1.0 / p, true};
            ThresholdRow com{"complete_PA", rep.nu >= static_cast<double>(spec.s),
                             static_cast<double>(spec.s) / p, static_cast<double>(spec.s) / p, true};
            rep.rows = {con, com};
            break;
        }
        case KernelKind::nil2: {
            // a11^2 = alpha/lambda, a22^2 = beta/lambda with alpha = 1/4,
            // beta = 3/10; criterion (2 a11^2 - 1)^2 <= 1 - a22^2 crosses at
            // lambda = 4 alpha^2 / (4 alpha - beta) = 5/14; the complete test
            // a11^2 + a22^2 <= 1 crosses at alpha + beta = 11/20.
            const double alpha = 0.25, beta = 0.3;
            const double a11 = std::sqrt(rep.a_squared[0]);
            const double a22 = std::sqrt(rep.a_squared[1]);
            const ClosedContractiveIE12 con_check =
                contractive_closed_I_E12({a11, 0.0}, {0.0, a22});
            const ClosedCompleteIE12 com_check = complete_closed_I_E12({a11, 0.0}, {0.0, a22});
            const double con_crit = 4.0 * alpha * alpha / (4.0 * alpha - beta);
            const double com_crit = alpha + beta;
            ThresholdRow con{"contractive", con_check.criterion_holds, con_crit, 5.0 / 16.0, false};
            con.agree = std::abs(con.computed_critical - con.paper_stated) <= 1e-12;
            ThresholdRow com{"complete_PA", com_check.completely_contractive, com_crit, 11.0 / 20.0,
                             true};
            com.agree = std::abs(com.computed_critical - com.paper_stated) <= 1e-12;
            rep.rows = {con, com};
            break;
        }
        case KernelKind::reinhardt3: {
            // a11^2 = a33^2 = alpha/lambda, a22^2 = beta/lambda with
            // alpha = 1/3, beta = 2/9; criterion a11^2 (1 - a33^2) >=
            // a22^2 - a33^2 crosses at alpha^2/(2 alpha - beta) = 1/4; the
            // complete test max(a11^2 + a22^2, a33^2) <= 1 at alpha+beta = 5/9.
            const double alpha = 1.0 / 3.0, beta = 2.0 / 9.0;
            const double a11 = std::sqrt(rep.a_squared[0]);
            const double a22 = std::sqrt(rep.a_squared[1]);
            const double a33 = std::sqrt(rep.a_squared[2]);
            const ClosedContractiveDiag3 con_check = contractive_closed_diag3(a11, a22, a33);
            const ClosedCompleteDiag3 com_check = complete_closed_diag3(a11, a22, a33);
            const double con_crit = alpha * alpha / (2.0 * alpha - beta);
            const double com_crit = alpha + beta;
            ThresholdRow con{"contractive", con_check.criterion_holds, con_crit, 0.25, false};
            con.agree = std::abs(con.computed_critical - con.paper_stated) <= 1e-12;
            ThresholdRow com{"complete_PA", com_check.completely_contractive, com_crit, 5.0 / 9.0,
                             false};
            com.agree = std::abs(com.computed_critical - com.paper_stated) <= 1e-12;
            rep.rows = {con, com};
            break;
        }
    }
    return rep;
}

}  // namespace matball

#endif  // MATBALL_BERGMAN_HPP
