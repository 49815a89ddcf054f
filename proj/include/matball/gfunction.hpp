#ifndef MATBALL_GFUNCTION_HPP
#define MATBALL_GFUNCTION_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "matball/cmatrix.hpp"
#include "matball/contractivity.hpp"
#include "matball/domain.hpp"
#include "matball/eig.hpp"
#include "matball/optim.hpp"
#include "matball/rng.hpp"

namespace matball {

/// Data of the g-function attached to a 2x2 pair (A_1, A_2) and the diagonal
/// tuple v_1 = (v, 0), v_2 = (0, w):
///   g(beta) = 1 - |v|^2 ||A1* b||^2 - |w|^2 ||A2* b||^2
///           + |vw|^2 ( ||A1* b||^2 ||A2* b||^2 - |<A1 A2* b, b>|^2 ).
/// Nonnegativity over the unit sphere characterizes contractivity of L_V.
struct GFunctionSpec {
    CMatrix a1, a2;
    cplx v = 0.0, w = 0.0;

    static GFunctionSpec make(CMatrix a1, CMatrix a2, cplx v, cplx w) {
        if (a1.rows() != 2 || a1.cols() != 2 || a2.rows() != 2 || a2.cols() != 2)
            throw std::invalid_argument("GFunctionSpec: 2x2 matrices required");
        a1.require_finite("GFunctionSpec");
        a2.require_finite("GFunctionSpec");
        return GFunctionSpec{std::move(a1), std::move(a2), v, w};
    }
};

namespace detail {

/// Precomputed Hermitian forms behind g: H1 = A1 A1*, H2 = A2 A2*, C = A1 A2*.
struct GForms {
    CMatrix h1, h2, c;
    double vv, ww;

    explicit GForms(const GFunctionSpec& spec)
        : h1(spec.a1 * spec.a1.adjoint()),
          h2(spec.a2 * spec.a2.adjoint()),
          c(spec.a1 * spec.a2.adjoint()),
          vv(std::norm(spec.v)),
          ww(std::norm(spec.w)) {}

    double eval(const std::vector<cplx>& beta) const {
        const double t1 = herm_form(h1, beta);
        const double t2 = herm_form(h2, beta);
        const double cr = std::norm(sesq_form(c, beta));
        return 1.0 - vv * t1 - ww * t2 + vv * ww * (t1 * t2 - cr);
    }
};

inline std::vector<cplx> sphere2(double t, double th) {
    return {cplx(std::cos(t), 0.0), cplx(std::sin(t) * std::cos(th), std::sin(t) * std::sin(th))};
}

}  // namespace detail

inline double g_eval(const GFunctionSpec& spec, const std::vector<cplx>& beta) {
    if (beta.size() != 2) throw std::invalid_argument("g_eval: beta must lie in C^2");
    if (std::abs(vec_norm2(beta) - 1.0) > 1e-12)
        throw std::invalid_argument("g_eval: beta must be a unit vector");
    return detail::GForms(spec).eval(beta);
}

struct GMinOptions {
    std::size_t grid = 512;  // grid x grid over (t, theta)
    std::size_t refine_starts = 6;
    int refine_iters = 250;
};

struct GMinResult {
    double value = 1.0;
    std::vector<cplx> beta;
};

/// Global minimum of g over the phase-reduced unit sphere of C^2,
/// parametrized by t in [0, pi/2], theta in [0, 2 pi); dense grid plus
/// Nelder-Mead polish of the best cells.
inline GMinResult g_min(const GFunctionSpec& spec, const GMinOptions& opt = {}) {
    const detail::GForms forms(spec);
    const std::size_t n = opt.grid;

    struct Cell {
        double val, t, th;
    };
    std::vector<Cell> best_cells;
    GMinResult best;
    best.value = std::numeric_limits<double>::infinity();

    auto consider = [&](double val, double t, double th) {
        best_cells.push_back({val, t, th});
        std::push_heap(best_cells.begin(), best_cells.end(),
                       [](const Cell& a, const Cell& b) { return a.val < b.val; });
        if (best_cells.size() > opt.refine_starts) {
            std::pop_heap(best_cells.begin(), best_cells.end(),
                          [](const Cell& a, const Cell& b) { return a.val < b.val; });
            best_cells.pop_back();
        }
    };

    for (std::size_t i = 0; i < n; ++i) {
        const double t = 0.5 * M_PI * (static_cast<double>(i) + 0.5) / static_cast<double>(n);
        for (std::size_t j = 0; j < n; ++j) {
            const double th = 2.0 * M_PI * static_cast<double>(j) / static_cast<double>(n);
            const double val = forms.eval(detail::sphere2(t, th));
            if (val < best.value) {
                best.value = val;
                best.beta = detail::sphere2(t, th);
            }
            consider(val, t, th);
        }
    }

    for (const auto& cell : best_cells) {
        const NelderMeadResult r = nelder_mead(
            [&](const std::vector<double>& x) { return forms.eval(detail::sphere2(x[0], x[1])); },
            {cell.t, cell.th}, 0.02, 1e-14, opt.refine_iters);
        if (r.value < best.value) {
            best.value = r.value;
            best.beta = detail::sphere2(r.x[0], r.x[1]);
        }
    }

    // Fix the phase: first component of meaningful size becomes real >= 0
    // (the refinement step may wander past the parameter box).
    for (const cplx& lead : best.beta) {
        if (std::abs(lead) > 1e-8) {
            const cplx ph = std::conj(lead) / std::abs(lead);
            for (cplx& z : best.beta) z *= ph;
            break;
        }
    }
    return best;
}

// ---------------------------------------------------------------------------
// B-set: kernel vectors of the two matrix pencils
// ---------------------------------------------------------------------------

struct BSet {
    std::vector<cplx> mus;                      // finite roots of det(A2* - mu A1*)
    std::vector<cplx> nus;                      // finite roots of det(A1* - nu A2*)
    std::vector<std::vector<cplx>> vectors;     // unit kernel vectors, phase-fixed
    std::vector<int> multiplicities;            // double roots collapse to one vector
    bool degenerate = false;                    // both determinants vanish identically
};

namespace detail {

/// Roots of c2 x^2 + c1 x + c0 = 0 with complex coefficients; empty when the
/// polynomial is identically zero (reported through `identically_zero`).
inline std::vector<cplx> quadratic_roots(cplx c2, cplx c1, cplx c0, bool& identically_zero) {
    const double scale = std::max({std::abs(c2), std::abs(c1), std::abs(c0)});
    identically_zero = scale <= 1e-13;
    if (identically_zero) return {};
    if (std::abs(c2) <= 1e-13 * scale) {
        if (std::abs(c1) <= 1e-13 * scale) return {};
        return {-c0 / c1};
    }
    const cplx disc = std::sqrt(c1 * c1 - 4.0 * c2 * c0);
    const cplx q = (std::real(std::conj(c1) * disc) >= 0.0) ? -0.5 * (c1 + disc) : -0.5 * (c1 - disc);
    if (std::abs(q) <= 1e-15 * scale) return {cplx(0.0, 0.0), -c1 / c2};  // c0 ~ 0 here
    return {q / c2, c0 / q};
}

inline std::optional<std::vector<cplx>> kernel_vector_2x2(const CMatrix& n) {
    const double r0 = std::hypot(std::abs(n(0, 0)), std::abs(n(0, 1)));
    const double r1 = std::hypot(std::abs(n(1, 0)), std::abs(n(1, 1)));
    std::vector<cplx> k(2);
    if (std::max(r0, r1) <= 1e-13) return std::nullopt;  // two-dimensional kernel
    if (r0 >= r1) {
        k[0] = n(0, 1);
        k[1] = -n(0, 0);
    } else {
        k[0] = n(1, 1);
        k[1] = -n(1, 0);
    }
    const double nn = vec_norm2(k);
    if (nn <= 1e-13) return std::nullopt;
    for (cplx& z : k) z /= nn;
    std::size_t lead = (std::abs(k[0]) > 1e-8) ? 0 : 1;
    const cplx ph = std::conj(k[lead]) / std::abs(k[lead]);
    for (cplx& z : k) z *= ph;
    return k;
}

}  // namespace detail

/// Solves det(A2* - mu A1*) = 0 and det(A1* - nu A2*) = 0 (quadratics via the
/// 2x2 determinant polarization) and collects unit kernel vectors.  When the
/// determinants vanish identically the pencil carries no information and the
/// set is flagged degenerate.
inline BSet compute_b_set(const CMatrix& a1, const CMatrix& a2) {
    if (a1.rows() != 2 || a1.cols() != 2 || a2.rows() != 2 || a2.cols() != 2)
        throw std::invalid_argument("compute_b_set: 2x2 matrices required");
    const CMatrix x = a2.adjoint();
    const CMatrix y = a1.adjoint();
    // det(X + tY) = det X + t (tr X tr Y - tr(XY)) + t^2 det Y.
    const cplx mix = x.trace() * y.trace() - (x * y).trace();

    BSet out;
    bool mu_zero = false, nu_zero = false;
    const std::vector<cplx> mus = detail::quadratic_roots(det(y), -mix, det(x), mu_zero);
    const std::vector<cplx> nus = detail::quadratic_roots(det(x), -mix, det(y), nu_zero);
    out.degenerate = mu_zero;  // the coefficient triple is shared, so
                               // mu_zero == nu_zero always
    if (out.degenerate) return out;

    auto add = [&](const CMatrix& pencil, cplx root, std::vector<cplx>& roots) {
        const std::optional<std::vector<cplx>> k = detail::kernel_vector_2x2(pencil);
        if (!k) return;
        for (std::size_t i = 0; i < out.vectors.size(); ++i) {
            double d = 0.0;
            for (std::size_t j = 0; j < 2; ++j) d += std::abs(out.vectors[i][j] - (*k)[j]);
            if (d <= 1e-9) {
                ++out.multiplicities[i];
                roots.push_back(root);
                return;
            }
        }
        out.vectors.push_back(*k);
        out.multiplicities.push_back(1);
        roots.push_back(root);
    };

    for (const cplx& mu : mus) add(x - mu * y, mu, out.mus);
    for (const cplx& nu : nus) add(y - nu * x, nu, out.nus);
    return out;
}

// ---------------------------------------------------------------------------
// Counterexample search
// ---------------------------------------------------------------------------

enum class SearchStatus {
    certificate,                    // g-scan counterexample found
    transpose_gap,                  // degenerate pencil; gap shown against the
                                    // transposed embedding family
    simultaneously_diagonalizable,  // no counterexample exists for the pair
    exhausted                       // scan completed without a certificate
};

struct SearchResult {
    SearchStatus status = SearchStatus::exhausted;
    bool verdict = false;  // true iff a contractive, not completely
                           // contractive map was certified
    std::string message;

    // g-scan certificate
    cplx v0 = 0.0;
    double lambda0 = 0.0;
    std::vector<cplx> beta0;
    double g_min_value = 0.0;
    double complete_test = 0.0;          // min over beta of the quadratic part
    double tensor_norm_value = 0.0;      // || A1 (x) v1 + A2 (x) v2 ||
    std::vector<double> bset_g_values;   // g at the B-set vectors
    double bset_separation = 0.0;        // min over B-set of g(beta_B) - g_min

    // transpose-gap certificate
    VTuple gap_tuple;
    double gap_norm_plain = 0.0;
    double gap_norm_transposed = 0.0;
    bool gap_on_transposed = false;

    // scan diagnostics
    double lambda_lo = 0.0, lambda_hi = 0.0;
    std::size_t lambdas_tried = 0;
};

struct SearchOptions {
    double lambda_min = 1e-3, lambda_max = 1e3;
    std::size_t lambda_grid = 97;      // log-spaced, includes 1 exactly
    double v_tol = 1e-10;              // bisection tolerance in |v|
    double g_tol = 1e-8;               // bisection tolerance in g_min
    double root_tol = 1e-6;            // |g_min| certificate tolerance
    double separation = 1e-3;          // clearance from the B-set vectors
    double complete_tol = 1e-8;        // complete test must clear -complete_tol
    std::size_t scan_grid = 160;       // g_min grid during bisection
    std::uint64_t seed = kDefaultSeed;
};

namespace detail {

/// min over unit beta of 1 - |v|^2 ||A1* b||^2 - |w|^2 ||A2* b||^2, exactly:
/// 1 - lambda_max(|v|^2 A1 A1* + |w|^2 A2 A2*).
inline double complete_test_value(const CMatrix& a1, const CMatrix& a2, cplx v, cplx w) {
    CMatrix h = std::norm(v) * (a1 * a1.adjoint());
    h += std::norm(w) * (a2 * a2.adjoint());
    return 1.0 - hermitian_lambda_max(h);
}

inline bool simultaneously_diagonalizable(const DomainSpec& d, double tol = 1e-9) {
    const CanonicalForm2D canon = canonicalize_2d(d);
    if (std::abs(canon.b) <= tol && std::abs(canon.c) <= tol) return true;
    if (std::abs(canon.d - cplx(1.0, 0.0)) <= tol) {
        const CMatrix a2 = canon.canonical_mats()[1];
        const CMatrix comm = a2 * a2.adjoint() - a2.adjoint() * a2;
        const double scale = std::max(1.0, a2.frobenius_norm());
        if (comm.frobenius_norm() <= tol * scale * scale) return true;
    }
    return false;
}

}  // namespace detail

/// Searches for a diagonal tuple (v_0, lambda_0 v_0) that is contractive with
/// inf g = 0 while the complete-contractivity test fails: an explicit
/// contractive, not completely contractive map on the domain.  Outward scan
/// of lambda from 1 over a log grid; for each lambda a bisection on |v| finds
/// the root of g_min (g_min(0) = 1, non-increasing towards the admissibility
/// bound).  Simultaneously diagonalizable pairs are rejected up front; pairs
/// whose pencils degenerate are handled through the transposed embedding.
inline SearchResult search(const DomainSpec& d, const SearchOptions& opt = {}) {
    if (d.m != 2 || d.n != 2) throw std::invalid_argument("search: need m=2, n=2");
    d.validate();
    SearchResult res;
    res.lambda_lo = opt.lambda_min;
    res.lambda_hi = opt.lambda_max;

    if (detail::simultaneously_diagonalizable(d)) {
        res.status = SearchStatus::simultaneously_diagonalizable;
        res.message =
            "no counterexample expected: the pair is simultaneously diagonalizable, so "
            "contractive maps on this domain are completely contractive";
        return res;
    }

    const CMatrix& a1 = d.mats[0];
    const CMatrix& a2 = d.mats[1];
    const BSet bset = compute_b_set(a1, a2);

    if (bset.degenerate) {
        // det(A2* - mu A1*) vanishes identically: g carries no quartic term
        // and the diagonal scan cannot separate the two embeddings; exhibit
        // the gap between P_A and P_{A^t} on a boundary-contractive tuple.
        Rng rng(opt.seed);
        const DomainSpec dt = d.transposed();
        for (int attempt = 0; attempt < 64; ++attempt) {
            CMatrix v1(1, 2), v2(1, 2);
            for (std::size_t j = 0; j < 2; ++j) {
                v1(0, j) = rng.cgaussian();
                v2(0, j) = rng.cgaussian();
            }
            VTuple v = VTuple::make({v1, v2});
            const double lnorm = linear_map_norm(d, v);
            if (lnorm < 1e-9) continue;
            for (CMatrix& vm : v.vs) vm *= cplx(1.0 / lnorm, 0.0);
            const double tp = tensor_norm(d, v);
            const double tt = tensor_norm(dt, v);
            if (tp > 1.0 + 1e-6 || tt > 1.0 + 1e-6) {
                res.status = SearchStatus::transpose_gap;
                res.verdict = true;
                res.gap_tuple = v;
                res.gap_norm_plain = tp;
                res.gap_norm_transposed = tt;
                res.gap_on_transposed = tt > tp;
                res.tensor_norm_value = std::max(tp, tt);
                res.message = "degenerate pencil: certificate exhibited on the " +
                              std::string(res.gap_on_transposed ? "transposed" : "plain") +
                              " embedding";
                return res;
            }
        }
        res.status = SearchStatus::exhausted;
        res.message = "degenerate pencil and no embedding gap found in 64 draws";
        return res;
    }

    const double na1 = op_norm(a1.adjoint());
    const double na2 = op_norm(a2.adjoint());

    // Log grid over [lambda_min, lambda_max] containing 1, enumerated outward
    // from 1; "first certifying index" is deterministic under this order.
    std::vector<double> lambdas;
    {
        const std::size_t n = opt.lambda_grid;
        const double llo = std::log10(opt.lambda_min), lhi = std::log10(opt.lambda_max);
        std::vector<double> grid(n);
        std::size_t center = 0;
        double cdist = 1e300;
        for (std::size_t k = 0; k < n; ++k) {
            grid[k] = std::pow(10.0, llo + (lhi - llo) * static_cast<double>(k) /
                                              static_cast<double>(n - 1));
            if (std::abs(std::log10(grid[k])) < cdist) {
                cdist = std::abs(std::log10(grid[k]));
                center = k;
            }
        }
        if (cdist < 1e-12) grid[center] = 1.0;
        lambdas.push_back(grid[center]);
        for (std::size_t off = 1; off < n; ++off) {
            if (center + off < n) lambdas.push_back(grid[center + off]);
            if (center >= off) lambdas.push_back(grid[center - off]);
        }
    }

    const GMinOptions scan_opts{opt.scan_grid, 4, 150};
    const GMinOptions full_opts{};

    for (const double lambda : lambdas) {
        ++res.lambdas_tried;
        const double v_hi = std::min(1.0 / na1, 1.0 / (lambda * na2));
        auto gmin_at = [&](double v, const GMinOptions& o) {
            return g_min(GFunctionSpec::make(a1, a2, v, lambda * v), o);
        };
        if (gmin_at(v_hi, scan_opts).value > 0.0) continue;  // no crossing in range

        double lo = 0.0, hi = v_hi;
        for (int it = 0; it < 200 && hi - lo > opt.v_tol; ++it) {
            const double mid = 0.5 * (lo + hi);
            const double g = gmin_at(mid, scan_opts).value;
            if (std::abs(g) <= opt.g_tol) {
                lo = hi = mid;
                break;
            }
            (g > 0.0 ? lo : hi) = mid;
        }
        const double v0 = 0.5 * (lo + hi);
        const GMinResult fine = gmin_at(v0, full_opts);
        if (std::abs(fine.value) > opt.root_tol) continue;

        const GFunctionSpec spec = GFunctionSpec::make(a1, a2, v0, lambda * v0);
        double sep = std::numeric_limits<double>::infinity();
        std::vector<double> bvals;
        for (const auto& bv : bset.vectors) {
            const double gb = g_eval(spec, bv);
            bvals.push_back(gb);
            sep = std::min(sep, gb - fine.value);
        }
        if (bset.vectors.empty()) sep = 0.0;
        if (sep < opt.separation) continue;

        const double ct = detail::complete_test_value(a1, a2, v0, lambda * v0);
        if (ct >= -opt.complete_tol) continue;

        res.status = SearchStatus::certificate;
        res.verdict = true;
        res.v0 = v0;
        res.lambda0 = lambda;
        res.beta0 = fine.beta;
        res.g_min_value = fine.value;
        res.complete_test = ct;
        res.tensor_norm_value = std::sqrt(1.0 - ct);
        res.bset_g_values = bvals;
        res.bset_separation = sep;
        res.message = "counterexample certificate found";
        return res;
    }

    res.status = SearchStatus::exhausted;
    res.message = "lambda scan exhausted without a certificate";
    return res;
}

/// The diagonal tuple realizing a g-scan certificate, for round-trips through
/// the contractivity checks.
inline VTuple search_certificate_tuple(const SearchResult& r) {
    if (r.status != SearchStatus::certificate)
        throw std::invalid_argument("search_certificate_tuple: no g-scan certificate");
    CMatrix v1(1, 2), v2(1, 2);
    v1(0, 0) = r.v0;
    v2(0, 1) = r.lambda0 * r.v0;
    return VTuple::make({v1, v2});
}

}  // namespace matball

#endif  // MATBALL_GFUNCTION_HPP
