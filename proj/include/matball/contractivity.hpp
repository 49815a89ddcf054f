#ifndef MATBALL_CONTRACTIVITY_HPP
#define MATBALL_CONTRACTIVITY_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include "matball/cmatrix.hpp"
#include "matball/domain.hpp"
#include "matball/eig.hpp"
#include "matball/optim.hpp"
#include "matball/rng.hpp"

namespace matball {

/// m-tuple (V_1,...,V_m) of p x q matrices; defines the linear map
/// L_V(z) = z_1 V_1 + ... + z_m V_m and the homomorphism rho_V.
struct VTuple {
    std::size_t m = 0;
    std::size_t p = 0;
    std::size_t q = 0;
    std::vector<CMatrix> vs;

    static VTuple make(std::vector<CMatrix> vs_in) {
        VTuple v;
        v.m = vs_in.size();
        v.p = vs_in.empty() ? 0 : vs_in.front().rows();
        v.q = vs_in.empty() ? 0 : vs_in.front().cols();
        v.vs = std::move(vs_in);
        v.validate();
        return v;
    }

    static VTuple rows(std::vector<std::vector<cplx>> rs) {
        std::vector<CMatrix> vs;
        for (const auto& r : rs) {
            CMatrix v(1, r.size());
            for (std::size_t j = 0; j < r.size(); ++j) v(0, j) = r[j];
            vs.push_back(std::move(v));
        }
        return make(std::move(vs));
    }

    void validate() const {
        if (m == 0 || vs.size() != m) throw std::invalid_argument("VTuple: empty tuple");
        for (const CMatrix& v : vs) {
            if (v.rows() != p || v.cols() != q)
                throw std::invalid_argument("VTuple: matrices must share one p x q shape");
            v.require_finite("VTuple");
        }
    }
};

/// || A_1 (x) V_1 + ... + A_m (x) V_m ||_op, the norm of rho_V^{(n)}(P_A).
inline double tensor_norm(const DomainSpec& d, const VTuple& v) {
    if (v.m != d.m) throw std::invalid_argument("tensor_norm: tuple sizes differ");
    CMatrix t(d.n * v.p, d.n * v.q);
    for (std::size_t i = 0; i < d.m; ++i) t += kron(d.mats[i], v.vs[i]);
    return op_norm(t);
}

/// The pencil B_j = sum_i v_ij A_i, defined for row tuples (p = 1); the
/// contraction question for L_V becomes sup_x || sum_j x_j B_j || over the
/// unit sphere of C^q.
inline std::vector<CMatrix> linear_pencil(const DomainSpec& d, const VTuple& v) {
    if (v.p != 1) throw std::invalid_argument("linear_pencil: rows only");
    if (v.m != d.m) throw std::invalid_argument("linear_pencil: tuple sizes differ");
    std::vector<CMatrix> bs(v.q, CMatrix(d.n, d.n));
    for (std::size_t j = 0; j < v.q; ++j)
        for (std::size_t i = 0; i < d.m; ++i) bs[j] += v.vs[i](0, j) * d.mats[i];
    return bs;
}

/// B(beta, beta), the q x q Hermitian matrix whose positivity over the unit
/// sphere of C^n characterizes contractivity for row tuples.
inline CMatrix bbeta_matrix(const std::vector<CMatrix>& pencil_products, std::size_t q,
                            const std::vector<cplx>& beta) {
    CMatrix b(q, q);
    for (std::size_t j = 0; j < q; ++j)
        for (std::size_t k = 0; k < q; ++k) {
            const cplx g = sesq_form(pencil_products[j * q + k], beta);
            b(j, k) = ((j == k) ? cplx(1.0, 0.0) : cplx(0.0, 0.0)) - g;
        }
    return b;
}

struct ContractivityOptions {
    double tol = 1e-8;
    std::size_t grid = 4096;
    std::size_t refine_starts = 8;
    int refine_iters = 300;
};

enum class ReportMethod { closed_form, numeric };

/// Verdicts plus the witness data behind them for one (DomainSpec, VTuple)
/// query.
struct ContractivityReport {
    bool contractive = false;
    bool completely_contractive_on_PA = false;
    double linear_map_norm = 0.0;
    double tensor_norm = 0.0;
    std::vector<cplx> witness_beta;
    double attained_infimum = 0.0;
    ReportMethod method = ReportMethod::numeric;
    bool optimizer_converged = true;
};

namespace detail {

inline std::vector<cplx> coords_to_unit(const std::vector<double>& x) {
    std::vector<cplx> z(x.size() / 2);
    double nn = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        z[i] = cplx(x[2 * i], x[2 * i + 1]);
        nn += std::norm(z[i]);
    }
    nn = std::sqrt(nn);
    if (nn < 1e-12) {
        z.assign(z.size(), 0.0);
        z[0] = 1.0;
        return z;
    }
    for (cplx& c : z) c /= nn;
    return z;
}

/// Deterministic multistart minimization of `objective` over the unit sphere
/// of C^dim: a low-discrepancy grid pass, then Nelder-Mead from the best
/// starts.  For dim == 2 the grid is a Fibonacci lattice on the phase-reduced
/// sphere (global phase quotiented out).
struct SphereMin {
    double value = 0.0;
    std::vector<cplx> argmin;
    bool converged = true;
};

inline SphereMin minimize_on_sphere(const std::function<double(const std::vector<cplx>&)>& objective,
                                    std::size_t dim, const ContractivityOptions& opt) {
    struct Start {
        double val;
        std::vector<double> x;
    };
    std::vector<Start> starts;
    auto keep = [&](double val, std::vector<double> x) {
        starts.push_back({val, std::move(x)});
        std::push_heap(starts.begin(), starts.end(),
                       [](const Start& a, const Start& b) { return a.val < b.val; });
        if (starts.size() > opt.refine_starts) {
            std::pop_heap(starts.begin(), starts.end(),
                          [](const Start& a, const Start& b) { return a.val < b.val; });
            starts.pop_back();
        }
    };

    SphereMin best;
    best.value = std::numeric_limits<double>::infinity();

    if (dim == 2) {
        constexpr double kGolden = 0.6180339887498949;
        const std::size_t n = opt.grid;
        for (std::size_t k = 0; k < n; ++k) {
            const double t = 0.5 * M_PI * (static_cast<double>(k) + 0.5) / static_cast<double>(n);
            const double th = 2.0 * M_PI * std::fmod(static_cast<double>(k) * kGolden, 1.0);
            const std::vector<double> x = {std::cos(t), 0.0, std::sin(t) * std::cos(th),
                                           std::sin(t) * std::sin(th)};
            const double val = objective(coords_to_unit(x));
            if (val < best.value) {
                best.value = val;
                best.argmin = coords_to_unit(x);
            }
            keep(val, x);
        }
    } else {
        QuasiRandom seq(2 * dim);
        for (std::size_t k = 0; k < opt.grid; ++k) {
            const std::vector<double>& u = seq.next();
            std::vector<double> x(2 * dim);
            for (std::size_t i = 0; i < 2 * dim; ++i) x[i] = 2.0 * u[i] - 1.0;
            double nn = 0.0;
            for (double xi : x) nn += xi * xi;
            if (nn < 1e-8) continue;
            const double val = objective(coords_to_unit(x));
            if (val < best.value) {
                best.value = val;
                best.argmin = coords_to_unit(x);
            }
            keep(val, x);
        }
    }

    bool any_converged = false;
    for (const Start& s : starts) {
        const NelderMeadResult r =
            nelder_mead([&](const std::vector<double>& x) { return objective(coords_to_unit(x)); },
                        s.x, 0.1, 1e-13, opt.refine_iters);
        any_converged = any_converged || r.converged;
        if (r.value < best.value) {
            best.value = r.value;
            best.argmin = coords_to_unit(r.x);
        }
    }
    best.converged = any_converged || starts.empty();
    return best;
}

}  // namespace detail

/// || L_V || as a map from the dual-normed C^m into the p x q matrices:
/// sup over unit u, v of || (<V_1 u, v>, ..., <V_m u, v>) ||_A.  For row
/// tuples this collapses to sup_x || sum_j x_j B_j ||.
inline double linear_map_norm(const DomainSpec& d, const VTuple& v,
                              const ContractivityOptions& opt = {}) {
    if (v.m != d.m) throw std::invalid_argument("linear_map_norm: tuple sizes differ");
    if (v.p == 1) {
        const std::vector<CMatrix> bs = linear_pencil(d, v);
        auto neg = [&](const std::vector<cplx>& x) {
            CMatrix s(d.n, d.n);
            for (std::size_t j = 0; j < v.q; ++j) s += x[j] * bs[j];
            return -op_norm(s);
        };
        return -detail::minimize_on_sphere(neg, v.q, opt).value;
    }
    auto neg = [&](const std::vector<cplx>& uv) {
        const std::vector<cplx> u(uv.begin(), uv.begin() + v.q);
        const std::vector<cplx> w(uv.begin() + v.q, uv.end());
        // Joint sphere; scale-split between u and w only shrinks the value,
        // so the sup over the product of spheres is reached anyway.
        const double nu = vec_norm2(u), nw = vec_norm2(w);
        if (nu < 1e-9 || nw < 1e-9) return 0.0;
        std::vector<cplx> point(d.m);
        for (std::size_t i = 0; i < d.m; ++i) {
            const std::vector<cplx> vu = mat_vec(v.vs[i], u);
            point[i] = vec_dot(vu, w) / (nu * nw);
        }
        return -domain_norm(d, point);
    };
    return -detail::minimize_on_sphere(neg, v.q + v.p, opt).value;
}

/// General numeric contractivity decision.  For row tuples the criterion is
/// min over unit beta in C^n of lambda_min(B(beta, beta)); contractive when
/// the minimum clears -tol.  For p > 1 the report carries the sphere-sup
/// formulation: attained_infimum = 1 - ||L_V||^2 with the maximizing u as
/// witness.
inline ContractivityReport contractive_general(const DomainSpec& d, const VTuple& v,
                                               const ContractivityOptions& opt = {}) {
    if (v.m != d.m) throw std::invalid_argument("contractive_general: tuple sizes differ");
    ContractivityReport rep;
    rep.method = ReportMethod::numeric;
    rep.tensor_norm = tensor_norm(d, v);

    if (v.p == 1) {
        const std::vector<CMatrix> bs = linear_pencil(d, v);
        std::vector<CMatrix> prods(v.q * v.q, CMatrix(d.n, d.n));
        for (std::size_t j = 0; j < v.q; ++j)
            for (std::size_t k = 0; k < v.q; ++k) prods[j * v.q + k] = bs[j] * bs[k].adjoint();

        auto lmin = [&](const std::vector<cplx>& beta) {
            return hermitian_lambda_min(bbeta_matrix(prods, v.q, beta));
        };
        const detail::SphereMin min = detail::minimize_on_sphere(lmin, d.n, opt);
        rep.attained_infimum = min.value;
        rep.witness_beta = min.argmin;
        rep.optimizer_converged = min.converged;
        rep.contractive = min.value >= -opt.tol;
    } else {
        rep.optimizer_converged = true;
        const double norm = linear_map_norm(d, v, opt);
        rep.attained_infimum = 1.0 - norm * norm;
        rep.contractive = norm <= 1.0 + opt.tol;
    }
    rep.linear_map_norm = linear_map_norm(d, v, opt);
    rep.completely_contractive_on_PA = rep.tensor_norm <= 1.0 + opt.tol;
    return rep;
}

// ---------------------------------------------------------------------------
// Closed forms on the (I_2, E_12) domain
// ---------------------------------------------------------------------------

/// Exact ||L_V||^2 for the (I_2, E_12) domain through the one-dimensional
/// reduction: sup over u = |beta_1| in [0,1] of
///   a (1-u^2) + b (1+u)^2 + c (1+u) sqrt(1-u^2),
/// a = ||v1||^2, b = ||v2||^2/4, c = |<v1, v2>|.  Dense scan plus golden
/// section; deterministic and accurate to ~1e-12.
inline double lv_norm_sq_I_E12(const std::vector<cplx>& v1, const std::vector<cplx>& v2) {
    if (v1.size() != 2 || v2.size() != 2)
        throw std::invalid_argument("lv_norm_sq_I_E12: need complex 2-vectors");
    const double a = std::norm(v1[0]) + std::norm(v1[1]);
    const double b = 0.25 * (std::norm(v2[0]) + std::norm(v2[1]));
    const double c = std::abs(v1[0] * std::conj(v2[0]) + v1[1] * std::conj(v2[1]));
    auto f = [&](double u) {
        const double s = std::sqrt(std::max(0.0, 1.0 - u * u));
        return a * (1.0 - u * u) + b * (1.0 + u) * (1.0 + u) + c * (1.0 + u) * s;
    };
    const int n = 2000;
    double bu = 0.0, bv = f(0.0);
    for (int k = 1; k <= n; ++k) {
        const double u = static_cast<double>(k) / n;
        const double val = f(u);
        if (val > bv) {
            bv = val;
            bu = u;
        }
    }
    double lo = std::max(0.0, bu - 1.0 / n), hi = std::min(1.0, bu + 1.0 / n);
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < 80; ++it) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + gr * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - gr * (hi - lo);
            f1 = f(x1);
        }
    }
    return std::max(bv, std::max(f1, f2));
}

/// Contractivity of rho_V on the (I_2, E_12) domain.  `lhs <= rhs` is the
/// closed criterion (a+b+s)^2 <= 4s with s = sqrt((a-b)^2+c^2); it is exact
/// whenever <v1, v2> = 0 but only sufficient in general (its derivation drops
/// the cross term from the final eigenvalue step), so the decisive verdict is
/// taken from the exact one-dimensional reduction.
struct ClosedContractiveIE12 {
    double lhs = 0.0;         // (a + b + s)^2
    double rhs = 0.0;         // 4 s
    bool criterion_holds = false;
    double lv_norm_sq = 0.0;  // exact ||L_V||^2
    bool contractive = false;
};

inline ClosedContractiveIE12 contractive_closed_I_E12(const std::vector<cplx>& v1,
                                                      const std::vector<cplx>& v2,
                                                      double tol = 1e-9) {
    if (v1.size() != 2 || v2.size() != 2)
        throw std::invalid_argument("contractive_closed_I_E12: need complex 2-vectors");
    const double a = std::norm(v1[0]) + std::norm(v1[1]);
    const double b = 0.25 * (std::norm(v2[0]) + std::norm(v2[1]));
    const double c = std::abs(v1[0] * std::conj(v2[0]) + v1[1] * std::conj(v2[1]));
    const double s = std::sqrt((a - b) * (a - b) + c * c);
    ClosedContractiveIE12 out;
    out.lhs = (a + b + s) * (a + b + s);
    out.rhs = 4.0 * s;
    out.criterion_holds = out.lhs <= out.rhs + tol;
    out.lv_norm_sq = lv_norm_sq_I_E12(v1, v2);
    out.contractive = out.lv_norm_sq <= 1.0 + tol;
    return out;
}

/// Complete contractivity test on the (I_2, E_12) domain.  `stated_value`
/// carries the 2||v1||^2 + ||v2||^2 + sqrt(||v2||^4 - 4|<v1,v2>|^2) <= 2 form;
/// the direct spectral value replaces the minus under the radical by a plus
/// and is the decisive one.  When the stated radicand is negative the stated
/// branch is flagged invalid and only the direct value is meaningful.
struct ClosedCompleteIE12 {
    double stated_value = 0.0;
    bool stated_valid = false;    // radicand >= 0
    bool stated_verdict = false;  // stated_value <= 2
    double direct_value = 0.0;    // plus-sign radical; equals 2 ||rho_V^{(2)}(P_A)||^2
    bool completely_contractive = false;
};

inline ClosedCompleteIE12 complete_closed_I_E12(const std::vector<cplx>& v1,
                                                const std::vector<cplx>& v2, double tol = 1e-9) {
    if (v1.size() != 2 || v2.size() != 2)
        throw std::invalid_argument("complete_closed_I_E12: need complex 2-vectors");
    const double n1 = std::norm(v1[0]) + std::norm(v1[1]);
    const double n2 = std::norm(v2[0]) + std::norm(v2[1]);
    const double ip = std::norm(v1[0] * std::conj(v2[0]) + v1[1] * std::conj(v2[1]));
    ClosedCompleteIE12 out;
    const double stated_radicand = n2 * n2 - 4.0 * ip;
    out.stated_valid = stated_radicand >= -tol;
    if (out.stated_valid)
        out.stated_value = 2.0 * n1 + n2 + std::sqrt(std::max(0.0, stated_radicand));
    out.direct_value = 2.0 * n1 + n2 + std::sqrt(n2 * n2 + 4.0 * ip);
    out.stated_verdict = out.stated_valid && out.stated_value <= 2.0 + tol;
    out.completely_contractive = out.direct_value <= 2.0 + tol;
    return out;
}

// ---------------------------------------------------------------------------
// Closed forms on the upper-triangular C^3 domain (E_11, E_12, E_22)
// ---------------------------------------------------------------------------

/// Contractivity criterion |v11|^2 (1 - |v33|^2) >= |v22|^2 - |v33|^2 for the
/// diagonal tuple v1=(v11,0,0), v2=(0,v22,0), v3=(0,0,v33).  The inequality
/// is a sufficient condition (it evaluates the relevant quadratic at its
/// unconstrained vertex); `exact_contractive` restricts the minimization to
/// the feasible range and is the decision-grade answer.
struct ClosedContractiveDiag3 {
    double lhs = 0.0;
    double rhs = 0.0;
    bool criterion_holds = false;
    bool exact_contractive = false;
};

inline ClosedContractiveDiag3 contractive_closed_diag3(cplx v11, cplx v22, cplx v33,
                                                       double tol = 1e-9) {
    const double a = std::norm(v11), b = std::norm(v22), c = std::norm(v33);
    ClosedContractiveDiag3 out;
    out.lhs = a * (1.0 - c);
    out.rhs = b - c;
    out.criterion_holds = out.lhs >= out.rhs - tol;
    // Exact: B(beta,beta) >= 0 on |beta_1|^2 = r in [0,1] reduces to
    // 1 - r a >= 0 and 1 - r b - (1-r) c >= 0, both linear in r.
    out.exact_contractive = a <= 1.0 + tol && b <= 1.0 + tol && c <= 1.0 + tol;
    return out;
}

struct ClosedCompleteDiag3 {
    double value = 0.0;  // max(|v11|^2 + |v22|^2, |v33|^2)
    bool completely_contractive = false;
};

inline ClosedCompleteDiag3 complete_closed_diag3(cplx v11, cplx v22, cplx v33, double tol = 1e-9) {
    ClosedCompleteDiag3 out;
    out.value = std::max(std::norm(v11) + std::norm(v22), std::norm(v33));
    out.completely_contractive = out.value <= 1.0 + tol;
    return out;
}

/// The C^3 domain behind the diag3 criteria.
inline DomainSpec upper_triangular_domain() {
    return DomainSpec::make(
        {CMatrix::unit(2, 2, 0, 0), CMatrix::unit(2, 2, 0, 1), CMatrix::unit(2, 2, 1, 1)});
}

inline DomainSpec euclidean_pair() {
    return DomainSpec::make({CMatrix::unit(2, 2, 0, 0), CMatrix::unit(2, 2, 0, 1)});
}

inline DomainSpec i_e12_pair() {
    return DomainSpec::make({CMatrix::identity(2), CMatrix::unit(2, 2, 0, 1)});
}

// ---------------------------------------------------------------------------
// Operator-space embedding norms
// ---------------------------------------------------------------------------

/// || P_A^{(k)}(V) ||, the norm of the assembled block matrix
/// sum_i A_i (x) V_i, optionally with every A_i transposed.  The transposed
/// variant probes the column-style embedding of the same normed space.
inline double embedding_norm_pair(const DomainSpec& d, const CMatrix& v1, const CMatrix& v2,
                                  bool transposed) {
    if (d.m != 2) throw std::invalid_argument("embedding_norm_pair: need a 2-matrix domain");
    if (v1.rows() != v1.cols() || !v1.same_shape(v2))
        throw std::invalid_argument("embedding_norm_pair: V blocks must be square, equal size");
    const CMatrix a1 = transposed ? d.mats[0].transpose() : d.mats[0];
    const CMatrix a2 = transposed ? d.mats[1].transpose() : d.mats[1];
    return op_norm(kron(a1, v1) + kron(a2, v2));
}

}  // namespace matball

#endif  // MATBALL_CONTRACTIVITY_HPP
