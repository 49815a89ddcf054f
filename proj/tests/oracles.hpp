// Test-only oracles, kept independent of the library code paths they check:
// power iteration for spectral norms, characteristic-polynomial roots for
// small Hermitian spectra, and dense-grid brute force for the g-function.
#ifndef MATBALL_TESTS_ORACLES_HPP
#define MATBALL_TESTS_ORACLES_HPP

#include <cmath>
#include <complex>
#include <vector>

#include "matball/cmatrix.hpp"
#include "matball/rng.hpp"

namespace oracles {

using matball::CMatrix;
using matball::cplx;

/// sigma_max via power iteration on M* M; no eigensolver involved.
inline double power_iteration_norm(const CMatrix& m, int iters = 10000) {
    const CMatrix g = m.adjoint() * m;
    matball::Rng rng(7);
    std::vector<cplx> x = rng.unit_vector(g.rows());
    double lambda = 0.0;
    for (int it = 0; it < iters; ++it) {
        x = matball::mat_vec(g, x);
        const double n = matball::vec_norm2(x);
        if (n == 0.0) return 0.0;
        for (cplx& z : x) z /= n;
        lambda = n;
    }
    return std::sqrt(lambda);
}

/// Real roots of the characteristic polynomial of a 2x2 Hermitian matrix.
inline std::vector<double> charpoly_roots_2(const CMatrix& h) {
    const double tr = h(0, 0).real() + h(1, 1).real();
    const double dt = (h(0, 0) * h(1, 1) - h(0, 1) * h(1, 0)).real();
    const double disc = std::sqrt(std::max(0.0, tr * tr - 4.0 * dt));
    return {(tr + disc) / 2.0, (tr - disc) / 2.0};
}

/// Real roots of the characteristic polynomial of a 3x3 Hermitian matrix via
/// the trigonometric solution of the depressed cubic.
inline std::vector<double> charpoly_roots_3(const CMatrix& h) {
    const double q = (h(0, 0).real() + h(1, 1).real() + h(2, 2).real()) / 3.0;
    CMatrix b = h;
    for (int i = 0; i < 3; ++i) b(i, i) -= q;
    double p2 = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) p2 += std::norm(b(i, j));
    const double p = std::sqrt(p2 / 6.0);
    std::vector<double> out;
    if (p < 1e-300) {
        out = {q, q, q};
        return out;
    }
    CMatrix bn = b;
    bn *= cplx(1.0 / p, 0.0);
    const double detbn = matball::det(bn).real();
    double r = detbn / 2.0;
    r = std::max(-1.0, std::min(1.0, r));
    const double phi = std::acos(r) / 3.0;
    out.push_back(q + 2.0 * p * std::cos(phi));
    out.push_back(q + 2.0 * p * std::cos(phi + 2.0 * M_PI / 3.0));
    out.push_back(q + 2.0 * p * std::cos(phi - 2.0 * M_PI / 3.0));
    std::sort(out.begin(), out.end(), std::greater<double>());
    return out;
}

/// Direct evaluation of the g-function from its displayed definition, using
/// only elementary vector arithmetic.
inline double g_direct(const CMatrix& a1, const CMatrix& a2, cplx v, cplx w,
                       const std::vector<cplx>& beta) {
    const std::vector<cplx> b1 = matball::mat_vec(a1.adjoint(), beta);
    const std::vector<cplx> b2 = matball::mat_vec(a2.adjoint(), beta);
    double t1 = 0.0, t2 = 0.0;
    for (const cplx& z : b1) t1 += std::norm(z);
    for (const cplx& z : b2) t2 += std::norm(z);
    const std::vector<cplx> cb = matball::mat_vec(a1 * a2.adjoint(), beta);
    cplx ip = 0.0;
    for (std::size_t i = 0; i < beta.size(); ++i) ip += cb[i] * std::conj(beta[i]);
    return 1.0 - std::norm(v) * t1 - std::norm(w) * t2 +
           std::norm(v) * std::norm(w) * (t1 * t2 - std::norm(ip));
}

/// Dense-grid brute force for min g over the phase-reduced sphere.
inline double g_min_grid(const CMatrix& a1, const CMatrix& a2, cplx v, cplx w, int n) {
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        const double t = 0.5 * M_PI * (i + 0.5) / n;
        const cplx b0(std::cos(t), 0.0);
        const double st = std::sin(t);
        for (int j = 0; j < n; ++j) {
            const double th = 2.0 * M_PI * j / n;
            const std::vector<cplx> beta = {b0, cplx(st * std::cos(th), st * std::sin(th))};
            best = std::min(best, g_direct(a1, a2, v, w, beta));
        }
    }
    return best;
}

}  // namespace oracles

#endif  // MATBALL_TESTS_ORACLES_HPP
