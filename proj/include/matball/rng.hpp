#ifndef MATBALL_RNG_HPP
#define MATBALL_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "matball/cmatrix.hpp"

namespace matball {

inline constexpr std::uint64_t kDefaultSeed = 0x6d617462616c6cULL;  // "matball"

/// Seeded random source for complex Gaussians, Haar unitaries and test data.
class Rng {
public:
    explicit Rng(std::uint64_t seed = kDefaultSeed) : gen_(seed) {}

    double uniform(double lo = 0.0, double hi = 1.0) {
        return std::uniform_real_distribution<double>(lo, hi)(gen_);
    }

    double gaussian() { return std::normal_distribution<double>(0.0, 1.0)(gen_); }

    cplx cgaussian() { return cplx(gaussian(), gaussian()) / std::sqrt(2.0); }

    CMatrix cgaussian_matrix(std::size_t r, std::size_t c) {
        CMatrix m(r, c);
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < c; ++j) m(i, j) = cgaussian();
        return m;
    }

    std::vector<cplx> cgaussian_vector(std::size_t n) {
        std::vector<cplx> v(n);
        for (cplx& z : v) z = cgaussian();
        return v;
    }

    std::vector<cplx> unit_vector(std::size_t n) {
        std::vector<cplx> v = cgaussian_vector(n);
        double nn = vec_norm2(v);
        while (nn < 1e-8) {  // absurdly unlikely; regenerate rather than divide
            v = cgaussian_vector(n);
            nn = vec_norm2(v);
        }
        for (cplx& z : v) z /= nn;
        return v;
    }

    /// Haar-distributed unitary: QR of a complex Gaussian with the R-diagonal
    /// phase fix (Q <- Q diag(r_kk / |r_kk|)).
    CMatrix unitary(std::size_t n) {
        const CMatrix g = cgaussian_matrix(n, n);
        // Modified Gram-Schmidt; n is tiny, and MGS keeps the phases explicit.
        CMatrix q(n, n);
        std::vector<cplx> rdiag(n);
        for (std::size_t j = 0; j < n; ++j) {
            std::vector<cplx> col = g.column(j);
            for (std::size_t k = 0; k < j; ++k) {
                const std::vector<cplx> qk = q.column(k);
                const cplx proj = vec_dot(col, qk);
                for (std::size_t i = 0; i < n; ++i) col[i] -= proj * qk[i];
            }
            const double nn = vec_norm2(col);
            rdiag[j] = nn;  // MGS leaves r_jj real positive already
            for (std::size_t i = 0; i < n; ++i) q(i, j) = col[i] / nn;
        }
        // r_jj is real > 0 by construction, so the phase fix is the identity;
        // multiply anyway so the construction matches the stated recipe.
        for (std::size_t j = 0; j < n; ++j) {
            const cplx ph = rdiag[j] / std::abs(rdiag[j]);
            for (std::size_t i = 0; i < n; ++i) q(i, j) *= ph;
        }
        return q;
    }

    CMatrix hermitian_matrix(std::size_t n) {
        const CMatrix x = cgaussian_matrix(n, n);
        CMatrix h = x + x.adjoint();
        h *= 0.5;
        return h;
    }

    std::mt19937_64& raw() { return gen_; }

private:
    std::mt19937_64 gen_;
};

/// Additive-recurrence (Kronecker) low-discrepancy sequence on [0,1)^d.
/// Deterministic; index 0 is the centre point.  Used for the multistart
/// sampling layers, where coverage matters more than randomness.
class QuasiRandom {
public:
    explicit QuasiRandom(std::size_t dim) : dim_(dim), alpha_(dim), state_(dim, 0.5) {
        // Generalized golden ratio: the unique positive root of x^{d+1} = x + 1.
        double g = 1.5;
        for (int it = 0; it < 64; ++it) g = std::pow(1.0 + g, 1.0 / (dim + 1.0));
        double a = 1.0 / g;
        for (std::size_t k = 0; k < dim_; ++k) {
            alpha_[k] = a;
            a *= 1.0 / g;
        }
    }

    const std::vector<double>& next() {
        for (std::size_t k = 0; k < dim_; ++k) {
            state_[k] += alpha_[k];
            state_[k] -= std::floor(state_[k]);
        }
        return state_;
    }

private:
    std::size_t dim_;
    std::vector<double> alpha_;
    std::vector<double> state_;
};

}  // namespace matball

#endif  // MATBALL_RNG_HPP
