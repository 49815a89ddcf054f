#ifndef MATBALL_OPTIM_HPP
#define MATBALL_OPTIM_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <vector>

namespace matball {

struct NelderMeadResult {
    std::vector<double> x;
    double value = 0.0;
    int evaluations = 0;
    bool converged = false;
};

/// Plain Nelder-Mead on R^d.  Good enough for the low-dimensional smooth(ish)
/// objectives here; every caller wraps it in a deterministic multistart.
inline NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                                    std::vector<double> x0, double step = 0.1,
                                    double ftol = 1e-12, int max_iter = 400) {
    const std::size_t d = x0.size();
    NelderMeadResult res;

    std::vector<std::vector<double>> pts(d + 1, x0);
    std::vector<double> vals(d + 1);
    for (std::size_t i = 0; i < d; ++i) pts[i + 1][i] += step;
    for (std::size_t i = 0; i <= d; ++i) {
        vals[i] = f(pts[i]);
        ++res.evaluations;
    }

    const double refl = 1.0, expa = 2.0, contr = 0.5, shrink = 0.5;
    std::vector<std::size_t> idx(d + 1);

    for (int iter = 0; iter < max_iter; ++iter) {
        std::iota(idx.begin(), idx.end(), 0);
        std::stable_sort(idx.begin(), idx.end(),
                         [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
        const std::size_t best = idx[0], worst = idx[d], second = idx[d - 1];
        if (std::abs(vals[worst] - vals[best]) <= ftol * (std::abs(vals[best]) + 1.0)) {
            res.converged = true;
            break;
        }

        std::vector<double> centroid(d, 0.0);
        for (std::size_t i = 0; i <= d; ++i) {
            if (i == worst) continue;
            for (std::size_t k = 0; k < d; ++k) centroid[k] += pts[i][k] / static_cast<double>(d);
        }

        auto along = [&](double t) {
            std::vector<double> p(d);
            for (std::size_t k = 0; k < d; ++k) p[k] = centroid[k] + t * (pts[worst][k] - centroid[k]);
            return p;
        };

        std::vector<double> xr = along(-refl);
        const double fr = f(xr);
        ++res.evaluations;
        if (fr < vals[best]) {
            std::vector<double> xe = along(-expa);
            const double fe = f(xe);
            ++res.evaluations;
            if (fe < fr) {
                pts[worst] = std::move(xe);
                vals[worst] = fe;
            } else {
                pts[worst] = std::move(xr);
                vals[worst] = fr;
            }
        } else if (fr < vals[second]) {
            pts[worst] = std::move(xr);
            vals[worst] = fr;
        } else {
            const bool outside = fr < vals[worst];
            std::vector<double> xc = along(outside ? -contr : contr);
            const double fc = f(xc);
            ++res.evaluations;
            if (fc < std::min(fr, vals[worst])) {
                pts[worst] = std::move(xc);
                vals[worst] = fc;
            } else {
                for (std::size_t i = 0; i <= d; ++i) {
                    if (i == best) continue;
                    for (std::size_t k = 0; k < d; ++k)
                        pts[i][k] = pts[best][k] + shrink * (pts[i][k] - pts[best][k]);
                    vals[i] = f(pts[i]);
                    ++res.evaluations;
                }
            }
        }
    }

    std::size_t bi = 0;
    for (std::size_t i = 1; i <= d; ++i)
        if (vals[i] < vals[bi]) bi = i;
    res.x = pts[bi];
    res.value = vals[bi];
    return res;
}

}  // namespace matball

#endif  // MATBALL_OPTIM_HPP
