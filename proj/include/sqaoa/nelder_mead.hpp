#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <iterator>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

namespace sqaoa {

struct NelderMeadOptions {
    int max_evals = 4000;
    double f_tol = 1e-8;        // stop when the simplex f-spread drops below
    double initial_step = 0.1;  // simplex edge length around the start point
};

struct NelderMeadResult {
    std::vector<double> x;
    double fx = 0.0;
    int evals = 0;
    bool converged = false;
};

// Downhill simplex with standard reflection/expansion/contraction/shrink
// coefficients (1, 2, 0.5, 0.5). The start point is a simplex vertex, so the
// result never exceeds f(x0).
inline NelderMeadResult nelder_mead(
    const std::function<double(std::span<const double>)>& f,
    std::vector<double> x0, const NelderMeadOptions& opt) {
    const std::size_t dim = x0.size();
    if (dim == 0) throw std::invalid_argument("empty start point");

    NelderMeadResult result;
    int evals = 0;
    auto eval = [&](const std::vector<double>& x) {
        ++evals;
        return f(x);
    };

    std::vector<std::vector<double>> verts(dim + 1, x0);
    std::vector<double> fv(dim + 1);
    fv[0] = eval(verts[0]);
    for (std::size_t i = 0; i < dim; ++i) {
        verts[i + 1][i] += opt.initial_step;
        fv[i + 1] = eval(verts[i + 1]);
    }

    std::vector<std::size_t> order(dim + 1);
    std::vector<double> centroid(dim), cand(dim);
    while (true) {
        std::iota(order.begin(), order.end(), 0u);
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
        const std::size_t best = order.front();
        const std::size_t worst = order.back();
        const std::size_t second_worst = order[dim - 1];

        if (fv[worst] - fv[best] < opt.f_tol) {
            result.converged = true;
            break;
        }
        if (evals >= opt.max_evals) break;

        for (std::size_t k = 0; k < dim; ++k) {
            double s = 0.0;
            for (std::size_t i = 0; i <= dim; ++i) {
                if (i != worst) s += verts[i][k];
            }
            centroid[k] = s / double(dim);
        }

        auto blend = [&](double t) {
            for (std::size_t k = 0; k < dim; ++k) {
                cand[k] = centroid[k] + t * (verts[worst][k] - centroid[k]);
            }
        };

        blend(-1.0);  // reflection
        const double fr = eval(cand);
        if (fr < fv[best]) {
            std::vector<double> reflected = cand;
            blend(-2.0);  // expansion
            const double fe = eval(cand);
            if (fe < fr) {
                verts[worst] = cand;
                fv[worst] = fe;
            } else {
                verts[worst] = std::move(reflected);
                fv[worst] = fr;
            }
        } else if (fr < fv[second_worst]) {
            verts[worst] = cand;
            fv[worst] = fr;
        } else {
            blend(fr < fv[worst] ? -0.5 : 0.5);  // contraction
            const double fc = eval(cand);
            if (fc < std::min(fr, fv[worst])) {
                verts[worst] = cand;
                fv[worst] = fc;
            } else {
                // shrink toward the best vertex
                for (std::size_t i = 0; i <= dim; ++i) {
                    if (i == best) continue;
                    for (std::size_t k = 0; k < dim; ++k) {
                        verts[i][k] = 0.5 * (verts[i][k] + verts[best][k]);
                    }
                    fv[i] = eval(verts[i]);
                }
                if (evals >= opt.max_evals) break;
            }
        }
    }

    const std::size_t best =
        std::distance(fv.begin(), std::min_element(fv.begin(), fv.end()));
    result.x = verts[best];
    result.fx = fv[best];
    result.evals = evals;
    return result;
}

}  // namespace sqaoa
