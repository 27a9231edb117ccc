#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "omht/errors.hpp"

namespace omht {

// Globally adaptive Gauss-Kronrod (G7, K15) integration on [a, b].
// Bisects the interval with the largest error estimate until the summed
// error meets the relative tolerance.
template <class F>
double integrate_adaptive(F&& f, double a, double b, double rel_tol = 1e-8,
                          int max_intervals = 2000) {
    static const double kron_nodes[8] = {
        0.0,
        0.2077849550078985,
        0.4058451513773972,
        0.5860872354676911,
        0.7415311855993945,
        0.8648644233597691,
        0.9491079123427585,
        0.9914553711208126,
    };
    static const double kron_weights[8] = {
        0.2094821410847278,
        0.2044329400752989,
        0.1903505780647854,
        0.1690047266392679,
        0.1406532597155259,
        0.1047900103222502,
        0.06309209262997855,
        0.02293532201052922,
    };
    // Gauss nodes are the odd-index Kronrod nodes (0, 2, 4, 6 above).
    static const double gauss_weights[4] = {
        0.4179591836734694,
        0.3818300505051189,
        0.2797053914892767,
        0.1294849661688697,
    };

    struct Piece {
        double a, b, value, error;
    };
    auto rule = [&](double lo, double hi) {
        const double c = 0.5 * (lo + hi);
        const double h = 0.5 * (hi - lo);
        double fk[8][2];
        for (int i = 0; i < 8; ++i) {
            fk[i][0] = f(c - h * kron_nodes[i]);
            fk[i][1] = f(c + h * kron_nodes[i]);
        }
        double kron = kron_weights[0] * fk[0][0];
        for (int i = 1; i < 8; ++i) {
            kron += kron_weights[i] * (fk[i][0] + fk[i][1]);
        }
        double gauss = gauss_weights[0] * fk[0][0];
        for (int i = 1; i < 4; ++i) {
            gauss += gauss_weights[i] * (fk[2 * i][0] + fk[2 * i][1]);
        }
        Piece p;
        p.a = lo;
        p.b = hi;
        p.value = kron * h;
        p.error = std::abs(kron - gauss) * h;
        return p;
    };

    if (!(b > a)) {
        throw std::invalid_argument("integrate_adaptive: need b > a");
    }
    std::vector<Piece> pieces{rule(a, b)};
    for (int iter = 0; iter < max_intervals; ++iter) {
        double total = 0.0, err = 0.0;
        std::size_t worst = 0;
        for (std::size_t i = 0; i < pieces.size(); ++i) {
            total += pieces[i].value;
            err += pieces[i].error;
            if (pieces[i].error > pieces[worst].error) worst = i;
        }
        if (err <= rel_tol * std::max(std::abs(total), 1e-300)) {
            return total;
        }
        const Piece w = pieces[worst];
        pieces[worst] = rule(w.a, 0.5 * (w.a + w.b));
        pieces.push_back(rule(0.5 * (w.a + w.b), w.b));
    }
    throw NumericalError("integrate_adaptive: no convergence after " +
                         std::to_string(max_intervals) + " subdivisions");
}

}  // namespace omht
