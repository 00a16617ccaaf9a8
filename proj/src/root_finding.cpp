#include "selfcontrol/root_finding.hpp"

#include <algorithm>
#include <sstream>

namespace selfcontrol {

RootResult solve_monotone_price(const std::function<double(double)>& g, Bracket hint, double tolerance) {
    double lo = std::min(hint.lo, hint.hi);
    double hi = std::max(hint.lo, hint.hi);
    double g_lo = g(lo);
    double g_hi = g(hi);

    double width = std::max(hi - lo, 1.0);
    for (int expansion = 0; (g_lo > 0.0 || g_hi < 0.0) && expansion < 60; ++expansion) {
        if (g_lo > 0.0) {
            lo -= width;
            g_lo = g(lo);
        }
        if (g_hi < 0.0) {
            hi += width;
            g_hi = g(hi);
        }
        width *= 2.0;
    }
    if (!(g_lo <= 0.0 && g_hi >= 0.0)) {
        std::ostringstream msg;
        msg << "no sign change on [" << lo << ", " << hi << "] (g = " << g_lo << ", " << g_hi << ')';
        throw BracketFailure(msg.str());
    }

    int iterations = 0;
    while (g_lo != 0.0 && g_hi != 0.0) {
        const double mid = lo + 0.5 * (hi - lo);
        if (mid <= lo || mid >= hi) break;
        const double g_mid = g(mid);
        ++iterations;
        if (g_mid <= 0.0) {
            lo = mid;
            g_lo = g_mid;
        } else {
            hi = mid;
            g_hi = g_mid;
        }
    }

    RootResult result = std::abs(g_lo) <= std::abs(g_hi) ? RootResult{lo, g_lo, iterations}
                                                          : RootResult{hi, g_hi, iterations};
    if (!(std::abs(result.residual) <= tolerance)) {
        std::ostringstream msg;
        msg << "bisection stalled at p = " << result.root << " with residual " << result.residual
            << " above tolerance " << tolerance;
        throw SolverError(msg.str());
    }
    return result;
}

RootResult solve_temptation_price(double a, double b, const CostFunction& cost, double tolerance) {
    // g(a) = -phi(b - a) <= 0 and g(a + phi(b - a)) >= 0 since phi is nondecreasing.
    const double reach = phi_eval(cost, std::max(b - a, 0.0));
    return solve_monotone_price([&](double p) { return p - a - phi_eval(cost, b - p); }, {a, a + reach},
                                tolerance);
}

RootResult solve_compromise_price(double a, double b, const CostFunction& cost, double tolerance) {
    const double reach = phi_eval(cost, std::max(a - b, 0.0));
    return solve_monotone_price([&](double p) { return p - a + phi_eval(cost, p - b); }, {a - reach, a},
                                tolerance);
}

}  // namespace selfcontrol
