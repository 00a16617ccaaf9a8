#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

#include "selfcontrol/model.hpp"

namespace selfcontrol {

/// Base for numerical failures in the solver.
class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// No sign change found even after expanding the bracket. Signals a violated
/// model assumption (the residual should be continuous and increasing).
class BracketFailure : public SolverError {
public:
    using SolverError::SolverError;
};

struct Bracket {
    double lo = 0.0;
    double hi = 0.0;
};

struct RootResult {
    double root = 0.0;
    double residual = 0.0;
    int iterations = 0;
};

/**
 * Bisection for a continuous, increasing residual g.
 *
 * The hint is checked for g(lo) <= 0 <= g(hi); if that fails the width is
 * doubled on the offending side, up to 60 times. Bisection then runs until
 * the bracket can no longer be split in floating point, and the endpoint
 * with the smaller |g| is returned. Throws BracketFailure if no sign change
 * is found and SolverError if the final |g| exceeds tolerance.
 */
RootResult solve_monotone_price(const std::function<double(double)>& g, Bracket hint, double tolerance = 1e-10);

/// Root of p - a - phi(b - p). Covers the indulging price and the decoy price.
RootResult solve_temptation_price(double a, double b, const CostFunction& cost, double tolerance = 1e-10);

/// Root of p - a + phi(p - b). Covers the compromise price.
RootResult solve_compromise_price(double a, double b, const CostFunction& cost, double tolerance = 1e-10);

}  // namespace selfcontrol
