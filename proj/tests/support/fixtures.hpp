#pragma once

#include <optional>
#include <random>
#include <vector>

#include "selfcontrol/model.hpp"

namespace selfcontrol::testing {

// A(10,10,5), B(8,14,5), C(2,16,5): y* = A, z* = C, x^u = A, x^v = C.
inline std::vector<Alternative> running_alternatives() {
    return {{"A", 10, 10, 5}, {"B", 8, 14, 5}, {"C", 2, 16, 5}};
}

inline ProblemInstance running_instance(double w = 1.0) {
    return {running_alternatives(), PiecewiseLinear{0.5, 2.0, w}};
}

struct RandomSpec {
    std::size_t min_size = 3;
    std::size_t max_size = 8;
    double value_lo = 0.0;
    double value_hi = 20.0;
};

// Valid random piecewise-linear instances: u, v, c ~ U[0, 20], k ~ U(1, 5),
// l ~ U(0, 1), w ~ U[0, 15]. Draws violating the uniqueness assumptions are redrawn.
class InstanceGenerator {
public:
    explicit InstanceGenerator(std::uint64_t seed, RandomSpec spec = {}) : rng_(seed), spec_(spec) {}

    std::vector<Alternative> alternatives(std::size_t n) {
        std::uniform_real_distribution<double> value(spec_.value_lo, spec_.value_hi);
        std::vector<Alternative> out;
        for (std::size_t i = 0; i < n; ++i)
            out.push_back({std::string(1, static_cast<char>('A' + i)), value(rng_), value(rng_), value(rng_)});
        return out;
    }

    PiecewiseLinear piecewise() {
        std::uniform_real_distribution<double> k(1.0, 5.0), l(0.0, 1.0), w(0.0, 15.0);
        PiecewiseLinear f{l(rng_), k(rng_), w(rng_)};
        while (!(f.l > 0.0)) f.l = l(rng_);
        while (!(f.k > 1.0)) f.k = k(rng_);
        return f;
    }

    ProblemInstance next(const std::optional<CostFunction>& cost = std::nullopt) {
        std::uniform_int_distribution<std::size_t> size(spec_.min_size, spec_.max_size);
        while (true) {
            try {
                const CostFunction f = cost ? *cost : CostFunction{piecewise()};
                return ProblemInstance(alternatives(size(rng_)), f);
            } catch (const ValidationError&) {
            }
        }
    }

    std::mt19937_64& rng() { return rng_; }

private:
    std::mt19937_64 rng_;
    RandomSpec spec_;
};

}  // namespace selfcontrol::testing
