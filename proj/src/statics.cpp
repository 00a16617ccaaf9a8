#include "selfcontrol/statics.hpp"

#include <algorithm>
#include <stdexcept>

namespace selfcontrol {

std::vector<SweepRecord> sweep_willpower(const ProblemInstance& inst, std::span<const double> w_grid,
                                         const SolverOptions& opts) {
    const auto* base = std::get_if<PiecewiseLinear>(&inst.cost());
    if (base == nullptr) throw std::invalid_argument("sweep_willpower requires a piecewise-linear cost");
    for (std::size_t i = 0; i < w_grid.size(); ++i) {
        if (!(w_grid[i] >= 0.0)) throw std::invalid_argument("sweep_willpower: w must be nonnegative");
        if (i > 0 && !(w_grid[i] > w_grid[i - 1]))
            throw std::invalid_argument("sweep_willpower: w grid must be strictly increasing");
    }
    if (w_grid.empty()) return {};

    std::vector<double> grid(w_grid.begin(), w_grid.end());
    const WillpowerRegime probe = classify_willpower(inst, opts);
    for (double t : probe.thresholds)
        if (t >= grid.front() && t <= w_grid.back()) grid.push_back(t);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    std::vector<SweepRecord> out;
    out.reserve(grid.size());
    for (double w : grid) {
        const ProblemInstance at_w = inst.with_cost(PiecewiseLinear{base->l, base->k, w});
        const Solution sol = optimal_contract(at_w, opts);
        const WillpowerRegime cls = classify_willpower(at_w, opts);
        const Alternative& sold = at_w.alternative(sol.sold);
        out.push_back({w, cls.case_index, sold.id, excess_temptation(sold), sold.u, sol.price, sol.profit, sol.welfare,
                       sol.kind()});
    }
    return out;
}

std::vector<CurvePoint> contract_curve(std::span<const SweepRecord> records) {
    std::vector<const SweepRecord*> by_w;
    for (const auto& r : records) by_w.push_back(&r);
    std::stable_sort(by_w.begin(), by_w.end(), [](const auto* a, const auto* b) { return a->w < b->w; });
    std::vector<CurvePoint> out;
    out.reserve(records.size());
    for (const auto* r : by_w) out.push_back({r->e_sold, r->price - r->u_sold});
    return out;
}

}  // namespace selfcontrol
