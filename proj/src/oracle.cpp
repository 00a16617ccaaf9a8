#include "selfcontrol/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

namespace selfcontrol {

namespace {

constexpr double kMaxPointsPerAlternative = 1e4;

std::vector<std::vector<std::size_t>> subsets_of_size(std::size_t n, std::size_t s) {
    std::vector<std::vector<std::size_t>> out;
    if (s > n) return out;
    std::vector<std::size_t> idx(s);
    for (std::size_t i = 0; i < s; ++i) idx[i] = i;
    while (true) {
        out.push_back(idx);
        std::size_t i = s;
        while (i > 0 && idx[i - 1] == n - s + (i - 1)) --i;
        if (i == 0) break;
        ++idx[i - 1];
        for (std::size_t j = i; j < s; ++j) idx[j] = idx[j - 1] + 1;
    }
    return out;
}

double choose(std::size_t n, std::size_t k) {
    double r = 1.0;
    for (std::size_t i = 0; i < k; ++i) r = r * static_cast<double>(n - i) / static_cast<double>(i + 1);
    return r;
}

class Search {
public:
    Search(const ProblemInstance& inst, const GridSpec& grid, const SolverOptions& opts)
        : inst_(inst), grid_(grid), opts_(opts) {
        for (std::size_t a = 0; a < inst.size(); ++a) points_.push_back(price_points(inst, a, grid, opts));
    }

    GridSearchResult run() {
        const auto max_size = static_cast<std::size_t>(grid_.max_menu_size);
        for (std::size_t a = 0; a < inst_.size(); ++a) {
            menu_.assign(1, make_offer(inst_, a, 0.0));
            for (double p : points_[a]) {
                menu_[0].price = p;
                evaluate(0);
            }
        }
        for (std::size_t s = 2; s <= max_size; ++s)
            for (const auto& subset : subsets_of_size(inst_.size(), s)) search_subset(subset);
        return best_;
    }

private:
    void search_subset(const std::vector<std::size_t>& subset) {
        menu_.clear();
        for (auto a : subset) menu_.push_back(make_offer(inst_, a, 0.0));
        free_.clear();

        if (grid_.exhaustive) {
            for (std::size_t i = 0; i < menu_.size(); ++i) free_.push_back(i);
            enumerate(0, std::nullopt);
            return;
        }
        // Roles only matter when the credited offer is fixed in advance.
        const std::size_t n_roles = grid_.epsilon_discount ? menu_.size() : 1;
        for (std::size_t j = 0; j < n_roles; ++j) {
            for (std::size_t b = 0; b < menu_.size(); ++b) {
                if (grid_.epsilon_discount && b == j) continue;
                const auto& pts = points_[menu_[b].index];
                const double u_b = menu_[b].alternative.u;
                auto top = std::upper_bound(pts.begin(), pts.end(), u_b + opts_.choice.tie_tolerance);
                if (top == pts.begin()) continue;
                menu_[b].price = *std::prev(top);
                free_.clear();
                for (std::size_t i = 0; i < menu_.size(); ++i)
                    if (i != b) free_.push_back(i);
                enumerate(0, grid_.epsilon_discount ? std::optional<std::size_t>(j) : std::nullopt);
            }
        }
    }

    void enumerate(std::size_t depth, std::optional<std::size_t> role) {
        if (depth == free_.size()) {
            if (role) {
                evaluate(*role);
            } else {
                for (std::size_t j = 0; j < menu_.size(); ++j) {
                    evaluate(j);
                    if (!grid_.epsilon_discount) break;
                }
            }
            return;
        }
        Offer& o = menu_[free_[depth]];
        for (double p : points_[o.index]) {
            o.price = p;
            enumerate(depth + 1, role);
        }
    }

    // Credits the realized outcome; in discount mode only `role` can be credited.
    void evaluate(std::size_t role) {
        ++best_.evaluations;
        if (!grid_.epsilon_discount) {
            const Outcome out = realized_outcome(menu_, inst_.cost(), opts_.choice);
            if (out.chosen && out.profit > best_.profit) record(*out.chosen, out.profit, out.welfare);
            return;
        }
        const double list_price = menu_[role].price;
        menu_[role].price = list_price - grid_.discount;
        const Outcome out = realized_outcome(menu_, inst_.cost(), ChoiceOptions{0.0});
        if (out.chosen == role && out.profit > best_.profit) record(role, out.profit, out.welfare);
        menu_[role].price = list_price;
    }

    void record(std::size_t chosen, double profit, double welfare) {
        best_.menu = menu_;
        if (grid_.epsilon_discount) best_.menu[chosen].price -= grid_.discount;
        best_.chosen = chosen;
        best_.profit = profit;
        best_.welfare = welfare;
    }

    const ProblemInstance& inst_;
    const GridSpec& grid_;
    const SolverOptions& opts_;
    std::vector<std::vector<double>> points_;
    std::vector<Offer> menu_;
    std::vector<std::size_t> free_;
    GridSearchResult best_{{}, 0, -std::numeric_limits<double>::infinity(), 0.0, 0};
};

}  // namespace

void validate_grid(const GridSpec& grid, std::size_t n_alternatives, double max_evaluations) {
    if (!(grid.price_step > 0.0) || !std::isfinite(grid.price_step))
        throw std::invalid_argument("grid: price_step must be positive");
    if (!(grid.price_min < grid.price_max) || !std::isfinite(grid.price_min) || !std::isfinite(grid.price_max))
        throw std::invalid_argument("grid: requires finite price_min < price_max");
    if (grid.max_menu_size < 1 || grid.max_menu_size > 4)
        throw std::invalid_argument("grid: max_menu_size must be in 1..4");
    const double points = std::floor((grid.price_max - grid.price_min) / grid.price_step + 1e-9) + 1.0;
    if (points - 1.0 > kMaxPointsPerAlternative) {
        std::ostringstream msg;
        msg << "grid has " << points << " points per alternative (limit " << kMaxPointsPerAlternative + 1 << ')';
        throw GridTooLarge(msg.str());
    }

    const double n = points + 4.0;  // analytic prices
    const double roles = grid.epsilon_discount ? 1.0 : 0.0;
    double work = static_cast<double>(n_alternatives) * n;
    for (int s = 2; s <= grid.max_menu_size; ++s) {
        const double subsets = choose(n_alternatives, static_cast<std::size_t>(s));
        const double per_subset = grid.exhaustive ? std::pow(n, s) * (roles > 0 ? s : 1)
                                                  : s * (roles > 0 ? s - 1 : 1) * std::pow(n, s - 1);
        work += subsets * per_subset;
    }
    if (work > max_evaluations) {
        std::ostringstream msg;
        msg << "grid search would evaluate about " << work << " menus (limit " << max_evaluations << ')';
        throw GridTooLarge(msg.str());
    }
}

std::vector<double> price_points(const ProblemInstance& inst, std::size_t alt, const GridSpec& grid,
                                 const SolverOptions& opts) {
    const auto n = static_cast<long>(std::floor((grid.price_max - grid.price_min) / grid.price_step + 1e-9));
    std::vector<double> pts;
    pts.reserve(static_cast<std::size_t>(n) + 5);
    for (long i = 0; i <= n; ++i) pts.push_back(grid.price_min + static_cast<double>(i) * grid.price_step);

    if (grid.include_analytic_prices) {
        pts.push_back(inst.alternative(alt).u);
        if (alt != inst.bait()) pts.push_back(indulging_contract(alt, inst, opts).price);
        if (alt != inst.bait() && alt != inst.decoy()) pts.push_back(compromising_contract(alt, inst, opts).price);
        if (alt == inst.decoy()) pts.push_back(price_of_z(inst, opts).root);
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

GridSearchResult grid_search(const ProblemInstance& inst, const GridSpec& grid, const SolverOptions& opts) {
    validate_grid(grid, inst.size());
    return Search(inst, grid, opts).run();
}

Solution grid_best_contract(const ProblemInstance& inst, const GridSpec& grid, const SolverOptions& opts) {
    if (grid.max_menu_size > 3) throw std::invalid_argument("grid_best_contract: menus hold at most three offers");
    GridSearchResult r = grid_search(inst, grid, opts);
    if (r.menu.empty()) throw std::runtime_error("no menu on the grid is accepted by the consumer");
    const Offer sold = r.menu[r.chosen];
    Solution s{Contract(std::move(r.menu), r.chosen), sold.index, sold.price, r.profit, r.welfare, {}, {}};
    s.notes.push_back("evaluated " + std::to_string(r.evaluations) + " menus");
    return s;
}

bool VerificationReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

std::vector<std::string> VerificationReport::failures() const {
    std::vector<std::string> out;
    for (const auto& c : checks)
        if (!c.passed) out.push_back(c.name);
    return out;
}

VerificationReport verify_solution(const Solution& sol, const ProblemInstance& inst, const SolverOptions& opts) {
    constexpr double kSlack = 1e-8;
    VerificationReport report;
    const auto menu = sol.contract.offers();
    const std::size_t intended = sol.contract.intended();
    const CostFunction& cost = inst.cost();

    auto fmt = [](double x) {
        std::ostringstream s;
        s.precision(12);
        s << x;
        return s.str();
    };

    report.checks.push_back({"participation", accepts(menu, opts.choice),
                             "perceived utility " + fmt(menu[perceived_choice(menu, opts.choice)].perceived_utility())});

    const std::size_t taken = actual_choice(menu, cost, opts.choice);
    report.checks.push_back({"intended_chosen", taken == intended, "consumer takes '" + menu[taken].alternative.id + "'"});

    const Outcome out = realized_outcome(menu, cost, opts.choice);
    const double credited = menu[intended].margin();
    report.checks.push_back({"profit", std::abs(credited - sol.profit) <= kSlack && out.chosen.has_value(),
                             "replayed " + fmt(credited) + " vs reported " + fmt(sol.profit)});

    const double u_sold = overall_utility(menu, intended, cost);
    report.checks.push_back({"welfare", std::abs(u_sold - sol.welfare) <= kSlack,
                             "replayed " + fmt(u_sold) + " vs reported " + fmt(sol.welfare)});

    for (std::size_t i = 0; i < menu.size(); ++i) {
        if (i == intended) continue;
        const double slack = u_sold - overall_utility(menu, i, cost);
        std::string name = "sold_over_" + menu[i].alternative.id;
        if (menu[i].index == inst.bait()) name = "sold_over_bait";
        else if (menu[i].index == inst.decoy()) name = "sold_over_decoy";
        report.checks.push_back({name, slack >= -kSlack, "slack " + fmt(slack)});
    }

    double worst = 0.0;
    for (double r : sol.residuals) worst = std::max(worst, std::abs(r));
    report.checks.push_back({"residuals", worst <= opts.tolerance, "max |residual| " + fmt(worst)});
    return report;
}

}  // namespace selfcontrol
