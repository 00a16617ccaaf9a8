#include "selfcontrol/model.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <sstream>

namespace selfcontrol {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

// All indices attaining the extreme value of key (exact comparison).
std::vector<std::size_t> extremes(std::span<const Alternative> alts,
                                  const std::function<double(const Alternative&)>& key, bool maximize) {
    std::vector<std::size_t> out;
    double best = 0.0;
    for (std::size_t i = 0; i < alts.size(); ++i) {
        const double value = key(alts[i]);
        if (out.empty() || (maximize ? value > best : value < best)) {
            best = value;
            out.assign(1, i);
        } else if (value == best) {
            out.push_back(i);
        }
    }
    return out;
}

std::size_t require_unique(std::span<const Alternative> alts, const std::vector<std::size_t>& idx,
                           std::string_view what) {
    if (idx.size() == 1) return idx.front();
    std::ostringstream msg;
    msg << what << " is not unique; tied alternatives:";
    for (auto i : idx) msg << ' ' << alts[i].id;
    throw ValidationError(msg.str());
}

double scale_of(double x) noexcept { return std::max(1.0, std::abs(x)); }

}  // namespace

double excess_temptation(const Alternative& a) noexcept { return a.v - a.u; }

double phi_eval(const CostFunction& cost, double t) noexcept {
    if (!(t > 0.0)) return 0.0;
    return std::visit(overloaded{
                          [t](const PiecewiseLinear& f) { return t <= f.w ? f.l * t : f.k * (t - f.w) + f.l * f.w; },
                          [t](const Power& f) { return f.alpha * std::pow(t, f.gamma); },
                      },
                      cost);
}

void validate_cost(const CostFunction& cost) {
    std::visit(overloaded{
                   [](const PiecewiseLinear& f) {
                       if (!std::isfinite(f.l) || !std::isfinite(f.k) || !std::isfinite(f.w))
                           throw ValidationError("piecewise-linear cost: parameters must be finite");
                       if (!(f.k > 1.0 && 1.0 > f.l && f.l > 0.0))
                           throw ValidationError("piecewise-linear cost: requires k > 1 > l > 0");
                       if (!(f.w >= 0.0)) throw ValidationError("piecewise-linear cost: requires w >= 0");
                   },
                   [](const Power& f) {
                       if (!std::isfinite(f.alpha) || !std::isfinite(f.gamma))
                           throw ValidationError("power cost: parameters must be finite");
                       if (!(f.alpha > 0.0)) throw ValidationError("power cost: requires alpha > 0");
                       if (!(f.gamma >= 1.0)) throw ValidationError("power cost: requires gamma >= 1");
                   },
               },
               cost);
}

bool is_strictly_convex(const CostFunction& cost) noexcept {
    const auto* p = std::get_if<Power>(&cost);
    return p != nullptr && p->gamma > 1.0;
}

std::string describe(const CostFunction& cost) {
    std::ostringstream out;
    out.precision(12);
    std::visit(overloaded{
                   [&](const PiecewiseLinear& f) { out << "piecewise_linear(l=" << f.l << ", k=" << f.k << ", w=" << f.w << ')'; },
                   [&](const Power& f) { out << "power(alpha=" << f.alpha << ", gamma=" << f.gamma << ')'; },
               },
               cost);
    return out.str();
}

ProblemInstance::ProblemInstance(std::vector<Alternative> alternatives, CostFunction cost)
    : alternatives_(std::move(alternatives)), cost_(cost) {
    validate_cost(cost_);
    if (alternatives_.empty()) throw ValidationError("instance has no alternatives");

    std::set<std::string> seen;
    for (std::size_t i = 0; i < alternatives_.size(); ++i) {
        const auto& a = alternatives_[i];
        if (a.id.empty()) throw ValidationError("alternatives[" + std::to_string(i) + "]: empty id");
        if (!seen.insert(a.id).second) throw ValidationError("duplicate alternative id '" + a.id + "'");
        if (!std::isfinite(a.u) || !std::isfinite(a.v) || !std::isfinite(a.c))
            throw ValidationError("alternative '" + a.id + "': u, v and c must be finite");
    }

    const auto surplus_u = [](const Alternative& a) { return a.u - a.c; };
    const auto surplus_v = [](const Alternative& a) { return a.v - a.c; };
    x_u_ = require_unique(alternatives_, extremes(alternatives_, surplus_u, true), "maximizer of u - c (x^u)");
    x_v_ = require_unique(alternatives_, extremes(alternatives_, surplus_v, true), "maximizer of v - c (x^v)");
    if (x_u_ == x_v_)
        throw ValidationError("x^u and x^v coincide (alternative '" + alternatives_[x_u_].id +
                              "'); the problem needs distinct efficient alternatives");
    z_star_ = require_unique(alternatives_, extremes(alternatives_, excess_temptation, true),
                             "maximizer of excess temptation (z*)");
    y_star_ = require_unique(alternatives_, extremes(alternatives_, excess_temptation, false),
                             "minimizer of excess temptation (y*)");
}

std::optional<std::size_t> ProblemInstance::find(std::string_view id) const {
    for (std::size_t i = 0; i < alternatives_.size(); ++i)
        if (alternatives_[i].id == id) return i;
    return std::nullopt;
}

ProblemInstance ProblemInstance::with_cost(CostFunction cost) const { return {alternatives_, cost}; }

std::string_view to_string(ContractKind kind) noexcept {
    switch (kind) {
        case ContractKind::Commitment: return "commitment";
        case ContractKind::Indulging: return "indulging";
        case ContractKind::Compromising: return "compromising";
    }
    return "unknown";
}

ContractKind Contract::kind_for_size(std::size_t n) {
    switch (n) {
        case 1: return ContractKind::Commitment;
        case 2: return ContractKind::Indulging;
        case 3: return ContractKind::Compromising;
        default: throw std::invalid_argument("a contract holds one to three offers");
    }
}

Contract::Contract(std::vector<Offer> offers, std::size_t intended)
    : offers_(std::move(offers)), intended_(intended), kind_(kind_for_size(offers_.size())) {
    if (intended_ >= offers_.size()) throw std::out_of_range("intended offer out of range");
    for (std::size_t i = 0; i < offers_.size(); ++i) {
        if (!std::isfinite(offers_[i].price)) throw std::invalid_argument("offer price must be finite");
        for (std::size_t j = i + 1; j < offers_.size(); ++j)
            if (offers_[i].index == offers_[j].index)
                throw std::invalid_argument("contract offers alternative '" + offers_[i].alternative.id + "' twice");
    }
}

double overall_utility(std::span<const Offer> menu, std::size_t i, const CostFunction& cost) {
    double most_tempting = menu.front().temptation_value();
    for (const auto& o : menu) most_tempting = std::max(most_tempting, o.temptation_value());
    return menu[i].perceived_utility() - phi_eval(cost, most_tempting - menu[i].temptation_value());
}

namespace {

// Monopolist-favourable argmax over precomputed utilities.
std::size_t favourable_argmax(std::span<const Offer> menu, std::span<const double> utility, double tol) {
    double best = utility[0];
    for (double x : utility) best = std::max(best, x);
    const double cutoff = best - tol * scale_of(best);
    std::size_t pick = menu.size();
    for (std::size_t i = 0; i < menu.size(); ++i) {
        if (utility[i] < cutoff) continue;
        if (pick == menu.size()) {
            pick = i;
            continue;
        }
        const double m = menu[i].margin();
        const double pm = menu[pick].margin();
        if (m > pm || (m == pm && menu[i].index < menu[pick].index)) pick = i;
    }
    return pick;
}

constexpr std::size_t kMaxMenu = 8;

}  // namespace

std::size_t actual_choice(std::span<const Offer> menu, const CostFunction& cost, ChoiceOptions opts) {
    if (menu.empty()) throw std::invalid_argument("actual_choice: empty menu");
    if (menu.size() > kMaxMenu) throw std::invalid_argument("actual_choice: menu too large");
    double most_tempting = menu.front().temptation_value();
    for (const auto& o : menu) most_tempting = std::max(most_tempting, o.temptation_value());
    double utility[kMaxMenu];
    for (std::size_t i = 0; i < menu.size(); ++i)
        utility[i] = menu[i].perceived_utility() - phi_eval(cost, most_tempting - menu[i].temptation_value());
    return favourable_argmax(menu, std::span<const double>(utility, menu.size()), opts.tie_tolerance);
}

const Offer& actual_choice(const Contract& contract, const CostFunction& cost, ChoiceOptions opts) {
    return contract.offers()[actual_choice(contract.offers(), cost, opts)];
}

std::size_t perceived_choice(std::span<const Offer> menu, ChoiceOptions opts) {
    if (menu.empty()) throw std::invalid_argument("perceived_choice: empty menu");
    if (menu.size() > kMaxMenu) throw std::invalid_argument("perceived_choice: menu too large");
    double utility[kMaxMenu];
    for (std::size_t i = 0; i < menu.size(); ++i) utility[i] = menu[i].perceived_utility();
    return favourable_argmax(menu, std::span<const double>(utility, menu.size()), opts.tie_tolerance);
}

const Offer& perceived_choice(const Contract& contract, ChoiceOptions opts) {
    return contract.offers()[perceived_choice(contract.offers(), opts)];
}

bool accepts(std::span<const Offer> menu, ChoiceOptions opts) {
    if (menu.empty()) return false;
    double best = menu.front().perceived_utility();
    for (const auto& o : menu) best = std::max(best, o.perceived_utility());
    return best >= -opts.tie_tolerance;
}

bool accepts(const Contract& contract, ChoiceOptions opts) { return accepts(contract.offers(), opts); }

Outcome realized_outcome(std::span<const Offer> menu, const CostFunction& cost, ChoiceOptions opts) {
    if (!accepts(menu, opts)) return {};
    const std::size_t pick = actual_choice(menu, cost, opts);
    return {menu[pick].margin(), overall_utility(menu, pick, cost), pick};
}

Outcome realized_outcome(const Contract& contract, const CostFunction& cost, ChoiceOptions opts) {
    return realized_outcome(contract.offers(), cost, opts);
}

}  // namespace selfcontrol
