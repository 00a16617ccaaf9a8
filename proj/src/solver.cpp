#include "selfcontrol/solver.hpp"

#include <cmath>
#include <sstream>

namespace selfcontrol {

namespace {

const PiecewiseLinear& require_piecewise(const ProblemInstance& inst, std::string_view who) {
    const auto* f = std::get_if<PiecewiseLinear>(&inst.cost());
    if (f == nullptr) throw std::invalid_argument(std::string(who) + " requires a piecewise-linear cost");
    return *f;
}

Solution finish(const ProblemInstance& inst, std::vector<Offer> offers, std::vector<double> residuals,
                const SolverOptions& opts) {
    Contract contract(std::move(offers), 0);
    const Offer& sold = contract.intended_offer();
    Solution s{contract, sold.index, sold.price, sold.margin(),
               overall_utility(contract.offers(), 0, inst.cost()), std::move(residuals), {}};
    const Offer& taken = actual_choice(s.contract, inst.cost(), opts.choice);
    if (taken.index != sold.index)
        s.notes.push_back("consumer's tie-break selects '" + taken.alternative.id + "' over the intended '" +
                          sold.alternative.id + "'");
    return s;
}

// Index with the largest score; scores within tol of each other are reported as ties.
std::vector<std::size_t> top_scorers(const std::vector<double>& score, double tol) {
    double best = score.front();
    for (double s : score) best = std::max(best, s);
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < score.size(); ++i)
        if (score[i] >= best - tol) out.push_back(i);
    return out;
}

// Equal revenue goes to the smaller menu only while the decoy sits where phi has
// its small slope (w large). With the decoy past the kink, the compromise is the
// optimum of its regime even when the prices coincide, as at w = 0.
bool decoy_binds(const ProblemInstance& inst) {
    const auto* f = std::get_if<PiecewiseLinear>(&inst.cost());
    if (f == nullptr) return false;
    const double gap = excess_temptation(inst.alternative(inst.decoy())) -
                       excess_temptation(inst.alternative(inst.bait()));
    return gap > (1.0 + f->l) * f->w;
}

}  // namespace

Offer make_offer(const ProblemInstance& inst, std::size_t alt, double price) {
    return {alt, inst.alternative(alt), price};
}

Solution commitment_contract(std::size_t x, const ProblemInstance& inst) {
    const auto& a = inst.alternative(x);
    return finish(inst, {make_offer(inst, x, a.u)}, {}, {});
}

Solution indulging_contract(std::size_t x, const ProblemInstance& inst, const SolverOptions& opts) {
    const std::size_t y = inst.bait();
    if (x == y) {
        Solution s = commitment_contract(x, inst);
        s.notes.push_back("degenerate bait: the alternative is y* itself; commitment contract returned");
        return s;
    }
    const auto& a = inst.alternative(x);
    const double e_y = excess_temptation(inst.alternative(y));
    const RootResult root = solve_temptation_price(a.u, a.v - e_y, inst.cost(), opts.tolerance);
    return finish(inst, {make_offer(inst, x, root.root), make_offer(inst, y, inst.alternative(y).u)},
                  {root.residual}, opts);
}

RootResult price_of_z(const ProblemInstance& inst, const SolverOptions& opts) {
    const auto& z = inst.alternative(inst.decoy());
    const double e_y = excess_temptation(inst.alternative(inst.bait()));
    return solve_temptation_price(z.u, z.v - e_y, inst.cost(), opts.tolerance);
}

Solution compromising_contract(std::size_t x, const ProblemInstance& inst, const SolverOptions& opts) {
    const std::size_t y = inst.bait();
    const std::size_t z = inst.decoy();
    if (x == y || x == z)
        throw NotCompromisable("alternative '" + inst.alternative(x).id + "' is the bait or the decoy");

    const auto& a = inst.alternative(x);
    const auto& dz = inst.alternative(z);
    const RootResult pz = price_of_z(inst, opts);
    const RootResult px =
        solve_compromise_price(a.u + pz.root - dz.u, a.v - dz.v + pz.root, inst.cost(), opts.tolerance);
    return finish(inst,
                  {make_offer(inst, x, px.root), make_offer(inst, y, inst.alternative(y).u),
                   make_offer(inst, z, pz.root)},
                  {pz.residual, px.residual}, opts);
}

Solution best_contract_for(std::size_t x, const ProblemInstance& inst, const SolverOptions& opts) {
    Solution best = commitment_contract(x, inst);
    if (x == inst.bait()) return best;
    if (Solution ind = indulging_contract(x, inst, opts); ind.profit > best.profit + opts.tie_tolerance)
        best = std::move(ind);
    if (x == inst.decoy()) return best;
    Solution comp = compromising_contract(x, inst, opts);
    const bool tie = comp.profit >= best.profit - opts.tie_tolerance;
    if (comp.profit > best.profit + opts.tie_tolerance || (tie && decoy_binds(inst))) best = std::move(comp);
    return best;
}

Solution optimal_contract(const ProblemInstance& inst, const SolverOptions& opts) {
    Solution best = best_contract_for(0, inst, opts);
    for (std::size_t x = 1; x < inst.size(); ++x) {
        Solution s = best_contract_for(x, inst, opts);
        if (s.profit > best.profit + opts.tie_tolerance) best = std::move(s);
    }
    return best;
}

ClosedForm closed_form_piecewise(std::size_t x, const ProblemInstance& inst) {
    const PiecewiseLinear& f = require_piecewise(inst, "closed_form_piecewise");
    const double l = f.l, k = f.k, w = f.w;
    const double reach = (1.0 + l) * w;

    const auto& a = inst.alternative(x);
    const auto& z = inst.alternative(inst.decoy());
    const double e_x = excess_temptation(a);
    const double e_y = excess_temptation(inst.alternative(inst.bait()));
    const double e_z = excess_temptation(z);

    ClosedForm cf;
    if (e_x - e_y <= reach) {
        cf.ind_branch = Branch::Linear;
        cf.p_ind = (a.u + l * (a.v - e_y)) / (1.0 + l);
    } else {
        cf.ind_branch = Branch::Kink;
        cf.p_ind = (a.u + k * (a.v - e_y - w) + l * w) / (1.0 + k);
    }

    if (e_z - e_y <= reach) {
        cf.z_branch = Branch::Linear;
        cf.p_z = (z.u + l * (z.v - e_y)) / (1.0 + l);
        cf.comp_branch = CompromiseBranch::SameAsIndulging;
        cf.p_comp = cf.p_ind;
        return cf;
    }

    cf.z_branch = Branch::Kink;
    cf.p_z = (z.u + k * (z.v - e_y - w) + l * w) / (1.0 + k);
    if (e_z - e_x <= reach) {
        cf.comp_branch = CompromiseBranch::Linear;
        cf.p_comp = (a.u + l * a.v) / (1.0 + l) + (k - l) / ((1.0 + k) * (1.0 + l)) * e_z - k / (1.0 + k) * e_y -
                    (k - l) / (1.0 + k) * w;
    } else {
        cf.comp_branch = CompromiseBranch::Kink;
        cf.p_comp = (a.u + k * a.v) / (1.0 + k) - k / (1.0 + k) * e_y;
    }
    return cf;
}

WillpowerRegime classify_willpower(const ProblemInstance& inst, const SolverOptions& opts) {
    const PiecewiseLinear& f = require_piecewise(inst, "classify_willpower");
    const double l = f.l, k = f.k;
    const double reach = (1.0 + l) * f.w;
    const auto alts = inst.alternatives();
    const std::size_t y = inst.bait();
    const std::size_t z = inst.decoy();
    const double e_y = excess_temptation(alts[y]);
    const double e_z = excess_temptation(alts[z]);

    auto argmax_of = [&](double weight) {
        std::vector<double> score;
        for (const auto& a : alts) score.push_back((a.u + weight * a.v) / (1.0 + weight) - a.c);
        return top_scorers(score, opts.tie_tolerance);
    };
    auto tie_error = [&](std::string_view name, const std::vector<std::size_t>& top) {
        std::ostringstream msg;
        msg << name << " is not unique; tied alternatives:";
        for (auto i : top) msg << ' ' << alts[i].id;
        return AssumptionViolated(msg.str());
    };

    WillpowerRegime out;
    const auto top_k = argmax_of(k);
    const auto top_l = argmax_of(l);
    if (top_k.size() != 1) throw tie_error("x_k", top_k);
    out.x_k = top_k.front();
    out.x_l = top_l.front();
    if (top_l.size() > 1) {
        std::ostringstream msg;
        msg << "x_l tied between";
        for (auto i : top_l) msg << ' ' << alts[i].id;
        msg << "; lowest index taken";
        out.notes.push_back(msg.str());
    }

    const double gap_k = e_z - excess_temptation(alts[out.x_k]);
    const double gap_l = e_z - excess_temptation(alts[out.x_l]);
    const double gap_y = e_z - e_y;
    out.thresholds = {gap_k / (1.0 + l), gap_l / (1.0 + l), gap_y / (1.0 + l)};

    // Constrained maximization: each alternative priced by the formula of its own region.
    std::vector<double> cf_price(alts.size());
    for (std::size_t x = 0; x < alts.size(); ++x) cf_price[x] = closed_form_piecewise(x, inst).p_comp;
    std::size_t best = 0;
    for (std::size_t x = 1; x < alts.size(); ++x)
        if (cf_price[x] - alts[x].c > cf_price[best] - alts[best].c + opts.tie_tolerance) best = x;
    out.constrained_sold = best;
    out.constrained_price = cf_price[best];

    const auto& ak = alts[out.x_k];
    if (gap_y <= reach) {
        out.case_index = 4;
        out.sold = out.x_l;
        const auto& al = alts[out.sold];
        out.price = (al.u + l * (al.v - e_y)) / (1.0 + l);
    } else if (gap_k >= reach) {
        out.case_index = 1;
        out.sold = out.x_k;
        out.price = (ak.u + k * ak.v - k * e_y) / (1.0 + k);
    } else if (gap_l <= reach) {
        out.case_index = 3;
        out.sold = out.x_l;
        const auto& al = alts[out.sold];
        out.price = (al.u + l * al.v) / (1.0 + l) + (k - l) / ((1.0 + k) * (1.0 + l)) * e_z - k / (1.0 + k) * e_y -
                    (k - l) / (1.0 + k) * f.w;
    } else {
        out.case_index = 2;
        out.sold = out.constrained_sold;
        out.price = out.constrained_price;
    }

    const double predicted_profit = out.price - alts[out.sold].c;
    const double constrained_profit = out.constrained_price - alts[out.constrained_sold].c;
    if (std::abs(predicted_profit - constrained_profit) > 1e-8) {
        std::ostringstream msg;
        msg.precision(12);
        msg << "x_k/x_l prediction (" << alts[out.sold].id << ", profit " << predicted_profit
            << ") disagrees with the constrained maximization (" << alts[out.constrained_sold].id << ", profit "
            << constrained_profit << ')';
        out.notes.push_back(msg.str());
    }

    if (out.sold == y) {
        out.kind = ContractKind::Commitment;
    } else if (out.sold == z || out.case_index == 4) {
        out.kind = ContractKind::Indulging;
    } else {
        const ClosedForm cf = closed_form_piecewise(out.sold, inst);
        const bool tie = cf.p_comp >= cf.p_ind - opts.tie_tolerance;
        out.kind = cf.p_comp > cf.p_ind + opts.tie_tolerance || (tie && decoy_binds(inst)) ? ContractKind::Compromising
                                                                                         : ContractKind::Indulging;
    }
    return out;
}

}  // namespace selfcontrol
