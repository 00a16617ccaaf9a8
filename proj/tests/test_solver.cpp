#include <doctest.h>

#include <cmath>

#include "selfcontrol/solver.hpp"
#include "support/fixtures.hpp"

using namespace selfcontrol;
using selfcontrol::testing::InstanceGenerator;
using selfcontrol::testing::running_instance;

namespace {

constexpr std::size_t A = 0, B = 1, C = 2;

// Running instance with c(B) = 4.9, which breaks the A/B tie in the l-weighted score.
ProblemInstance perturbed_instance(double w) {
    return {{{"A", 10, 10, 5}, {"B", 8, 14, 4.9}, {"C", 2, 16, 5}}, PiecewiseLinear{0.5, 2.0, w}};
}

bool near(double a, double b, double tol = 1e-10) { return std::abs(a - b) <= tol; }

double e_of(const ProblemInstance& inst, std::size_t x) { return excess_temptation(inst.alternative(x)); }

}  // namespace

TEST_SUITE("solver") {

TEST_CASE("commitment prices at u") {
    const auto inst = running_instance();
    const auto b = commitment_contract(B, inst);
    CHECK(b.price == 8.0);
    CHECK(b.profit == 3.0);
    CHECK(b.kind() == ContractKind::Commitment);
    CHECK(commitment_contract(A, inst).profit == 5.0);
    CHECK(commitment_contract(C, inst).profit == -3.0);
    CHECK(b.residuals.empty());
}

TEST_CASE("indulging contract") {
    SUBCASE("kink branch at w = 1") {
        const auto s = indulging_contract(B, running_instance(1.0));
        CHECK(near(s.price, 11.5));
        CHECK(s.kind() == ContractKind::Indulging);
        REQUIRE(s.contract.size() == 2);
        CHECK(s.contract.offers()[1].index == A);
        CHECK(s.contract.offers()[1].price == 10.0);
        CHECK(std::abs(s.residuals.at(0)) <= 1e-10);
    }
    SUBCASE("linear branch at w = 12") {
        CHECK(near(indulging_contract(B, running_instance(12.0)).price, 10.0));
    }
    SUBCASE("bait itself degenerates to commitment") {
        const auto s = indulging_contract(A, running_instance());
        CHECK(s.kind() == ContractKind::Commitment);
        CHECK(s.price == 10.0);
        REQUIRE(s.notes.size() == 1);
        CHECK(s.notes[0].find("degenerate bait") != std::string::npos);
    }
}

TEST_CASE("decoy price") {
    CHECK(near(price_of_z(running_instance(1.0)).root, 32.5 / 3.0));
    CHECK(near(price_of_z(running_instance(20.0)).root, 20.0 / 3.0));
    // w = 0: p = 2 + 2*(16 - p) => 34/3.
    CHECK(near(price_of_z(running_instance(0.0)).root, 34.0 / 3.0));
}

TEST_CASE("decoy price tends to u(z*) as the cost vanishes") {
    for (double alpha : {1e-2, 1e-4, 1e-6}) {
        const ProblemInstance inst(selfcontrol::testing::running_alternatives(), Power{alpha, 2.0});
        const double pz = price_of_z(inst).root;
        CHECK(pz >= 2.0);
        CHECK(pz - 2.0 <= alpha * 14.0 * 14.0 + 1e-10);
    }
}

TEST_CASE("compromising contract") {
    SUBCASE("w = 1 and w = 3 on the kink branch") {
        for (double w : {1.0, 3.0}) {
            const auto s = compromising_contract(B, running_instance(w));
            CHECK(near(s.price, 12.0));
            CHECK(s.kind() == ContractKind::Compromising);
            REQUIRE(s.residuals.size() == 2);
            for (double r : s.residuals) CHECK(std::abs(r) <= 1e-10);
        }
    }
    SUBCASE("w = 6 on the linear branch") {
        CHECK(near(compromising_contract(B, running_instance(6.0)).price, 35.0 / 3.0));
    }
    SUBCASE("menu layout") {
        const auto s = compromising_contract(B, running_instance(1.0));
        REQUIRE(s.contract.size() == 3);
        CHECK(s.contract.intended() == 0);
        CHECK(s.contract.offers()[1].index == A);
        CHECK(s.contract.offers()[2].index == C);
        CHECK(near(s.contract.offers()[2].price, 32.5 / 3.0));
    }
    SUBCASE("bait and decoy are rejected") {
        CHECK_THROWS_AS(compromising_contract(A, running_instance()), NotCompromisable);
        CHECK_THROWS_AS(compromising_contract(C, running_instance()), NotCompromisable);
    }
}

TEST_CASE("closed forms on the running instance") {
    SUBCASE("w = 1") {
        const auto cf = closed_form_piecewise(B, running_instance(1.0));
        CHECK(cf.ind_branch == Branch::Kink);
        CHECK(cf.z_branch == Branch::Kink);
        CHECK(cf.comp_branch == CompromiseBranch::Kink);
        CHECK(near(cf.p_ind, 11.5));
        CHECK(near(cf.p_z, 32.5 / 3.0));
        CHECK(near(cf.p_comp, 12.0));
    }
    SUBCASE("w = 6") {
        const auto cf = closed_form_piecewise(B, running_instance(6.0));
        CHECK(cf.ind_branch == Branch::Linear);
        CHECK(cf.comp_branch == CompromiseBranch::Linear);
        CHECK(near(cf.p_ind, 10.0));
        CHECK(near(cf.p_z, 25.0 / 3.0));
        CHECK(near(cf.p_comp, 35.0 / 3.0));
    }
    SUBCASE("w = 12") {
        CHECK(near(closed_form_piecewise(B, running_instance(12.0)).p_ind, 10.0));
    }
    SUBCASE("large w: decoy adds nothing") {
        const auto cf = closed_form_piecewise(B, running_instance(1e6));
        CHECK(cf.comp_branch == CompromiseBranch::SameAsIndulging);
        CHECK(near(cf.p_comp, 10.0));
        CHECK(near(cf.p_ind, 10.0));
        CHECK(near(compromising_contract(B, running_instance(1e6)).price, 10.0, 1e-8));
    }
    SUBCASE("boundary takes the linear branch") {
        // e(B) - e(y*) = 6 = (1 + l) w at w = 4.
        CHECK(closed_form_piecewise(B, running_instance(4.0)).ind_branch == Branch::Linear);
    }
    SUBCASE("power cost is rejected") {
        const ProblemInstance inst(selfcontrol::testing::running_alternatives(), Power{});
        CHECK_THROWS_AS(closed_form_piecewise(B, inst), std::invalid_argument);
    }
}

TEST_CASE("optimal contract on the running instance") {
    SUBCASE("w = 1 sells B by compromise") {
        const auto s = optimal_contract(running_instance(1.0));
        CHECK(s.kind() == ContractKind::Compromising);
        CHECK(s.sold == B);
        CHECK(near(s.price, 12.0));
        CHECK(near(s.profit, 7.0));
        CHECK(near(s.welfare, -4.0 - (0.5 + 2.0 * (16.0 - 32.5 / 3.0 - 2.0 - 1.0))));
        CHECK(s.notes.empty());
    }
    SUBCASE("best per alternative") {
        const auto inst = running_instance(1.0);
        CHECK(best_contract_for(A, inst).kind() == ContractKind::Commitment);
        CHECK(best_contract_for(C, inst).kind() == ContractKind::Indulging);
        CHECK(near(best_contract_for(C, inst).profit, 32.5 / 3.0 - 5.0));
    }
    SUBCASE("w = 0: compromise and indulging prices coincide, the decoy still binds") {
        const auto inst = running_instance(0.0);
        CHECK(near(indulging_contract(B, inst).price, 12.0));
        const auto s = optimal_contract(inst);
        CHECK(s.kind() == ContractKind::Compromising);
        CHECK(near(s.price, 12.0));
        CHECK(classify_willpower(inst).kind == ContractKind::Compromising);
    }
    SUBCASE("w = 20 ties A commitment and B indulging; the lower index wins") {
        const auto s = optimal_contract(running_instance(20.0));
        CHECK(s.sold == A);
        CHECK(s.kind() == ContractKind::Commitment);
        CHECK(s.profit == 5.0);
    }
    SUBCASE("w = 20 with c(B) = 4.9 sells B indulging at 10") {
        const auto s = optimal_contract(perturbed_instance(20.0));
        CHECK(s.sold == B);
        CHECK(s.kind() == ContractKind::Indulging);
        CHECK(near(s.price, 10.0));
        CHECK(near(s.profit, 5.1));
    }
}

TEST_CASE("classification on the running instance") {
    SUBCASE("w = 1 is case 1") {
        const auto c = classify_willpower(running_instance(1.0));
        CHECK(c.case_index == 1);
        CHECK(c.sold == B);
        CHECK(c.x_k == B);
        CHECK(c.x_l == A);
        CHECK(near(c.price, 12.0));
        CHECK(c.kind == ContractKind::Compromising);
        CHECK(near(c.thresholds[0], 16.0 / 3.0));
        CHECK(near(c.thresholds[1], 28.0 / 3.0));
        CHECK(near(c.thresholds[2], 28.0 / 3.0));
        CHECK(c.notes == std::vector<std::string>{"x_l tied between A B; lowest index taken"});
    }
    SUBCASE("tied x_l resolves like the direct maximization") {
        // w = 6: x_l = A is out of reach, so case 2 sells B at the linear compromise price.
        const auto c6 = classify_willpower(running_instance(6.0));
        CHECK(c6.case_index == 2);
        CHECK(c6.sold == B);
        CHECK(near(c6.price, 35.0 / 3.0));
        // w = 10: A on commitment and B indulging both earn 5; A has the lower index.
        const auto c10 = classify_willpower(running_instance(10.0));
        CHECK(c10.case_index == 4);
        CHECK(c10.sold == A);
        CHECK(near(c10.price, 10.0));
        CHECK(c10.kind == ContractKind::Commitment);
        for (double w : {6.0, 10.0}) {
            const auto s = optimal_contract(running_instance(w));
            const auto c = classify_willpower(running_instance(w));
            CHECK(s.sold == c.sold);
            CHECK(near(s.price, c.price, 1e-8));
        }
    }
    SUBCASE("tied x_k is an error") {
        // Both score 10 under k = 2: (u + 2 v)/3 - c.
        const ProblemInstance inst({{"A", 10, 10, 0}, {"B", 4, 13, 0}, {"C", 0, 30, 12}}, PiecewiseLinear{0.5, 2.0, 1.0});
        try {
            classify_willpower(inst);
            FAIL("expected AssumptionViolated");
        } catch (const AssumptionViolated& e) {
            CHECK(std::string(e.what()) == "x_k is not unique; tied alternatives: A B");
        }
    }
    SUBCASE("perturbed instance across the regimes") {
        const auto c1 = classify_willpower(perturbed_instance(1.0));
        CHECK(c1.case_index == 1);
        CHECK(c1.x_l == B);
        CHECK(near(c1.thresholds[1], 16.0 / 3.0));

        const auto c3 = classify_willpower(perturbed_instance(6.0));
        CHECK(c3.case_index == 3);
        CHECK(c3.sold == B);
        CHECK(near(c3.price, 35.0 / 3.0));
        CHECK(c3.kind == ContractKind::Compromising);

        const auto c4 = classify_willpower(perturbed_instance(10.0));
        CHECK(c4.case_index == 4);
        CHECK(c4.sold == B);
        CHECK(near(c4.price, 10.0));
        CHECK(c4.kind == ContractKind::Indulging);
    }
    SUBCASE("power cost is rejected") {
        const ProblemInstance inst(selfcontrol::testing::running_alternatives(), Power{});
        CHECK_THROWS_AS(classify_willpower(inst), std::invalid_argument);
    }
}

TEST_CASE("case 2: x_k and x_l straddle the willpower reach") {
    // Scores with l = 0.5, k = 2 (c = 0):
    //   X(10,10): 10 / 10.   P(9,13): 11.67 / 10.33.   Q(4,19): 14 / 9.   Z(0,20): 13.33 / 6.67.
    // x_k = Q (e 15), x_l = P (e 4), e(z*) = 20. Reach 1.5 w lies in (5, 16) for w in (3.33, 10.67).
    const ProblemInstance inst({{"X", 10, 10, 0}, {"P", 9, 13, 0}, {"Q", 4, 19, 0}, {"Z", 0, 20, 0}},
                               PiecewiseLinear{0.5, 2.0, 6.0});
    const auto c = classify_willpower(inst);
    CHECK(c.x_k == 2);
    CHECK(c.x_l == 1);
    CHECK(c.case_index == 2);
    const auto s = optimal_contract(inst);
    CHECK(c.sold == s.sold);
    CHECK(near(c.price, s.price, 1e-8));
}

TEST_CASE("properties on random piecewise instances") {
    InstanceGenerator gen(20240611);
    const SolverOptions opts;
    for (int trial = 0; trial < 150; ++trial) {
        const auto inst = gen.next();
        const double e_y = e_of(inst, inst.bait());
        const double e_z = e_of(inst, inst.decoy());
        const double u_y = inst.alternative(inst.bait()).u;

        for (std::size_t x = 0; x < inst.size(); ++x) {
            const auto cf = closed_form_piecewise(x, inst);
            const auto commit = commitment_contract(x, inst);
            const auto ind = indulging_contract(x, inst, opts);
            CHECK(std::abs(cf.p_ind - ind.price) <= 1e-8);
            CHECK(std::abs(cf.p_z - price_of_z(inst, opts).root) <= 1e-8);

            // Participation binds through the bait priced at its utility.
            if (x != inst.bait()) {
                CHECK(ind.contract.offers()[1].price == u_y);
                CHECK(accepts(ind.contract));
            }
            for (double r : ind.residuals) CHECK(std::abs(r) <= opts.tolerance);

            if (x == inst.bait() || x == inst.decoy()) continue;
            const auto comp = compromising_contract(x, inst, opts);
            CHECK(std::abs(cf.p_comp - comp.price) <= 1e-8);
            for (double r : comp.residuals) CHECK(std::abs(r) <= opts.tolerance);
            CHECK(accepts(comp.contract));

            // Sold offer indifferent to the bait and the decoy under the actual choice rule.
            const auto menu = comp.contract.offers();
            const double u0 = overall_utility(menu, 0, inst.cost());
            CHECK(std::abs(u0 - overall_utility(menu, 1, inst.cost())) <= 1e-8);
            CHECK(std::abs(u0 - overall_utility(menu, 2, inst.cost())) <= 1e-8);

            const double e_x = e_of(inst, x);
            if (e_y <= e_x && e_x <= e_z) {
                CHECK(comp.profit >= ind.profit - 1e-8);
                CHECK(ind.profit >= commit.profit - 1e-8);
            }
        }

        const auto best = optimal_contract(inst, opts);
        for (std::size_t x = 0; x < inst.size(); ++x)
            CHECK(best.profit >= best_contract_for(x, inst, opts).profit - opts.tie_tolerance);
        CHECK(best.welfare <= 1e-12);
    }
}

TEST_CASE("classification agrees with the direct maximization") {
    InstanceGenerator gen(8080);
    for (int trial = 0; trial < 60; ++trial) {
        const auto inst = gen.next();
        const auto f = std::get<PiecewiseLinear>(inst.cost());
        for (int i = 0; i < 25; ++i) {
            const auto at = inst.with_cost(PiecewiseLinear{f.l, f.k, 15.0 * i / 24.0});
            const auto c = classify_willpower(at);
            const auto s = optimal_contract(at);
            CHECK(c.sold == s.sold);
            CHECK(std::abs(c.price - s.price) <= 1e-8);
            CHECK(c.kind == s.kind());
            CHECK(c.constrained_sold == c.sold);
        }
    }
}

TEST_CASE("strict dominance under a strictly convex cost") {
    InstanceGenerator gen(77);
    int strict_cases = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const auto inst = gen.next(CostFunction{Power{1.0, 2.0}});
        const double e_y = e_of(inst, inst.bait());
        const double e_z = e_of(inst, inst.decoy());
        for (std::size_t x = 0; x < inst.size(); ++x) {
            const double e_x = e_of(inst, x);
            if (!(e_y < e_x && e_x < e_z)) continue;
            ++strict_cases;
            const double commit = commitment_contract(x, inst).profit;
            const double ind = indulging_contract(x, inst).profit;
            const double comp = compromising_contract(x, inst).profit;
            CHECK(ind > commit + 1e-8);
            CHECK(comp > ind + 1e-8);
        }
    }
    CHECK(strict_cases > 50);
}

}
