#include "selfcontrol/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "selfcontrol/instance_io.hpp"
#include "selfcontrol/oracle.hpp"
#include "selfcontrol/solver.hpp"
#include "selfcontrol/statics.hpp"

namespace selfcontrol::cli {

namespace {

using nlohmann::json;

// 12 significant digits, always in the C locale.
std::string num(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x == 0.0 ? 0.0 : x);
    return buf;
}

struct Globals {
    std::string format = "text";
    std::optional<double> tolerance;
};

SolverOptions solver_options(const Globals& g, const InstanceFile& file) {
    SolverOptions opts;
    if (file.tolerance) opts.tolerance = *file.tolerance;
    if (g.tolerance) opts.tolerance = *g.tolerance;
    return opts;
}

json solution_json(const Solution& s, const ProblemInstance& inst) {
    json menu = json::array();
    for (std::size_t i = 0; i < s.contract.size(); ++i) {
        const Offer& o = s.contract.offers()[i];
        menu.push_back({{"id", o.alternative.id}, {"price", o.price}, {"intended", i == s.contract.intended()}});
    }
    return {{"kind", to_string(s.kind())},
            {"sold", inst.alternative(s.sold).id},
            {"price", s.price},
            {"profit", s.profit},
            {"welfare", s.welfare},
            {"menu", menu},
            {"residuals", s.residuals},
            {"notes", s.notes}};
}

void print_solution(std::ostream& out, const Solution& s, const ProblemInstance& inst) {
    out << "kind: " << to_string(s.kind()) << '\n'
        << "sold: " << inst.alternative(s.sold).id << '\n'
        << "price: " << num(s.price) << '\n'
        << "profit: " << num(s.profit) << '\n'
        << "welfare: " << num(s.welfare) << '\n'
        << "menu:\n";
    for (std::size_t i = 0; i < s.contract.size(); ++i) {
        const Offer& o = s.contract.offers()[i];
        out << "  " << o.alternative.id << "  " << num(o.price) << (i == s.contract.intended() ? "  (sold)" : "")
            << '\n';
    }
    out << "residuals:";
    if (s.residuals.empty()) out << " none";
    for (double r : s.residuals) out << ' ' << num(r);
    out << '\n';
    for (const auto& n : s.notes) out << "note: " << n << '\n';
}

int cmd_solve(const Globals& g, const std::string& path, std::ostream& out) {
    const InstanceFile file = load_instance(path);
    const Solution s = optimal_contract(file.instance, solver_options(g, file));
    if (g.format == "json") {
        json doc = solution_json(s, file.instance);
        doc["cost"] = describe(file.instance.cost());
        out << doc.dump(2) << '\n';
    } else {
        out << "cost: " << describe(file.instance.cost()) << '\n';
        print_solution(out, s, file.instance);
    }
    return kOk;
}

int cmd_classify(const Globals& g, const std::string& path, std::ostream& out) {
    const InstanceFile file = load_instance(path);
    const WillpowerRegime c = classify_willpower(file.instance, solver_options(g, file));
    const auto& alts = file.instance.alternatives();
    if (g.format == "json") {
        json doc = {{"case", c.case_index},
                    {"sold", alts[c.sold].id},
                    {"price", c.price},
                    {"kind", to_string(c.kind)},
                    {"x_k", alts[c.x_k].id},
                    {"x_l", alts[c.x_l].id},
                    {"thresholds", c.thresholds},
                    {"constrained_sold", alts[c.constrained_sold].id},
                    {"constrained_price", c.constrained_price},
                    {"notes", c.notes}};
        out << doc.dump(2) << '\n';
        return kOk;
    }
    out << "case: " << c.case_index << '\n'
        << "x_k: " << alts[c.x_k].id << '\n'
        << "x_l: " << alts[c.x_l].id << '\n'
        << "thresholds: " << num(c.thresholds[0]) << ' ' << num(c.thresholds[1]) << ' ' << num(c.thresholds[2])
        << '\n'
        << "sold: " << alts[c.sold].id << '\n'
        << "price: " << num(c.price) << '\n'
        << "kind: " << to_string(c.kind) << '\n';
    for (const auto& n : c.notes) out << "note: " << n << '\n';
    return kOk;
}

struct SweepArgs {
    double from = 0.0;
    double to = 0.0;
    int steps = 0;
};

int cmd_sweep(const Globals& g, const std::string& path, const SweepArgs& a, std::ostream& out, std::ostream& err) {
    if (!(a.from >= 0.0) || !(a.to >= a.from) || a.steps < 0 || (a.steps > 1 && !(a.to > a.from))) {
        err << "error: invalid w range: need 0 <= w-from <= w-to (strictly less when w-steps > 1) and w-steps >= 0\n";
        return kInputError;
    }
    const InstanceFile file = load_instance(path);
    std::vector<double> grid;
    for (int i = 0; i < a.steps; ++i)
        grid.push_back(a.steps == 1 ? a.from : a.from + (a.to - a.from) * i / (a.steps - 1));
    const auto records = sweep_willpower(file.instance, grid, solver_options(g, file));

    if (g.format == "json") {
        json doc = json::array();
        for (const auto& r : records)
            doc.push_back({{"w", r.w},
                           {"case", r.case_index},
                           {"sold", r.sold_id},
                           {"e_sold", r.e_sold},
                           {"price", r.price},
                           {"profit", r.profit},
                           {"welfare", r.welfare},
                           {"kind", to_string(r.kind)}});
        out << doc.dump(2) << '\n';
        return kOk;
    }
    out << "w,case,sold,e_sold,price,profit,welfare,kind\n";
    for (const auto& r : records)
        out << num(r.w) << ',' << r.case_index << ',' << r.sold_id << ',' << num(r.e_sold) << ',' << num(r.price)
            << ',' << num(r.profit) << ',' << num(r.welfare) << ',' << to_string(r.kind) << '\n';
    return kOk;
}

struct VerifyArgs {
    std::optional<double> step;
    std::optional<double> price_min;
    std::optional<double> price_max;
    std::optional<int> max_menu;
    bool include_analytic = false;
    bool epsilon_discount = false;
    double perturb = 0.0;
};

// Grid covering every commitment price and every analytic price.
GridSpec default_grid(const ProblemInstance& inst, const SolverOptions& opts, double step) {
    double lo = 0.0, hi = 0.0;
    for (std::size_t x = 0; x < inst.size(); ++x) {
        lo = std::min(lo, inst.alternative(x).u);
        hi = std::max(hi, std::max(inst.alternative(x).u, best_contract_for(x, inst, opts).price));
    }
    GridSpec g;
    g.price_step = step;
    g.price_min = std::floor(lo);
    g.price_max = std::ceil(hi) + 1.0;
    return g;
}

int cmd_verify(const Globals& g, const std::string& path, const VerifyArgs& a, std::ostream& out) {
    const InstanceFile file = load_instance(path);
    const ProblemInstance& inst = file.instance;
    const SolverOptions opts = solver_options(g, file);

    Solution analytic = optimal_contract(inst, opts);
    if (a.perturb != 0.0) {
        std::vector<Offer> offers(analytic.contract.offers().begin(), analytic.contract.offers().end());
        offers[analytic.contract.intended()].price += a.perturb;
        analytic.contract = Contract(std::move(offers), analytic.contract.intended());
        analytic.price += a.perturb;
        analytic.profit += a.perturb;
        analytic.notes.push_back("sold price perturbed by " + num(a.perturb));
    }

    const double step = a.step.value_or(file.grid ? file.grid->price_step : 0.01);
    GridSpec grid = file.grid.value_or(default_grid(inst, opts, step));
    grid.price_step = step;
    if (a.price_min) grid.price_min = *a.price_min;
    if (a.price_max) grid.price_max = *a.price_max;
    if (a.max_menu) grid.max_menu_size = *a.max_menu;
    grid.include_analytic_prices = grid.include_analytic_prices || a.include_analytic;
    grid.epsilon_discount = a.epsilon_discount;
    if (grid.max_menu_size > 3) throw std::invalid_argument("--max-menu must be 1..3 for verify");

    const Solution best = grid_best_contract(inst, grid, opts);
    const VerificationReport replay = verify_solution(analytic, inst, opts);
    const double upper = analytic.profit + 1e-9;
    const double lower = analytic.profit - 3.0 * grid.price_step;
    const bool bounds_ok = best.profit <= upper && best.profit >= lower;
    const bool pass = bounds_ok && replay.passed();

    if (g.format == "json") {
        json checks = json::array();
        for (const auto& c : replay.checks) checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
        json doc = {{"analytic", solution_json(analytic, inst)},
                    {"grid_best", solution_json(best, inst)},
                    {"grid", {{"price_step", grid.price_step},
                              {"price_min", grid.price_min},
                              {"price_max", grid.price_max},
                              {"max_menu_size", grid.max_menu_size},
                              {"include_analytic_prices", grid.include_analytic_prices}}},
                    {"lower_bound", lower},
                    {"upper_bound", upper},
                    {"replay", checks},
                    {"pass", pass}};
        out << doc.dump(2) << '\n';
    } else {
        out << "analytic profit: " << num(analytic.profit) << " (" << to_string(analytic.kind()) << ", sells "
            << inst.alternative(analytic.sold).id << " at " << num(analytic.price) << ")\n"
            << "grid-best profit: " << num(best.profit) << " (" << to_string(best.kind()) << ", sells "
            << inst.alternative(best.sold).id << " at " << num(best.price) << ")\n"
            << "grid: step " << num(grid.price_step) << " on [" << num(grid.price_min) << ", " << num(grid.price_max)
            << "], menus <= " << grid.max_menu_size << (grid.include_analytic_prices ? ", with analytic prices" : "")
            << '\n'
            << "accepted range: [" << num(lower) << ", " << num(upper) << "]\n"
            << "replay:\n";
        for (const auto& c : replay.checks)
            out << "  " << (c.passed ? "ok   " : "FAIL ") << c.name << " (" << c.detail << ")\n";
        out << "verdict: " << (pass ? "pass" : "FAIL") << '\n';
    }
    return pass ? kOk : kVerificationFailure;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Optimal menus against a naive consumer with convex self-control costs"};
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"text", "json"}));
    app.add_option("--tolerance", g.tolerance, "Residual tolerance for the implicit price equations")
        ->check(CLI::PositiveNumber);

    std::string path;
    auto* solve = app.add_subcommand("solve", "Optimal contract for an instance");
    solve->add_option("instance", path, "Instance file (JSON)")->required();

    auto* classify = app.add_subcommand("classify", "Willpower regime and predicted contract (piecewise-linear cost)");
    classify->add_option("instance", path, "Instance file (JSON)")->required();

    SweepArgs sweep_args;
    auto* sweep = app.add_subcommand("sweep", "Optimal contract across willpower levels, as CSV");
    sweep->add_option("instance", path, "Instance file (JSON)")->required();
    sweep->add_option("--w-from", sweep_args.from, "First willpower value");
    sweep->add_option("--w-to", sweep_args.to, "Last willpower value");
    sweep->add_option("--w-steps", sweep_args.steps, "Number of evenly spaced willpower values");

    VerifyArgs verify_args;
    auto* verify = app.add_subcommand("verify", "Compare the analytic optimum with a brute-force grid search");
    verify->add_option("instance", path, "Instance file (JSON)")->required();
    verify->add_option("--step", verify_args.step, "Price grid step")->check(CLI::PositiveNumber);
    verify->add_option("--price-min", verify_args.price_min, "Lowest grid price");
    verify->add_option("--price-max", verify_args.price_max, "Highest grid price");
    verify->add_option("--max-menu", verify_args.max_menu, "Largest menu enumerated (1..3)")->check(CLI::Range(1, 3));
    verify->add_flag("--include-analytic", verify_args.include_analytic, "Add the analytic prices to the grid");
    verify->add_flag("--epsilon-discount", verify_args.epsilon_discount,
                     "Credit a menu only if the credited offer wins after a 1e-9 price cut");
    verify->add_option("--perturb-price", verify_args.perturb, "Shift the analytic sold price before replaying it");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kOk : kInputError;
    }

    try {
        if (*solve) return cmd_solve(g, path, out);
        if (*classify) return cmd_classify(g, path, out);
        if (*sweep) return cmd_sweep(g, path, sweep_args, out, err);
        if (*verify) return cmd_verify(g, path, verify_args, out);
    } catch (const SolverError& e) {
        err << "solver failure: " << e.what() << '\n';
        return kSolverFailure;
    } catch (const ValidationError& e) {
        err << "invalid instance: " << e.what() << '\n';
        return kInputError;
    } catch (const InputError& e) {
        err << "input error: " << e.what() << '\n';
        return kInputError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    }
    return kInputError;
}

}  // namespace selfcontrol::cli
