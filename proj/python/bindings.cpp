#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "selfcontrol/instance_io.hpp"
#include "selfcontrol/model.hpp"
#include "selfcontrol/oracle.hpp"
#include "selfcontrol/solver.hpp"
#include "selfcontrol/statics.hpp"

namespace py = pybind11;
using namespace selfcontrol;

namespace {

template <class T>
std::vector<T> to_vector(std::span<const T> s) {
    return {s.begin(), s.end()};
}

}  // namespace

PYBIND11_MODULE(_selfcontrol, m) {
    m.doc() = "Optimal menus against a naive consumer with convex self-control costs";

    auto validation_error = py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<InputError>(m, "InputError", validation_error);
    auto solver_error = py::register_exception<SolverError>(m, "SolverError", PyExc_RuntimeError);
    py::register_exception<BracketFailure>(m, "BracketFailure", solver_error);
    py::register_exception<NotCompromisable>(m, "NotCompromisable", PyExc_ValueError);
    py::register_exception<AssumptionViolated>(m, "AssumptionViolated", PyExc_ValueError);
    py::register_exception<GridTooLarge>(m, "GridTooLarge", PyExc_ValueError);

    py::class_<Alternative>(m, "Alternative")
        .def(py::init<std::string, double, double, double>(), py::arg("id"), py::arg("u"), py::arg("v"), py::arg("c"))
        .def_readwrite("id", &Alternative::id)
        .def_readwrite("u", &Alternative::u)
        .def_readwrite("v", &Alternative::v)
        .def_readwrite("c", &Alternative::c)
        .def_property_readonly("excess", [](const Alternative& a) { return excess_temptation(a); })
        .def("__eq__", [](const Alternative& a, const Alternative& b) { return a == b; })
        .def("__repr__", [](const Alternative& a) {
            return py::str("Alternative({!r}, u={!r}, v={!r}, c={!r})").format(a.id, a.u, a.v, a.c);
        });

    py::class_<PiecewiseLinear>(m, "PiecewiseLinear")
        .def(py::init<double, double, double>(), py::arg("l") = 0.5, py::arg("k") = 2.0, py::arg("w") = 1.0)
        .def_readwrite("l", &PiecewiseLinear::l)
        .def_readwrite("k", &PiecewiseLinear::k)
        .def_readwrite("w", &PiecewiseLinear::w)
        .def("__call__", [](const PiecewiseLinear& f, double t) { return phi_eval(f, t); })
        .def("__repr__", [](const PiecewiseLinear& f) { return describe(f); });

    py::class_<Power>(m, "Power")
        .def(py::init<double, double>(), py::arg("alpha") = 1.0, py::arg("gamma") = 2.0)
        .def_readwrite("alpha", &Power::alpha)
        .def_readwrite("gamma", &Power::gamma)
        .def("__call__", [](const Power& f, double t) { return phi_eval(f, t); })
        .def("__repr__", [](const Power& f) { return describe(f); });

    m.def("phi", &phi_eval, py::arg("cost"), py::arg("t"));

    py::class_<ProblemInstance>(m, "ProblemInstance")
        .def(py::init<std::vector<Alternative>, CostFunction>(), py::arg("alternatives"), py::arg("cost"))
        .def_property_readonly("alternatives", [](const ProblemInstance& p) { return to_vector(p.alternatives()); })
        .def_property_readonly("cost", &ProblemInstance::cost)
        .def_property_readonly("bait", &ProblemInstance::bait)
        .def_property_readonly("decoy", &ProblemInstance::decoy)
        .def_property_readonly("efficient_u", &ProblemInstance::efficient_u)
        .def_property_readonly("efficient_v", &ProblemInstance::efficient_v)
        .def("find", &ProblemInstance::find)
        .def("with_cost", &ProblemInstance::with_cost)
        .def("__len__", &ProblemInstance::size)
        .def("__eq__", [](const ProblemInstance& a, const ProblemInstance& b) { return a == b; });

    py::enum_<ContractKind>(m, "ContractKind")
        .value("COMMITMENT", ContractKind::Commitment)
        .value("INDULGING", ContractKind::Indulging)
        .value("COMPROMISING", ContractKind::Compromising);

    py::class_<Offer>(m, "Offer")
        .def_readonly("index", &Offer::index)
        .def_readonly("alternative", &Offer::alternative)
        .def_readonly("price", &Offer::price)
        .def_property_readonly("margin", &Offer::margin)
        .def("__repr__", [](const Offer& o) {
            return py::str("Offer({!r}, {!r})").format(o.alternative.id, o.price);
        });

    py::class_<Contract>(m, "Contract")
        .def_property_readonly("offers", [](const Contract& c) { return to_vector(c.offers()); })
        .def_property_readonly("intended", &Contract::intended)
        .def_property_readonly("kind", &Contract::kind)
        .def("__len__", &Contract::size);

    py::class_<SolverOptions>(m, "SolverOptions")
        .def(py::init([](double tolerance, double tie_tolerance) {
                 SolverOptions o;
                 o.tolerance = tolerance;
                 o.tie_tolerance = tie_tolerance;
                 return o;
             }),
             py::arg("tolerance") = 1e-10, py::arg("tie_tolerance") = 1e-9)
        .def_readwrite("tolerance", &SolverOptions::tolerance)
        .def_readwrite("tie_tolerance", &SolverOptions::tie_tolerance);

    py::class_<Solution>(m, "Solution")
        .def_readonly("contract", &Solution::contract)
        .def_readonly("sold", &Solution::sold)
        .def_readonly("price", &Solution::price)
        .def_readonly("profit", &Solution::profit)
        .def_readonly("welfare", &Solution::welfare)
        .def_readonly("residuals", &Solution::residuals)
        .def_readonly("notes", &Solution::notes)
        .def_property_readonly("kind", &Solution::kind);

    const SolverOptions defaults;
    m.def("commitment_contract", &commitment_contract, py::arg("x"), py::arg("instance"));
    m.def("indulging_contract", &indulging_contract, py::arg("x"), py::arg("instance"), py::arg("options") = defaults);
    m.def("compromising_contract", &compromising_contract, py::arg("x"), py::arg("instance"),
          py::arg("options") = defaults);
    m.def("best_contract_for", &best_contract_for, py::arg("x"), py::arg("instance"), py::arg("options") = defaults);
    m.def("optimal_contract", &optimal_contract, py::arg("instance"), py::arg("options") = defaults);
    m.def(
        "price_of_z", [](const ProblemInstance& inst, const SolverOptions& o) { return price_of_z(inst, o).root; },
        py::arg("instance"), py::arg("options") = defaults);

    py::class_<ClosedForm>(m, "ClosedForm")
        .def_readonly("p_ind", &ClosedForm::p_ind)
        .def_readonly("p_z", &ClosedForm::p_z)
        .def_readonly("p_comp", &ClosedForm::p_comp);
    m.def("closed_form_piecewise", &closed_form_piecewise, py::arg("x"), py::arg("instance"));

    py::class_<WillpowerRegime>(m, "Classification")
        .def_readonly("case", &WillpowerRegime::case_index)
        .def_readonly("sold", &WillpowerRegime::sold)
        .def_readonly("price", &WillpowerRegime::price)
        .def_readonly("kind", &WillpowerRegime::kind)
        .def_readonly("x_k", &WillpowerRegime::x_k)
        .def_readonly("x_l", &WillpowerRegime::x_l)
        .def_readonly("thresholds", &WillpowerRegime::thresholds)
        .def_readonly("notes", &WillpowerRegime::notes);
    m.def("classify", &classify_willpower, py::arg("instance"), py::arg("options") = defaults);

    py::class_<GridSpec>(m, "GridSpec")
        .def(py::init([](double step, double lo, double hi, int max_menu, bool analytic, bool discount) {
                 GridSpec g;
                 g.price_step = step;
                 g.price_min = lo;
                 g.price_max = hi;
                 g.max_menu_size = max_menu;
                 g.include_analytic_prices = analytic;
                 g.epsilon_discount = discount;
                 return g;
             }),
             py::arg("price_step") = 0.01, py::arg("price_min") = 0.0, py::arg("price_max") = 20.0,
             py::arg("max_menu_size") = 3, py::arg("include_analytic_prices") = false,
             py::arg("epsilon_discount") = false)
        .def_readwrite("price_step", &GridSpec::price_step)
        .def_readwrite("price_min", &GridSpec::price_min)
        .def_readwrite("price_max", &GridSpec::price_max)
        .def_readwrite("max_menu_size", &GridSpec::max_menu_size)
        .def_readwrite("include_analytic_prices", &GridSpec::include_analytic_prices)
        .def_readwrite("epsilon_discount", &GridSpec::epsilon_discount);
    m.def("grid_best_contract", &grid_best_contract, py::arg("instance"), py::arg("grid"),
          py::arg("options") = defaults, py::call_guard<py::gil_scoped_release>());

    m.def(
        "verify_solution",
        [](const Solution& s, const ProblemInstance& inst, const SolverOptions& o) {
            py::dict checks;
            for (const auto& c : verify_solution(s, inst, o).checks) checks[py::str(c.name)] = py::make_tuple(c.passed, c.detail);
            return checks;
        },
        py::arg("solution"), py::arg("instance"), py::arg("options") = defaults);

    py::class_<SweepRecord>(m, "SweepRecord")
        .def_readonly("w", &SweepRecord::w)
        .def_readonly("case", &SweepRecord::case_index)
        .def_readonly("sold", &SweepRecord::sold_id)
        .def_readonly("e_sold", &SweepRecord::e_sold)
        .def_readonly("price", &SweepRecord::price)
        .def_readonly("profit", &SweepRecord::profit)
        .def_readonly("welfare", &SweepRecord::welfare)
        .def_readonly("kind", &SweepRecord::kind);
    m.def(
        "sweep_willpower",
        [](const ProblemInstance& inst, const std::vector<double>& grid, const SolverOptions& o) {
            return sweep_willpower(inst, grid, o);
        },
        py::arg("instance"), py::arg("w_grid"), py::arg("options") = defaults);
    m.def(
        "contract_curve",
        [](const std::vector<SweepRecord>& records) {
            std::vector<std::pair<double, double>> out;
            for (const auto& p : contract_curve(records)) out.emplace_back(p.excess, p.markup);
            return out;
        },
        py::arg("records"));

    m.def(
        "load_instance", [](const std::filesystem::path& p) { return load_instance(p).instance; }, py::arg("path"));
    m.def(
        "parse_instance", [](std::string_view text) { return parse_instance(text).instance; }, py::arg("text"));
    m.def(
        "serialize_instance",
        [](const ProblemInstance& inst) { return serialize_instance({inst, std::nullopt, std::nullopt}); },
        py::arg("instance"));
}
