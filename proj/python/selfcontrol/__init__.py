"""Optimal menus against a naive consumer with convex self-control costs."""

from ._selfcontrol import (
    Alternative,
    AssumptionViolated,
    BracketFailure,
    Classification,
    ClosedForm,
    Contract,
    ContractKind,
    GridSpec,
    GridTooLarge,
    InputError,
    NotCompromisable,
    Offer,
    PiecewiseLinear,
    Power,
    ProblemInstance,
    Solution,
    SolverError,
    SolverOptions,
    SweepRecord,
    ValidationError,
    best_contract_for,
    classify,
    closed_form_piecewise,
    commitment_contract,
    compromising_contract,
    contract_curve,
    grid_best_contract,
    indulging_contract,
    load_instance,
    optimal_contract,
    parse_instance,
    phi,
    price_of_z,
    serialize_instance,
    sweep_willpower,
    verify_solution,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
