"""Closed-economy equilibrium engine: LP production coupled with a linear Fisher market."""

from ._closedecon import (
    ClosedEconError,
    CombinatorialData,
    Economy,
    EquilibriumPoint,
    GameTable,
    ParametricFamily,
    SolveResult,
    TatonnementTrace,
    TwoByTwoResult,
    classify_2x2,
    extract_combinatorics,
    load_forest,
    load_point,
    load_scenario,
    parse_scenario,
    payoff,
    pure_nash,
    reconstruct,
    run_cli,
    solve,
    sweep,
    tatonnement,
    verify,
)

__all__ = [
    "ClosedEconError",
    "CombinatorialData",
    "Economy",
    "EquilibriumPoint",
    "GameTable",
    "ParametricFamily",
    "SolveResult",
    "TatonnementTrace",
    "TwoByTwoResult",
    "classify_2x2",
    "extract_combinatorics",
    "load_forest",
    "load_point",
    "load_scenario",
    "parse_scenario",
    "payoff",
    "pure_nash",
    "reconstruct",
    "run_cli",
    "solve",
    "sweep",
    "tatonnement",
    "verify",
]
