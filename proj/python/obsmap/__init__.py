"""Anchor-distance and spectral observation maps on graphs."""

from ._obsmap import (
    ConnectivityError,
    NumericError,
    ParameterError,
    ParseError,
    analyze_graph,
    csv_columns,
    energy_embedding,
    graph_stats,
    k_emp,
    random_regular,
    rho_eng,
    run_trial,
    subcritical,
    sweep_csv,
)

__all__ = [
    "ConnectivityError",
    "NumericError",
    "ParameterError",
    "ParseError",
    "analyze_graph",
    "csv_columns",
    "energy_embedding",
    "graph_stats",
    "k_emp",
    "random_regular",
    "rho_eng",
    "run_trial",
    "subcritical",
    "sweep_csv",
]
