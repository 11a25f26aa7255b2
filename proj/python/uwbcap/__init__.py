"""Capacity scaling experiments for power-constrained ad hoc networks on the sphere."""

from ._uwbcap import (
    ContractError,
    Network,
    RegimeError,
    Route,
    Tessellation,
    all_routes,
    bound_curves,
    brute_force_route,
    build_tessellation,
    fit_scaling_exponent,
    gain,
    generate,
    make_network,
    min_pairwise_distance,
    min_power_route,
    power_for_rate,
    rate_finite_bw,
    rate_infinite_bw,
    relaxed_throughput,
    replicate_seed,
    required_bandwidth,
    rho_for,
    run_capacity,
    run_scaling,
    theorem2_gap,
)

__all__ = [name for name in dir() if not name.startswith("_")]
