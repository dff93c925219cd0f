"""Multiple Search metaheuristic for the capacitated vehicle routing problem."""

from .instance import Instance, parse_instance, read_instance, route_size_class
from .params import Params
from .solution import Solution, is_feasible, proximity
from .solver import RunResult, SolverConfig, seed_protocol, solve

__all__ = [
    "Instance",
    "Params",
    "RunResult",
    "Solution",
    "SolverConfig",
    "is_feasible",
    "parse_instance",
    "proximity",
    "read_instance",
    "route_size_class",
    "seed_protocol",
    "solve",
]
