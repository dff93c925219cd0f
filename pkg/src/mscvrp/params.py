from __future__ import annotations

from dataclasses import dataclass, replace

from .instance import LONG, SHORT


@dataclass(frozen=True)
class Params:
    """Solver knobs.  Defaults are the short-route values; use :meth:`for_class`."""

    n_cw: int = 100
    e_max: int = 2
    e_min: int = 2
    cache_size: int = 50
    gamma0: int = 5
    gamma_step: int = 5
    gamma_max: int = 25
    tabu_size: int = 50
    eta_pr: float = 0.4
    max_non_improving: int = 4000
    initial_retries: int = 50
    proximity_allowance: float = 0.2

    def __post_init__(self):
        for name in ("n_cw", "e_max", "e_min", "cache_size", "gamma0", "gamma_step",
                     "gamma_max", "tabu_size", "max_non_improving", "initial_retries"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.gamma0 > self.gamma_max:
            raise ValueError("gamma0 must not exceed gamma_max")
        if self.e_min > self.e_max:
            raise ValueError("e_min must not exceed e_max")
        if not 0 < self.eta_pr <= 1:
            raise ValueError("eta_pr must lie in (0, 1]")

    @classmethod
    def for_class(cls, route_class: str, **overrides) -> "Params":
        if route_class == LONG:
            base = cls(e_max=3, gamma0=10)
        elif route_class == SHORT:
            base = cls(e_max=2, gamma0=5)
        else:
            raise ValueError(f"unknown route class {route_class!r}")
        return replace(base, **overrides) if overrides else base
