"""Weighted duration program: minimize sum w_i p_i s.t. sum c_i p_i^(1-alpha) <= E.

Every lower bound and duration assignment in the package reduces to this
program. ``solve_weighted`` uses the Lagrangian closed form;
``solve_weighted_numeric`` bisects on the multiplier and serves as an
independent check of it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .model import EspeedError, PreconditionError


class ConvergenceError(EspeedError):
    pass


@dataclass(frozen=True)
class WeightedProgram:
    weights: tuple[float, ...]
    energy_coeffs: tuple[float, ...]
    budget: float
    alpha: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "weights", tuple(float(w) for w in self.weights))
        object.__setattr__(self, "energy_coeffs", tuple(float(c) for c in self.energy_coeffs))

    def check(self) -> None:
        if len(self.weights) != len(self.energy_coeffs) or not self.weights:
            raise PreconditionError("weights and energy_coeffs must have equal nonzero length")
        if any(not w > 0 for w in self.weights):
            raise PreconditionError("weights must be positive")
        if any(not c > 0 for c in self.energy_coeffs):
            raise PreconditionError("energy coefficients must be positive")
        if not self.budget > 0:
            raise PreconditionError("energy budget must be positive")
        if not self.alpha > 1:
            raise PreconditionError("alpha must exceed 1")

    def energy(self, durations: tuple[float, ...] | list[float]) -> float:
        a = self.alpha
        return math.fsum(c * p ** (1 - a) for c, p in zip(self.energy_coeffs, durations))

    def objective(self, durations: tuple[float, ...] | list[float]) -> float:
        return math.fsum(w * p for w, p in zip(self.weights, durations))


@dataclass(frozen=True)
class DurationSolution:
    durations: tuple[float, ...]
    multiplier: float
    objective: float


def _durations(prog: WeightedProgram, scaled_multiplier: float) -> tuple[float, ...]:
    # stationarity: w_i = lambda (alpha-1) c_i p_i^(-alpha)
    inv = 1.0 / prog.alpha
    return tuple((scaled_multiplier * c / w) ** inv for w, c in zip(prog.weights, prog.energy_coeffs))


def solve_weighted(prog: WeightedProgram) -> DurationSolution:
    prog.check()
    a, E = prog.alpha, prog.budget
    s = math.fsum(c ** (1 / a) * w ** ((a - 1) / a) for w, c in zip(prog.weights, prog.energy_coeffs))
    scaled = (E / s) ** (a / (1 - a))
    durations = _durations(prog, scaled)
    objective = E ** (1 / (1 - a)) * s ** (a / (a - 1))
    return DurationSolution(durations, scaled / (a - 1), objective)


def solve_weighted_numeric(prog: WeightedProgram, max_iter: int = 200) -> DurationSolution:
    """Bisect the multiplier on the tight energy constraint.

    The constraint residual is strictly decreasing in the multiplier, so a
    bracket is grown from ``[1e-18, 1]`` and halved geometrically until the
    residual drops below ``1e-12 * E``.
    """
    prog.check()
    a, E = prog.alpha, prog.budget
    ws, cs = prog.weights, prog.energy_coeffs
    expo = (1 - a) / a

    def g(lam: float) -> float:
        k = lam * (a - 1)
        return math.fsum(c * (k * c / w) ** expo for w, c in zip(ws, cs)) - E

    lo, hi = 1e-18, 1.0
    for _ in range(max_iter):
        if g(hi) < 0:
            break
        hi *= 2.0
    else:
        raise ConvergenceError("could not bracket the multiplier from above")
    for _ in range(max_iter):
        if g(lo) > 0:
            break
        lo /= 2.0
    else:
        raise ConvergenceError("could not bracket the multiplier from below")

    tol = 1e-12 * E
    lam = math.sqrt(lo * hi)
    for _ in range(max_iter):
        lam = math.sqrt(lo * hi)
        r = g(lam)
        if abs(r) < tol:
            break
        if r > 0:
            lo = lam
        else:
            hi = lam
        if hi <= lo * (1 + 1e-16):
            break
    else:
        raise ConvergenceError("bisection did not converge in %d iterations" % max_iter)
    durations = _durations(prog, lam * (a - 1))
    return DurationSolution(durations, lam, prog.objective(durations))
