"""Distance and fidelity functionals, and averages over input states.

Averages are uniform in ``x = |alpha|^2`` on ``[0, 1]``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np

from .errors import DomainError, UsageError
from .qlin import DensityOperator, PureQubitState

NORMALIZATION_TOL = 1e-12


@dataclass(frozen=True)
class AveragingRule:
    """Gauss-Legendre rule on ``[0, 1]``; exact for degree ``<= 2*node_count - 1``."""

    node_count: int = 24

    def __post_init__(self):
        if int(self.node_count) != self.node_count or self.node_count < 16:
            raise DomainError(f"node_count must be an integer >= 16, got {self.node_count!r}")

    def nodes_weights(self) -> tuple[np.ndarray, np.ndarray]:
        return _gauss_legendre_unit(int(self.node_count))


@lru_cache(maxsize=None)
def _gauss_legendre_unit(n: int):
    x, w = np.polynomial.legendre.leggauss(n)
    x, w = 0.5 * (x + 1.0), 0.5 * w
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


DEFAULT_RULE = AveragingRule()


def hs_distance(rho: DensityOperator, sigma: DensityOperator) -> float:
    """Hilbert-Schmidt distance ``Tr[(rho - sigma)^2]``."""
    if rho.qubit_arity != sigma.qubit_arity:
        raise UsageError(f"arity mismatch: {rho.qubit_arity} vs {sigma.qubit_arity}")
    d = rho.matrix - sigma.matrix
    # d is Hermitian, so Tr[d^2] is the squared Frobenius norm
    return float(np.sum(np.abs(d) ** 2))


def fidelity_against_pure(rho: DensityOperator, phi: PureQubitState) -> float:
    """``<phi|rho|phi>`` for a normalized single-qubit ``rho``."""
    if rho.qubit_arity != 1:
        raise UsageError("fidelity_against_pure expects a single-qubit operator")
    if abs(rho.trace - 1.0) > NORMALIZATION_TOL:
        raise UsageError(f"rho must be normalized (trace {rho.trace!r})")
    v = phi.vector
    return float(np.real(v.conj() @ rho.matrix @ v))


def average_over_alpha2(f: Callable[[float], float], rule: AveragingRule = DEFAULT_RULE) -> float:
    """Integral of ``f`` over ``[0, 1]`` with the Gauss-Legendre ``rule``."""
    x, w = rule.nodes_weights()
    return float(sum(wi * float(f(float(xi))) for xi, wi in zip(x, w)))


def universality_deviation(f: Callable[[float], float], grid_size: int = 101) -> float:
    """Spread ``max f - min f`` of ``f`` on a uniform grid including 0 and 1."""
    if grid_size < 3:
        raise DomainError("grid_size must be at least 3")
    values = [float(f(float(x))) for x in np.linspace(0.0, 1.0, grid_size)]
    return max(values) - min(values)


def riemann_average(f: Callable, panels: int = 10**6, chunk: int = 200_000):
    """Midpoint-rule average on ``[0, 1]``.

    ``f`` takes an array of nodes and returns an array, or a dict of arrays
    (then a dict of averages is returned). Nodes are fed in chunks to bound
    memory.
    """
    totals = None
    for start in range(0, panels, chunk):
        x = (np.arange(start, min(start + chunk, panels)) + 0.5) / panels
        y = f(x)
        part = {k: float(np.sum(v)) for k, v in y.items()} if isinstance(y, dict) else float(np.sum(y))
        if totals is None:
            totals = part
        elif isinstance(part, dict):
            totals = {k: totals[k] + part[k] for k in part}
        else:
            totals += part
    if isinstance(totals, dict):
        return {k: v / panels for k, v in totals.items()}
    return totals / panels
