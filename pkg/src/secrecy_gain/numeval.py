"""Double-precision evaluation of theta functions and secrecy functions at tau = y*i."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError
from .thetasolve import EVEN, ThetaWeights, even_shape

DEFAULT_TOL = 1e-17


@dataclass(frozen=True)
class EvalPoint:
    y: float
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        if not self.y > 0:
            raise DomainError(f"y must be positive, got {self.y}")
        if not self.tol > 0:
            raise DomainError(f"tol must be positive, got {self.tol}")

    @property
    def nome(self) -> float:
        return math.exp(-math.pi * self.y)


def _point(p) -> EvalPoint:
    return p if isinstance(p, EvalPoint) else EvalPoint(float(p))


def theta_with_error(index: int, p: EvalPoint | float) -> tuple[float, float]:
    """Theta value from its sum form together with a bound on the dropped tail.

    theta_3 = 1 + 2 sum q^(n^2), theta_4 = 1 + 2 sum (-1)^n q^(n^2),
    theta_2 = 2 sum_{n>=0} q^((n+1/2)^2), with q = exp(-pi y).
    Summation stops once the next term drops below tol * |partial sum|; the
    remaining terms q^(s^2), q^((s+1)^2), ... are dominated by the geometric
    series q^(s^2) * sum_j q^(j(2s+1)).
    """
    p = _point(p)
    if index not in (2, 3, 4):
        raise DomainError(f"theta index must be 2, 3 or 4, got {index!r}")
    q = p.nome
    if index == 2:
        shells = (lambda n: (n + 0.5) ** 2)
        total, n, sign = 0.0, 0, 1.0
    else:
        shells = (lambda n: float(n * n))
        total, n = 1.0, 1
        sign = -1.0 if index == 4 else 1.0
    while True:
        e = shells(n)
        term = 2.0 * q ** e
        if term < p.tol * abs(total) or term == 0.0:
            ratio = q ** (2 * math.sqrt(e) + 1)
            return total, term / (1.0 - ratio)
        total += (sign ** n) * term
        n += 1


def theta_value(index: int, p: EvalPoint | float) -> float:
    return theta_with_error(index, p)[0]


def z_of_y(p: EvalPoint | float) -> float:
    """theta_2^4 theta_4^4 / theta_3^8 at tau = y*i."""
    p = _point(p)
    t2, t3, t4 = (theta_value(i, p) for i in (2, 3, 4))
    return (t2 * t4) ** 4 / t3 ** 8


def xi_inverse_value(weights: ThetaWeights, p: EvalPoint | float) -> float:
    """Theta_L(yi) / theta_3(yi)^n from the weighted modular-form combination."""
    p = _point(p)
    t2, t3, t4 = (theta_value(i, p) for i in (2, 3, 4))
    n = weights.dimension
    w = [float(x) for x in weights.weights]
    if weights.parity == EVEN:
        m, k = even_shape(n)
        e4 = 0.5 * (t2 ** 8 + t3 ** 8 + t4 ** 8)
        delta = (t2 * t3 * t4) ** 8 / 256.0
        theta = sum(b * e4 ** (3 * (m - j) + k) * delta ** j for j, b in enumerate(w))
    else:
        d8 = (t2 * t4) ** 4 / 16.0
        theta = sum(a * t3 ** (n - 8 * r) * d8 ** r for r, a in enumerate(w))
    return theta / t3 ** n


def sample_secrecy_function(weights: ThetaWeights, y_grid: Iterable[float]) -> list[tuple[float, float]]:
    """Rows ``(y, Xi(y))`` in grid order."""
    grid = [float(y) for y in y_grid]
    if not grid:
        raise DomainError("y grid must be non-empty")
    return [(y, 1.0 / xi_inverse_value(weights, EvalPoint(y))) for y in grid]


def default_grid(points: int = 101, lo: float = 0.25, hi: float = 4.0) -> list[float]:
    return list(np.geomspace(lo, hi, points))


def format_csv(rows: Sequence[tuple[float, float]]) -> str:
    lines = ["y,xi"]
    lines.extend(f"{y:.12g},{xi:.12g}" for y, xi in rows)
    return "\n".join(lines) + "\n"
