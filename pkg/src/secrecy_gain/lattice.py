"""Short-vector enumeration on explicit Gram matrices.

Serves as an independent oracle for the modular-form pipeline: counts of
lattice vectors by squared norm are the theta coefficients.  Everything is
exact; the Fincke-Pohst bounds use rational LDL^T data and integer loops.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Sequence

from .errors import DomainError

MAX_DIMENSION = 24
MAX_NORM = 12


@dataclass(frozen=True)
class GramMatrix:
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in row) for row in self.entries)
        n = len(rows)
        if n == 0 or any(len(r) != n for r in rows):
            raise DomainError("Gram matrix must be square and non-empty")
        for i in range(n):
            for j in range(i):
                if rows[i][j] != rows[j][i]:
                    raise DomainError(f"Gram matrix is not symmetric at ({i}, {j})")
        object.__setattr__(self, "entries", rows)

    @property
    def dimension(self) -> int:
        return len(self.entries)

    @classmethod
    def identity(cls, n: int) -> "GramMatrix":
        return cls(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @classmethod
    def from_file(cls, path: str | Path) -> "GramMatrix":
        data = json.loads(Path(path).read_text())
        if isinstance(data, dict):
            data = data["gram"]
        return cls(tuple(tuple(row) for row in data))

    def norm(self, x: Sequence[int]) -> int:
        g = self.entries
        return sum(x[i] * g[i][j] * x[j] for i in range(len(x)) for j in range(len(x)))

    def transform(self, u: Sequence[Sequence[int]]) -> "GramMatrix":
        """The Gram matrix ``U^T G U`` of the basis given by the columns of ``u``."""
        n = self.dimension
        g = self.entries
        gu = [[sum(g[i][k] * u[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
        return GramMatrix(tuple(
            tuple(sum(u[k][i] * gu[k][j] for k in range(n)) for j in range(n)) for i in range(n)
        ))


def e8_gram() -> GramMatrix:
    """Bundled Gram matrix of the E8 root lattice."""
    text = resources.files("secrecy_gain").joinpath("data/e8_gram.json").read_text()
    return GramMatrix(tuple(tuple(r) for r in json.loads(text)["gram"]))


def determinant(g: GramMatrix) -> int:
    """Exact determinant by Bareiss fraction-free elimination."""
    a = [list(r) for r in g.entries]
    n = len(a)
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


@dataclass(frozen=True)
class UnimodularFlags:
    integral: bool
    determinant: int
    even: bool

    @property
    def determinant_one(self) -> bool:
        return abs(self.determinant) == 1

    @property
    def unimodular(self) -> bool:
        return self.integral and self.determinant_one


def check_unimodular(g: GramMatrix) -> UnimodularFlags:
    # integer entries are enforced by GramMatrix, so the form is integral
    return UnimodularFlags(
        integral=True,
        determinant=determinant(g),
        even=all(g.entries[i][i] % 2 == 0 for i in range(g.dimension)),
    )


def ldl(g: GramMatrix) -> tuple[list[Fraction], list[list[Fraction]]]:
    """Exact ``G = L D L^T`` with unit lower-triangular L; raises unless G is positive definite.

    Returns the pivots ``d`` and the multipliers ``mu[i][j] = L[i][j]`` for j < i.
    """
    n = g.dimension
    mu = [[Fraction(0)] * n for _ in range(n)]
    d = [Fraction(0)] * n
    for i in range(n):
        for j in range(i):
            s = Fraction(g.entries[i][j]) - sum(mu[i][k] * mu[j][k] * d[k] for k in range(j))
            mu[i][j] = s / d[j]
        d[i] = g.entries[i][i] - sum(mu[i][k] ** 2 * d[k] for k in range(i))
        if d[i] <= 0:
            raise DomainError("Gram matrix is not positive definite")
    return d, mu


@dataclass(frozen=True)
class NormCensus:
    counts: dict[int, int]
    max_norm: int

    def coefficients(self) -> list[int]:
        return [self.counts.get(k, 0) for k in range(self.max_norm + 1)]

    def to_json(self) -> dict:
        return {"max_norm": self.max_norm, "counts": {str(k): v for k, v in sorted(self.counts.items())}}


def _check_caps(g: GramMatrix, max_norm: int, allow_large: bool) -> None:
    if max_norm < 0:
        raise DomainError("max norm must be non-negative")
    if allow_large:
        return
    if g.dimension > MAX_DIMENSION:
        raise DomainError(f"dimension {g.dimension} exceeds cap {MAX_DIMENSION}; pass allow_large")
    if max_norm > MAX_NORM:
        raise DomainError(f"max norm {max_norm} exceeds cap {MAX_NORM}; pass allow_large")


def enumerate_norms(g: GramMatrix, max_norm: int, allow_large: bool = False) -> NormCensus:
    """Count lattice vectors of each squared norm up to ``max_norm``.

    With ``G = L D L^T`` the norm is ``sum_i d_i (x_i + sum_{j>i} mu_ji x_j)^2``.
    Coordinates are fixed from the last one down; each level's admissible
    integers are found by stepping out from the center until the exact
    partial norm exceeds the bound.
    """
    _check_caps(g, max_norm, allow_large)
    d, mu = ldl(g)
    n = g.dimension
    bound = Fraction(max_norm)
    counts: dict[int, int] = {}
    x = [0] * n

    def level(i: int, used: Fraction) -> None:
        c = -sum(mu[j][i] * x[j] for j in range(i + 1, n))
        room = bound - used

        def visit(v: int) -> bool:
            t = (v - c) ** 2 * d[i]
            if t > room:
                return False
            x[i] = v
            if i == 0:
                total = used + t
                # the norm is an integer for integral Gram matrices
                counts[int(total)] = counts.get(int(total), 0) + 1
            else:
                level(i - 1, used + t)
            return True

        start = c.__ceil__()
        v = start
        while visit(v):
            v += 1
        v = start - 1
        while visit(v):
            v -= 1
        x[i] = 0

    level(n - 1, Fraction(0))
    return NormCensus(dict(sorted(counts.items())), max_norm)


def kissing_number(g: GramMatrix, allow_large: bool = False) -> tuple[int, int]:
    """Smallest positive squared norm and the number of vectors attaining it."""
    ldl(g)
    bound = 1
    while True:
        if not allow_large:
            bound = min(bound, MAX_NORM)
        census = enumerate_norms(g, bound, allow_large=allow_large)
        positive = [k for k in census.counts if k > 0]
        if positive:
            k = min(positive)
            return k, census.counts[k]
        if not allow_large and bound == MAX_NORM:
            raise DomainError(f"no nonzero vector of norm <= {MAX_NORM}; pass allow_large")
        bound *= 2
