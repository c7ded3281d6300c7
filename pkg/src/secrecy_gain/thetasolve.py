"""Theta series of unimodular lattices as polynomials in modular forms.

Even lattices in dimension n = 24m + 8k (k in {0, 1, 2}) have

    Theta = sum_{j=0..m} b_j E4^(3(m-j)+k) Delta^j,   b_0 = 1,

and every unimodular lattice in dimension n has

    Theta = sum_{r=0..n//8} a_r theta_3^(n-8r) Delta8^r,   a_0 = 1.

Each basis element starts with a monic leading term (q^(2j) resp. q^r), so
prescribing the first few theta coefficients gives a unitriangular system
for the weights.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import DomainError, InternalError
from .qexp import QSeries, as_rat, default_order, named_form_series, theta_series

EVEN = "even"
GENERAL = "general"
PARITIES = (EVEN, GENERAL)


def even_shape(n: int) -> tuple[int, int]:
    """Return ``(m, k)`` with ``n = 24m + 8k`` and ``k`` in {0, 1, 2}."""
    if n <= 0 or n % 8:
        raise DomainError(f"even unimodular lattices need dimension divisible by 8, got {n}")
    return n // 24, (n % 24) // 8


@dataclass(frozen=True)
class LatticePrefix:
    """Dimension, parity and the prescribed low-order theta coefficients.

    For even parity ``prescribed`` holds the coefficients of q^2, q^4, ...,
    q^(2m); for general parity the coefficients of q^1, ..., q^(n//8).
    """

    dimension: int
    parity: str
    prescribed: tuple[Fraction, ...]

    def __post_init__(self):
        if self.parity not in PARITIES:
            raise DomainError(f"parity must be 'even' or 'general', got {self.parity!r}")
        if self.dimension < 1:
            raise DomainError(f"dimension must be positive, got {self.dimension}")
        object.__setattr__(self, "prescribed", tuple(as_rat(v) for v in self.prescribed))
        if self.parity == EVEN:
            even_shape(self.dimension)
        expected = self.length_required
        if len(self.prescribed) != expected:
            raise DomainError(
                f"{self.parity} prefix in dimension {self.dimension} needs exactly "
                f"{expected} coefficients, got {len(self.prescribed)}"
            )

    @property
    def m(self) -> int:
        return self.dimension // 24

    @property
    def k(self) -> int:
        return (self.dimension % 24) // 8

    @property
    def mu(self) -> int:
        return self.dimension // 8

    @property
    def nu(self) -> int:
        return self.dimension % 8

    @property
    def length_required(self) -> int:
        return self.m if self.parity == EVEN else self.mu

    def exponents(self) -> list[int]:
        """Integer q-exponents matching ``prescribed`` entry by entry."""
        if self.parity == EVEN:
            return [2 * i for i in range(1, self.m + 1)]
        return list(range(1, self.mu + 1))

    def to_json(self) -> dict:
        return {
            "dimension": self.dimension,
            "parity": self.parity,
            "prescribed": [str(v) for v in self.prescribed],
        }

    @classmethod
    def from_json(cls, data) -> "LatticePrefix":
        return cls(int(data["dimension"]), data["parity"], tuple(Fraction(v) for v in data["prescribed"]))


@dataclass(frozen=True)
class BasisExpansion:
    parity: str
    dimension: int
    entries: tuple[QSeries, ...]
    leading: tuple[int, ...]  # integer q-exponent of each entry's monic leading term

    @property
    def order(self) -> int:
        return min(s.order for s in self.entries)


@dataclass(frozen=True)
class ThetaWeights:
    """Weights ``b_0..b_m`` (even) or ``a_0..a_{n//8}`` (general), leading weight 1.

    The dimension is carried along because the even basis and the numeric
    secrecy function both depend on it.
    """

    parity: str
    weights: tuple[Fraction, ...]
    dimension: int

    def __post_init__(self):
        if self.parity not in PARITIES:
            raise DomainError(f"parity must be 'even' or 'general', got {self.parity!r}")
        object.__setattr__(self, "weights", tuple(as_rat(w) for w in self.weights))
        if not self.weights or self.weights[0] != 1:
            raise DomainError("leading theta weight must equal 1")
        if self.parity == EVEN:
            m, _ = even_shape(self.dimension)
            expected = m + 1
        else:
            expected = self.dimension // 8 + 1
        if len(self.weights) != expected:
            raise DomainError(
                f"{self.parity} weights in dimension {self.dimension} need {expected} entries, "
                f"got {len(self.weights)}"
            )

    def to_json(self) -> dict:
        return {
            "dimension": self.dimension,
            "parity": self.parity,
            "weights": [str(w) for w in self.weights],
        }

    @classmethod
    def from_json(cls, data) -> "ThetaWeights":
        return cls(data["parity"], tuple(Fraction(w) for w in data["weights"]), int(data["dimension"]))


@functools.lru_cache(maxsize=64)
def even_basis(n: int, order: int | None = None) -> BasisExpansion:
    """Series ``E4^(3(m-j)+k) Delta^j`` for ``j = 0..m``."""
    m, k = even_shape(n)
    if order is None:
        order = default_order(n, EVEN)
    order = max(order, 2)
    if order < 2 * m:
        raise DomainError(f"order {order} too small for dimension {n}; need >= {2 * m}")
    e4 = named_form_series("E4", order)
    delta = named_form_series("Delta", order)
    entries = tuple(e4 ** (3 * (m - j) + k) * delta ** j for j in range(m + 1))
    leading = tuple(2 * j for j in range(m + 1))
    _check_monic(entries, leading)
    return BasisExpansion(EVEN, n, entries, leading)


@functools.lru_cache(maxsize=64)
def general_basis(n: int, order: int | None = None) -> BasisExpansion:
    """Series ``theta_3^(n-8r) Delta8^r`` for ``r = 0..n//8``."""
    if n < 1:
        raise DomainError(f"dimension must be positive, got {n}")
    mu = n // 8
    if order is None:
        order = default_order(n, GENERAL)
    order = max(order, 1)
    if order < mu:
        raise DomainError(f"order {order} too small for dimension {n}; need >= {mu}")
    t3 = theta_series(3, order)
    d8 = named_form_series("Delta8", order)
    entries = tuple(t3 ** (n - 8 * r) * d8 ** r for r in range(mu + 1))
    leading = tuple(range(mu + 1))
    _check_monic(entries, leading)
    return BasisExpansion(GENERAL, n, entries, leading)


def _check_monic(entries: Sequence[QSeries], leading: Sequence[int]) -> None:
    for s, e in zip(entries, leading):
        if s.leading_exponent() != e or s.coefficient(e) != 1:
            raise InternalError(f"basis element does not start with q^{e}")


def _solve_unitriangular(prefix: LatticePrefix, basis: BasisExpansion) -> ThetaWeights:
    # Row i: coefficient of the i-th prescribed exponent.  Element j contributes
    # only from its leading exponent onward, and element i has coefficient 1 there.
    exps = prefix.exponents()
    weights = [Fraction(1)]
    for i, (e, target) in enumerate(zip(exps, prefix.prescribed), start=1):
        acc = sum((w * basis.entries[j].coefficient(e) for j, w in enumerate(weights)), Fraction(0))
        weights.append(target - acc)
    return ThetaWeights(prefix.parity, tuple(weights), prefix.dimension)


def solve_even(prefix: LatticePrefix, order: int | None = None) -> ThetaWeights:
    """Weights ``b_0 = 1, b_1..b_m`` reproducing the prescribed q^2..q^(2m) coefficients."""
    if prefix.parity != EVEN:
        raise DomainError("solve_even needs an even prefix")
    return _solve_unitriangular(prefix, even_basis(prefix.dimension, order))


def solve_general(prefix: LatticePrefix, order: int | None = None) -> ThetaWeights:
    """Weights ``a_0 = 1, a_1..a_{n//8}`` reproducing the prescribed q^1..q^(n//8) coefficients."""
    if prefix.parity != GENERAL:
        raise DomainError("solve_general needs a general prefix")
    return _solve_unitriangular(prefix, general_basis(prefix.dimension, order))


def solve(prefix: LatticePrefix, order: int | None = None) -> ThetaWeights:
    if prefix.parity == EVEN:
        return solve_even(prefix, order)
    return solve_general(prefix, order)


def basis_for(weights: ThetaWeights, order: int | None = None) -> BasisExpansion:
    if weights.parity == EVEN:
        return even_basis(weights.dimension, order)
    return general_basis(weights.dimension, order)


def reconstruct_theta(weights: ThetaWeights, basis: BasisExpansion) -> QSeries:
    """The weighted sum of basis series: the full predicted theta series."""
    if weights.parity != basis.parity or weights.dimension != basis.dimension:
        raise DomainError("weights and basis belong to different representations")
    if len(weights.weights) != len(basis.entries):
        raise DomainError(
            f"{len(weights.weights)} weights for {len(basis.entries)} basis elements"
        )
    total = QSeries.zero(basis.order)
    for w, s in zip(weights.weights, basis.entries):
        total = total + s * w
    total.require_integral_exponents()
    if total.coefficient(0) != 1:
        raise InternalError("reconstructed theta series must have constant term 1")
    if weights.parity == EVEN:
        odd = [k for k in range(1, total.order + 1, 2) if total.coefficient(k)]
        if odd:
            raise InternalError(f"even-lattice theta series has odd exponents {odd}")
    return total
