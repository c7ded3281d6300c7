"""Exact truncated q-series over the rationals.

Exponents live on a quarter-integer grid: the integer key ``e`` stands for
``q**(e/4)``.  This keeps theta_2, whose expansion starts at ``q**(1/4)``,
exactly representable alongside everything else.  The nome is
``q = exp(pi*i*tau)``, so a lattice vector of squared norm ``l`` contributes
``q**l`` to the theta series.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Union

from .errors import DomainError, InternalError

Rat = Fraction
Scalar = Union[int, Fraction]

QUARTER = 4  # grid points per unit exponent


def as_rat(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a reduced Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, (int, str)):
        return Fraction(value)
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def rat_str(value: Fraction) -> str:
    """Render as ``p/q`` (or ``p`` when the denominator is 1)."""
    return str(value)


class QSeries:
    """Immutable truncated series ``sum c_e q^(e/4)`` exact through ``q^order``.

    Coefficients past the truncation order are discarded on construction and
    zero coefficients are never stored.
    """

    __slots__ = ("_coeffs", "_order")

    def __init__(self, coeffs: Mapping[int, Scalar], order: int):
        if order < 0:
            raise DomainError(f"truncation order must be non-negative, got {order}")
        limit = QUARTER * order
        clean = {}
        for e, c in coeffs.items():
            if e < 0:
                raise DomainError("negative exponents are not supported")
            if e > limit:
                continue
            c = as_rat(c)
            if c:
                clean[int(e)] = c
        self._coeffs = dict(sorted(clean.items()))
        self._order = int(order)

    # constructors -------------------------------------------------------
    @classmethod
    def one(cls, order: int) -> "QSeries":
        return cls({0: 1}, order)

    @classmethod
    def zero(cls, order: int) -> "QSeries":
        return cls({}, order)

    @classmethod
    def from_integer_powers(cls, coeffs: Iterable[Scalar], order: int) -> "QSeries":
        """Build from a dense list ``[c_0, c_1, ...]`` of coefficients of ``q^k``."""
        return cls({QUARTER * k: c for k, c in enumerate(coeffs)}, order)

    # accessors ----------------------------------------------------------
    @property
    def order(self) -> int:
        return self._order

    @property
    def terms(self) -> dict[int, Fraction]:
        """Copy of the nonzero ``{quarter_exponent: coefficient}`` map."""
        return dict(self._coeffs)

    def coefficient(self, exponent: Scalar) -> Fraction:
        """Coefficient of ``q**exponent``; ``exponent`` may be a multiple of 1/4."""
        e = as_rat(exponent) * QUARTER
        if e.denominator != 1:
            raise DomainError(f"exponent {exponent} is not on the quarter grid")
        if e > QUARTER * self._order:
            raise DomainError(
                f"coefficient of q^{exponent} is beyond truncation order {self._order}"
            )
        return self._coeffs.get(int(e), Fraction(0))

    def integer_coefficients(self, upto: int | None = None) -> list[Fraction]:
        """Dense list of the coefficients of ``q^0 .. q^upto`` (integer grid only)."""
        if upto is None:
            upto = self._order
        self.require_integral_exponents()
        return [self.coefficient(k) for k in range(upto + 1)]

    def leading_exponent(self) -> Fraction | None:
        if not self._coeffs:
            return None
        return Fraction(next(iter(self._coeffs)), QUARTER)

    def has_integral_exponents(self) -> bool:
        return all(e % QUARTER == 0 for e in self._coeffs)

    def require_integral_exponents(self) -> None:
        if not self.has_integral_exponents():
            raise InternalError("series has fractional exponents where integral ones are required")

    def has_integral_coefficients(self) -> bool:
        return all(c.denominator == 1 for c in self._coeffs.values())

    def truncate(self, order: int) -> "QSeries":
        return QSeries(self._coeffs, min(order, self._order))

    # arithmetic ---------------------------------------------------------
    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = QSeries({0: other}, self._order)
        if not isinstance(other, QSeries):
            return NotImplemented
        out = dict(self._coeffs)
        for e, c in other._coeffs.items():
            out[e] = out.get(e, 0) + c
        return QSeries(out, min(self._order, other._order))

    __radd__ = __add__

    def __neg__(self) -> "QSeries":
        return QSeries({e: -c for e, c in self._coeffs.items()}, self._order)

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            return self + (-other)
        if not isinstance(other, QSeries):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = as_rat(other)
            return QSeries({e: c * other for e, c in self._coeffs.items()}, self._order)
        if not isinstance(other, QSeries):
            return NotImplemented
        order = min(self._order, other._order)
        limit = QUARTER * order
        out: dict[int, Fraction] = {}
        b_items = list(other._coeffs.items())
        for ea, ca in self._coeffs.items():
            if ea > limit:
                break
            for eb, cb in b_items:
                e = ea + eb
                if e > limit:
                    break
                out[e] = out.get(e, 0) + ca * cb
        return QSeries(out, order)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (Fraction(1) / as_rat(other))
        return NotImplemented

    def __pow__(self, exponent: int) -> "QSeries":
        if not isinstance(exponent, int) or exponent < 0:
            raise DomainError(f"series powers need a non-negative integer, got {exponent!r}")
        result = QSeries.one(self._order)
        base = self
        e = exponent
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        if not isinstance(other, QSeries):
            return NotImplemented
        return self._order == other._order and self._coeffs == other._coeffs

    def __hash__(self) -> int:
        return hash((self._order, tuple(self._coeffs.items())))

    def agrees_with(self, other: "QSeries") -> bool:
        """Equality up to the smaller of the two truncation orders."""
        order = min(self._order, other._order)
        return self.truncate(order)._coeffs == other.truncate(order)._coeffs

    def __repr__(self) -> str:
        return f"QSeries({self.pretty()}, order={self._order})"

    def pretty(self, max_terms: int = 8) -> str:
        parts = []
        for i, (e, c) in enumerate(self._coeffs.items()):
            if i == max_terms:
                parts.append("...")
                break
            parts.append(f"{rat_str(c)}*q^{_exp_str(e)}" if e else rat_str(c))
        return " + ".join(parts) if parts else "0"

    # serialization ------------------------------------------------------
    def to_json(self) -> dict:
        return {
            "order": self._order,
            "terms": [[e, rat_str(c)] for e, c in self._coeffs.items()],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "QSeries":
        return cls({int(e): Fraction(c) for e, c in data["terms"]}, int(data["order"]))


def _exp_str(e: int) -> str:
    x = Fraction(e, QUARTER)
    return str(x) if x.denominator == 1 else f"({x})"


def series_add(a: QSeries, b: QSeries) -> QSeries:
    return a + b


def series_mul(a: QSeries, b: QSeries) -> QSeries:
    return a * b


def series_pow(a: QSeries, e: int) -> QSeries:
    return a ** e


def _binomial_factor(power: int, sign: int, order: int) -> QSeries:
    """``1 + sign * q**power`` (``power`` in integer q units)."""
    if power == 0:
        return QSeries({0: 1 + sign}, order)
    return QSeries({0: 1, QUARTER * power: sign}, order)


def theta_series(index: int, order: int) -> QSeries:
    """Jacobi theta function expanded from its product formula.

    theta_2 = q^(1/4) prod (1-q^2n)(1+q^2n)(1+q^(2n-2))
    theta_3 = prod (1-q^2n)(1+q^(2n-1))^2
    theta_4 = prod (1-q^2n)(1-q^(2n-1))^2

    The n = 1 factor ``1 + q^0`` of theta_2 supplies its leading constant 2.
    """
    if index not in (2, 3, 4):
        raise DomainError(f"theta index must be 2, 3 or 4, got {index!r}")
    if order < 1:
        raise DomainError(f"theta expansion order must be >= 1, got {order}")
    if index == 2:
        result = QSeries({1: 1}, order)
    else:
        result = QSeries.one(order)
    n = 1
    while True:
        if index == 2:
            factors = [(2 * n, -1), (2 * n, 1), (2 * n - 2, 1)]
        else:
            sign = 1 if index == 3 else -1
            factors = [(2 * n, -1), (2 * n - 1, sign), (2 * n - 1, sign)]
        live = [(p, s) for p, s in factors if p <= order]
        if not live:
            break
        for p, s in live:
            result = result * _binomial_factor(p, s, order)
        n += 1
    return result


def named_form_series(form: str, order: int) -> QSeries:
    """Expansion of ``E4``, ``Delta`` or ``Delta8`` built from the theta functions.

    E4 = (theta_2^8 + theta_3^8 + theta_4^8) / 2,
    Delta = theta_2^8 theta_3^8 theta_4^8 / 256,
    Delta8 = theta_2^4 theta_4^4 / 16.
    """
    if form == "Delta" and order < 2:
        raise DomainError("Delta starts at q^2; order must be >= 2")
    if order < 1:
        raise DomainError(f"order must be >= 1, got {order}")
    t2 = theta_series(2, order)
    t4 = theta_series(4, order)
    if form == "E4":
        t3 = theta_series(3, order)
        out = (t2 ** 8 + t3 ** 8 + t4 ** 8) / 2
    elif form == "Delta":
        t3 = theta_series(3, order)
        out = (t2 ** 8 * t3 ** 8 * t4 ** 8) / 256
    elif form == "Delta8":
        out = (t2 ** 4 * t4 ** 4) / 16
    else:
        raise DomainError(f"unknown form {form!r}; expected E4, Delta or Delta8")
    out.require_integral_exponents()
    return out


def default_order(dimension: int, parity: str) -> int:
    """Working order: the largest prescribed exponent plus ``2*(n//8) + 8`` of slack."""
    if parity == "even":
        largest = 2 * (dimension // 24)
    else:
        largest = dimension // 8
    return largest + 2 * (dimension // 8) + 8
