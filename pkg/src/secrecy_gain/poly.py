"""Dense univariate polynomials over Q and Sturm-sequence root counting."""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DomainError
from .qexp import as_rat


class ZPoly:
    """Polynomial with exact rational coefficients, stored degree-ascending."""

    __slots__ = ("_c",)

    def __init__(self, coefficients: Iterable = ()):
        c = [as_rat(x) for x in coefficients]
        while c and c[-1] == 0:
            c.pop()
        self._c = tuple(c)

    @classmethod
    def monomial(cls, degree: int, coeff=1) -> "ZPoly":
        return cls([0] * degree + [coeff])

    @property
    def coefficients(self) -> tuple[Fraction, ...]:
        return self._c

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self._c) - 1

    def is_zero(self) -> bool:
        return not self._c

    @property
    def lead(self) -> Fraction:
        return self._c[-1] if self._c else Fraction(0)

    def __call__(self, x) -> Fraction:
        x = as_rat(x)
        acc = Fraction(0)
        for c in reversed(self._c):
            acc = acc * x + c
        return acc

    def eval_float(self, x: float) -> float:
        acc = 0.0
        for c in reversed(self._c):
            acc = acc * x + float(c)
        return acc

    def derivative(self) -> "ZPoly":
        return ZPoly(i * c for i, c in enumerate(self._c) if i)

    def __add__(self, other):
        other = _lift(other)
        if other is None:
            return NotImplemented
        n = max(len(self._c), len(other._c))
        a = self._c + (Fraction(0),) * (n - len(self._c))
        b = other._c + (Fraction(0),) * (n - len(other._c))
        return ZPoly(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __neg__(self) -> "ZPoly":
        return ZPoly(-c for c in self._c)

    def __sub__(self, other):
        other = _lift(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = _lift(other)
        if other is None:
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return ZPoly()
        out = [Fraction(0)] * (len(self._c) + len(other._c) - 1)
        for i, a in enumerate(self._c):
            if a:
                for j, b in enumerate(other._c):
                    out[i + j] += a * b
        return ZPoly(out)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "ZPoly":
        if e < 0:
            raise DomainError("negative polynomial power")
        result, base = ZPoly([1]), self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __divmod__(self, other: "ZPoly") -> tuple["ZPoly", "ZPoly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self._c)
        dq = other.degree
        lead = other.lead
        quo = [Fraction(0)] * max(len(rem) - dq, 0)
        for i in range(len(rem) - 1, dq - 1, -1):
            c = rem[i] / lead
            if c:
                quo[i - dq] = c
                for j, b in enumerate(other._c):
                    rem[i - dq + j] -= c * b
        return ZPoly(quo), ZPoly(rem[:dq] if dq > 0 else [])

    def __mod__(self, other: "ZPoly") -> "ZPoly":
        return divmod(self, other)[1]

    def __floordiv__(self, other: "ZPoly") -> "ZPoly":
        return divmod(self, other)[0]

    def monic(self) -> "ZPoly":
        if self.is_zero():
            return self
        return self * (1 / self.lead)

    def __eq__(self, other) -> bool:
        other = _lift(other)
        if other is None:
            return NotImplemented
        return self._c == other._c

    def __hash__(self) -> int:
        return hash(self._c)

    def __repr__(self) -> str:
        return f"ZPoly({self.pretty()})"

    def pretty(self, var: str = "z") -> str:
        if not self._c:
            return "0"
        parts = []
        for i, c in enumerate(self._c):
            if not c:
                continue
            mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append(f"-{mono}")
            else:
                coef = str(c)
                parts.append(f"({coef})*{mono}" if "/" in coef else f"{coef}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


def _lift(x) -> ZPoly | None:
    if isinstance(x, ZPoly):
        return x
    if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
        return ZPoly([x])
    return None


def poly_gcd(a: ZPoly, b: ZPoly) -> ZPoly:
    """Monic gcd by the Euclidean algorithm."""
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def squarefree_part(f: ZPoly) -> ZPoly:
    """``f / gcd(f, f')``: same distinct roots, all simple."""
    if f.degree <= 0:
        return f
    g = poly_gcd(f, f.derivative())
    return (f // g).monic()


def sturm_chain(f: ZPoly) -> list[ZPoly]:
    """Sturm sequence ``f, f', -rem(f, f'), ...`` for a squarefree ``f``."""
    chain = [f, f.derivative()]
    while not chain[-1].is_zero():
        chain.append(-(chain[-2] % chain[-1]))
    chain.pop()
    return chain


def sign_variations(chain: Sequence[ZPoly], x) -> int:
    signs = [s for s in ((p(x) > 0) - (p(x) < 0) for p in chain) if s]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_roots(f: ZPoly, a, b, chain: Sequence[ZPoly] | None = None) -> int:
    """Number of distinct real roots of ``f`` in the open interval ``(a, b)``.

    ``chain`` must be the Sturm chain of the squarefree part of ``f`` if given.
    For squarefree g, V(a) - V(b) counts the roots in (a, b]; a root at b is
    then subtracted explicitly.
    """
    if f.is_zero():
        raise DomainError("the zero polynomial has infinitely many roots")
    a, b = as_rat(a), as_rat(b)
    if a >= b:
        return 0
    if chain is None:
        chain = sturm_chain(squarefree_part(f))
    n = sign_variations(chain, a) - sign_variations(chain, b)
    if f(b) == 0:
        n -= 1
    return n


def isolate_roots(f: ZPoly, a, b) -> list[tuple[Fraction, Fraction]]:
    """Disjoint intervals ``(lo, hi)`` each holding exactly one root of ``f`` in ``(a, b)``.

    Endpoints satisfy ``a < lo < root < hi < b`` and are never themselves roots,
    so the gaps between consecutive intervals are root-free.  Sorted.
    """
    a, b = as_rat(a), as_rat(b)
    g = squarefree_part(f)
    chain = sturm_chain(g)
    out: list[tuple[Fraction, Fraction]] = []
    stack = [(a, b, count_roots(g, a, b, chain))]
    while stack:
        lo, hi, n = stack.pop()
        if n == 0:
            continue
        if n == 1 and a < lo and hi < b and g(lo) != 0 and g(hi) != 0:
            out.append((lo, hi))
            continue
        mid = _nonroot_split(g, lo, hi)
        left = count_roots(g, lo, mid, chain)
        stack.append((lo, mid, left))
        stack.append((mid, hi, n - left))
    out.sort()
    return out


def _nonroot_split(g: ZPoly, lo: Fraction, hi: Fraction) -> Fraction:
    # g has finitely many roots, so some point on this ladder avoids them
    for d in range(2, 2 + g.degree + 2):
        t = lo + (hi - lo) / d
        if g(t) != 0:
            return t
    raise AssertionError("unreachable: more roots than the degree allows")


def refine_root(f: ZPoly, lo, hi, width) -> tuple[Fraction, Fraction]:
    """Shrink an isolating interval of a simple root (as from ``isolate_roots``) below ``width``."""
    g = squarefree_part(f)
    lo, hi, width = as_rat(lo), as_rat(hi), as_rat(width)
    slo = g(lo) > 0
    while hi - lo > width:
        mid = (lo + hi) / 2
        v = g(mid)
        if v == 0:
            return mid, mid
        if (v > 0) == slo:
            lo = mid
        else:
            hi = mid
    return lo, hi
