"""Secrecy polynomials, exact secrecy gains and per-lattice minimum certificates.

With z = theta_2^4 theta_4^4 / theta_3^8 the inverse secrecy function of a
unimodular lattice is a polynomial P(z), and z runs over (0, 1/4] as y runs
over (0, inf), reaching 1/4 exactly at y = 1.  The conjectured secrecy gain
is therefore 1/P(1/4), and it is the true gain precisely when P attains its
minimum on (0, 1/4] at the right endpoint.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from fractions import Fraction

from .errors import DomainError, InternalError
from .poly import ZPoly, count_roots, isolate_roots, refine_root, squarefree_part, sturm_chain
from .thetasolve import EVEN, GENERAL, LatticePrefix, ThetaWeights, even_shape, solve

Z_MAX = Fraction(1, 4)
CERTIFIED = "certified"
REFUTED = "refuted"
INDETERMINATE = "indeterminate"


def even_zpoly(n: int, weights: ThetaWeights) -> ZPoly:
    """P(z) = sum_j b_j/256^j (1-z)^(3(m-j)+k) z^(2j)."""
    if weights.parity != EVEN:
        raise DomainError("even_zpoly needs even-parity weights")
    if weights.dimension != n:
        raise DomainError(f"weights are for dimension {weights.dimension}, not {n}")
    m, k = even_shape(n)
    one_minus_z = ZPoly([1, -1])
    total = ZPoly()
    for j, b in enumerate(weights.weights):
        term = one_minus_z ** (3 * (m - j) + k) * ZPoly.monomial(2 * j, b / Fraction(256) ** j)
        total = total + term
    return total


def general_zpoly(weights: ThetaWeights) -> ZPoly:
    """P(z) = sum_r a_r/16^r z^r."""
    if weights.parity != GENERAL:
        raise DomainError("general_zpoly needs general-parity weights")
    return ZPoly(a / Fraction(16) ** r for r, a in enumerate(weights.weights))


def zpoly_of(weights: ThetaWeights) -> ZPoly:
    if weights.parity == EVEN:
        return even_zpoly(weights.dimension, weights)
    return general_zpoly(weights)


def gain_at_unity(p: ZPoly) -> Fraction:
    """Exact 1/P(1/4): the secrecy function's value at y = 1."""
    v = p(Z_MAX)
    if v <= 0:
        raise DomainError(f"P(1/4) = {v} is not positive; not a valid lattice polynomial")
    return 1 / v


@dataclass(frozen=True)
class MinimumCertificate:
    """Outcome of checking that P attains its minimum over (0, 1/4] at z = 1/4.

    ``certified`` means P(z) >= P(1/4) on the whole interval, established by
    root counting; ``strict`` records whether the inequality is strict on
    (0, 1/4).  ``refuted`` carries an exact witness point with a smaller
    value and an isolating bracket for the interior minimizer.
    """

    verdict: str
    interior_critical_points: int
    endpoint_value: Fraction
    witness: str
    strict: bool = True
    witness_point: Fraction | None = None
    witness_value: Fraction | None = None
    minimizer_bracket: tuple[Fraction, Fraction] | None = None
    minimum_estimate: float | None = None

    @property
    def certified(self) -> bool:
        return self.verdict == CERTIFIED

    def to_json(self) -> dict:
        out = {
            "verdict": self.verdict,
            "interior_critical_points": self.interior_critical_points,
            "endpoint_value": str(self.endpoint_value),
            "strict": self.strict,
            "witness": self.witness,
        }
        if self.verdict == REFUTED:
            out["witness_point"] = str(self.witness_point)
            out["witness_value"] = str(self.witness_value)
            lo, hi = self.minimizer_bracket
            out["minimizer_bracket"] = [str(lo), str(hi)]
            out["minimum_estimate"] = self.minimum_estimate
            out["gain_estimate"] = 1 / self.minimum_estimate if self.minimum_estimate > 0 else None
        return out


def certify_minimum(p: ZPoly) -> MinimumCertificate:
    """Decide exactly whether min of P over (0, 1/4] is attained at 1/4."""
    if p.is_zero():
        raise DomainError("cannot certify the zero polynomial")
    end = p(Z_MAX)
    d = p.derivative()
    if d.is_zero():
        return MinimumCertificate(CERTIFIED, 0, end, "P is constant on (0, 1/4]", strict=False)

    dsq = squarefree_part(d)
    dchain = sturm_chain(dsq)
    crit = count_roots(d, 0, Z_MAX, dchain)
    probe = Z_MAX / 2
    if crit == 0:
        slope = d(probe)
        detail = (
            f"Sturm chain of squarefree P' has length {len(dchain)}; "
            f"P' has 0 roots in (0, 1/4) and P'(1/8) = {slope}"
        )
        if slope < 0:
            return MinimumCertificate(CERTIFIED, 0, end, detail + "; P strictly decreasing")
        # P strictly increasing: every interior point beats the endpoint
        return _refuted(p, end, 0, detail + "; P strictly increasing", probe)

    # P is not monotone: count where P - P(1/4) vanishes and read off its signs
    q = p - end
    roots = isolate_roots(q, 0, Z_MAX) if q.degree > 0 else []
    samples = _gap_points(q, roots)
    signs = [q(t) for t in samples]
    detail = (
        f"P' has {crit} distinct roots in (0, 1/4); P - P(1/4) has {len(roots)} "
        f"distinct roots in (0, 1/4), sampled at {len(samples)} root-free points"
    )
    negative = [t for t, s in zip(samples, signs) if s < 0]
    if not negative:
        if any(s == 0 for s in signs):
            raise InternalError("sample point chosen on a root")
        return MinimumCertificate(
            CERTIFIED, crit, end, detail + "; all samples positive", strict=not roots
        )
    return _refuted(p, end, crit, detail, negative[0])


def _gap_points(q: ZPoly, roots: list[tuple[Fraction, Fraction]]) -> list[Fraction]:
    # One point inside every maximal root-free open subinterval of (0, 1/4).
    bounds = [Fraction(0)]
    for lo, hi in roots:
        bounds.extend((lo, hi))
    bounds.append(Z_MAX)
    points = []
    for left, right in zip(bounds[::2], bounds[1::2]):
        # touching isolating intervals share an endpoint, which is never a root
        points.append((left + right) / 2 if left < right else left)
    return points


def _refuted(p: ZPoly, end: Fraction, crit: int, detail: str, point: Fraction) -> MinimumCertificate:
    value = p(point)
    if not value < end:
        raise InternalError("refutation witness does not beat the endpoint")
    bracket, estimate = _interior_minimum(p, point, value)
    return MinimumCertificate(
        REFUTED,
        crit,
        end,
        detail + f"; P({point}) = {value} < P(1/4) = {end}",
        strict=True,
        witness_point=point,
        witness_value=value,
        minimizer_bracket=bracket,
        minimum_estimate=estimate,
    )


def _interior_minimum(p: ZPoly, point: Fraction, value: Fraction, width=Fraction(1, 2 ** 60)):
    d = p.derivative()
    best = ((point, point), float(value), value)
    for lo, hi in isolate_roots(d, 0, Z_MAX):
        lo, hi = refine_root(d, lo, hi, width)
        mid = (lo + hi) / 2
        v = p(mid)
        if v < best[2]:
            best = ((lo, hi), float(v), v)
    # no interior critical point below the witness: infimum approached as z -> 0
    if best[0] == (point, point) and p(0) < value:
        best = ((Fraction(0), Fraction(0)), float(p(0)), p(0))
    return best[0], best[1]


# --- kissing-number theorems -------------------------------------------------

@dataclass(frozen=True)
class DifferenceReport:
    """Computed per-unit change of the inverse gain, with the two closed forms."""

    theorem: int
    dimension: int
    computed: Fraction
    statement_form: Fraction
    proof_form: Fraction
    statement_label: str
    proof_label: str

    @property
    def matches_statement(self) -> bool:
        return self.computed == self.statement_form

    @property
    def matches_proof(self) -> bool:
        return self.computed == self.proof_form

    def text(self) -> str:
        verdict = []
        if self.matches_statement:
            verdict.append("matches theorem statement")
        if self.matches_proof:
            verdict.append("matches proof substitution")
        if not verdict:
            verdict.append("matches neither closed form")
        return (
            f"computed per-unit difference = {self.computed}{_pow4_suffix(self.computed)}; "
            f"theorem statement {self.statement_label} = {self.statement_form}; "
            f"proof substitution {self.proof_label} = {self.proof_form}; "
            + ", ".join(verdict)
        )

    def to_json(self) -> dict:
        return {
            "theorem": self.theorem,
            "dimension": self.dimension,
            "computed": str(self.computed),
            "statement_form": {"expr": self.statement_label, "value": str(self.statement_form)},
            "proof_form": {"expr": self.proof_label, "value": str(self.proof_form)},
            "matches_statement": self.matches_statement,
            "matches_proof": self.matches_proof,
        }


def _pow4_suffix(x: Fraction) -> str:
    if x.numerator != 1:
        return ""
    d = x.denominator
    e = (d.bit_length() - 1) // 2
    return f" = 4^-{e}" if 4 ** e == d else ""


def inverse_gain(prefix: LatticePrefix) -> Fraction:
    """P(1/4) for the lattice polynomial determined by ``prefix``."""
    return zpoly_of(solve(prefix))(Z_MAX)


def _unit_step(dimension: int, parity: str, length: int) -> Fraction:
    base = [0] * length
    bumped = base[:-1] + [1]
    lo = inverse_gain(LatticePrefix(dimension, parity, tuple(base)))
    hi = inverse_gain(LatticePrefix(dimension, parity, tuple(bumped)))
    return hi - lo


def theorem1_unit_difference(n: int) -> Fraction:
    """Change in 1/gain when the count of squared-norm-2m vectors grows by one (even n)."""
    m, _ = even_shape(n)
    if m == 0:
        raise DomainError(f"dimension {n} has m = 0: no Delta term, the difference is undefined")
    return _unit_step(n, EVEN, m)


def theorem2_unit_difference(n: int) -> Fraction:
    """Change in 1/gain when the count of squared-norm n//8 vectors grows by one."""
    if n < 8:
        raise DomainError(f"dimension must be >= 8, got {n}")
    return _unit_step(n, GENERAL, n // 8)


def theorem1_report(n: int) -> DifferenceReport:
    m, k = even_shape(n)
    computed = theorem1_unit_difference(n)
    return DifferenceReport(
        1, n, computed,
        Fraction(3 ** k, 4 ** (6 * m + k)),
        Fraction(3 ** (2 * m), 4 ** (6 * m + k)),
        f"3^{k}/4^{6 * m + k}",
        f"3^{2 * m}/4^{6 * m + k}",
    )


def theorem2_report(n: int) -> DifferenceReport:
    s = n // 8
    computed = theorem2_unit_difference(n)
    return DifferenceReport(
        2, n, computed,
        Fraction(1, 4 ** (5 * s)),
        Fraction(1, 4 ** (3 * s)),
        f"4^-{5 * s}",
        f"4^-{3 * s}",
    )


def lin_oggier_gain(n: int, kissing: int) -> Fraction:
    """Closed-form gain 1/(1 - 2n/2^6 + (2n(n-23) + K)/2^12) for 16 <= n <= 23."""
    if not 16 <= n <= 23:
        raise DomainError(f"closed form holds only for 16 <= n <= 23, got {n}")
    if kissing < 0:
        raise DomainError("kissing number must be non-negative")
    denom = 1 - Fraction(2 * n, 2 ** 6) + Fraction(2 * n * (n - 23) + kissing, 2 ** 12)
    if denom <= 0:
        raise DomainError(f"closed form denominator {denom} is not positive")
    return 1 / denom


# --- reporting helpers -------------------------------------------------------

def decimal_str(x: Fraction, digits: int = 12) -> str:
    with localcontext() as ctx:
        ctx.prec = digits
        return str(Decimal(x.numerator) / Decimal(x.denominator))


def gain_db(x: Fraction) -> float:
    """10 log10(gain), floating point."""
    return 10 * math.log10(x)


@dataclass(frozen=True)
class GainReport:
    polynomial: ZPoly
    gain: Fraction
    certificate: MinimumCertificate
    weights: ThetaWeights | None = field(default=None)

    def to_json(self) -> dict:
        return {
            "polynomial": [str(c) for c in self.polynomial.coefficients],
            "gain": str(self.gain),
            "gain_decimal": decimal_str(self.gain),
            "gain_db": gain_db(self.gain),
            "certificate": self.certificate.to_json(),
        }


def gain_report(weights: ThetaWeights) -> GainReport:
    p = zpoly_of(weights)
    return GainReport(p, gain_at_unity(p), certify_minimum(p), weights)
