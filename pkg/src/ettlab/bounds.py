"""Closed-form criteria that force a multigraph to be elementary, and size bounds.

Rational thresholds are compared in integer arithmetic.  Thresholds with
logs or roots are evaluated as mpmath intervals and a criterion only counts
as met when the whole interval is on the right side, so a verdict never
overclaims.
"""

from __future__ import annotations

from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction

from mpmath import iv

PROVEN_JAKOBSEN_M = 39


@contextmanager
def _precision(bits: int):
    old = iv.prec
    iv.prec = bits
    try:
        yield
    finally:
        iv.prec = old


def _cbrt(x):
    return iv.exp(iv.log(x) / 3)


def _frac(raw) -> Fraction:
    sign, man, exp, _ = raw
    val = Fraction(int(man)) * (Fraction(2) ** exp)
    return -val if sign else val


def _interval(x) -> tuple[Fraction, Fraction]:
    """Exact endpoints, read from the raw tuples so nothing is re-rounded."""
    lo, hi = x._mpi_
    return _frac(lo), _frac(hi)


@dataclass(frozen=True)
class BoundVerdict:
    """``inequality_holds``: the criterion's own inequality (exact or rigorous).
    ``guaranteed``: it holds, the criterion applies and chi >= Delta + 2."""

    name: str
    inputs: dict
    threshold: Fraction | tuple[Fraction, Fraction] | None
    inequality_holds: bool
    guaranteed: bool
    applicable: bool = True
    note: str = ""

    def as_dict(self) -> dict:
        th = self.threshold
        if isinstance(th, Fraction):
            th = str(th)
        elif th is not None:
            th = [str(th[0]), str(th[1])]
        return {"name": self.name, "inputs": self.inputs, "threshold": th,
                "inequality_holds": self.inequality_holds, "guaranteed": self.guaranteed,
                "applicable": self.applicable, "note": self.note}


@dataclass(frozen=True)
class GuaranteeReport:
    verdicts: tuple[BoundVerdict, ...]

    @property
    def guaranteed(self) -> bool:
        return any(v.guaranteed for v in self.verdicts)

    def by_name(self, name: str) -> BoundVerdict:
        return next(v for v in self.verdicts if v.name == name)

    def as_dict(self) -> dict:
        return {"guaranteed": self.guaranteed, "verdicts": [v.as_dict() for v in self.verdicts]}


def _exact_cbrt(q: Fraction) -> Fraction | None:
    def icbrt(n):
        r = round(n ** (1 / 3))
        for c in (r - 1, r, r + 1):
            if c >= 0 and c ** 3 == n:
                return c
        return None
    a, b = icbrt(q.numerator), icbrt(q.denominator)
    return None if a is None or b is None else Fraction(a, b)


def cubic_verdict(delta: int, chi: int) -> BoundVerdict:
    """chi >= Delta + cbrt(Delta/4), decided exactly as 4 (chi - Delta)^3 >= Delta."""
    t = chi - delta
    holds = t >= 0 and 4 * t ** 3 >= delta
    root = _exact_cbrt(Fraction(delta, 4))
    if root is not None:
        th = delta + root
    else:
        with _precision(80):
            th = _interval(delta + _cbrt(iv.mpf(delta) / 4))
    return BoundVerdict("cubic", {"delta": delta, "chi": chi}, th, holds, holds and t >= 2)


def jakobsen_verdict(delta: int, chi: int, m: int = PROVEN_JAKOBSEN_M) -> BoundVerdict:
    """chi > m/(m-1) Delta + (m-3)/(m-1); proven for m up to 39."""
    if m < 3:
        raise ValueError("m must be at least 3")
    th = Fraction(m * delta + m - 3, m - 1)
    holds = chi * (m - 1) > m * delta + (m - 3)
    applicable = m <= PROVEN_JAKOBSEN_M
    note = "" if applicable else f"only proven for m <= {PROVEN_JAKOBSEN_M}"
    return BoundVerdict(f"jakobsen_m{m}", {"delta": delta, "chi": chi, "m": m}, th, holds,
                        holds and applicable and chi >= delta + 2, applicable, note)


def small_order_verdict(delta: int, chi: int, n: int | None = None) -> BoundVerdict:
    """Delta <= 39 or |V| <= 39, together with chi >= Delta + 2."""
    holds = delta <= 39 or (n is not None and n <= 39)
    note = "" if n is not None else "vertex-count clause not evaluated"
    return BoundVerdict("small_delta_or_order", {"delta": delta, "chi": chi, "n": n}, Fraction(delta + 2),
                        holds, holds and chi >= delta + 2, True, note)


def multiplicity_verdict(delta: int, mu: int, chi: int) -> BoundVerdict:
    """chi = Delta + mu with mu >= log_{5/4} log_{3/2}(Delta/2) + 1."""
    inputs = {"delta": delta, "mu": mu, "chi": chi}
    if delta <= 2:
        return BoundVerdict("multiplicity", inputs, None, False, False, False,
                            "iterated log undefined for Delta <= 2")
    with _precision(80):
        x = iv.log(iv.log(iv.mpf(delta) / 2) / iv.log(iv.mpf(3) / 2)) / iv.log(iv.mpf(5) / 4) + 1
    lo, hi = _interval(x)
    holds = chi == delta + mu and mu >= hi
    return BoundVerdict("multiplicity", inputs, (lo, hi), holds, holds and chi >= delta + 2)


def loglog_verdict(delta: int, mu: int, chi: int) -> BoundVerdict:
    """chi >= Delta + min{2 sqrt(mu (loglog(Delta/2) + log 2mu)), cbrt(mu log(Delta/2))}."""
    inputs = {"delta": delta, "mu": mu, "chi": chi}
    if delta <= 2:
        return BoundVerdict("loglog", inputs, None, False, False, False,
                            "log(Delta/2) must be positive")
    t = chi - delta
    with _precision(80):
        half = iv.log(iv.mpf(delta) / 2)
        cube = _cbrt(mu * half)
        inner = mu * (iv.log(half) + iv.log(iv.mpf(2 * mu)))
        parts = [_interval(cube)]
        if inner.a > 0:
            parts.append(_interval(2 * iv.sqrt(inner)))
    holds = any(t >= hi for _, hi in parts)
    th = (min(lo for lo, _ in parts), min(hi for _, hi in parts))
    return BoundVerdict("loglog", inputs, th, holds, holds and t >= 2)


def guarantee_classifier(delta: int, mu: int, chi: int, n: int | None = None,
                         m: int = PROVEN_JAKOBSEN_M) -> GuaranteeReport:
    if delta < 1 or mu < 1:
        raise ValueError("Delta and mu must be positive")
    if not delta <= chi <= delta + mu:
        raise ValueError(f"chi = {chi} is outside [Delta, Delta + mu] = [{delta}, {delta + mu}]")
    verdicts = [cubic_verdict(delta, chi), jakobsen_verdict(delta, chi, 39)]
    if m != 39:
        verdicts.append(jakobsen_verdict(delta, chi, m))
    verdicts += [small_order_verdict(delta, chi, n), multiplicity_verdict(delta, mu, chi),
                 loglog_verdict(delta, mu, chi)]
    return GuaranteeReport(tuple(verdicts))


def main3_lower_bound(k: int, delta: int) -> int:
    """Order forced on some elementary ETT of a non-elementary k-critical graph."""
    t = k - delta
    if t < 1:
        raise ValueError("need k >= Delta + 1")
    return max((2 * t + 1) ** 2 + 6, 22 * t + 17)


def elementary_set_cap(s: int, delta: int, k: int) -> int | None:
    """``s - 1`` when k > s/(s-1) Delta + (s-3)/(s-1), otherwise None."""
    if s < 2:
        raise ValueError("s must be at least 2")
    return s - 1 if k * (s - 1) > s * delta + (s - 3) else None


def tashkinov_order_bound(k: int, delta: int) -> int:
    """Lower bound on the order of some Tashkinov tree: max{2(k - Delta) + 1, 11}."""
    t = k - delta
    if t < 1:
        raise ValueError("need k >= Delta + 1")
    return max(2 * t + 1, 11)


def missing_count_bound(order: int, k: int, delta: int) -> int:
    """Missing colors on an elementary set containing both ends of the uncolored edge."""
    return order * (k - delta) + 2
