"""Exact and asymptotic product distributions P_{a,b}(X).

P_{a,b}(X) = #{(s1, s2) : s_i in S_i, s1^a * s2^b <= X} for multisets of
positive integers S_i with counting functions F_i(X) ~ A_i X^{n_i} ln^{r_i} X.

Exact counts use a hyperbola split: with integer exponents alpha = a*L,
beta = b*L and threshold X' = X^L (L clearing both denominators),

    P = sum_{s1 <= t1} m1(s1) F2*(X'/s1^alpha)
      + sum_{s2 <= t2} m2(s2) F1*(X'/s2^beta)
      - F1*(t1-cap) F2*(t2-cap),

where t_i is the largest value with t_i^{2*exp} <= X', so each loop runs to
roughly the square root of the window and every threshold comparison is an
integer comparison.

The two asymptotic regimes: equal slopes n1/a = n2/b multiply the log powers
up through an exact Beta factor r1! r2! / (r1+r2+1)!; unequal slopes keep the
steeper form and scale its coefficient by the convergent weighted sum C'
computed by `csum`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import factorial, isqrt

from .errors import (
    DivergenceSuspected,
    InsufficientData,
    InsufficientRange,
    SlopeMismatch,
    SlopeNotGreater,
)

__all__ = [
    "CountingSequence",
    "AsymptoticForm",
    "product_count_exact",
    "predict_equal",
    "predict_unequal",
    "predict_unequal_bound",
    "csum",
    "predict_product_lower",
    "empirical_fit",
    "FitResult",
]


def _iroot(n: int, k: int) -> int:
    """Largest r >= 0 with r^k <= n (n >= 0)."""
    if n < 0:
        raise ValueError("negative radicand")
    if n == 0:
        return 0
    if k == 1:
        return n
    if k == 2:
        return isqrt(n)
    r = int(round(n ** (1.0 / k)))
    while r > 0 and r**k > n:
        r -= 1
    while (r + 1) ** k <= n:
        r += 1
    return r


def _max_value_with_pow_le(exp: int, bound: Fraction) -> int:
    """Largest integer v >= 0 with v^exp <= bound."""
    if bound < 1:
        return 0
    num, den = bound.numerator, bound.denominator
    # v^exp <= num/den  <=>  v^exp * den <= num
    v = _iroot(num // den, exp)
    while (v + 1) ** exp * den <= num:
        v += 1
    while v > 0 and v**exp * den > num:
        v -= 1
    return v


class CountingSequence:
    """A sorted multiset of positive integers, explicit or rule-backed.

    Rule-backed sequences ("integers", "squares") have closed-form counting
    functions and never run out of range; explicit sequences carry a
    completeness bound and raise InsufficientRange past it.
    """

    def __init__(self, entries=None, rule: str | None = None, complete_to: int | None = None):
        if (entries is None) == (rule is None):
            raise ValueError("give exactly one of entries or rule")
        self.rule = rule
        if entries is not None:
            entries = sorted((int(v), int(m)) for v, m in entries)
            if any(v < 1 or m < 1 for v, m in entries):
                raise ValueError("values and multiplicities must be positive")
            if len({v for v, _ in entries}) != len(entries):
                raise ValueError("duplicate values; merge multiplicities first")
            self.entries = entries
            self.complete_to = complete_to if complete_to is not None else (
                entries[-1][0] if entries else 0
            )
            self._prefix = []
            total = 0
            for _, m in entries:
                total += m
                self._prefix.append(total)
        else:
            if rule not in ("integers", "squares"):
                raise ValueError(f"unknown rule {rule!r}")
            self.entries = None
            self.complete_to = None

    @classmethod
    def integers(cls) -> "CountingSequence":
        return cls(rule="integers")

    @classmethod
    def squares(cls) -> "CountingSequence":
        return cls(rule="squares")

    @classmethod
    def from_values(cls, values, complete_to: int | None = None) -> "CountingSequence":
        counts: dict[int, int] = {}
        for v in values:
            counts[v] = counts.get(v, 0) + 1
        return cls(entries=sorted(counts.items()), complete_to=complete_to)

    def is_empty(self) -> bool:
        return self.entries is not None and not self.entries

    def count_upto(self, v: int) -> int:
        """F(v) = number of elements <= v, with multiplicity."""
        if v < 1:
            return 0
        if self.rule == "integers":
            return v
        if self.rule == "squares":
            return isqrt(v)
        if v > self.complete_to:
            raise InsufficientRange(
                f"sequence complete to {self.complete_to}, asked for {v}"
            )
        import bisect

        idx = bisect.bisect_right([e[0] for e in self.entries], v)
        return self._prefix[idx - 1] if idx else 0

    def count_pow_le(self, exp: int, bound: Fraction) -> int:
        """#{s : s^exp <= bound}."""
        return self.count_upto(_max_value_with_pow_le(exp, bound))

    def iter_upto(self, v: int):
        """Yield (value, multiplicity) for values <= v."""
        if self.rule == "integers":
            for s in range(1, v + 1):
                yield s, 1
            return
        if self.rule == "squares":
            for s in range(1, isqrt(v) + 1):
                yield s * s, 1
            return
        if v > self.complete_to:
            raise InsufficientRange(
                f"sequence complete to {self.complete_to}, asked for {v}"
            )
        for val, m in self.entries:
            if val > v:
                break
            yield val, m


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(x).limit_denominator(10**9)
    raise TypeError(f"cannot interpret {x!r} as a rational")


def product_count_exact(s1: CountingSequence, s2: CountingSequence, a, b, x) -> int:
    """Exact #{(s1, s2) : s1^a s2^b <= x} via the hyperbola split."""
    a, b, x = _as_fraction(a), _as_fraction(b), _as_fraction(x)
    if a <= 0 or b <= 0:
        raise ValueError("weights must be positive")
    if x < 1:
        return 0
    if s1.is_empty() or s2.is_empty():
        return 0
    lcm_den = a.denominator * b.denominator // math.gcd(a.denominator, b.denominator)
    alpha = int(a * lcm_den)
    beta = int(b * lcm_den)
    xp = x**lcm_den
    t1 = _max_value_with_pow_le(2 * alpha, xp)
    t2 = _max_value_with_pow_le(2 * beta, xp)
    total = 0
    for v, m in s1.iter_upto(t1):
        total += m * s2.count_pow_le(beta, xp / v**alpha)
    for v, m in s2.iter_upto(t2):
        total += m * s1.count_pow_le(alpha, xp / v**beta)
    total -= s1.count_upto(t1) * s2.count_upto(t2)
    return total


def product_count_brute(s1: CountingSequence, s2: CountingSequence, a, b, x) -> int:
    """O(|S1|*|S2|) reference double loop (test oracle)."""
    a, b, x = _as_fraction(a), _as_fraction(b), _as_fraction(x)
    lcm_den = a.denominator * b.denominator // math.gcd(a.denominator, b.denominator)
    alpha, beta, xp = int(a * lcm_den), int(b * lcm_den), x**lcm_den
    v1max = _max_value_with_pow_le(alpha, xp)
    total = 0
    for v1, m1 in s1.iter_upto(v1max):
        lhs = v1**alpha
        for v2, m2 in s2.iter_upto(_max_value_with_pow_le(beta, xp / lhs)):
            if lhs * v2**beta <= xp:
                total += m1 * m2
    return total


@dataclass(frozen=True)
class AsymptoticForm:
    """A X^n ln^r X with coefficient A >= 0, exponent n in (0, 1], integer r >= 0."""

    coefficient: float
    exponent: Fraction
    logpower: int

    def __post_init__(self):
        object.__setattr__(self, "exponent", _as_fraction(self.exponent))
        if not (0 < self.exponent <= 1):
            raise ValueError("exponent must lie in (0, 1]")
        if self.logpower < 0 or self.coefficient < 0:
            raise ValueError("coefficient and logpower must be nonnegative")

    def evaluate(self, x: float) -> float:
        return self.coefficient * x ** float(self.exponent) * math.log(x) ** self.logpower


def predict_equal(f1: AsymptoticForm, f2: AsymptoticForm, a, b) -> AsymptoticForm:
    """Equal-slope product: coefficient through the exact Beta factor."""
    a, b = _as_fraction(a), _as_fraction(b)
    slope1, slope2 = f1.exponent / a, f2.exponent / b
    if slope1 != slope2:
        raise SlopeMismatch(f"slopes differ: {slope1} vs {slope2}")
    r1, r2 = f1.logpower, f2.logpower
    beta_factor = Fraction(factorial(r1) * factorial(r2), factorial(r1 + r2 + 1))
    coeff = (
        f1.coefficient
        * f2.coefficient
        / float(a) ** r1
        / float(b) ** r2
        * float(beta_factor)
        * float(slope1)
    )
    return AsymptoticForm(coeff, slope1, r1 + r2 + 1)


def predict_unequal(f1: AsymptoticForm, f2: AsymptoticForm, a, b, c_prime: float) -> AsymptoticForm:
    """Steeper-slope product with caller-supplied convergent sum C' (see csum)."""
    a, b = _as_fraction(a), _as_fraction(b)
    slope1, slope2 = f1.exponent / a, f2.exponent / b
    if not slope1 > slope2:
        raise SlopeNotGreater(f"need n1/a > n2/b, got {slope1} <= {slope2}")
    coeff = f1.coefficient * c_prime / float(a) ** f1.logpower
    return AsymptoticForm(coeff, slope1, f1.logpower)


def predict_unequal_bound(f1: AsymptoticForm, f2: AsymptoticForm, a, b) -> AsymptoticForm:
    """Closed-form upper bound coefficient for the unequal-slope product."""
    a, b = _as_fraction(a), _as_fraction(b)
    slope1, slope2 = f1.exponent / a, f2.exponent / b
    if not slope1 > slope2:
        raise SlopeNotGreater(f"need n1/a > n2/b, got {slope1} <= {slope2}")
    r1, r2 = f1.logpower, f2.logpower
    coeff = (
        f1.coefficient
        * f2.coefficient
        * factorial(r2)
        / (float(b) ** r2 * float(a) ** r1)
        * float(slope1)
        / float(slope1 - slope2) ** (r2 + 1)
    )
    return AsymptoticForm(coeff, slope1, r1)


@dataclass(frozen=True)
class CsumResult:
    value: float
    x: float
    increment_last_doubling: float
    tail_estimate: float


def csum(
    s2: CountingSequence,
    b,
    n1_over_a,
    r1: int,
    x,
    divergence_tol: float = 0.05,
) -> CsumResult:
    """C(X) = sum_{m^b <= X} (b_m / m^{b*n1/a}) (1 - ln m^b / ln X)^{r1}.

    Monotone in X; DivergenceSuspected if the last doubling of X moved the
    sum by more than divergence_tol relative.  The tail estimate extrapolates
    the doubling increments geometrically (the integral comparison gives a
    geometric decay once b*n1/a exceeds the growth exponent of S2).
    """
    b = _as_fraction(b)
    n1_over_a = _as_fraction(n1_over_a)
    x = float(x)
    if x < 1:
        raise ValueError("x must be >= 1")
    beta = float(b * n1_over_a)

    def partial(upper: float) -> float:
        vmax = _max_value_with_pow_le(
            b.numerator, Fraction(upper).limit_denominator(10**15) ** b.denominator
        )
        ln_upper = math.log(upper) if upper > 1 else 0.0
        total = 0.0
        for v, m in s2.iter_upto(vmax):
            w = 1.0
            if r1 and ln_upper > 0:
                t = 1.0 - float(b) * math.log(v) / ln_upper
                if t <= 0:
                    continue
                w = t**r1
            total += m * w / v**beta
        return total

    c_half = partial(x / 2)
    c_full = partial(x)
    inc = c_full - c_half
    if c_full > 0 and inc > divergence_tol * c_full:
        raise DivergenceSuspected(
            f"last doubling moved C(X) by {inc:.3g} (value {c_full:.3g})"
        )
    c_quarter = partial(x / 4)
    prev_inc = c_half - c_quarter
    if prev_inc > 0 and 0 < inc < prev_inc:
        ratio = inc / prev_inc
        tail = inc * ratio / (1 - ratio)
    else:
        tail = inc
    return CsumResult(value=c_full, x=x, increment_last_doubling=inc, tail_estimate=tail)


def predict_product_lower(a1: int, deg1: int, b1: int, a2: int, deg2: int, b2: int):
    """Lower-bound shape (exponent, logpower) for the pair count of a product.

    Pairs are ordered by Disc(K)^deg2 * Disc(L)^deg1, so factor i contributes
    slope 1/(a_i * deg_other); the exponent is the larger slope and the log
    power is b-of-that-factor - 1, or b1 + b2 - 1 at equal slopes.
    """
    if min(a1, deg1, b1, a2, deg2, b2) < 1:
        raise ValueError("all inputs must be positive")
    slope1 = Fraction(1, a1 * deg2)
    slope2 = Fraction(1, a2 * deg1)
    if slope1 > slope2:
        return slope1, b1 - 1
    if slope2 > slope1:
        return slope2, b2 - 1
    return slope1, b1 + b2 - 1


@dataclass(frozen=True)
class FitResult:
    coefficient: float
    residual: float  # max relative deviation over the fit window
    points_used: int


def empirical_fit(counts, exponent, logpower: int) -> FitResult:
    """Fit N(X) / (X^e ln^r X) to a constant over the top decade of X."""
    pts = sorted((float(x), float(n)) for x, n in counts)
    if len(pts) < 8:
        raise InsufficientData(f"need >= 8 points, got {len(pts)}")
    if pts[0][0] <= 0 or pts[-1][0] / pts[0][0] < 10**3:
        raise InsufficientData("points must span at least 3 decades")
    e = float(_as_fraction(exponent))
    xmax = pts[-1][0]
    window = [(x, n) for x, n in pts if x >= xmax / 10]
    ratios = [n / (x**e * math.log(x) ** logpower) for x, n in window]
    coeff = sum(ratios) / len(ratios)
    resid = max(abs(r - coeff) for r in ratios) / coeff if coeff else float("inf")
    return FitResult(coefficient=coeff, residual=resid, points_used=len(window))
