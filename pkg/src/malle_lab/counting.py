"""Pair counting for S_n x A: compositum discriminants, truncations, tails.

For a pair (K, L) with linearly disjoint Galois closures the compositum
discriminant is a product of local factors: at a prime tame in both fields
the exponent is product_index_general of the two inertia cycle types (the
unramified side contributing the identity type, which collapses to
Disc_p(K)^degL resp. Disc_p(L)^degK); at a prime wild in at least one field
with both ramified, the exponent comes from a user-supplied wild table in
exact mode, or from the interval

    [max(degL * vK, degK * vL), degL * vK + degK * vL]

in interval mode (upper end is the proved product bound; the lower end is a
tame-shaped heuristic, never used as a correctness assumption: interval
counts bracket N(X) by testing the pessimistic and optimistic ends).

Disc_Y replaces the local factor by the product bound above the cutoff Y,
so Disc_Y >= Disc and the truncated counts N_Y(X) increase to N(X) with Y.
d_Sigma is the exact ratio product-bound / Disc_Y over the primes <= Y.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from .convolve import FitResult, empirical_fit
from .errors import (
    InadmissiblePair,
    IncompleteList,
    InvariantViolation,
    LemmaFails,
    MissingWildEntry,
)
from .fields.records import FieldList, FieldRecord, LocalRamification
from .permgroup import CycleType, index_of, product_index_general
from .tamecomp import AbelianGroupSpec, RkTable, nonidentity_classes, verify_unin

__all__ = [
    "WildTable",
    "PairRecord",
    "CountReport",
    "compose_disc",
    "disc_truncated",
    "dsigma",
    "count_pairs",
    "euler_constant",
    "tail_bound_report",
]

_COPRIMALITY = {3: 2, 4: 6, 5: 30}


def _tame_key(loc: LocalRamification) -> str:
    if loc.kind == "tame":
        return "tame-" + ",".join(map(str, loc.tame_cycle_type.parts))
    return loc.wild_label


@dataclass(frozen=True)
class WildTable:
    """Exponent of Disc_p(KL) keyed by the two local labels at p.

    Tame sides are keyed as "tame-<parts>", e.g. "tame-2,1"; wild sides by
    their opaque wild_label.  Entries are validated at use against the
    product bound degL * vK + degK * vL.
    """

    entries: dict[tuple[str, str], int] = field(default_factory=dict)

    @classmethod
    def from_json(cls, obj) -> "WildTable":
        if isinstance(obj, str):
            obj = json.loads(obj)
        entries = {}
        for row in obj.get("pairs", []):
            entries[(str(row["k_label"]), str(row["l_label"]))] = int(row["exp"])
        return cls(entries)

    def to_json(self) -> dict:
        return {
            "pairs": [
                {"k_label": k, "l_label": l, "exp": e}
                for (k, l), e in sorted(self.entries.items())
            ]
        }

    def lookup(self, k_label: str, l_label: str) -> int | None:
        return self.entries.get((k_label, l_label))


EMPTY_WILD = WildTable()


def _check_admissible(k_rec: FieldRecord, l_rec: FieldRecord):
    label = k_rec.group_label
    if label not in ("S3", "S4", "S5"):
        raise InadmissiblePair(f"left field must be S3/S4/S5, got {label}")
    n = int(label[1])
    if k_rec.degree != n:
        raise InadmissiblePair(f"{label} field with degree {k_rec.degree}")
    if not l_rec.group_label.startswith("C"):
        raise InadmissiblePair(f"right field must be abelian (C...), got {l_rec.group_label}")
    if gcd(l_rec.degree, _COPRIMALITY[n]) != 1:
        raise InadmissiblePair(
            f"|A| = {l_rec.degree} not coprime to {_COPRIMALITY[n]} for n = {n}"
        )


def _local_exponent(
    k_rec: FieldRecord,
    l_rec: FieldRecord,
    p: int,
    wild: WildTable,
    mode: str,
) -> tuple[int, int]:
    """(lo, hi) exponent of p in Disc(KL); lo == hi when exact."""
    m, n = k_rec.degree, l_rec.degree  # degK, degL
    k_loc = k_rec.local_at(p)
    l_loc = l_rec.local_at(p)
    vk = k_loc.disc_exponent if k_loc else 0
    vl = l_loc.disc_exponent if l_loc else 0
    if k_loc is None or l_loc is None:
        # one inertia trivial: exact product rule
        e = n * vk + m * vl
        return e, e
    if k_loc.kind == "tame" and l_loc.kind == "tame":
        e = product_index_general(k_loc.tame_cycle_type, l_loc.tame_cycle_type)
        return e, e
    # wild on at least one ramified side
    hi = n * vk + m * vl
    lo = max(n * vk, m * vl)  # tame-shaped heuristic lower end
    if mode == "interval":
        return lo, hi
    e = wild.lookup(_tame_key(k_loc), _tame_key(l_loc))
    if e is None:
        raise MissingWildEntry(
            f"no wild entry for ({_tame_key(k_loc)}, {_tame_key(l_loc)}) at p={p}"
        )
    if e > hi:
        raise InvariantViolation(
            f"wild exponent {e} at p={p} exceeds the product bound {hi}"
        )
    return e, e


def compose_disc(
    k_rec: FieldRecord,
    l_rec: FieldRecord,
    wild: WildTable = EMPTY_WILD,
    mode: str = "exact",
):
    """Disc(KL): an integer in exact mode, else (lo, hi) interval."""
    if mode not in ("exact", "interval"):
        raise ValueError("mode must be exact or interval")
    _check_admissible(k_rec, l_rec)
    lo = hi = 1
    for p in sorted(set(k_rec.ramified_primes) | set(l_rec.ramified_primes)):
        elo, ehi = _local_exponent(k_rec, l_rec, p, wild, mode)
        lo *= p**elo
        hi *= p**ehi
    if mode == "exact":
        assert lo == hi
        return lo
    return lo, hi


def disc_product_bound(k_rec: FieldRecord, l_rec: FieldRecord) -> int:
    return k_rec.abs_disc**l_rec.degree * l_rec.abs_disc**k_rec.degree


def disc_truncated(
    k_rec: FieldRecord,
    l_rec: FieldRecord,
    wild: WildTable,
    y: int,
    mode: str = "exact",
):
    """Hybrid disc: exact local factors for p <= y, product bound above."""
    if mode not in ("exact", "interval"):
        raise ValueError("mode must be exact or interval")
    _check_admissible(k_rec, l_rec)
    lo = hi = 1
    m, n = k_rec.degree, l_rec.degree
    for p in sorted(set(k_rec.ramified_primes) | set(l_rec.ramified_primes)):
        if p <= y:
            elo, ehi = _local_exponent(k_rec, l_rec, p, wild, mode)
        else:
            k_loc = k_rec.local_at(p)
            l_loc = l_rec.local_at(p)
            vk = k_loc.disc_exponent if k_loc else 0
            vl = l_loc.disc_exponent if l_loc else 0
            elo = ehi = n * vk + m * vl
        lo *= p**elo
        hi *= p**ehi
    if mode == "exact":
        return lo
    return lo, hi


def dsigma(k_rec: FieldRecord, l_rec: FieldRecord, wild: WildTable, y: int) -> Fraction:
    """Product-bound / truncated ratio over p <= y; always >= 1 (exact mode)."""
    num = disc_product_bound(k_rec, l_rec)
    den = disc_truncated(k_rec, l_rec, wild, y, mode="exact")
    out = Fraction(num, den)
    if out < 1:
        raise InvariantViolation("d_Sigma < 1: local factor exceeded the product bound")
    return out


@dataclass(frozen=True)
class PairRecord:
    k: FieldRecord
    l: FieldRecord
    disc_exact: int | None  # None in interval mode
    disc_lo: int
    disc_hi: int
    disc_product_bound: int
    disc_truncated: dict

    def __post_init__(self):
        if not self.disc_lo <= self.disc_hi <= self.disc_product_bound:
            raise InvariantViolation("pair disc interval out of order")


def pair_record(
    k_rec: FieldRecord,
    l_rec: FieldRecord,
    wild: WildTable = EMPTY_WILD,
    mode: str = "exact",
    y_ladder=(),
) -> PairRecord:
    """Assemble the full per-pair record (exact or interval disc, truncations)."""
    if mode == "exact":
        d = compose_disc(k_rec, l_rec, wild, "exact")
        lo = hi = d
        exact = d
    else:
        lo, hi = compose_disc(k_rec, l_rec, wild, "interval")
        exact = None
    trunc = {}
    for y in y_ladder:
        if mode == "exact":
            trunc[y] = disc_truncated(k_rec, l_rec, wild, y, "exact")
        else:
            trunc[y] = disc_truncated(k_rec, l_rec, wild, y, "interval")
    return PairRecord(
        k=k_rec,
        l=l_rec,
        disc_exact=exact,
        disc_lo=lo,
        disc_hi=hi,
        disc_product_bound=disc_product_bound(k_rec, l_rec),
        disc_truncated=trunc,
    )


@dataclass(frozen=True)
class CountReport:
    grid: tuple[int, ...]
    n_lo: tuple[int, ...]
    n_hi: tuple[int, ...]
    n_y: dict  # y -> tuple of counts (lower ends)
    fit: FitResult | None
    fit_exponent: Fraction
    predicted_constant: float | None
    mode: str

    @property
    def n_exact(self) -> tuple[int, ...]:
        if self.mode != "exact":
            raise ValueError("exact counts only in exact mode")
        return self.n_lo


def _iroot(n: int, k: int) -> int:
    """Largest r with r^k <= n."""
    if n < 1:
        return 0
    r = int(round(n ** (1.0 / k)))
    while r > 0 and r**k > n:
        r -= 1
    while (r + 1) ** k <= n:
        r += 1
    return r


def default_grid(x_max: int, points: int = 16) -> list[int]:
    """Powers of 2 descending from x_max: x_max, x_max/2, ..."""
    grid = [x_max >> k for k in range(points)]
    return sorted(g for g in grid if g >= 1)


def count_pairs(
    sn_list: FieldList,
    ab_list: FieldList,
    x: int,
    wild: WildTable = EMPTY_WILD,
    mode: str = "exact",
    y_ladder=(),
    grid=None,
    window_slack: float = 1.0,
    predicted_constant: float | None = None,
) -> CountReport:
    """Count pairs (K, L) with Disc(KL) <= X over a grid, plus N_Y ladders.

    The K window needs Disc(K) <= X^(1/degL) * slack and symmetrically for
    L (at tame primes Disc(KL) >= max(Disc(K)^degL, Disc(L)^degK) forces
    slack 1; wild primes can only push a pair's disc *up* from the lower
    end, which is monotone in both marginals, so slack 1 stays sound for
    the lower end used in windowing).
    """
    if not sn_list.records or not ab_list.records:
        grid = grid or [x]
        zeros = tuple(0 for _ in grid)
        return CountReport(
            grid=tuple(grid), n_lo=zeros, n_hi=zeros,
            n_y={y: zeros for y in y_ladder}, fit=None,
            fit_exponent=Fraction(1, 1), predicted_constant=predicted_constant,
            mode=mode,
        )
    deg_l = ab_list.records[0].degree
    deg_k = sn_list.records[0].degree
    k_window = int(_iroot(x, deg_l) * window_slack)
    l_window = int(_iroot(x, deg_k) * window_slack)
    if sn_list.x_max < k_window:
        raise IncompleteList(
            f"S_n list complete to {sn_list.x_max}, window needs {k_window}"
        )
    if ab_list.x_max < l_window:
        raise IncompleteList(
            f"abelian list complete to {ab_list.x_max}, window needs {l_window}"
        )
    ks = sn_list.upto(k_window)
    ls = ab_list.upto(l_window)
    discs_lo, discs_hi = [], []
    trunc = {y: [] for y in y_ladder}
    below_marginal = False
    for k_rec in ks:
        for l_rec in ls:
            if mode == "exact":
                d = compose_disc(k_rec, l_rec, wild, "exact")
                lo_heur, _ = compose_disc(k_rec, l_rec, wild, "interval")
                if d < lo_heur:
                    below_marginal = True
                lo = hi = d
            else:
                lo, hi = compose_disc(k_rec, l_rec, wild, "interval")
            if lo > x:
                continue
            discs_lo.append(lo)
            discs_hi.append(hi)
            for y in y_ladder:
                if mode == "exact":
                    trunc[y].append(disc_truncated(k_rec, l_rec, wild, y, "exact"))
                else:
                    trunc[y].append(disc_truncated(k_rec, l_rec, wild, y, "interval")[1])
    if below_marginal and window_slack <= 1.0:
        import warnings

        warnings.warn(
            "wild table drops below the marginal lower bound; widen "
            "window_slack to guarantee completeness of the window",
            stacklevel=2,
        )
    if grid is None:
        grid = default_grid(x)
    grid = tuple(sorted(g for g in grid if g <= x))
    discs_lo.sort()
    discs_hi.sort()
    import bisect

    # N_hi counts pairs that may satisfy disc <= X (optimistic: lower ends);
    # N_lo counts pairs that surely do (upper ends)
    n_hi = tuple(bisect.bisect_right(discs_lo, g) for g in grid)
    n_lo = tuple(bisect.bisect_right(discs_hi, g) for g in grid)
    n_y = {}
    for y in y_ladder:
        tr = sorted(trunc[y])
        n_y[y] = tuple(bisect.bisect_right(tr, g) for g in grid)
    exponent = Fraction(1, deg_l)
    fit = None
    if len(grid) >= 8 and grid[-1] / grid[0] >= 10**3:
        counts = [(g, c) for g, c in zip(grid, n_lo) if c > 0]
        if len(counts) >= 8 and counts[-1][0] / counts[0][0] >= 10**3:
            fit = empirical_fit(counts, exponent, 0)
    return CountReport(
        grid=grid,
        n_lo=n_lo,
        n_hi=n_hi,
        n_y=n_y,
        fit=fit,
        fit_exponent=exponent,
        predicted_constant=predicted_constant,
        mode=mode,
    )


def count_pairs_brute(
    sn_list: FieldList,
    ab_list: FieldList,
    x: int,
    wild: WildTable = EMPTY_WILD,
    mode: str = "exact",
) -> int:
    """Unwindowed reference double loop over the full lists (test oracle).

    Counts by the same end of the interval as count_pairs' n_lo.
    """
    total = 0
    for k_rec in sn_list:
        for l_rec in ab_list:
            if mode == "exact":
                d = compose_disc(k_rec, l_rec, wild, "exact")
            else:
                d = compose_disc(k_rec, l_rec, wild, "interval")[1]
            if d <= x:
                total += 1
    return total


# ---------------------------------------------------------------------------
# Euler product

def c3_exact() -> float:
    """3058 * 3^-5 + 4 * 3^(4/3)."""
    return 3058.0 / 243.0 + 4.0 * 3.0 ** (4.0 / 3.0)


def _sieve(n: int) -> list[int]:
    sieve = bytearray([1]) * (n + 1)
    sieve[0:2] = b"\x00\x00"
    for p in range(2, int(n**0.5) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(sieve[p * p :: p]))
    return [i for i, v in enumerate(sieve) if v]


@dataclass(frozen=True)
class EulerReport:
    p_max: int
    value: float
    c3: float
    log_tail_last_decade: float  # sum of |ln c_p| over the top decade of p


def euler_constant(p_max: int, c3: float | None = None) -> EulerReport:
    """Partial product 2 * c3 * prod_{5 <= p <= p_max} c_p.

    c_p = (1 + 1/p + 5/p^2 + 2/p^(7/3))(1 - 1/p) for p = 1 mod 3 and
    (1 + 1/p + 1/p^2)(1 - 1/p) for p = 2 mod 3.
    """
    if p_max < 5:
        raise ValueError("p_max must be >= 5")
    if c3 is None:
        c3 = c3_exact()
    log_sum = 0.0
    log_tail = 0.0
    for p in _sieve(p_max):
        if p < 5:
            continue
        if p % 3 == 1:
            cp = (1 + 1 / p + 5 / p**2 + 2 / p ** (7 / 3)) * (1 - 1 / p)
        else:
            cp = (1 + 1 / p + 1 / p**2) * (1 - 1 / p)
        lg = math.log(cp)
        log_sum += lg
        if p > p_max / 10:
            log_tail += abs(lg)
    return EulerReport(
        p_max=p_max,
        value=2.0 * c3 * math.exp(log_sum),
        c3=c3,
        log_tail_last_decade=log_tail,
    )


# ---------------------------------------------------------------------------
# Tail bound diagnostic

@dataclass(frozen=True)
class TailReport:
    delta: Fraction
    tail_sum: float  # numeric proxy sum_{q > y} q^delta over integers
    y: int


def tail_bound_report(rk: RkTable, n: int, a: AbelianGroupSpec, y: int) -> TailReport:
    """delta = max over classes k, c != e of (-r_k + ind(k) - ind(k,c)/m).

    Requires the uniformity inequality to hold (delta <= -1 then, with
    strict inequality on the verified grids); the numeric tail is a partial
    sum plus an integral bound.
    """
    rep = verify_unin(n, a, rk)
    if not rep.passed:
        raise LemmaFails(f"uniformity inequality fails at witness {rep.witness}")
    m = a.order
    delta = None
    for ct in nonidentity_classes(n):
        r_val = rk.value(ct)
        best = None
        for order in a.order_counts():
            if order == 1:
                continue
            ratio = Fraction(
                product_index_general(ct, a.regular_cycle_type(order)), m
            )
            val = -r_val + index_of(ct) - ratio
            if best is None or val > best:
                best = val
        if delta is None or best > delta:
            delta = best
    if delta >= -1:
        raise LemmaFails(f"delta = {delta} is not < -1")
    d = float(delta)
    q0 = max(y + 1, 1)
    q_cut = max(10 * y, q0 + 1000)
    tail = sum(q**d for q in range(q0, q_cut + 1))
    # integral bound for the rest: int_{q_cut}^inf t^d dt
    tail += q_cut ** (d + 1) / (-d - 1)
    return TailReport(delta=delta, tail_sum=tail, y=y)
