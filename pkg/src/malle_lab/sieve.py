"""Lattice points of affine schemes in expanding (sheared) boxes mod q.

Counts #{a in m r B cap Z^n : a mod q in Y(Z/qZ)} two ways:

  * brute: enumerate the integer points of the sheared box exactly (the
    shear is lower-triangular unipotent, so coordinates resolve front to
    back with rational interval endpoints) and test every polynomial mod q;
  * residue: solve the system mod each prime of the squarefree q on a
    vectorized grid, combine by CRT, and count the lattice points of each
    residue class by slicing the box with stride q.

Both paths agree exactly and feed the scaling/shearing experiments, whose
log-log slopes are compared against the codimension-k envelope
r^(n-k) * max(1, (r/q)^k) and its anisotropic analogue
(prod r_i / q^k) * max over index subsets of q^j / (r_{i_1} ... r_{i_j}).
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import CapExceeded, InsufficientGrid, NotSquarefree

__all__ = [
    "AffineScheme",
    "BoxSpec",
    "ExperimentReport",
    "count_points_mod_q",
    "solutions_mod_q",
    "scaling_experiment",
    "sheared_experiment",
    "binary_cubic_disc_scheme",
]

DEFAULT_POINT_CAP = 10**7
DEFAULT_SOLUTION_CAP = 10**7


@dataclass(frozen=True)
class AffineScheme:
    """Integer polynomials in n_vars variables with a declared codimension."""

    n_vars: int
    polynomials: tuple  # tuple of tuples of (coef, exponent-vector)
    declared_codim: int

    def __post_init__(self):
        if not 1 <= self.declared_codim <= self.n_vars:
            raise ValueError("codimension must lie in 1..n_vars")
        if not self.polynomials:
            raise ValueError("need at least one polynomial")
        for poly in self.polynomials:
            if not poly:
                raise ValueError("zero polynomial in scheme")
            for coef, exps in poly:
                if len(exps) != self.n_vars:
                    raise ValueError("exponent vector length mismatch")

    @classmethod
    def from_json(cls, obj) -> "AffineScheme":
        if isinstance(obj, str):
            obj = json.loads(obj)
        polys = tuple(
            tuple((int(c), tuple(int(e) for e in exps)) for c, exps in poly)
            for poly in obj["polys"]
        )
        return cls(n_vars=int(obj["n_vars"]), polynomials=polys, declared_codim=int(obj["codim"]))

    def to_json(self) -> dict:
        return {
            "n_vars": self.n_vars,
            "codim": self.declared_codim,
            "polys": [[[c, list(e)] for c, e in poly] for poly in self.polynomials],
        }

    def eval_point_mod(self, point, q: int) -> bool:
        """All polynomials vanish at the point mod q."""
        for poly in self.polynomials:
            total = 0
            for coef, exps in poly:
                term = coef % q
                for x, e in zip(point, exps):
                    if e:
                        term = term * pow(x % q, e, q) % q
                total = (total + term) % q
            if total % q != 0:
                return False
        return True

    @classmethod
    def coordinate_subspace(cls, n_vars: int, constrained: int) -> "AffineScheme":
        """x_1 = ... = x_k = 0 in A^n."""
        polys = tuple(
            (( 1, tuple(1 if j == i else 0 for j in range(n_vars))),)
            for i in range(constrained)
        )
        return cls(n_vars=n_vars, polynomials=polys, declared_codim=constrained)


def binary_cubic_disc_scheme() -> AffineScheme:
    """The discriminant hypersurface of binary cubic forms in A^4."""
    # 18abcd + b^2c^2 - 4ac^3 - 4b^3d - 27a^2d^2
    poly = (
        (18, (1, 1, 1, 1)),
        (1, (0, 2, 2, 0)),
        (-4, (1, 0, 3, 0)),
        (-4, (0, 3, 0, 1)),
        (-27, (2, 0, 0, 2)),
    )
    return AffineScheme(n_vars=4, polynomials=(poly,), declared_codim=1)


@dataclass(frozen=True)
class BoxSpec:
    """A compact box B scaled by r (scalar or per-coordinate) and sheared.

    The region is m . diag(r) . B with B a product of intervals (default
    [-1, 1]^n) and m lower-triangular unipotent with rational entries.
    """

    n_vars: int
    intervals: tuple = None  # ((lo, hi) Fractions), default [-1, 1]^n
    scaling: tuple = (1,)  # scalar broadcast or per-coordinate
    shear: tuple = None  # rows of the lower-triangular unipotent matrix

    def __post_init__(self):
        if self.intervals is None:
            object.__setattr__(
                self, "intervals", tuple((Fraction(-1), Fraction(1)) for _ in range(self.n_vars))
            )
        ivals = tuple((Fraction(lo), Fraction(hi)) for lo, hi in self.intervals)
        if len(ivals) != self.n_vars or any(lo > hi for lo, hi in ivals):
            raise ValueError("bad base intervals")
        object.__setattr__(self, "intervals", ivals)
        scaling = self.scaling
        if not isinstance(scaling, tuple):
            scaling = (scaling,)
        if len(scaling) == 1:
            scaling = scaling * self.n_vars
        scaling = tuple(Fraction(s) for s in scaling)
        if len(scaling) != self.n_vars or any(s <= 0 for s in scaling):
            raise ValueError("bad scaling")
        object.__setattr__(self, "scaling", scaling)
        if self.shear is None:
            object.__setattr__(
                self,
                "shear",
                tuple(
                    tuple(Fraction(1) if i == j else Fraction(0) for j in range(self.n_vars))
                    for i in range(self.n_vars)
                ),
            )
        else:
            rows = tuple(tuple(Fraction(e) for e in row) for row in self.shear)
            for i, row in enumerate(rows):
                if len(row) != self.n_vars or row[i] != 1:
                    raise ValueError("shear must be unipotent")
                if any(row[j] != 0 for j in range(i + 1, self.n_vars)):
                    raise ValueError("shear must be lower triangular")
            object.__setattr__(self, "shear", rows)

    def with_scaling(self, r) -> "BoxSpec":
        return BoxSpec(self.n_vars, self.intervals, r if isinstance(r, tuple) else (r,), self.shear)

    def volume_bound(self) -> float:
        out = 1.0
        for (lo, hi), s in zip(self.intervals, self.scaling):
            out *= float((hi - lo) * s) + 1
        return out

    def coordinate_range(self, i: int, y_prefix) -> tuple[Fraction, Fraction]:
        """Interval of x_i given the unsheared values y_1..y_{i-1}."""
        lo, hi = self.intervals[i]
        base = sum(
            (self.shear[i][j] * y_prefix[j] for j in range(i)), Fraction(0)
        )
        return base + lo * self.scaling[i], base + hi * self.scaling[i]


def _ceil_frac(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


def _floor_frac(x: Fraction) -> int:
    return x.numerator // x.denominator


def iter_lattice_points(box: BoxSpec):
    """All integer points of the sheared box, exact interval arithmetic."""

    n = box.n_vars

    def rec(i, y_prefix):
        if i == n:
            yield ()
            return
        lo, hi = box.coordinate_range(i, y_prefix)
        base = sum((box.shear[i][j] * y_prefix[j] for j in range(i)), Fraction(0))
        for x in range(_ceil_frac(lo), _floor_frac(hi) + 1):
            y_i = Fraction(x) - base
            for rest in rec(i + 1, y_prefix + (y_i,)):
                yield (x,) + rest

    return rec(0, ())


def _count_brute(scheme: AffineScheme, box: BoxSpec, q: int) -> int:
    return sum(1 for pt in iter_lattice_points(box) if scheme.eval_point_mod(pt, q))


def _is_squarefree(q: int) -> bool:
    n, p = q, 2
    while p * p <= n:
        if n % (p * p) == 0:
            return False
        while n % p == 0:
            n //= p
        p += 1
    return True


def _prime_factors(q: int) -> list[int]:
    out, p = [], 2
    n = q
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def _solutions_mod_p(scheme: AffineScheme, p: int) -> np.ndarray:
    """(k, n) array of solutions over (Z/p)^n; first coordinate looped.

    Pure evaluation, so it works for any modulus; the CRT path feeds it
    primes, the multiplicativity oracle composites.
    """
    n = scheme.n_vars
    rest = p ** (n - 1)
    # digit arrays for coordinates 2..n
    idx = np.arange(rest, dtype=np.int64)
    digits = []
    t = idx.copy()
    for _ in range(n - 1):
        digits.append(t % p)
        t //= p
    sols = []
    for x0 in range(p):
        ok = np.ones(rest, dtype=bool)
        for poly in scheme.polynomials:
            acc = np.zeros(rest, dtype=np.int64)
            for coef, exps in poly:
                term = np.full(rest, coef % p, dtype=np.int64)
                if exps[0]:
                    term = term * pow(x0, exps[0], p) % p
                for d, e in zip(digits, exps[1:]):
                    for _ in range(e):
                        term = term * d % p
                acc = (acc + term) % p
            ok &= acc == 0
            if not ok.any():
                break
        hits = np.nonzero(ok)[0]
        if hits.size:
            pts = np.empty((hits.size, n), dtype=np.int64)
            pts[:, 0] = x0
            for j, d in enumerate(digits):
                pts[:, j + 1] = d[hits]
            sols.append(pts)
    if not sols:
        return np.empty((0, n), dtype=np.int64)
    return np.concatenate(sols)


def solutions_mod_q(
    scheme: AffineScheme, q: int, cap: int = DEFAULT_SOLUTION_CAP
) -> np.ndarray:
    """Solutions over (Z/q)^n for squarefree q, by CRT over its primes."""
    if q == 1:
        return np.zeros((1, scheme.n_vars), dtype=np.int64)
    if not _is_squarefree(q):
        raise NotSquarefree(f"q = {q}")
    sols = None
    mod = 1
    for p in _prime_factors(q):
        sp = _solutions_mod_p(scheme, p)
        if sols is None:
            sols, mod = sp, p
        else:
            if sols.shape[0] * sp.shape[0] > cap:
                raise CapExceeded("too many residue solutions")
            # x = a mod `mod`, x = b mod p
            inv = pow(mod, -1, p)
            a = np.repeat(sols, sp.shape[0], axis=0)
            b = np.tile(sp, (sols.shape[0], 1))
            t = ((b - a) % p) * inv % p
            sols = (a + mod * t) % (mod * p)
            mod *= p
        if sols.shape[0] > cap:
            raise CapExceeded("too many residue solutions")
    return sols


def _count_residue_class(box: BoxSpec, residue, q: int) -> int:
    """Lattice points x = residue (mod q) in the sheared box."""

    n = box.n_vars

    def rec(i, y_prefix):
        if i == n:
            return 1
        lo, hi = box.coordinate_range(i, y_prefix)
        base = sum((box.shear[i][j] * y_prefix[j] for j in range(i)), Fraction(0))
        start = _ceil_frac(lo)
        start += (residue[i] - start) % q
        total = 0
        x = start
        hi_int = _floor_frac(hi)
        if i == n - 1:
            if x > hi_int:
                return 0
            return (hi_int - x) // q + 1
        while x <= hi_int:
            total += rec(i + 1, y_prefix + (Fraction(x) - base,))
            x += q
        return total

    return rec(0, ())


def _count_residue_axis_aligned(box: BoxSpec, sols: np.ndarray, q: int) -> int:
    """Vectorized residue counting when the shear is the identity."""
    total = 0
    counts_per_coord = []
    for i in range(box.n_vars):
        lo = box.intervals[i][0] * box.scaling[i]
        hi = box.intervals[i][1] * box.scaling[i]
        lo_i, hi_i = _ceil_frac(lo), _floor_frac(hi)
        cnt = np.zeros(q, dtype=np.int64)
        for r in range(q):
            start = lo_i + (r - lo_i) % q
            cnt[r] = 0 if start > hi_i else (hi_i - start) // q + 1
        counts_per_coord.append(cnt)
    prod = np.ones(sols.shape[0], dtype=np.int64)
    for i in range(box.n_vars):
        prod *= counts_per_coord[i][sols[:, i] % q]
    total = int(prod.sum())
    return total


def _is_identity_shear(box: BoxSpec) -> bool:
    return all(
        box.shear[i][j] == (1 if i == j else 0)
        for i in range(box.n_vars)
        for j in range(i + 1)
    )


def count_points_mod_q(
    scheme: AffineScheme,
    box: BoxSpec,
    q: int,
    method: str = "auto",
    point_cap: float = DEFAULT_POINT_CAP,
) -> int:
    """#{a in the sheared box cap Z^n : a mod q in Y(Z/qZ)}."""
    if scheme.n_vars != box.n_vars:
        raise ValueError("scheme and box dimension mismatch")
    if q < 1 or not _is_squarefree(q):
        raise NotSquarefree(f"q = {q}")
    if method == "auto":
        method = "residue" if box.volume_bound() > 2 * 10**5 else "brute"
    if method == "brute":
        if box.volume_bound() > point_cap:
            raise CapExceeded(
                f"box holds ~{box.volume_bound():.2g} points, cap {point_cap:.2g}"
            )
        return _count_brute(scheme, box, q)
    if method != "residue":
        raise ValueError("method must be auto, brute or residue")
    sols = solutions_mod_q(scheme, q)
    if _is_identity_shear(box):
        return _count_residue_axis_aligned(box, sols, q)
    return sum(_count_residue_class(box, tuple(int(v) for v in s), q) for s in sols)


# ---------------------------------------------------------------------------
# Experiments

@dataclass(frozen=True)
class ExperimentReport:
    scheme_codim: int
    n_vars: int
    entries: tuple  # ((r, q, count), ...) with r scalar or tuple
    fitted_q_exponent: float | None
    fitted_q_residual: float | None
    fitted_r_exponent: float | None
    envelope_ratios: tuple
    crt_residuals: tuple  # ((q1, q2, direct, product-of-counts), ...)
    seed: int | None = None


def _ols_slope(xs, ys) -> tuple[float, float]:
    """Least-squares slope of ys on xs, with max abs residual."""
    A = np.vstack([xs, np.ones(len(xs))]).T
    sol, *_ = np.linalg.lstsq(A, np.array(ys), rcond=None)
    resid = np.abs(A @ sol - ys).max()
    return float(sol[0]), float(resid)


def _check_grid_span(grid, name: str):
    vals = [float(v) for v in grid]
    if len(vals) < 3 or max(vals) / min(vals) < 10:
        raise InsufficientGrid(f"{name} grid must span a decade with >= 3 points")


def scaling_experiment(scheme: AffineScheme, r_grid, q_grid, box: BoxSpec | None = None) -> ExperimentReport:
    """Counts over an (r, q) grid with log-log slope fits.

    The q-exponent is fitted at the largest r (the (r/q)^k regime, slope
    close to -codim); the r-exponent at the smallest q (slope close to n).
    """
    _check_grid_span(r_grid, "r")
    _check_grid_span(q_grid, "q")
    if box is None:
        box = BoxSpec(scheme.n_vars)
    entries = []
    counts = {}
    for r in r_grid:
        for q in q_grid:
            c = count_points_mod_q(scheme, box.with_scaling(r), q, method="residue")
            counts[(r, q)] = c
            entries.append((r, q, c))
    r_top = max(r_grid)
    k = scheme.declared_codim
    n = scheme.n_vars
    qs = [q for q in q_grid if counts[(r_top, q)] > 0]
    fitted_q = fitted_q_resid = None
    if len(qs) >= 3:
        fitted_q, fitted_q_resid = _ols_slope(
            [math.log(q) for q in qs], [math.log(counts[(r_top, q)]) for q in qs]
        )
    q_bot = min(q_grid)
    rs = [r for r in r_grid if counts[(r, q_bot)] > 0]
    fitted_r = None
    if len(rs) >= 3:
        fitted_r, _ = _ols_slope(
            [math.log(r) for r in rs], [math.log(counts[(r, q_bot)]) for r in rs]
        )
    ratios = []
    for r, q, c in entries:
        envelope = float(r) ** (n - k) * max(1.0, (float(r) / q) ** k)
        ratios.append((r, q, c / envelope))
    crt = _crt_residuals(scheme, box, r_top, q_grid)
    return ExperimentReport(
        scheme_codim=k,
        n_vars=n,
        entries=tuple(entries),
        fitted_q_exponent=fitted_q,
        fitted_q_residual=fitted_q_resid,
        fitted_r_exponent=fitted_r,
        envelope_ratios=tuple(ratios),
        crt_residuals=crt,
    )


def _crt_residuals(scheme, box, r, q_grid) -> tuple:
    """Exact multiplicativity check: counts of solutions mod coprime parts."""
    out = []
    from math import gcd

    qs = sorted(set(q_grid))
    for i, q1 in enumerate(qs):
        for q2 in qs[i + 1 :]:
            if gcd(q1, q2) != 1 or (q1 * q2) ** scheme.n_vars > 10**7:
                continue
            s12 = _brute_solution_count(scheme, q1 * q2)
            s1 = _brute_solution_count(scheme, q1)
            s2 = _brute_solution_count(scheme, q2)
            out.append((q1, q2, s12, s1 * s2))
            if len(out) >= 4:
                return tuple(out)
    return tuple(out)


def _brute_solution_count(scheme: AffineScheme, q: int) -> int:
    """Direct count of solutions over (Z/q)^n without CRT (residual oracle)."""
    return int(_solutions_mod_p(scheme, q).shape[0])


def sheared_experiment(
    scheme: AffineScheme,
    r_vector_grid,
    q_grid,
    shear_samples: int = 3,
    seed: int = 0,
    envelope_factor: float = 64.0,
    box: BoxSpec | None = None,
) -> ExperimentReport:
    """Random lower-triangular unipotent shears against the anisotropic envelope."""
    _check_grid_span([max(rv) for rv in r_vector_grid], "r")
    _check_grid_span(q_grid, "q")
    if box is None:
        box = BoxSpec(scheme.n_vars)
    rng = random.Random(seed)
    n = scheme.n_vars
    k = scheme.declared_codim
    shears = []
    for _ in range(shear_samples):
        rows = []
        for i in range(n):
            row = [Fraction(0)] * n
            row[i] = Fraction(1)
            for j in range(i):
                row[j] = Fraction(rng.randint(-6, 6), 2)
            rows.append(tuple(row))
        shears.append(tuple(rows))
    entries = []
    ratios = []
    for rv in r_vector_grid:
        rv = tuple(Fraction(r) for r in rv)
        for q in q_grid:
            for shear in shears:
                b = BoxSpec(n, box.intervals, rv, shear)
                c = count_points_mod_q(scheme, b, q, method="brute")
                entries.append((tuple(float(r) for r in rv), q, c))
                env = float(np.prod([float(r) for r in rv])) / q**k
                sorted_r = sorted(float(r) for r in rv)
                worst = max(
                    q**j / float(np.prod(sorted_r[:j])) if j else 1.0
                    for j in range(k + 1)
                )
                ratios.append((tuple(float(r) for r in rv), q, c / (env * worst)))
    max_ratio = max(r[2] for r in ratios)
    if max_ratio > envelope_factor:
        raise AssertionError(
            f"count exceeded {envelope_factor} x the anisotropic envelope: {max_ratio:.2f}"
        )
    return ExperimentReport(
        scheme_codim=k,
        n_vars=n,
        entries=tuple(entries),
        fitted_q_exponent=None,
        fitted_q_residual=None,
        fitted_r_exponent=None,
        envelope_ratios=tuple(ratios),
        crt_residuals=(),
        seed=seed,
    )
