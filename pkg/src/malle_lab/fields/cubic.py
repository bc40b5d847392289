"""S_3 cubic fields over Q via integral binary cubic forms.

Cubic rings correspond to GL_2(Z)-classes of integral binary cubic forms
F = (a, b, c, d) (meaning a x^3 + b x^2 y + c x y^2 + d y^3) with
disc(R(F)) = disc(F); maximal irreducible forms with non-square disc are
exactly the S_3 cubic fields, one class per field.  The class action used
throughout is the twisted one, (M.F)(x, y) = F((x, y) M) / det M.

Reduction domains (derived from scratch; every bound is re-checked by the
brute-force box test in the suite and by exact agreement with the
independent polynomial-search route):

disc > 0.  The Hessian H = (P, Q, R) with P = b^2 - 3ac, Q = bc - 9ad,
R = c^2 - 3bd is positive definite with 4PR - Q^2 = 3D.  Call F reduced when
|Q| <= P <= R.  Then P <= sqrt(D) (from Q^2 <= PR), and eliminating c, d from
the Hessian entries yields the identity P(P - b^2)/(3a) + bQ = 3aR, whose
b-discriminant gives 4P^3 >= 27 a^2 D, hence

    a <= (4/27)^(1/2) D^(1/4),      |b| <= 3a/2 + sqrt(9a^2 + 4P)/2 <= 3a + D^(1/4),

with c determined by P in (0, sqrt(D)] and d confined to |Q| <= P.

disc < 0.  F has one real root theta and a complex pair phi, conj(phi); take
phi in the upper half plane.  Call F reduced when phi lies in the classical
fundamental domain |Re phi| <= 1/2, |phi| >= 1.  Both conditions are exact
integer sign tests: with a > 0, theta < t iff F(t_num, t_den) > 0, and
|phi|^2 = -d/(a theta).  For irreducible F the boundary cases force a
rational root, so they never occur and the reduced representative is unique
up to the mirror (a, -b, c, -d) (the det = -1 identification).  Writing
u = Re phi, v = Im phi, w = |theta - u|, one has
|D| = 4 a^4 v^2 (w^2 + v^2)^2, v^2 >= 3/4, giving

    a <= (16|D|/27)^(1/4),  w^2 + v^2 <= sqrt(|D|/3)/a^2,  w <= |D|^(1/4)/(3^(1/4) a),

and the coefficient bounds used by the search loops:

    |b| = a|3u +- w| <= 3a/2 + (|D|/3)^(1/4)
    |c| = a|3u^2 +- 2uw + v^2| <= 3a/4 + (|D|/3)^(1/4) + sqrt(|D|/3)/a.

d then runs over the integer window where |D(a,b,c,d)| <= X (a downward
parabola in d).

Maximality.  R(F) is non-maximal at p iff p divides the content of F, or F
mod p has a multiple root [x0:y0] in P^1(F_p) with p^2 | F(x0, y0) (the value
at a lift is well defined mod p^2 because the gradient vanishes at a multiple
root).  Only primes with p^2 | D can fail.
"""

from __future__ import annotations

from math import gcd, isqrt

from ..errors import InvariantViolation
from ..permgroup import CycleType
from ..util import pmap
from .records import FieldList, FieldRecord, LocalRamification

__all__ = ["disc_form", "hessian", "enumerate_cubic", "canonical_form"]

Form = tuple[int, int, int, int]


def disc_form(f: Form) -> int:
    a, b, c, d = f
    return (
        18 * a * b * c * d
        + b * b * c * c
        - 4 * a * c**3
        - 4 * b**3 * d
        - 27 * a * a * d * d
    )


def hessian(f: Form) -> tuple[int, int, int]:
    a, b, c, d = f
    return (b * b - 3 * a * c, b * c - 9 * a * d, c * c - 3 * b * d)


def transform(f: Form, m: tuple[int, int, int, int]) -> Form:
    """(M.F)(x,y) = F(m11 x + m21 y, m12 x + m22 y) / det M, M = (m11,m12,m21,m22)."""
    a, b, c, d = f
    m11, m12, m21, m22 = m
    det = m11 * m22 - m12 * m21
    if det not in (1, -1):
        raise ValueError("matrix must be unimodular")
    # F(m11 x + m21 y, m12 x + m22 y) expanded
    a2 = a * m11**3 + b * m11**2 * m12 + c * m11 * m12**2 + d * m12**3
    b2 = (
        3 * a * m11**2 * m21
        + b * (m11**2 * m22 + 2 * m11 * m12 * m21)
        + c * (2 * m11 * m12 * m22 + m12**2 * m21)
        + 3 * d * m12**2 * m22
    )
    c2 = (
        3 * a * m11 * m21**2
        + b * (2 * m11 * m21 * m22 + m12 * m21**2)
        + c * (m11 * m22**2 + 2 * m12 * m21 * m22)
        + 3 * d * m12 * m22**2
    )
    d2 = a * m21**3 + b * m21**2 * m22 + c * m21 * m22**2 + d * m22**3
    if det == 1:
        return (a2, b2, c2, d2)
    return (-a2, -b2, -c2, -d2)


_SMALL_MATS = tuple(
    (m11, m12, m21, m22)
    for m11 in (-1, 0, 1)
    for m12 in (-1, 0, 1)
    for m21 in (-1, 0, 1)
    for m22 in (-1, 0, 1)
    if m11 * m22 - m12 * m21 in (1, -1)
)


def _hessian_reduced(f: Form) -> bool:
    p, q, r = hessian(f)
    return 0 < p <= r and abs(q) <= p


def _reduce_pos(f: Form) -> Form:
    """Gaussian-reduce the Hessian, carrying the transform to the form."""
    for _ in range(10_000):
        p, q, r = hessian(f)
        if p <= 0:
            raise ValueError("Hessian not positive definite (disc <= 0?)")
        if p > r:
            f = transform(f, (0, -1, 1, 0))
            continue
        if abs(q) > p:
            # under (1, 0, t, 1): Q -> Q + 2Pt; nearest integer to -Q/(2P)
            t = (-q + p) // (2 * p)
            if t == 0:
                t = -1 if q > 0 else 1
            f = transform(f, (1, 0, t, 1))
            continue
        return f
    raise RuntimeError("reduction did not terminate")


def canonical_form(f: Form) -> Form:
    """Canonical representative of the GL_2(Z)-class (disc != 0, irreducible).

    disc > 0: lex-min over all Hessian-reduced forms reachable by one
    entries<=1 unimodular transform from a reduced representative (classical
    fact: equivalences between reduced positive quadratics have entries <= 1).
    disc < 0: reduce the complex root into the fundamental domain, then
    lex-min with the mirror.
    """
    d = disc_form(f)
    if d == 0:
        raise ValueError("degenerate form")
    if d > 0:
        f0 = _reduce_pos(f)
        p, q, r = hessian(f0)
        if abs(q) < p < r:
            # interior of the reduction domain: the only reduced images are
            # ±f0 and ±mirror (stabilizer {±1} x mirror)
            mirror = (f0[0], -f0[1], f0[2], -f0[3])
            return min(
                f0,
                tuple(-x for x in f0),
                mirror,
                tuple(-x for x in mirror),
            )
        cands = set()
        for m in _SMALL_MATS:
            g = transform(f0, m)
            if _hessian_reduced(g):
                cands.add(g)
                cands.add(tuple(-x for x in g))
        return min(cands)
    f0 = _reduce_neg(f)
    mirror = (f0[0], -f0[1], f0[2], -f0[3])
    return min(f0, mirror)


# -- negative discriminant reduction ----------------------------------------

def _eval_form(f: Form, x: int, y: int) -> int:
    a, b, c, d = f
    return a * x**3 + b * x**2 * y + c * x * y**2 + d * y**3


def _neg_reduced(f: Form) -> bool:
    """Exact fundamental-domain test for disc < 0, a > 0 forms.

    theta = the unique real root of F(t, 1).  Conditions:
      |2 Re phi| <= 1   <=>  -b/a - 1 <= theta <= -b/a + 1
      |phi|^2    >= 1   <=>  -d/a >= theta when theta > 0, else -d/a <= theta
    and theta > 0 iff d < 0.  Since F is irreducible, F never vanishes at the
    rational test points, so strict signs decide.  F(x, a) = a * g(x) with
    g(x) = x^3 + b x^2 + ac x + a^2 d, and F(-d, a) = a * h with
    h = d (a^2 - ac + bd - d^2)... expanded below.
    """
    a, b, c, d = f
    if a <= 0:
        raise ValueError("normalize a > 0 first")
    ac = a * c
    aad = a * a * d
    x = a - b  # g(a - b) >= 0  <=>  theta <= -b/a + 1
    if ((x + b) * x + ac) * x + aad < 0:
        return False
    x = -a - b  # g(-a - b) <= 0  <=>  theta >= -b/a - 1
    if ((x + b) * x + ac) * x + aad > 0:
        return False
    h = d * (a * a - c * a) + d * d * (b - d)  # = -d^3 + b d^2 - acd + a^2 d
    if d < 0:  # theta > 0: need -d/a >= theta <=> g(-d) >= 0
        return h >= 0
    return h <= 0


def _real_root_interval(f: Form) -> tuple:
    """Bracket the real root of F(t,1) between two rationals (num, den)."""
    from fractions import Fraction

    a, b, c, d = f
    bound = 1 + max(abs(b), abs(c), abs(d)) // a + 1
    lo, hi = Fraction(-bound), Fraction(bound)
    flo = _eval_form(f, lo.numerator, lo.denominator)
    assert flo < 0 and _eval_form(f, hi.numerator, hi.denominator) > 0
    return lo, hi


def _reduce_neg(f: Form) -> Form:
    """Walk the complex root pair into the fundamental domain (exact tests)."""
    from fractions import Fraction

    a = f[0]
    if a == 0:
        raise ValueError("reducible form (a = 0)")
    if a < 0:
        f = tuple(-x for x in f)
    half = Fraction(1, 2)
    for _ in range(10_000):
        if _neg_reduced(f):
            return f
        a, b, c, d = f
        # Re phi = (-b/a - theta)/2; bisect theta until the nearest integer
        # to Re phi is certified (Re phi is never a half-integer here)
        lo, hi = _real_root_interval(f)
        while True:
            relo = (Fraction(-b, a) - hi) / 2
            rehi = (Fraction(-b, a) - lo) / 2
            if (relo + half).__floor__() == (rehi + half).__floor__():
                t = (relo + half).__floor__()
                break
            mid = (lo + hi) / 2
            if _eval_form(f, mid.numerator, mid.denominator) > 0:
                hi = mid
            else:
                lo = mid
        if t != 0:
            # x -> x + t y shifts theta by -t and Re phi along with it
            f = transform(f, (1, 0, t, 1))
            continue
        # |Re phi| <= 1/2 but not reduced: |phi| < 1, invert (x,y) -> (-y,x)
        g = transform(f, (0, -1, 1, 0))
        if g[0] < 0:
            g = tuple(-x for x in g)
        if g == f:
            raise RuntimeError("reduction stalled")
        f = g
    raise RuntimeError("reduction did not terminate")


# -- irreducibility ----------------------------------------------------------

def _divisors_abs(n: int) -> list[int]:
    n = abs(n)
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            out.append(n // d)
        d += 1
    return out


def is_irreducible(f: Form) -> bool:
    """No rational linear factor (and a != 0)."""
    a, b, c, d = f
    if a == 0:
        return False
    if d == 0:
        return False  # root [0:1]
    # quick modular screens
    for p in (5, 7, 11):
        if a % p and not any(
            (_eval_form(f, r, 1)) % p == 0 for r in range(p)
        ):
            return True
    # exact rational root test: roots p/q with q | a, p | d
    for q in _divisors_abs(a):
        for p in _divisors_abs(d):
            if gcd(p, q) != 1:
                continue
            if _eval_form(f, p, q) == 0 or _eval_form(f, -p, q) == 0:
                return False
    return True


# -- maximality (non-membership in the non-maximal locus at each p) ----------

def _poly_gcd_mod(u: list[int], v: list[int], p: int) -> list[int]:
    """Monic gcd in F_p[x]; coefficients ascending, zero poly = []."""

    def trim(w):
        while w and w[-1] % p == 0:
            w.pop()
        return w

    u, v = trim([x % p for x in u]), trim([x % p for x in v])
    while v:
        inv = pow(v[-1], p - 2, p)
        r = u[:]
        for shift in range(len(r) - len(v), -1, -1):
            if len(r) < len(v) + shift:
                continue
            coef = r[len(v) + shift - 1] * inv % p
            if coef:
                for i, vc in enumerate(v):
                    r[i + shift] = (r[i + shift] - coef * vc) % p
            trim(r)
        u, v = v, trim(r)
    if u:
        inv = pow(u[-1], p - 2, p)
        u = [x * inv % p for x in u]
    return u


def _roots_mod_p(f: Form, p: int) -> list[tuple[int, int]]:
    """Multiple roots of F mod p in P^1(F_p), as integer lifts (x0, y0)."""
    a, b, c, d = f
    out = []
    if p <= 50:
        for r in range(p):
            if _eval_form(f, r, 1) % p == 0 and (3 * a * r * r + 2 * b * r + c) % p == 0:
                out.append((r, 1))
        if a % p == 0 and b % p == 0:
            out.append((1, 0))
        return out
    # p >= 53: no residue scan.  Infinite root first.
    if a % p == 0:
        if b % p == 0:
            out.append((1, 0))
        elif (c * c - 4 * b * d) % p == 0:
            # F = y*(b x^2 + c x y + d y^2) with a double finite root
            r = -c * pow(2 * b, p - 2, p) % p
            out.append((r, 1))
        return out
    # a invertible: multiple roots are roots of gcd(fbar, fbar') (p > 3)
    g = _poly_gcd_mod([d, c, b, a], [c, 2 * b, 3 * a], p)
    if len(g) == 2:  # x - r
        out.append((-g[0] % p, 1))
    elif len(g) == 3:  # (x - r)^2, a triple root of F
        out.append((-g[1] * pow(2, p - 2, p) % p, 1))
    return out


def _square_primes(n: int) -> list[int]:
    """Primes p with p^2 | n.

    Trial-divide up to n^(1/3); the remaining cofactor has all prime factors
    above the cube root, so it contains a square only when it is p^2 exactly.
    """
    out = []
    m = n
    p = 2
    while p * p * p <= n:
        if m % p == 0:
            k = 0
            while m % p == 0:
                m //= p
                k += 1
            if k >= 2:
                out.append(p)
        p += 1 if p == 2 else 2
    if m > 1:
        r = isqrt(m)
        if r * r == m:
            out.append(r)
    return out


def is_maximal(f: Form, d: int | None = None) -> bool:
    """True when the cubic ring of F is maximal (p-maximal at every p)."""
    a, b, c, dd = f
    if gcd(gcd(a, b), gcd(c, dd)) != 1:
        return False
    if d is None:
        d = disc_form(f)
    for p in _square_primes(abs(d)):
        if a % p == 0 and b % p == 0 and c % p == 0 and dd % p == 0:
            return False
        for x0, y0 in _roots_mod_p(f, p):
            if _eval_form(f, x0, y0) % (p * p) == 0:
                return False
    return True


# -- enumeration -------------------------------------------------------------

def _pos_candidates(x: int, a_range):
    """Hessian-reduced candidates with 0 < disc <= x, a in a_range."""
    out = []
    pmax = isqrt(x) + 1
    x4 = int(x**0.25) + 2
    for a in a_range:
        bmax = 3 * a + x4
        for b in range(-bmax, bmax + 1):
            # c window from 0 < P <= sqrt(X)
            c_lo = -(-(b * b - pmax) // (3 * a))  # ceil
            c_hi = (b * b - 1) // (3 * a)
            for c in range(c_lo, c_hi + 1):
                p = b * b - 3 * a * c
                if p <= 0 or p > pmax:
                    continue
                d_lo = -(-(b * c - p) // (9 * a))
                d_hi = (b * c + p) // (9 * a)
                for d in range(d_lo, d_hi + 1):
                    f = (a, b, c, d)
                    q = b * c - 9 * a * d
                    r = c * c - 3 * b * d
                    if abs(q) > p or r < p:
                        continue
                    dsc = disc_form(f)
                    if 0 < dsc <= x:
                        out.append((f, dsc))
    return out


def _neg_candidates(x: int, a_range):
    """Fundamental-domain-reduced candidates with -x <= disc < 0, a in a_range."""
    out = []
    x4 = (x / 3.0) ** 0.25
    for a in a_range:
        bmax = int(1.5 * a + x4) + 2
        cmax = int(0.75 * a + x4 + (x / 3.0) ** 0.5 / a) + 2
        a2 = 27 * a * a
        for b in range(-bmax, bmax + 1):
            for c in range(-cmax, cmax + 1):
                # disc(d) = -a2 d^2 + a1 d + a0; live window where -x <= disc,
                # minus the middle where disc >= 0
                a1 = 18 * a * b * c - 4 * b**3
                a0 = b * b * c * c - 4 * a * c**3
                disc_quad = a1 * a1 + 4 * a2 * (a0 + x)
                if disc_quad < 0:
                    continue
                sq = isqrt(disc_quad)
                d_lo = -(-(a1 - sq) // (2 * a2))
                d_hi = (a1 + sq) // (2 * a2)
                zero_quad = a1 * a1 + 4 * a2 * a0
                if zero_quad >= 0:
                    zq = isqrt(zero_quad)
                    mid_lo = (a1 - zq) // (2 * a2) + 1  # first d with disc > ... inside
                    mid_hi = -(-(a1 + zq) // (2 * a2)) - 1
                    segments = ((d_lo, min(mid_lo - 1, d_hi)), (max(mid_hi + 1, d_lo), d_hi))
                else:
                    segments = ((d_lo, d_hi),)
                for seg_lo, seg_hi in segments:
                    for d in range(seg_lo, seg_hi + 1):
                        dsc = a0 + d * (a1 - a2 * d)
                        if -x <= dsc < 0:
                            f = (a, b, c, d)
                            if _neg_reduced(f):
                                out.append((f, dsc))
    return out


def _amax_pos(x: int) -> int:
    return int((4.0 / 27.0) ** 0.5 * x**0.25) + 1


def _amax_neg(x: int) -> int:
    return int((16.0 * x / 27.0) ** 0.25) + 1


def _splitting_data(f: Form, p: int) -> int:
    """Multiplicity (2 or 3) of the multiple root of F mod p."""
    mults = _roots_mod_p(f, p)
    if not mults:
        raise InvariantViolation(f"p={p} divides disc but no multiple root mod p")
    x0, y0 = mults[0]
    a, b, c, d = f
    if y0 == 1:
        # F(x + x0, 1) has x^2-coefficient 3 a x0 + b; zero means a triple root
        triple = (3 * a * x0 + b) % p == 0
    else:
        # [1:0]: F(1, y) = a + b y + c y^2 + d y^3, triple iff p | a, b, c
        triple = c % p == 0
    return 3 if triple else 2


def _local_data(f: Form, dsc: int) -> tuple[LocalRamification, ...]:
    n = abs(dsc)
    fac = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            fac[p] = fac.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        fac[n] = fac.get(n, 0) + 1
    ram = []
    for p, v in sorted(fac.items()):
        e = _splitting_data(f, p)
        if e == 2:
            if p == 2:
                ram.append(
                    LocalRamification(p=2, kind="wild", disc_exponent=v, wild_label=f"2-e2-v{v}")
                )
            else:
                if v != 1:
                    raise InvariantViolation(f"tame e=2 at p={p} but v_p(disc)={v}")
                ram.append(
                    LocalRamification(
                        p=p, kind="tame", disc_exponent=1,
                        tame_cycle_type=CycleType.from_parts([2, 1]),
                    )
                )
        else:
            if p == 3:
                ram.append(
                    LocalRamification(p=3, kind="wild", disc_exponent=v, wild_label=f"3-e3-v{v}")
                )
            else:
                if v != 2:
                    raise InvariantViolation(f"tame e=3 at p={p} but v_p(disc)={v}")
                ram.append(
                    LocalRamification(
                        p=p, kind="tame", disc_exponent=2,
                        tame_cycle_type=CycleType.from_parts([3]),
                    )
                )
    return tuple(ram)


def _collect_chunk(args):
    x, sign, a_values = args
    cands = _pos_candidates(x, a_values) if sign > 0 else _neg_candidates(x, a_values)
    found = {}
    for f, dsc in cands:
        if sign > 0 and isqrt(dsc) ** 2 == dsc:
            continue  # cyclic cubic (Galois <=> square disc)
        if not is_irreducible(f):
            continue
        if not is_maximal(f, dsc):
            continue
        canon = canonical_form(f)
        found[canon] = dsc
    return found


def enumerate_cubic(x: int, workers: int = 1) -> FieldList:
    """All S_3 cubic fields over Q with |disc| <= x, both signatures."""
    if x < 1:
        raise ValueError("x must be >= 1")
    tasks = [(x, +1, [a]) for a in range(1, _amax_pos(x) + 1)]
    tasks += [(x, -1, [a]) for a in range(1, _amax_neg(x) + 1)]
    found: dict[Form, int] = {}
    for chunk in pmap(_collect_chunk, tasks, workers):
        found.update(chunk)
    records = []
    for f, dsc in found.items():
        records.append(
            FieldRecord(
                degree=3,
                group_label="S3",
                abs_disc=abs(dsc),
                ramification=_local_data(f, dsc),
                disc_sign=1 if dsc > 0 else -1,
            )
        )
    records.sort(key=lambda r: (r.abs_disc, r.disc_sign))
    return FieldList(records=tuple(records), provenance="enumerated", x_max=x)
