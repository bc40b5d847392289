"""Degree-l cyclic fields over Q, enumerated by conductor.

A cyclic field of odd prime degree l corresponds to an order-l subgroup of
the Dirichlet character group mod f with conductor exactly f, and then
disc = f^(l-1).  Admissible conductors are products of distinct primes
p = 1 (mod l), optionally times l^2 (the wildly ramified case); a conductor
with t ramified primes carries exactly (l-1)^(t-1) fields, since the l-torsion
of the dual group is C_l^t and an order-l subgroup with full conductor has
(l-1)^t generators with all components nontrivial, l-1 of them per subgroup.

The oracle route ignores admissibility theory entirely: for every modulus f
it computes the number of order-l subgroups of the dual of (Z/fZ)* from the
unit group's cyclic decomposition and extracts the exact-conductor count by
Möbius inversion over divisors.
"""

from __future__ import annotations

from ..permgroup import CycleType
from .records import FieldList, FieldRecord, LocalRamification

__all__ = ["enumerate_cyclic", "cyclic_count_oracle"]


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def _iroot(n: int, k: int) -> int:
    if n < 1:
        return 0
    r = int(round(n ** (1.0 / k)))
    while r > 0 and r**k > n:
        r -= 1
    while (r + 1) ** k <= n:
        r += 1
    return r


def _primes_upto(n: int) -> list[int]:
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0:2] = b"\x00\x00"
    for p in range(2, int(n**0.5) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(sieve[p * p :: p]))
    return [i for i, v in enumerate(sieve) if v]


def _record_for_conductor(l: int, f: int, tame_primes: tuple[int, ...], wild: bool) -> FieldRecord:
    ram = [
        LocalRamification(
            p=p,
            kind="tame",
            disc_exponent=l - 1,
            tame_cycle_type=CycleType.from_parts([l]),
        )
        for p in tame_primes
    ]
    if wild:
        ram.append(
            LocalRamification(
                p=l,
                kind="wild",
                disc_exponent=2 * (l - 1),
                wild_label=f"{l}-C{l}-cond-{l * l}",
            )
        )
    return FieldRecord(
        degree=l,
        group_label=f"C{l}",
        abs_disc=f ** (l - 1),
        ramification=tuple(ram),
        disc_sign=1,
    )


def enumerate_cyclic(l: int, x: int) -> FieldList:
    """All degree-l cyclic fields over Q with disc = f^(l-1) <= x."""
    if l < 3 or not _is_prime(l) or l % 2 == 0:
        raise ValueError("l must be an odd prime")
    if x < 1:
        raise ValueError("x must be >= 1")
    fmax = _iroot(x, l - 1)
    tame_pool = [p for p in _primes_upto(fmax) if p % l == 1]
    records: list[FieldRecord] = []

    def emit(f: int, tame: tuple[int, ...], wild: bool):
        t = len(tame) + (1 if wild else 0)
        if t == 0:
            return
        for _ in range((l - 1) ** (t - 1)):
            records.append(_record_for_conductor(l, f, tame, wild))

    def dfs(start: int, f: int, tame: tuple[int, ...], wild: bool):
        emit(f, tame, wild)
        for i in range(start, len(tame_pool)):
            p = tame_pool[i]
            if f * p > fmax:
                break
            dfs(i + 1, f * p, tame + (p,), wild)

    dfs(0, 1, (), wild=False)
    if l * l <= fmax:
        dfs(0, l * l, (), wild=True)
    records.sort(key=lambda r: r.abs_disc)
    return FieldList(records=tuple(records), provenance="enumerated", x_max=x)


# ---------------------------------------------------------------------------
# Character-subgroup oracle

def _factorize(n: int) -> dict[int, int]:
    out = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def _unit_group_cyclic_orders(f: int) -> list[int]:
    """Cyclic decomposition orders of (Z/fZ)* (CRT over prime powers)."""
    orders = []
    for p, e in _factorize(f).items():
        if p == 2:
            if e == 1:
                continue
            if e == 2:
                orders.append(2)
            else:
                orders.extend([2, 2 ** (e - 2)])
        else:
            orders.append(p ** (e - 1) * (p - 1))
    return orders


def _subgroup_count(f: int, l: int) -> int:
    """Number of order-l subgroups of the character group mod f."""
    n_l = 1
    for o in _unit_group_cyclic_orders(f):
        if o % l == 0:
            n_l *= l
    return (n_l - 1) // (l - 1)


def cyclic_count_oracle(l: int, x: int) -> int:
    """Count degree-l cyclic fields with disc <= x by Möbius inversion.

    P(f) = S(f) - sum_{d | f, d < f} P(d), where S(f) is the number of
    order-l subgroups of the dual of (Z/fZ)*; the answer is
    sum_{f^(l-1) <= x} P(f).
    """
    fmax = _iroot(x, l - 1)
    # smallest prime factor sieve for divisor enumeration
    spf = list(range(fmax + 1))
    for p in range(2, int(fmax**0.5) + 1):
        if spf[p] == p:
            for k in range(p * p, fmax + 1, p):
                if spf[k] == k:
                    spf[k] = p
    primitive = [0] * (fmax + 1)
    total = 0
    for f in range(1, fmax + 1):
        # divisors of f via its factorization
        n, fac = f, {}
        while n > 1:
            p = spf[n]
            fac[p] = fac.get(p, 0) + 1
            n //= p
        divs = [1]
        for p, e in fac.items():
            divs = [d * p**k for d in divs for k in range(e + 1)]
        s = _subgroup_count(f, l)
        primitive[f] = s - sum(primitive[d] for d in divs if d < f)
        total += primitive[f]
    return total
