"""Uniformity of cyclic-field counts under forced ramification.

N_q(A, X) counts the A-fields with disc <= X whose discriminant every prime
of the squarefree q divides.  The check compares N_q against the shape
(X/q)^(1/a(A)) * ln^(b-1) X with a, b computed from the materialized regular
representation of A, and asserts a single bound across a grid of q.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import log

from ..errors import IncompleteList
from ..invariants import a_invariant, b_invariant_Q, close_group
from ..permgroup import Permutation
from .cyclic import enumerate_cyclic
from .records import FieldList

__all__ = ["abelian_uniformity_check", "UniformityReport"]


@dataclass(frozen=True)
class QRatio:
    q: int
    count: int
    shape: float
    ratio: float


@dataclass(frozen=True)
class UniformityReport:
    l: int
    x: int
    a: int
    b: int
    per_q: tuple[QRatio, ...]

    @property
    def max_ratio(self) -> float:
        return max(r.ratio for r in self.per_q)

    def bounded_by(self, const: float) -> bool:
        return self.max_ratio <= const


def _is_squarefree(q: int) -> bool:
    p = 2
    n = q
    while p * p <= n:
        if n % (p * p) == 0:
            return False
        while n % p == 0:
            n //= p
        p += 1
    return True


def abelian_uniformity_check(
    l: int, qs, x: int, field_list: FieldList | None = None
) -> UniformityReport:
    """Ratios N_q / (X/q)^(1/a) ln^(b-1) X over the q grid."""
    if field_list is None:
        field_list = enumerate_cyclic(l, x)
    if field_list.x_max < x:
        raise IncompleteList(f"list complete to {field_list.x_max} < {x}")
    cycle = Permutation.from_cycles([tuple(range(1, l + 1))], degree=l)
    group = close_group([cycle])
    a = a_invariant(group)
    b = b_invariant_Q(group)
    per_q = []
    for q in qs:
        if q < 1 or not _is_squarefree(q):
            raise ValueError(f"q must be squarefree positive, got {q}")
        primes = _prime_factors(q)
        count = 0
        for rec in field_list.upto(x):
            ram = set(rec.ramified_primes)
            if all(p in ram for p in primes):
                count += 1
        shape = (x / q) ** (1.0 / a) * log(x) ** (b - 1)
        per_q.append(QRatio(q=q, count=count, shape=shape, ratio=count / shape))
    return UniformityReport(l=l, x=x, a=a, b=b, per_q=tuple(per_q))


def _prime_factors(q: int) -> list[int]:
    out = []
    p = 2
    while p * p <= q:
        if q % p == 0:
            out.append(p)
            while q % p == 0:
                q //= p
        p += 1
    if q > 1:
        out.append(q)
    return out
