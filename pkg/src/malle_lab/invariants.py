"""Malle invariants a(G) and b(Q, G) for finite permutation groups.

a(G) is the minimal index over non-identity elements.  b(Q, G) counts orbits
of the minimal-index conjugacy classes under the cyclotomic action, which on
conjugacy classes is realized by the power maps c -> c^a for a coprime to the
group exponent (no character table needed: the action permutes classes and
preserves cycle type, hence index).

For a direct product G1 x G2 in its S_{n1*n2} representation,
a = min(n2*a(G1), n1*a(G2)); when the slopes a(G_i)/n_i are strictly ordered
the minimal-index elements all live in the smaller-slope factor and b equals
that factor's b.  The equal-slope case is refused (EqualSlopeUnsupported).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm

from .errors import EqualSlopeUnsupported, OrderCapExceeded, TrivialGroup
from .permgroup import CycleType, Permutation, cycle_type, index_of

__all__ = [
    "PermutationGroup",
    "ConjugacyClass",
    "close_group",
    "conjugacy_classes",
    "a_invariant",
    "b_invariant_Q",
    "product_a",
    "product_b",
]

DEFAULT_ORDER_CAP = 10**6


@dataclass(frozen=True)
class PermutationGroup:
    degree: int
    generators: tuple[Permutation, ...]
    elements: tuple[Permutation, ...]

    @property
    def order(self) -> int:
        return len(self.elements)

    def identity(self) -> Permutation:
        return Permutation.identity(self.degree)

    def exponent(self) -> int:
        return lcm(*(cycle_type(g).ramification_index for g in self.elements))


@dataclass(frozen=True)
class ConjugacyClass:
    representative: Permutation
    size: int
    index: int

    @property
    def ct(self) -> CycleType:
        return cycle_type(self.representative)


def close_group(generators, order_cap: int = DEFAULT_ORDER_CAP) -> PermutationGroup:
    """Materialize the group generated by `generators` (BFS closure).

    Element ordering is deterministic: BFS discovery order from the identity,
    multiplying by generators on the right.
    """
    gens = tuple(generators)
    if not gens:
        raise ValueError("need at least one generator")
    degree = gens[0].degree
    if any(g.degree != degree for g in gens):
        raise ValueError("generators must share a degree")
    ident = Permutation.identity(degree)
    seen = {ident.images}
    order = [ident]
    frontier = [ident]
    while frontier:
        nxt = []
        for el in frontier:
            for g in gens:
                prod = el * g
                if prod.images not in seen:
                    seen.add(prod.images)
                    order.append(prod)
                    nxt.append(prod)
                    if len(order) > order_cap:
                        raise OrderCapExceeded(
                            f"closure exceeded cap {order_cap}"
                        )
        frontier = nxt
    return PermutationGroup(degree, gens, tuple(order))


def _classes_with_map(group: PermutationGroup):
    """Conjugacy classes plus the images-tuple -> class-id map."""
    index_of_elem = {el.images: i for i, el in enumerate(group.elements)}
    gen_invs = [(g, g.inverse()) for g in group.generators]
    class_of = {}
    classes = []
    for i, el in enumerate(group.elements):
        if el.images in class_of:
            continue
        ci = len(classes)
        size = 1
        class_of[el.images] = ci
        frontier = [el]
        while frontier:
            nxt = []
            for x in frontier:
                for g, ginv in gen_invs:
                    y = g * x * ginv
                    if y.images not in class_of:
                        class_of[y.images] = ci
                        size += 1
                        nxt.append(y)
            frontier = nxt
        classes.append(ConjugacyClass(el, size, index_of(cycle_type(el))))
    assert sum(c.size for c in classes) == group.order
    assert all(images in index_of_elem for images in class_of)
    return classes, class_of


def conjugacy_classes(group: PermutationGroup) -> list[ConjugacyClass]:
    """Partition into conjugacy classes (orbit closure under generator conjugation)."""
    return _classes_with_map(group)[0]


def a_invariant(group: PermutationGroup) -> int:
    if group.order < 2:
        raise TrivialGroup("a(G) needs a non-identity element")
    ident = group.identity()
    return min(index_of(cycle_type(g)) for g in group.elements if g != ident)


def _power(p: Permutation, k: int) -> Permutation:
    result = Permutation.identity(p.degree)
    base = p
    while k:
        if k & 1:
            result = result * base
        base = base * base
        k >>= 1
    return result


def power_map_on_classes(group: PermutationGroup, a: int) -> dict[int, int]:
    """The map class-id -> class-id induced by c -> c^a."""
    classes, class_of = _classes_with_map(group)
    return {
        ci: class_of[_power(cls.representative, a).images]
        for ci, cls in enumerate(classes)
    }


def b_invariant_Q(group: PermutationGroup) -> int:
    """Orbits of minimal-index classes under c -> c^a, gcd(a, exponent) = 1."""
    if group.order < 2:
        raise TrivialGroup("b(Q, G) needs a non-identity element")
    classes, class_of = _classes_with_map(group)
    a_val = min(c.index for c in classes if c.index > 0)
    minimal = [ci for ci, c in enumerate(classes) if c.index == a_val]
    exp = group.exponent()
    parent = {ci: ci for ci in minimal}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a in range(1, exp):
        if gcd(a, exp) != 1:
            continue
        for ci in minimal:
            img = class_of[_power(classes[ci].representative, a).images]
            ra, rb = find(ci), find(img)
            if ra != rb:
                parent[ra] = rb
    return len({find(ci) for ci in minimal})


def minimal_index_classes(group: PermutationGroup) -> list[ConjugacyClass]:
    classes = conjugacy_classes(group)
    a_val = min(c.index for c in classes if c.index > 0)
    return [c for c in classes if c.index == a_val]


def product_a(a1: int, deg1: int, a2: int, deg2: int) -> int:
    """a(G1 x G2 in S_{deg1*deg2}) = min(deg2*a1, deg1*a2)."""
    if min(a1, deg1, a2, deg2) < 1:
        raise ValueError("all inputs must be positive")
    return min(deg2 * a1, deg1 * a2)


def product_b(a1: int, deg1: int, b1: int, a2: int, deg2: int, b2: int) -> int:
    """b of the product: the b of the strictly smaller-slope factor."""
    s1, s2 = Fraction(a1, deg1), Fraction(a2, deg2)
    if s1 < s2:
        return b1
    if s2 < s1:
        return b2
    raise EqualSlopeUnsupported(
        f"a/deg = {s1} on both factors; the product b is not asserted here"
    )
