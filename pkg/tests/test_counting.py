import math
from fractions import Fraction

import pytest

from malle_lab.counting import (
    WildTable,
    c3_exact,
    compose_disc,
    count_pairs,
    count_pairs_brute,
    default_grid,
    disc_product_bound,
    disc_truncated,
    dsigma,
    euler_constant,
    pair_record,
    tail_bound_report,
)
from malle_lab.errors import (
    InadmissiblePair,
    IncompleteList,
    InvariantViolation,
    LemmaFails,
    MissingWildEntry,
)
from malle_lab.fields.cubic import enumerate_cubic
from malle_lab.fields.cyclic import enumerate_cyclic
from malle_lab.fields.records import FieldList, FieldRecord, LocalRamification
from malle_lab.permgroup import CycleType
from malle_lab.tamecomp import AbelianGroupSpec, RkTable


def tame(p, parts):
    ct = CycleType.from_parts(parts)
    from malle_lab.permgroup import index_of

    return LocalRamification(
        p=p, kind="tame", disc_exponent=index_of(ct), tame_cycle_type=ct
    )


def wild(p, label, exp):
    return LocalRamification(p=p, kind="wild", disc_exponent=exp, wild_label=label)


def rec(degree, group, sign, ram):
    prod = 1
    for loc in ram:
        prod *= loc.p**loc.disc_exponent
    return FieldRecord(
        degree=degree,
        group_label=group,
        abs_disc=prod,
        ramification=tuple(ram),
        disc_sign=sign,
    )


K23 = rec(3, "S3", -1, [tame(23, [2, 1])])
L7 = rec(3, "C3", 1, [tame(7, [3])])
K7 = rec(3, "S3", -1, [tame(7, [2, 1]), tame(23, [2, 1])])  # |disc| = 161
L7_13 = rec(3, "C3", 1, [tame(7, [3]), tame(13, [3])])


def test_compose_disjoint_ramification():
    assert compose_disc(K23, L7) == 23**3 * 7**6
    assert compose_disc(K23, L7) == disc_product_bound(K23, L7)


def test_compose_shared_tame_prime():
    # at 7: ind((12), c3) = 7 instead of 1*3 + 2*3 = 9
    d = compose_disc(K7, L7)
    assert d == 7**7 * 23**3


def test_compose_unramified_pair_is_one():
    # hypothetical unramified records are not constructible (disc >= 1 with
    # empty ramification gives abs_disc = 1)
    k0 = FieldRecord(degree=3, group_label="S3", abs_disc=1, ramification=(), disc_sign=1)
    l0 = FieldRecord(degree=3, group_label="C3", abs_disc=1, ramification=(), disc_sign=1)
    assert compose_disc(k0, l0) == 1


def test_compose_inadmissible():
    bad = rec(4, "C4", 1, [tame(5, [4])])
    with pytest.raises(InadmissiblePair):
        compose_disc(K23, bad)  # C4 even order
    with pytest.raises(InadmissiblePair):
        compose_disc(rec(3, "C3", 1, [tame(7, [3])]), L7)  # left not S_n


def test_compose_wild_needs_table():
    kw = rec(3, "S3", -1, [wild(3, "3-e3-v4", 4), tame(23, [2, 1])])
    lw = rec(3, "C3", 1, [wild(3, "3-C3-cond-9", 4)])
    with pytest.raises(MissingWildEntry):
        compose_disc(kw, lw, mode="exact")
    lo, hi = compose_disc(kw, lw, mode="interval")
    # at 3: lo exponent max(3*4, 3*4) = 12, hi 24; at 23: exact 3
    assert lo == 3**12 * 23**3 and hi == 3**24 * 23**3
    table = WildTable({("3-e3-v4", "3-C3-cond-9"): 14})
    assert compose_disc(kw, lw, wild=table) == 3**14 * 23**3


def test_compose_wild_one_sided_is_exact():
    kw = rec(3, "S3", -1, [wild(3, "3-e3-v4", 4)])
    l5 = rec(5, "C5", 1, [tame(11, [5])])
    # wild 3 only in K: product rule, no table needed
    assert compose_disc(kw, l5) == 3 ** (4 * 5) * 11 ** (4 * 3)


def test_wild_table_bound_validation():
    kw = rec(3, "S3", -1, [wild(3, "3-e3-v4", 4)])
    lw = rec(3, "C3", 1, [wild(3, "3-C3-cond-9", 4)])
    table = WildTable({("3-e3-v4", "3-C3-cond-9"): 25})  # above 3*4 + 3*4
    with pytest.raises(InvariantViolation):
        compose_disc(kw, lw, wild=table)


def test_disc_truncated_and_dsigma():
    w = WildTable()
    # Y = 1: full product bound
    assert disc_truncated(K7, L7, w, 1) == disc_product_bound(K7, L7)
    # Y beyond all primes: exact
    assert disc_truncated(K7, L7, w, 100) == compose_disc(K7, L7)
    # shared prime 7 with Y = 7: exact exponent 7 at p=7, product rule at 23
    assert disc_truncated(K7, L7, w, 7) == 7**7 * 23**3
    assert dsigma(K7, L7, w, 7) == Fraction(7**2)
    assert dsigma(K23, L7, w, 50) == 1
    assert dsigma(K7, L7, w, 5) == 1  # below all shared primes
    # identity: truncated = product bound / d_sigma
    for y in (1, 7, 23, 100):
        assert disc_truncated(K7, L7, w, y) * dsigma(K7, L7, w, y) == disc_product_bound(K7, L7)


def test_pair_record_invariants():
    pr = pair_record(K7, L7, y_ladder=(1, 7, 100))
    assert pr.disc_exact == compose_disc(K7, L7)
    assert pr.disc_lo <= pr.disc_hi <= pr.disc_product_bound
    assert pr.disc_truncated[1] == pr.disc_product_bound
    assert pr.disc_truncated[100] == pr.disc_exact


@pytest.fixture(scope="module")
def lists_1e4():
    return enumerate_cubic(10**4), enumerate_cyclic(3, 10**4)


def test_count_pairs_zero_below_smallest(lists_1e4):
    cubics, abelians = lists_1e4
    rep = count_pairs(cubics, abelians, 10**6, mode="interval", grid=[10**6])
    assert rep.n_hi == (0,)


def test_count_pairs_matches_brute(lists_1e4):
    cubics, abelians = lists_1e4
    x = 10**12
    rep = count_pairs(
        cubics, abelians, x, mode="interval", grid=default_grid(x, 12), y_ladder=(10, 100)
    )
    # brute loop over the full lists, counting by the same (pessimistic) end
    assert rep.n_lo[-1] == count_pairs_brute(cubics, abelians, x, mode="interval")
    # monotonicity in Y, domination by N
    for i, y in enumerate(sorted(rep.n_y)):
        assert all(a <= b for a, b in zip(rep.n_y[y], rep.n_lo))
    ys = sorted(rep.n_y)
    for y1, y2 in zip(ys, ys[1:]):
        assert all(a <= b for a, b in zip(rep.n_y[y1], rep.n_y[y2]))
    # interval sanity
    assert all(a <= b for a, b in zip(rep.n_lo, rep.n_hi))


def test_count_pairs_exact_mode_with_table(lists_1e4):
    cubics, abelians = lists_1e4
    x = 10**11
    # synthetic wild table covering every label pair, values at the product bound
    labels_k = {loc.wild_label for r in cubics for loc in r.ramification if loc.kind == "wild"}
    labels_k |= {"tame-2,1"}
    labels_l = {loc.wild_label for r in abelians for loc in r.ramification if loc.kind == "wild"}
    entries = {}
    for kl in labels_k:
        for ll in labels_l:
            vk = int(kl.rsplit("v", 1)[1]) if kl.startswith("3-e3") else 1
            vl = 4
            entries[(kl, ll)] = max(3 * vk, 3 * vl)
    table = WildTable(entries)
    rep = count_pairs(cubics, abelians, x, wild=table, mode="exact", grid=[x // 2, x])
    assert rep.n_exact[-1] == count_pairs_brute(cubics, abelians, x, wild=table)


def test_count_pairs_incomplete_window(lists_1e4):
    cubics, abelians = lists_1e4
    with pytest.raises(IncompleteList):
        count_pairs(cubics, abelians, 10**13, mode="interval")


def test_count_pairs_s3_c5_exact_no_table():
    # restrict C_5 to tame conductors (25 excluded): every shared prime is
    # then tame in both fields, so exact mode needs no wild table
    cubics = enumerate_cubic(10**4)
    ab_all = enumerate_cyclic(5, 10**10)
    tame_only = FieldList(
        records=tuple(
            r for r in ab_all if all(loc.kind == "tame" for loc in r.ramification)
        ),
        provenance="enumerated",
        x_max=ab_all.x_max,
    )
    x = 10**20
    # K window: x^(1/5) = 10^4; L window: x^(1/3) < 10^7
    rep = count_pairs(cubics, tame_only, x, mode="exact", grid=[x // 4, x // 2, x])
    assert rep.n_exact[-1] == count_pairs_brute(cubics, tame_only, x)
    assert rep.n_exact[-1] > 0


def test_default_grid():
    g = default_grid(1024, 5)
    assert g == [64, 128, 256, 512, 1024]


def test_euler_c3():
    assert abs(c3_exact() - 29.8914) < 1e-4


def test_euler_partial_product():
    rep5 = euler_constant(5)
    assert rep5.value == pytest.approx(2 * c3_exact() * (31 / 25) * (4 / 5))
    v1 = euler_constant(10**4).value
    v2 = euler_constant(2 * 10**4).value
    v3 = euler_constant(4 * 10**4).value
    assert abs(v2 - v1) > abs(v3 - v2)  # shrinking increments


def test_tail_bound_report():
    rep = tail_bound_report(RkTable.default(3), 3, AbelianGroupSpec((5,)), 10)
    assert rep.delta < -1
    assert rep.delta == Fraction(-13, 5)  # (12) class: -(13/5 - 1 + 1)
    rep2 = tail_bound_report(RkTable.default(3), 3, AbelianGroupSpec((5,)), 20)
    assert rep2.tail_sum < rep.tail_sum / 2  # doubling Y at least halves the tail
    with pytest.raises(LemmaFails):
        tail_bound_report(RkTable.zeros(3), 3, AbelianGroupSpec((5,)), 10)
