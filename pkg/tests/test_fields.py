import io
import json
import random
from collections import Counter

import pytest

from malle_lab.errors import IncompleteList, InvariantViolation, MalformedLine
from malle_lab.fields.cubic import (
    canonical_form,
    disc_form,
    enumerate_cubic,
    is_irreducible,
    is_maximal,
    transform,
)
from malle_lab.fields.cyclic import cyclic_count_oracle, enumerate_cyclic
from malle_lab.fields.polysearch import (
    cubic_fields_by_polynomials,
    field_disc_of_cubic,
)
from malle_lab.fields.records import parse_field_file
from malle_lab.fields.uniformity import abelian_uniformity_check

GOOD_LINE = (
    '{"degree":3,"group":"S3","disc":-23,'
    '"ram":[{"p":23,"kind":"tame","cycle_type":[2,1]}]}'
)


def test_parse_good_record():
    fl = parse_field_file(io.StringIO(GOOD_LINE))
    assert len(fl) == 1
    rec = fl.records[0]
    assert rec.abs_disc == 23 and rec.disc_sign == -1
    assert rec.ramification[0].tame_cycle_type.parts == (2, 1)


def test_parse_empty_stream():
    fl = parse_field_file(io.StringIO(""))
    assert len(fl) == 0 and fl.x_max == 0


def test_parse_malformed_line_number():
    with pytest.raises(MalformedLine) as exc:
        parse_field_file(io.StringIO(GOOD_LINE + "\nnot json\n"))
    assert exc.value.lineno == 2


def test_parse_invariant_violation():
    bad = json.dumps(
        {
            "degree": 3,
            "group": "S3",
            "disc": -46,  # 2 * 23: local parts give only 23
            "ram": [{"p": 23, "kind": "tame", "cycle_type": [2, 1]}],
        }
    )
    with pytest.raises(InvariantViolation):
        parse_field_file(io.StringIO(bad))


def test_parse_tame_exponent_must_match_index():
    bad = json.dumps(
        {
            "degree": 3,
            "group": "S3",
            "disc": -529,
            "ram": [{"p": 23, "kind": "tame", "cycle_type": [2, 1], "exp": 2}],
        }
    )
    with pytest.raises(InvariantViolation):
        parse_field_file(io.StringIO(bad))


def test_parse_unsorted_warns_and_sorts():
    two = (
        '{"degree":3,"group":"S3","disc":-31,"ram":[{"p":31,"kind":"tame","cycle_type":[2,1]}]}\n'
        + GOOD_LINE
    )
    with pytest.warns(UserWarning):
        fl = parse_field_file(io.StringIO(two))
    assert [r.abs_disc for r in fl] == [23, 31]


def test_roundtrip_jsonl():
    fl = enumerate_cubic(200)
    buf = io.StringIO()
    fl.write_jsonl(buf)
    buf.seek(0)
    again = parse_field_file(buf)
    assert [r.abs_disc for r in again] == [r.abs_disc for r in fl]


# -- cyclic ------------------------------------------------------------------

def test_enumerate_cyclic_spec_examples():
    assert [r.abs_disc for r in enumerate_cyclic(3, 49)] == [49]
    assert [r.abs_disc for r in enumerate_cyclic(3, 80)] == [49]
    assert len(enumerate_cyclic(5, 1)) == 0
    assert [r.abs_disc for r in enumerate_cyclic(5, 11**4)] == [11**4]


def test_enumerate_cyclic_disc_is_conductor_power():
    for rec in enumerate_cyclic(3, 10**5):
        # disc = f^2 for cyclic cubics
        f = 1
        for loc in rec.ramification:
            f *= loc.p ** (loc.disc_exponent // (rec.degree - 1))
        assert f * f == rec.abs_disc


def test_enumerate_cyclic_vs_oracle_small():
    for x in (10, 100, 5000, 10**6):
        assert len(enumerate_cyclic(3, x)) == cyclic_count_oracle(3, x)
    for x in (10**4, 10**8):
        assert len(enumerate_cyclic(5, x)) == cyclic_count_oracle(5, x)
    assert len(enumerate_cyclic(7, 10**10)) == cyclic_count_oracle(7, 10**10)


def test_cyclic_multiplicity_two_prime_conductor():
    # conductor 7*13 = 91 carries exactly (3-1)^(2-1) = 2 fields
    fl = enumerate_cyclic(3, 91**2)
    by_disc = Counter(r.abs_disc for r in fl)
    assert by_disc[91**2] == 2


# -- cubic -------------------------------------------------------------------

def test_enumerate_cubic_spec_examples():
    assert len(enumerate_cubic(22)) == 0
    fl = enumerate_cubic(23)
    assert len(fl) == 1 and fl.records[0].disc_sign == -1


def test_cubic_known_small_discs():
    fl = enumerate_cubic(120)
    assert [r.disc_sign * r.abs_disc for r in fl] == [
        -23, -31, -44, -59, -76, -83, -87, -104, -107, -108, -116,
    ]


def test_cubic_excludes_cyclic():
    # 49 and 81 are cyclic cubic discs, never S_3
    assert all(r.abs_disc not in (49, 81) for r in enumerate_cubic(100))


def test_cubic_reconstruction_identity():
    for rec in enumerate_cubic(2000):
        prod = 1
        for loc in rec.ramification:
            prod *= loc.p**loc.disc_exponent
        assert prod == rec.abs_disc


def test_cubic_nonmonogenic_dedekind_field():
    # |disc| = 503: ring of integers is not Z[alpha] for any alpha, so the
    # maximal form has leading coefficient > 1
    fl = enumerate_cubic(510)
    assert any(r.abs_disc == 503 and r.disc_sign == -1 for r in fl)


def test_canonical_form_stable_under_transforms():
    random.seed(11)
    mats = [(1, 0, 1, 1), (1, 0, -1, 1), (0, -1, 1, 0), (1, 1, 0, 1), (1, 0, 0, -1)]
    fl_forms = []
    for a in range(1, 4):
        for b in range(-4, 5):
            for c in range(-6, 7):
                for d in range(-6, 7):
                    f = (a, b, c, d)
                    if disc_form(f) != 0 and is_irreducible(f):
                        fl_forms.append(f)
    for f in random.sample(fl_forms, 200):
        canon = canonical_form(f)
        g = f
        for _ in range(6):
            g = transform(g, random.choice(mats))
        assert canonical_form(g) == canon


def test_cubic_vs_polynomial_oracle_exact_small():
    for x in (600, 2500):
        enum = Counter(r.disc_sign * r.abs_disc for r in enumerate_cubic(x))
        oracle = Counter(cubic_fields_by_polynomials(x))
        assert enum == oracle


def test_polynomial_oracle_known_field_discs():
    assert field_disc_of_cubic((0, -1, -1)) == -23
    assert field_disc_of_cubic((-1, -2, -8)) == -503  # 2 splits, index always even
    assert field_disc_of_cubic((0, -4, 8)) == -23  # index 8 generator
    assert field_disc_of_cubic((0, 0, -2)) == -108
    assert field_disc_of_cubic((-1, -2, 1)) == 49  # cyclic
    assert field_disc_of_cubic((0, -4, -1)) == 229


def test_maximality_rejects_index_forms():
    # (1, 0, -4, 8) ~ x^3 - 4x + 8 has index 8 in the -23 field
    assert not is_maximal((1, 0, -4, 8))
    assert is_maximal((1, 0, -1, -1))


def test_enumerate_cubic_workers_deterministic():
    one = enumerate_cubic(3000, workers=1)
    two = enumerate_cubic(3000, workers=2)
    assert [(r.abs_disc, r.disc_sign) for r in one] == [
        (r.abs_disc, r.disc_sign) for r in two
    ]


# -- uniformity ----------------------------------------------------------------

def test_abelian_uniformity_shape():
    x = 10**6
    fl = enumerate_cyclic(3, x)
    rep = abelian_uniformity_check(3, [1, 7, 13], x, field_list=fl)
    assert rep.a == 2 and rep.b == 1
    by_q = {r.q: r for r in rep.per_q}
    assert by_q[1].count == len(fl)
    # every field with 7 | disc has 7 | conductor; direct cross count
    direct = sum(1 for r in fl if 7 in r.ramified_primes)
    assert by_q[7].count == direct


def test_abelian_uniformity_zero_when_no_admissible_prime():
    # q = 5: 5 is not 1 mod 3 and is not 3, so no cyclic cubic has 5 | disc
    rep = abelian_uniformity_check(3, [5], 10**6)
    assert rep.per_q[0].count == 0


def test_abelian_uniformity_incomplete_list():
    fl = enumerate_cyclic(3, 100)
    with pytest.raises(IncompleteList):
        abelian_uniformity_check(3, [7], 10**4, field_list=fl)
