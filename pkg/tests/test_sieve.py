import math
from fractions import Fraction

import pytest

from malle_lab.errors import CapExceeded, InsufficientGrid, NotSquarefree
from malle_lab.sieve import (
    AffineScheme,
    BoxSpec,
    binary_cubic_disc_scheme,
    count_points_mod_q,
    scaling_experiment,
    sheared_experiment,
    solutions_mod_q,
)


def line_scheme(n=2):
    return AffineScheme.coordinate_subspace(n, 1)


def plane_codim2(n=3):
    return AffineScheme.coordinate_subspace(n, 2)


def test_linear_closed_form():
    # {x1 = 0} in A^2, r = 10, q = 5: (2*floor(10/5)+1) * (2*10+1) = 105
    box = BoxSpec(2, scaling=(10,))
    assert count_points_mod_q(line_scheme(), box, 5, method="brute") == 105
    assert count_points_mod_q(line_scheme(), box, 5, method="residue") == 105
    # codim 2, r = 10, q = 5: 5 * 5 * 21 in A^3... {x1=x2=0} in A^2: 25
    box2 = BoxSpec(2, scaling=(10,))
    scheme2 = AffineScheme.coordinate_subspace(2, 2)
    assert count_points_mod_q(scheme2, box2, 5) == 25


def test_closed_form_general_linear():
    scheme = AffineScheme.coordinate_subspace(3, 2)
    for r, q in [(12, 5), (30, 7), (20, 3)]:
        box = BoxSpec(3, scaling=(r,))
        want = (2 * (r // q) + 1) ** 2 * (2 * r + 1)
        assert count_points_mod_q(scheme, box, q) == want


def test_dual_path_agreement_nonlinear():
    scheme = binary_cubic_disc_scheme()
    for r, q in [(4, 5), (5, 6), (6, 7)]:
        box = BoxSpec(4, scaling=(r,))
        brute = count_points_mod_q(scheme, box, q, method="brute")
        res = count_points_mod_q(scheme, box, q, method="residue")
        assert brute == res


def test_dual_path_agreement_sheared():
    scheme = line_scheme(2)
    shear = ((Fraction(1), Fraction(0)), (Fraction(3), Fraction(1)))
    box = BoxSpec(2, scaling=(9,), shear=shear)
    brute = count_points_mod_q(scheme, box, 5, method="brute")
    res = count_points_mod_q(scheme, box, 5, method="residue")
    assert brute == res


def test_shear_preserves_symmetric_counts():
    # {x1=0} with shear x2 <- x2 + 3 x1: columns are translated, counts equal
    scheme = line_scheme(2)
    for r in (6, 10, 15):
        plain = count_points_mod_q(scheme, BoxSpec(2, scaling=(r,)), 5)
        shear = ((Fraction(1), Fraction(0)), (Fraction(3), Fraction(1)))
        sheared = count_points_mod_q(
            scheme, BoxSpec(2, scaling=(r,), shear=shear), 5, method="brute"
        )
        assert plain == sheared


def test_anisotropic_closed_form():
    # r = (100, 10), q = 30, {x1=0}: (2*floor(100/30)+1) * 21
    scheme = line_scheme(2)
    box = BoxSpec(2, scaling=(100, 10))
    assert count_points_mod_q(scheme, box, 30) == (2 * 3 + 1) * 21


def test_crt_multiplicativity_exact():
    scheme = binary_cubic_disc_scheme()
    s6 = solutions_mod_q(scheme, 6)
    s2 = solutions_mod_q(scheme, 2)
    s3 = solutions_mod_q(scheme, 3)
    assert s6.shape[0] == s2.shape[0] * s3.shape[0]
    # and against a direct brute count over (Z/6)^4
    from malle_lab.sieve import _brute_solution_count

    assert s6.shape[0] == _brute_solution_count(scheme, 6)


def test_not_squarefree():
    with pytest.raises(NotSquarefree):
        count_points_mod_q(line_scheme(), BoxSpec(2, scaling=(5,)), 4)
    with pytest.raises(NotSquarefree):
        solutions_mod_q(line_scheme(), 12)


def test_cap_exceeded():
    with pytest.raises(CapExceeded):
        count_points_mod_q(
            line_scheme(), BoxSpec(2, scaling=(10**6,)), 5, method="brute", point_cap=10**4
        )


def test_monotone_in_q_linear():
    scheme = line_scheme(2)
    box = BoxSpec(2, scaling=(50,))
    counts = [count_points_mod_q(scheme, box, q) for q in (2, 3, 5, 7, 11)]
    assert counts == sorted(counts, reverse=True)


def test_scaling_experiment_linear_slopes():
    rep = scaling_experiment(line_scheme(2), r_grid=[20, 50, 100, 200, 400], q_grid=[3, 5, 7, 11, 13, 17, 31])
    assert abs(rep.fitted_q_exponent - (-1)) < 0.05
    assert abs(rep.fitted_r_exponent - 2) < 0.1
    for q1, q2, direct, prod in rep.crt_residuals:
        assert direct == prod


def test_scaling_experiment_codim2():
    rep = scaling_experiment(
        plane_codim2(3), r_grid=[30, 60, 120, 240, 480], q_grid=[3, 5, 7, 11, 13, 17, 31]
    )
    assert abs(rep.fitted_q_exponent - (-2)) < 0.1
    assert abs(rep.fitted_r_exponent - 3) < 0.1


def test_disc_locus_q_exponent_near_codim1():
    rep = scaling_experiment(
        binary_cubic_disc_scheme(),
        r_grid=[30, 60, 120, 300],
        q_grid=[5, 7, 11, 17, 23, 31, 53],
    )
    assert -1.3 <= rep.fitted_q_exponent <= -0.8
    for q1, q2, direct, prod in rep.crt_residuals:
        assert direct == prod


def test_insufficient_grid():
    with pytest.raises(InsufficientGrid):
        scaling_experiment(line_scheme(2), r_grid=[10, 12], q_grid=[3, 5, 7, 31])
    with pytest.raises(InsufficientGrid):
        scaling_experiment(line_scheme(2), r_grid=[10, 40, 110], q_grid=[3, 4])


def test_sheared_experiment_envelope_and_identity():
    scheme = line_scheme(2)
    rep = sheared_experiment(
        scheme,
        r_vector_grid=[(8, 8), (20, 20), (50, 25), (90, 30)],
        q_grid=[2, 5, 7, 23],
        shear_samples=3,
        seed=7,
    )
    assert rep.seed == 7
    assert max(r[2] for r in rep.envelope_ratios) <= 64.0
    # determinism under the same seed
    rep2 = sheared_experiment(
        scheme,
        r_vector_grid=[(8, 8), (20, 20), (50, 25), (90, 30)],
        q_grid=[2, 5, 7, 23],
        shear_samples=3,
        seed=7,
    )
    assert rep.entries == rep2.entries
