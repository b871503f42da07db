"""Exact counts, weight bounds, series constants and the certified margin.

Where the implementation works in plain double precision on purpose,
the tests recompute the same quantities with mpmath at 50 digits and in
exact rational arithmetic, so the two sides are independent.
"""

import math
from fractions import Fraction

import mpmath
import pytest

from growcount import analytics
from growcount.analytics import (
    bond_count,
    constants,
    epsilon0,
    epsilon0_breakdown,
    epsilon_partial_exact,
    exact_weight,
    log_factorial,
    structure_fractions,
    verify_main_bound,
    weight_upper_bound,
)
from growcount.core import tree_weight
from growcount.errors import TooLarge
from growcount.generators import tower_params, tower_tree


def mp_epsilon0(a0, levels=6):
    mpmath.mp.dps = 50
    total = mpmath.mpf(0)
    a = a0
    for _ in range(levels):
        total += 4 * (mpmath.mpf(a) / mpmath.power(2, a)) ** 2
        if a > 4000:
            break
        a = 2 ** a
    return total


def mp_c2(a0, levels=6):
    mpmath.mp.dps = 50
    eps = mp_epsilon0(a0, levels)
    c1 = mpmath.mpf(0)
    a = a0
    for _ in range(levels):
        e1 = mpmath.mpf(a) ** 2 / mpmath.power(2, a)
        e2 = mpmath.mpf(a) ** 2 / mpmath.power(4, a)
        c1 += 8 * mpmath.log(2) * e1 + 4 * mpmath.log1p(eps) * e2
        if a > 4000:
            break
        a = 2 ** a
    n = 2 ** (2 * a0)
    x1 = mpmath.loggamma(n + 1) / n
    return c1 + x1


# --- bond counts ------------------------------------------------------------

def test_bond_counts_seed_one():
    p = tower_params(1, 4)
    assert [bond_count(p, j) for j in (1, 2, 3, 4)] \
        == [4, 32, 768, 13958643712]


def test_bond_count_argument_checks():
    p = tower_params(1, 3)
    with pytest.raises(ValueError):
        bond_count(p, 0)
    with pytest.raises(ValueError):
        bond_count(p, 4)


def test_bond_count_past_horizon_is_refused():
    p = tower_params(3, 4)
    assert bond_count(p, 3) == p.bond_counts[3]
    with pytest.raises(TooLarge):
        bond_count(p, 4)


# --- exact weights ----------------------------------------------------------

def test_exact_weight_generation_two_by_hand():
    # backbone weights: four runs of four consecutive integers, one run
    # per attached branch, plus 24!^0 ... the four branch copies of 4!
    runs = [
        32 * 31 * 30 * 29,
        24 * 23 * 22 * 21,
        16 * 15 * 14 * 13,
        8 * 7 * 6 * 5,
    ]
    expected = 24 ** 4 * math.prod(runs)
    p = tower_params(1, 2)
    assert exact_weight(p, 2) == expected
    assert tree_weight(tower_tree(p, 2)) == expected


@pytest.mark.parametrize("j", [1, 2, 3])
def test_exact_weight_matches_materialized_tree(j):
    p = tower_params(1, 3)
    assert exact_weight(p, j) == tree_weight(tower_tree(p, j))


def test_exact_weight_divides_factorial():
    p = tower_params(1, 3)
    for j in (1, 2, 3):
        assert math.factorial(bond_count(p, j)) % exact_weight(p, j) == 0


def test_exact_weight_guard():
    with pytest.raises(TooLarge):
        exact_weight(tower_params(1, 4), 4)   # 1.4e10 bonds


# --- the recursive upper bound ----------------------------------------------

def test_upper_bound_exact_form():
    p = tower_params(1, 3)
    b2 = 24 ** 4 * 32 ** 16
    assert weight_upper_bound(p, 2, mode="exact") == b2
    assert weight_upper_bound(p, 3, mode="exact") == b2 ** 16 * 768 ** 256


@pytest.mark.parametrize("j", [2, 3])
def test_exact_weight_below_upper_bound(j):
    p = tower_params(1, 3)
    assert exact_weight(p, j) <= weight_upper_bound(p, j, mode="exact")


def test_log_bound_base_case():
    p = tower_params(1, 1)
    wb = weight_upper_bound(p, 1, mode="log")
    assert wb.per_firstgen == pytest.approx(math.log(24) / 4, rel=1e-15)
    assert wb.ln == pytest.approx(math.log(24), rel=1e-15)


@pytest.mark.parametrize("j", [2, 3])
def test_log_bound_matches_exact_bound(j):
    p = tower_params(1, 3)
    wb = weight_upper_bound(p, j, mode="log")
    reference = math.log(weight_upper_bound(p, j, mode="exact"))
    assert wb.per_firstgen * p.first_gen[j] \
        == pytest.approx(reference, rel=1e-12)
    assert wb.ln == pytest.approx(reference, rel=1e-12)


def test_log_bound_survives_past_horizon():
    wb = weight_upper_bound(tower_params(1, 8), 8, mode="log")
    assert math.isfinite(wb.per_firstgen)
    assert wb.ln is None   # E_8 has left the double range
    assert len(wb.terms) == 8


def test_log_bound_rejects_unknown_mode():
    with pytest.raises(ValueError):
        weight_upper_bound(tower_params(1, 2), 2, mode="fancy")


# --- the epsilon series -----------------------------------------------------

def test_epsilon0_seed_one_exact_value():
    # 4(1/2)^2 + 4(2/4)^2 + 4(4/16)^2 + 4(16/2^16)^2, later terms underflow
    exact = Fraction(1) + 1 + Fraction(1, 4) + Fraction(1, 2 ** 22)
    assert epsilon0(1) == pytest.approx(float(exact), rel=1e-15)
    assert epsilon_partial_exact(1, 5) == exact


def test_epsilon0_seed_twenty_window():
    eps = epsilon0(20)
    assert 1.45e-9 <= eps <= 1.46e-9
    assert eps == pytest.approx(float(Fraction(1600, 2 ** 40)), rel=1e-12)


def test_epsilon0_matches_mpmath():
    for a0 in (1, 2, 3, 20):
        assert epsilon0(a0) == pytest.approx(float(mp_epsilon0(a0)), rel=1e-13)


def test_epsilon0_tail_bookkeeping():
    rep = epsilon0_breakdown(1)
    assert rep.value == pytest.approx(sum(t for _, t in rep.terms))
    assert rep.tail_bound < 1e-20 * rep.value
    assert rep.truncation_k > max(k for k, _ in rep.terms)


def test_epsilon_partial_guard():
    with pytest.raises(TooLarge):
        epsilon_partial_exact(1, 9)


# --- constants --------------------------------------------------------------

def test_constants_term_structure():
    rep = constants(1)
    k2 = dict(rep.terms)[2]
    expected = 8 * math.log(2) * 0.5 + 4 * math.log1p(rep.epsilon0) * 0.25
    assert k2 == pytest.approx(expected, rel=1e-15)
    assert rep.c2 == pytest.approx(rep.c1 + math.log(24) / 4, rel=1e-15)
    assert rep.c == pytest.approx(math.exp(rep.c2), rel=1e-15)
    assert rep.c > 1


def test_constants_match_mpmath():
    for a0 in (1, 2, 3, 20):
        rep = constants(a0)
        assert rep.c2 == pytest.approx(float(mp_c2(a0)), rel=1e-12)


def test_constants_seed_twenty_magnitude():
    rep = constants(20)
    # C2 = C1 + log(2^40!)/2^40, and the Stirling tail of the latter is
    # far below double resolution
    assert rep.c2 == pytest.approx(rep.c1 + 40 * math.log(2) - 1, rel=1e-9)
    assert rep.c1 < 1e-2


# --- the certified margin ---------------------------------------------------

@pytest.mark.parametrize("a0,top", [(1, 6), (2, 6), (20, 4)])
def test_margin_nonnegative_on_grid(a0, top):
    for j in range(1, top + 1):
        rep = verify_main_bound(a0, j)
        assert rep.margin_per_bond >= 0
        assert rep.margin_per_bond == pytest.approx(
            rep.margin_naive, abs=1e-9 * max(1.0, rep.constants.c2)
        )


def test_margin_seed_twenty_is_tiny_but_positive():
    rep = verify_main_bound(20, 4)
    assert 1e-9 < rep.margin_per_bond < 1e-6


def test_count_form_at_materializable_size():
    rep = verify_main_bound(1, 3)
    assert rep.log_factorial_bonds == pytest.approx(
        log_factorial(768), rel=1e-15
    )
    assert rep.log_count_lower is not None
    assert rep.log_count_lower >= rep.log_count_required
    # N_3 is genuinely huge: log N >= log 768! - 768 log C > 0
    assert rep.log_count_lower > 0


def test_count_form_skipped_past_double_range():
    rep = verify_main_bound(1, 6)
    assert rep.log_factorial_bonds is None
    assert rep.margin_per_bond > 0


# --- structure fractions ----------------------------------------------------

def test_structure_seed_one_generation_three():
    rep = structure_fractions(1, 3)
    assert rep.exact
    assert rep.bond_ratio_exact == Fraction(3)
    assert rep.first_gen_fraction_exact == Fraction(1, 3)
    assert rep.backbone_fraction_exact == Fraction(1, 3)
    assert rep.backbone_bound == 1.0


def test_structure_seed_twenty():
    rep = structure_fractions(20, 2)
    assert rep.exact
    assert rep.bond_ratio_exact == 1 + Fraction(1600, 2 ** 40)
    assert rep.backbone_fraction <= rep.backbone_bound


def test_structure_past_horizon_uses_floats():
    rep = structure_fractions(1, 6)
    assert not rep.exact
    assert rep.bond_ratio == pytest.approx(1 + epsilon0(1), rel=1e-12)
    assert rep.first_gen_fraction == pytest.approx(
        1 / (1 + epsilon0(1)), rel=1e-12
    )


def test_structure_needs_generation_two():
    with pytest.raises(ValueError):
        structure_fractions(1, 1)


# --- log factorial ----------------------------------------------------------

@pytest.mark.parametrize("n", [1, 2, 5, 100, 1234, 10 ** 4])
def test_log_factorial_accuracy(n):
    assert log_factorial(n) == pytest.approx(
        math.log(math.factorial(n)), rel=1e-12
    )


def test_log_factorial_rejects_negative():
    with pytest.raises(ValueError):
        log_factorial(-1)


def test_per_bond_log_factorial_routes_agree_at_the_boundary():
    lo = 2 ** 899           # lgamma route
    hi = 2 ** 901           # Stirling route
    f = analytics._per_bond_log_factorial
    assert f(lo) == pytest.approx(math.log(lo) - 1, rel=1e-12)
    assert f(hi) == math.log(hi) - 1
