"""Tree validation, weights, exact counts and the brute-force oracle."""

import json
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from growcount.core import (
    Bond,
    NEIGHBOR_STEPS,
    balanced_product,
    downstream_weights,
    enumerate_growth_orders,
    growth_count,
    iter_growth_orders,
    linear_extension_count,
    orient_from_root,
    random_lattice_tree,
    range_product,
    tree_from_json,
    tree_to_json,
    tree_weight,
    validate_tree,
)
from growcount.errors import (
    CapExceeded,
    DuplicateBond,
    HasCycle,
    NotConnected,
    RootDetached,
)
from growcount.generators import comb_tree, path_tree


def double_factorial(n: int) -> int:
    out = 1
    while n > 1:
        out *= n
        n -= 2
    return out


def star_tree(arms: int):
    bonds = [Bond.between((0, 0), step) for step in NEIGHBOR_STEPS[:arms]]
    return validate_tree((0, 0), bonds)


# --- bonds ------------------------------------------------------------------

def test_bond_endpoints_are_canonicalized():
    assert Bond.between((1, 0), (0, 0)) == Bond.between((0, 0), (1, 0))
    b = Bond.between((3, 2), (3, 1))
    assert b.u == (3, 1) and b.v == (3, 2)


def test_bond_rejects_non_unit_distance():
    with pytest.raises(ValueError):
        Bond.between((0, 0), (1, 1))
    with pytest.raises(ValueError):
        Bond.between((0, 0), (0, 0))
    with pytest.raises(ValueError):
        Bond.between((0, 0), (2, 0))


def test_bond_other_and_touches():
    b = Bond.between((0, 0), (0, 1))
    assert b.other((0, 0)) == (0, 1)
    assert b.other((0, 1)) == (0, 0)
    assert b.touches((0, 0)) and not b.touches((5, 5))
    with pytest.raises(ValueError):
        b.other((9, 9))


# --- validation -------------------------------------------------------------

def test_validate_accepts_raw_pairs_and_sorts():
    t = validate_tree((0, 0), [((1, 0), (0, 0)), ((1, 0), (2, 0))])
    assert t.bonds == tuple(sorted(t.bonds))
    assert t.bond_count == 2
    assert t.sites == {(0, 0), (1, 0), (2, 0)}


def test_validate_rejects_duplicate_bond():
    with pytest.raises(DuplicateBond):
        validate_tree((0, 0), [((0, 0), (1, 0)), ((1, 0), (0, 0))])


def test_validate_rejects_detached_root():
    with pytest.raises(RootDetached):
        validate_tree((9, 9), [((0, 0), (1, 0))])


def test_validate_rejects_disconnected_bonds():
    with pytest.raises(NotConnected):
        validate_tree((0, 0), [((0, 0), (1, 0)), ((5, 5), (5, 6))])


def test_validate_rejects_unit_square_cycle():
    square = [
        ((0, 0), (1, 0)), ((1, 0), (1, 1)),
        ((0, 1), (1, 1)), ((0, 0), (0, 1)),
    ]
    with pytest.raises(HasCycle):
        validate_tree((0, 0), square)


def test_validate_rejects_empty_tree():
    with pytest.raises(ValueError):
        validate_tree((0, 0), [])


# --- orientation and weights ------------------------------------------------

def test_orientation_of_comb_four():
    t = comb_tree(4)
    children = orient_from_root(t)
    first = Bond.between((0, 0), (1, 0))
    # the first horizontal bond feeds the second one and the first tooth
    assert sorted(children[first]) == sorted([
        Bond.between((1, 0), (2, 0)), Bond.between((1, 0), (1, 1)),
    ])
    leaves = [b for b, kids in children.items() if not kids]
    assert len(leaves) == 2


def test_path_weights_count_down_from_length():
    t = path_tree(5)
    table = downstream_weights(t)
    values = sorted(table.weights.values(), reverse=True)
    assert values == [5, 4, 3, 2, 1]
    assert table.product() == 120
    assert tree_weight(t) == math.factorial(5)


def test_comb_four_weights():
    t = comb_tree(4)
    table = downstream_weights(t)
    assert table[Bond.between((0, 0), (1, 0))] == 4
    assert table[Bond.between((1, 0), (2, 0))] == 2
    assert table[Bond.between((1, 0), (1, 1))] == 1
    assert table[Bond.between((2, 0), (2, 1))] == 1
    assert tree_weight(t) == 8


def test_star_weights_are_all_one():
    t = star_tree(4)
    assert all(w == 1 for w in downstream_weights(t).weights.values())
    assert growth_count(t) == math.factorial(4)


# --- exact counts -----------------------------------------------------------

def test_paths_grow_exactly_one_way():
    for n in range(1, 9):
        assert growth_count(path_tree(n)) == 1


@pytest.mark.parametrize("bonds", [2, 4, 6, 8, 10])
def test_comb_count_is_double_factorial(bonds):
    assert growth_count(comb_tree(bonds)) == double_factorial(bonds - 1)


def test_comb_weight_closed_form():
    # W = L! / (L-1)!! collapses to 2^(L/2) (L/2)!
    for bonds in (2, 4, 6, 8):
        half = bonds // 2
        assert tree_weight(comb_tree(bonds)) \
            == 2 ** half * math.factorial(half)


# --- oracle -----------------------------------------------------------------

@pytest.mark.parametrize("bonds", [2, 4, 6, 8])
def test_oracle_matches_formula_on_combs(bonds):
    t = comb_tree(bonds)
    assert enumerate_growth_orders(t) == growth_count(t)


def test_oracle_on_paths_and_stars():
    assert enumerate_growth_orders(path_tree(6)) == 1
    assert enumerate_growth_orders(star_tree(3)) == 6


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 9), st.integers(0, 10 ** 6))
def test_oracle_times_weight_is_factorial(bonds, seed):
    t = random_lattice_tree(bonds, seed=seed)
    assert enumerate_growth_orders(t) * tree_weight(t) \
        == math.factorial(bonds)


def test_oracle_cap_trips():
    t = comb_tree(8)   # 105 growth orders
    with pytest.raises(CapExceeded):
        enumerate_growth_orders(t, cap=50)
    assert enumerate_growth_orders(t, cap=105) == 105


def test_iter_growth_orders_yields_valid_prefixes():
    t = comb_tree(4)
    orders = list(iter_growth_orders(t, limit=10))
    assert len(orders) == 3
    assert len(set(orders)) == 3
    for order in orders:
        sites = {t.root}
        for bond in order:
            # each added bond must touch the grown cluster at exactly one end
            assert (bond.u in sites) != (bond.v in sites)
            sites.update((bond.u, bond.v))


def test_iter_growth_orders_respects_limit():
    t = star_tree(4)   # 24 orders
    assert len(list(iter_growth_orders(t, limit=7))) == 7


# --- forest helpers ---------------------------------------------------------

def test_linear_extension_count_small_forest():
    # two roots, one with a single child: 3 of the 3! orders are valid
    children = {"a": ["b"], "b": [], "c": []}
    assert linear_extension_count(children, ["a", "c"]) == 3


def test_linear_extension_matches_oracle_on_lattice_trees():
    for seed in range(5):
        t = random_lattice_tree(6, seed=seed)
        children, roots = {}, []
        oriented = orient_from_root(t)
        for bond, kids in oriented.items():
            children[bond] = kids
        roots = [b for b in t.bonds if b.touches(t.root)]
        assert linear_extension_count(children, roots) \
            == enumerate_growth_orders(t)


def test_linear_extension_cap():
    children = {i: [] for i in range(6)}
    with pytest.raises(CapExceeded):
        linear_extension_count(children, list(range(6)), cap=100)


# --- products ---------------------------------------------------------------

def test_balanced_product_agrees_with_math_prod():
    values = [3, 1, 4, 1, 5, 9, 2, 6]
    assert balanced_product(values) == math.prod(values)
    assert balanced_product([]) == 1
    assert balanced_product([7]) == 7


def test_range_product_is_a_factorial_quotient():
    assert range_product(1, 10) == math.factorial(10)
    assert range_product(5, 4) == 1
    assert range_product(6, 9) == math.factorial(9) // math.factorial(5)


# --- random trees -----------------------------------------------------------

def test_random_tree_is_deterministic_in_seed():
    a = random_lattice_tree(20, seed=7)
    b = random_lattice_tree(20, seed=7)
    assert a == b
    c = random_lattice_tree(20, seed=8)
    assert a != c


def test_random_tree_rejects_nonpositive_size():
    with pytest.raises(ValueError):
        random_lattice_tree(0, seed=1)


# --- canonical JSON ---------------------------------------------------------

def test_json_round_trip_is_identity():
    t = random_lattice_tree(12, seed=42)
    assert tree_from_json(tree_to_json(t)) == t


def test_json_bytes_are_canonical():
    t = comb_tree(4)
    text = tree_to_json(t)
    assert text == (
        '{"root":[0,0],"bonds":[[[0,0],[1,0]],[[1,0],[1,1]],'
        '[[1,0],[2,0]],[[2,0],[2,1]]]}'
    )
    # bond order in the input must not matter
    payload = json.loads(text)
    payload["bonds"].reverse()
    assert tree_to_json(tree_from_json(json.dumps(payload))) == text


@pytest.mark.parametrize("text", [
    "not json",
    "[1,2]",
    '{"root":[0,0]}',
    '{"bonds":[]}',
    '{"root":[0.5,0],"bonds":[[[0,0],[1,0]]]}',
    '{"root":[0,0],"bonds":[[[0,0],[1,1]]]}',
    '{"root":[0,0],"bonds":[[[0,0],[true,0]]]}',
    '{"root":[0,0],"bonds":"nope"}',
    '{"root":[0,0],"bonds":[[[0,0]]]}',
])
def test_json_parse_rejects_malformed_input(text):
    with pytest.raises(ValueError):
        tree_from_json(text)


def test_json_parse_propagates_validation_errors():
    with pytest.raises(DuplicateBond):
        tree_from_json(
            '{"root":[0,0],"bonds":[[[0,0],[1,0]],[[1,0],[0,0]]]}'
        )
