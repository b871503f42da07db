"""Constructors for specific tree families.

Besides paths and combs, this module builds the recursively branched
family controlled by a tower sequence a_k = 2^(a_{k-1}): generation j
is a straight backbone carrying equally spaced, 90-degree-rotated
copies of generation j-1.  The derived sequences grow so fast that
integers stop being materializable after a few levels; TowerParams
keeps exact values up to a bit-size horizon and records None beyond it.
Everything the log-domain analytics needs survives past the horizon.
"""

from dataclasses import dataclass, field

from .core import Bond, RootedTree, validate_tree
from .errors import (
    ConstraintViolated,
    DuplicateBond,
    HasCycle,
    NotConnected,
    OddLength,
    OverlapDetected,
    TooLarge,
)

# refuse to materialize trees past this many bonds
MAX_TREE_BONDS = 10**7

# refuse to materialize integers past this many bits (~500 kB)
MAX_INT_BITS = 4_000_000

# +90 degrees counterclockwise, applied once per nesting level
_ROTATE = {(1, 0): (0, 1), (0, 1): (-1, 0), (-1, 0): (0, -1), (0, -1): (1, 0)}


def _scale(n) -> str:
    """Describe n for an error message without expanding its digits."""
    if n is None:
        return "beyond the integer horizon"
    if n.bit_length() <= 64:
        return str(n)
    return f"about 2^{n.bit_length() - 1}"


def path_tree(bond_count: int) -> RootedTree:
    """Straight path of `bond_count` bonds from the origin along +x."""
    if bond_count < 1:
        raise ValueError("a path needs at least one bond")
    bonds = [Bond.between((i, 0), (i + 1, 0)) for i in range(bond_count)]
    return validate_tree((0, 0), bonds)


def comb_tree(bond_count: int) -> RootedTree:
    """Horizontal segment of L/2 bonds with a vertical tooth at the right
    end of each horizontal bond.  L must be even."""
    if bond_count < 2:
        raise ValueError("a comb needs at least two bonds")
    if bond_count % 2:
        raise OddLength(f"comb needs an even bond count, got {bond_count}")
    half = bond_count // 2
    bonds = [Bond.between((i, 0), (i + 1, 0)) for i in range(half)]
    bonds += [Bond.between((i, 0), (i, 1)) for i in range(1, half + 1)]
    return validate_tree((0, 0), bonds)


# --- parameter sequences ----------------------------------------------------

@dataclass(frozen=True)
class TowerParams:
    """Derived sequences for the doubly exponential tree family.

    All sequences are indexed by generation k and padded with None below
    their first valid index: tower[k] = a_k for k >= 0, first_gen[k] =
    a_k^2 for k >= 0, backbone[k] (k >= 1) is the backbone length,
    branches[k] (k >= 2) the number of sub-copies, bond_counts[k]
    (k >= 1) the total number of bonds.  Entries are exact integers up
    to `exact_levels`; past that the values exceed MAX_INT_BITS bits and
    are stored as None.
    """

    a0: int
    generations: int
    tower: tuple = field(repr=False)
    first_gen: tuple = field(repr=False)
    backbone: tuple = field(repr=False)
    branches: tuple = field(repr=False)
    bond_counts: tuple = field(repr=False)

    @property
    def exact_levels(self) -> int:
        k = 0
        while k + 1 <= self.generations and self.tower[k + 1] is not None:
            k += 1
        return k

    def spacing(self, k: int) -> int:
        """Distance between branch attachment points on backbone k."""
        return self.backbone[k] // self.branches[k]


def tower_params(a0: int, generations: int) -> TowerParams:
    """Compute all derived sequences for seed a0 up to the given generation.

    Divisibility of backbone lengths by branch counts and the spacing
    condition spacing(k) > backbone[k-2] are identities for this family;
    both are asserted on every materializable level.
    """
    if a0 < 1:
        raise ValueError("a0 must be >= 1")
    if generations < 1:
        raise ValueError("generations must be >= 1")
    j = generations

    tower: list = [a0]
    for k in range(1, j + 1):
        prev = tower[k - 1]
        if prev is None or prev > MAX_INT_BITS:
            tower.append(None)
        else:
            tower.append(1 << prev)
    first_gen = [a * a if a is not None else None for a in tower]

    backbone: list = [None] * (j + 1)
    branches: list = [None] * (j + 1)
    bond_counts: list = [None] * (j + 1)
    backbone[1] = first_gen[1]
    bond_counts[1] = backbone[1]
    for k in range(2, j + 1):
        if first_gen[k] is None:
            break
        num = 4 * first_gen[k] * first_gen[k - 2]
        backbone[k], rem = divmod(num, first_gen[k - 1])
        assert rem == 0
        branches[k], rem = divmod(first_gen[k], first_gen[k - 1])
        assert rem == 0
        bond_counts[k] = backbone[k] + branches[k] * bond_counts[k - 1]

    for k in range(2, j + 1):
        if backbone[k] is None:
            break
        assert backbone[k] > backbone[k - 1]
        assert backbone[k] % branches[k] == 0
        assert backbone[k] // branches[k] == 4 * first_gen[k - 2]
        if k >= 3:
            assert backbone[k] // branches[k] > backbone[k - 2]
            assert branches[k] > branches[k - 1]

    return TowerParams(
        a0=a0,
        generations=j,
        tower=tuple(tower),
        first_gen=tuple(first_gen),
        backbone=tuple(backbone),
        branches=tuple(branches),
        bond_counts=tuple(bond_counts),
    )


# --- hierarchical embedding -------------------------------------------------

def _emit_level(level, origin, direction, backbone, branches, out, labels):
    """Append the bonds of one nesting level; recurse into its branches."""
    length = backbone[level]
    spacing = length // branches[level] if level >= 2 else None
    dx, dy = direction
    x, y = origin
    for i in range(1, length + 1):
        nxt = (x + dx, y + dy)
        bond = Bond.between((x, y), nxt)
        out.append(bond)
        labels[bond] = level
        x, y = nxt
        if level >= 2 and i % spacing == 0:
            _emit_level(
                level - 1, (x, y), _ROTATE[direction], backbone, branches,
                out, labels,
            )


def _build(backbone: dict, branches: dict, levels: int):
    bonds: list[Bond] = []
    labels: dict[Bond, int] = {}
    _emit_level(levels, (0, 0), (1, 0), backbone, branches, bonds, labels)
    if len(set(bonds)) != len(bonds):
        raise OverlapDetected("two branches produced the same bond")
    try:
        tree = validate_tree((0, 0), bonds)
    except (DuplicateBond, HasCycle, NotConnected) as exc:
        raise OverlapDetected(f"embedding is not a tree: {exc}") from exc
    return tree, labels


def _check_custom(ells, bs):
    ells = tuple(int(v) for v in ells)
    bs = tuple(int(v) for v in bs)
    if not ells:
        raise ConstraintViolated("need at least one backbone length")
    if len(bs) != len(ells) - 1:
        raise ConstraintViolated(
            f"need one branch count per level above the first: "
            f"{len(ells)} lengths but {len(bs)} counts"
        )
    if any(v < 1 for v in ells + bs):
        raise ConstraintViolated("all parameters must be positive")
    for a, b in zip(ells, ells[1:]):
        if b <= a:
            raise ConstraintViolated(
                f"backbone lengths must strictly increase: {a} !< {b}"
            )
    for a, b in zip(bs, bs[1:]):
        if b < a:
            raise ConstraintViolated(
                f"branch counts must not decrease: {a} > {b}"
            )
    # re-index to generation numbers: ell[k] for k=1..m, b[k] for k=2..m
    ell = {k: v for k, v in enumerate(ells, start=1)}
    b = {k: v for k, v in enumerate(bs, start=2)}
    m = len(ells)
    for k in range(2, m + 1):
        if ell[k] % b[k]:
            raise ConstraintViolated(
                f"branch count {b[k]} does not divide backbone length {ell[k]}"
            )
    for k in range(3, m + 1):
        if ell[k] // b[k] <= ell[k - 2]:
            raise ConstraintViolated(
                f"spacing {ell[k] // b[k]} at level {k} does not clear the "
                f"level-{k - 2} backbone of length {ell[k - 2]}"
            )
    total = ell[1]
    for k in range(2, m + 1):
        total = ell[k] + b[k] * total
    return ell, b, m, total


def custom_hierarchical_tree(ells, bs) -> RootedTree:
    """Build a hierarchical tree from caller-chosen backbone lengths and
    branch counts (lengths ell_1..ell_m, counts b_2..b_m).

    The same embedding as the tower family: branches sit at spacing
    ell_k/b_k along the backbone and each nesting level is rotated +90
    degrees.  Constraint failures raise ConstraintViolated naming the
    constraint; trees past MAX_TREE_BONDS raise TooLarge.
    """
    ell, b, m, total = _check_custom(ells, bs)
    if total > MAX_TREE_BONDS:
        raise TooLarge(
            f"tree would have {_scale(total)} bonds (guard {MAX_TREE_BONDS})")
    tree, _ = _build(ell, b, m)
    assert tree.bond_count == total
    return tree


def hierarchical_generations(ells, bs) -> dict[Bond, int]:
    """Map each bond to its nesting level (1 = innermost copies)."""
    ell, b, m, total = _check_custom(ells, bs)
    if total > MAX_TREE_BONDS:
        raise TooLarge(
            f"tree would have {_scale(total)} bonds (guard {MAX_TREE_BONDS})")
    _, labels = _build(ell, b, m)
    return labels


def tower_tree(params: TowerParams, generations: int | None = None) -> RootedTree:
    """Materialize the tower-family tree for the given generation.

    Only small generations exist as coordinates: the guard refuses
    anything past MAX_TREE_BONDS bonds (already generation 2 at a0=20).
    """
    j = params.generations if generations is None else generations
    if not 1 <= j <= params.generations:
        raise ValueError(f"generation must be in 1..{params.generations}")
    total = params.bond_counts[j]
    if total is None or total > MAX_TREE_BONDS:
        raise TooLarge(
            f"tree would have {_scale(total)} bonds (guard {MAX_TREE_BONDS})")
    ell = {k: params.backbone[k] for k in range(1, j + 1)}
    b = {k: params.branches[k] for k in range(2, j + 1)}
    tree, _ = _build(ell, b, j)
    assert tree.bond_count == total
    return tree


def tower_tree_generations(params: TowerParams, generations: int | None = None):
    """Like `tower_tree` but also return the per-bond nesting level map."""
    j = params.generations if generations is None else generations
    if not 1 <= j <= params.generations:
        raise ValueError(f"generation must be in 1..{params.generations}")
    total = params.bond_counts[j]
    if total is None or total > MAX_TREE_BONDS:
        raise TooLarge(
            f"tree would have {_scale(total)} bonds (guard {MAX_TREE_BONDS})")
    ell = {k: params.backbone[k] for k in range(1, j + 1)}
    b = {k: params.branches[k] for k in range(2, j + 1)}
    return _build(ell, b, j)
