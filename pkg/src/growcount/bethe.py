"""Exhaustive growth-order counting on the coordination-3 Bethe lattice.

Sites are addressed by strings: the root's three neighbors are "0", "1",
"2", and every other site has two children reached by appending "0" or
"1".  Since each non-root site has a unique parent, a bond is identified
with its far endpoint, so a rooted subtree is simply a set of addresses
closed under the parent operation.

Growing any subtree one bond at a time always offers n+3 choices after n
additions, which makes the total number of growth sequences across all
L-bond subtrees equal to 3*4*...*(L+2).  Dividing by the (much smaller)
number of distinct subtrees shows some single subtree must have a huge
growth count; this module verifies the whole chain by brute force.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

from .core import forest_weights, linear_extension_count
from .errors import InternalMismatch, TooLarge

MAX_BONDS = 8

_ROOT_FRONTIER = ("0", "1", "2")


def children_addresses(address: str) -> tuple[str, str]:
    return (address + "0", address + "1")


def bethe_growth_count(bond_count: int) -> int:
    """Count all growth sequences of length `bond_count` by brute force.

    Checked on the spot against the closed form (L+2)!/2; a mismatch
    would be an enumeration bug.
    """
    _check_bonds(bond_count)

    def rec(frontier: tuple, left: int) -> int:
        if left == 0:
            return 1
        total = 0
        for i, addr in enumerate(frontier):
            nxt = frontier[:i] + frontier[i + 1:] + children_addresses(addr)
            total += rec(nxt, left - 1)
        return total

    count = rec(_ROOT_FRONTIER, bond_count)
    closed = math.factorial(bond_count + 2) // 2
    if count != closed:
        raise InternalMismatch(
            f"enumerated {count} growth sequences at L={bond_count}, "
            f"closed form gives {closed}"
        )
    return count


def bethe_trees(bond_count: int) -> list[frozenset]:
    """All distinct rooted subtrees with `bond_count` bonds.

    Each subtree is visited exactly once: the frontier is consumed as an
    ordered queue and every address is either taken (opening its two
    children) or skipped for good.
    """
    _check_bonds(bond_count)
    out: list[frozenset] = []

    def rec(frontier: tuple, chosen: tuple, left: int):
        if left == 0:
            out.append(frozenset(chosen))
            return
        if not frontier:
            return
        head, rest = frontier[0], frontier[1:]
        rec(rest + children_addresses(head), chosen + (head,), left - 1)
        rec(rest, chosen, left)

    rec(_ROOT_FRONTIER, (), bond_count)
    return out


def bethe_tree_count(bond_count: int) -> int:
    """Number of distinct rooted subtrees, by exhaustive enumeration."""
    return len(bethe_trees(bond_count))


def tree_children_map(tree: frozenset) -> tuple[dict, list]:
    """Children lists and root bonds of one subtree, for the forest helpers."""
    children = {
        addr: [c for c in children_addresses(addr) if c in tree]
        for addr in tree
    }
    roots = sorted(a for a in tree if len(a) == 1)
    return children, roots


def tree_growth_count(tree: frozenset) -> int:
    """Growth orders of one subtree via the hook product L!/W."""
    children, roots = tree_children_map(tree)
    weights = forest_weights(children, roots)
    w = 1
    for value in weights.values():
        w *= value
    n, rem = divmod(math.factorial(len(tree)), w)
    if rem:
        raise InternalMismatch(f"L! not divisible by weights for {sorted(tree)}")
    return n


def tree_growth_count_enumerated(tree: frozenset) -> int:
    """Growth orders of one subtree by brute-force linear extensions."""
    children, roots = tree_children_map(tree)
    return linear_extension_count(children, roots)


@dataclass(frozen=True)
class BetheBoundReport:
    """Existence bound: some subtree has at least `average` growth orders.

    average = growth_count / tree_count is exact; naive_floor is the
    cruder L!/9^L comparison that the average provably beats.
    """

    bond_count: int
    growth_count: int
    tree_count: int
    average: Fraction
    average_floor: Fraction   # (L+2)!/(2*9^L)
    naive_floor: Fraction     # L!/9^L
    maximizer: tuple
    maximizer_count: int

    def to_dict(self) -> dict:
        return {
            "L": self.bond_count,
            "growthCount": str(self.growth_count),
            "treeCount": str(self.tree_count),
            "averageBound": float(self.average),
            "factorialFloor": float(self.naive_floor),
            "maximizerAddressList": list(self.maximizer),
            "maximizerN": str(self.maximizer_count),
        }


def bethe_existence_bound(bond_count: int) -> BetheBoundReport:
    """Run the whole pigeonhole argument at one size and report it.

    Verifies the partition identity (per-tree counts sum to the total
    sequence count), the 9^L cap on the number of subtrees, and that the
    average beats L!/9^L.  Returns the maximizing subtree found.
    """
    _check_bonds(bond_count)
    total = bethe_growth_count(bond_count)
    trees = bethe_trees(bond_count)
    count = len(trees)
    if count > 9 ** bond_count:
        raise InternalMismatch(
            f"{count} subtrees at L={bond_count} exceeds 9^L"
        )

    best = None
    best_n = 0
    partition = 0
    for tree in trees:
        n = tree_growth_count(tree)
        partition += n
        if n > best_n:
            best_n = n
            best = tree
    if partition != total:
        raise InternalMismatch(
            f"per-tree counts sum to {partition}, sequences total {total}"
        )

    average = Fraction(total, count)
    average_floor = Fraction(math.factorial(bond_count + 2), 2 * 9 ** bond_count)
    naive_floor = Fraction(math.factorial(bond_count), 9 ** bond_count)
    if average < average_floor or average <= naive_floor:
        raise InternalMismatch(f"average bound chain broken at L={bond_count}")
    if best_n < average:
        raise InternalMismatch(f"maximizer below average at L={bond_count}")
    return BetheBoundReport(
        bond_count=bond_count, growth_count=total, tree_count=count,
        average=average, average_floor=average_floor, naive_floor=naive_floor,
        maximizer=tuple(sorted(best)), maximizer_count=best_n,
    )


def _check_bonds(bond_count: int):
    if bond_count < 1:
        raise ValueError("bond_count must be >= 1")
    if bond_count > MAX_BONDS:
        raise TooLarge(
            f"L={bond_count} exceeds the enumeration guard {MAX_BONDS}"
        )
