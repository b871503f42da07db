"""Exact and log-domain analytics for the tower tree family.

Two regimes coexist.  Small generations are handled with exact
arbitrary-precision integers and rationals: bond counts computed by two
independent formulas that must agree, the full weight product, and an
explicit upper bound on it.  Large generations live purely in the log
domain, where everything is normalized per first-generation bond: the
log-weight divided by the first-generation count stays order one for
every generation even though both quantities leave the representable
range after a handful of levels.

The bridge between the regimes is the series with terms
4*(a/2^a)^2 evaluated at successive tower values a.  The same floats
feed epsilon0, the constant C, and the bound iteration, which keeps the
final margin computation free of catastrophic cancellation.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

from .core import balanced_product, range_product
from .errors import BoundViolated, InternalMismatch, TooLarge
from .generators import MAX_INT_BITS, TowerParams, tower_params

LN2 = math.log(2.0)

# series terms below this are dropped; every tail is below 2x the first
# dropped term, so truncation error is far below double precision
TERM_FLOOR = 1e-300

# exact weight products are refused past this many bonds
MAX_EXACT_WEIGHT_BONDS = 10**6

# lgamma(float(n)) overflows once n*log(n) leaves the double range,
# around n = 2^1015; stay well clear of it
LGAMMA_MAX_BITS = 900


def log_factorial(n: int) -> float:
    """Natural log of n! via lgamma; relative error a few ulp."""
    if n < 0:
        raise ValueError("n must be >= 0")
    return math.lgamma(float(n) + 1.0)


def _per_bond_log_factorial(n: int) -> float:
    """log(n!)/n, usable even when n itself cannot become a float."""
    if n.bit_length() <= LGAMMA_MAX_BITS:
        return log_factorial(n) / n
    # Stirling; the 0.5*log(2*pi*n)/n correction is already below double
    # resolution once n needs a few hundred bits
    return math.log(n) - 1.0


def _series_rows(a0: int):
    """Yield (k, a, e1, e2) for k = 2, 3, ... along the tower a_{k-2}.

    e1 = a^2/2^a and e2 = a^2/4^a, evaluated in log domain so no huge
    power is ever materialized.  Stops after the first row where both
    underflow to zero; all later rows are smaller still.
    """
    a = a0
    k = 2
    while True:
        if a.bit_length() > 1000:
            e1 = e2 = 0.0
        else:
            la = math.log(a)
            al2 = float(a) * LN2
            e1 = math.exp(2.0 * la - al2)
            e2 = math.exp(2.0 * la - 2.0 * al2)
        yield k, a, e1, e2
        if e1 == 0.0 and e2 == 0.0:
            return
        a = 1 << a
        k += 1


# --- the epsilon series -----------------------------------------------------

@dataclass(frozen=True)
class EpsilonReport:
    """Value and per-term breakdown of the excess-bond series."""

    a0: int
    value: float
    terms: tuple          # (k, term) pairs actually summed
    truncation_k: int     # index of the first dropped term
    tail_bound: float     # upper bound on everything dropped


def epsilon0_breakdown(a0: int) -> EpsilonReport:
    """Sum 4*(a_{k-2}/2^a_{k-2})^2 over k >= 2 with full bookkeeping.

    This is the relative excess of total bonds over first-generation
    bonds, uniformly in the generation.  Terms are collected until they
    fall below TERM_FLOOR; consecutive terms shrink by many orders of
    magnitude, so twice the first dropped term bounds the tail.
    """
    if a0 < 1:
        raise ValueError("a0 must be >= 1")
    value = 0.0
    terms = []
    truncation_k = 2
    tail_bound = 0.0
    for k, _a, _e1, e2 in _series_rows(a0):
        r = 4.0 * e2
        if r < TERM_FLOOR:
            truncation_k = k
            tail_bound = 2.0 * r
            break
        value += r
        terms.append((k, r))
    return EpsilonReport(
        a0=a0, value=value, terms=tuple(terms),
        truncation_k=truncation_k, tail_bound=tail_bound,
    )


def epsilon0(a0: int) -> float:
    return epsilon0_breakdown(a0).value


def epsilon_partial_exact(a0: int, upto_k: int) -> Fraction:
    """Exact rational partial sum of the epsilon series through k = upto_k."""
    total = Fraction(0)
    a = a0
    for k in range(2, upto_k + 1):
        if a > MAX_INT_BITS:
            raise TooLarge(
                f"term {k} needs 2 to the power of a "
                f"{a.bit_length()}-bit exponent"
            )
        total += 4 * Fraction(a, 1 << a) ** 2
        a = 1 << a
    return total


# --- exact bond counts and weights ------------------------------------------

def bond_count(params: TowerParams, generation: int | None = None) -> int:
    """Exact number of bonds, computed two independent ways.

    Route one telescopes branch-count products against backbone lengths;
    route two evaluates first_gen[j] * (1 + 4*sum of the ratios
    first_gen[k-2]/first_gen[k-1]) in rational arithmetic.  Disagreement
    (or a non-integral rational) raises InternalMismatch; a generation
    past the integer horizon raises TooLarge.
    """
    j = params.generations if generation is None else generation
    if not 1 <= j <= params.generations:
        raise ValueError(f"generation must be in 1..{params.generations}")
    if params.bond_counts[j] is None:
        raise TooLarge(f"generation {j} bond count exceeds the integer budget")

    total = params.backbone[j]
    prod = 1
    for k in range(j - 1, 0, -1):
        prod *= params.branches[k + 1]
        total += prod * params.backbone[k]

    ratio_sum = Fraction(0)
    for k in range(2, j + 1):
        ratio_sum += Fraction(params.first_gen[k - 2], params.first_gen[k - 1])
    alt = params.first_gen[j] * (1 + 4 * ratio_sum)
    if alt.denominator != 1 or alt != total or total != params.bond_counts[j]:
        raise InternalMismatch(
            f"bond-count formulas disagree at a0={params.a0}, generation {j}"
        )
    return total


def _backbone_weight_product(length: int, count: int, sub_bonds: int) -> int:
    """Product of downstream weights along one backbone.

    Bond i (1-based, root end first) has length-i backbone bonds ahead of
    it plus every branch of sub_bonds bonds attached at position i or
    later, so its weight is 1 + (length-i) + sub_bonds*(count - c + 1)
    where c = ceil(i*count/length).  Within a run of constant c the
    weights are consecutive integers and the run collapses to a falling
    factorial.
    """
    spacing = length // count
    parts = []
    for c in range(1, count + 1):
        base = 1 + length + sub_bonds * (count - c + 1)
        hi = base - ((c - 1) * spacing + 1)
        lo = base - c * spacing
        parts.append(range_product(lo, hi))
    return balanced_product(parts)


def exact_weight(params: TowerParams, generation: int | None = None) -> int:
    """The exact weight product, by level recursion.

    Level one is a path, so it contributes (backbone length)!; each
    later level contributes the branch copies' weight to the power of
    the branch count times the backbone product above.  Cross-checked
    in the tests against the per-bond weight table of the materialized
    tree.
    """
    j = params.generations if generation is None else generation
    total = bond_count(params, j)
    if total > MAX_EXACT_WEIGHT_BONDS:
        raise TooLarge(
            f"{total} bonds exceeds the exact-weight guard {MAX_EXACT_WEIGHT_BONDS}"
        )
    w = math.factorial(params.backbone[1])
    for k in range(2, j + 1):
        w = w ** params.branches[k] * _backbone_weight_product(
            params.backbone[k], params.branches[k], params.bond_counts[k - 1]
        )
    return w


# --- the recursive upper bound ----------------------------------------------

@dataclass(frozen=True)
class LogWeightBound:
    """Log-domain upper bound on the weight product.

    per_firstgen is log(bound) divided by the first-generation count
    and is finite for every generation; ln is the absolute log(bound),
    or None once the first-generation count leaves the double range.
    terms holds the (k, increment) breakdown of the iteration,
    eps_partial the series partial sum through the generation.
    """

    generation: int
    per_firstgen: float
    ln: float | None
    terms: tuple
    eps_partial: float


def weight_upper_bound(
    params: TowerParams, generation: int | None = None, mode: str = "exact"
):
    """Upper bound on the weight product: every backbone weight is at
    most the total bond count, so the level recursion is bounded by
    bound(k-1) ** branches[k] * bond_counts[k] ** backbone[k].

    Exact mode returns the bound as an integer under the same guard as
    `exact_weight`.  Log mode divides through by the first-generation
    count, which turns the recursion into adding one increment
    (backbone[k]/first_gen[k]) * log(bond_counts[k]) per level, and
    works for any generation; the log bond count uses the exact value
    while it is materializable and the series form past that.
    """
    j = params.generations if generation is None else generation
    if not 1 <= j <= params.generations:
        raise ValueError(f"generation must be in 1..{params.generations}")

    if mode == "exact":
        total = bond_count(params, j)
        if total > MAX_EXACT_WEIGHT_BONDS:
            raise TooLarge(
                f"{total} bonds exceeds the exact-weight guard "
                f"{MAX_EXACT_WEIGHT_BONDS}"
            )
        bound = math.factorial(params.backbone[1])
        for k in range(2, j + 1):
            bound = bound ** params.branches[k] * (
                params.bond_counts[k] ** params.backbone[k]
            )
        return bound

    if mode != "log":
        raise ValueError(f"mode must be 'exact' or 'log', got {mode!r}")

    rows = {}
    for k, _a, e1, e2 in _series_rows(params.a0):
        if k > j:
            break
        rows[k] = (e1, e2)

    x = _per_bond_log_factorial(params.first_gen[1])
    terms = [(1, x)]
    partial = 0.0
    for k in range(2, j + 1):
        e1, e2 = rows.get(k, (0.0, 0.0))
        r = 4.0 * e2
        partial += r
        if e1 == 0.0 and e2 == 0.0:
            term = 0.0
        elif params.bond_counts[k] is not None:
            term = r * math.log(params.bond_counts[k])
        else:
            # series form of r*log(bond count), valid because each
            # tower value is 2 to the previous one
            term = 8.0 * LN2 * e1 + 4.0 * math.log1p(partial) * e2
        x += term
        terms.append((k, term))

    ln = None
    firstgen = params.first_gen[j]
    if firstgen is not None and firstgen.bit_length() <= 1020:
        total_ln = x * float(firstgen)
        if math.isfinite(total_ln):
            ln = total_ln
    return LogWeightBound(
        generation=j, per_firstgen=x, ln=ln, terms=tuple(terms),
        eps_partial=partial,
    )


# --- certified constants ----------------------------------------------------

@dataclass(frozen=True)
class ConstantsReport:
    """The growth constant C with its full derivation trail.

    c1 majorizes the sum of all bound-iteration increments past the
    first level, c2 adds the per-bond log-weight of level one, and
    C = exp(c2) certifies growth_count >= L!/C^L for the whole family.
    """

    a0: int
    epsilon0: float
    epsilon_tail_bound: float
    c1: float
    c2: float
    c: float
    terms: tuple          # (k, term) pairs of the c1 series
    truncation_k: int

    def to_dict(self) -> dict:
        return {
            "a0": self.a0,
            "epsilon0": self.epsilon0,
            "C1": self.c1,
            "C2": self.c2,
            "C": self.c,
            "truncationK": self.truncation_k,
        }


def constants(a0: int) -> ConstantsReport:
    """Evaluate the certified constants for seed a0.

    The c1 series majorizes each log bond count by the log
    first-generation count plus log1p(epsilon0); the k-th term is then
    (8 log 2) a^2/2^a + 4 log1p(epsilon0) a^2/4^a with a the tower
    value two levels down, summed until terms drop below TERM_FLOOR.
    """
    eps = epsilon0_breakdown(a0)
    ln1p_eps = math.log1p(eps.value)
    c1 = 0.0
    terms = []
    truncation_k = 2
    for k, _a, e1, e2 in _series_rows(a0):
        t = 8.0 * LN2 * e1 + 4.0 * ln1p_eps * e2
        if t < TERM_FLOOR:
            truncation_k = k
            break
        c1 += t
        terms.append((k, t))
    x1 = _per_bond_log_factorial(1 << (2 * a0))
    c2 = c1 + x1
    c = math.exp(c2) if c2 < 709.0 else math.inf
    if not c > 1.0:
        raise BoundViolated(f"C = exp({c2}) should exceed 1")
    return ConstantsReport(
        a0=a0, epsilon0=eps.value, epsilon_tail_bound=eps.tail_bound,
        c1=c1, c2=c2, c=c, terms=tuple(terms), truncation_k=truncation_k,
    )


@dataclass(frozen=True)
class MainBoundReport:
    """Certification that the log weight stays below C2 per bond.

    margin_per_bond is (C2*L - log W)/L with L the bond count and W the
    weight bound, assembled from manifestly non-negative pieces;
    margin_naive is the same quantity computed the direct way and must
    agree to the error budget.  When L still fits a double the
    equivalent count form log N >= log L! - L log C is evaluated too.
    """

    a0: int
    generation: int
    constants: ConstantsReport
    log_weight_per_firstgen: float
    eps_partial: float
    margin_per_bond: float
    margin_naive: float
    log_factorial_bonds: float | None
    log_count_lower: float | None
    log_count_required: float | None

    def to_dict(self) -> dict:
        out = self.constants.to_dict()
        out["j"] = self.generation
        out["logWPerFirstGen"] = self.log_weight_per_firstgen
        out["marginPerBond"] = self.margin_per_bond
        return out


def verify_main_bound(a0: int, generation: int) -> MainBoundReport:
    """Check the certified lower bound on growth counts at one generation.

    Raises BoundViolated if any margin is negative (the inequality
    always holds, so that would mean an implementation bug) and
    InternalMismatch if the two margin computations drift apart.
    """
    if generation < 1:
        raise ValueError("generation must be >= 1")
    params = tower_params(a0, generation)
    rep = constants(a0)
    wb = weight_upper_bound(params, generation, mode="log")

    partial = wb.eps_partial
    ratio = 1.0 / (1.0 + partial)
    naive = rep.c2 - wb.per_firstgen * ratio

    majorized = dict(rep.terms)
    slack = 0.0
    for k, t in wb.terms:
        if k >= 2:
            slack += majorized.pop(k, 0.0) - t
    tail = sum(majorized.values())
    deficit = wb.per_firstgen * (partial / (1.0 + partial))
    margin = slack + tail + deficit

    if abs(margin - naive) > 1e-9 * max(1.0, rep.c2):
        raise InternalMismatch(
            f"margin decomposition {margin} vs direct {naive} at "
            f"a0={a0}, generation {generation}"
        )
    if margin < 0.0:
        raise BoundViolated(
            f"negative margin {margin} at a0={a0}, generation {generation}"
        )

    log_fact = lower = required = None
    total = params.bond_counts[generation]
    if total is not None and total.bit_length() <= LGAMMA_MAX_BITS:
        log_fact = log_factorial(total)
        log_w = wb.per_firstgen * float(params.first_gen[generation])
        lower = log_fact - log_w
        required = log_fact - float(total) * rep.c2
        if lower < required - 1e-9 * max(1.0, abs(required)):
            raise BoundViolated(
                f"log N {lower} below required {required} at "
                f"a0={a0}, generation {generation}"
            )
    return MainBoundReport(
        a0=a0, generation=generation, constants=rep,
        log_weight_per_firstgen=wb.per_firstgen, eps_partial=partial,
        margin_per_bond=margin, margin_naive=naive,
        log_factorial_bonds=log_fact, log_count_lower=lower,
        log_count_required=required,
    )


# --- structural fractions ---------------------------------------------------

@dataclass(frozen=True)
class StructureReport:
    """How a generation's bonds split between bulk and backbone.

    Exact rationals when the generation is within the integer horizon,
    floats past it.  bond_ratio divides total bonds by first-generation
    bonds and always lies in [1, 1+epsilon0]; backbone_fraction is
    bounded by 4*(a/2^a)^2 at the tower value two levels down.
    """

    a0: int
    generation: int
    exact: bool
    bond_ratio: float
    bond_ratio_exact: Fraction | None
    first_gen_fraction: float
    first_gen_fraction_exact: Fraction | None
    backbone_fraction: float
    backbone_fraction_exact: Fraction | None
    backbone_bound: float
    epsilon0: float

    def to_dict(self) -> dict:
        return {
            "bondRatio": self.bond_ratio,
            "firstGenerationFraction": self.first_gen_fraction,
            "backboneFraction": self.backbone_fraction,
            "backboneBound": self.backbone_bound,
            "exact": self.exact,
        }


def structure_fractions(a0: int, generation: int) -> StructureReport:
    """Bond-ratio, first-generation and backbone fractions at a generation.

    All three inequalities (ratio within [1, 1+epsilon0], backbone
    fraction under its bound) are verified, in rational arithmetic when
    possible; violations raise InternalMismatch.
    """
    if generation < 2:
        raise ValueError("structure fractions need generation >= 2")
    params = tower_params(a0, generation)
    eps = epsilon0(a0)
    j = generation

    if params.bond_counts[j] is not None:
        total = bond_count(params, j)
        firstgen = params.first_gen[j]
        ratio = Fraction(total, firstgen)
        first = Fraction(firstgen, total)
        backbone_frac = Fraction(params.backbone[j], total)
        a = params.tower[j - 2]
        bound = 4 * Fraction(a * a, params.tower[j - 1] ** 2)
        if ratio < 1 or backbone_frac > bound:
            raise InternalMismatch(
                f"structure bound failed at a0={a0}, generation {j}"
            )
        if ratio - 1 != epsilon_partial_exact(a0, j):
            raise InternalMismatch(
                f"bond ratio does not match the series at a0={a0}, "
                f"generation {j}"
            )
        if float(ratio - 1) > eps * (1.0 + 1e-12) + TERM_FLOOR:
            raise InternalMismatch(
                f"bond ratio exceeds 1+epsilon0 at a0={a0}, generation {j}"
            )
        return StructureReport(
            a0=a0, generation=j, exact=True,
            bond_ratio=float(ratio), bond_ratio_exact=ratio,
            first_gen_fraction=float(first), first_gen_fraction_exact=first,
            backbone_fraction=float(backbone_frac),
            backbone_fraction_exact=backbone_frac,
            backbone_bound=float(bound), epsilon0=eps,
        )

    partial = 0.0
    r_j = 0.0
    for k, _a, _e1, e2 in _series_rows(a0):
        if k > j:
            break
        r = 4.0 * e2
        partial += r
        if k == j:
            r_j = r
    ratio_f = 1.0 + partial
    if ratio_f > (1.0 + eps) * (1.0 + 1e-12):
        raise InternalMismatch(
            f"bond ratio exceeds 1+epsilon0 at a0={a0}, generation {j}"
        )
    backbone_f = r_j / ratio_f
    return StructureReport(
        a0=a0, generation=j, exact=False,
        bond_ratio=ratio_f, bond_ratio_exact=None,
        first_gen_fraction=1.0 / ratio_f, first_gen_fraction_exact=None,
        backbone_fraction=backbone_f, backbone_fraction_exact=None,
        backbone_bound=r_j, epsilon0=eps,
    )
