"""Checks for compact connected Lie groups presented as (T^r x prod S_i)/D.

The group is described by its central torus rank, a list of simple factor
types, and a finite gluing subgroup D given as the graph of a map from a
subgroup of the product of simple centers into the torus.  Everything here
is exact: centers come from the classification table, torus points are
rational, and verdicts reduce to integer matrix computations.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .errors import (
    DimensionMismatch,
    DoesNotCommute,
    InvalidDelta,
    NotMember,
    NotUnimodular,
    SchemaError,
    UnsupportedRank,
    WrongOrder,
)
from .groups import FiniteAbelian, abelian_from_orders
from .zmat import (
    MatrixGroupResult,
    element_order,
    embeds_into_fixed,
    fixed_subgroup_structure,
    mat,
    mat_det,
    mat_inv_unimodular,
    mat_mul,
    smith_normal_form,
)


# -- simple factor types -----------------------------------------------------------------

_RANK_FLOOR = {"A": 1, "B": 2, "C": 3, "D": 3}
_FIXED_RANK = {"E": (6, 7, 8), "F": (4,), "G": (2,)}


@dataclass(frozen=True)
class SimpleType:
    """One simple compact factor, identified by series letter and rank."""

    series: str
    rank: int

    def __post_init__(self):
        s, l = self.series, self.rank
        if s in _RANK_FLOOR:
            if l < _RANK_FLOOR[s]:
                raise SchemaError(f"{s}-series rank must be >= {_RANK_FLOOR[s]}")
        elif s in _FIXED_RANK:
            if l not in _FIXED_RANK[s]:
                raise SchemaError(f"{s}-series rank {l} does not exist")
        else:
            raise SchemaError(f"unknown series {s!r}")

    @property
    def center_orders(self) -> tuple[int, ...]:
        """Cyclic decomposition of the factor's center."""
        s, l = self.series, self.rank
        if s == "A":
            return (l + 1,)
        if s in ("B", "C"):
            return (2,)
        if s == "D":
            return (2, 2) if l % 2 == 0 else (4,)
        if s == "E":
            return {6: (3,), 7: (2,), 8: ()}[l]
        return ()

    @property
    def inversion_achievable(self) -> bool:
        """Whether some group automorphism inverts the center.

        Complex conjugation handles A_l (l >= 2), an outer swap handles
        D_odd, and E6 has an inverting outer automorphism; the remaining
        centers are elementary 2-groups where inversion is the identity.
        """
        s, l = self.series, self.rank
        return (s == "A" and l >= 2) or (s == "D" and l % 2 == 1) or \
            (s == "E" and l == 6)

    def __str__(self) -> str:
        return f"{self.series}{self.rank}"


def simple_type(token: str) -> SimpleType:
    token = token.strip()
    if len(token) < 2 or not token[0].isalpha() or not token[1:].isdigit():
        raise SchemaError(f"cannot parse simple type {token!r}")
    return SimpleType(token[0].upper(), int(token[1:]))


# -- the datum ----------------------------------------------------------------------------


def _mod1(values) -> tuple[Fraction, ...]:
    return tuple(Fraction(v) % 1 for v in values)


def _mod_orders(values, orders) -> tuple[int, ...]:
    return tuple(int(v) % m for v, m in zip(values, orders))


class LieDatum:
    """(T^torus_rank x prod factors) / D with D the graph of a gluing map.

    Generators give pairs (simple center part, torus image); the generated
    subgroup must project injectively to the simple part, so the torus
    coordinate is a function of the simple coordinate.
    """

    def __init__(self, torus_rank: int, factors, generators=()):
        if torus_rank < 0:
            raise InvalidDelta("torus rank must be nonnegative")
        self.torus_rank = torus_rank
        self.factors = tuple(factors)
        self.center_orders = tuple(
            m for f in self.factors for m in f.center_orders)
        c = len(self.center_orders)
        gens = []
        for simple, torus in generators:
            if len(simple) != c:
                raise InvalidDelta(
                    f"simple part needs {c} coordinates, got {len(simple)}")
            if len(torus) != torus_rank:
                raise InvalidDelta(
                    f"torus part needs {torus_rank} coordinates, got {len(torus)}")
            gens.append((_mod_orders(simple, self.center_orders), _mod1(torus)))
        self.generators = tuple(gens)

        zero = ((0,) * c, (Fraction(0),) * torus_rank)
        elements = {zero}
        frontier = [zero]
        while frontier:
            s0, t0 = frontier.pop()
            for s1, t1 in self.generators:
                nxt = (
                    tuple((a + b) % m for a, b, m in
                          zip(s0, s1, self.center_orders)),
                    tuple((a + b) % 1 for a, b in zip(t0, t1)),
                )
                if nxt not in elements:
                    elements.add(nxt)
                    frontier.append(nxt)
        self.graph_elements = frozenset(elements)
        torus_part_of: dict = {}
        for s, t in elements:
            if s in torus_part_of and torus_part_of[s] != t:
                raise InvalidDelta(
                    f"gluing subgroup is not a graph at simple part {s}")
            torus_part_of[s] = t
        self.torus_part_of = torus_part_of
        self.simple_parts = frozenset(torus_part_of)
        zero_t = (Fraction(0),) * torus_rank
        self.kernel_parts = frozenset(
            s for s, t in torus_part_of.items() if t == zero_t)

    @property
    def block_offsets(self) -> tuple[int, ...]:
        off = []
        pos = 0
        for f in self.factors:
            off.append(pos)
            pos += len(f.center_orders)
        return tuple(off)


def lie_center(datum: LieDatum) -> tuple[int, FiniteAbelian]:
    """Center of the quotient group: torus rank plus component group.

    The component group of the center is the product of simple centers
    modulo the simple support of the gluing subgroup, computed by Smith
    normal form on the stacked relation matrix.
    """
    c = len(datum.center_orders)
    if c == 0:
        return datum.torus_rank, FiniteAbelian(())
    rows = [[datum.center_orders[j] if i == j else 0 for j in range(c)]
            for i in range(c)]
    for s, _ in datum.generators:
        rows.append(list(s))
    _, s, _ = smith_normal_form(rows)
    invariants = [int(s[i][i]) for i in range(c) if s[i][i] > 1]
    return datum.torus_rank, abelian_from_orders(invariants)


def torus_image_invariants(datum: LieDatum) -> FiniteAbelian:
    """Structure of the gluing subgroup's image inside the torus."""
    z = datum.torus_rank
    gens = [t for _, t in datum.generators]
    if z == 0 or not gens:
        return FiniteAbelian(())
    denom = 1
    for t in gens:
        for v in t:
            denom = denom * v.denominator // gcd(denom, v.denominator)
    w = [[int(v * denom) for v in t] for t in gens]
    _, s, _ = smith_normal_form(w)
    orders = []
    for i in range(min(len(gens), z)):
        d = denom // gcd(int(s[i][i]), denom)
        if d > 1:
            orders.append(d)
    return abelian_from_orders(orders)


# -- achievable automorphisms of the product of centers -------------------------------------


def achievable_center_autos(factors) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Automorphisms of the product of centers known to come from the group.

    Each entry is (factor permutation, per-factor sign): permutations of
    identical factors and center inversion on factors that support it.
    Triality on D4 is deliberately left out, so the list can only
    under-approximate; callers treat it accordingly.
    """
    factors = tuple(factors)
    n = len(factors)
    ident = (tuple(range(n)), (1,) * n)
    gens = []
    for i, f in enumerate(factors):
        if f.inversion_achievable:
            signs = tuple(-1 if j == i else 1 for j in range(n))
            gens.append((ident[0], signs))
    for i, j in itertools.combinations(range(n), 2):
        if factors[i] == factors[j]:
            perm = list(range(n))
            perm[i], perm[j] = j, i
            gens.append((tuple(perm), (1,) * n))
    autos = {ident}
    frontier = [ident]
    while frontier:
        sigma_a, signs_a = frontier.pop()
        for sigma_b, signs_b in gens:
            # apply b after a
            sigma = tuple(sigma_b[sigma_a[i]] for i in range(n))
            signs = tuple(signs_a[i] * signs_b[sigma_a[i]] for i in range(n))
            cand = (sigma, signs)
            if cand not in autos:
                autos.add(cand)
                frontier.append(cand)
    return sorted(autos)


def apply_center_auto(datum: LieDatum, auto, simple: tuple[int, ...]) -> tuple[int, ...]:
    sigma, signs = auto
    offsets = datum.block_offsets
    out = [0] * len(datum.center_orders)
    for i, f in enumerate(datum.factors):
        width = len(f.center_orders)
        src = offsets[i]
        dst = offsets[sigma[i]]
        for k in range(width):
            m = datum.center_orders[dst + k]
            out[dst + k] = (signs[i] * simple[src + k]) % m
    return tuple(out)


def _scaled(datum: LieDatum, simple: tuple[int, ...], factor: int) -> tuple[int, ...]:
    return tuple((factor * v) % m for v, m in zip(simple, datum.center_orders))


def _apply_torus_matrix(matrix, coords) -> tuple[Fraction, ...]:
    return tuple(
        sum((Fraction(matrix[r][c]) * coords[c] for c in range(len(coords))),
            Fraction(0)) % 1
        for r in range(len(matrix)))


def liftable(datum: LieDatum, alpha0) -> bool:
    """Whether the torus automorphism extends over the whole quotient.

    True iff some achievable automorphism of the simple centers preserves
    the gluing support and intertwines the gluing map with alpha0.
    """
    alpha0 = mat(alpha0)
    z = datum.torus_rank
    if len(alpha0) != z or any(len(r) != z for r in alpha0):
        raise DimensionMismatch(f"matrix must be {z}x{z}")
    if mat_det(alpha0) not in (1, -1):
        raise NotUnimodular(mat_det(alpha0))
    support = datum.simple_parts
    for auto in achievable_center_autos(datum.factors):
        mapped = {apply_center_auto(datum, auto, s) for s in support}
        if mapped != support:
            continue
        if all(_apply_torus_matrix(alpha0, datum.torus_part_of[s])
               == datum.torus_part_of[apply_center_auto(datum, auto, s)]
               for s in support):
            return True
    return False


def _rigidity(datum: LieDatum) -> bool | None:
    """Do all relevant achievable automorphisms act as a joint sign?

    Quantifies over automorphisms preserving both the gluing support and
    its kernel (the only ones that can intertwine with an injective torus
    automorphism).  None means undecided: the achievable list is an
    under-approximation whenever a D4 factor is present.
    """
    support = datum.simple_parts
    kernel = datum.kernel_parts
    rigid = True
    for auto in achievable_center_autos(datum.factors):
        mapped = {apply_center_auto(datum, auto, s): s for s in support}
        if set(mapped) != support:
            continue
        if {apply_center_auto(datum, auto, s) for s in kernel} != kernel:
            continue
        joint = any(
            all(apply_center_auto(datum, auto, s) == _scaled(datum, s, eps)
                for s in support)
            for eps in (1, -1))
        if not joint:
            rigid = False
            break
    if not rigid:
        return False
    if any(f.series == "D" and f.rank == 4 for f in datum.factors):
        return None
    return True


# -- torsion classes of GL(2, Z) and the largest-compact verdict -----------------------------

TORSION_CLASSES: tuple[tuple[str, tuple[tuple[int, int], tuple[int, int]]], ...] = (
    ("reflection-split", ((1, 0), (0, -1))),
    ("reflection-nonsplit", ((-1, 1), (0, 1))),
    ("rotation-3", ((0, 1), (-1, -1))),
    ("rotation-4", ((0, -1), (1, 0))),
    ("rotation-6", ((0, -1), (1, 1))),
)


@dataclass(frozen=True)
class LargestCompactVerdict:
    kind: str
    witness_label: str | None
    witness: tuple | None
    delta0: FiniteAbelian
    fixed_profiles: tuple[tuple[str, str, int | None], ...]
    reason: str


def largest_compact_verdict(datum: LieDatum) -> LargestCompactVerdict:
    """Decide existence of a largest compact subgroup of the automorphisms.

    Rank <= 1 always has one.  At rank 2 the question reduces, for data
    whose relevant center automorphisms act as a joint sign, to whether
    any non-central torsion class of GL(2,Z) has fixed points large enough
    to swallow the glued torus subgroup; a hit denies the largest compact
    subgroup, a full sweep of misses confirms it.
    """
    z = datum.torus_rank
    if z >= 3:
        raise UnsupportedRank(f"verdict implemented for torus rank <= 2, got {z}")
    delta0 = torus_image_invariants(datum)
    if z <= 1:
        return LargestCompactVerdict(
            kind="HasLargest", witness_label=None, witness=None, delta0=delta0,
            fixed_profiles=(), reason="automorphism group is compact")
    rigid = _rigidity(datum)
    if rigid is not True:
        why = ("achievable automorphism list is an under-approximation"
               if rigid is None else
               "a relevant center automorphism is not a joint sign")
        return LargestCompactVerdict(
            kind="Unknown", witness_label=None, witness=None, delta0=delta0,
            fixed_profiles=(), reason=why)
    profiles = []
    for label, rep in TORSION_CLASSES:
        fs = fixed_subgroup_structure(rep)
        profiles.append((label, str(fs), fs.finite_order))
        if embeds_into_fixed(delta0, fs):
            return LargestCompactVerdict(
                kind="NoLargest", witness_label=label, witness=rep,
                delta0=delta0, fixed_profiles=tuple(profiles),
                reason=f"glued subgroup embeds into the fixed points of {label}")
    return LargestCompactVerdict(
        kind="HasLargest", witness_label=None, witness=None, delta0=delta0,
        fixed_profiles=tuple(profiles),
        reason="no torsion class fixes a subgroup as large as the glued one")


@dataclass(frozen=True)
class ConditionsReport:
    no_central_2torus: bool
    dual_rank_le_1: bool
    aut_compact: bool
    has_largest_compact: bool | None
    inversion_only: bool | None


def compactness_conditions(datum: LieDatum) -> ConditionsReport:
    """The equivalent compactness conditions plus the follow-up verdicts.

    The first is read off the presentation, the second recomputed through
    the center; they must agree.  Compact automorphisms always leave a
    largest compact subgroup; otherwise the rank-2 torsion scan decides
    when it can.
    """
    a = datum.torus_rank <= 1
    torus_dim, _ = lie_center(datum)
    b = torus_dim <= 1
    assert a == b, "presentation and center computations disagree"
    c = a
    if c:
        largest: bool | None = True
    elif datum.torus_rank == 2:
        verdict = largest_compact_verdict(datum)
        largest = {"HasLargest": True, "NoLargest": False,
                   "Unknown": None}[verdict.kind]
    else:
        largest = None
    return ConditionsReport(
        no_central_2torus=a, dual_rank_le_1=b, aut_compact=c,
        has_largest_compact=largest, inversion_only=_rigidity(datum))


# -- explicit witness families over the 2-torus ------------------------------------------------


@dataclass(frozen=True)
class TorusFamilyWitness:
    witnesses: tuple
    degenerate: bool


def torus2_automorphism_family_witness(alpha, b1, b2,
                                       n_max: int) -> TorusFamilyWitness:
    """Conjugates of one involution by powers of a commuting matrix.

    Validates that b1 and b2 commute with alpha and that b1 is an
    involution, then walks b2^n b1 b2^-n for n = 0..n_max, checking each
    conjugate stays an involution commuting with alpha.  The family is
    degenerate when conjugation repeats a matrix.
    """
    alpha, b1, b2 = mat(alpha), mat(b1), mat(b2)
    for name, m in (("b1", b1), ("b2", b2)):
        if mat_mul(m, alpha) != mat_mul(alpha, m):
            raise DoesNotCommute(name)
    if element_order(b1) != 2:
        raise WrongOrder(2, element_order(b1))
    b2_inv = mat_inv_unimodular(b2)
    seen = []
    current = b1
    for _ in range(n_max + 1):
        if element_order(current) != 2:
            raise WrongOrder(2, element_order(current))
        if mat_mul(current, alpha) != mat_mul(alpha, current):
            raise DoesNotCommute("conjugate")
        if current not in seen:
            seen.append(current)
        current = mat_mul(b2, mat_mul(current, b2_inv))
    return TorusFamilyWitness(witnesses=tuple(seen),
                              degenerate=len(seen) < n_max + 1)


def centralizer_in_finite_group(m, ambient: MatrixGroupResult) -> frozenset:
    """Elements of a finite matrix group commuting with a given member."""
    m = mat(m)
    if not ambient.finite:
        raise NotMember("ambient group is not finite")
    if m not in ambient.elements:
        raise NotMember(f"{m} is outside the ambient group")
    out = frozenset(g for g in ambient.elements
                    if mat_mul(g, m) == mat_mul(m, g))
    for a in out:
        for b in out:
            assert mat_mul(a, b) in out
    return out


# -- ready-made data ----------------------------------------------------------------------------


def su2_datum() -> LieDatum:
    return LieDatum(0, [SimpleType("A", 1)])


def bare_torus_datum(rank: int = 2) -> LieDatum:
    return LieDatum(rank, [])


def glued_torus_su_datum(k: int, l: int) -> LieDatum:
    """T^2 times SU(3^k) times SU(3^l), glued along the full centers.

    The first center generator maps to (1/3^k, 0), the second to
    (1/3^l, 1/3^(l-1)); the image is then Z/3^k x Z/3^(l-1).
    """
    if not k > l >= 2:
        raise SchemaError("need k > l >= 2")
    a, b = 3 ** k, 3 ** l
    factors = [SimpleType("A", a - 1), SimpleType("A", b - 1)]
    generators = [
        ((1, 0), (Fraction(1, a), Fraction(0))),
        ((0, 1), (Fraction(1, b), Fraction(1, b // 3))),
    ]
    return LieDatum(2, factors, generators)
