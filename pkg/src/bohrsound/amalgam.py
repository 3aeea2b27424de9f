"""Word machinery for free products amalgamated over a finite subgroup.

Normal forms use right-coset transversals: every element is uniquely
head * t_1 * ... * t_n with the head in the amalgamated group, every t_k a
non-identity coset representative, and adjacent letters from distinct
factors.  The word problem, homomorphism evaluation, the coproduct
pseudometric, and the split-family checks all ride on that uniqueness.
"""

from __future__ import annotations

import math
import random
from collections import deque
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import (
    AmalgamNotTrivial,
    DimensionMismatch,
    DisagreeOnAmalgam,
    InvalidLetter,
    NonzeroAtIdentity,
    NotClassFunction,
    NotSubadditive,
    NotSymmetric,
    SourceMismatch,
)
from .groups import (
    FiniteGroup,
    GroupHom,
    TorusPoint,
    semidirect,
    trivial_group,
    validate_action,
)
from .zmat import identity as mat_identity
from .zmat import mat, mat_mul


# -- the amalgam itself ---------------------------------------------------------------


class AmalgamSpec:
    """A free product of finite factors amalgamated over a common subgroup.

    Coset representatives are deterministic: the minimal element index in
    each right coset, so the identity always represents the trivial coset
    and normal forms are reproducible across runs.
    """

    def __init__(self, h: FiniteGroup, factors, injections):
        self.h = h
        self.factors = list(factors)
        self.injections = list(injections)
        if not self.factors:
            raise SourceMismatch("an amalgam needs at least one factor")
        if len(self.factors) != len(self.injections):
            raise SourceMismatch("one injection per factor required")
        self.rep_of = []
        self.head_of = []
        self.transversals = []
        for fac, emb in zip(self.factors, self.injections):
            if emb.source is not h or emb.target is not fac:
                raise SourceMismatch("injection endpoints do not match the spec")
            emb.require_injective()
            rep = [-1] * fac.order
            head = [-1] * fac.order
            reps = []
            for t in range(fac.order):
                if rep[t] >= 0:
                    continue
                reps.append(t)
                for hx in range(h.order):
                    e = fac.op(emb(hx), t)
                    rep[e] = t
                    head[e] = hx
            self.rep_of.append(rep)
            self.head_of.append(head)
            self.transversals.append(tuple(reps))

    @property
    def n_factors(self) -> int:
        return len(self.factors)

    def check_word(self, word) -> tuple[tuple[int, int], ...]:
        out = []
        for letter in word:
            i, x = letter
            if not 0 <= i < len(self.factors):
                raise InvalidLetter(f"no factor {i}")
            if not 0 <= x < self.factors[i].order:
                raise InvalidLetter(f"element {x} outside factor {i}")
            out.append((int(i), int(x)))
        return tuple(out)


def free_product(factors) -> AmalgamSpec:
    """Coproduct of the factors: amalgamation over the trivial group."""
    one = trivial_group()
    return AmalgamSpec(one, list(factors),
                       [GroupHom(one, f, [0]) for f in factors])


@dataclass(frozen=True)
class NormalForm:
    """head * t_1 * ... * t_n with coset-representative tail letters."""

    head: int
    tail: tuple[tuple[int, int], ...]

    @property
    def is_identity(self) -> bool:
        return self.head == 0 and not self.tail

    def as_word(self, spec: AmalgamSpec) -> tuple[tuple[int, int], ...]:
        out = []
        if self.head != 0:
            out.append((0, int(spec.injections[0](self.head))))
        out.extend(self.tail)
        return tuple(out)


def normal_form(spec: AmalgamSpec, word) -> NormalForm:
    """Unique normal form, built by prepending letters right to left.

    Each prepend merges into the current leading tail letter when factors
    coincide, re-splits as iota(h) * t, and pushes h further left, so the
    invariant (non-identity representatives, alternating factors) holds at
    every step.
    """
    letters = spec.check_word(word)
    head = 0
    tail: deque = deque()
    for i, x in reversed(letters):
        fac = spec.factors[i]
        emb = spec.injections[i]
        g = fac.op(x, emb(head))
        if tail and tail[0][0] == i:
            g = fac.op(g, tail.popleft()[1])
        t = spec.rep_of[i][g]
        head = spec.head_of[i][g]
        if t != 0:
            tail.appendleft((i, t))
    return NormalForm(head, tuple(tail))


def word_equal(spec: AmalgamSpec, w1, w2) -> bool:
    return normal_form(spec, w1) == normal_form(spec, w2)


def word_inverse(spec: AmalgamSpec, word) -> tuple[tuple[int, int], ...]:
    letters = spec.check_word(word)
    return tuple((i, spec.factors[i].inverse(x)) for i, x in reversed(letters))


@dataclass(frozen=True)
class IntersectionReport:
    ok: bool
    order: int


def intersection_check(spec: AmalgamSpec) -> IntersectionReport:
    """Verify the two factors meet exactly in the amalgamated subgroup.

    Compares normal forms of every G_0 element against those of all G_1
    elements; a match must happen exactly on the injected copy of H.
    """
    if spec.n_factors != 2:
        raise SourceMismatch("intersection check requires exactly two factors")
    forms1 = {normal_form(spec, ((1, x),)) for x in range(spec.factors[1].order)}
    image0 = {int(spec.injections[0](hx)) for hx in range(spec.h.order)}
    ok = True
    count = 0
    for g in range(spec.factors[0].order):
        match = normal_form(spec, ((0, g),)) in forms1
        if match:
            count += 1
        if match != (g in image0):
            ok = False
    return IntersectionReport(ok=ok, order=count)


# -- homomorphism evaluation ----------------------------------------------------------


class FiniteTarget:
    """Per-factor maps into one finite group."""

    def __init__(self, group: FiniteGroup, maps):
        self.group = group
        self.maps = [list(m) for m in maps]

    def identity(self):
        return 0

    def multiply(self, a, b):
        return self.group.op(a, b)

    def image(self, i: int, x: int):
        return self.maps[i][x]


class MatrixTarget:
    """Per-factor maps into integer matrices, optionally reduced mod m."""

    def __init__(self, dim: int, maps, modulus: int | None = None):
        self.dim = dim
        self.modulus = modulus
        self.maps = [[self._reduce(mat(m)) for m in factor_maps]
                     for factor_maps in maps]

    def _reduce(self, m):
        if self.modulus is None:
            return m
        q = self.modulus
        return tuple(tuple(v % q for v in row) for row in m)

    def identity(self):
        return mat_identity(self.dim)

    def multiply(self, a, b):
        return self._reduce(mat_mul(a, b))

    def image(self, i: int, x: int):
        return self.maps[i][x]


class TorusSemidirectTarget:
    """Per-factor maps into (Q/Z)^k semidirect an integer matrix group.

    Elements are (TorusPoint, matrix) pairs multiplying as
    (t1, m1)(t2, m2) = (t1 + m1 t2, m1 m2); all arithmetic exact.
    """

    def __init__(self, rank: int, maps):
        self.rank = rank
        self.maps = [[(tp, mat(m)) for tp, m in factor_maps]
                     for factor_maps in maps]

    def identity(self):
        return TorusPoint.zero(self.rank), mat_identity(self.rank)

    def multiply(self, a, b):
        t1, m1 = a
        t2, m2 = b
        moved = TorusPoint(
            sum(m1[r][c] * t2.coords[c] for c in range(self.rank))
            for r in range(self.rank))
        return t1 + moved, mat_mul(m1, m2)

    def image(self, i: int, x: int):
        return self.maps[i][x]


def eval_hom(spec: AmalgamSpec, word, target):
    """Evaluate a word under per-factor maps into a common target.

    The maps must agree on the amalgamated subgroup; that is checked on
    every call, with the offending (factor, subgroup element) as witness.
    """
    letters = spec.check_word(word)
    for i, fac in enumerate(spec.factors):
        if len(target.maps[i]) != fac.order:
            raise SourceMismatch(f"target map {i} does not cover factor {i}")
    for hx in range(spec.h.order):
        base = target.image(0, int(spec.injections[0](hx)))
        for i in range(1, spec.n_factors):
            if target.image(i, int(spec.injections[i](hx))) != base:
                raise DisagreeOnAmalgam((i, hx))
    acc = target.identity()
    for i, x in letters:
        acc = target.multiply(acc, target.image(i, x))
    return acc


# -- length functions ------------------------------------------------------------------

ROUND_GRID = 1 << 20


@dataclass(frozen=True)
class LengthFunction:
    """Nonnegative rational distance-to-identity on one finite group."""

    group: FiniteGroup
    values: tuple[Fraction, ...]


def length_function_validate(lf: LengthFunction) -> LengthFunction:
    """Exhaustively check the four axioms; failures carry a witness."""
    g = lf.group
    vals = lf.values
    if len(vals) != g.order:
        raise DimensionMismatch("one value per group element required")
    if vals[0] != 0:
        raise NonzeroAtIdentity(f"identity has length {vals[0]}")
    for x in range(g.order):
        if vals[g.inverse(x)] != vals[x]:
            raise NotSymmetric(x)
    for x in range(g.order):
        for y in range(g.order):
            if vals[g.conjugate(y, x)] != vals[x]:
                raise NotClassFunction((x, y))
            if vals[g.op(x, y)] > vals[x] + vals[y]:
                raise NotSubadditive((x, y))
    return lf


def discrete_length(group: FiniteGroup) -> LengthFunction:
    values = (Fraction(0),) + (Fraction(1),) * (group.order - 1)
    return length_function_validate(LengthFunction(group, values))


def padded_regular_representation(group: FiniteGroup, dim: int) -> np.ndarray:
    """Left-multiplication permutation matrices, identity-padded to dim."""
    n = group.order
    if dim < n:
        raise DimensionMismatch(f"dimension {dim} below group order {n}")
    out = np.zeros((n, dim, dim), dtype=np.int64)
    cols = np.arange(n)
    for g in range(n):
        out[g, group.mul[g, cols], cols] = 1
        for j in range(n, dim):
            out[g, j, j] = 1
    return out


def _cycle_length_bound(c: int) -> Fraction:
    # |lambda - 1| maximized over c-th roots of unity, rounded up to a grid
    # so values stay rational and subadditivity survives the rounding.
    if c == 1:
        return Fraction(0)
    if c % 2 == 0:
        return Fraction(2)
    exact = 2.0 * math.sin(math.pi * (c // 2) / c)
    return Fraction(math.ceil(exact * ROUND_GRID), ROUND_GRID)


def matrix_pullback_length(group: FiniteGroup, rep: np.ndarray) -> LengthFunction:
    """Length pulled back from a permutation representation.

    l(g) is the operator-norm distance of the permutation matrix to the
    identity: the largest |lambda - 1| over eigenvalues, determined by the
    cycle lengths, rounded upward onto a fixed rational grid.
    """
    rep = np.asarray(rep)
    n = group.order
    if rep.shape[0] != n or rep.shape[1] != rep.shape[2]:
        raise DimensionMismatch("need one square matrix per group element")
    dim = rep.shape[1]
    values = []
    for g in range(n):
        m = rep[g]
        if not (np.all((m == 0) | (m == 1))
                and np.all(m.sum(axis=0) == 1) and np.all(m.sum(axis=1) == 1)):
            raise DimensionMismatch(f"matrix for element {g} is not a permutation")
        perm = np.argmax(m, axis=0)
        seen = np.zeros(dim, dtype=bool)
        best = Fraction(0)
        for start in range(dim):
            if seen[start]:
                continue
            c = 0
            j = start
            while not seen[j]:
                seen[j] = True
                j = int(perm[j])
                c += 1
            cand = _cycle_length_bound(c)
            if cand > best:
                best = cand
        values.append(best)
    return length_function_validate(LengthFunction(group, tuple(values)))


def regular_pullback_length(group: FiniteGroup) -> LengthFunction:
    return matrix_pullback_length(
        group, padded_regular_representation(group, group.order))


# -- the coproduct pseudometric --------------------------------------------------------


def coproduct_pseudometric(spec: AmalgamSpec, lengths, word) -> Fraction:
    """Cheapest letterwise replacement that trivializes the word.

    Minimizes sum_k l_{i_k}(g_k e_k^{-1}) over tuples (e_k), e_k in the
    same factor as letter k, whose product is trivial in the coproduct.
    Interval dynamic program: a segment either reduces to the empty word
    or to one surviving letter; segments combine CYK-style.  Completeness
    of these two state kinds is checked against exhaustive enumeration in
    the test suite, not assumed.
    """
    if spec.h.order != 1:
        raise AmalgamNotTrivial("the pseudometric construction needs a coproduct")
    if len(lengths) != spec.n_factors:
        raise DimensionMismatch("one length function per factor required")
    for lf, fac in zip(lengths, spec.factors):
        if lf.group is not fac:
            raise SourceMismatch("length function group mismatch")
    letters = spec.check_word(word)
    n = len(letters)
    if n == 0:
        return Fraction(0)

    denom = 1
    for lf in lengths:
        for v in lf.values:
            denom = denom * v.denominator // math.gcd(denom, v.denominator)
    scaled = [[int(v * denom) for v in lf.values] for lf in lengths]

    INF = math.inf
    empty: list[list] = [[INF] * (n + 1) for _ in range(n + 1)]
    single: list[list] = [[None] * (n + 1) for _ in range(n + 1)]
    for a in range(n):
        i, g = letters[a]
        fac = spec.factors[i]
        lv = scaled[i]
        empty[a][a + 1] = lv[g]
        single[a][a + 1] = {
            (i, x): lv[fac.op(g, fac.inverse(x))]
            for x in range(1, fac.order)
        }
    for width in range(2, n + 1):
        for a in range(n - width + 1):
            b = a + width
            best_e = INF
            best_s: dict = {}
            for c in range(a + 1, b):
                le, re = empty[a][c], empty[c][b]
                ls, rs = single[a][c], single[c][b]
                if le + re < best_e:
                    best_e = le + re
                if re < INF:
                    for key, cost in ls.items():
                        t = cost + re
                        if t < best_s.get(key, INF):
                            best_s[key] = t
                if le < INF:
                    for key, cost in rs.items():
                        t = le + cost
                        if t < best_s.get(key, INF):
                            best_s[key] = t
                for (m, y), cy in ls.items():
                    fac = spec.factors[m]
                    for (m2, z), cz in rs.items():
                        if m2 != m:
                            continue
                        prod = fac.op(y, z)
                        t = cy + cz
                        if prod == 0:
                            if t < best_e:
                                best_e = t
                        elif t < best_s.get((m, prod), INF):
                            best_s[(m, prod)] = t
            empty[a][b] = best_e
            single[a][b] = best_s
    return Fraction(int(empty[0][n]), denom)


def pseudometric_distance(spec: AmalgamSpec, lengths, w1, w2) -> Fraction:
    combined = tuple(spec.check_word(w1)) + word_inverse(spec, w2)
    return coproduct_pseudometric(spec, lengths, combined)


# -- comparison against the Bohr side ---------------------------------------------------


def _operator_norm(a: np.ndarray, tol: float = 1e-9, cap: int = 10 ** 4) -> float:
    """Largest singular value by power iteration on a^T a."""
    b = a.T @ a
    dim = b.shape[0]
    v = np.ones(dim) + np.arange(dim) / (7.0 * dim)
    v /= np.linalg.norm(v)
    lam = 0.0
    for _ in range(cap):
        w = b @ v
        norm = np.linalg.norm(w)
        if norm == 0.0:
            return 0.0
        v = w / norm
        new = float(v @ b @ v)
        if abs(new - lam) < tol * max(1.0, new):
            lam = new
            break
        lam = new
    return math.sqrt(max(lam, 0.0))


@dataclass(frozen=True)
class BohrLipschitzRecord:
    delta: Fraction
    vacuous: bool
    opnorm: float | None
    bound: float | None
    holds: bool | None


def bohr_lipschitz_check(spec: AmalgamSpec, reps, w1, w2,
                         tol: float = 1e-9) -> BohrLipschitzRecord:
    """Check the operator-norm bound delta/(1-delta) between two words.

    delta is the pseudometric distance under lengths pulled back from the
    given permutation representations; the same representations evaluate
    both words in a common dimension.  For delta >= 1 the bound carries no
    content and the record says Vacuous.
    """
    reps = [np.asarray(r) for r in reps]
    dims = {r.shape[1] for r in reps}
    if len(dims) != 1:
        raise DimensionMismatch(f"representations span dimensions {sorted(dims)}")
    lengths = [matrix_pullback_length(fac, rep)
               for fac, rep in zip(spec.factors, reps)]
    delta = pseudometric_distance(spec, lengths, w1, w2)
    if delta >= 1:
        return BohrLipschitzRecord(delta=delta, vacuous=True,
                                   opnorm=None, bound=None, holds=None)

    def evaluate(word):
        dim = next(iter(dims))
        acc = np.eye(dim)
        for i, x in spec.check_word(word):
            acc = acc @ reps[i][x]
        return acc

    diff = evaluate(w1) - evaluate(w2)
    opnorm = _operator_norm(diff, tol=tol)
    bound = float(delta / (1 - delta))
    return BohrLipschitzRecord(delta=delta, vacuous=False, opnorm=opnorm,
                               bound=bound, holds=opnorm <= bound + tol)


# -- split families ---------------------------------------------------------------------


def _random_word(rng: random.Random, spec: AmalgamSpec, max_len: int):
    length = rng.randrange(max_len + 1)
    return tuple(
        (i, rng.randrange(spec.factors[i].order))
        for i in (rng.randrange(spec.n_factors) for _ in range(length)))


def _padded_with_identities(rng: random.Random, spec: AmalgamSpec, word):
    """An equality-preserving rewrite: identity insertions and letter splits."""
    out = []
    for i, x in word:
        fac = spec.factors[i]
        roll = rng.random()
        if roll < 0.3:
            out.append((rng.randrange(spec.n_factors), 0))
            out.append((i, x))
        elif roll < 0.6:
            y = rng.randrange(fac.order)
            out.append((i, fac.op(x, fac.inverse(y))))
            out.append((i, y))
        else:
            out.append((i, x))
    if rng.random() < 0.3:
        out.append((rng.randrange(spec.n_factors), 0))
    return tuple(out)


def split_decomposition_check(h: FiniteGroup, members, sample_count: int = 200,
                              seed: int = 0) -> bool:
    """Compare the two word machines a split family generates.

    Machine A amalgamates the semidirect products H_i x| H over H; machine B
    is the plain coproduct of the H_i extended by H acting letterwise.  The
    canonical maps between them must preserve word equality; checked on
    seeded random word pairs, half of them equality-preserving rewrites.
    """
    members = list(members)
    if not members:
        return True
    acts = [validate_action(fac, h, action) for fac, action in members]
    built = [semidirect(fac, h, action) for fac, action in members]
    spec_a = AmalgamSpec(h, [grp for grp, _, _ in built],
                         [emb_h for _, _, emb_h in built])
    spec_b = free_product([fac for fac, _ in members])
    emb_n = [e for _, e, _ in built]
    emb_h0 = built[0][2]

    def to_b(word):
        letters = ()
        hcur = 0
        for i, g in spec_a.check_word(word):
            x, a = divmod(g, h.order)
            letters += ((i, int(acts[i][hcur][x])),)
            hcur = h.op(hcur, a)
        return letters, hcur

    def b_equal(e1, e2):
        return e1[1] == e2[1] and normal_form(spec_b, e1[0]) == normal_form(
            spec_b, e2[0])

    def to_a(element):
        letters, hcur = element
        word = [(i, int(emb_n[i](x))) for i, x in letters]
        word.append((0, int(emb_h0(hcur))))
        return tuple(word)

    rng = random.Random(seed)
    for _ in range(sample_count):
        w1 = _random_word(rng, spec_a, 6)
        if rng.random() < 0.5:
            w2 = _padded_with_identities(rng, spec_a, w1)
        else:
            w2 = _random_word(rng, spec_a, 6)
        same_a = word_equal(spec_a, w1, w2)
        same_b = b_equal(to_b(w1), to_b(w2))
        if same_a != same_b:
            return False
        if not word_equal(spec_a, to_a(to_b(w1)), w1):
            return False
    return True


@dataclass(frozen=True)
class SplitVerdict:
    sound: bool
    kind: str
    decomposition_passed: bool | None
    samples: int


def split_family_verdict(h: FiniteGroup, members, sample_count: int = 200,
                         seed: int = 0) -> SplitVerdict:
    """Families of split embeddings are sound unconditionally.

    The certificate records that fact; for finite data the two-machine
    decomposition check is attached as corroborating evidence.
    """
    members = list(members)
    for fac, action in members:
        validate_action(fac, h, action)
    passed = split_decomposition_check(h, members, sample_count=sample_count,
                                       seed=seed)
    return SplitVerdict(sound=True, kind="split",
                        decomposition_passed=passed, samples=sample_count)


# -- the canonical worked example --------------------------------------------------------


def sl2z_amalgam() -> AmalgamSpec:
    """Z/4 amalgamated with Z/6 over the shared Z/2.

    The generator of Z/4 squares to the shared involution; the generator of
    Z/6 cubes to it.  Words over this spec multiply out to 2x2 integer
    matrices under sl2z_matrix_target.
    """
    from .groups import cyclic

    z2 = cyclic(2)
    z4 = cyclic(4)
    z6 = cyclic(6)
    return AmalgamSpec(z2, [z4, z6],
                       [GroupHom(z2, z4, [0, 2]), GroupHom(z2, z6, [0, 3])])


def sl2z_matrix_target(modulus: int | None = None) -> MatrixTarget:
    alpha = ((0, -1), (1, 0))
    beta = ((0, -1), (1, 1))
    powers_a = [mat_identity(2)]
    powers_b = [mat_identity(2)]
    for _ in range(3):
        powers_a.append(mat_mul(powers_a[-1], alpha))
    for _ in range(5):
        powers_b.append(mat_mul(powers_b[-1], beta))
    return MatrixTarget(2, [powers_a, powers_b], modulus=modulus)
