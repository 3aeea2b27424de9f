"""Character tables over GF(p) and restriction/Clifford analysis.

Tables are computed by the class-algebra eigenvector method: the structure
constants of the class sums give r commuting matrices over GF(p) whose common
eigenvectors are the central characters; degrees and values are recovered from
orthogonality.  The prime satisfies p = 1 mod exponent(G) and p > 2|G|, so
character values live in GF(p) and every inner product of genuine characters
lifts to the true integer.

Value vectors at different primes are not comparable, so any operation that
crosses between a group and a subgroup computes both tables at one shared
prime (the ambient group's, or a family-wide common prime).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd, isqrt

import numpy as np

from . import config
from .errors import (
    DegreeMismatch,
    NotNormal,
    NotProper,
    PrimeSearchFailure,
    SizeLimit,
    SourceMismatch,
)
from .groups import FiniteGroup, GroupHom


# -- primes -----------------------------------------------------------------


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def splitting_prime(exponent: int, min_order: int) -> int:
    """Smallest prime p = 1 mod exponent with p > 2*min_order."""
    p = -(-2 * min_order // exponent) * exponent + 1
    while p < config.PRIME_SEARCH_LIMIT:
        if p > 2 * min_order and _is_prime(p):
            return p
        p += exponent
    raise PrimeSearchFailure(f"no admissible prime below {config.PRIME_SEARCH_LIMIT}")


def common_prime(groups) -> int:
    """One prime valid for every group in the family."""
    e = 1
    m = 1
    for g in groups:
        e = e * g.exponent // gcd(e, g.exponent)
        m = max(m, g.order)
    return splitting_prime(e, m)


# -- modular linear algebra ---------------------------------------------------


def _rref_mod(a: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    a = a.astype(np.int64) % p
    rows, cols = a.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        a[r] = a[r] * pow(int(a[r, c]), p - 2, p) % p
        other = np.nonzero(a[:, c])[0]
        for j in other:
            if j != r:
                a[j] = (a[j] - a[j, c] * a[r]) % p
        pivots.append(c)
        r += 1
    return a, pivots


def _nullspace_mod(a: np.ndarray, p: int) -> np.ndarray:
    """Columns spanning the right nullspace of a over GF(p)."""
    rref, pivots = _rref_mod(a, p)
    cols = a.shape[1]
    free = [c for c in range(cols) if c not in pivots]
    basis = np.zeros((cols, len(free)), dtype=np.int64)
    for k, c in enumerate(free):
        basis[c, k] = 1
        for r, pc in enumerate(pivots):
            basis[pc, k] = (-rref[r, c]) % p
    return basis


def _solve_mod(b: np.ndarray, y: np.ndarray, p: int) -> np.ndarray:
    """X with b X = y (b of full column rank d); returns (d, y.shape[1])."""
    d = b.shape[1]
    aug = np.concatenate([b % p, y % p], axis=1)
    rref, pivots = _rref_mod(aug, p)
    if pivots[:d] != list(range(d)):
        raise ArithmeticError("basis matrix is column-degenerate")
    return rref[:d, d:]


def _charpoly_mod(a: np.ndarray, p: int) -> list[int]:
    """Monic characteristic polynomial of a over GF(p), low degree first."""
    h = a.astype(np.int64) % p
    d = h.shape[0]
    for j in range(d - 2):
        nz = np.nonzero(h[j + 1:, j])[0]
        if nz.size == 0:
            continue
        i = j + 1 + int(nz[0])
        if i != j + 1:
            h[[j + 1, i]] = h[[i, j + 1]]
            h[:, [j + 1, i]] = h[:, [i, j + 1]]
        inv = pow(int(h[j + 1, j]), p - 2, p)
        for i in range(j + 2, d):
            f = int(h[i, j]) * inv % p
            if f:
                h[i] = (h[i] - f * h[j + 1]) % p
                h[:, j + 1] = (h[:, j + 1] + f * h[:, i]) % p
    # determinant expansion of xI - H along the last row of each leading block
    polys: list[list[int]] = [[1]]
    for k in range(1, d + 1):
        prev = polys[k - 1]
        # (x - h[k-1,k-1]) * p_{k-1}
        cur = [0] * (len(prev) + 1)
        for i, c in enumerate(prev):
            cur[i + 1] = (cur[i + 1] + c) % p
            cur[i] = (cur[i] - c * h[k - 1, k - 1]) % p
        run = 1
        for m in range(1, k):
            run = run * int(h[k - m, k - m - 1]) % p
            if run == 0:
                break
            coeff = int(h[k - 1 - m, k - 1]) * run % p
            if coeff:
                sub = polys[k - 1 - m]
                for i, c in enumerate(sub):
                    cur[i] = (cur[i] - coeff * c) % p
        polys.append(cur)
    return polys[d]


def _poly_roots_mod(coeffs: list[int], p: int) -> list[int]:
    xs = np.arange(p, dtype=np.int64)
    acc = np.zeros(p, dtype=np.int64)
    for c in reversed(coeffs):
        acc = (acc * xs + c) % p
    return [int(x) for x in np.nonzero(acc == 0)[0]]


# -- the table -----------------------------------------------------------------


def _class_matrix(g: FiniteGroup, i: int, p: int) -> np.ndarray:
    """M with M[j, k] = #{x in C_i : x^-1 z_k in C_j}; acts on omega columns."""
    r = len(g.conjugacy_classes)
    reps = np.array(g.class_reps)
    out = np.zeros((r, r), dtype=np.int64)
    cls = g.class_of
    ks = np.arange(r)
    for x in g.conjugacy_classes[i]:
        w = g.mul[g.inv[x], reps]
        np.add.at(out, (cls[w], ks), 1)
    return out % p


class CharacterTable:
    """Irreducible characters of a finite group, as values in GF(p).

    Rows are sorted by (degree, value vector); columns follow the group's
    conjugacy class order.  Everything downstream treats rows as opaque
    irreducibles and only ever compares them through integer inner products.
    """

    def __init__(self, group: FiniteGroup, prime: int, degrees, values):
        self.group = group
        self.prime = prime
        self.degrees = tuple(int(d) for d in degrees)
        vals = np.asarray(values, dtype=np.int64) % prime
        vals.setflags(write=False)
        self.values = vals
        self.n_classes = len(group.conjugacy_classes)
        self._row_lookup = {tuple(int(v) for v in vals[i]): i
                            for i in range(vals.shape[0])}
        self._sizes = np.array([len(c) for c in group.conjugacy_classes],
                               dtype=np.int64)
        self._inv_cls = list(group.inverse_class)
        self._order_inv = pow(group.order, prime - 2, prime)

    @property
    def n_irreducibles(self) -> int:
        return len(self.degrees)

    def row(self, i: int) -> np.ndarray:
        return self.values[i]

    def row_index(self, vector) -> int:
        key = tuple(int(v) % self.prime for v in vector)
        try:
            return self._row_lookup[key]
        except KeyError:
            raise SourceMismatch("vector is not an irreducible character") from None

    def inner(self, u, v) -> int:
        """Integer <u, v-bar> for class-function value vectors over GF(p).

        Exact whenever the true inner product lies in [0, p), which holds for
        all restriction and multiplicity computations used here.
        """
        u = np.asarray(u, dtype=np.int64) % self.prime
        v = np.asarray(v, dtype=np.int64) % self.prime
        tot = int(np.sum(self._sizes * u * v[self._inv_cls] % self.prime)
                  % self.prime)
        return tot * self._order_inv % self.prime

    def trivial_index(self) -> int:
        return self.row_index([1] * self.n_classes)

    def serialize(self) -> dict:
        return {
            "schema": "bohrsound/chartable/1",
            "group_digest": self.group.table_digest,
            "order": self.group.order,
            "prime": self.prime,
            "class_reps": list(self.group.class_reps),
            "class_sizes": [len(c) for c in self.group.conjugacy_classes],
            "degrees": list(self.degrees),
            "values": [[int(v) for v in row] for row in self.values],
        }

    def __repr__(self) -> str:
        return (f"<CharacterTable {self.group.name} degrees={self.degrees} "
                f"p={self.prime}>")


def _compute_table(g: FiniteGroup, p: int) -> CharacterTable:
    r = len(g.conjugacy_classes)
    sizes = np.array([len(c) for c in g.conjugacy_classes], dtype=np.int64)
    inv_cls = list(g.inverse_class)
    subspaces: list[np.ndarray] = [np.eye(r, dtype=np.int64)]
    for i in range(1, r):
        if all(b.shape[1] == 1 for b in subspaces):
            break
        mi = _class_matrix(g, i, p)
        refined: list[np.ndarray] = []
        for b in subspaces:
            d = b.shape[1]
            if d == 1:
                refined.append(b)
                continue
            rest = _solve_mod(b, mi @ b % p, p)
            roots = _poly_roots_mod(_charpoly_mod(rest, p), p)
            split_dim = 0
            for lam in roots:
                null = _nullspace_mod((rest - lam * np.eye(d, dtype=np.int64)) % p, p)
                if null.shape[1]:
                    refined.append(b @ null % p)
                    split_dim += null.shape[1]
            if split_dim != d:
                raise PrimeSearchFailure("class matrix failed to diagonalize mod p")
        subspaces = refined
    if any(b.shape[1] != 1 for b in subspaces):
        raise PrimeSearchFailure("class matrices did not separate the characters")

    size_inv = np.array([pow(int(s), p - 2, p) for s in sizes], dtype=np.int64)
    rows = []
    for b in subspaces:
        v = b[:, 0] % p
        if v[0] == 0:
            raise PrimeSearchFailure("degenerate central character")
        omega = v * pow(int(v[0]), p - 2, p) % p
        t = int(np.sum(omega * omega[inv_cls] % p * size_inv % p) % p)
        dsq = g.order * pow(t, p - 2, p) % p
        deg = next((d for d in range(1, isqrt(g.order) + 1) if d * d % p == dsq), None)
        if deg is None:
            raise PrimeSearchFailure("degree recovery failed")
        chi = deg * omega % p * size_inv % p
        rows.append((deg, tuple(int(x) for x in chi)))
    rows.sort()
    degrees = [d for d, _ in rows]
    values = np.array([list(v) for _, v in rows], dtype=np.int64)

    if sum(d * d for d in degrees) != g.order:
        raise PrimeSearchFailure("degree square sum mismatch")
    table = CharacterTable(g, p, degrees, values)
    weighted = values * sizes[None, :] % p
    gram = weighted @ values[:, inv_cls].T % p
    if not np.array_equal(gram, np.eye(r, dtype=np.int64) * (g.order % p) % p):
        raise PrimeSearchFailure("orthogonality check failed")
    return table


_TABLE_MEMO: dict[tuple[str, int], CharacterTable] = {}


def character_table(g: FiniteGroup, prime: int | None = None) -> CharacterTable:
    """Character table at the given prime (default: the group's canonical one)."""
    if g.order > config.CHARTABLE_MAX_ORDER:
        raise SizeLimit(f"character tables limited to order {config.CHARTABLE_MAX_ORDER}")
    if prime is None:
        prime = splitting_prime(g.exponent, g.order)
    elif (prime - 1) % g.exponent or prime <= 2 * g.order:
        raise PrimeSearchFailure(f"prime {prime} inadmissible for {g.name}")
    key = (g.table_digest, prime)
    memo = _TABLE_MEMO.get(key)
    if memo is None or memo.group is not g:
        memo = _compute_table(g, prime)
        _TABLE_MEMO[key] = memo
    return memo


# -- characters as multiplicity vectors -----------------------------------------


@dataclass(frozen=True)
class Character:
    """A (not necessarily irreducible) character: multiplicities over table rows."""

    table: CharacterTable
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if len(self.coeffs) != self.table.n_irreducibles:
            raise DegreeMismatch("coefficient count must match the table")
        if any(c < 0 for c in self.coeffs):
            raise DegreeMismatch("characters have nonnegative multiplicities")

    @property
    def degree(self) -> int:
        return sum(c * d for c, d in zip(self.coeffs, self.table.degrees))

    def value_vector(self) -> np.ndarray:
        c = np.array(self.coeffs, dtype=np.int64)
        return (c @ self.table.values) % self.table.prime

    def __add__(self, other: "Character") -> "Character":
        if other.table is not self.table:
            raise SourceMismatch("characters over different tables")
        return Character(self.table, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))


def irreducible_character(table: CharacterTable, index: int) -> Character:
    coeffs = [0] * table.n_irreducibles
    coeffs[index] = 1
    return Character(table, tuple(coeffs))


def trivial_character(table: CharacterTable) -> Character:
    return irreducible_character(table, table.trivial_index())


def regular_character(table: CharacterTable) -> Character:
    return Character(table, tuple(table.degrees))


# -- restriction ------------------------------------------------------------------


def _check_aligned(tg: CharacterTable, th: CharacterTable, emb: GroupHom) -> None:
    if emb.source is not th.group or emb.target is not tg.group:
        raise SourceMismatch("embedding endpoints do not match the tables")
    if tg.prime != th.prime:
        raise SourceMismatch("tables must share a prime for restriction work")


def restricted_values(tg: CharacterTable, pi: int, emb: GroupHom,
                      th: CharacterTable) -> np.ndarray:
    """Values of pi composed with emb, as a class function on the subgroup."""
    _check_aligned(tg, th, emb)
    g = tg.group
    h = th.group
    cols = [int(g.class_of[emb(rep)]) for rep in h.class_reps]
    return tg.values[pi][cols]


def restriction_multiplicity(tg: CharacterTable, pi: int, th: CharacterTable,
                             rho: int, emb: GroupHom) -> int:
    """<pi restricted along emb, rho> as an exact integer."""
    emb.require_injective()
    res = restricted_values(tg, pi, emb, th)
    return th.inner(res, th.row(rho))


def restriction_matrix(tg: CharacterTable, th: CharacterTable,
                       emb: GroupHom) -> np.ndarray:
    """Multiplicity matrix M[pi, rho] = <pi|_H, rho>, exact integers."""
    _check_aligned(tg, th, emb)
    out = np.empty((tg.n_irreducibles, th.n_irreducibles), dtype=np.int64)
    for pi in range(tg.n_irreducibles):
        res = restricted_values(tg, pi, emb, th)
        for rho in range(th.n_irreducibles):
            out[pi, rho] = th.inner(res, th.row(rho))
    return out


# -- equalizer dichotomy ------------------------------------------------------------


@dataclass(frozen=True)
class EqualizerWitness:
    """Certificate that a proper subgroup is separated inside the ambient group.

    kind 'split': one irreducible restricts with self-intersection >= 2;
    kind 'collision': two distinct irreducibles restrict to equal characters.
    """

    kind: str
    indices: tuple[int, ...]
    self_intersection: int | None
    prime: int
    degrees: tuple[int, ...]


def equalizer_witness(emb: GroupHom) -> EqualizerWitness:
    emb.require_injective()
    g = emb.target
    if len(emb.image) == g.order:
        raise NotProper("subgroup equals the ambient group")
    tg = character_table(g)
    th = character_table(emb.source, prime=tg.prime)
    m = restriction_matrix(tg, th, emb)
    self_ints = (m * m).sum(axis=1)
    for pi in range(tg.n_irreducibles):
        if self_ints[pi] >= 2:
            return EqualizerWitness(kind="split", indices=(pi,),
                                    self_intersection=int(self_ints[pi]),
                                    prime=tg.prime, degrees=(tg.degrees[pi],))
    # every restriction is irreducible; two rows of m must coincide
    for i in range(tg.n_irreducibles):
        for j in range(i + 1, tg.n_irreducibles):
            if np.array_equal(m[i], m[j]):
                return EqualizerWitness(kind="collision", indices=(i, j),
                                        self_intersection=None, prime=tg.prime,
                                        degrees=(tg.degrees[i], tg.degrees[j]))
    raise AssertionError("proper subgroup without split or collision witness")


# -- Clifford classes ----------------------------------------------------------------


def _conjugation_row_permutations(tg: CharacterTable, th: CharacterTable,
                                  emb: GroupHom) -> list[tuple[int, ...]]:
    """Row permutations of Irr(H) induced by conjugation with ambient elements."""
    _check_aligned(tg, th, emb)
    g = tg.group
    h = th.group
    image = set(emb.image)
    pre = emb.preimage
    perms = set()
    for x in range(g.order):
        cols = []
        for rep in h.class_reps:
            y = g.conjugate(x, emb(rep))
            if y not in image:
                raise NotNormal((x, rep))
            cols.append(int(h.class_of[pre[y]]))
        perm = tuple(th.row_index(th.values[rho][cols])
                     for rho in range(th.n_irreducibles))
        perms.add(perm)
    return sorted(perms)


def _orbit_under(rho: int, actions) -> tuple[int, ...]:
    seen = {rho}
    frontier = [rho]
    while frontier:
        x = frontier.pop()
        for perm in actions:
            y = perm[x]
            if y not in seen:
                seen.add(y)
                frontier.append(y)
    return tuple(sorted(seen))


def clifford_class(rho: int, embs: list[GroupHom]) -> tuple[int, ...]:
    """Orbit of the rho-th irreducible of the common source under conjugation
    by every ambient group of the family.  Images must be normal."""
    if not embs:
        raise SourceMismatch("need at least one embedding to locate the source")
    h = embs[0].source
    p = common_prime([h] + [e.target for e in embs])
    th = character_table(h, prime=p)
    actions = []
    for e in embs:
        tg = character_table(e.target, prime=p)
        actions.extend(_conjugation_row_permutations(tg, th, e))
    return _orbit_under(rho, actions)


def clifford_multiplicity(tg: CharacterTable, th: CharacterTable,
                          emb: GroupHom, rho: int) -> int:
    """Smallest positive <pi|_H, rho> over the ambient irreducibles."""
    best = None
    for pi in range(tg.n_irreducibles):
        mult = restriction_multiplicity(tg, pi, th, rho, emb)
        if mult > 0 and (best is None or mult < best):
            best = mult
    if best is None:
        raise AssertionError("rho does not appear in any restriction")
    return best


@dataclass(frozen=True)
class CliffordReport:
    """Per-irreducible summary used by the finiteness criterion.

    per_member maps the family index to the minimal positive multiplicity of
    rho in restrictions from that member; sup_multiplicity is their maximum
    (None for an empty family).
    """

    rho: int
    rho_degree: int
    class_members: tuple[int, ...]
    class_size: int
    per_member: dict[int, int]
    sup_multiplicity: int | None


def fin_check(embs: list[GroupHom],
              source: FiniteGroup | None = None) -> list[CliffordReport]:
    """Clifford class and multiplicity data for every irreducible of the source.

    All embeddings must share one source and have normal image; tables are
    computed at a family-wide prime so orbits fuse consistently.  An empty
    family needs the source passed explicitly and yields singleton classes
    with empty multiplicity maps.
    """
    if not embs:
        if source is None:
            raise SourceMismatch("empty family needs an explicit source group")
        th = character_table(source)
        return [CliffordReport(rho=r, rho_degree=th.degrees[r],
                               class_members=(r,), class_size=1,
                               per_member={}, sup_multiplicity=None)
                for r in range(th.n_irreducibles)]
    h = embs[0].source
    if source is not None and source is not h:
        raise SourceMismatch("explicit source disagrees with the family")
    for e in embs:
        if e.source is not h:
            raise SourceMismatch("family members must share the amalgamated group")
        e.require_injective()
    p = common_prime([h] + [e.target for e in embs])
    th = character_table(h, prime=p)
    actions = []
    tables = []
    for e in embs:
        tg = character_table(e.target, prime=p)
        tables.append(tg)
        actions.extend(_conjugation_row_permutations(tg, th, e))
    reports = []
    for rho in range(th.n_irreducibles):
        members = _orbit_under(rho, actions)
        per = {i: clifford_multiplicity(tables[i], th, e, rho)
               for i, e in enumerate(embs)}
        sup = max(per.values()) if per else None
        reports.append(CliffordReport(
            rho=rho, rho_degree=th.degrees[rho], class_members=members,
            class_size=len(members), per_member=per, sup_multiplicity=sup))
    return reports


# -- extension step for finite coproducts ----------------------------------------------


def coproduct_extension(phi_h: Character, phi_k: Character,
                        emb: GroupHom) -> tuple[Character, Character]:
    """Extend phi_h to the ambient group and pad phi_k to match degrees.

    Greedy: scan ambient irreducibles in row order, take one copy of the first
    whose restriction still covers a needed subgroup constituent, repeat.
    """
    if phi_h.degree != phi_k.degree:
        raise DegreeMismatch(f"degrees differ: {phi_h.degree} != {phi_k.degree}")
    th = phi_h.table
    if th.group is not emb.source:
        raise SourceMismatch("phi_h must live on the embedding source")
    tg = character_table(emb.target, prime=th.prime)
    m = restriction_matrix(tg, th, emb)
    need = list(phi_h.coeffs)
    chosen = [0] * tg.n_irreducibles
    while any(need):
        rho = next(i for i, c in enumerate(need) if c > 0)
        pi = next((i for i in range(tg.n_irreducibles) if m[i, rho] > 0), None)
        if pi is None:
            raise AssertionError("restriction of the regular character misses a row")
        chosen[pi] += 1
        for j in range(th.n_irreducibles):
            need[j] = max(0, need[j] - int(m[pi, j]))
    phi_g = Character(tg, tuple(chosen))
    pad = phi_g.degree - phi_k.degree
    tk = phi_k.table
    triv = tk.trivial_index()
    padded = list(phi_k.coeffs)
    padded[triv] += pad
    return phi_g, Character(tk, tuple(padded))
