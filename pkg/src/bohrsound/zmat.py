"""Exact integer matrix groups, Smith normal form and torus actions.

Matrices are tuples of tuples of Python ints, so products never overflow.
Finiteness of generated subgroups of GL(k, Z) is decided by enumeration
against Minkowski's bound M(k): any finite subgroup has order dividing M(k),
so seeing M(k) + 1 distinct elements certifies infinitude.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import config
from .errors import DimensionMismatch, FactorNotFinite, NotUnimodular, SizeLimit
from .groups import FiniteAbelian, abelian_from_orders

IntMatrix = tuple[tuple[int, ...], ...]


def mat(rows) -> IntMatrix:
    m = tuple(tuple(int(v) for v in row) for row in rows)
    if not m or any(len(r) != len(m[0]) for r in m):
        raise DimensionMismatch("ragged matrix")
    return m


def identity(k: int) -> IntMatrix:
    return tuple(tuple(1 if i == j else 0 for j in range(k)) for i in range(k))


def mat_mul(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    if len(a[0]) != len(b):
        raise DimensionMismatch("inner dimensions differ")
    bt = tuple(zip(*b))
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a)


def mat_vec(a: IntMatrix, v: tuple[int, ...]) -> tuple[int, ...]:
    if len(a[0]) != len(v):
        raise DimensionMismatch("matrix/vector dimensions differ")
    return tuple(sum(x * y for x, y in zip(row, v)) for row in a)


def transpose(a: IntMatrix) -> IntMatrix:
    return tuple(zip(*a))


def mat_det(a: IntMatrix) -> int:
    """Determinant by fraction-free Bareiss elimination."""
    n = len(a)
    if any(len(r) != n for r in a):
        raise DimensionMismatch("determinant of a non-square matrix")
    m = [list(row) for row in a]
    sign = 1
    prev = 1
    for i in range(n - 1):
        if m[i][i] == 0:
            for j in range(i + 1, n):
                if m[j][i]:
                    m[i], m[j] = m[j], m[i]
                    sign = -sign
                    break
            else:
                return 0
        for j in range(i + 1, n):
            for k in range(i + 1, n):
                m[j][k] = (m[j][k] * m[i][i] - m[j][i] * m[i][k]) // prev
            m[j][i] = 0
        prev = m[i][i]
    return sign * m[-1][-1]


def mat_inv_unimodular(a: IntMatrix) -> IntMatrix:
    """Inverse of a matrix with determinant +-1, via the adjugate."""
    d = mat_det(a)
    if d not in (1, -1):
        raise NotUnimodular(d)
    n = len(a)
    if n == 1:
        return ((d,),)
    cof = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = tuple(tuple(a[r][c] for c in range(n) if c != j)
                          for r in range(n) if r != i)
            cof[i][j] = (-1) ** (i + j) * mat_det(minor)
    adj = tuple(zip(*[tuple(row) for row in cof]))
    return tuple(tuple(d * v for v in row) for row in adj)


# -- Smith normal form ----------------------------------------------------------


def smith_normal_form(a: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return (U, S, V) with U a V = S diagonal, nonnegative, d_i | d_{i+1}.

    U and V are unimodular; works on rectangular input.
    """
    m = [list(row) for row in a]
    rows, cols = len(m), len(m[0])
    u = [[int(i == j) for j in range(rows)] for i in range(rows)]
    v = [[int(i == j) for j in range(cols)] for i in range(cols)]

    def swap_rows(i, j):
        m[i], m[j] = m[j], m[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in m:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, c):
        # row dst += c * row src
        for k in range(cols):
            m[dst][k] += c * m[src][k]
        for k in range(rows):
            u[dst][k] += c * u[src][k]

    def add_col(src, dst, c):
        for row in m:
            row[dst] += c * row[src]
        for row in v:
            row[dst] += c * row[src]

    def negate_row(i):
        m[i] = [-x for x in m[i]]
        u[i] = [-x for x in u[i]]

    t = 0
    while t < min(rows, cols):
        # find a nonzero pivot of minimal magnitude in the remaining block
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                if m[i][j] and (best is None or abs(m[i][j]) < abs(m[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        while True:
            pivot = m[t][t]
            reduced = False
            for i in range(t + 1, rows):
                if m[i][t]:
                    q = m[i][t] // pivot
                    add_row(t, i, -q)
                    if m[i][t]:
                        swap_rows(t, i)
                        reduced = True
                        pivot = m[t][t]
            for j in range(t + 1, cols):
                if m[t][j]:
                    q = m[t][j] // pivot
                    add_col(t, j, -q)
                    if m[t][j]:
                        swap_cols(t, j)
                        reduced = True
                        pivot = m[t][t]
            if reduced:
                continue
            # pivot must divide every remaining entry; fold a violator in and retry
            violator = None
            for i in range(t + 1, rows):
                for j in range(t + 1, cols):
                    if m[i][j] % pivot:
                        violator = i
                        break
                if violator is not None:
                    break
            if violator is None:
                break
            add_row(violator, t, 1)
        if m[t][t] < 0:
            negate_row(t)
        t += 1
    # The min-pivot loop already yields a divisibility chain; this pass is a
    # cheap local repair in case of a missed pair (gcd to i, lcm to i+1).
    r = t
    changed = True
    while changed:
        changed = False
        for i in range(r - 1):
            a_, b_ = m[i][i], m[i + 1][i + 1]
            if a_ and b_ % a_:
                _chain_fix(m, u, v, i)
                changed = True
    s = mat(m)
    return mat(u), s, mat(v)


def _chain_fix(m, u, v, i):
    """Replace diag entries (a, b) at i, i+1 by (gcd, +-lcm) via 2x2 row/col ops."""
    rows, cols = len(m), len(m[0])

    def add_row(src, dst, c):
        for k in range(cols):
            m[dst][k] += c * m[src][k]
        for k in range(rows):
            u[dst][k] += c * u[src][k]

    def add_col(src, dst, c):
        for row in m:
            row[dst] += c * row[src]
        for row in v:
            row[dst] += c * row[src]

    def swap_cols(x, y):
        for row in m:
            row[x], row[y] = row[y], row[x]
        for row in v:
            row[x], row[y] = row[y], row[x]

    j = i + 1
    add_row(j, i, 1)            # row i becomes (a, b) at columns (i, j)
    while m[i][j]:
        q = m[i][i] // m[i][j]
        add_col(j, i, -q)       # Euclid between the two columns
        swap_cols(i, j)
    # column j of row i is zero; clear the stray entry below the new pivot
    if m[j][i]:
        q = m[j][i] // m[i][i]  # exact: the entry is a multiple of gcd(a, b)
        add_row(i, j, -q)
    for t in (i, j):
        if m[t][t] < 0:
            m[t] = [-x for x in m[t]]
            u[t] = [-x for x in u[t]]


def snf_diagonal(a: IntMatrix) -> tuple[int, ...]:
    _, s, _ = smith_normal_form(a)
    return tuple(s[i][i] for i in range(min(len(s), len(s[0]))))


# -- Minkowski bound and finiteness ----------------------------------------------


def _primes_upto(n: int) -> list[int]:
    sieve = [True] * (n + 1)
    out = []
    for p in range(2, n + 1):
        if sieve[p]:
            out.append(p)
            for q in range(p * p, n + 1, p):
                sieve[q] = False
    return out


def minkowski_bound(k: int) -> int:
    """M(k): every finite subgroup of GL(k, Z) has order dividing M(k)."""
    if not 1 <= k <= config.MINKOWSKI_MAX_RANK:
        raise SizeLimit(f"rank must be in 1..{config.MINKOWSKI_MAX_RANK}")
    out = 1
    for p in _primes_upto(k + 1):
        e = 0
        pk = 1  # p^i
        while k // (pk * (p - 1)):
            e += k // (pk * (p - 1))
            pk *= p
        out *= p ** e
    return out


@dataclass(frozen=True)
class MatrixGroupResult:
    """Outcome of enumerating a generated subgroup of GL(k, Z)."""

    finite: bool
    rank: int
    order: int | None = None
    elements: frozenset[IntMatrix] | None = None
    witness_count: int | None = None

    def __str__(self) -> str:
        if self.finite:
            return f"finite of order {self.order}"
        return f"infinite ({self.witness_count} distinct elements enumerated)"


def _checked_gens(gens) -> tuple[list[IntMatrix], int]:
    gens = [mat(g) for g in gens]
    if not gens:
        raise DimensionMismatch("at least one generator required")
    k = len(gens[0])
    for g in gens:
        if len(g) != k or len(g[0]) != k:
            raise DimensionMismatch("generators must be square of equal size")
        d = mat_det(g)
        if d not in (1, -1):
            raise NotUnimodular(d)
    return gens, k


def generated_group(gens, bound: int | None = None) -> MatrixGroupResult:
    """BFS closure of the generated subgroup, stopping past Minkowski's bound."""
    gens, k = _checked_gens(gens)
    if bound is None:
        bound = minkowski_bound(k)
    step = []
    for g in gens:
        step.append(g)
        step.append(mat_inv_unimodular(g))
    seen = {identity(k)}
    frontier = [identity(k)]
    while frontier:
        nxt = []
        for x in frontier:
            for g in step:
                y = mat_mul(x, g)
                if y not in seen:
                    seen.add(y)
                    if len(seen) > bound:
                        return MatrixGroupResult(finite=False, rank=k,
                                                 witness_count=len(seen))
                    nxt.append(y)
        frontier = nxt
    return MatrixGroupResult(finite=True, rank=k, order=len(seen),
                             elements=frozenset(seen))


def element_order(m: IntMatrix, bound: int | None = None) -> int | None:
    """Multiplicative order, or None when the element has infinite order."""
    m = mat(m)
    k = len(m)
    d = mat_det(m)
    if d not in (1, -1):
        raise NotUnimodular(d)
    if bound is None:
        bound = minkowski_bound(k)
    ident = identity(k)
    x = m
    for o in range(1, bound + 1):
        if x == ident:
            return o
        x = mat_mul(x, m)
    return None


# -- orbits on the character lattice ---------------------------------------------


@dataclass(frozen=True)
class OrbitResult:
    finite: bool
    size: int | None = None
    elements: frozenset[tuple[int, ...]] | None = None
    cap: int | None = None


def char_orbit(vector, gens, cap: int = config.DEFAULT_ORBIT_CAP) -> OrbitResult:
    """Orbit of a character-lattice vector under the generated group."""
    gens, k = _checked_gens(gens)
    v = tuple(int(x) for x in vector)
    if len(v) != k:
        raise DimensionMismatch("vector rank does not match the generators")
    step = []
    for g in gens:
        step.append(g)
        step.append(mat_inv_unimodular(g))
    seen = {v}
    frontier = [v]
    while frontier:
        nxt = []
        for x in frontier:
            for g in step:
                y = mat_vec(g, x)
                if y not in seen:
                    seen.add(y)
                    if len(seen) > cap:
                        return OrbitResult(finite=False, cap=cap)
                    nxt.append(y)
        frontier = nxt
    return OrbitResult(finite=True, size=len(seen), elements=frozenset(seen))


# -- fixed subgroups on the torus -------------------------------------------------


@dataclass(frozen=True)
class FixedStructure:
    """Fixed points of a torus automorphism: T^circle_rank x torsion."""

    circle_rank: int
    torsion: FiniteAbelian

    @property
    def is_finite(self) -> bool:
        return self.circle_rank == 0

    @property
    def finite_order(self) -> int | None:
        return self.torsion.order if self.is_finite else None

    def __str__(self) -> str:
        parts = []
        if self.circle_rank:
            parts.append(f"T^{self.circle_rank}")
        if not self.torsion.is_trivial:
            parts.append(str(self.torsion))
        return " x ".join(parts) if parts else "1"


def fixed_subgroup_structure(m: IntMatrix) -> FixedStructure:
    """Structure of ker(m - I) acting on (Q/Z)^k, read off the SNF of m - I."""
    m = mat(m)
    k = len(m)
    if any(len(r) != k for r in m):
        raise DimensionMismatch("automorphism matrix must be square")
    diff = tuple(tuple(m[i][j] - (1 if i == j else 0) for j in range(k)) for i in range(k))
    diag = snf_diagonal(diff)
    zeros = sum(1 for d in diag if d == 0) + (k - len(diag))
    torsion = abelian_from_orders(d for d in diag if d > 1)
    return FixedStructure(circle_rank=zeros, torsion=torsion)


# -- abelian embedding decision ----------------------------------------------------


def _conjugate(partition: tuple[int, ...]) -> tuple[int, ...]:
    if not partition:
        return ()
    m = partition[0]
    return tuple(sum(1 for x in partition if x >= t) for t in range(1, m + 1))


def _p_part_embeds(d_parts: tuple[int, ...], rank: int, a_parts: tuple[int, ...]) -> bool:
    """Decide (+)Z/p^d_i  into  (Z/p^inf)^rank x (+)Z/p^a_j.

    The torus absorbs any p-group of rank <= rank, and removing the largest
    parts is optimal, so drop those and compare conjugate partitions.
    """
    rest = tuple(sorted(d_parts, reverse=True)[rank:])
    cr = _conjugate(rest)
    ca = _conjugate(a_parts)
    if len(cr) > len(ca):
        return False
    return all(x <= y for x, y in zip(cr, ca))


def abelian_embeds(d: FiniteAbelian, circle_rank: int, torsion: FiniteAbelian) -> bool:
    """Decide whether d embeds into T^circle_rank x torsion."""
    primes = set(d.primes()) | set(torsion.primes())
    for p in sorted(primes):
        if not _p_part_embeds(d.p_partition(p), circle_rank, torsion.p_partition(p)):
            return False
    return True


def embeds_into_fixed(d: FiniteAbelian, fixed: FixedStructure) -> bool:
    return abelian_embeds(d, fixed.circle_rank, fixed.torsion)


# -- soundness of torus families ----------------------------------------------------


@dataclass(frozen=True)
class TorusSoundness:
    sound: bool
    rank: int
    factor_orders: tuple[int, ...]
    joint: MatrixGroupResult


def torus_soundness(k: int, factor_gens) -> TorusSoundness:
    """A family of finite actions on T^k is sound iff the joint action is finite."""
    factor_orders = []
    all_gens = []
    for i, gens in enumerate(factor_gens):
        gens = [mat(g) for g in gens]
        for g in gens:
            if len(g) != k or len(g[0]) != k:
                raise DimensionMismatch(f"factor {i} generators are not {k}x{k}")
        res = generated_group(gens)
        if not res.finite:
            raise FactorNotFinite(i)
        factor_orders.append(res.order)
        all_gens.extend(gens)
    joint = generated_group(all_gens) if all_gens else MatrixGroupResult(
        finite=True, rank=k, order=1, elements=frozenset([identity(k)]))
    return TorusSoundness(sound=joint.finite, rank=k,
                          factor_orders=tuple(factor_orders), joint=joint)


# -- orbit growth diagnostics --------------------------------------------------------


@dataclass(frozen=True)
class OrbitMember:
    rank: int
    orbit: OrbitResult


@dataclass(frozen=True)
class OrbitObstruction:
    members: tuple[OrbitMember, ...]
    sizes: tuple[int | None, ...]  # None marks ExceedsCap
    growing: bool = field(default=False)


def coproduct_orbit_obstruction(members, cap: int = config.DEFAULT_ORBIT_CAP) -> OrbitObstruction:
    """Per-member character orbits with a strictly-increasing-growth flag.

    members: iterable of (rank, generator list, character vector).
    """
    out = []
    sizes: list[int | None] = []
    for rank, gens, chi in members:
        chi = tuple(int(x) for x in chi)
        if not any(chi):
            raise DimensionMismatch("character vector must be nonzero")
        orb = char_orbit(chi, gens, cap=cap)
        out.append(OrbitMember(rank=rank, orbit=orb))
        sizes.append(orb.size if orb.finite else None)
    growing = (len(sizes) >= 2
               and all(s is not None for s in sizes)
               and all(a < b for a, b in zip(sizes, sizes[1:])))
    return OrbitObstruction(members=tuple(out), sizes=tuple(sizes), growing=growing)
