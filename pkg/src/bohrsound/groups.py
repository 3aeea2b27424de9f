"""Finite groups as validated multiplication tables.

Elements are integers 0..n-1 with the identity pinned at index 0.  The table
is the single source of truth; everything else (inverses, classes, centers,
subgroups) is derived from it.  Exhaustive axiom validation runs up to order
512; larger tables are checked on seeded random triples.
"""

from __future__ import annotations

import hashlib
import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import gcd

import numpy as np

from . import config
from .errors import (
    NoIdentity,
    NoInverse,
    NonAssociative,
    NotAnAction,
    NotASubgroup,
    NotInjective,
    NotNormal,
    SizeLimit,
    SourceMismatch,
)


def _as_table(table) -> np.ndarray:
    arr = np.asarray(table, dtype=np.int32)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise NotASubgroup("multiplication table must be square")
    return arr


def _find_identity(mul: np.ndarray) -> int:
    n = mul.shape[0]
    idx = np.arange(n, dtype=np.int32)
    for e in range(n):
        if np.array_equal(mul[e], idx) and np.array_equal(mul[:, e], idx):
            return e
    raise NoIdentity("no two-sided identity element")


def _check_associativity(mul: np.ndarray) -> None:
    n = mul.shape[0]
    if n <= config.VALIDATE_EXHAUSTIVE_MAX:
        for a in range(n):
            left = mul[mul[a], :]        # (b,c) -> (a*b)*c
            right = mul[a][mul]          # (b,c) -> a*(b*c)
            if not np.array_equal(left, right):
                b, c = np.argwhere(left != right)[0]
                raise NonAssociative((a, int(b), int(c)))
        return
    rng = np.random.RandomState(config.VALIDATE_SAMPLE_SEED ^ n)
    total = config.VALIDATE_SAMPLE_FACTOR * n * n
    chunk = 1 << 20
    done = 0
    while done < total:
        m = min(chunk, total - done)
        a = rng.randint(0, n, size=m)
        b = rng.randint(0, n, size=m)
        c = rng.randint(0, n, size=m)
        left = mul[mul[a, b], c]
        right = mul[a, mul[b, c]]
        bad = np.nonzero(left != right)[0]
        if bad.size:
            i = int(bad[0])
            raise NonAssociative((int(a[i]), int(b[i]), int(c[i])))
        done += m


class FiniteGroup:
    """A finite group given by its full multiplication table.

    Index 0 is the identity.  Instances are immutable; derived data is cached.
    """

    def __init__(self, table, labels=None, name: str | None = None,
                 _validated: bool = False):
        mul = _as_table(table)
        n = mul.shape[0]
        if n == 0:
            raise NoIdentity("empty table")
        if mul.min() < 0 or mul.max() >= n:
            raise NotASubgroup("table entries out of range")
        if not _validated:
            e = _find_identity(mul)
            if e != 0:
                raise NoIdentity("identity must sit at index 0 (use group_from_table)")
            _check_associativity(mul)
        self.order = n
        mul.setflags(write=False)
        self.mul = mul
        inv = np.argmax(mul == 0, axis=1).astype(np.int32)
        if not _validated:
            ok = (mul[np.arange(n), inv] == 0) & (mul[inv, np.arange(n)] == 0)
            if not ok.all():
                raise NoInverse(int(np.nonzero(~ok)[0][0]))
        inv.setflags(write=False)
        self.inv = inv
        self.labels = tuple(labels) if labels is not None else tuple(str(i) for i in range(n))
        if len(self.labels) != n:
            raise NotASubgroup("label count must match order")
        self.name = name or f"group{n}"

    # -- basic arithmetic ---------------------------------------------------

    def op(self, a: int, b: int) -> int:
        return int(self.mul[a, b])

    def inverse(self, a: int) -> int:
        return int(self.inv[a])

    def conjugate(self, g: int, x: int) -> int:
        """g x g^-1."""
        return int(self.mul[self.mul[g, x], self.inv[g]])

    def power(self, a: int, k: int) -> int:
        if k < 0:
            return self.power(self.inverse(a), -k)
        r, b = 0, a
        while k:
            if k & 1:
                r = self.op(r, b)
            b = self.op(b, b)
            k >>= 1
        return r

    def element_order(self, a: int) -> int:
        o, x = 1, a
        while x != 0:
            x = self.op(x, a)
            o += 1
        return o

    @cached_property
    def element_orders(self) -> tuple[int, ...]:
        return tuple(self.element_order(a) for a in range(self.order))

    @cached_property
    def exponent(self) -> int:
        e = 1
        for o in set(self.element_orders):
            e = e * o // gcd(e, o)
        return e

    @cached_property
    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.mul, self.mul.T))

    # -- conjugacy ----------------------------------------------------------

    @cached_property
    def conjugacy_classes(self) -> tuple[tuple[int, ...], ...]:
        """Classes ordered by minimal member; the identity class comes first."""
        n = self.order
        seen = np.zeros(n, dtype=bool)
        rng = np.arange(n)
        classes = []
        for x in range(n):
            if seen[x]:
                continue
            orbit = np.unique(self.mul[self.mul[rng, x], self.inv[rng]])
            seen[orbit] = True
            classes.append(tuple(int(v) for v in orbit))
        return tuple(classes)

    @cached_property
    def class_of(self) -> np.ndarray:
        out = np.empty(self.order, dtype=np.int32)
        for i, cls in enumerate(self.conjugacy_classes):
            out[list(cls)] = i
        out.setflags(write=False)
        return out

    @cached_property
    def class_reps(self) -> tuple[int, ...]:
        return tuple(cls[0] for cls in self.conjugacy_classes)

    @cached_property
    def inverse_class(self) -> tuple[int, ...]:
        """Index of the class containing the inverses of class k."""
        return tuple(int(self.class_of[self.inverse(r)]) for r in self.class_reps)

    # -- distinguished subgroups ---------------------------------------------

    def center(self) -> "Subgroup":
        mask = (self.mul == self.mul.T).all(axis=1)
        return Subgroup(self, tuple(int(v) for v in np.nonzero(mask)[0]))

    def derived_subgroup(self) -> "Subgroup":
        n = self.order
        rng = np.arange(n)
        comms = set()
        for a in range(n):
            # [a, b] = a b a^-1 b^-1 for all b at once
            ab = self.mul[a, rng]
            left = self.mul[ab, self.inv[a]]
            comms.update(int(v) for v in self.mul[left, self.inv[rng]])
        return Subgroup(self, closure(self, sorted(comms)))

    def subgroup(self, elements) -> "Subgroup":
        return Subgroup(self, tuple(sorted(set(int(x) for x in elements))))

    # -- identity and hashing -------------------------------------------------

    @cached_property
    def table_digest(self) -> str:
        h = hashlib.sha256()
        h.update(str(self.order).encode())
        h.update(np.ascontiguousarray(self.mul, dtype=np.int32).tobytes())
        return h.hexdigest()

    @cached_property
    def iso_signature(self) -> tuple:
        """Cheap isomorphism invariant: order, class sizes, element-order profile."""
        sizes = tuple(sorted(len(c) for c in self.conjugacy_classes))
        orders = tuple(sorted(self.element_orders))
        return (self.order, sizes, orders, self.is_abelian)

    def label_index(self, token: str) -> int:
        """Element lookup by label, falling back to integer indices."""
        try:
            return self.labels.index(token)
        except ValueError:
            pass
        try:
            i = int(token)
        except ValueError:
            raise NotASubgroup(f"unknown element {token!r} of {self.name}") from None
        if not 0 <= i < self.order:
            raise NotASubgroup(f"element index {i} out of range for {self.name}")
        return i

    def __repr__(self) -> str:
        return f"<FiniteGroup {self.name} order={self.order}>"


def validate_group(g: FiniteGroup) -> None:
    """Re-run the full axiom check on an existing instance."""
    if _find_identity(g.mul) != 0:
        raise NoIdentity("identity not at index 0")
    _check_associativity(g.mul)


# -- homomorphisms ------------------------------------------------------------


class GroupHom:
    """A homomorphism given by its full value list, validated on construction."""

    def __init__(self, source: FiniteGroup, target: FiniteGroup, mapping,
                 _validated: bool = False):
        m = np.asarray(mapping, dtype=np.int32)
        if m.shape != (source.order,):
            raise SourceMismatch("mapping length must equal source order")
        if m.min() < 0 or m.max() >= target.order:
            raise SourceMismatch("mapping values out of range")
        if not _validated:
            if m[0] != 0:
                raise SourceMismatch("homomorphism must preserve the identity")
            lhs = m[source.mul]
            rhs = target.mul[np.ix_(m, m)]
            if not np.array_equal(lhs, rhs):
                a, b = np.argwhere(lhs != rhs)[0]
                raise SourceMismatch(f"not multiplicative at ({int(a)}, {int(b)})")
        m.setflags(write=False)
        self.source = source
        self.target = target
        self.mapping = m

    def __call__(self, a: int) -> int:
        return int(self.mapping[a])

    @cached_property
    def is_injective(self) -> bool:
        return len(set(self.mapping.tolist())) == self.source.order

    @cached_property
    def image(self) -> tuple[int, ...]:
        return tuple(sorted(set(int(v) for v in self.mapping)))

    def require_injective(self) -> None:
        if not self.is_injective:
            raise NotInjective(f"kernel of {self} is nontrivial")

    @cached_property
    def preimage(self) -> dict[int, int]:
        """Target index -> source index; only meaningful when injective."""
        self.require_injective()
        return {int(v): i for i, v in enumerate(self.mapping)}

    def __repr__(self) -> str:
        return f"<GroupHom {self.source.name} -> {self.target.name}>"


def identity_hom(g: FiniteGroup) -> GroupHom:
    return GroupHom(g, g, np.arange(g.order), _validated=True)


def compose(outer: GroupHom, inner: GroupHom) -> GroupHom:
    if inner.target is not outer.source:
        raise SourceMismatch("homomorphisms do not compose")
    return GroupHom(inner.source, outer.target,
                    outer.mapping[inner.mapping], _validated=True)


# -- subgroups ----------------------------------------------------------------


def closure(g: FiniteGroup, gens) -> tuple[int, ...]:
    """Subgroup generated by gens, as a sorted element tuple."""
    seen = {0}
    frontier = [0]
    gens = [int(x) for x in gens]
    seen.update(gens)
    frontier.extend(x for x in gens if x != 0)
    mul = g.mul
    while frontier:
        x = frontier.pop()
        for s in gens:
            y = int(mul[x, s])
            if y not in seen:
                seen.add(y)
                frontier.append(y)
    return tuple(sorted(seen))


class Subgroup:
    """A subgroup handle: parent group plus a closed element set."""

    def __init__(self, parent: FiniteGroup, elements: tuple[int, ...]):
        self.parent = parent
        self.elements = tuple(sorted(set(int(x) for x in elements)))
        if not self.elements or self.elements[0] != 0:
            raise NotASubgroup("subgroup must contain the identity")
        elems = set(self.elements)
        for a in self.elements:
            if int(parent.inv[a]) not in elems:
                raise NotASubgroup(f"not closed under inverse at {a}")
        sub = parent.mul[np.ix_(self.elements, self.elements)]
        if not np.isin(sub, self.elements).all():
            raise NotASubgroup("not closed under multiplication")
        self._set = elems

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, x: int) -> bool:
        return x in self._set

    def is_normal(self) -> bool:
        g = self.parent
        elems = np.array(self.elements)
        for x in range(g.order):
            conj = g.mul[g.mul[x, elems], g.inv[x]]
            if not np.isin(conj, elems).all():
                return False
        return True

    def require_normal(self) -> None:
        if not self.is_normal():
            raise NotNormal(self.elements)

    def materialize(self) -> tuple[FiniteGroup, GroupHom]:
        """Standalone group on the sorted elements plus the inclusion map."""
        elems = np.array(self.elements)
        table = np.searchsorted(elems, self.parent.mul[np.ix_(elems, elems)])
        labels = [self.parent.labels[e] for e in self.elements]
        grp = FiniteGroup(table, labels=labels,
                          name=f"{self.parent.name}.sub{len(elems)}", _validated=True)
        incl = GroupHom(grp, self.parent, elems, _validated=True)
        return grp, incl

    def __repr__(self) -> str:
        return f"<Subgroup order={self.order} of {self.parent.name}>"


def all_subgroups(g: FiniteGroup) -> list[tuple[int, ...]]:
    """Every subgroup, as sorted element tuples (BFS over generated extensions).

    Each found subgroup keeps the generating chain that produced it; a proper
    extension at least doubles the order, so chains stay short and closures fast.
    """
    trivial = (0,)
    found = {trivial: ()}
    queue = [trivial]
    while queue:
        base = queue.pop()
        base_set = set(base)
        gens = found[base]
        for x in range(1, g.order):
            if x in base_set:
                continue
            new_gens = gens + (x,)
            ext = closure(g, new_gens)
            if ext not in found:
                found[ext] = new_gens
                queue.append(ext)
    return sorted(found, key=lambda t: (len(t), t))


def normal_subgroups(g: FiniteGroup) -> list[tuple[int, ...]]:
    """Every normal subgroup: joins of normal closures of conjugacy classes."""
    closures = set()
    for cls in g.conjugacy_classes:
        closures.add(closure(g, cls))
    found = {(0,)} | closures
    frontier = list(closures)
    while frontier:
        a = frontier.pop()
        for b in closures:
            j = closure(g, set(a) | set(b))
            if j not in found:
                found.add(j)
                frontier.append(j)
    return sorted(found, key=lambda t: (len(t), t))


# -- constructors --------------------------------------------------------------


def group_from_table(table, labels=None, name: str | None = None) -> FiniteGroup:
    """Validate an untrusted table, relocating the identity to index 0 if needed."""
    mul = _as_table(table)
    n = mul.shape[0]
    if mul.min() < 0 or mul.max() >= n:
        raise NotASubgroup("table entries out of range")
    e = _find_identity(mul)
    if e != 0:
        perm = np.arange(n)
        perm[0], perm[e] = e, 0  # swap labels 0 <-> e
        inv_perm = perm  # a transposition is its own inverse
        mul = inv_perm[mul[np.ix_(perm, perm)]]
        if labels is not None:
            labels = list(labels)
            labels[0], labels[e] = labels[e], labels[0]
    return FiniteGroup(mul, labels=labels, name=name)


def trivial_group() -> FiniteGroup:
    return FiniteGroup([[0]], labels=["e"], name="1", _validated=True)


def cyclic(n: int, labels=None, name: str | None = None) -> FiniteGroup:
    if n < 1:
        raise SizeLimit("cyclic group order must be positive")
    idx = np.arange(n)
    table = (idx[:, None] + idx[None, :]) % n
    if labels is None:
        labels = ["e"] + [f"g{i}" if i > 1 else "g" for i in range(1, n)]
    return FiniteGroup(table, labels=labels, name=name or f"Z{n}", _validated=True)


def symmetric(n: int) -> FiniteGroup:
    if not 1 <= n <= 6:
        raise SizeLimit("symmetric(n) supports 1 <= n <= 6")
    perms = list(itertools.permutations(range(n)))
    rank = {p: i for i, p in enumerate(perms)}
    order = len(perms)
    table = np.empty((order, order), dtype=np.int32)
    for i, p in enumerate(perms):
        for j, q in enumerate(perms):
            table[i, j] = rank[tuple(p[q[k]] for k in range(n))]
    labels = ["".join(str(v) for v in p) for p in perms]
    return FiniteGroup(table, labels=labels, name=f"S{n}", _validated=True)


def alternating(n: int) -> FiniteGroup:
    sn = symmetric(n)
    perms = list(itertools.permutations(range(n)))

    def parity(p):
        inversions = sum(1 for i in range(n) for j in range(i + 1, n) if p[i] > p[j])
        return inversions % 2

    evens = [i for i, p in enumerate(perms) if parity(p) == 0]
    grp, _ = Subgroup(sn, tuple(evens)).materialize()
    grp.name = f"A{n}"
    return grp


def direct_product(a: FiniteGroup, b: FiniteGroup) -> FiniteGroup:
    na, nb = a.order, b.order
    ia, ib = np.divmod(np.arange(na * nb), nb)
    table = a.mul[np.ix_(ia, ia)] * nb + b.mul[np.ix_(ib, ib)]
    labels = [f"({a.labels[x]},{b.labels[y]})" for x in range(na) for y in range(nb)]
    return FiniteGroup(table, labels=labels, name=f"{a.name}x{b.name}", _validated=True)


def validate_action(normal: FiniteGroup, acting: FiniteGroup, action) -> np.ndarray:
    """Check that action is a homomorphism acting -> Aut(normal).

    Accepts a list of index permutations (one per acting element) or a callable
    a -> permutation.  Returns the (|A|, |N|) array of automorphisms.
    """
    if callable(action):
        action = [action(a) for a in range(acting.order)]
    act = np.asarray(action, dtype=np.int32)
    if act.shape != (acting.order, normal.order):
        raise NotAnAction(act.shape, "wrong shape")
    idx = np.arange(normal.order)
    if not np.array_equal(act[0], idx):
        raise NotAnAction(0, "identity must act trivially")
    for a in range(acting.order):
        row = act[a]
        if not np.array_equal(np.sort(row), idx):
            raise NotAnAction(a, "not a permutation")
        lhs = row[normal.mul]
        rhs = normal.mul[np.ix_(row, row)]
        if not np.array_equal(lhs, rhs):
            x, y = np.argwhere(lhs != rhs)[0]
            raise NotAnAction((a, int(x), int(y)), "not an automorphism")
    comp = act[:, act]  # comp[a, b, x] = act[a][act[b][x]]
    expected = act[acting.mul]
    if not np.array_equal(comp, expected):
        a, b = np.argwhere((comp != expected).any(axis=2))[0]
        raise NotAnAction((int(a), int(b)), "not multiplicative in the acting group")
    return act


def semidirect(normal: FiniteGroup, acting: FiniteGroup, action,
               name: str | None = None) -> tuple[FiniteGroup, GroupHom, GroupHom]:
    """Semidirect product N x| A; returns the group and both embeddings.

    Element (n, a) has index n*|A| + a, so (0, 0) is the identity.
    """
    act = validate_action(normal, acting, action)
    na, nn = acting.order, normal.order
    total = nn * na
    n1, a1 = np.divmod(np.arange(total), na)
    # (n1, a1) * (n2, a2) = (n1 * act[a1](n2), a1 a2)
    n2, a2 = n1, a1
    left_n = normal.mul[n1[:, None], act[a1[:, None], n2[None, :]]]
    left_a = acting.mul[a1[:, None], a2[None, :]]
    table = left_n * na + left_a
    labels = [f"({normal.labels[n]},{acting.labels[a]})"
              for n in range(nn) for a in range(na)]
    grp = FiniteGroup(table, labels=labels,
                      name=name or f"{normal.name}:{acting.name}", _validated=True)
    emb_n = GroupHom(normal, grp, np.arange(nn) * na, _validated=True)
    emb_a = GroupHom(acting, grp, np.arange(na), _validated=True)
    return grp, emb_n, emb_a


def dihedral(n: int) -> FiniteGroup:
    """Dihedral group of order 2n."""
    zn = cyclic(n)
    z2 = cyclic(2)
    invert = np.stack([np.arange(n), (-np.arange(n)) % n])
    grp, _, _ = semidirect(zn, z2, invert, name=f"D{n}")
    return grp


def klein_four() -> FiniteGroup:
    grp = direct_product(cyclic(2), cyclic(2))
    grp.name = "V4"
    return grp


def heisenberg(level: int) -> FiniteGroup:
    """Upper unitriangular 3x3 matrices over Z/2^level.

    Element (a, b, c) is the matrix with a, b on the superdiagonal and c in the
    corner; the index is (a*q + b)*q + c, so the center {(0,0,c)} occupies
    indices 0..q-1.
    """
    if not 1 <= level <= config.HEISENBERG_MAX_LEVEL:
        raise SizeLimit(f"heisenberg level must be in 1..{config.HEISENBERG_MAX_LEVEL}")
    q = 1 << level
    total = q ** 3
    idx = np.arange(total)
    ab, c1 = np.divmod(idx, q)
    a1, b1 = np.divmod(ab, q)
    a2, b2, c2 = a1, b1, c1
    a = (a1[:, None] + a2[None, :]) % q
    b = (b1[:, None] + b2[None, :]) % q
    c = (c1[:, None] + c2[None, :] + a1[:, None] * b2[None, :]) % q
    table = (a * q + b) * q + c
    labels = [f"({x},{y},{z})" for x in range(q) for y in range(q) for z in range(q)]
    return FiniteGroup(table, labels=labels, name=f"H{q}", _validated=True)


# -- abelian invariants and torus points ---------------------------------------


@dataclass(frozen=True)
class FiniteAbelian:
    """Finite abelian group by invariant factors d_1 | d_2 | ... (each > 1)."""

    invariant_factors: tuple[int, ...]

    def __post_init__(self):
        fs = tuple(int(d) for d in self.invariant_factors)
        object.__setattr__(self, "invariant_factors", fs)
        for d in fs:
            if d < 2:
                raise NotASubgroup("invariant factors must be > 1")
        for a, b in zip(fs, fs[1:]):
            if b % a:
                raise NotASubgroup("invariant factors must form a divisibility chain")

    @property
    def order(self) -> int:
        out = 1
        for d in self.invariant_factors:
            out *= d
        return out

    @property
    def is_trivial(self) -> bool:
        return not self.invariant_factors

    def p_partition(self, p: int) -> tuple[int, ...]:
        """Exponent partition of the p-primary part, largest first."""
        parts = []
        for d in self.invariant_factors:
            e = 0
            while d % p == 0:
                d //= p
                e += 1
            if e:
                parts.append(e)
        return tuple(sorted(parts, reverse=True))

    def primes(self) -> tuple[int, ...]:
        out = set()
        for d in self.invariant_factors:
            x, f = d, 2
            while f * f <= x:
                if x % f == 0:
                    out.add(f)
                    while x % f == 0:
                        x //= f
                f += 1
            if x > 1:
                out.add(x)
        return tuple(sorted(out))

    def __str__(self) -> str:
        if not self.invariant_factors:
            return "1"
        return " x ".join(f"Z/{d}" for d in self.invariant_factors)


def abelian_from_orders(orders) -> FiniteAbelian:
    """Invariant factors of a direct sum of cyclic groups of the given orders."""
    orders = [int(d) for d in orders if int(d) > 1]
    primary: dict[int, list[int]] = {}
    for d in orders:
        x, f = d, 2
        while f * f <= x:
            e = 0
            while x % f == 0:
                x //= f
                e += 1
            if e:
                primary.setdefault(f, []).append(e)
            f += 1
        if x > 1:
            primary.setdefault(x, []).append(1)
    if not primary:
        return FiniteAbelian(())
    depth = max(len(v) for v in primary.values())
    factors = []
    for i in range(depth):
        d = 1
        for p, exps in primary.items():
            exps = sorted(exps, reverse=True)
            if i < len(exps):
                d *= p ** exps[i]
        factors.append(d)
    return FiniteAbelian(tuple(sorted(factors)))


class TorusPoint:
    """A point of (R/Z)^k with exact rational coordinates in [0, 1)."""

    __slots__ = ("coords",)

    def __init__(self, coords):
        self.coords = tuple(Fraction(c) % 1 for c in coords)

    @classmethod
    def zero(cls, k: int) -> "TorusPoint":
        return cls((0,) * k)

    @property
    def dim(self) -> int:
        return len(self.coords)

    def __add__(self, other: "TorusPoint") -> "TorusPoint":
        if self.dim != other.dim:
            raise SourceMismatch("torus points of different rank")
        return TorusPoint(a + b for a, b in zip(self.coords, other.coords))

    def __neg__(self) -> "TorusPoint":
        return TorusPoint(-a for a in self.coords)

    def __sub__(self, other: "TorusPoint") -> "TorusPoint":
        return self + (-other)

    def scale(self, k: int) -> "TorusPoint":
        return TorusPoint(a * k for a in self.coords)

    @property
    def order(self) -> int:
        o = 1
        for a in self.coords:
            o = o * a.denominator // gcd(o, a.denominator)
        return o

    def __eq__(self, other) -> bool:
        return isinstance(other, TorusPoint) and self.coords == other.coords

    def __hash__(self) -> int:
        return hash(self.coords)

    def __repr__(self) -> str:
        return "(" + ", ".join(str(c) for c in self.coords) + ")"
