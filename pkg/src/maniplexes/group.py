"""Finite voltage groups: GF(2) vector groups and generic multiplication tables.

Boolean group elements are ints used as bit masks (bit i is the basis vector
e_{i+1}; the serialized string "0100" in dimension 4 is e_2, leftmost character
first). Table groups carry a dense multiplication table with identity id 0;
mul[a, b] is "a then b" when elements come from permutations.
"""

from __future__ import annotations

from itertools import combinations
from typing import Iterable, Optional, Sequence

import numpy as np


class BooleanGroup:
    """GF(2)^dim under XOR; every non-identity element is an involution."""

    __slots__ = ("dim",)
    identity = 0

    def __init__(self, dim: int):
        if dim < 0:
            raise ValueError("dimension must be nonnegative")
        self.dim = int(dim)

    @property
    def order(self) -> int:
        return 1 << self.dim

    def elements(self) -> range:
        return range(self.order)

    def op(self, a: int, b: int) -> int:
        return a ^ b

    def inv(self, a: int) -> int:
        return a

    def parse(self, s: str) -> int:
        if len(s) != self.dim or set(s) - {"0", "1"}:
            raise ValueError(f"bad bit string {s!r} for dimension {self.dim}")
        return sum(1 << i for i, ch in enumerate(s) if ch == "1")

    def format(self, g: int) -> str:
        return "".join("1" if g >> i & 1 else "0" for i in range(self.dim))

    def __eq__(self, other) -> bool:
        return isinstance(other, BooleanGroup) and other.dim == self.dim

    def __hash__(self) -> int:
        return hash(("boolean", self.dim))

    def __repr__(self) -> str:  # pragma: no cover
        return f"BooleanGroup(dim={self.dim})"


class TableGroup:
    """Finite group as a multiplication table over dense ids, identity 0."""

    __slots__ = ("mul", "inv_", "labels")
    identity = 0

    def __init__(self, mul: Sequence[Sequence[int]],
                 labels: Optional[tuple] = None):
        self.mul = np.ascontiguousarray(mul, dtype=np.int64)
        n = self.mul.shape[0]
        if self.mul.shape != (n, n):
            raise ValueError("multiplication table must be square")
        if n == 0:
            raise ValueError("a group has at least the identity")
        if self.mul.min() < 0 or self.mul.max() >= n:
            raise ValueError("table entry out of range")
        if (not np.array_equal(self.mul[0], np.arange(n))
                or not np.array_equal(self.mul[:, 0], np.arange(n))):
            raise ValueError("id 0 is not an identity")
        inv = np.full(n, -1, dtype=np.int64)
        rows, cols = np.nonzero(self.mul == 0)
        inv[rows] = cols
        if (inv < 0).any() or not np.array_equal(self.mul[inv, np.arange(n)],
                                                 np.zeros(n, dtype=np.int64)):
            raise ValueError("some element has no two-sided inverse")
        self.inv_ = inv
        self._spot_check_associativity()
        self.mul.setflags(write=False)
        self.inv_.setflags(write=False)
        self.labels = labels

    def _spot_check_associativity(self):
        n = self.mul.shape[0]
        if n <= 64:
            left = self.mul[self.mul]        # left[a,b,c] = (a*b)*c
            right = self.mul[:, self.mul]    # right[a,b,c] = a*(b*c)
            if not np.array_equal(left, right):
                raise ValueError("multiplication table is not associative")
            return
        rng = np.random.default_rng(0)
        trip = rng.integers(0, n, size=(1000, 3))
        a, b, c = trip[:, 0], trip[:, 1], trip[:, 2]
        if not np.array_equal(self.mul[self.mul[a, b], c],
                              self.mul[a, self.mul[b, c]]):
            raise ValueError("multiplication table is not associative")

    @classmethod
    def from_permutations(cls, gens: Iterable[Sequence[int]]) -> "TableGroup":
        """Close permutation generators under composition; ids in BFS order."""
        gens = [tuple(int(x) for x in p) for p in gens]
        deg = len(gens[0]) if gens else 1
        for p in gens:
            if sorted(p) != list(range(deg)):
                raise ValueError(f"{p} is not a permutation of 0..{deg - 1}")
        ident = tuple(range(deg))
        ids = {ident: 0}
        order: list[tuple[int, ...]] = [ident]
        queue = [ident]
        while queue:
            p = queue.pop(0)
            for q in gens:
                r = tuple(q[x] for x in p)  # p then q
                if r not in ids:
                    ids[r] = len(order)
                    order.append(r)
                    queue.append(r)
        n = len(order)
        mul = np.empty((n, n), dtype=np.int64)
        for i, p in enumerate(order):
            for j, q in enumerate(order):
                mul[i, j] = ids[tuple(q[x] for x in p)]
        return cls(mul, labels=tuple(order))

    @property
    def order(self) -> int:
        return self.mul.shape[0]

    def elements(self) -> range:
        return range(self.order)

    def op(self, a: int, b: int) -> int:
        return int(self.mul[a, b])

    def inv(self, a: int) -> int:
        return int(self.inv_[a])

    def element_order(self, a: int) -> int:
        k, g = 1, a
        while g != 0:
            g = self.op(g, a)
            k += 1
        return k

    def __eq__(self, other) -> bool:
        return isinstance(other, TableGroup) and np.array_equal(other.mul, self.mul)

    def __hash__(self) -> int:
        return hash(self.mul.tobytes())

    def __repr__(self) -> str:  # pragma: no cover
        return f"TableGroup(order={self.order})"


def element_order(group, a) -> int:
    if isinstance(group, BooleanGroup):
        return 1 if a == group.identity else 2
    return group.element_order(a)


def _boolean_basis(vectors: Iterable[int]) -> tuple[int, ...]:
    """Canonical reduced basis: descending leading bits, fully back-substituted."""
    basis: list[int] = []
    for v in vectors:
        for b in basis:
            v = min(v, v ^ b)
        if v:
            basis.append(v)
            basis.sort(reverse=True)
    # back-substitute so each leading bit appears in exactly one row
    for i in range(len(basis)):
        for j in range(len(basis)):
            if i != j and basis[j] ^ basis[i] < basis[j]:
                basis[j] ^= basis[i]
    return tuple(sorted(basis, reverse=True))


def _boolean_reduce(basis: Sequence[int], v: int) -> int:
    for b in basis:
        v = min(v, v ^ b)
    return v


class SubgroupHandle:
    """A subgroup with its closure realized (GF(2) basis or element set)."""

    __slots__ = ("group", "gens", "basis", "members")

    def __init__(self, group, gens: Iterable):
        self.group = group
        self.gens = tuple(gens)
        if isinstance(group, BooleanGroup):
            self.basis = _boolean_basis(self.gens)
            self.members = None
        else:
            closed = {group.identity}
            frontier = [group.identity]
            while frontier:
                nxt = []
                for a in frontier:
                    for g in self.gens:
                        b = group.op(a, g)
                        if b not in closed:
                            closed.add(b)
                            nxt.append(b)
                frontier = nxt
            self.basis = None
            self.members = frozenset(closed)

    @property
    def size(self) -> int:
        if self.basis is not None:
            return 1 << len(self.basis)
        return len(self.members)

    def contains(self, g) -> bool:
        if self.basis is not None:
            return _boolean_reduce(self.basis, g) == 0
        return g in self.members

    def elements(self) -> list:
        if self.basis is not None:
            span = [0]
            for b in self.basis:
                span += [v ^ b for v in span]
            return sorted(span)
        return sorted(self.members)

    def key(self):
        if self.basis is not None:
            return ("boolean", self.group.dim, self.basis)
        return ("table", tuple(sorted(self.members)))

    def __eq__(self, other) -> bool:
        return isinstance(other, SubgroupHandle) and other.key() == self.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:  # pragma: no cover
        return f"SubgroupHandle(size={self.size})"


class CosetHandle:
    """rep·H (left) or H·rep (right) with a canonical representative."""

    __slots__ = ("subgroup", "rep", "side")

    def __init__(self, subgroup: SubgroupHandle, rep, side: str = "right"):
        if side not in ("left", "right"):
            raise ValueError("side must be 'left' or 'right'")
        self.subgroup = subgroup
        self.side = side
        group = subgroup.group
        if subgroup.basis is not None:
            self.rep = _boolean_reduce(subgroup.basis, rep)
        elif side == "right":
            self.rep = min(group.op(h, rep) for h in subgroup.members)
        else:
            self.rep = min(group.op(rep, h) for h in subgroup.members)

    def contains(self, g) -> bool:
        group = self.subgroup.group
        if self.side == "right":
            return self.subgroup.contains(group.op(g, group.inv(self.rep)))
        return self.subgroup.contains(group.op(group.inv(self.rep), g))

    def elements(self) -> list:
        group = self.subgroup.group
        if self.side == "right":
            return sorted(group.op(h, self.rep) for h in self.subgroup.elements())
        return sorted(group.op(self.rep, h) for h in self.subgroup.elements())

    def key(self):
        return (self.subgroup.key(), self.rep, self.side)

    def __eq__(self, other) -> bool:
        return isinstance(other, CosetHandle) and other.key() == self.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:  # pragma: no cover
        return f"CosetHandle(size={self.subgroup.size}, rep={self.rep}, {self.side})"


def closure(group, gens: Iterable) -> SubgroupHandle:
    return SubgroupHandle(group, gens)


def subgroup_equal(a: SubgroupHandle, b: SubgroupHandle) -> bool:
    if a.group != b.group:
        raise ValueError("subgroups live in different groups")
    return (all(b.contains(g) for g in a.gens)
            and all(a.contains(g) for g in b.gens))


def _boolean_intersection_basis(h: Sequence[int], k: Sequence[int],
                                dim: int) -> tuple[int, ...]:
    """Zassenhaus: reduce rows (v | v) for v in H and (w | 0) for w in K."""
    rows = [(v << dim) | v for v in h] + [w << dim for w in k]
    reduced: list[int] = []
    for r in rows:
        for b in reduced:
            r = min(r, r ^ b)
        if r:
            reduced.append(r)
            reduced.sort(reverse=True)
    mask = (1 << dim) - 1
    return _boolean_basis(r & mask for r in reduced if r >> dim == 0)


def intersect_subgroups(a: SubgroupHandle, b: SubgroupHandle) -> SubgroupHandle:
    if a.group != b.group:
        raise ValueError("subgroups live in different groups")
    if a.basis is not None:
        dim = a.group.dim
        return SubgroupHandle(a.group,
                              _boolean_intersection_basis(a.basis, b.basis, dim))
    return SubgroupHandle(a.group, sorted(a.members & b.members))


def coset_intersect(a: CosetHandle, b: CosetHandle) -> Optional[CosetHandle]:
    """Intersection of two cosets: None or a coset of H∩K, same side."""
    if a.subgroup.group != b.subgroup.group:
        raise ValueError("cosets live in different groups")
    if a.side != b.side:
        raise ValueError("cannot intersect cosets of different sides")
    group = a.subgroup.group
    meet = intersect_subgroups(a.subgroup, b.subgroup)
    if a.subgroup.basis is not None:
        # affine over GF(2): a+H meets b+K iff a^b lies in H+K
        target = group.op(a.rep, b.rep)
        joint = list(a.subgroup.basis) + list(b.subgroup.basis)
        tagged = [(v, v if i < len(a.subgroup.basis) else 0)
                  for i, v in enumerate(joint)]
        reduced: list[tuple[int, int]] = []
        for v, tag in tagged:
            for bv, bt in reduced:
                if v ^ bv < v:
                    v ^= bv
                    tag ^= bt
            if v:
                reduced.append((v, tag))
                reduced.sort(reverse=True)
        h_part = 0
        for bv, bt in reduced:
            if target ^ bv < target:
                target ^= bv
                h_part ^= bt
        if target:
            return None
        return CosetHandle(meet, a.rep ^ h_part, a.side)
    small, large = (a, b) if a.subgroup.size <= b.subgroup.size else (b, a)
    common = [g for g in small.elements() if large.contains(g)]
    if not common:
        return None
    return CosetHandle(meet, common[0], a.side)


def check_string_c_group(gens: Sequence, group) -> tuple[bool, Optional[tuple]]:
    """Involutions, far commutation, generation, and the intersection property."""
    full = closure(group, gens)
    if full.size != group.order:
        raise ValueError(f"generators span only {full.size} of {group.order}"
                         " elements")
    n = len(gens)
    for i, g in enumerate(gens):
        if element_order(group, g) != 2:
            return False, ("involution", i)
    for i, j in combinations(range(n), 2):
        if j - i < 2:
            continue
        gij = group.op(gens[i], gens[j])
        if group.op(gij, gij) != group.identity:
            return False, ("commutation", i, j)
    subs = {}
    for r in range(n + 1):
        for I in combinations(range(n), r):
            subs[frozenset(I)] = closure(group, [gens[i] for i in I])
    for I in subs:
        for J in subs:
            meet = intersect_subgroups(subs[I], subs[J])
            if not subgroup_equal(meet, subs[I & J]):
                return False, ("intersection", tuple(sorted(I)), tuple(sorted(J)))
    return True, None
