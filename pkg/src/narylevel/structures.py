"""Structure-constant tensors, the basis-change action, partitions, index maps
and subspaces.

Indices are 0-based throughout the library; the text formats and the CLI
translate to the 1-based convention used for printed structures.
"""

from __future__ import annotations

import enum
from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from itertools import product

from .errors import (
    BadPartition,
    DimensionMismatch,
    IndexOutOfRange,
    InfeasibleCounts,
    SingularMatrix,
)
from .scalars import RatMatrix, as_rational, format_rational, rref

Vector = tuple


def unit_vector(i: int, m: int) -> tuple:
    return tuple(Fraction(int(r == i)) for r in range(m))


def zero_vector(m: int) -> tuple:
    return tuple(Fraction(0) for _ in range(m))


# --------------------------------------------------------------------------
# algebra structures
# --------------------------------------------------------------------------


class AlgebraStructure:
    """Sparse structure constants of an ``m``-dimensional ``n``-ary algebra.

    ``constants`` maps an index tuple ``(i1, ..., in)`` to the coefficient
    vector of ``[e_i1, ..., e_in]``; the vector may be given densely or as a
    ``{j: c}`` mapping.  All-zero vectors are dropped.
    """

    __slots__ = ("n", "m", "_constants", "_hash")

    def __init__(self, n: int, m: int, constants=None):
        if n < 2:
            raise ValueError("arity must be at least 2")
        if m < 1:
            raise ValueError("dimension must be at least 1")
        self.n = n
        self.m = m
        data = {}
        for idx, vec in (constants or {}).items():
            idx = tuple(int(i) for i in idx)
            if len(idx) != n:
                raise DimensionMismatch(f"index tuple {idx} does not have length {n}")
            if any(i < 0 or i >= m for i in idx):
                raise IndexOutOfRange(f"index tuple {idx} outside 0..{m - 1}")
            if isinstance(vec, Mapping):
                dense = [Fraction(0)] * m
                for j, c in vec.items():
                    if not 0 <= j < m:
                        raise IndexOutOfRange(f"output index {j} outside 0..{m - 1}")
                    dense[j] += as_rational(c)
            else:
                dense = [as_rational(c) for c in vec]
                if len(dense) != m:
                    raise DimensionMismatch(f"coefficient vector of length {len(dense)} for m={m}")
            if any(dense):
                data[idx] = tuple(dense)
        self._constants = data
        self._hash = None

    @classmethod
    def zero(cls, n: int, m: int) -> "AlgebraStructure":
        return cls(n, m)

    @property
    def constants(self) -> dict:
        return dict(self._constants)

    def items(self):
        """Support in lexicographic index order."""
        return sorted(self._constants.items())

    def support(self) -> list[tuple]:
        return sorted(self._constants)

    def vector(self, idx) -> tuple:
        return self._constants.get(tuple(idx), zero_vector(self.m))

    def coefficient(self, idx, j: int) -> Fraction:
        vec = self._constants.get(tuple(idx))
        return vec[j] if vec else Fraction(0)

    def is_zero(self) -> bool:
        return not self._constants

    def scaled(self, c) -> "AlgebraStructure":
        c = as_rational(c)
        return AlgebraStructure(self.n, self.m, {k: [x * c for x in v] for k, v in self._constants.items()})

    def __add__(self, other):
        if not isinstance(other, AlgebraStructure):
            return NotImplemented
        if (self.n, self.m) != (other.n, other.m):
            raise DimensionMismatch("cannot add structures of different shape")
        data = dict(self._constants)
        for k, v in other._constants.items():
            data[k] = tuple(a + b for a, b in zip(data.get(k, zero_vector(self.m)), v))
        return AlgebraStructure(self.n, self.m, data)

    def __sub__(self, other):
        return self + other.scaled(-1)

    def __eq__(self, other):
        if not isinstance(other, AlgebraStructure):
            return NotImplemented
        return (self.n, self.m) == (other.n, other.m) and self._constants == other._constants

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.n, self.m, frozenset(self._constants.items())))
        return self._hash

    def __repr__(self):
        parts = []
        for idx, vec in self.items():
            for j, c in enumerate(vec):
                if c:
                    lhs = ",".join(str(i + 1) for i in idx)
                    parts.append(f"[{lhs}]->{j + 1}:{format_rational(c)}")
        return f"AlgebraStructure(n={self.n}, m={self.m}, {{{'; '.join(parts)}}})"


def _check_vectors(m: int, xs) -> None:
    for x in xs:
        if len(x) != m:
            raise DimensionMismatch(f"vector of length {len(x)} in dimension {m}")


def multiply(mu: AlgebraStructure, *xs) -> tuple:
    """Evaluate ``mu(x1, ..., xn)`` by multilinear extension.

    Vector entries may be rationals or any ring elements (polynomials,
    Laurent polynomials) supporting ``+`` and ``*``.
    """
    if len(xs) != mu.n:
        raise DimensionMismatch(f"{mu.n}-ary product applied to {len(xs)} arguments")
    _check_vectors(mu.m, xs)
    out = [0] * mu.m
    for idx, vec in mu._constants.items():
        w = xs[0][idx[0]]
        if not w:
            continue
        for s in range(1, mu.n):
            x = xs[s][idx[s]]
            if not x:
                w = 0
                break
            w = w * x
        if not w:
            continue
        for j, c in enumerate(vec):
            if c:
                out[j] = out[j] + w * c
    return tuple(out)


def transform_constants(mu: AlgebraStructure, columns, inverse_rows) -> dict:
    """Structure constants of ``mu`` in the basis whose ``i``-th vector is
    ``columns[i]`` (standard coordinates), given the inverse change of
    coordinates as rows.  Works over any commutative ring.

    Returns ``{index tuple: coefficient list}`` without zero vectors.
    """
    m, n = mu.m, mu.n
    # expand each slot from old indices r to new indices i with weight B[r][i]
    spread = [[(i, columns[i][r]) for i in range(m) if columns[i][r]] for r in range(m)]
    current = {idx: list(vec) for idx, vec in mu._constants.items()}
    for s in range(n):
        nxt: dict = {}
        for idx, vec in current.items():
            for i, w in spread[idx[s]]:
                key = idx[:s] + (i,) + idx[s + 1:]
                acc = nxt.get(key)
                scaled = [w * c if c else 0 for c in vec]
                if acc is None:
                    nxt[key] = scaled
                else:
                    nxt[key] = [a + b for a, b in zip(acc, scaled)]
        current = {k: v for k, v in nxt.items() if any(v)}
    out = {}
    for idx, vec in current.items():
        new = []
        for row in inverse_rows:
            total = 0
            for a, c in zip(row, vec):
                if a and c:
                    total = total + a * c
            new.append(total)
        if any(new):
            out[idx] = new
    return out


def change_basis(mu: AlgebraStructure, basis: RatMatrix) -> AlgebraStructure:
    """Constants of ``mu`` in the basis formed by the columns of ``basis``."""
    if basis.shape != (mu.m, mu.m):
        raise DimensionMismatch(f"basis matrix {basis.shape} for m={mu.m}")
    inv = basis.inverse()
    return AlgebraStructure(mu.n, mu.m, transform_constants(mu, basis.columns(), inv.rows))


def gl_action(g: RatMatrix, mu: AlgebraStructure) -> AlgebraStructure:
    """``(g * mu)(x1, ..., xn) = g mu(g^-1 x1, ..., g^-1 xn)``."""
    if g.shape != (mu.m, mu.m):
        raise DimensionMismatch(f"matrix {g.shape} acting on m={mu.m}")
    if not g.is_invertible():
        raise SingularMatrix("group element must be invertible")
    return change_basis(mu, g.inverse())


def direct_sum_zero(mu: AlgebraStructure, s: int) -> AlgebraStructure:
    """``mu`` extended by ``s`` inert basis vectors (the algebra ``A + k^s``)."""
    if s < 0:
        raise ValueError("s must be non-negative")
    m = mu.m + s
    return AlgebraStructure(mu.n, m, {idx: list(v) + [0] * s for idx, v in mu._constants.items()})


def derivation_dimension(mu: AlgebraStructure) -> int:
    """Dimension of the derivation algebra, i.e. of the stabiliser of ``mu``
    in ``gl(V)``; the orbit of ``mu`` has dimension ``m^2`` minus this."""
    n, m = mu.n, mu.m
    const = mu._constants
    rows = set()
    for idx in product(range(m), repeat=n):
        vec = const.get(idx)
        for j in range(m):
            row: dict = {}
            if vec:
                for r, c in enumerate(vec):
                    if c:
                        key = j * m + r
                        row[key] = row.get(key, 0) + c
            for s in range(n):
                for r in range(m):
                    other = const.get(idx[:s] + (r,) + idx[s + 1:])
                    if other and other[j]:
                        key = r * m + idx[s]
                        row[key] = row.get(key, 0) - other[j]
            row = {k: v for k, v in row.items() if v}
            if row:
                rows.add(tuple(sorted(row.items())))
    dense = []
    for row in rows:
        line = [Fraction(0)] * (m * m)
        for k, v in row:
            line[k] = v
        dense.append(line)
    return m * m - len(rref(dense, m * m)[1])


# --------------------------------------------------------------------------
# partitions
# --------------------------------------------------------------------------


class Ordering(enum.Enum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


@total_ordering
@dataclass(frozen=True)
class Partition:
    """Non-increasing sequence of non-negative integers, trailing zeros dropped.

    Comparison is lexicographic with implied trailing zeros, which makes
    partitions of different weights comparable.
    """

    parts: tuple

    def __post_init__(self):
        parts = tuple(int(p) for p in self.parts)
        if any(p < 0 for p in parts):
            raise BadPartition(f"negative entry in {parts}")
        if any(a < b for a, b in zip(parts, parts[1:])):
            raise BadPartition(f"{parts} is not non-increasing")
        while parts and parts[-1] == 0:
            parts = parts[:-1]
        object.__setattr__(self, "parts", parts)

    @classmethod
    def of(cls, *parts: int) -> "Partition":
        return cls(tuple(parts))

    @classmethod
    def parse(cls, text: str) -> "Partition":
        body = text.strip().strip("()")
        if not body:
            return cls(())
        try:
            return cls(tuple(int(x) for x in body.split(",") if x.strip()))
        except ValueError as exc:
            raise BadPartition(f"cannot parse partition {text!r}") from exc

    @property
    def weight(self) -> int:
        return sum(self.parts)

    @property
    def length(self) -> int:
        """Number of nonzero parts."""
        return len(self.parts)

    def __getitem__(self, i: int) -> int:
        return self.parts[i] if 0 <= i < len(self.parts) else 0

    def padded(self, size: int) -> tuple:
        if size < len(self.parts):
            raise BadPartition(f"{self} has more than {size} nonzero parts")
        return self.parts + (0,) * (size - len(self.parts))

    def partial_sum(self, r: int) -> int:
        return sum(self.parts[:r])

    def __lt__(self, other):
        if not isinstance(other, Partition):
            return NotImplemented
        # trailing parts are positive, so a proper prefix is the smaller one
        return self.parts < other.parts

    def __str__(self):
        return "(" + ",".join(str(p) for p in self.parts) + ")"


def compare_partitions(p: Partition, q: Partition) -> Ordering:
    if p.parts == q.parts:
        return Ordering.EQUAL
    return Ordering.GREATER if p > q else Ordering.LESS


def enumerate_partitions(weight: int, max_parts: int | None = None) -> list[Partition]:
    """Partitions of ``weight`` with at most ``max_parts`` parts, largest first."""
    if weight < 0:
        return []
    out = []

    def rec(remaining: int, cap: int, prefix: tuple):
        if remaining == 0:
            out.append(Partition(prefix))
            return
        if max_parts is not None and len(prefix) >= max_parts:
            return
        for part in range(min(cap, remaining), 0, -1):
            rec(remaining - part, part, prefix + (part,))

    rec(weight, weight, ())
    return out


# --------------------------------------------------------------------------
# index maps
# --------------------------------------------------------------------------


@dataclass(frozen=True, order=True)
class IndexMap:
    """A map ``{0..a-1} -> {0..b-1}`` stored as its value tuple."""

    values: tuple
    codomain: int

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(int(v) for v in self.values))
        if any(v < 0 or v >= self.codomain for v in self.values):
            raise IndexOutOfRange(f"{self.values} not inside 0..{self.codomain - 1}")

    @property
    def arity(self) -> int:
        return len(self.values)

    def preimage(self, i: int) -> tuple:
        return tuple(pos for pos, v in enumerate(self.values) if v == i)

    def count(self, i: int) -> int:
        return self.values.count(i)

    def counts(self) -> tuple:
        return tuple(self.values.count(i) for i in range(self.codomain))

    def __str__(self):
        return "(" + ",".join(str(v + 1) for v in self.values) + ")"


def partial_override(phi: IndexMap, positions, r: int) -> IndexMap:
    """The map equal to ``phi`` off ``positions`` and constantly ``r`` on them."""
    positions = set(positions)
    if any(pos < 0 or pos >= phi.arity for pos in positions):
        raise IndexOutOfRange(f"positions {sorted(positions)} outside 0..{phi.arity - 1}")
    if not 0 <= r < phi.codomain:
        raise IndexOutOfRange(f"target {r} outside 0..{phi.codomain - 1}")
    return IndexMap(tuple(r if pos in positions else v for pos, v in enumerate(phi.values)), phi.codomain)


def maps_with_counts(a: int, b: int, counts, free=()) -> list[IndexMap]:
    """All maps ``{0..a-1} -> {0..b-1}`` hitting each constrained index exactly
    the prescribed number of times, in lexicographic order.

    ``counts`` is a sequence (indices ``0..len-1``) or a ``{index: count}``
    mapping.  Indices in ``free`` may be hit any number of times; every other
    index must not be hit at all.
    """
    if isinstance(counts, Mapping):
        target = {int(i): int(c) for i, c in counts.items()}
    else:
        target = {i: int(c) for i, c in enumerate(counts)}
    free = frozenset(int(i) for i in free)
    for i in list(target) + list(free):
        if not 0 <= i < b:
            raise IndexOutOfRange(f"index {i} outside 0..{b - 1}")
    if free & set(target):
        raise InfeasibleCounts("an index cannot be both constrained and free")
    if any(c < 0 for c in target.values()):
        raise InfeasibleCounts("negative preimage count")
    total = sum(target.values())
    if total > a or (not free and total != a):
        raise InfeasibleCounts(f"counts summing to {total} cannot fill {a} positions")
    allowed = sorted(set(target) | free)
    out = []
    remaining = dict(target)
    need = total
    values: list = []

    def rec(pos: int):
        nonlocal need
        if pos == a:
            out.append(IndexMap(tuple(values), b))
            return
        slack = (a - pos) - need
        for i in allowed:
            if i in free:
                if slack <= 0:
                    continue
                values.append(i)
                rec(pos + 1)
                values.pop()
            elif remaining[i] > 0:
                remaining[i] -= 1
                need -= 1
                values.append(i)
                rec(pos + 1)
                values.pop()
                need += 1
                remaining[i] += 1

    rec(0)
    return out


# --------------------------------------------------------------------------
# subspaces
# --------------------------------------------------------------------------


class Subspace:
    """Subspace of ``Q^m`` held as reduced-echelon basis rows."""

    __slots__ = ("m", "basis", "pivots")

    def __init__(self, m: int, vectors=()):
        vectors = [tuple(v) for v in vectors]
        _check_vectors(m, vectors)
        rows, pivots = rref(vectors, m) if vectors else ([], [])
        self.m = m
        self.basis = tuple(tuple(r) for r in rows)
        self.pivots = tuple(pivots)

    @classmethod
    def coordinate(cls, m: int, indices) -> "Subspace":
        return cls(m, [unit_vector(i, m) for i in indices])

    @classmethod
    def whole(cls, m: int) -> "Subspace":
        return cls.coordinate(m, range(m))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def reduce(self, v) -> tuple:
        v = [as_rational(x) for x in v]
        for row, pc in zip(self.basis, self.pivots):
            if v[pc]:
                f = v[pc]
                v = [a - f * b for a, b in zip(v, row)]
        return tuple(v)

    def contains(self, v) -> bool:
        if len(v) != self.m:
            raise DimensionMismatch(f"vector of length {len(v)} in dimension {self.m}")
        return not any(self.reduce(v))

    def __contains__(self, v):
        return self.contains(v)

    def complement_indices(self) -> tuple:
        """Standard basis indices completing this subspace's basis."""
        return tuple(i for i in range(self.m) if i not in self.pivots)

    def image(self, g: RatMatrix) -> "Subspace":
        return Subspace(self.m, [g @ v for v in self.basis])

    def __eq__(self, other):
        return isinstance(other, Subspace) and self.m == other.m and self.basis == other.basis

    def __hash__(self):
        return hash((self.m, self.basis))

    def __repr__(self):
        rows = "; ".join(" ".join(format_rational(x) for x in r) for r in self.basis)
        return f"Subspace(m={self.m}, [{rows}])"


def count_in(W: Subspace, *ys: Sequence) -> int:
    """Number of arguments lying in ``W``."""
    return sum(1 for y in ys if W.contains(y))
