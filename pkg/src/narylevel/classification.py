"""Linear systems describing p-minimal and maximally p-attractive
presentations, the level-one recognizer and the explicit binary and
ternary tables."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from itertools import combinations, permutations
from math import gcd, lcm
from typing import Callable

from .degeneration import form_to_minimal, subalgebraic_to_max_attractive
from .errors import (
    BadPartition,
    ConstraintViolation,
    Inconclusive,
    SearchExhausted,
    UnsupportedArity,
    ZeroTuple,
)
from .properties import PropertyVerdict, form_decomposition, is_subalgebraic
from .scalars import MultiPoly, RatMatrix, as_rational, nullspace_basis
from .structures import (
    AlgebraStructure,
    IndexMap,
    Partition,
    derivation_dimension,
    maps_with_counts,
    partial_override,
)


class Kind(enum.Enum):
    FORM_MINIMAL = "form-minimal"
    MAX_ATTRACTIVE = "max-attractive"

    def __str__(self):
        return self.value


# --------------------------------------------------------------------------
# linear systems
# --------------------------------------------------------------------------


def _canonical_row(coeffs: dict, size: int):
    row = [Fraction(coeffs.get(i, 0)) for i in range(size)]
    nz = [x for x in row if x]
    if not nz:
        return None
    den = reduce(lcm, (x.denominator for x in nz), 1)
    ints = [int(x * den) for x in row]
    g = reduce(gcd, (abs(x) for x in ints if x), 0)
    ints = [x // g for x in ints]
    if next(x for x in ints if x) < 0:
        ints = [-x for x in ints]
    return tuple(ints)


@dataclass(frozen=True)
class LinearSystem:
    """Homogeneous equations in unknowns ``alpha_phi`` labelled by index maps.

    ``outputs[i]`` is the basis index receiving the product for the ``i``-th
    unknown.  Rows are deduplicated integer rows.
    """

    kind: Kind
    n: int
    m: int
    partition: Partition
    unknowns: tuple
    outputs: tuple
    rows: tuple

    def index(self, phi: IndexMap) -> int:
        return self._positions[phi]

    @property
    def _positions(self) -> dict:
        cache = self.__dict__.get("_pos_cache")
        if cache is None:
            cache = {phi: i for i, phi in enumerate(self.unknowns)}
            object.__setattr__(self, "_pos_cache", cache)
        return cache

    @property
    def matrix(self) -> RatMatrix:
        return RatMatrix(self.rows, len(self.unknowns))

    def solution_basis(self) -> list[tuple]:
        return nullspace_basis(self.matrix)

    @property
    def solution_dimension(self) -> int:
        return len(self.solution_basis())

    def residuals(self, values) -> list[Fraction]:
        vals = [as_rational(v) for v in values]
        return [sum((c * v for c, v in zip(row, vals) if c), Fraction(0)) for row in self.rows]

    def is_solution(self, values) -> bool:
        return not any(self.residuals(values))

    def values_of(self, mu: AlgebraStructure) -> list[Fraction]:
        return [mu.coefficient(phi.values, j) for phi, j in zip(self.unknowns, self.outputs)]

    def instantiate(self, values) -> AlgebraStructure:
        consts: dict = {}
        for phi, j, v in zip(self.unknowns, self.outputs, values):
            if v:
                consts.setdefault(phi.values, {})[j] = v
        return AlgebraStructure(self.n, self.m, consts)

    def describe(self) -> list[str]:
        """Equations as text, unknowns written ``a[i1,...,in]``."""
        out = []
        for row in self.rows:
            terms = []
            for c, phi in zip(row, self.unknowns):
                if not c:
                    continue
                name = "a[" + ",".join(str(v + 1) for v in phi.values) + "]"
                mag = "" if abs(c) == 1 else f"{abs(c)}*"
                sign = "-" if c < 0 else ("+" if terms else "")
                terms.append(f"{sign}{mag}{name}")
            out.append("".join(terms) + " = 0")
        return out


def _subset_sum(psi: IndexMap, x: int, y: int, k: int) -> list[IndexMap]:
    return [partial_override(psi, S, y) for S in combinations(psi.preimage(x), k)]


def _counts_with(base: list, changes: dict) -> dict:
    c = {i: v for i, v in enumerate(base)}
    for i, d in changes.items():
        c[i] = c[i] + d
    return c


def _feasible(counts: dict) -> bool:
    return all(v >= 0 for v in counts.values())


def _assemble(kind, n, m, p, unknowns, outputs, equations) -> LinearSystem:
    pos = {phi: i for i, phi in enumerate(unknowns)}
    seen = set()
    rows = []
    for eq in equations:
        coeffs: dict = {}
        for phi, c in eq:
            i = pos[phi]
            coeffs[i] = coeffs.get(i, 0) + c
        row = _canonical_row(coeffs, len(unknowns))
        if row is not None and row not in seen:
            seen.add(row)
            rows.append(row)
    return LinearSystem(kind, n, m, p, tuple(unknowns), tuple(outputs), tuple(rows))


def _check_pmin_partition(n: int, m: int, p: Partition) -> None:
    if p.weight != n:
        raise BadPartition(f"partition {p} has weight {p.weight}, expected {n}")
    if p[m - 1] != 0:
        raise BadPartition(f"partition {p} needs p_{m} = 0")


def _check_maxatt_partition(n: int, m: int, p: Partition) -> None:
    if p.weight != n - 1:
        raise BadPartition(f"partition {p} has weight {p.weight}, expected {n - 1}")
    if p[m] != 0:
        raise BadPartition(f"partition {p} needs p_{m + 1} = 0")


def pmin_system(n: int, m: int, p: Partition) -> LinearSystem:
    """Unknowns: maps into ``e_1..e_{m-1}`` with counts ``p``; one equation
    per ``x < y <= m-1``, ``1 <= k <= p_y`` and admissible ``psi``."""
    _check_pmin_partition(n, m, p)
    b = m - 1
    base = list(p.padded(b))
    unknowns = maps_with_counts(n, b, base)
    equations = []
    for x in range(b):
        for y in range(x + 1, b):
            for k in range(1, p[y] + 1):
                counts = _counts_with(base, {x: k, y: -k})
                for psi in maps_with_counts(n, b, counts):
                    equations.append([(phi, 1) for phi in _subset_sum(psi, x, y, k)])
    return _assemble(Kind.FORM_MINIMAL, n, m, p, unknowns, [m - 1] * len(unknowns), equations)


def maxatt_system(n: int, m: int, p: Partition) -> LinearSystem:
    """Unknowns: maps with counts ``p + delta_j`` (product on ``e_j``); the
    three equation groups of the maximal attractiveness criterion."""
    _check_maxatt_partition(n, m, p)
    base = list(p.padded(m))
    unknowns, outputs = [], []
    for j in range(m):
        for phi in maps_with_counts(n, m, _counts_with(base, {j: 1})):
            unknowns.append(phi)
            outputs.append(j)
    equations = []
    for x in range(m):
        for y in range(x + 1, m):
            for psi in maps_with_counts(n, m, _counts_with(base, {x: 1})):
                eq = [(phi, 1) for phi in _subset_sum(psi, x, y, 1)]
                eq.append((psi, -1))
                equations.append(eq)
            for k in range(1, p[y] + 1):
                counts = _counts_with(base, {x: k + 1, y: -k})
                for psi in maps_with_counts(n, m, counts):
                    equations.append([(phi, 1) for phi in _subset_sum(psi, x, y, k)])
                    equations.append([(phi, 1) for phi in _subset_sum(psi, x, y, k + 1)])
                for j in range(m):
                    if j in (x, y):
                        continue
                    counts = _counts_with(base, {j: 1, x: k, y: -k})
                    for psi in maps_with_counts(n, m, counts):
                        equations.append([(phi, 1) for phi in _subset_sum(psi, x, y, k)])
    return _assemble(Kind.MAX_ATTRACTIVE, n, m, p, unknowns, outputs, equations)


def _index_counts(idx, m: int) -> tuple:
    c = [0] * m
    for i in idx:
        c[i] += 1
    return tuple(c)


def is_p_minimal_presentation(mu: AlgebraStructure, p: Partition) -> PropertyVerdict:
    n, m = mu.n, mu.m
    _check_pmin_partition(n, m, p)
    if mu.is_zero():
        return PropertyVerdict(False, reason="structure is zero")
    want = p.padded(m)
    for idx, vec in mu.items():
        if any(vec[j] for j in range(m - 1)):
            return PropertyVerdict(False, reason=f"product {[i + 1 for i in idx]} leaves <e_{m}>")
        if _index_counts(idx, m) != want:
            return PropertyVerdict(False, reason=f"product {[i + 1 for i in idx]} outside the support shape of {p}")
    system = pmin_system(n, m, p)
    res = system.residuals(system.values_of(mu))
    bad = [eq for eq, r in zip(system.describe(), res) if r]
    if bad:
        return PropertyVerdict(False, reason=f"equation fails: {bad[0]}")
    return PropertyVerdict(True)


def is_maximally_p_attractive_presentation(mu: AlgebraStructure, p: Partition) -> PropertyVerdict:
    n, m = mu.n, mu.m
    _check_maxatt_partition(n, m, p)
    if mu.is_zero():
        return PropertyVerdict(False, reason="structure is zero")
    base = p.padded(m)
    for idx, vec in mu.items():
        counts = _index_counts(idx, m)
        for j, c in enumerate(vec):
            if c and counts != tuple(b + (i == j) for i, b in enumerate(base)):
                return PropertyVerdict(False, reason=f"constant {[i + 1 for i in idx]} -> {j + 1} outside the support shape of {p}")
    system = maxatt_system(n, m, p)
    res = system.residuals(system.values_of(mu))
    bad = [eq for eq, r in zip(system.describe(), res) if r]
    if bad:
        return PropertyVerdict(False, reason=f"equation fails: {bad[0]}")
    return PropertyVerdict(True)


# --------------------------------------------------------------------------
# the binary and ternary tables
# --------------------------------------------------------------------------


def _v(name):
    return MultiPoly.var(name)


def _c(x):
    return MultiPoly.constant(x)


def _a3(m):
    return {(0, 0): {m - 1: _c(1)}}


def _n3(m):
    return {(0, 1): {m - 1: _c(1)}, (1, 0): {m - 1: _c(-1)}}


def _pminus(m):
    out = {}
    for i in range(1, m):
        out[(0, i)] = {i: _c(1)}
        out[(i, 0)] = {i: _c(-1)}
    return out


def _nu(m):
    if m == 1:
        return {(0, 0): {0: _c(1)}}
    al = _v("alpha")
    out = {(0, 0): {0: _c(1)}}
    for i in range(1, m):
        out[(0, i)] = {i: al}
        out[(i, 0)] = {i: 1 - al}
    return out


def _t1(m):
    return {(0, 0, 0): {m - 1: _c(1)}}


def _t2(m):
    a1, a2, a3 = _v("a1"), _v("a2"), _v("a3")
    return {(0, 0, 1): {m - 1: a3}, (0, 1, 0): {m - 1: a2}, (1, 0, 0): {m - 1: a1}}


def _perm_sign(perm) -> int:
    sign = 1
    for i, j in combinations(range(len(perm)), 2):
        if perm[i] > perm[j]:
            sign = -sign
    return sign


def _t3(m):
    return {perm: {m - 1: _c(_perm_sign(perm))} for perm in permutations(range(3))}


def _t4(m):
    if m == 1:
        return {(0, 0, 0): {0: _c(1)}}
    eps, a1, a2, a3 = _v("eps"), _v("a1"), _v("a2"), _v("a3")
    out = {(0, 0, 0): {0: eps}}
    for i in range(1, m):
        out[(0, 0, i)] = {i: a3}
        out[(0, i, 0)] = {i: a2}
        out[(i, 0, 0)] = {i: a1}
    return out


def _t5(m):
    a1, a2, a3 = _v("a1"), _v("a2"), _v("a3")
    out = {
        (0, 0, 1): {0: a2 - a3},
        (0, 1, 0): {0: a3 - a1},
        (1, 0, 0): {0: a1 - a2},
        (1, 1, 0): {1: a3 - a2},
        (1, 0, 1): {1: a1 - a3},
        (0, 1, 1): {1: a2 - a1},
    }
    # products with e_i in reversed argument order relative to the printed
    # table; the printed order is not attractive (see the decisions ledger)
    for i in range(2, m):
        out[(1, 0, i)] = {i: a1}
        out[(0, 1, i)] = {i: -a1}
        out[(1, i, 0)] = {i: -a2}
        out[(0, i, 1)] = {i: a2}
        out[(i, 1, 0)] = {i: a3}
        out[(i, 0, 1)] = {i: -a3}
    return out


_SUM_ZERO = "a1+a2+a3=0; (a1,a2,a3)!=0"


@dataclass(frozen=True)
class Family:
    """One line of the binary or ternary table.

    ``symbols(m)`` and ``constraint(m)`` may depend on the dimension because
    some families collapse in small dimensions.
    """

    id: str
    kind: Kind
    n: int
    partition: Partition
    min_m: int
    builder: Callable = field(repr=False)
    params: tuple = ()
    sample: tuple = ()
    constraint_text: str = "none"
    collapse_below: int = 0  # dimensions below this carry no parameters

    def symbols(self, m: int) -> tuple:
        return () if m < self.collapse_below else self.params

    def constraint(self, m: int) -> str:
        if m < self.collapse_below:
            return "none"
        if self.id == "3.5" and m == 2:
            return "a1,a2,a3 not all equal"
        return self.constraint_text

    def symbolic_constants(self, m: int) -> dict:
        return self.builder(m)

    def instantiate(self, m: int, values=None, scale=1) -> AlgebraStructure:
        syms = self.symbols(m)
        values = self.sample if values is None else tuple(values)
        if syms and len(values) != len(syms):
            raise ValueError(f"{self.id} takes {len(syms)} parameters")
        assignment = dict(zip(syms, values))
        consts = {}
        for idx, out in self.builder(m).items():
            consts[idx] = {j: as_rational(scale) * e.evaluate(assignment) for j, e in out.items()}
        return AlgebraStructure(self.n, m, consts)


FAMILIES = (
    Family("A3", Kind.FORM_MINIMAL, 2, Partition.of(2), 2, _a3),
    Family("n3", Kind.FORM_MINIMAL, 2, Partition.of(1, 1), 3, _n3),
    Family("p-", Kind.MAX_ATTRACTIVE, 2, Partition.of(1), 2, _pminus),
    Family("nu", Kind.MAX_ATTRACTIVE, 2, Partition.of(1), 1, _nu, ("alpha",), (Fraction(2),), "alpha in k", 2),
    Family("3.1", Kind.FORM_MINIMAL, 3, Partition.of(3), 2, _t1),
    Family("3.2", Kind.FORM_MINIMAL, 3, Partition.of(2, 1), 3, _t2, ("a1", "a2", "a3"), (1, -1, 0), _SUM_ZERO),
    Family("3.3", Kind.FORM_MINIMAL, 3, Partition.of(1, 1, 1), 4, _t3),
    Family(
        "3.4", Kind.MAX_ATTRACTIVE, 3, Partition.of(2), 1, _t4, ("eps", "a1", "a2", "a3"), (1, 1, 1, -1),
        "eps in {0,1}; a1+a2+a3=eps; (eps,a1,a2,a3)!=0", 2,
    ),
    Family("3.5", Kind.MAX_ATTRACTIVE, 3, Partition.of(1, 1), 2, _t5, ("a1", "a2", "a3"), (1, -1, 0), _SUM_ZERO),
)

FAMILY_BY_ID = {f.id: f for f in FAMILIES}


@dataclass(frozen=True)
class ClassificationEntry:
    family: str
    kind: Kind
    n: int
    m: int
    partition: Partition
    symbols: tuple
    constraint: str
    constants: dict = field(repr=False)
    representative: AlgebraStructure = field(repr=False)

    def render_constants(self) -> str:
        parts = []
        for idx in sorted(self.constants):
            for j in sorted(self.constants[idx]):
                e = self.constants[idx][j]
                if e:
                    parts.append(f"[{','.join(str(i + 1) for i in idx)}] -> {j + 1} : {e}")
        return "; ".join(parts)

    def golden_line(self) -> str:
        return f"{self.kind}|{self.n}|{self.m}|{self.partition}|{self.constraint}|{self.render_constants()}"


def _sort_key(entry: ClassificationEntry):
    return (entry.m, entry.kind.value, tuple(-x for x in entry.partition.parts), ",".join(entry.symbols))


def enumerate_level_one(n: int, m: int) -> list[ClassificationEntry]:
    if n not in (2, 3):
        raise UnsupportedArity(f"explicit tables exist for n = 2, 3 only (got {n})")
    if m < 1:
        raise ValueError("dimension must be positive")
    out = []
    for fam in FAMILIES:
        if fam.n != n or m < fam.min_m:
            continue
        out.append(
            ClassificationEntry(
                fam.id, fam.kind, n, m, fam.partition, fam.symbols(m), fam.constraint(m),
                fam.symbolic_constants(m), fam.instantiate(m),
            )
        )
    out.sort(key=_sort_key)
    return out


def golden_table(n: int, dims) -> str:
    lines = []
    for m in dims:
        lines += [e.golden_line() for e in enumerate_level_one(n, m)]
    return "\n".join(lines) + "\n"


GOLDEN_DIMS = {2: range(1, 4), 3: range(1, 5)}


# --------------------------------------------------------------------------
# parameters
# --------------------------------------------------------------------------


def _scale_first_nonzero(vals):
    lead = next((v for v in vals if v), None)
    if lead is None:
        raise ZeroTuple("parameter tuple is zero")
    return tuple(v / lead for v in vals)


def canonical_parameters(family: str, n: int, m: int, raw) -> tuple:
    """Normal form of a parameter tuple under the isomorphisms that rescale
    all structure constants."""
    fam = FAMILY_BY_ID.get(family)
    if fam is None:
        raise KeyError(f"unknown family {family!r}")
    if fam.n != n:
        raise UnsupportedArity(f"family {family} is {fam.n}-ary")
    vals = tuple(as_rational(x) for x in raw)
    syms = fam.symbols(m)
    if len(vals) != len(syms):
        raise ValueError(f"{family} takes {len(syms)} parameters at m={m}")
    if not syms or family == "nu":
        return vals
    if family == "3.4":
        eps, *al = vals
        if sum(al) != eps:
            raise ConstraintViolation("a1+a2+a3 must equal eps")
        return _scale_first_nonzero(vals)
    if family == "3.5" and m == 2:
        mean = sum(vals) / 3
        return _scale_first_nonzero(tuple(v - mean for v in vals))
    if sum(vals) != 0:
        raise ConstraintViolation("a1+a2+a3 must vanish")
    return _scale_first_nonzero(vals)


@dataclass(frozen=True)
class FamilyMatch:
    family: str
    parameters: tuple
    scale: Fraction


def identify_family(mu: AlgebraStructure, kind: Kind, p: Partition):
    """Match a presentation against the explicit tables (``n <= 3``).

    Returns a :class:`FamilyMatch` whose family instance, multiplied by
    ``scale``, reproduces ``mu`` exactly, or ``None``.
    """
    n, m = mu.n, mu.m
    top = m - 1
    co = mu.coefficient
    cands = [f for f in FAMILIES if f.n == n and f.kind == kind and f.partition == p and m >= f.min_m]
    for fam in cands:
        raw, scale = (), Fraction(1)
        fid = fam.id
        if fid == "A3":
            scale = co((0, 0), top)
        elif fid == "n3":
            scale = co((0, 1), top)
        elif fid == "p-":
            scale = co((0, 1), 1)
        elif fid == "nu":
            scale = co((0, 0), 0)
            if m > 1 and scale:
                raw = (co((0, 1), 1) / scale,)
        elif fid == "3.1":
            scale = co((0, 0, 0), top)
        elif fid == "3.2":
            raw = (co((1, 0, 0), top), co((0, 1, 0), top), co((0, 0, 1), top))
        elif fid == "3.3":
            scale = co((0, 1, 2), top)
        elif fid == "3.4":
            if m == 1:
                scale = co((0, 0, 0), 0)
            else:
                raw = (co((0, 0, 0), 0), co((1, 0, 0), 1), co((0, 1, 0), 1), co((0, 0, 1), 1))
        elif fid == "3.5":
            if m == 2:
                d1, d3 = co((0, 0, 1), 0), co((1, 0, 0), 0)
                raw = (d3, Fraction(0), -d1)
            else:
                raw = (co((1, 0, 2), 2), co((0, 2, 1), 2), co((2, 1, 0), 2))
        if not scale:
            continue
        try:
            if fam.instantiate(m, raw, scale) != mu:
                continue
            params = canonical_parameters(fid, n, m, raw)
        except (ZeroTuple, ConstraintViolation, ValueError):
            continue
        return FamilyMatch(fid, params, scale)
    return None


# --------------------------------------------------------------------------
# recognizer
# --------------------------------------------------------------------------


class Status(enum.Enum):
    LEVEL_ZERO = "level-zero"
    LEVEL_ONE = "level-one"
    NOT_LEVEL_ONE = "not-level-one"
    INCONCLUSIVE = "inconclusive"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class Recognition:
    status: Status
    kind: Kind | None = None
    partition: Partition | None = None
    witnesses: tuple = ()
    target: AlgebraStructure | None = None
    match: FamilyMatch | None = None
    reason: str = ""


def _isomorphic_to_target(mu: AlgebraStructure, witnesses) -> bool:
    """``mu`` degenerates to the last target; equality of orbit dimensions
    (equivalently of derivation algebra dimensions) forces isomorphism."""
    if all(w.lossless for w in witnesses):
        return True
    return derivation_dimension(mu) == derivation_dimension(witnesses[-1].target)


def recognize_level_one(mu: AlgebraStructure, *, seed: int = 0, budget: int = 64) -> Recognition:
    if mu.is_zero():
        return Recognition(Status.LEVEL_ZERO, reason="zero multiplication")
    n = mu.n
    try:
        fd = form_decomposition(mu)
        if fd is not None:
            w = form_to_minimal(mu, seed=seed, budget=budget)
            witnesses = (w,)
            kind = Kind.FORM_MINIMAL
            p = presentation_partition(w.target, kind)
        elif is_subalgebraic(mu, seed=seed).holds:
            p, chain = subalgebraic_to_max_attractive(mu, seed=seed, budget=budget)
            witnesses = tuple(chain)
            kind = Kind.MAX_ATTRACTIVE
        else:
            return Recognition(Status.NOT_LEVEL_ONE, reason="neither a form algebra nor subalgebraic")
    except SearchExhausted as exc:
        return Recognition(Status.INCONCLUSIVE, reason=str(exc))
    target = witnesses[-1].target
    if not _isomorphic_to_target(mu, witnesses):
        return Recognition(
            Status.NOT_LEVEL_ONE, kind, p, witnesses, target,
            reason=f"degenerates to a non-isomorphic nonzero {kind} algebra",
        )
    match = identify_family(target, kind, p) if n <= 3 else None
    reason = "no family of the explicit table matches this presentation" if n <= 3 and match is None else ""
    return Recognition(Status.LEVEL_ONE, kind, p, witnesses, target, match, reason)


def presentation_partition(target: AlgebraStructure, kind: Kind) -> Partition:
    idx, _ = next(iter(target.items()))
    counts = sorted(_index_counts(idx, target.m)[: target.m - 1], reverse=True)
    return Partition(tuple(counts))


def is_infinite_level_one(mu: AlgebraStructure, *, seed: int = 0, budget: int = 64) -> bool:
    r = recognize_level_one(mu, seed=seed, budget=budget)
    if r.status is Status.INCONCLUSIVE:
        raise Inconclusive(r.reason)
    return r.status is Status.LEVEL_ONE and r.kind is Kind.FORM_MINIMAL
