"""Degenerations witnessed by parameterized bases, Inonu-Wigner contractions
and the constructive normalisation pipelines for form algebras and
subalgebraic algebras."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations, product

from .errors import (
    BadK,
    BadPartition,
    DimensionMismatch,
    InvariantBroken,
    NegativeExponent,
    NoLimit,
    NotABasisFamily,
    NotFormAlgebra,
    NotKSubalgebra,
    PreconditionError,
    ScheduleInvalid,
    SearchExhausted,
    Subalgebraic,
)
from .properties import (
    _formal_vector,
    form_decomposition,
    is_k_subalgebra,
    is_p_attractive,
    is_subalgebraic,
)
from .scalars import LaurentPoly, MultiPoly, RatMatrix, determinant, laurent_limit_at_zero, poly_is_zero, poly_minors
from .structures import (
    AlgebraStructure,
    Partition,
    Subspace,
    change_basis,
    enumerate_partitions,
    maps_with_counts,
    multiply,
    transform_constants,
    unit_vector,
)

DEFAULT_BUDGET = 64


def _laurent(x) -> LaurentPoly:
    return x if isinstance(x, LaurentPoly) else LaurentPoly.constant(x)


class BasisFamily:
    """``m x m`` matrix over Laurent polynomials in ``t``; column ``i`` is
    the basis vector ``E_i`` in standard coordinates.

    The determinant must be a nonzero monomial so that ``E`` is a basis for
    every ``t != 0``.
    """

    __slots__ = ("m", "columns", "_det")

    def __init__(self, columns):
        cols = [tuple(_laurent(x) for x in col) for col in columns]
        m = len(cols)
        if m == 0 or any(len(c) != m for c in cols):
            raise DimensionMismatch("basis family must be a square matrix")
        det = _laurent(determinant([[cols[j][i] for j in range(m)] for i in range(m)]))
        if not det.is_monomial():
            raise NotABasisFamily(f"determinant {det} is not a nonzero monomial in t")
        self.m = m
        self.columns = tuple(cols)
        self._det = det

    @classmethod
    def identity(cls, m: int) -> "BasisFamily":
        return cls.diagonal([0] * m)

    @classmethod
    def diagonal(cls, exponents) -> "BasisFamily":
        m = len(exponents)
        return cls([[LaurentPoly.monomial(1, e) if r == i else 0 for r in range(m)] for i, e in enumerate(exponents)])

    @classmethod
    def from_basis(cls, basis: RatMatrix, exponents=None) -> "BasisFamily":
        """Columns of ``basis`` scaled by ``t^exponents[i]``."""
        m = basis.shape[0]
        exponents = exponents or [0] * m
        return cls([[LaurentPoly.monomial(x, e) for x in col] for col, e in zip(basis.columns(), exponents)])

    @classmethod
    def from_rows(cls, rows) -> "BasisFamily":
        m = len(rows)
        return cls([[rows[i][j] for i in range(m)] for j in range(m)])

    @property
    def rows(self) -> tuple:
        return tuple(tuple(self.columns[j][i] for j in range(self.m)) for i in range(self.m))

    @property
    def determinant(self) -> LaurentPoly:
        return self._det

    def inverse_rows(self) -> list:
        """Rows of the inverse matrix, computed as adjugate over determinant."""
        m = self.m
        ((exp, coeff),) = self._det.terms.items()
        rows = self.rows
        inv = [[None] * m for _ in range(m)]
        for i in range(m):
            for j in range(m):
                minor = [[rows[r][c] for c in range(m) if c != j] for r in range(m) if r != i]
                cof = _laurent(determinant(minor))
                if (i + j) % 2:
                    cof = -cof
                inv[j][i] = cof.divide_by_monomial(coeff, exp)
        return inv

    def is_constant(self) -> bool:
        return all(x.is_constant() for col in self.columns for x in col)

    def __eq__(self, other):
        return isinstance(other, BasisFamily) and self.columns == other.columns

    def __hash__(self):
        return hash(self.columns)

    def __repr__(self):
        body = "; ".join(", ".join(str(x) for x in row) for row in self.rows)
        return f"BasisFamily([{body}])"


@dataclass(frozen=True)
class DegenerationWitness:
    source: AlgebraStructure
    family: BasisFamily
    target: AlgebraStructure
    lossless: bool  # every family constant is free of t

    def verify(self) -> bool:
        return apply_witness(self.source, self.family).target == self.target


def family_constants(mu: AlgebraStructure, E: BasisFamily) -> dict:
    """Structure constants of ``mu`` in the basis ``E(t)`` as Laurent polynomials."""
    if E.m != mu.m:
        raise DimensionMismatch(f"family of size {E.m} for m={mu.m}")
    raw = transform_constants(mu, E.columns, E.inverse_rows())
    return {idx: [_laurent(x) for x in vec] for idx, vec in raw.items()}


def apply_witness(mu: AlgebraStructure, E: BasisFamily) -> DegenerationWitness:
    consts = family_constants(mu, E)
    limits = {}
    lossless = True
    for idx, vec in consts.items():
        try:
            limits[idx] = [laurent_limit_at_zero(x) for x in vec]
        except NegativeExponent as exc:
            raise NoLimit(f"constant at {[i + 1 for i in idx]} diverges: {exc}") from exc
        lossless = lossless and all(x.is_constant() for x in vec)
    return DegenerationWitness(mu, E, AlgebraStructure(mu.n, mu.m, limits), lossless)


def apply_chain(mu: AlgebraStructure, families) -> list[DegenerationWitness]:
    out = []
    for E in families:
        w = apply_witness(mu, E)
        out.append(w)
        mu = w.target
    return out


def scale_to_zero_witness(n: int, m: int) -> BasisFamily:
    """``E = (t e_1, ..., t e_m)`` multiplies every constant by ``t^(n-1)``."""
    if n < 2:
        raise ValueError("arity must be at least 2")
    return BasisFamily.diagonal([1] * m)


# --------------------------------------------------------------------------
# Inonu-Wigner contractions
# --------------------------------------------------------------------------


def iw_postconditions(source: AlgebraStructure, target: AlgebraStructure, l: int, k: int) -> list[str]:
    """Failed postconditions of a ``k``-IW contraction w.r.t. ``<e_1..e_l>``."""
    m, n = source.m, source.n
    problems = []
    B0 = Subspace.coordinate(m, range(l))
    B0c = Subspace.coordinate(m, range(l, m))
    if not is_k_subalgebra(target, B0, k).holds:
        problems.append(f"<e_1..e_{l}> is not a {k}-subalgebra of the target")
    if l < m and not is_k_subalgebra(target, B0c, n - k + 1).holds:
        problems.append(f"complement is not a {n - k + 1}-subalgebra of the target")
    for idx in product(range(m), repeat=n):
        if sum(1 for i in idx if i < l) >= k and source.vector(idx) != target.vector(idx):
            problems.append(f"product {[i + 1 for i in idx]} changed")
            break
    return problems


def iw_contraction(mu: AlgebraStructure, l: int, k: int) -> DegenerationWitness:
    """``k``-IW contraction with respect to ``<e_1, ..., e_l>``."""
    n, m = mu.n, mu.m
    if not 2 <= k <= n:
        raise BadK(f"k={k} outside 2..{n}")
    if not 0 <= l <= m:
        raise DimensionMismatch(f"sub-dimension {l} outside 0..{m}")
    verdict = is_k_subalgebra(mu, Subspace.coordinate(m, range(l)), k)
    if not verdict.holds:
        raise NotKSubalgebra(f"<e_1..e_{l}> is not a {k}-subalgebra: {verdict.reason}")
    E = BasisFamily.diagonal([k - n] * l + [k - 1] * (m - l))
    w = apply_witness(mu, E)
    problems = iw_postconditions(mu, w.target, l, k)
    if problems:
        raise InvariantBroken("; ".join(problems))
    return w


# --------------------------------------------------------------------------
# random bases
# --------------------------------------------------------------------------


def _random_invertible(rng: random.Random, size: int, bound: int) -> RatMatrix:
    while True:
        M = RatMatrix([[rng.randint(-bound, bound) for _ in range(size)] for _ in range(size)])
        if M.is_invertible():
            return M


def _candidate_bases(m: int, rng: random.Random, budget: int, fixed_last=None):
    """Permutation matrices (identity first), then seeded random matrices.

    With ``fixed_last`` the permutations and random matrices act on the
    first ``m - 1`` coordinates of a basis whose last vector is fixed.
    """
    size = m if fixed_last is None else m - 1
    for perm in permutations(range(size)):
        yield [unit_vector(i, size) for i in perm]
    for attempt in range(budget):
        yield _random_invertible(rng, size, 1 + attempt // 16).columns()


# --------------------------------------------------------------------------
# non-subalgebraic structures degenerate to form algebras
# --------------------------------------------------------------------------


def _counts_of(idx, m: int) -> tuple:
    c = [0] * m
    for i in idx:
        c[i] += 1
    return tuple(c)


def degenerate_to_form(mu: AlgebraStructure, *, seed: int = 0, budget: int = DEFAULT_BUDGET) -> DegenerationWitness:
    """Find a hyperplane ``<b_1..b_{m-1}>`` that is not a subalgebra and
    apply ``(t b_1, ..., t b_{m-1}, t^n b_m)``."""
    n, m = mu.n, mu.m
    if is_subalgebraic(mu, seed=seed).holds:
        raise Subalgebraic("structure is subalgebraic")
    rng = random.Random(seed)
    tried = 0
    orders = [list(range(j)) + list(range(j + 1, m)) + [j] for j in reversed(range(m))]
    candidates = [RatMatrix.from_columns([unit_vector(i, m) for i in order]) for order in orders]
    candidates += [_random_invertible(rng, m, 1 + a // 16) for a in range(budget)]
    for B in candidates:
        tried += 1
        nu = change_basis(mu, B)
        if any(nu.coefficient(idx, m - 1) for idx in product(range(m - 1), repeat=n)):
            E = BasisFamily.from_basis(B, [1] * (m - 1) + [n])
            w = apply_witness(mu, E)
            fd = form_decomposition(w.target)
            if fd is None or not fd.is_nonzero:
                raise InvariantBroken("form degeneration did not produce a nonzero form algebra")
            return w
    raise SearchExhausted("no basis with a non-closed hyperplane found", attempts=tried, seed=seed)


# --------------------------------------------------------------------------
# form algebras degenerate to p-minimal ones
# --------------------------------------------------------------------------


def minimality_exponents(p: Partition, m: int, n: int) -> tuple:
    """``c_i = (n+1)^m - (n+1)^(m-i)`` for ``i = 1..m-1``, checked against
    the inequalities that make the minimal degeneration work."""
    if p[m - 1] != 0:
        raise BadPartition(f"partition {p} has a nonzero entry at position {m}")
    c = [(n + 1) ** m - (n + 1) ** (m - i) for i in range(1, m)]
    for i in range(1, m - 1):  # 1-based i, c[i-1] = c_i
        tail = range(i + 2, m)
        lhs = (1 + sum(p[j - 1] for j in tail)) * c[i]
        rhs = c[i - 1] + sum(p[j - 1] * c[j - 1] for j in tail)
        if not lhs > rhs:
            raise ScheduleInvalid(f"exponent inequality fails at i={i}: {lhs} <= {rhs}")
    return tuple(c)


def _require_form(mu: AlgebraStructure):
    fd = form_decomposition(mu)
    if fd is None:
        raise NotFormAlgebra("not the algebra of an n-linear form")
    if not fd.is_nonzero:
        raise NotFormAlgebra("the form is zero")
    return fd


def _form_partition_feasible(mu: AlgebraStructure, fd, q: Partition) -> bool:
    m, n = mu.m, mu.n
    r = q.length
    vs = []
    for i in range(r):
        v = [0] * m
        for c in fd.complement:
            v[c] = MultiPoly.var(f"v{i + 1}_{c + 1}")
        vs.append(tuple(v))
    for phi in maps_with_counts(n, r, q.parts):
        f = multiply(mu, *[vs[i] for i in phi.values])
        if any(not poly_is_zero(x) for x in f):
            return True
    return False


def _basis_realizes(nu: AlgebraStructure, counts, target: int) -> bool:
    m = nu.m
    free = {i: c for i, c in enumerate(counts)}
    for phi in maps_with_counts(nu.n, m, free):
        if nu.coefficient(phi.values, target):
            return True
    return False


def find_max_form_partition(mu: AlgebraStructure, *, seed: int = 0, budget: int = DEFAULT_BUDGET):
    """Largest ``p`` realised by a nonzero form value, with a basis
    ``(v_1..v_{m-1}, a)`` in which some constant with counts ``p`` onto the
    last vector is nonzero."""
    fd = _require_form(mu)
    m, n = mu.m, mu.n
    p = None
    for q in enumerate_partitions(n, max_parts=m - 1):
        if _form_partition_feasible(mu, fd, q):
            p = q
            break
    if p is None:
        raise InvariantBroken("nonzero form with no feasible partition")
    rng = random.Random(seed)
    counts = p.padded(m - 1) + (0,)
    tried = 0
    for cols in _candidate_bases(m, rng, budget, fixed_last=fd.a):
        tried += 1
        basis = []
        for col in cols:
            v = [Fraction(0)] * m
            for x, c in zip(col, fd.complement):
                v[c] = Fraction(x)
            basis.append(tuple(v))
        B = RatMatrix.from_columns(basis + [fd.a])
        if _basis_realizes(change_basis(mu, B), counts, m - 1):
            return p, B
    raise SearchExhausted(f"no basis realising partition {p}", attempts=tried, seed=seed)


def form_to_minimal(mu: AlgebraStructure, *, seed: int = 0, budget: int = DEFAULT_BUDGET) -> DegenerationWitness:
    from .classification import is_p_minimal_presentation

    p, B = find_max_form_partition(mu, seed=seed, budget=budget)
    m, n = mu.m, mu.n
    c = minimality_exponents(p, m, n)
    top = sum(p[i] * c[i] for i in range(m - 1))
    E = BasisFamily.from_basis(B, list(c) + [top])
    try:
        w = apply_witness(mu, E)
    except NoLimit as exc:
        raise InvariantBroken(f"minimal degeneration diverges: {exc}") from exc
    verdict = is_p_minimal_presentation(w.target, p)
    if not verdict.holds:
        raise InvariantBroken(f"target is not {p}-minimal: {verdict.reason}")
    return w


# --------------------------------------------------------------------------
# subalgebraic algebras degenerate to maximally p-attractive ones
# --------------------------------------------------------------------------


def _attractive_candidate_feasible(mu: AlgebraStructure, q: Partition) -> bool:
    """Some product with ``q_i`` arguments equal to ``b_i`` leaves ``<b_1..b_r>``."""
    m, n = mu.m, mu.n
    r = q.length
    bs = [_formal_vector(f"b{i + 1}", m) for i in range(r)]
    counts = {m + i: q[i] for i in range(r)}
    for psi in maps_with_counts(n, m + r, counts, free=range(m)):
        args = [bs[v - m] if v >= m else unit_vector(v, m) for v in psi.values]
        f = multiply(mu, *args)
        if all(poly_is_zero(x) for x in f):
            continue
        rows = [list(b) for b in bs] + [list(f)]
        if any(not poly_is_zero(x) for x in poly_minors(rows, r + 1)):
            return True
    return False


def _require_nonzero_subalgebraic(mu: AlgebraStructure, seed: int) -> None:
    if mu.is_zero():
        raise PreconditionError("structure is zero")
    verdict = is_subalgebraic(mu, seed=seed)
    if not verdict.holds:
        raise PreconditionError(f"structure is not subalgebraic: {verdict.reason}")


def attractive_counts(p: Partition, m: int) -> tuple:
    """Preimage counts ``(p_1, ..., p_{m-1}, p_m + 1)``."""
    return tuple(p[i] for i in range(m - 1)) + (p[m - 1] + 1,)


def find_attractive_partition(mu: AlgebraStructure, *, seed: int = 0, budget: int = DEFAULT_BUDGET):
    """Partition ``p`` of ``n - 1`` and a basis in which a constant with
    counts ``(p_1..p_{m-1}, p_m + 1)`` onto the last vector is nonzero."""
    _require_nonzero_subalgebraic(mu, seed)
    m, n = mu.m, mu.n
    if m == 1:
        return Partition.of(n - 1), RatMatrix.identity(1)
    candidates = sorted(
        (q for s in range(1, n) for q in enumerate_partitions(s, max_parts=m - 1)),
        reverse=True,
    )
    pbar = next((q for q in candidates if _attractive_candidate_feasible(mu, q)), None)
    if pbar is None:
        raise InvariantBroken("no feasible partition although m > 1")
    s = pbar.weight
    if s == n - 1:
        p = pbar
    else:
        if pbar.length != m - 1:
            raise InvariantBroken(f"maximal partition {pbar} is too short")
        p = Partition(pbar.parts + (n - 1 - s,))
    if not is_p_attractive(mu, p, seed=seed).holds:
        raise InvariantBroken(f"structure is not {p}-attractive")
    rng = random.Random(seed)
    counts = attractive_counts(p, m)
    tried = 0
    for cols in _candidate_bases(m, rng, budget):
        tried += 1
        B = RatMatrix.from_columns(cols)
        if _basis_realizes(change_basis(mu, B), counts, m - 1):
            return p, B
    raise SearchExhausted(f"no basis realising partition {p}", attempts=tried, seed=seed)


def chain_step_conditions(nu: AlgebraStructure, p: Partition, s: int) -> list[str]:
    """Failed conditions among the three invariants of the contraction chain at step ``s``."""
    m = nu.m
    problems = []
    if not _basis_realizes(nu, attractive_counts(p, m), m - 1):
        problems.append("distinguished constant vanished")
    for r in range(1, s + 1):
        k = p.partial_sum(r) + 1
        if not is_k_subalgebra(nu, Subspace.coordinate(m, range(r)), k).holds:
            problems.append(f"<e_1..e_{r}> is not a {k}-subalgebra")
    for r in range(1, s):
        k = sum(p[i] for i in range(r, m)) + 1
        if not is_k_subalgebra(nu, Subspace.coordinate(m, range(r, m)), k).holds:
            problems.append(f"<e_{r + 1}..e_{m}> is not a {k}-subalgebra")
    return problems


def subalgebraic_to_max_attractive(
    mu: AlgebraStructure, *, seed: int = 0, budget: int = DEFAULT_BUDGET
) -> tuple[Partition, list[DegenerationWitness]]:
    """Return ``p`` and the chain: basis change, then for ``s = 1..m-1`` the
    ``(p_1 + ... + p_s + 1)``-IW contraction w.r.t. ``<e_1..e_s>``."""
    from .classification import is_maximally_p_attractive_presentation

    p, B = find_attractive_partition(mu, seed=seed, budget=budget)
    m = mu.m
    chain = [apply_witness(mu, BasisFamily.from_basis(B))]
    current = chain[0].target
    for s in range(1, m + 1):
        problems = chain_step_conditions(current, p, s)
        if problems:
            raise InvariantBroken(f"step {s}: " + "; ".join(problems))
        if s == m:
            break
        try:
            w = iw_contraction(current, s, p.partial_sum(s) + 1)
        except NotKSubalgebra as exc:
            raise InvariantBroken(f"step {s}: {exc}") from exc
        chain.append(w)
        current = w.target
    verdict = is_maximally_p_attractive_presentation(current, p)
    if not verdict.holds:
        raise InvariantBroken(f"target is not maximally {p}-attractive: {verdict.reason}")
    return p, chain
