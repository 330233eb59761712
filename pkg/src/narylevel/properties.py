"""Exact checkers for the basis-free properties of n-ary algebras, and a
seeded randomized oracle that evaluates the raw chain definitions.

Every symbolic checker reduces its property to polynomial identities in
formal vector coordinates.  Before expanding polynomials it tries a handful
of random rational specialisations; a violation found that way is a genuine
counterexample and ends the check early.  A ``holds`` verdict is only ever
produced by the symbolic identity test.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from .errors import DimensionMismatch, UnknownProperty, WeightMismatch
from .scalars import MultiPoly, poly_is_zero, poly_minors
from .structures import (
    AlgebraStructure,
    Partition,
    Subspace,
    count_in,
    maps_with_counts,
    multiply,
    unit_vector,
)

QUICK_TRIES = 4
CERTIFICATE_TRIES = 400


@dataclass(frozen=True)
class Certificate:
    """Concrete violating datum.

    ``chain`` lists ``w_1..w_k`` with ``A_r = <w_1..w_r>``; ``subspace`` is
    the subspace under test for k-subalgebra checks.
    """

    args: tuple
    chain: tuple = ()
    subspace: Subspace | None = None


@dataclass(frozen=True)
class PropertyVerdict:
    holds: bool
    certificate: Certificate | None = None
    reason: str = ""

    def __bool__(self):
        return self.holds


@dataclass(frozen=True)
class Property:
    """Descriptor accepted by :func:`sampled_check` and :func:`definitional_violation`."""

    name: str
    partition: Partition | None = None
    k: int | None = None
    subspace: Subspace | None = None

    @classmethod
    def anticommutative(cls, p: Partition) -> "Property":
        return cls("anticommutative", partition=p)

    @classmethod
    def attractive(cls, p: Partition) -> "Property":
        return cls("attractive", partition=p)

    @classmethod
    def subalgebraic(cls) -> "Property":
        return cls("subalgebraic")

    @classmethod
    def k_subalgebra(cls, W: Subspace, k: int) -> "Property":
        return cls("k-subalgebra", k=k, subspace=W)


@dataclass(frozen=True)
class FormDecomposition:
    """``a`` spans the product space; ``values`` holds the form on the
    standard basis vectors listed in ``complement`` (keys index into it)."""

    a: tuple
    complement: tuple
    values: dict = field(default_factory=dict)

    @property
    def is_nonzero(self) -> bool:
        return any(self.values.values())


# --------------------------------------------------------------------------
# definitional evaluation
# --------------------------------------------------------------------------


def _chain_applies(chain, args, p: Partition, m: int):
    """Return ``A_k`` if the chain condition of the definitions is triggered."""
    if Subspace(m, chain).dim != len(chain) or not chain:
        return None
    k = len(chain)
    levels = [Subspace(m, chain[: r + 1]) for r in range(k)]
    for r in range(k - 1):
        if count_in(levels[r], *args) != p.partial_sum(r + 1):
            return None
    if count_in(levels[-1], *args) <= p.partial_sum(k):
        return None
    return levels[-1]


def definitional_violation(mu: AlgebraStructure, prop: Property, cert: Certificate) -> bool:
    """Re-evaluate a certificate against the raw definition of ``prop``."""
    args = [tuple(Fraction(x) for x in a) for a in cert.args]
    if len(args) != mu.n:
        return False
    m = mu.m
    if prop.name in ("anticommutative", "attractive"):
        top = _chain_applies([tuple(w) for w in cert.chain], args, prop.partition, m)
        if top is None:
            return False
        prod = multiply(mu, *args)
        if prop.name == "anticommutative":
            return any(prod)
        return not top.contains(prod)
    if prop.name == "subalgebraic":
        prod = multiply(mu, *args)
        return not Subspace(m, args).contains(prod)
    if prop.name == "k-subalgebra":
        W = prop.subspace
        chi = count_in(W, *args)
        prod = multiply(mu, *args)
        return (chi == prop.k and not W.contains(prod)) or (chi > prop.k and any(prod))
    raise UnknownProperty(prop.name)


# --------------------------------------------------------------------------
# shared machinery for the chain-quantified properties
# --------------------------------------------------------------------------


def _formal_vector(prefix: str, m: int) -> tuple:
    return tuple(MultiPoly.var(f"{prefix}_{r + 1}") for r in range(m))


def _random_vector(rng: random.Random, m: int, bound: int) -> tuple:
    return tuple(Fraction(rng.randint(-bound, bound)) for _ in range(m))


def chain_cases(m: int, n: int, p: Partition):
    """Pairs ``(k, psi)``: ``psi`` sends ``p_i`` positions to the ``i``-th
    chain vector (``p_k + 1`` to the last one) and the rest to ``e_1..e_m``.

    Chain vectors are encoded as indices ``m..m+k-1``.  Chains longer than
    ``p.length + 1`` only repeat shorter cases, and chains cannot exceed
    ``m``.
    """
    for k in range(1, min(m, p.length + 1) + 1):
        counts = {m + i: p[i] for i in range(k - 1)}
        counts[m + k - 1] = p[k - 1] + 1
        if sum(counts.values()) > n:
            continue
        for psi in maps_with_counts(n, m + k, counts, free=range(m)):
            yield k, psi


def _args_for(psi, chain, m: int) -> list:
    return [chain[v - m] if v >= m else unit_vector(v, m) for v in psi.values]


def _search_chain_certificate(mu, prop, k, psi, rng, tries):
    m = mu.m
    for attempt in range(tries):
        bound = 2 + attempt // 8
        chain = [_random_vector(rng, m, bound) for _ in range(k)]
        args = _args_for(psi, chain, m)
        cert = Certificate(args=tuple(args), chain=tuple(chain))
        if definitional_violation(mu, prop, cert):
            return cert
    return None


def _symbolic_failure(mu, case, attractive: bool) -> bool:
    k, psi = case
    m = mu.m
    chain = [_formal_vector(f"x{i + 1}", m) for i in range(k)]
    f = multiply(mu, *_args_for(psi, chain, m))
    if all(poly_is_zero(c) for c in f):
        return False
    if not attractive:
        return True
    rows = [list(v) for v in chain] + [list(f)]
    return any(not poly_is_zero(minor) for minor in poly_minors(rows, k + 1))


def _chain_property(mu: AlgebraStructure, p: Partition, attractive: bool, seed: int) -> PropertyVerdict:
    prop = Property.attractive(p) if attractive else Property.anticommutative(p)
    rng = random.Random(seed)
    cases = [
        c for c in chain_cases(mu.m, mu.n, p)
        # a chain of length m makes "lies in A_k" automatic
        if not (attractive and c[0] >= mu.m)
    ]
    if mu.is_zero():
        return PropertyVerdict(True, reason="zero structure")
    for case in cases:
        cert = _search_chain_certificate(mu, prop, *case, rng, QUICK_TRIES)
        if cert is not None:
            return PropertyVerdict(False, cert, reason=f"chain of length {case[0]}")
    for case in cases:
        if _symbolic_failure(mu, case, attractive):
            cert = _search_chain_certificate(mu, prop, *case, rng, CERTIFICATE_TRIES)
            return PropertyVerdict(False, cert, reason=f"identity fails for chain of length {case[0]}")
    return PropertyVerdict(True, reason="all identities vanish")


def is_p_anticommutative(mu: AlgebraStructure, p: Partition, *, seed: int = 0) -> PropertyVerdict:
    if p.weight != mu.n:
        raise WeightMismatch(f"partition {p} has weight {p.weight}, arity is {mu.n}")
    return _chain_property(mu, p, attractive=False, seed=seed)


def is_p_attractive(mu: AlgebraStructure, p: Partition, *, seed: int = 0) -> PropertyVerdict:
    if p.weight != mu.n - 1:
        raise WeightMismatch(f"partition {p} has weight {p.weight}, expected {mu.n - 1}")
    return _chain_property(mu, p, attractive=True, seed=seed)


# --------------------------------------------------------------------------
# subalgebraic structures
# --------------------------------------------------------------------------


def _growth_strings(n: int, k: int):
    """Surjections ``{0..n-1} -> {0..k-1}`` up to relabelling the targets."""

    def rec(prefix, top):
        if len(prefix) == n:
            if top == k:
                yield tuple(prefix)
            return
        if k - top > n - len(prefix):
            return
        for j in range(min(top + 1, k)):
            yield from rec(prefix + [j], max(top, j + 1))

    yield from rec([], 0)


def subalgebraic_cases(m: int, n: int):
    """Pairs ``(k, J)``: the product of ``c_J(1), ..., c_J(n)`` must lie in
    ``<c_1..c_k>`` for generic ``c``.  Expanding ``a_i = sum_j alpha_i^j c_j``
    splits the minor identities by monomials in ``alpha``; non-surjective
    ``J`` repeat smaller ``k``."""
    for k in range(1, min(n, m - 1) + 1):
        for J in _growth_strings(n, k):
            yield k, J


def is_subalgebraic(mu: AlgebraStructure, *, seed: int = 0) -> PropertyVerdict:
    m, n = mu.m, mu.n
    if mu.is_zero():
        return PropertyVerdict(True, reason="zero structure")
    rng = random.Random(seed)
    prop = Property.subalgebraic()
    cases = list(subalgebraic_cases(m, n))

    def search(k, J, tries):
        for attempt in range(tries):
            bound = 2 + attempt // 8
            cs = [_random_vector(rng, m, bound) for _ in range(k)]
            cert = Certificate(args=tuple(cs[j] for j in J))
            if definitional_violation(mu, prop, cert):
                return cert
        return None

    # basis tuples first: they give the most readable certificates
    for idx in product(range(m), repeat=n):
        cert = Certificate(args=tuple(unit_vector(i, m) for i in idx))
        if definitional_violation(mu, prop, cert):
            return PropertyVerdict(False, cert, reason="basis product leaves the span of its arguments")
    for k, J in cases:
        cert = search(k, J, QUICK_TRIES)
        if cert is not None:
            return PropertyVerdict(False, cert, reason=f"{k}-dimensional span")
    for k, J in cases:
        cs = [_formal_vector(f"c{j + 1}", m) for j in range(k)]
        f = multiply(mu, *[cs[j] for j in J])
        if all(poly_is_zero(x) for x in f):
            continue
        rows = [list(c) for c in cs] + [list(f)]
        if any(not poly_is_zero(minor) for minor in poly_minors(rows, k + 1)):
            return PropertyVerdict(False, search(k, J, CERTIFICATE_TRIES), reason=f"identity fails for k={k}")
    return PropertyVerdict(True, reason="all identities vanish")


# --------------------------------------------------------------------------
# k-subalgebras and algebras of n-linear forms
# --------------------------------------------------------------------------


def is_k_subalgebra(mu: AlgebraStructure, W: Subspace, k: int) -> PropertyVerdict:
    """Exact test on a basis of ``W`` extended by standard vectors.

    By multilinearity and density of the complement, the conditions only
    need checking on tuples of these basis vectors.
    """
    if W.m != mu.m:
        raise DimensionMismatch(f"subspace of Q^{W.m} in dimension {mu.m}")
    if not 1 <= k <= mu.n:
        raise ValueError(f"k must lie in 1..{mu.n}")
    m, n = mu.m, mu.n
    vecs = list(W.basis) + [unit_vector(i, m) for i in W.complement_indices()]
    inside = [True] * W.dim + [False] * (m - W.dim)
    for idx in product(range(m), repeat=n):
        c = sum(inside[i] for i in idx)
        if c < k:
            continue
        args = tuple(vecs[i] for i in idx)
        prod = multiply(mu, *args)
        if (c == k and not W.contains(prod)) or (c > k and any(prod)):
            return PropertyVerdict(False, Certificate(args=args, subspace=W), reason=f"{c} arguments in the subspace")
    return PropertyVerdict(True)


def form_decomposition(mu: AlgebraStructure):
    """Return a :class:`FormDecomposition` or ``None`` if ``mu`` is not the
    algebra of an n-linear form."""
    m, n = mu.m, mu.n
    span = Subspace(m, [v for _, v in mu.items()])
    if span.dim == 0:
        return FormDecomposition(a=unit_vector(0, m), complement=tuple(range(1, m)), values={})
    if span.dim > 1:
        return None
    w = span.basis[0]
    for s in range(n):
        for rest in product(range(m), repeat=n - 1):
            args = [unit_vector(i, m) for i in rest]
            args.insert(s, w)
            if any(multiply(mu, *args)):
                return None
    pivot = span.pivots[0]
    complement = span.complement_indices()
    values = {}
    for idx in product(range(len(complement)), repeat=n):
        c = mu.coefficient(tuple(complement[i] for i in idx), pivot)
        if c:
            values[idx] = c
    return FormDecomposition(a=w, complement=complement, values=values)


# --------------------------------------------------------------------------
# randomized definitional oracle
# --------------------------------------------------------------------------

SAMPLED_PROPERTIES = ("anticommutative", "attractive", "subalgebraic")


def _independent_vectors(rng, m: int, k: int, bound: int = 3):
    while True:
        vs = [_random_vector(rng, m, bound) for _ in range(k)]
        if Subspace(m, vs).dim == k:
            return vs


def _combo(rng, vectors, lead: int, bound: int = 3) -> tuple:
    """Random combination of ``vectors[:lead+1]`` with nonzero last coefficient."""
    coeffs = [rng.randint(-bound, bound) for _ in range(lead)]
    coeffs.append(rng.choice([c for c in range(-bound, bound + 1) if c]))
    m = len(vectors[0])
    return tuple(sum((c * v[r] for c, v in zip(coeffs, vectors)), Fraction(0)) for r in range(m))


def _sample_chain_trial(mu, p: Partition, rng):
    m, n = mu.m, mu.n
    k = rng.randint(1, m)
    prefix = p.partial_sum(k - 1)
    room = n - prefix - p[k - 1] - 1
    if room < 0:
        return None
    chain = _independent_vectors(rng, m, k)
    args = []
    for i in range(k - 1):
        args += [_combo(rng, chain, i) for _ in range(p[i])]
    extra = rng.randint(0, room)
    args += [_combo(rng, chain, k - 1) for _ in range(p[k - 1] + 1 + extra)]
    while len(args) < n:
        args.append(_random_vector(rng, m, 3))
    rng.shuffle(args)
    return Certificate(args=tuple(args), chain=tuple(chain))


def _sample_subalgebraic_trial(mu, rng):
    m, n = mu.m, mu.n
    d = rng.randint(1, min(n, m))
    basis = _independent_vectors(rng, m, d)
    args = []
    for _ in range(n):
        coeffs = [rng.randint(-3, 3) for _ in range(d)]
        args.append(tuple(sum((c * v[r] for c, v in zip(coeffs, basis)), Fraction(0)) for r in range(m)))
    return Certificate(args=tuple(args))


def sampled_check(mu: AlgebraStructure, prop: Property, trials: int = 100, seed: int = 0) -> PropertyVerdict:
    """Evaluate the raw definition on ``trials`` seeded random configurations.

    A violation is exact and final; a pass is only evidence.
    """
    if prop.name not in SAMPLED_PROPERTIES:
        raise UnknownProperty(f"no sampled oracle for {prop.name!r}")
    if trials < 1:
        raise ValueError("trials must be positive")
    if prop.name == "anticommutative" and prop.partition.weight != mu.n:
        raise WeightMismatch(f"partition {prop.partition} has weight {prop.partition.weight}")
    if prop.name == "attractive" and prop.partition.weight != mu.n - 1:
        raise WeightMismatch(f"partition {prop.partition} has weight {prop.partition.weight}")
    rng = random.Random(seed)
    for _ in range(trials):
        if prop.name == "subalgebraic":
            cert = _sample_subalgebraic_trial(mu, rng)
        else:
            cert = _sample_chain_trial(mu, prop.partition, rng)
        if cert is not None and definitional_violation(mu, prop, cert):
            return PropertyVerdict(False, cert, reason="sampled violation")
    return PropertyVerdict(True, reason=f"{trials} trials without violation")
