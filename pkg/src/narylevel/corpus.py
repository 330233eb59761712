"""Seeded random corpora and the cross-module invariant runner.

Everything here is driven by a single integer seed: the same seed and sizes
give the same structures and the same report, item for item.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from .classification import (
    FAMILIES,
    Kind,
    is_maximally_p_attractive_presentation,
    is_p_minimal_presentation,
    maxatt_system,
    pmin_system,
    presentation_partition,
)
from .degeneration import (
    form_to_minimal,
    iw_postconditions,
    subalgebraic_to_max_attractive,
)
from .errors import NaryError
from .properties import (
    Property,
    form_decomposition,
    is_p_anticommutative,
    is_p_attractive,
    is_subalgebraic,
    sampled_check,
)
from .scalars import RatMatrix
from .structures import AlgebraStructure, enumerate_partitions, gl_action

__all__ = [
    "DEFAULT_SIZES",
    "SelfcheckReport",
    "corpus",
    "form_corpus",
    "oracle_properties",
    "random_form_algebra",
    "random_invertible",
    "random_sparse_structure",
    "random_subalgebraic",
    "random_upper_triangular",
    "selfcheck",
    "symbolic_check",
]

DEFAULT_SIZES = ((2, 3, 200), (3, 3, 200))


def _nonzero(rng: random.Random, bound: int) -> int:
    return rng.choice([c for c in range(-bound, bound + 1) if c])


def random_invertible(rng: random.Random, m: int, bound: int = 2) -> RatMatrix:
    while True:
        g = RatMatrix([[rng.randint(-bound, bound) for _ in range(m)] for _ in range(m)])
        if g.is_invertible():
            return g


def random_upper_triangular(rng: random.Random, m: int, bound: int = 3) -> RatMatrix:
    return RatMatrix(
        [[(_nonzero(rng, bound) if i == j else rng.randint(-bound, bound)) if j >= i else 0 for j in range(m)]
         for i in range(m)]
    )


def random_sparse_structure(rng: random.Random, n: int, m: int, terms: int | None = None, bound: int = 2):
    """A handful of random constants with small integer values."""
    terms = rng.randint(1, 4) if terms is None else terms
    data: dict = {}
    for _ in range(terms):
        idx = tuple(rng.randrange(m) for _ in range(n))
        data.setdefault(idx, {})[rng.randrange(m)] = _nonzero(rng, bound)
    return AlgebraStructure(n, m, data)


def random_form_algebra(rng: random.Random, n: int, m: int, bound: int = 2, *, mix: bool = True):
    """Nonzero algebra of an ``n``-linear form, moved by a random basis change.

    Before the change of basis the line is ``<e_m>`` and the form lives on
    ``e_1..e_{m-1}``.
    """
    if m < 2:
        raise ValueError("a nonzero form algebra needs m >= 2")
    while True:
        data = {}
        for idx in product(range(m - 1), repeat=n):
            if rng.random() < 0.3:
                data[idx] = {m - 1: rng.randint(-bound, bound)}
        mu = AlgebraStructure(n, m, data)
        if not mu.is_zero():
            break
    return gl_action(random_invertible(rng, m), mu) if mix else mu


def random_subalgebraic(rng: random.Random, n: int, m: int, bound: int = 2, density: float = 0.3):
    """``[x_1..x_n] = sum_i c_i(x_1..x_n without x_i) x_i`` with random sparse
    forms ``c_i``; every such structure is subalgebraic."""
    while True:
        data: dict = {}
        for idx in product(range(m), repeat=n):
            for pos in range(n):
                if rng.random() < density / n:
                    row = data.setdefault(idx, {})
                    row[idx[pos]] = row.get(idx[pos], 0) + rng.randint(-bound, bound)
        mu = AlgebraStructure(n, m, data)
        if not mu.is_zero():
            return mu


def _random_system_solution(rng: random.Random, n: int, m: int):
    """Random member of a solution space of one of the two linear systems."""
    systems = []
    for p in enumerate_partitions(n, max_parts=m - 1):
        systems.append(pmin_system(n, m, p))
    for p in enumerate_partitions(n - 1, max_parts=m):
        systems.append(maxatt_system(n, m, p))
    while True:
        system = rng.choice(systems)
        basis = system.solution_basis()
        if not basis:
            continue
        coeffs = [rng.randint(-2, 2) for _ in basis]
        values = [sum((c * v[i] for c, v in zip(coeffs, basis)), Fraction(0)) for i in range(len(basis[0]))]
        mu = system.instantiate(values)
        if not mu.is_zero():
            return mu


def form_corpus(seed: int, n: int, m: int, count: int) -> list[AlgebraStructure]:
    """Nonzero form algebras: generic random forms alternate with basis
    changes of random minimal presentations, so every partition shows up."""
    rng = random.Random(f"forms:{seed}:{n}:{m}")
    systems = [pmin_system(n, m, p) for p in enumerate_partitions(n, max_parts=m - 1)]
    out = []
    for i in range(count):
        if i % 2 == 0:
            out.append(random_form_algebra(rng, n, m))
            continue
        system = systems[(i // 2) % len(systems)]
        basis = system.solution_basis()
        while True:
            coeffs = [rng.randint(-2, 2) for _ in basis]
            values = [sum((c * v[r] for c, v in zip(coeffs, basis)), Fraction(0)) for r in range(len(basis[0]))]
            mu = system.instantiate(values)
            if not mu.is_zero():
                break
        out.append(gl_action(random_invertible(rng, m), mu))
    return out


def _corpus_item(rng: random.Random, n: int, m: int) -> AlgebraStructure:
    kind = rng.randrange(6)
    if kind == 0:
        return random_sparse_structure(rng, n, m)
    if kind == 1 and m >= 2:
        return random_form_algebra(rng, n, m)
    if kind == 2:
        return gl_action(random_invertible(rng, m), random_subalgebraic(rng, n, m))
    if kind == 3:
        return gl_action(random_invertible(rng, m), _random_system_solution(rng, n, m))
    if kind == 4:
        fams = [f for f in FAMILIES if f.n == n and f.min_m <= m]
        mu = rng.choice(fams).instantiate(m)
        return gl_action(random_invertible(rng, m), mu.scaled(_nonzero(rng, 3)))
    # a level-one structure with one stray constant
    base = _random_system_solution(rng, n, m)
    return base + random_sparse_structure(rng, n, m, terms=1)


def corpus(seed: int, n: int, m: int, count: int) -> list[AlgebraStructure]:
    """``count`` structures mixing pure noise with structured families."""
    rng = random.Random(f"corpus:{seed}:{n}:{m}")
    return [_corpus_item(rng, n, m) for _ in range(count)]


def oracle_properties(n: int) -> list[Property]:
    props = [Property.anticommutative(p) for p in enumerate_partitions(n)]
    props += [Property.attractive(p) for p in enumerate_partitions(n - 1)]
    props.append(Property.subalgebraic())
    return props


def symbolic_check(mu: AlgebraStructure, prop: Property, seed: int = 0):
    if prop.name == "anticommutative":
        return is_p_anticommutative(mu, prop.partition, seed=seed)
    if prop.name == "attractive":
        return is_p_attractive(mu, prop.partition, seed=seed)
    return is_subalgebraic(mu, seed=seed)


# --------------------------------------------------------------------------
# the runner
# --------------------------------------------------------------------------


@dataclass
class SelfcheckReport:
    seed: int
    structures: int = 0
    oracle_checks: int = 0
    oracle_disagreements: int = 0
    action_checks: int = 0
    action_failures: int = 0
    disjointness_failures: int = 0
    pipeline_runs: int = 0
    pipeline_failures: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not (
            self.oracle_disagreements or self.action_failures or self.disjointness_failures or self.pipeline_failures
        )

    def render(self) -> str:
        lines = [
            f"seed {self.seed}: {self.structures} structures",
            f"oracle agreement: {self.oracle_checks} checks, {self.oracle_disagreements} disagreements",
            f"action laws: {self.action_checks} checks, {self.action_failures} failures",
            f"disjointness: {self.disjointness_failures} failures",
            f"pipelines: {self.pipeline_runs} runs, {self.pipeline_failures} failures",
        ]
        lines += [f"  {msg}" for msg in self.failures]
        lines.append("OK" if self.ok else "FAILED")
        return "\n".join(lines) + "\n"


def _check_pipelines(mu: AlgebraStructure, seed: int, report: SelfcheckReport, tag: str, subalgebraic: bool):
    fd = form_decomposition(mu)
    try:
        if fd is not None and fd.is_nonzero:
            report.pipeline_runs += 1
            w = form_to_minimal(mu, seed=seed)
            p = presentation_partition(w.target, Kind.FORM_MINIMAL)
            if not (w.verify() and is_p_minimal_presentation(w.target, p).holds):
                report.pipeline_failures += 1
                report.failures.append(f"{tag}: form_to_minimal target rejected")
        elif subalgebraic and not mu.is_zero():
            report.pipeline_runs += 1
            p, chain = subalgebraic_to_max_attractive(mu, seed=seed)
            bad = [
                msg
                for s, w in enumerate(chain[1:], start=1)
                for msg in iw_postconditions(w.source, w.target, s, p.partial_sum(s) + 1)
            ]
            if bad or not is_maximally_p_attractive_presentation(chain[-1].target, p).holds:
                report.pipeline_failures += 1
                report.failures.append(f"{tag}: attractive chain rejected {bad}")
    except NaryError as exc:
        report.pipeline_failures += 1
        report.failures.append(f"{tag}: {type(exc).__name__}: {exc}")


def selfcheck(seed: int = 0, sizes=DEFAULT_SIZES, trials: int = 100, pipelines: bool = True) -> SelfcheckReport:
    """Run oracle agreement, action laws, disjointness and pipeline
    postconditions on seeded corpora; ``sizes`` lists ``(n, m, count)``."""
    report = SelfcheckReport(seed)
    for n, m, count in sizes:
        rng = random.Random(f"actions:{seed}:{n}:{m}")
        props = oracle_properties(n)
        for item, mu in enumerate(corpus(seed, n, m, count)):
            tag = f"(n={n}, m={m}) item {item}"
            report.structures += 1
            sub = None
            for prop in props:
                report.oracle_checks += 1
                sym = symbolic_check(mu, prop, seed=seed).holds
                sampled = sampled_check(mu, prop, trials=trials, seed=seed + item).holds
                if sym and not sampled:
                    report.oracle_disagreements += 1
                    report.failures.append(f"{tag}: {prop.name} {prop.partition or ''} sampled violation")
                if prop.name == "subalgebraic":
                    sub = sym
            g, h = random_invertible(rng, m), random_invertible(rng, m)
            report.action_checks += 2
            if gl_action(g, gl_action(h, mu)) != gl_action(g @ h, mu):
                report.action_failures += 1
                report.failures.append(f"{tag}: composition law fails")
            if gl_action(RatMatrix.identity(m), mu) != mu:
                report.action_failures += 1
                report.failures.append(f"{tag}: identity acts nontrivially")
            fd = form_decomposition(mu)
            if fd is not None and sub and not mu.is_zero():
                report.disjointness_failures += 1
                report.failures.append(f"{tag}: nonzero structure is both a form algebra and subalgebraic")
            if pipelines:
                _check_pipelines(mu, seed, report, tag, bool(sub))
    return report

