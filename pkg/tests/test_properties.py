import random

import pytest

from narylevel.corpus import corpus, random_invertible
from narylevel.properties import (
    Certificate,
    Property,
    definitional_violation,
    form_decomposition,
    is_k_subalgebra,
    is_p_anticommutative,
    is_p_attractive,
    is_subalgebraic,
    sampled_check,
)
from narylevel.structures import AlgebraStructure, Partition, Subspace, gl_action

P = Partition.of
E1 = Subspace.coordinate(2, [0])


def test_k_subalgebra_examples(fx):
    assert is_k_subalgebra(fx.nu, E1, 2)
    assert is_k_subalgebra(fx.zero2, E1, 2)
    assert is_k_subalgebra(fx.zero3, Subspace.coordinate(3, [1, 2]), 1)
    verdict = is_k_subalgebra(fx.A3, E1, 2)
    assert not verdict
    assert verdict.certificate.args == ((1, 0), (1, 0))
    assert definitional_violation(fx.A3, Property.k_subalgebra(E1, 2), verdict.certificate)


def test_anticommutative_examples(fx):
    assert is_p_anticommutative(fx.n3, P(1, 1))
    assert is_p_anticommutative(fx.zero3, P(2, 1))
    verdict = is_p_anticommutative(fx.A3, P(1, 1))
    assert not verdict
    assert definitional_violation(fx.A3, Property.anticommutative(P(1, 1)), verdict.certificate)


def test_anticommutative_top_partition_is_trivial(fx):
    # with p = (n) no argument tuple can exceed the chain
    for mu in (fx.A3, fx.square, fx.ex24):
        assert is_p_anticommutative(mu, P(mu.n))


def test_attractive_examples(fx):
    assert is_p_attractive(fx.nu, P(1))
    assert is_p_attractive(fx.pminus, P(1))
    assert is_p_attractive(fx.zero3, P(2))
    verdict = is_p_attractive(fx.A3, P(1))
    assert not verdict
    assert definitional_violation(fx.A3, Property.attractive(P(1)), verdict.certificate)


def test_subalgebraic_examples(fx):
    assert is_subalgebraic(fx.nu)
    assert is_subalgebraic(fx.zero2)
    assert is_subalgebraic(fx.ex25)
    verdict = is_subalgebraic(fx.A3)
    assert not verdict
    assert definitional_violation(fx.A3, Property.subalgebraic(), verdict.certificate)
    assert not is_subalgebraic(fx.square)


def test_form_decomposition_examples(fx):
    fd = form_decomposition(fx.A3)
    assert tuple(fd.a) == (0, 1)
    assert fd.values == {(0, 0): 1}
    assert fd.is_nonzero
    zero = form_decomposition(fx.zero2)
    assert zero is not None and not zero.is_nonzero
    assert sum(1 for x in zero.a if x) == 1
    assert form_decomposition(fx.nu) is None
    assert form_decomposition(fx.n3).is_nonzero


def test_sampled_examples(fx):
    assert sampled_check(fx.n3, Property.anticommutative(P(1, 1)), 100, seed=0)
    for prop in (Property.anticommutative(P(1, 1)), Property.attractive(P(1)), Property.subalgebraic()):
        assert sampled_check(fx.zero2, prop, 20, seed=3)
    verdict = sampled_check(fx.A3, Property.anticommutative(P(1, 1)), 100, seed=0)
    assert not verdict
    assert definitional_violation(fx.A3, Property.anticommutative(P(1, 1)), verdict.certificate)


def test_sampled_check_is_deterministic(fx):
    prop = Property.subalgebraic()
    assert sampled_check(fx.square, prop, 50, seed=7) == sampled_check(fx.square, prop, 50, seed=7)


def test_bogus_certificate_is_not_a_violation(fx):
    cert = Certificate(args=((1, 0), (0, 1)))
    assert not definitional_violation(fx.nu, Property.subalgebraic(), cert)
    # wrong arity never counts
    assert not definitional_violation(fx.A3, Property.subalgebraic(), Certificate(args=((1, 0),)))


def _checks(n):
    yield Property.subalgebraic(), lambda mu: is_subalgebraic(mu)
    if n == 2:
        parts = [P(2), P(1, 1)], [P(1)]
    else:
        parts = [P(3), P(2, 1), P(1, 1, 1)], [P(2), P(1, 1)]
    for p in parts[0]:
        yield Property.anticommutative(p), lambda mu, p=p: is_p_anticommutative(mu, p)
    for p in parts[1]:
        yield Property.attractive(p), lambda mu, p=p: is_p_attractive(mu, p)


@pytest.mark.parametrize("n,m", [(2, 2), (2, 3), (3, 2), (3, 3)])
def test_certificates_reevaluate(n, m):
    for mu in corpus(11, n, m, 15):
        for prop, check in _checks(n):
            verdict = check(mu)
            if not verdict:
                assert verdict.certificate is not None
                assert definitional_violation(mu, prop, verdict.certificate)


@pytest.mark.parametrize("n,m", [(2, 3), (3, 3)])
def test_properties_are_basis_invariant(n, m):
    rng = random.Random(n * 10 + m)
    for mu in corpus(12, n, m, 12):
        g = random_invertible(rng, m)
        nu = gl_action(g, mu)
        for _, check in _checks(n):
            assert bool(check(mu)) == bool(check(nu))


@pytest.mark.parametrize("n,m", [(2, 3), (3, 3)])
def test_attractive_implies_subalgebraic(n, m):
    top = P(n - 1)
    for mu in corpus(13, n, m, 30):
        if is_p_attractive(mu, top):
            assert is_subalgebraic(mu)


def test_anticommutative_is_monotone_in_the_order(fx):
    # a smaller partition admits more chains, so the condition only gets stronger
    for mu in (fx.n3, fx.A3, fx.ex21, fx.ex24, fx.ex25, fx.ex23):
        parts = [P(3), P(2, 1), P(1, 1, 1)] if mu.n == 3 else [P(2), P(1, 1)]
        holds = [bool(is_p_anticommutative(mu, p)) for p in parts]
        assert holds == sorted(holds, reverse=True)


def test_form_and_subalgebraic_are_disjoint_on_nonzero(fx):
    for mu in list(corpus(14, 2, 3, 40)) + [fx.A3, fx.n3, fx.nu, fx.ex21, fx.ex25]:
        fd = form_decomposition(mu)
        if fd is not None and fd.is_nonzero:
            assert not is_subalgebraic(mu)


def test_structure_with_only_output_on_line_is_form():
    mu = AlgebraStructure(2, 3, {(0, 0): {2: 1}, (0, 1): {2: 1}})
    fd = form_decomposition(mu)
    assert fd.complement == (0, 1)
    assert fd.values == {(0, 0): 1, (0, 1): 1}
