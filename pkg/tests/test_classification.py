import random
from fractions import Fraction

import pytest

from narylevel.classification import (
    FAMILY_BY_ID,
    Kind,
    Status,
    canonical_parameters,
    enumerate_level_one,
    identify_family,
    is_infinite_level_one,
    is_maximally_p_attractive_presentation,
    is_p_minimal_presentation,
    maxatt_system,
    pmin_system,
    recognize_level_one,
)
from narylevel.corpus import corpus, random_invertible
from narylevel.errors import ConstraintViolation, UnsupportedArity, ZeroTuple
from narylevel.properties import form_decomposition, is_subalgebraic
from narylevel.structures import AlgebraStructure, Partition, direct_sum_zero, gl_action

P = Partition.of


def test_pmin_system_examples():
    s = pmin_system(3, 3, P(2, 1))
    assert len(s.unknowns) == 3 and s.solution_dimension == 2
    assert s.is_solution((1, -1, 0)) and not s.is_solution((1, 1, 1))
    alt = pmin_system(3, 4, P(1, 1, 1))
    assert alt.solution_dimension == 1
    (v,) = alt.solution_basis()
    assert len(v) == 6 and sum(v) == 0 and len({abs(x) for x in v}) == 1
    s = pmin_system(2, 3, P(1, 1))
    assert s.solution_dimension == 1
    (v,) = s.solution_basis()
    assert v[0] == -v[1]


def test_maxatt_system_examples():
    s = maxatt_system(2, 3, P(1))
    assert s.solution_dimension == 2
    for mu in (FAMILY_BY_ID["nu"].instantiate(3, (Fraction(5, 2),)), FAMILY_BY_ID["p-"].instantiate(3)):
        assert s.is_solution(s.values_of(mu))
    s = maxatt_system(3, 3, P(2))
    assert s.is_solution(s.values_of(FAMILY_BY_ID["3.4"].instantiate(3, (1, 2, 0, -1))))
    assert s.is_solution(s.values_of(FAMILY_BY_ID["3.4"].instantiate(3, (0, 1, -1, 0))))
    assert not s.is_solution(s.values_of(FAMILY_BY_ID["3.4"].instantiate(3, (1, 1, 1, 1))))


def test_minimal_presentation_examples(fx):
    assert is_p_minimal_presentation(fx.n3, P(1, 1))
    sym = AlgebraStructure(2, 3, {(0, 1): {2: 1}, (1, 0): {2: 1}})
    assert not is_p_minimal_presentation(sym, P(1, 1))
    assert is_p_minimal_presentation(fx.A3, P(2))
    assert not is_p_minimal_presentation(fx.zero2, P(2))


def test_attractive_presentation_examples(fx):
    assert is_maximally_p_attractive_presentation(fx.pminus, P(1))
    assert is_maximally_p_attractive_presentation(fx.nu, P(1))
    assert is_maximally_p_attractive_presentation(fx.ex25, P(1, 1))
    assert not is_maximally_p_attractive_presentation(fx.A3, P(1))


def test_sum_nonzero_ternary_family_is_attractive():
    # Expected to fail per the table, but it solves the system; see the
    # ledger entry on the a1+a2+a3=0 constraint.
    mu = FAMILY_BY_ID["3.5"].instantiate(3, (1, 1, 1))
    assert is_maximally_p_attractive_presentation(mu, P(1, 1))
    r = recognize_level_one(mu)
    assert r.status is Status.LEVEL_ONE and r.kind is Kind.MAX_ATTRACTIVE
    assert r.match is None and "no family" in r.reason


def test_recognizer_examples(fx):
    r = recognize_level_one(fx.n3)
    assert (r.status, r.kind, r.partition) == (Status.LEVEL_ONE, Kind.FORM_MINIMAL, P(1, 1))
    assert r.match.family == "n3"
    assert recognize_level_one(fx.zero2).status is Status.LEVEL_ZERO
    assert recognize_level_one(fx.square).status is Status.NOT_LEVEL_ONE


def test_recognizer_matches_transformed_families():
    rng = random.Random(4)
    for fid, m, q in (("nu", 3, P(1)), ("3.4", 3, P(2)), ("3.2", 3, P(2, 1)), ("A3", 2, P(2))):
        mu = gl_action(random_invertible(rng, m), FAMILY_BY_ID[fid].instantiate(m))
        r = recognize_level_one(mu)
        assert r.status is Status.LEVEL_ONE and r.partition == q
        assert r.match.family == fid


def test_adding_a_zero_line(fx):
    # forms stay minimal; attractive algebras stop being subalgebraic
    assert recognize_level_one(direct_sum_zero(fx.A3, 1)).status is Status.LEVEL_ONE
    assert recognize_level_one(direct_sum_zero(fx.nu, 1)).status is Status.NOT_LEVEL_ONE


def test_infinite_level_one_examples(fx):
    assert is_infinite_level_one(fx.n3)
    assert not is_infinite_level_one(fx.nu)
    assert not is_infinite_level_one(fx.zero2)


def test_enumerate_examples():
    ids = lambda n, m: sorted(e.family for e in enumerate_level_one(n, m))  # noqa: E731
    assert ids(2, 3) == sorted(["A3", "n3", "p-", "nu"])
    assert ids(3, 4) == sorted(["3.1", "3.2", "3.3", "3.4", "3.5"])
    assert ids(2, 2) == sorted(["A3", "p-", "nu"])
    assert ids(2, 1) == ["nu"]
    with pytest.raises(UnsupportedArity):
        enumerate_level_one(4, 3)


@pytest.mark.parametrize("n,m", [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (3, 3), (3, 4)])
def test_representatives_are_recognized(n, m):
    for entry in enumerate_level_one(n, m):
        r = recognize_level_one(entry.representative)
        assert r.status is Status.LEVEL_ONE
        assert (r.kind, r.partition) == (entry.kind, entry.partition)
        assert r.match is not None and r.match.family == entry.family


def test_canonical_parameters_examples():
    assert canonical_parameters("3.2", 3, 3, (2, -2, 0)) == (1, -1, 0)
    assert canonical_parameters("3.4", 3, 3, (1, 2, 0, -1)) == (1, 2, 0, -1)
    with pytest.raises(ZeroTuple):
        canonical_parameters("3.2", 3, 3, (0, 0, 0))
    with pytest.raises(ConstraintViolation):
        canonical_parameters("3.2", 3, 3, (1, 1, 0))


def test_canonical_parameters_at_m2_subtract_the_mean():
    a = canonical_parameters("3.5", 3, 2, (3, 1, 2))
    assert a == canonical_parameters("3.5", 3, 2, (2, 0, 1))
    assert a == canonical_parameters("3.5", 3, 2, (-2, 2, 0))
    assert sum(a) == 0 and a[0] == 1


def test_identify_family_recovers_scale():
    mu = FAMILY_BY_ID["3.3"].instantiate(4, scale=Fraction(-3, 2))
    match = identify_family(mu, Kind.FORM_MINIMAL, P(1, 1, 1))
    assert match.family == "3.3" and match.scale == Fraction(-3, 2)


@pytest.mark.parametrize("n,m", [(2, 3), (3, 2), (3, 3)])
def test_recognizer_is_scalar_invariant(n, m):
    for mu in corpus(21, n, m, 12):
        base = recognize_level_one(mu)
        for c in (Fraction(-2), Fraction(1, 3)):
            r = recognize_level_one(mu.scaled(c))
            assert (r.status, r.kind, r.partition) == (base.status, base.kind, base.partition)


@pytest.mark.parametrize("n,m", [(2, 3), (3, 3)])
def test_kinds_are_exclusive(n, m):
    for mu in corpus(22, n, m, 30):
        if mu.is_zero():
            continue
        fd = form_decomposition(mu)
        assert not (fd is not None and is_subalgebraic(mu))
