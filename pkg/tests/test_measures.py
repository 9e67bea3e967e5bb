import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from coherence_forge.bounds import alpha
from coherence_forge.errors import DegenerateSupport, EmptySupport, NotIsotropic
from coherence_forge.linalg import Field
from coherence_forge.measures import (
    FiniteMeasure,
    first_moment,
    in_uniform_class,
    is_isotropic,
    iso_bound_check,
    lone_estimate,
    lone_ratio,
    lone_witness,
    second_moment,
    whiten,
)
from coherence_forge.packings import equiangular_system, sic_system

from conftest import random_unit_vectors

R, C = Field.REAL, Field.COMPLEX


def three_lines():
    return FiniteMeasure.uniform(equiangular_system(2).vectors, R)


def test_measure_validation():
    with pytest.raises(ValueError):
        FiniteMeasure(R, 2, np.eye(2), [0.5, 0.4])
    with pytest.raises(ValueError):
        FiniteMeasure(R, 2, np.eye(2), [1.0])
    with pytest.raises(ValueError):
        FiniteMeasure(R, 3, np.eye(2), [0.5, 0.5])


def test_second_moment_examples():
    np.testing.assert_allclose(second_moment(FiniteMeasure.uniform(np.eye(2))), np.eye(2) / 2)
    np.testing.assert_allclose(second_moment(three_lines()), np.eye(2) / 2, atol=1e-15)
    point = FiniteMeasure(R, 2, np.array([[1.0], [0.0]]), [1.0])
    np.testing.assert_allclose(second_moment(point), np.diag([1.0, 0.0]))
    assert not is_isotropic(point)
    assert is_isotropic(three_lines())


def test_whiten_examples():
    q, iso = whiten(three_lines())
    np.testing.assert_allclose(q, np.eye(2), atol=1e-8)
    mu = FiniteMeasure.uniform(np.array([[2.0, 0.0], [0.0, 1.0]]))
    q, iso = whiten(mu)
    np.testing.assert_allclose(second_moment(iso), np.eye(2) / 2, atol=1e-8)
    np.testing.assert_allclose(q, np.diag([0.5, 1.0]), atol=1e-12)
    np.testing.assert_array_equal(iso.weights, mu.weights)
    with pytest.raises(DegenerateSupport):
        whiten(FiniteMeasure.uniform(np.array([[1.0, 2.0], [0.0, 0.0]])))


def test_first_moment_examples():
    assert first_moment(three_lines()) == pytest.approx(2 / 3, abs=1e-12)
    sic2 = FiniteMeasure.uniform(sic_system(2).vectors)
    assert first_moment(sic2) == pytest.approx((math.sqrt(3) + 1) / 4, abs=1e-12)
    sic3 = FiniteMeasure.uniform(sic_system(3).vectors)
    assert first_moment(sic3) == pytest.approx(5 / 9, abs=1e-12)
    assert first_moment(FiniteMeasure(R, 3, np.array([[0.0], [1.0], [0.0]]), [1.0])) == 1


def test_iso_bound_check_examples(rng):
    value, bound, ok, extremal = iso_bound_check(three_lines())
    assert ok and extremal and bound == pytest.approx(2 / 3)
    check = iso_bound_check(FiniteMeasure.uniform(np.eye(2)))
    assert check.value == pytest.approx(0.5) and check.ok and not check.extremal
    _, iso = whiten(FiniteMeasure.uniform(random_unit_vectors(rng, 2, 50)))
    check = iso_bound_check(iso)
    assert check.ok and not check.extremal
    with pytest.raises(NotIsotropic):
        iso_bound_check(FiniteMeasure.uniform(np.array([[2.0, 0.0], [0.0, 1.0]])))


@pytest.mark.parametrize("field,k", [(R, 2), (R, 3), (R, 4), (C, 2), (C, 3)])
def test_first_moment_sweep(rng, field, k):
    for _ in range(100):
        m = int(rng.integers(k, 3 * k + 8))
        x = random_unit_vectors(rng, k, m, field is C)
        w = rng.random(m)
        w /= w.sum()
        _, iso = whiten(FiniteMeasure(field, k, x, w))
        assert first_moment(iso) <= alpha(field, k) + 1e-9


def test_first_moment_diagonal_lower_bound(rng):
    for _ in range(50):
        x = random_unit_vectors(rng, 3, 7)
        w = rng.random(7)
        w /= w.sum()
        assert first_moment(FiniteMeasure(R, 3, x, w)) >= np.sum(w**2) - 1e-15
    mu = FiniteMeasure(R, 3, np.eye(3), [0.2, 0.3, 0.5])
    assert first_moment(mu) == pytest.approx(0.04 + 0.09 + 0.25, abs=1e-15)


def test_uniform_class():
    mu = FiniteMeasure.uniform(np.hstack([np.eye(2), np.eye(2)[:, :1]]))
    assert in_uniform_class(mu, 1)
    assert not in_uniform_class(mu, 2)
    assert not in_uniform_class(FiniteMeasure.uniform(np.array([[1.0, 1.0], [0.0, 0.0]])), 0)


def test_lone_examples():
    assert lone_estimate(three_lines(), grid=3600) == pytest.approx(2 / 3, abs=1e-3)
    point = FiniteMeasure(R, 2, np.array([[1.0], [0.0]]), [1.0])
    assert lone_estimate(point) == pytest.approx(1.0, abs=1e-12)
    basis = FiniteMeasure.uniform(np.eye(2))
    assert lone_ratio(basis, [1.0, 0.0], [1.0, 0.0]) == pytest.approx(0.5)
    assert lone_estimate(basis) <= 0.5 + 1e-12
    with pytest.raises(EmptySupport):
        lone_witness(FiniteMeasure(R, 2, np.zeros((2, 1)), [1.0]))


def test_lone_witness_is_consistent():
    est = lone_witness(three_lines(), grid=360)
    assert est.value == pytest.approx(lone_ratio(three_lines(), est.v, est.y), abs=1e-15)
    assert est.candidates == 3 + 360


def test_lone_deterministic_given_seed(rng):
    mu = FiniteMeasure.uniform(random_unit_vectors(rng, 3, 8, complex_=True))
    a = lone_witness(mu, restarts=16, seed=5)
    b = lone_witness(mu, restarts=16, seed=5)
    assert a.value == b.value
    np.testing.assert_array_equal(a.v, b.v)


def test_lone_seed_env(monkeypatch, rng):
    mu = FiniteMeasure.uniform(random_unit_vectors(rng, 3, 8))
    monkeypatch.setenv("COHERENCE_FORGE_SEED", "11")
    a = lone_witness(mu, restarts=8)
    b = lone_witness(mu, restarts=8, seed=11)
    assert a.value == b.value


def test_lone_not_above_candidate_minimum(rng):
    for _ in range(10):
        mu = FiniteMeasure.uniform(random_unit_vectors(rng, 3, 6))
        est = lone_witness(mu, restarts=12, seed=3)
        sup = mu.support()
        direct = min(
            lone_ratio(mu, v, sup[:, j])
            for v in sup.T
            for j in range(sup.shape[1])
            if abs(v @ sup[:, j]) > 0
        )
        assert est.value <= direct + 1e-12


def test_lone_below_two_thirds_on_uniform_class(rng):
    for _ in range(20):
        d = int(rng.integers(1, 6))
        x = random_unit_vectors(rng, 2, d + 2)
        mu = FiniteMeasure.uniform(x)
        assert in_uniform_class(mu, d)
        assert lone_estimate(mu, grid=720) <= 2 / 3 + 1e-3


def test_gl_invariance_matched_pair(rng):
    for trial in range(100):
        cx = bool(trial % 2)
        k = int(rng.integers(2, 5))
        x = random_unit_vectors(rng, k, k + 3, cx)
        mu = FiniteMeasure.uniform(x, C if cx else R)
        q = rng.normal(size=(k, k)) + (1j * rng.normal(size=(k, k)) if cx else 0)
        v = rng.normal(size=k) + (1j * rng.normal(size=k) if cx else 0)
        y = x[:, 0]
        lhs = lone_ratio(mu.mapped(q), v, q @ y)
        rhs = lone_ratio(mu, q.conj().T @ v, y)
        assert lhs == pytest.approx(rhs, rel=1e-9)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.floats(0.01, 1.0), min_size=3, max_size=8), st.integers(0, 2**32 - 1))
def test_json_roundtrip(ws, seed):
    rng = np.random.default_rng(seed)
    w = np.array(ws) / sum(ws)
    x = random_unit_vectors(rng, 2, len(ws), complex_=seed % 2 == 1)
    mu = FiniteMeasure(C if seed % 2 else R, 2, x, w)
    back = FiniteMeasure.from_json(mu.to_json())
    assert back.field is mu.field
    np.testing.assert_array_equal(back.points, mu.points)
    np.testing.assert_allclose(back.weights, mu.weights, rtol=0, atol=0)
