import itertools
import math

import numpy as np
import pytest

from coherence_forge.bounds import best_lower, exact_optimal_value
from coherence_forge.designs import bose_triples, paley_hadamard, steiner_pairs, sylvester_hadamard
from coherence_forge.errors import (
    CongruenceViolated,
    FeatureDisabled,
    InvalidETF,
    NoConstructionAvailable,
    NotEquiangular,
    OrderMismatch,
    UnsupportedDimension,
    UnsupportedK,
)
from coherence_forge.linalg import Field, factor_to_vectors, gram, numeric_rank
from coherence_forge.packings import (
    MubBattery,
    VectorSystem,
    construct_best,
    equiangular_system,
    kronecker_lift,
    lift_seed_from_lines,
    lift_seed_from_mubs,
    lift_seed_from_steiner,
    mub_battery,
    pad_gram,
    seed_catalog,
    sic_system,
    simplex_system,
    steiner_etf,
    steiner_pipeline,
)

R, C = Field.REAL, Field.COMPLEX


def _pairwise_abs(v: VectorSystem):
    return np.array([abs(np.vdot(v.vectors[:, i], v.vectors[:, j]))
                     for i, j in itertools.combinations(range(v.count), 2)])


def test_simplex_examples():
    s = simplex_system(1)
    assert s.count == 2
    assert gram(s.vectors)[0, 1] == pytest.approx(-1)
    s = simplex_system(2)
    g = s.gram()
    np.testing.assert_allclose(g[~np.eye(3, dtype=bool)], -0.5, atol=1e-10)
    assert simplex_system(40).coherence() == pytest.approx(0.025, abs=1e-10)


@pytest.mark.parametrize("k,n", [(2, 3), (3, 6), (7, 28)])
def test_equiangular_systems(k, n):
    v = equiangular_system(k)
    assert v.count == n and v.ambient_dim == k
    np.testing.assert_allclose(_pairwise_abs(v), 1 / math.sqrt(k + 2), atol=1e-9)
    np.testing.assert_allclose(v.frame_operator(), (n / k) * np.eye(k), atol=1e-8)


def test_equiangular_k7_against_brute_force():
    # <v_ij, v_kl> = (overlap - 1/2) / 1.5 on the original pair vectors
    pairs = list(itertools.combinations(range(8), 2))
    expected = np.array([abs((len(set(a) & set(b)) - 0.5) / 1.5)
                         for a, b in itertools.combinations(pairs, 2)])
    assert len(expected) == 378
    got = _pairwise_abs(equiangular_system(7))
    np.testing.assert_allclose(got, expected, atol=1e-9)
    np.testing.assert_allclose(expected, 1 / 3, atol=1e-15)


def test_equiangular_errors():
    with pytest.raises(UnsupportedK):
        equiangular_system(5)
    with pytest.raises(FeatureDisabled):
        equiangular_system(23)


@pytest.mark.parametrize("k,target", [(2, 1 / math.sqrt(3)), (3, 0.5)])
def test_sic_systems(k, target):
    v = sic_system(k)
    assert v.count == k * k
    np.testing.assert_allclose(_pairwise_abs(v), target, atol=1e-9)
    np.testing.assert_allclose(v.frame_operator(), k * np.eye(k), atol=1e-9)


def test_sic_unsupported():
    with pytest.raises(UnsupportedK):
        sic_system(5)


@pytest.mark.parametrize("field,k,ell", [(C, 2, 3), (C, 3, 4), (C, 5, 6), (C, 7, 8), (R, 4, 3)])
def test_mub_batteries(field, k, ell):
    m = mub_battery(field, k)
    assert m.ell == ell
    a = m.matrix()
    for b in m.bases:
        np.testing.assert_allclose(b.conj().T @ b, np.eye(k), atol=1e-9)
    for i, j in itertools.combinations(range(ell), 2):
        np.testing.assert_allclose(np.abs(m.bases[i].conj().T @ m.bases[j]), 1 / math.sqrt(k), atol=1e-9)
    np.testing.assert_allclose(a @ a.conj().T, ell * np.eye(k), atol=1e-9)


def test_real_mub_third_basis_entries():
    third = mub_battery(R, 4).bases[2]
    np.testing.assert_allclose(np.abs(third), 0.5)


def test_mub_errors():
    with pytest.raises(UnsupportedDimension):
        mub_battery(C, 6)
    with pytest.raises(UnsupportedDimension):
        mub_battery(R, 3)


def _check_etf(b, r, ell):
    bb = b.conj().T @ b
    np.testing.assert_allclose(np.diag(bb).real, r, atol=1e-9)
    off = np.abs(bb[~np.eye(bb.shape[0], dtype=bool)])
    np.testing.assert_allclose(off, 1, atol=1e-9)
    np.testing.assert_allclose(b @ b.conj().T, ell * (r + 1) * np.eye(b.shape[0]), atol=1e-9)


def test_steiner_etf_examples():
    b = steiner_etf(steiner_pairs(4), sylvester_hadamard(2))
    assert b.shape == (6, 16)
    _check_etf(b, 3, 2)
    b = steiner_etf(bose_triples(15), sylvester_hadamard(3))
    assert b.shape == (35, 120)
    _check_etf(b, 7, 3)
    b = steiner_etf(bose_triples(15), paley_hadamard(7))
    _check_etf(b, 7, 3)
    with pytest.raises(OrderMismatch):
        steiner_etf(bose_triples(15), sylvester_hadamard(2))


def test_seed_from_lines_examples():
    c, lam, mult = lift_seed_from_lines(equiangular_system(2))
    assert c.shape == (3, 3) and lam == pytest.approx(2) and mult == 2
    c, lam, mult = lift_seed_from_lines(equiangular_system(7))
    assert c.shape == (28, 28) and lam == pytest.approx(10) and mult == 7
    c, lam, mult = lift_seed_from_lines(sic_system(3))
    assert c.shape == (9, 9) and lam == pytest.approx(5) and mult == 3
    np.testing.assert_allclose(np.abs(c), 1, atol=1e-9)


def test_seed_from_lines_rejects_non_equiangular(rng):
    x = rng.normal(size=(3, 6))
    with pytest.raises(NotEquiangular):
        lift_seed_from_lines(VectorSystem(R, 3, x / np.linalg.norm(x, axis=0)))


def test_seed_from_mubs_examples():
    seed = lift_seed_from_mubs(mub_battery(C, 3))
    assert seed.lambda_max == pytest.approx(3 * math.sqrt(3) + 1, abs=1e-9) and seed.mult == 3
    seed = lift_seed_from_mubs(mub_battery(R, 4))
    assert seed.lambda_max == pytest.approx(5, abs=1e-9) and seed.mult == 4
    seed = lift_seed_from_mubs(mub_battery(C, 2))
    assert seed.lambda_max == pytest.approx(2 * math.sqrt(2) + 1, abs=1e-9) and seed.mult == 2


def test_seed_from_steiner_examples():
    seed = lift_seed_from_steiner(steiner_etf(steiner_pairs(4), sylvester_hadamard(2)), 3)
    assert seed.order == 16 and seed.lambda_max == pytest.approx(6, abs=1e-9) and seed.mult == 6
    seed = lift_seed_from_steiner(steiner_etf(bose_triples(15), sylvester_hadamard(3)), 7)
    assert seed.order == 120 and seed.lambda_max == pytest.approx(18, abs=1e-9) and seed.mult == 35
    with pytest.raises(InvalidETF):
        lift_seed_from_steiner(steiner_etf(steiner_pairs(4), sylvester_hadamard(2)), 2)


def test_kronecker_lift_examples():
    c, lam, mult = lift_seed_from_lines(equiangular_system(2))
    g = kronecker_lift(c, lam, mult, 4)
    assert g.gram.shape == (6, 6)
    assert g.coherence == pytest.approx(1 / 3, abs=1e-10)
    assert numeric_rank(g.gram) == 4

    c, lam, mult = lift_seed_from_lines(equiangular_system(7))
    g = kronecker_lift(c, lam, mult, 21)
    assert g.coherence == pytest.approx(1 / 9, abs=1e-10)
    assert numeric_rank(g.gram) == 21

    c, lam, mult = lift_seed_from_mubs(mub_battery(C, 3))
    g = kronecker_lift(c, lam, mult, 9)
    assert g.coherence == pytest.approx(1 / (3 * math.sqrt(3)), abs=1e-10)

    with pytest.raises(CongruenceViolated):
        kronecker_lift(c, lam, mult, 10)


def test_lift_identity_for_every_seed():
    for field, k in [(R, 2), (R, 3), (R, 4), (R, 6), (R, 7), (C, 2), (C, 3), (C, 5)]:
        for spec in seed_catalog(field, k):
            d = spec.order - k
            while d < 1:
                d += spec.order
            for dd in (d, d + spec.order):
                g = spec.build(dd, field)
                n, lam = spec.order, spec.lambda_max
                assert g.coherence * (lam * (dd + k) - n) == pytest.approx(n, abs=1e-8), spec.construction_id
                w = np.linalg.eigvalsh(g.gram)
                assert w.min() > -1e-9
                assert numeric_rank(g.gram) <= dd


def test_construct_best_examples():
    c = construct_best(R, 4, 2)
    assert c.construction_id == "equiangular-k2-lift" and c.is_exact
    assert c.coherence == pytest.approx(1 / 3, abs=1e-10)

    c = construct_best(C, 6, 3)
    assert c.construction_id == "sic-k3-lift" and c.is_exact
    assert c.coherence == pytest.approx(0.25, abs=1e-10)

    c = construct_best(R, 5, 2)
    assert c.construction_id == "equiangular-k2-lift+fallback-from-4"
    assert c.fallback_from == 4 and not c.is_exact
    assert c.coherence == pytest.approx(1 / 3, abs=1e-10)
    assert c.gram.gram.shape == (7, 7)
    g, cid, exact = c
    assert cid == c.construction_id and exact is False


def test_construct_best_no_construction():
    with pytest.raises(NoConstructionAvailable):
        construct_best(R, 1, 5)


def test_pad_gram_keeps_coherence():
    g = construct_best(R, 4, 2).gram
    p = pad_gram(g, 9)
    assert p.d == 9 and p.k == 2 and p.coherence == g.coherence
    assert numeric_rank(p.gram) <= 9


@pytest.mark.parametrize("field,k", [(R, 1), (R, 2), (R, 3), (R, 7), (C, 1), (C, 2), (C, 3)])
def test_equality_suite(field, k):
    # smallest three admissible d per equality case
    ds = [d for d in range(1, 200) if exact_optimal_value(field, d, k) is not None][:3]
    assert len(ds) == 3
    for d in ds:
        c = construct_best(field, d, k)
        assert c.is_exact
        assert c.coherence - exact_optimal_value(field, d, k) == pytest.approx(0, abs=1e-8)


@pytest.mark.parametrize("field", [R, C])
def test_constructed_grams_are_valid(field):
    for k in (1, 2, 3, 4, 6):
        for d in range(max(k, 2), 30):
            c = construct_best(field, d, k)
            a = c.gram.gram
            np.testing.assert_allclose(a, a.conj().T, atol=1e-12)
            np.testing.assert_allclose(np.diag(a), 1, atol=1e-12)
            assert np.linalg.eigvalsh(a).min() > -1e-9
            assert numeric_rank(a) <= d
            assert c.coherence >= best_lower(field, d, k).best_lower - 1e-9


@pytest.mark.parametrize("field,d,k", [(R, 4, 2), (R, 21, 7), (C, 6, 3), (R, 8, 4), (R, 10, 6), (C, 9, 3)])
def test_factor_roundtrip(field, d, k):
    g = construct_best(field, d, k).gram
    v = factor_to_vectors(g)
    assert v.shape == (d, d + k)
    np.testing.assert_allclose(np.linalg.norm(v, axis=0), 1, atol=1e-7)
    assert np.linalg.norm(gram(v) - g.gram) <= 1e-7


def test_steiner_pipeline_instance():
    inst = steiner_pipeline()
    assert inst.prime == 7
    assert inst.hadamard.order == 8
    assert (inst.steiner.n, inst.steiner.k, inst.steiner.r) == (15, 35, 7)
    assert inst.gram.d == 85 and inst.gram.k == 35
    assert inst.value == pytest.approx(1 / 17, abs=1e-12)
    assert inst.gram.coherence == pytest.approx(1 / 17, abs=1e-9)
