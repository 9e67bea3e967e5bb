"""Vector systems with small coherence and the Kronecker lift.

A *lift seed* is a Hermitian matrix ``C`` with unit diagonal and
off-diagonal entries of modulus at most 1 whose top eigenvalue ``lambda``
has multiplicity ``k``.  For every ``d`` with ``d + k = b n`` (``n`` the
order of ``C``) the matrix ``(1 + eps) I - eps (C kron J_b)``,
``eps = 1/(b lambda - 1)``, is the Gram matrix of ``d + k`` unit vectors in
``H^d`` with coherence ``n / (lambda (d + k) - n)``.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np

from . import bounds
from .designs import (
    HadamardMatrix,
    SteinerSystem,
    bose_triples,
    hadamard,
    is_prime,
    paley_hadamard,
    primes_in_progression,
    seidel_276,
    steiner_pairs,
    sylvester_hadamard,
)
from .errors import (
    CongruenceViolated,
    FeatureDisabled,
    InvalidBattery,
    InvalidETF,
    NoConstructionAvailable,
    NotEquiangular,
    OrderMismatch,
    SeedSpectrumMismatch,
    UnsupportedDimension,
    UnsupportedK,
)
from .linalg import Field, GramSystem, as_field, coherence, factor_to_vectors, gram, hermitian_eig

LAMBDA_TOL = 1e-7


@dataclass(frozen=True)
class VectorSystem:
    field: Field
    ambient_dim: int
    vectors: np.ndarray

    def __post_init__(self):
        v = as_field(self.vectors, self.field)
        if v.ndim != 2 or v.shape[0] != self.ambient_dim:
            raise ValueError(f"vectors must be {self.ambient_dim} x m, got {v.shape}")
        norms = np.linalg.norm(v, axis=0)
        if v.shape[1] and np.abs(norms - 1).max() > 1e-10:
            raise ValueError("vectors must have unit norm")
        v.setflags(write=False)
        object.__setattr__(self, "vectors", v)

    @property
    def count(self) -> int:
        return self.vectors.shape[1]

    def gram(self) -> np.ndarray:
        return gram(self.vectors)

    def coherence(self) -> float:
        return coherence(self.gram())

    def frame_operator(self) -> np.ndarray:
        v = self.vectors
        return v @ v.conj().T


# ---------------------------------------------------------------------------
# base systems

def simplex_system(d: int) -> VectorSystem:
    """The ``d + 1`` vertices of a regular simplex centred at the origin."""
    if d < 1:
        raise ValueError("d must be positive")
    g = (1 + 1 / d) * np.eye(d + 1) - np.full((d + 1, d + 1), 1 / d)
    np.fill_diagonal(g, 1.0)
    v = factor_to_vectors(GramSystem(Field.REAL, d, 1, g))
    return VectorSystem(Field.REAL, d, _unit_columns(v))


def _unit_columns(v: np.ndarray) -> np.ndarray:
    return v / np.linalg.norm(v, axis=0)


def _reduce_to_span(vectors: np.ndarray, dim: int, field: Field) -> np.ndarray:
    # Re-express vectors spanning a dim-dimensional subspace in dim coordinates
    # by factoring their Gram matrix.
    g = gram(vectors)
    np.fill_diagonal(g, 1.0)
    v = factor_to_vectors(GramSystem(field, dim, g.shape[0] - dim, g))
    return _unit_columns(v)


def equiangular_system(k: int, *, k23: bool = False) -> VectorSystem:
    """``k(k+1)/2`` equiangular lines in R^k for k in {2, 3, 7, 23}."""
    if k == 2:
        t = np.pi * np.arange(3) / 3
        v = np.vstack([np.cos(t), np.sin(t)])
    elif k == 3:
        phi = (1 + math.sqrt(5)) / 2
        base = [(0.0, 1.0, phi), (0.0, 1.0, -phi)]
        rows = [np.roll(b, s) for s in range(3) for b in base]
        v = np.array(rows).T / math.sqrt(1 + phi**2)
    elif k == 7:
        cols = []
        for i, j in itertools.combinations(range(8), 2):
            x = np.full(8, -0.25)
            x[i] += 1
            x[j] += 1
            cols.append(x / math.sqrt(1.5))
        v = _reduce_to_span(np.array(cols).T, 7, Field.REAL)
    elif k == 23:
        if not k23:
            raise FeatureDisabled("the 276-line system needs the k23 feature")
        s = seidel_276().mat
        v = factor_to_vectors(GramSystem(Field.REAL, 23, 253, np.eye(276) + s / 5))
        v = _unit_columns(v)
    else:
        raise UnsupportedK(f"no maximal real equiangular system shipped for k = {k}")
    return VectorSystem(Field.REAL, k, v)


def sic_system(k: int) -> VectorSystem:
    """``k^2`` equiangular lines in C^k for k in {2, 3}."""
    if k == 2:
        theta = math.acos(-1 / 3)
        states = [np.array([1.0, 0.0], dtype=complex)]
        for m in range(3):
            ph = np.exp(2j * np.pi * m / 3)
            states.append(np.array([math.cos(theta / 2), ph * math.sin(theta / 2)]))
        v = np.array(states).T
    elif k == 3:
        w = np.exp(2j * np.pi / 3)
        shift = np.roll(np.eye(3), 1, axis=0)
        clock = np.diag(w ** np.arange(3))
        fid = np.array([0, 1, -1], dtype=complex) / math.sqrt(2)
        cols = [
            np.linalg.matrix_power(shift, a) @ np.linalg.matrix_power(clock, b) @ fid
            for a in range(3)
            for b in range(3)
        ]
        v = np.array(cols).T
    else:
        raise UnsupportedK(f"no SIC shipped for k = {k}")
    return VectorSystem(Field.COMPLEX, k, v)


# ---------------------------------------------------------------------------
# mutually unbiased bases

@dataclass(frozen=True)
class MubBattery:
    field: Field
    k: int
    bases: tuple[np.ndarray, ...]

    def __post_init__(self):
        bases = tuple(as_field(b, self.field) for b in self.bases)
        object.__setattr__(self, "bases", bases)

    @property
    def ell(self) -> int:
        return len(self.bases)

    def matrix(self) -> np.ndarray:
        """The ``k x k ell`` concatenation of all bases."""
        return np.hstack(self.bases)

    def take(self, ell: int) -> "MubBattery":
        if not 1 <= ell <= self.ell:
            raise ValueError(f"battery has {self.ell} bases, asked for {ell}")
        return MubBattery(self.field, self.k, self.bases[:ell])

    def validate(self, tol: float = 1e-9) -> None:
        eye = np.eye(self.k)
        for i, b in enumerate(self.bases):
            if b.shape != (self.k, self.k):
                raise InvalidBattery(f"basis {i} has shape {b.shape}")
            if np.abs(b.conj().T @ b - eye).max() > tol:
                raise InvalidBattery(f"basis {i} is not orthonormal")
        target = 1 / math.sqrt(self.k)
        for i, j in itertools.combinations(range(self.ell), 2):
            cross = np.abs(self.bases[i].conj().T @ self.bases[j])
            if np.abs(cross - target).max() > tol:
                raise InvalidBattery(f"bases {i} and {j} are not unbiased")


def _odd_prime_mubs(p: int) -> list[np.ndarray]:
    w = np.exp(2j * np.pi / p)
    j = np.arange(p)[:, None]
    l = np.arange(p)[None, :]
    out = [np.eye(p, dtype=complex)]
    for t in range(p):
        out.append(w ** ((t * j * j + j * l) % p) / math.sqrt(p))
    return out


@lru_cache(maxsize=1)
def real_mub_third_basis() -> np.ndarray:
    """The +-1/2 orthogonal matrix unbiased to both I_4 and H_4/2.

    Found by exhaustive search: among all 16 sign vectors, keep those whose
    inner product with every column of H_4 has modulus 2, identify
    antipodes, and take the first orthogonal quadruple.
    """
    h = sylvester_hadamard(2).mat
    signs = np.array(list(itertools.product((1, -1), repeat=4)), dtype=float)
    signs = signs[signs[:, 0] > 0]
    unbiased = signs[np.all(np.abs(signs @ h) == 2, axis=1)]
    for quad in itertools.combinations(range(len(unbiased)), 4):
        m = unbiased[list(quad)].T
        if np.array_equal(m.T @ m, 4 * np.eye(4)):
            out = m / 2
            out.setflags(write=False)
            return out
    raise AssertionError("no real basis unbiased to I_4 and H_4/2")


def mub_battery(field: Field, k: int) -> MubBattery:
    """Largest shipped battery of mutually unbiased bases of ``H^k``: ``k + 1``
    bases of C^k for prime ``k``, three bases of R^4."""
    field = Field.parse(field)
    if field is Field.COMPLEX and is_prime(k):
        if k == 2:
            s = 1 / math.sqrt(2)
            bases = [np.eye(2), np.array([[1, 1], [1, -1]]) * s, np.array([[1, 1], [1j, -1j]]) * s]
        else:
            bases = _odd_prime_mubs(k)
    elif k == 4:
        bases = [np.eye(4), sylvester_hadamard(2).mat / 2, real_mub_third_basis()]
    else:
        raise UnsupportedDimension(f"no mutually unbiased bases shipped for {field.name} k = {k}")
    battery = MubBattery(field, k, tuple(bases))
    battery.validate()
    return battery


# ---------------------------------------------------------------------------
# Steiner equiangular tight frames

def steiner_etf(s: SteinerSystem, h: HadamardMatrix, field: Field | None = None) -> np.ndarray:
    """The ``k x n(r+1)`` Steiner frame matrix ``B``.

    ``B^* B`` has ``r`` on the diagonal and unimodular off-diagonal entries and
    ``B B^* = ell (r+1) I_k``.  The ``r + 1`` columns of each point live on the
    point's ``r`` blocks and carry rows 2..r+1 of ``h`` normalized to an
    all-ones first row.
    """
    field = h.field if field is None else Field.parse(field)
    if field is Field.REAL and h.field is Field.COMPLEX:
        raise OrderMismatch("a complex Hadamard matrix cannot build a real frame")
    r = s.r
    if h.order != r + 1:
        raise OrderMismatch(f"Hadamard order {h.order} does not match r + 1 = {r + 1}")
    hn = as_field(h.normalized().mat, field)
    inc = s.incidence()
    b = np.zeros((s.k, s.n * (r + 1)), dtype=field.dtype)
    for point in range(s.n):
        rows = np.nonzero(inc[:, point])[0]
        if rows.size != r:
            raise InvalidETF(f"point {point} lies in {rows.size} blocks, expected {r}")
        cols = slice(point * (r + 1), (point + 1) * (r + 1))
        b[rows, cols] = hn[1:]
    return b


# ---------------------------------------------------------------------------
# lift seeds

@dataclass(frozen=True)
class LiftSeed:
    c: np.ndarray
    lambda_max: float
    mult: int

    @property
    def order(self) -> int:
        return self.c.shape[0]

    @property
    def field(self) -> Field:
        return Field.of(self.c)

    def __iter__(self):
        return iter((self.c, self.lambda_max, self.mult))


def _top_eigenspace(c: np.ndarray, expected_lambda: float, expected_mult: int) -> LiftSeed:
    w = hermitian_eig(c).eigenvalues
    lam = float(w[-1])
    if abs(lam - expected_lambda) > LAMBDA_TOL * max(1.0, abs(expected_lambda)):
        raise SeedSpectrumMismatch(f"lambda_max = {lam!r}, expected {expected_lambda!r}")
    mult = int(np.count_nonzero(np.abs(w - lam) <= LAMBDA_TOL * max(1.0, abs(lam))))
    if mult != expected_mult:
        raise SeedSpectrumMismatch(f"lambda_max has multiplicity {mult}, expected {expected_mult}")
    return LiftSeed(c, lam, mult)


def lift_seed_from_lines(v: VectorSystem, tol: float = 1e-8) -> LiftSeed:
    """Seed ``C = (A^*A - I)/beta + I`` of a maximal equiangular system."""
    a = v.vectors
    g = gram(a)
    n = g.shape[0]
    off = np.abs(g[~np.eye(n, dtype=bool)])
    beta = float(off.mean())
    if n < 2 or np.abs(off - beta).max() > tol:
        raise NotEquiangular("vector system is not equiangular")
    c = (g - np.eye(n)) / beta + np.eye(n)
    np.fill_diagonal(c, 1.0)
    k = v.ambient_dim
    return _top_eigenspace(c, (n / k - 1) / beta + 1, k)


def lift_seed_from_mubs(m: MubBattery) -> LiftSeed:
    """Seed ``C = sqrt(k) (A^*A - I) + I`` of a battery of ``ell`` MUBs."""
    m.validate()
    a = m.matrix()
    n = a.shape[1]
    c = math.sqrt(m.k) * (gram(a) - np.eye(n)) + np.eye(n)
    np.fill_diagonal(c, 1.0)
    return _top_eigenspace(c, math.sqrt(m.k) * (m.ell - 1) + 1, m.k)


def lift_seed_from_steiner(b: np.ndarray, r: int, ell: int | None = None) -> LiftSeed:
    """Seed ``C = B^*B - (r-1) I`` of a Steiner frame matrix."""
    b = np.asarray(b)
    k, n = b.shape
    bb = gram(b)
    if np.abs(np.diag(bb) - r).max() > 1e-9:
        raise InvalidETF(f"frame columns do not have squared norm r = {r}")
    off = np.abs(bb[~np.eye(n, dtype=bool)])
    if np.abs(off - 1).max() > 1e-9:
        raise InvalidETF("off-diagonal entries of B*B must be unimodular")
    frame = b @ b.conj().T
    scale = frame[0, 0].real
    if np.abs(frame - scale * np.eye(k)).max() > 1e-9:
        raise InvalidETF("B B* is not a multiple of the identity")
    if ell is not None and abs(scale - ell * (r + 1)) > 1e-9:
        raise InvalidETF(f"B B* = {scale} I, expected {ell * (r + 1)} I")
    c = bb - (r - 1) * np.eye(n)
    np.fill_diagonal(c, 1.0)
    return _top_eigenspace(c, scale - (r - 1), k)


def kronecker_lift(c, lambda_max: float, mult: int, d: int, field: Field | None = None) -> GramSystem:
    """Lift a seed to the Gram matrix of ``d + mult`` unit vectors in ``H^d``."""
    c = np.asarray(c)
    n = c.shape[0]
    if d < 1:
        raise ValueError("d must be positive")
    if (d + mult) % n:
        raise CongruenceViolated(f"d = {d} is not -{mult} mod {n}")
    b = (d + mult) // n
    eps = 1.0 / (b * lambda_max - 1)
    field = Field.of(c) if field is None else Field.parse(field)
    a = (1 + eps) * np.eye(n * b) - eps * np.kron(c, np.ones((b, b)))
    np.fill_diagonal(a, 1.0)
    return GramSystem(field, d, mult, as_field(a, field))


# ---------------------------------------------------------------------------
# seed catalog

@dataclass(frozen=True)
class SeedSpec:
    """A construction known by its parameters before it is built.

    ``order`` is the seed order ``n`` (the congruence modulus), ``k`` the
    multiplicity of ``lambda_max``.  ``build(d, field)`` returns the Gram
    system at an admissible ``d``.
    """

    construction_id: str
    k: int
    order: int
    lambda_max: float
    build: Callable[[int, Field], GramSystem]

    def admissible(self, d: int) -> bool:
        return d >= 1 and (d + self.k) % self.order == 0

    def value(self, d: int) -> float:
        return bounds.kron_upper(self.order, self.lambda_max, d, self.k)

    def best_value(self, d: int) -> tuple[float | None, int | None]:
        """Value at the largest admissible ``d' <= d`` (and that ``d'``)."""
        d_used = d - ((d + self.k) % self.order)
        if d_used < 1:
            return None, None
        return self.value(d_used), d_used


@lru_cache(maxsize=None)
def _lines_seed(k: int, k23: bool) -> LiftSeed:
    return lift_seed_from_lines(equiangular_system(k, k23=k23))


@lru_cache(maxsize=None)
def _sic_seed(k: int) -> LiftSeed:
    return lift_seed_from_lines(sic_system(k))


@lru_cache(maxsize=None)
def _mub_seed(field: Field, k: int, ell: int) -> LiftSeed:
    if ell == 1:
        return LiftSeed(np.eye(k), 1.0, k)
    base_field = Field.REAL if k == 4 else field
    return lift_seed_from_mubs(mub_battery(base_field, k).take(ell))


def _steiner_design(ell: int, n: int) -> SteinerSystem:
    return steiner_pairs(n) if ell == 2 else bose_triples(n)


@lru_cache(maxsize=None)
def _steiner_seed(field: Field, ell: int, n: int) -> LiftSeed:
    s = _steiner_design(ell, n)
    h = hadamard(s.r + 1, field)
    return lift_seed_from_steiner(steiner_etf(s, h, field), s.r, ell)


def _seed_builder(seed_fn: Callable[[], LiftSeed]) -> Callable[[int, Field], GramSystem]:
    def build(d: int, field: Field) -> GramSystem:
        s = seed_fn()
        return kronecker_lift(s.c, s.lambda_max, s.mult, d, field)

    return build


def _simplex_build(d: int, field: Field) -> GramSystem:
    return GramSystem(field, d, 1, simplex_system(d).gram())


def _steiner_for_k(field: Field, k: int) -> list[tuple[int, int]]:
    out = []
    # ell = 2: k = n(n-1)/2, Hadamard of order n
    n = int((1 + math.isqrt(1 + 8 * k)) // 2)
    if n >= 3 and n * (n - 1) // 2 == k and hadamard(n, field) is not None:
        out.append((2, n))
    # ell = 3 (Bose, n = 3 mod 6): k = n(n-1)/6, Hadamard of order (n+1)/2
    n = int((1 + math.isqrt(1 + 24 * k)) // 2)
    if n % 6 == 3 and n * (n - 1) // 6 == k and hadamard((n + 1) // 2, field) is not None:
        out.append((3, n))
    return out


def seed_catalog(field: Field, k: int, *, k23: bool = False) -> list[SeedSpec]:
    """Every shipped construction producing ``d + k`` vectors, for any ``d``."""
    field = Field.parse(field)
    seeds: list[SeedSpec] = []
    if k == 1:
        seeds.append(SeedSpec("simplex", 1, 1, 1.0, _simplex_build))
        return seeds
    if k in (2, 3, 7) or (k == 23 and k23):
        n = k * (k + 1) // 2
        beta = 1 / math.sqrt(k + 2)
        lam = (n / k - 1) / beta + 1
        seeds.append(SeedSpec(f"equiangular-k{k}-lift", k, n, lam, _seed_builder(lambda k=k: _lines_seed(k, k23))))
    if field is Field.COMPLEX and k in (2, 3):
        n = k * k
        beta = 1 / math.sqrt(k + 1)
        lam = (n / k - 1) / beta + 1
        seeds.append(SeedSpec(f"sic-k{k}-lift", k, n, lam, _seed_builder(lambda k=k: _sic_seed(k))))
    if field is Field.COMPLEX and is_prime(k):
        max_ell = k + 1
    elif k == 4:
        max_ell = 3
    else:
        max_ell = 1
    for ell in range(2, max_ell + 1):
        seeds.append(
            SeedSpec(
                f"mub-k{k}-l{ell}-lift",
                k,
                k * ell,
                math.sqrt(k) * (ell - 1) + 1,
                _seed_builder(lambda ell=ell: _mub_seed(field, k, ell)),
            )
        )
    seeds.append(SeedSpec(f"orthogonal-k{k}-lift", k, k, 1.0, _seed_builder(lambda: _mub_seed(field, k, 1))))
    for ell, n in _steiner_for_k(field, k):
        r = (n - 1) // (ell - 1)
        seeds.append(
            SeedSpec(
                f"steiner-l{ell}-n{n}-lift",
                k,
                n * (r + 1),
                float(ell * (r + 1) - r + 1),
                _seed_builder(lambda ell=ell, n=n: _steiner_seed(field, ell, n)),
            )
        )
    return seeds


def pad_gram(g: GramSystem, d: int) -> GramSystem:
    """Embed a system from ``H^{d'}`` into ``H^d`` and append ``d - d'`` new
    orthonormal vectors; coherence is unchanged."""
    extra = d - g.d
    if extra < 0:
        raise ValueError("cannot pad to a smaller dimension")
    n = g.size
    a = np.eye(n + extra, dtype=g.field.dtype)
    a[:n, :n] = g.gram
    return GramSystem(g.field, d, g.k, a)


@dataclass(frozen=True)
class Construction:
    gram: GramSystem
    construction_id: str
    is_exact: bool
    fallback_from: int | None = None

    @property
    def coherence(self) -> float:
        return self.gram.coherence

    def __iter__(self):
        return iter((self.gram, self.construction_id, self.is_exact))


def construct_best(field: Field, d: int, k: int, *, k23: bool = False) -> Construction:
    """The smallest-coherence shipped system of ``d + k`` unit vectors in H^d.

    Seeds whose congruence misses ``d`` are built at the largest admissible
    ``d' < d`` and padded with new orthonormal coordinates.  Ties go to the
    lexicographically smallest construction id.
    """
    field = Field.parse(field)
    if d < 1 or k < 1:
        raise ValueError("d and k must be positive")
    ranked = []
    for seed in seed_catalog(field, k, k23=k23):
        value, d_used = seed.best_value(d)
        if value is not None:
            ranked.append((round(value, 12), seed.construction_id, seed, d_used, value))
    if not ranked:
        raise NoConstructionAvailable(f"nothing ships for ({field.value}, d={d}, k={k})")
    _, cid, seed, d_used, predicted = min(ranked, key=lambda t: (t[0], t[1]))
    g = seed.build(d_used, field)
    if abs(g.coherence - predicted) > 1e-8:
        raise SeedSpectrumMismatch(f"{cid}: coherence {g.coherence!r}, formula {predicted!r}")
    fallback = None
    if d_used != d:
        g = pad_gram(g, d)
        fallback = d_used
        cid = f"{cid}+fallback-from-{d_used}"
    exact = bounds.exact_optimal_value(field, d, k, k23=k23)
    is_exact = exact is not None and abs(g.coherence - exact) <= 1e-8
    return Construction(g, cid, is_exact, fallback)


# ---------------------------------------------------------------------------
# prime -> Hadamard -> Steiner -> frame -> lift, at one small instance

@dataclass(frozen=True)
class PipelineInstance:
    prime: int
    steiner: SteinerSystem
    hadamard: HadamardMatrix
    frame: np.ndarray
    seed: LiftSeed
    gram: GramSystem
    value: float


def steiner_pipeline(ell: int = 3, start: int = 2) -> PipelineInstance:
    """Chain a prime ``p = 3 (mod 4)``, ``p = 1 (mod ell)`` to a Paley
    Hadamard matrix of order ``p + 1``, a (2, ell, 1 + (ell-1) p) Steiner
    system of degree ``p`` and the lifted frame at the smallest admissible d.
    """
    if ell not in (2, 3):
        raise UnsupportedK("only ell in {2, 3} Steiner systems ship")
    (p,) = primes_in_progression({4: 3, ell: 1 % ell}, start=start)
    n = 1 + (ell - 1) * p
    s = _steiner_design(ell, n)
    s.validate()
    h = paley_hadamard(p)
    b = steiner_etf(s, h)
    seed = lift_seed_from_steiner(b, s.r, ell)
    d = seed.order - s.k
    g = kronecker_lift(seed.c, seed.lambda_max, seed.mult, d)
    return PipelineInstance(p, s, h, b, seed, g, bounds.steiner_upper(ell, n, s.r, d, s.k))
