"""Combinatorial inputs: Hadamard matrices, Steiner systems, the binary
Golay code and the Seidel matrix of 276 equiangular lines in R^23."""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import (
    InconsistentDesignParameters,
    NoValidRuleFound,
    NotPrime,
    WrongResidueClass,
)
from .linalg import Field, as_field, hermitian_eig


# ---------------------------------------------------------------------------
# primes

def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def primes_in_progression(residues: dict[int, int], start: int = 2, count: int = 1) -> list[int]:
    """The first ``count`` primes ``p >= start`` with ``p % m == a`` for every
    ``m: a`` in ``residues``.  Plain trial division; meant for small inputs."""
    out = []
    p = max(start, 2)
    while len(out) < count:
        if all(p % m == a % m for m, a in residues.items()) and is_prime(p):
            out.append(p)
        p += 1
    return out


def quadratic_residues(p: int) -> set[int]:
    return {(x * x) % p for x in range(1, p)}


# ---------------------------------------------------------------------------
# Hadamard matrices

@dataclass(frozen=True)
class HadamardMatrix:
    field: Field
    order: int
    mat: np.ndarray

    def __post_init__(self):
        m = as_field(self.mat, self.field)
        if m.shape != (self.order, self.order):
            raise ValueError(f"Hadamard matrix has shape {m.shape}, expected order {self.order}")
        if np.abs(np.abs(m) - 1).max() > 1e-12:
            raise ValueError("Hadamard entries must be unimodular")
        if np.abs(m.conj().T @ m - self.order * np.eye(self.order)).max() > 1e-9:
            raise ValueError("H* H != n I")
        m.setflags(write=False)
        object.__setattr__(self, "mat", m)

    def normalized(self) -> "HadamardMatrix":
        """Equivalent matrix whose first row is all ones (columns rescaled)."""
        m = self.mat / self.mat[0][None, :]
        return HadamardMatrix(self.field, self.order, m)


def sylvester_hadamard(m: int) -> HadamardMatrix:
    if m < 0:
        raise ValueError("exponent must be nonnegative")
    h = np.ones((1, 1))
    for _ in range(m):
        h = np.block([[h, h], [h, -h]])
    return HadamardMatrix(Field.REAL, 2**m, h)


def paley_hadamard(q: int) -> HadamardMatrix:
    """Paley type I Hadamard matrix of order ``q + 1`` for a prime
    ``q = 3 (mod 4)``."""
    if not is_prime(q):
        raise NotPrime(f"{q} is not prime")
    if q % 4 != 3:
        raise WrongResidueClass(f"{q} is not 3 mod 4")
    qr = quadratic_residues(q)
    chi = np.array([0] + [1 if x in qr else -1 for x in range(1, q)])
    # Jacobsthal matrix Q_ab = chi(b - a) is skew-symmetric for q = 3 mod 4
    jac = chi[(np.arange(q)[None, :] - np.arange(q)[:, None]) % q]
    s = np.zeros((q + 1, q + 1))
    s[0, 1:] = 1
    s[1:, 0] = -1
    s[1:, 1:] = jac
    return HadamardMatrix(Field.REAL, q + 1, np.eye(q + 1) + s)


def fourier_hadamard(n: int) -> HadamardMatrix:
    if n < 1:
        raise ValueError("order must be positive")
    jk = np.outer(np.arange(n), np.arange(n)) % n
    h = np.exp(2j * np.pi * jk / n)
    # keep the exact +-1 entries exact for n = 1, 2
    h[jk == 0] = 1
    if n % 2 == 0:
        h[2 * jk == n] = -1
    return HadamardMatrix(Field.COMPLEX, n, h)


def real_hadamard(order: int) -> HadamardMatrix | None:
    """Some real Hadamard matrix of the given order from the Sylvester and
    Paley families, or ``None`` if neither family reaches it."""
    if order == 1:
        return sylvester_hadamard(0)
    if order & (order - 1) == 0:
        return sylvester_hadamard(order.bit_length() - 1)
    q = order - 1
    if q % 4 == 3 and is_prime(q):
        return paley_hadamard(q)
    return None


def hadamard(order: int, field: Field) -> HadamardMatrix | None:
    field = Field.parse(field)
    if field is Field.REAL:
        return real_hadamard(order)
    real = real_hadamard(order)
    if real is not None:
        return HadamardMatrix(Field.COMPLEX, order, real.mat)
    return fourier_hadamard(order)


# ---------------------------------------------------------------------------
# Steiner systems

@dataclass(frozen=True)
class SteinerSystem:
    """Blocks of a (2, ell, n) Steiner system on points ``0 .. n-1``.

    ``k`` is the number of blocks and ``r`` the degree of every point.
    """

    n: int
    ell: int
    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        blocks = tuple(tuple(sorted(b)) for b in self.blocks)
        object.__setattr__(self, "blocks", blocks)

    @property
    def k(self) -> int:
        return len(self.blocks)

    @property
    def r(self) -> int:
        return (self.n - 1) // (self.ell - 1)

    def incidence(self) -> np.ndarray:
        """``k x n`` 0/1 block-point incidence matrix."""
        m = np.zeros((self.k, self.n), dtype=np.int64)
        for i, b in enumerate(self.blocks):
            m[i, list(b)] = 1
        return m

    def pair_counts(self) -> np.ndarray:
        inc = self.incidence()
        return inc.T @ inc

    def validate(self) -> None:
        k_expected = self.n * (self.n - 1) // (self.ell * (self.ell - 1))
        if any(len(b) != self.ell for b in self.blocks):
            raise InconsistentDesignParameters("block of the wrong size")
        if self.k != k_expected:
            raise InconsistentDesignParameters(f"{self.k} blocks, expected {k_expected}")
        counts = self.pair_counts()
        off = counts[~np.eye(self.n, dtype=bool)]
        if np.any(off != 1):
            raise InconsistentDesignParameters("some pair is not covered exactly once")
        if np.any(np.diag(counts) != self.r):
            raise InconsistentDesignParameters("point degrees are not all r")

    def to_json(self) -> str:
        return json.dumps({"n": self.n, "ell": self.ell, "blocks": [list(b) for b in self.blocks]})

    @classmethod
    def from_json(cls, text: str) -> "SteinerSystem":
        obj = json.loads(text)
        return cls(int(obj["n"]), int(obj["ell"]), tuple(tuple(b) for b in obj["blocks"]))


def steiner_pairs(n: int) -> SteinerSystem:
    if n < 2:
        raise ValueError("need at least two points")
    return SteinerSystem(n, 2, tuple(itertools.combinations(range(n), 2)))


def bose_triples(n: int) -> SteinerSystem:
    """Bose's Steiner triple system on ``n = 3 (mod 6)`` points.

    Points are pairs ``(x, i)`` with ``x`` in Z_m, ``m = n/3``, ``i`` in
    {0, 1, 2}, numbered ``x + m*i``.
    """
    if n % 6 != 3:
        raise WrongResidueClass(f"{n} is not 3 mod 6")
    m = n // 3
    half = (m + 1) // 2  # inverse of 2 in Z_m (m is odd)

    def pt(x, i):
        return (x % m) + m * (i % 3)

    blocks = [(pt(x, 0), pt(x, 1), pt(x, 2)) for x in range(m)]
    for x, y in itertools.combinations(range(m), 2):
        z = ((x + y) * half) % m
        for i in range(3):
            blocks.append((pt(x, i), pt(y, i), pt(z, i + 1)))
    return SteinerSystem(n, 3, tuple(blocks))


# ---------------------------------------------------------------------------
# binary Golay code

def _gf2_row_reduce(m: np.ndarray) -> np.ndarray:
    m = m.copy() % 2
    rank = 0
    for c in range(m.shape[1]):
        pivots = np.nonzero(m[rank:, c])[0]
        if pivots.size == 0:
            continue
        piv = rank + pivots[0]
        m[[rank, piv]] = m[[piv, rank]]
        hits = np.nonzero(m[:, c])[0]
        hits = hits[hits != rank]
        m[hits] ^= m[rank]
        rank += 1
        if rank == m.shape[0]:
            break
    return m[:rank]


@lru_cache(maxsize=1)
def golay_generator() -> np.ndarray:
    """12 x 24 generator of the extended binary Golay code.

    The cyclic length-23 code is spanned by the shifts of the indicator of
    the quadratic residues mod 23; an overall parity bit extends it.
    """
    v = np.zeros(23, dtype=np.uint8)
    v[sorted(quadratic_residues(23))] = 1
    shifts = np.array([np.roll(v, s) for s in range(23)])
    basis = _gf2_row_reduce(shifts)
    if basis.shape[0] != 12:
        raise AssertionError("quadratic-residue shifts should span a 12-dim code")
    parity = basis.sum(axis=1, keepdims=True) % 2
    g = np.hstack([basis, parity]).astype(np.uint8)
    g.setflags(write=False)
    return g


@lru_cache(maxsize=1)
def golay_codewords() -> np.ndarray:
    """All 4096 codewords as a ``4096 x 24`` 0/1 array."""
    g = golay_generator().astype(np.int64)
    msgs = np.array(list(itertools.product((0, 1), repeat=12)), dtype=np.int64)
    words = (msgs @ g % 2).astype(np.uint8)
    words.setflags(write=False)
    return words


@dataclass(frozen=True)
class BlockDesign:
    """A plain block design (used for the 4-(23,7,1) design of heptads)."""

    n: int
    ell: int
    blocks: tuple[tuple[int, ...], ...]

    @property
    def k(self) -> int:
        return len(self.blocks)

    def incidence(self) -> np.ndarray:
        m = np.zeros((self.k, self.n), dtype=np.int64)
        for i, b in enumerate(self.blocks):
            m[i, list(b)] = 1
        return m

    def to_json(self) -> str:
        return json.dumps({"n": self.n, "ell": self.ell, "blocks": [list(b) for b in self.blocks]})


@lru_cache(maxsize=1)
def golay_heptads() -> BlockDesign:
    """The 253 heptads of S(4, 7, 23): octads through the last coordinate of
    the extended Golay code, with that coordinate deleted."""
    words = golay_codewords()
    octads = words[(words.sum(axis=1) == 8) & (words[:, 23] == 1)]
    blocks = tuple(tuple(int(i) for i in np.nonzero(w[:23])[0]) for w in octads)
    return BlockDesign(23, 7, tuple(sorted(blocks)))


# ---------------------------------------------------------------------------
# Seidel matrices

@dataclass(frozen=True)
class SeidelMatrix:
    order: int
    mat: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.mat, dtype=np.float64)
        if m.shape != (self.order, self.order):
            raise ValueError("Seidel matrix has the wrong shape")
        if not np.array_equal(m, m.T):
            raise ValueError("Seidel matrix must be symmetric")
        if np.any(np.diag(m) != 0):
            raise ValueError("Seidel matrix must have zero diagonal")
        if np.any(np.abs(m[~np.eye(self.order, dtype=bool)]) != 1):
            raise ValueError("Seidel off-diagonal entries must be +-1")
        m.setflags(write=False)
        object.__setattr__(self, "mat", m)


# (point-point, point in block, point outside block, blocks meeting in 1 point);
# blocks meeting in 3 points get the opposite sign of the last entry.
SEIDEL_RULES = tuple(itertools.product((1, -1), repeat=4))


def _seidel_from_rule(rule, incidence: np.ndarray) -> np.ndarray:
    pp, p_in, p_out, b1 = rule
    npts = incidence.shape[1]
    nb = incidence.shape[0]
    inter = incidence @ incidence.T
    s = np.zeros((npts + nb, npts + nb), dtype=np.int64)
    s[:npts, :npts] = pp
    pb = np.where(incidence.T == 1, p_in, p_out)
    s[:npts, npts:] = pb
    s[npts:, :npts] = pb.T
    s[npts:, npts:] = np.where(inter == 1, b1, -b1)
    np.fill_diagonal(s, 0)
    return s


@lru_cache(maxsize=2)
def seidel_276(verify_spectrum: bool = True) -> SeidelMatrix:
    """Seidel matrix of 276 equiangular lines in R^23 at angle 1/5.

    Vertices are the 23 points and 253 heptads of S(4, 7, 23).  Sign rules
    from :data:`SEIDEL_RULES` are tried in order; the first one whose matrix
    satisfies ``S^2 = 50 S + 275 I`` (minimal polynomial of spectrum
    {55, -5}) is kept, and its spectrum is confirmed numerically.
    """
    inc = golay_heptads().incidence()
    n = 276
    eye = np.eye(n, dtype=np.int64)
    for rule in SEIDEL_RULES:
        s = _seidel_from_rule(rule, inc)
        if not np.array_equal(s @ s, 50 * s + 275 * eye):
            continue
        if verify_spectrum:
            w = hermitian_eig(s.astype(np.float64)).eigenvalues
            expected = np.array([-5.0] * 253 + [55.0] * 23)
            if np.abs(w - expected).max() > 1e-6:
                continue
        return SeidelMatrix(n, s.astype(np.float64))
    raise NoValidRuleFound("no sign rule yields the 276-line two-graph; extend SEIDEL_RULES")
