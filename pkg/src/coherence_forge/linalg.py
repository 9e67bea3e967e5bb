"""Dense Hermitian linear algebra over R or C.

Matrices are plain numpy arrays: ``float64`` for the real field and
``complex128`` for the complex one.  The inner product is conjugate-linear in
its first argument, ``<x, y> = x^* y``, so a Gram matrix of the columns of
``V`` is ``V^* V``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field as dc_field
from functools import lru_cache

import numpy as np

from .errors import NotHermitian, NotPSD, NotSquare, RankExceedsD

HERMITIAN_TOL = 1e-10
PSD_TOL = 1e-8
RANK_TOL = 1e-9


class Field(enum.Enum):
    REAL = "R"
    COMPLEX = "C"

    @property
    def dtype(self):
        return np.float64 if self is Field.REAL else np.complex128

    @classmethod
    def parse(cls, value) -> "Field":
        if isinstance(value, Field):
            return value
        key = str(value).strip().upper()
        aliases = {"R": cls.REAL, "REAL": cls.REAL, "C": cls.COMPLEX, "COMPLEX": cls.COMPLEX}
        try:
            return aliases[key]
        except KeyError:
            raise ValueError(f"unknown field {value!r}; expected R or C") from None

    @classmethod
    def of(cls, a) -> "Field":
        return cls.COMPLEX if np.iscomplexobj(a) else cls.REAL


def as_field(a, field: Field) -> np.ndarray:
    """Return ``a`` as an array of the dtype belonging to ``field``.

    Casting a complex array with nonzero imaginary part to REAL is an error.
    """
    a = np.asarray(a)
    if field is Field.REAL and np.iscomplexobj(a):
        if np.any(np.abs(a.imag) > 0):
            raise ValueError("complex entries cannot be stored in a REAL matrix")
        a = a.real
    return np.array(a, dtype=field.dtype)


def _require_square(a: np.ndarray) -> None:
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NotSquare(f"expected a square matrix, got shape {a.shape}")


def hermitian_defect(a: np.ndarray) -> float:
    """Largest entry of ``|A - A^*|``."""
    a = np.asarray(a)
    _require_square(a)
    if a.size == 0:
        return 0.0
    return float(np.abs(a - a.conj().T).max())


def is_hermitian(a, tol: float = HERMITIAN_TOL) -> bool:
    return hermitian_defect(a) <= tol


def _require_hermitian(a: np.ndarray, tol: float) -> None:
    _require_square(a)
    defect = hermitian_defect(a)
    if defect > tol:
        raise NotHermitian(f"matrix is not Hermitian (max |A - A*| = {defect:.3g})")


@dataclass(frozen=True)
class EigenDecomp:
    """Eigenvalues in ascending order and a unitary matrix of eigenvectors."""

    eigenvalues: np.ndarray
    basis: np.ndarray
    sweeps: int = 0

    def reconstruct(self) -> np.ndarray:
        v = self.basis
        return (v * self.eigenvalues) @ v.conj().T


@lru_cache(maxsize=64)
def _round_robin(n: int) -> tuple[tuple[np.ndarray, np.ndarray], ...]:
    # Tournament ordering: each round is a set of disjoint (p, q) pairs and
    # the n - 1 (or n) rounds of a sweep visit every pair exactly once.
    m = n + (n % 2)
    idx = list(range(m))
    rounds = []
    for _ in range(m - 1):
        pairs = [(idx[i], idx[m - 1 - i]) for i in range(m // 2)]
        pairs = [(min(a, b), max(a, b)) for a, b in pairs if a < n and b < n]
        if pairs:
            p = np.array([a for a, _ in pairs], dtype=np.intp)
            q = np.array([b for _, b in pairs], dtype=np.intp)
            rounds.append((p, q))
        idx = [idx[0], idx[-1]] + idx[1:-1]
    return tuple(rounds)


def _jacobi(a: np.ndarray, tol: float, max_sweeps: int) -> EigenDecomp:
    n = a.shape[0]
    v = np.eye(n, dtype=a.dtype)
    scale = np.linalg.norm(a)
    rounds = _round_robin(n)
    sweeps = 0
    offdiag = ~np.eye(n, dtype=bool)
    # entries this small are left alone; rotating them only risks overflow
    # in the phase of a subnormal complex number
    skip = max(tol * scale * 1e-3, np.finfo(np.float64).tiny)
    while sweeps < max_sweeps:
        if n < 2 or np.abs(a[offdiag]).max() <= tol * scale:
            break
        for p, q in rounds:
            apq = a[p, q]
            mag = np.abs(apq)
            nz = mag > skip
            phase = np.where(nz, apq / np.where(nz, mag, 1.0), 1.0)
            theta = np.where(nz, 0.5 * np.arctan2(2.0 * mag, (a[q, q] - a[p, p]).real), 0.0)
            c, s = np.cos(theta), np.sin(theta)
            sc = s * np.conj(phase)
            cc = c * np.conj(phase)
            for m in (a, v):
                mp = m[:, p].copy()
                mq = m[:, q]
                m[:, p] = mp * c - mq * sc
                m[:, q] = mp * s + mq * cc
            rp = a[p, :].copy()
            rq = a[q, :]
            a[p, :] = c[:, None] * rp - (s * phase)[:, None] * rq
            a[q, :] = s[:, None] * rp + (c * phase)[:, None] * rq
        sweeps += 1
    w = np.diag(a).real.copy()
    order = np.argsort(w, kind="stable")
    return EigenDecomp(w[order], v[:, order], sweeps)


def hermitian_eig(
    a,
    method: str = "jacobi",
    tol: float = 1e-12,
    max_sweeps: int = 100,
    hermitian_tol: float = HERMITIAN_TOL,
) -> EigenDecomp:
    """Eigendecomposition of a Hermitian matrix.

    ``method="jacobi"`` runs cyclic Jacobi rotations (complex rotations for
    complex input), sweeping until every off-diagonal entry is below
    ``tol * ||A||_F``.  ``method="lapack"`` defers to ``numpy.linalg.eigh`` and
    exists as an independent cross-check.
    """
    a = np.asarray(a)
    _require_hermitian(a, hermitian_tol)
    dtype = np.complex128 if np.iscomplexobj(a) else np.float64
    # symmetrize so rounding in the input cannot leak into the rotations
    work = np.array((a + a.conj().T) / 2, dtype=dtype)
    if method == "jacobi":
        return _jacobi(work, tol, max_sweeps)
    if method == "lapack":
        w, v = np.linalg.eigh(work)
        return EigenDecomp(w, v)
    raise ValueError(f"unknown eigensolver {method!r}")


def numeric_rank(a, tol_rel: float = RANK_TOL, method: str = "jacobi") -> int:
    """Number of eigenvalues with ``|lambda| > tol_rel * max |lambda|``."""
    w = hermitian_eig(a, method=method).eigenvalues
    if w.size == 0:
        return 0
    top = np.abs(w).max()
    if top == 0:
        return 0
    return int(np.count_nonzero(np.abs(w) > tol_rel * top))


def coherence(a) -> float:
    """``off(A)``: the largest modulus among off-diagonal entries."""
    a = np.asarray(a)
    _require_square(a)
    n = a.shape[0]
    if n < 2:
        return 0.0
    return float(np.abs(a[~np.eye(n, dtype=bool)]).max())


def gram(vectors) -> np.ndarray:
    """Gram matrix of the columns of ``vectors``."""
    v = np.asarray(vectors)
    return v.conj().T @ v


@dataclass(frozen=True)
class GramSystem:
    """A unit-diagonal Hermitian matrix claimed to be the Gram matrix of
    ``d + k`` unit vectors in ``H^d``.

    Construction enforces shape, Hermitian symmetry and the unit diagonal;
    positive semidefiniteness and the rank condition are checked by
    :func:`factor_to_vectors` and by certificate verification.
    """

    field: Field
    d: int
    k: int
    gram: np.ndarray = dc_field(repr=False)
    coherence: float = dc_field(init=False)

    def __post_init__(self):
        g = as_field(self.gram, self.field)
        n = self.d + self.k
        if g.shape != (n, n):
            raise ValueError(f"Gram matrix has shape {g.shape}, expected {(n, n)}")
        _require_hermitian(g, HERMITIAN_TOL)
        if n and np.abs(np.diag(g) - 1).max() > HERMITIAN_TOL:
            raise ValueError("Gram matrix diagonal must be 1")
        g.setflags(write=False)
        object.__setattr__(self, "gram", g)
        object.__setattr__(self, "coherence", coherence(g))

    @property
    def size(self) -> int:
        return self.d + self.k


def factor_to_vectors(g: GramSystem, tol_rel: float = RANK_TOL) -> np.ndarray:
    """Return a ``d x (d+k)`` matrix whose columns realize the Gram matrix."""
    eig = hermitian_eig(g.gram)
    w, u = eig.eigenvalues, eig.basis
    top = np.abs(w).max() if w.size else 0.0
    if w.size and w[0] < -PSD_TOL * max(top, 1.0):
        raise NotPSD(f"Gram matrix has eigenvalue {w[0]:.3g}")
    keep = w > tol_rel * top
    rank = int(np.count_nonzero(keep))
    if rank > g.d:
        raise RankExceedsD(f"Gram matrix has numeric rank {rank} > d = {g.d}")
    rows = np.sqrt(w[keep])[:, None] * u[:, keep].conj().T
    out = np.zeros((g.d, g.size), dtype=g.field.dtype)
    out[:rank] = rows.real if g.field is Field.REAL else rows
    return out


def psd_margin(a) -> float:
    """Smallest eigenvalue of a Hermitian matrix."""
    return float(hermitian_eig(a).eigenvalues[0])


# ---------------------------------------------------------------------------
# matrix text format
#
#   R|C <rows> <cols>
#   <row entries, whitespace separated>
#
# complex entries are written a+bi / a-bi without spaces.

def _fmt_real(x: float) -> str:
    return format(float(x), ".17g")


def _fmt_complex(z: complex) -> str:
    im = _fmt_real(z.imag)
    if not im.startswith("-"):
        im = "+" + im
    return f"{_fmt_real(z.real)}{im}i"


def format_matrix(a, field: Field | None = None) -> str:
    a = np.asarray(a)
    if a.ndim != 2:
        raise ValueError("only 2-d matrices can be written")
    field = Field.of(a) if field is None else field
    a = as_field(a, field)
    fmt = _fmt_real if field is Field.REAL else _fmt_complex
    lines = [f"{field.value} {a.shape[0]} {a.shape[1]}"]
    lines += [" ".join(fmt(x) for x in row) for row in a]
    return "\n".join(lines) + "\n"


def _parse_entry(tok: str, field: Field):
    if field is Field.REAL:
        return float(tok)
    if tok.endswith("i"):
        return complex(tok[:-1] + "j")
    return complex(float(tok))


def parse_matrix(text: str) -> tuple[Field, np.ndarray]:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty matrix text")
    head = lines[0].split()
    if len(head) != 3:
        raise ValueError(f"bad matrix header {lines[0]!r}")
    field = Field.parse(head[0])
    rows, cols = int(head[1]), int(head[2])
    body = lines[1:]
    if len(body) != rows:
        raise ValueError(f"expected {rows} rows, found {len(body)}")
    out = np.empty((rows, cols), dtype=field.dtype)
    for i, ln in enumerate(body):
        toks = ln.split()
        if len(toks) != cols:
            raise ValueError(f"row {i} has {len(toks)} entries, expected {cols}")
        out[i] = [_parse_entry(t, field) for t in toks]
    return field, out


def read_matrix(path) -> tuple[Field, np.ndarray]:
    with open(path) as fh:
        return parse_matrix(fh.read())
