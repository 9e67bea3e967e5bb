"""Finite probability measures on H^k.

Covers isotropy (second moment ``I/k``) and whitening, the first moment
``E_{x,y} |<x, y>|`` with its sharp upper bound, and an upper estimator for

    Lambda(mu) = inf_{y in supp mu, y != 0} inf_{v != 0} E_x |<v, x>| / |<v, y>|.

The estimator returns the ratio at an explicit (v, y) pair, so it is always
an upper bound on Lambda; the gap to the infimum is not controlled.
"""
from __future__ import annotations

import json
import os
from dataclasses import dataclass

import numpy as np

from .bounds import alpha
from .errors import DegenerateSupport, EmptySupport, NotIsotropic
from .linalg import Field, as_field, format_matrix, hermitian_eig, parse_matrix

SEED_ENV = "COHERENCE_FORGE_SEED"
ISO_TOL = 1e-8


def default_seed() -> int:
    return int(os.environ.get(SEED_ENV, "0"))


@dataclass(frozen=True)
class FiniteMeasure:
    """Weights on the columns of a ``k x m`` point matrix."""

    field: Field
    k: int
    points: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        pts = as_field(self.points, self.field)
        w = np.asarray(self.weights, dtype=np.float64)
        if pts.ndim != 2 or pts.shape[0] != self.k:
            raise ValueError(f"points must be {self.k} x m, got {pts.shape}")
        if w.shape != (pts.shape[1],) or w.size < 1:
            raise ValueError("need one weight per point and at least one point")
        if np.any(w < 0) or abs(w.sum() - 1) > 1e-12:
            raise ValueError("weights must be nonnegative and sum to 1")
        pts.setflags(write=False)
        w.setflags(write=False)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "weights", w)

    @classmethod
    def uniform(cls, points, field: Field | None = None) -> "FiniteMeasure":
        pts = np.asarray(points)
        field = Field.of(pts) if field is None else Field.parse(field)
        m = pts.shape[1]
        return cls(field, pts.shape[0], pts, np.full(m, 1 / m))

    def support(self) -> np.ndarray:
        """Points with positive weight and nonzero norm."""
        keep = (self.weights > 0) & (np.linalg.norm(self.points, axis=0) > 0)
        return self.points[:, keep]

    def mapped(self, q) -> "FiniteMeasure":
        """Push-forward under the linear map ``q``."""
        q = np.asarray(q)
        field = Field.COMPLEX if np.iscomplexobj(q) or self.field is Field.COMPLEX else Field.REAL
        return FiniteMeasure(field, self.k, q @ self.points, self.weights)

    def to_json(self) -> str:
        return json.dumps(
            {
                "field": self.field.value,
                "k": self.k,
                "weights": [float(w) for w in self.weights],
                "points": format_matrix(self.points, self.field),
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "FiniteMeasure":
        obj = json.loads(text)
        field, pts = parse_matrix(obj["points"])
        declared = Field.parse(obj.get("field", field.value))
        return cls(declared, int(obj["k"]), pts, np.asarray(obj["weights"], dtype=float))


def second_moment(mu: FiniteMeasure) -> np.ndarray:
    x = mu.points
    return (x * mu.weights) @ x.conj().T


def is_isotropic(mu: FiniteMeasure, tol: float = ISO_TOL) -> bool:
    return np.abs(second_moment(mu) - np.eye(mu.k) / mu.k).max() <= tol


def whiten(mu: FiniteMeasure) -> tuple[np.ndarray, FiniteMeasure]:
    """``Q = (k E xx^*)^{-1/2}`` and the isotropic measure ``Q mu``."""
    eig = hermitian_eig(mu.k * second_moment(mu))
    w, u = eig.eigenvalues, eig.basis
    if w[-1] <= 0 or w[0] <= 1e-10 * w[-1]:
        raise DegenerateSupport("support does not span the space")
    q = (u * (1 / np.sqrt(np.maximum(w, 1e-12)))) @ u.conj().T
    if mu.field is Field.REAL:
        q = q.real
    return q, mu.mapped(q)


def first_moment(mu: FiniteMeasure) -> float:
    """``E_{x,y ~ mu} |<x, y>|`` with x, y independent (x = y included)."""
    g = np.abs(mu.points.conj().T @ mu.points)
    return float(mu.weights @ g @ mu.weights)


def in_uniform_class(mu: FiniteMeasure, d: int, tol: float = 1e-9) -> bool:
    """Whether ``mu`` is uniform on a multiset of ``d + k`` spanning vectors."""
    counts = (d + mu.k) * mu.weights
    if np.abs(counts - np.round(counts)).max() > tol:
        return False
    try:
        whiten(mu)
    except DegenerateSupport:
        return False
    return True


@dataclass(frozen=True)
class IsoCheck:
    value: float
    bound: float
    ok: bool
    extremal: bool

    def __iter__(self):
        return iter((self.value, self.bound, self.ok, self.extremal))


def iso_bound_check(mu: FiniteMeasure) -> IsoCheck:
    """Compare the first moment of an isotropic measure with its maximum."""
    if not is_isotropic(mu):
        raise NotIsotropic("measure is not isotropic; whiten it first")
    value = first_moment(mu)
    bound = alpha(mu.field, mu.k)
    return IsoCheck(value, bound, value <= bound + 1e-9, abs(value - bound) <= 1e-8)


# ---------------------------------------------------------------------------
# Lambda estimator

def lone_ratio(mu: FiniteMeasure, v, y) -> float:
    """``E_x |<v, x>| / |<v, y>|`` for a single direction and support point."""
    v = np.asarray(v)
    num = float(mu.weights @ np.abs(v.conj() @ mu.points))
    return num / abs(np.vdot(v, y))


def _objective(points: np.ndarray, weights: np.ndarray, support: np.ndarray, vs: np.ndarray):
    # rows of vs are candidate directions; best y maximizes |<v, y>|
    num = np.abs(vs.conj() @ points) @ weights
    den = np.abs(vs.conj() @ support)
    best_y = den.argmax(axis=1)
    top = den[np.arange(len(vs)), best_y]
    with np.errstate(divide="ignore"):
        ratio = np.where(top > 0, num / np.where(top > 0, top, 1), np.inf)
    return ratio, best_y


def _to_real(v: np.ndarray, field: Field) -> np.ndarray:
    return v if field is Field.REAL else np.concatenate([v.real, v.imag])


def _from_real(x: np.ndarray, field: Field, k: int) -> np.ndarray:
    v = x if field is Field.REAL else x[:k] + 1j * x[k:]
    return v / np.linalg.norm(v)


@dataclass(frozen=True)
class LoneEstimate:
    """An upper estimate of Lambda together with the pair attaining it."""

    value: float
    v: np.ndarray
    y: np.ndarray
    candidates: int


def lone_witness(
    mu: FiniteMeasure,
    restarts: int = 64,
    grid: int = 3600,
    seed: int | None = None,
    iterations: int = 200,
    min_step: float = 1e-6,
) -> LoneEstimate:
    """Search directions for the smallest Lambda ratio.

    Candidates are every support point plus an angular grid of ``grid``
    directions (real plane) or ``restarts`` random unit vectors (otherwise);
    the best candidate is then polished by coordinate descent with step
    halving.
    """
    support = mu.support()
    if support.shape[1] == 0:
        raise EmptySupport("measure has no nonzero support point")
    field, k = mu.field, mu.k
    rng = np.random.default_rng(default_seed() if seed is None else seed)

    cands = [(support / np.linalg.norm(support, axis=0)).T]
    if field is Field.REAL and k == 2:
        t = np.pi * np.arange(grid) / grid
        cands.append(np.stack([np.cos(t), np.sin(t)], axis=1))
    elif restarts > 0:
        r = rng.normal(size=(restarts, k))
        if field is Field.COMPLEX:
            r = r + 1j * rng.normal(size=(restarts, k))
        cands.append(r / np.linalg.norm(r, axis=1, keepdims=True))
    vs = np.vstack(cands).astype(field.dtype)
    ratio, best_y = _objective(mu.points, mu.weights, support, vs)
    i = int(np.argmin(ratio))
    best_v, best_val, y_idx = vs[i], float(ratio[i]), int(best_y[i])

    x = _to_real(best_v, field)
    step = 0.1
    for _ in range(iterations):
        improved = False
        for j in range(x.size):
            for sign in (1.0, -1.0):
                trial = x.copy()
                trial[j] += sign * step
                if not np.any(trial):
                    continue
                tv = _from_real(trial, field, k)
                r, yi = _objective(mu.points, mu.weights, support, tv[None, :])
                if r[0] < best_val:
                    x, best_v, best_val, y_idx = _to_real(tv, field), tv, float(r[0]), int(yi[0])
                    improved = True
        if not improved:
            step /= 2
            if step < min_step:
                break
    y = support[:, y_idx]
    return LoneEstimate(lone_ratio(mu, best_v, y), best_v, y, len(vs))


def lone_estimate(mu: FiniteMeasure, restarts: int = 64, grid: int = 3600, seed: int | None = None) -> float:
    """Upper estimate of Lambda(mu); see :func:`lone_witness`."""
    return lone_witness(mu, restarts=restarts, grid=grid, seed=seed).value
