"""Closed-form lower and upper bounds on the coherence of d+k unit vectors.

All values are plain floats.  ``theta`` below always means the smallest
achievable coherence of ``d + k`` unit vectors in ``H^d``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field

from .errors import CongruenceViolated, InconsistentDesignParameters
from .linalg import Field


def _positive(**kw) -> None:
    for name, v in kw.items():
        if int(v) != v or v < 1:
            raise ValueError(f"{name} must be a positive integer, got {v!r}")


def welch_bound(d: int, k: int) -> float:
    _positive(d=d, k=k)
    return math.sqrt(k / (d * (d + k - 1)))


def alpha_real(k: int) -> float:
    """Maximal first moment of an isotropic measure on R^k."""
    return ((k - 1) * math.sqrt(k + 2) + 2) / (k * (k + 1))


def alpha_complex(k: int) -> float:
    """Maximal first moment of an isotropic measure on C^k."""
    return ((k - 1) * math.sqrt(k + 1) + 1) / k**2


def alpha(field: Field, k: int) -> float:
    return alpha_real(k) if Field.parse(field) is Field.REAL else alpha_complex(k)


def improved_lower_bound(field: Field, d: int, k: int) -> float:
    _positive(d=d, k=k)
    return 1.0 / (alpha(field, k) * (d + k) - 1)


def equiangular_count(field: Field, k: int) -> int:
    """Gerzon bound: the size of a maximal equiangular system in H^k."""
    return k * (k + 1) // 2 if Field.parse(field) is Field.REAL else k * k


# k -> whether the repository ships a maximal equiangular system
_REAL_EQUIANGULAR = {1, 2, 3, 7, 23}
_COMPLEX_EQUIANGULAR = {1, 2, 3}


def exact_optimal_value(field: Field, d: int, k: int, *, k23: bool = False) -> float | None:
    """The optimal coherence where it is pinned down and constructible.

    Returns ``None`` unless a maximal equiangular system in ``H^k`` ships with
    the library and ``d = -k`` modulo its size (every ``d`` when ``k = 1``).
    The ``k = 23`` real case is only claimed when ``k23`` is enabled.
    """
    field = Field.parse(field)
    _positive(d=d, k=k)
    supported = _REAL_EQUIANGULAR if field is Field.REAL else _COMPLEX_EQUIANGULAR
    if k not in supported or (k == 23 and not k23):
        return None
    if k > 1 and (d + k) % equiangular_count(field, k):
        return None
    return improved_lower_bound(field, d, k)


def _congruent(d: int, k: int, n: int) -> bool:
    return (d + k) % n == 0


def kron_upper(n: int, lambda_max: float, d: int, k: int) -> float:
    """Coherence reached by lifting an order-``n`` seed whose top eigenvalue
    ``lambda_max`` has multiplicity ``k``."""
    _positive(n=n, d=d, k=k)
    if not _congruent(d, k, n):
        raise CongruenceViolated(f"d = {d} is not -{k} mod {n}")
    denom = lambda_max * (d + k) - n
    if denom <= 0:
        raise ValueError("lambda_max * (d + k) must exceed n")
    return n / denom


def mub_upper(field: Field, ell: int, d: int, k: int) -> float:
    """Upper bound from ``ell`` mutually unbiased bases of ``H^k``."""
    _positive(ell=ell, d=d, k=k)
    n = k * ell
    if not _congruent(d, k, n):
        raise CongruenceViolated(f"d = {d} is not -{k} mod {n}")
    return n / ((math.sqrt(k) * (ell - 1) + 1) * (d + k) - n)


def steiner_parameters(ell: int, n: int) -> tuple[int, int]:
    """Block count and point degree of a (2, ell, n) Steiner system."""
    if ell < 2 or n < ell or (n - 1) % (ell - 1) or (n * (n - 1)) % (ell * (ell - 1)):
        raise InconsistentDesignParameters(f"no (2,{ell},{n}) Steiner system parameters")
    return n * (n - 1) // (ell * (ell - 1)), (n - 1) // (ell - 1)


def steiner_upper(ell: int, n: int, r: int, d: int, k: int) -> float:
    """Upper bound from a (2, ell, n) Steiner system and a Hadamard matrix of
    order ``r + 1``; ``k`` is the block count."""
    _positive(d=d, k=k)
    blocks, degree = steiner_parameters(ell, n)
    if (blocks, degree) != (k, r):
        raise InconsistentDesignParameters(
            f"(2,{ell},{n}) Steiner system has k={blocks}, r={degree}; got k={k}, r={r}"
        )
    m = n * (r + 1)
    if not _congruent(d, k, m):
        raise CongruenceViolated(f"d = {d} is not -{k} mod {m}")
    return m / ((ell * (r + 1) - r + 1) * (d + k) - m)


@dataclass(frozen=True)
class UpperCandidate:
    construction_id: str
    value: float
    applicable: bool


@dataclass(frozen=True)
class BoundsReport:
    field: Field
    d: int
    k: int
    welch: float
    improved: float
    best_lower: float
    exact: float | None
    upper_candidates: list[UpperCandidate] = dc_field(default_factory=list)

    @property
    def best_upper(self) -> UpperCandidate | None:
        usable = [c for c in self.upper_candidates if c.applicable]
        return min(usable, key=lambda c: (c.value, c.construction_id)) if usable else None

    def as_dict(self) -> dict:
        return {
            "field": self.field.value,
            "d": self.d,
            "k": self.k,
            "welch": self.welch,
            "improved": self.improved,
            "best_lower": self.best_lower,
            "exact": self.exact,
            "upper_candidates": [
                {"construction_id": c.construction_id, "value": c.value, "applicable": c.applicable}
                for c in self.upper_candidates
            ],
        }


def best_lower(field: Field, d: int, k: int, *, k23: bool = False) -> BoundsReport:
    """Assemble both lower bounds and every construction's upper value."""
    from .packings import seed_catalog  # packings depends on this module

    field = Field.parse(field)
    welch = welch_bound(d, k)
    improved = improved_lower_bound(field, d, k)
    candidates = []
    for seed in seed_catalog(field, k, k23=k23):
        value, d_used = seed.best_value(d)
        if value is None:
            candidates.append(UpperCandidate(seed.construction_id, math.inf, False))
            continue
        label = seed.construction_id
        if d_used != d:
            label += f"+fallback-from-{d_used}"
        candidates.append(UpperCandidate(label, value, True))
    return BoundsReport(
        field=field,
        d=d,
        k=k,
        welch=welch,
        improved=improved,
        best_lower=max(welch, improved),
        exact=exact_optimal_value(field, d, k, k23=k23),
        upper_candidates=candidates,
    )
