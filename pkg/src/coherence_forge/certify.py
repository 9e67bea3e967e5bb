"""Certificates for Gram matrices, bound tables and file persistence."""
from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from dataclasses import dataclass, field as dc_field

import jsonschema
import numpy as np

from . import bounds
from .errors import SizeMismatch
from .linalg import (
    HERMITIAN_TOL,
    RANK_TOL,
    Field,
    GramSystem,
    as_field,
    coherence,
    format_matrix,
    hermitian_defect,
    hermitian_eig,
)
from .packings import construct_best

SCHEMA_VERSION = 1
DEFAULT_TOL = 1e-8
TABLE_COLUMNS = ("field", "d", "k", "welch", "improved", "exact", "achieved", "construction", "optimal")

CERTIFICATE_SCHEMA = {
    "type": "object",
    "required": [
        "spec", "field", "d", "k", "coherence", "welch", "improved", "best_lower",
        "exact", "construction_id", "checks", "optimal", "tolerance",
    ],
    "properties": {
        "spec": {"const": SCHEMA_VERSION},
        "field": {"enum": ["R", "C"]},
        "d": {"type": "integer", "minimum": 1},
        "k": {"type": "integer", "minimum": 1},
        "coherence": {"type": "number", "minimum": 0},
        "welch": {"type": "number"},
        "improved": {"type": "number"},
        "best_lower": {"type": "number"},
        "exact": {"type": ["number", "null"]},
        "construction_id": {"type": "string", "minLength": 1},
        "checks": {
            "type": "object",
            "required": ["hermitian", "unit_diagonal", "psd", "rank_le_d"],
            "properties": {
                name: {"type": "boolean"}
                for name in ("hermitian", "unit_diagonal", "psd", "rank_le_d", "rank_eq_d")
            },
        },
        "rank": {"type": "integer", "minimum": 0},
        "min_eigenvalue": {"type": "number"},
        "optimal": {"type": "boolean"},
        "tolerance": {"type": "number", "exclusiveMinimum": 0},
    },
}


@dataclass(frozen=True)
class Certificate:
    field: Field
    d: int
    k: int
    coherence: float
    welch: float
    improved: float
    best_lower: float
    exact: float | None
    construction_id: str
    checks: dict[str, bool] = dc_field(default_factory=dict)
    optimal: bool = False
    tolerance: float = DEFAULT_TOL
    rank: int = 0
    min_eigenvalue: float = 0.0

    @property
    def valid(self) -> bool:
        """Whether the matrix is an admissible Gram matrix at all."""
        return all(self.checks.values())

    def as_dict(self) -> dict:
        return {
            "spec": SCHEMA_VERSION,
            "field": self.field.value,
            "d": self.d,
            "k": self.k,
            "coherence": self.coherence,
            "welch": self.welch,
            "improved": self.improved,
            "best_lower": self.best_lower,
            "exact": self.exact,
            "construction_id": self.construction_id,
            "checks": dict(self.checks),
            "rank": self.rank,
            "min_eigenvalue": self.min_eigenvalue,
            "optimal": self.optimal,
            "tolerance": self.tolerance,
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2)

    @classmethod
    def from_dict(cls, obj: dict) -> "Certificate":
        validate_certificate(obj)
        return cls(
            field=Field.parse(obj["field"]),
            d=obj["d"],
            k=obj["k"],
            coherence=obj["coherence"],
            welch=obj["welch"],
            improved=obj["improved"],
            best_lower=obj["best_lower"],
            exact=obj["exact"],
            construction_id=obj["construction_id"],
            checks=dict(obj["checks"]),
            optimal=obj["optimal"],
            tolerance=obj["tolerance"],
            rank=obj.get("rank", 0),
            min_eigenvalue=obj.get("min_eigenvalue", 0.0),
        )


def validate_certificate(obj: dict) -> None:
    """Schema check plus the optimality invariant.

    Raises ``jsonschema.ValidationError`` on a malformed certificate and
    ``ValueError`` when ``optimal`` is claimed without its preconditions.
    """
    jsonschema.validate(obj, CERTIFICATE_SCHEMA)
    if obj["optimal"]:
        checks = obj["checks"]
        if not all(checks[name] for name in ("hermitian", "unit_diagonal", "psd", "rank_le_d")):
            raise ValueError("optimal certificate with a failed check")
        if obj["exact"] is None:
            raise ValueError("optimal certificate without an exact optimal value")
        if abs(obj["coherence"] - obj["best_lower"]) > obj["tolerance"]:
            raise ValueError("optimal certificate whose coherence misses the lower bound")


def verify_gram(
    a,
    field: Field,
    d: int,
    k: int,
    tol: float = DEFAULT_TOL,
    *,
    construction_id: str = "external",
    strict_rank: bool = False,
    k23: bool = False,
) -> Certificate:
    """Check that ``a`` is the Gram matrix of ``d + k`` unit vectors in H^d
    and decide whether it attains the proven optimum.

    Rank is counted relative to the largest eigenvalue; ``rank <= d`` passes
    unless ``strict_rank`` demands equality.
    """
    field = Field.parse(field)
    a = np.asarray(a)
    n = d + k
    if a.ndim != 2 or a.shape != (n, n):
        raise SizeMismatch(f"matrix has shape {a.shape}, expected {(n, n)}")
    a = as_field(a, field)
    hermitian = hermitian_defect(a) <= max(tol, HERMITIAN_TOL)
    unit_diag = bool(np.abs(np.diag(a) - 1).max() <= tol)
    sym = (a + a.conj().T) / 2
    w = hermitian_eig(sym, hermitian_tol=np.inf).eigenvalues
    top = np.abs(w).max()
    rank = int(np.count_nonzero(np.abs(w) > RANK_TOL * top)) if top > 0 else 0
    psd = bool(w[0] >= -tol * max(1.0, top))
    checks = {
        "hermitian": bool(hermitian),
        "unit_diagonal": unit_diag,
        "psd": psd,
        "rank_le_d": rank == d if strict_rank else rank <= d,
    }
    report = bounds.best_lower(field, d, k, k23=k23)
    coh = coherence(a)
    optimal = (
        all(checks.values())
        and report.exact is not None
        and abs(coh - report.best_lower) <= tol
    )
    return Certificate(
        field=field,
        d=d,
        k=k,
        coherence=coh,
        welch=report.welch,
        improved=report.improved,
        best_lower=report.best_lower,
        exact=report.exact,
        construction_id=construction_id,
        checks=checks,
        optimal=bool(optimal),
        tolerance=tol,
        rank=rank,
        min_eigenvalue=float(w[0]),
    )


def certify_construction(field: Field, d: int, k: int, tol: float = DEFAULT_TOL, *, k23: bool = False):
    """Build the best shipped system and certify it; returns (construction, certificate)."""
    c = construct_best(field, d, k, k23=k23)
    cert = verify_gram(c.gram.gram, field, d, k, tol, construction_id=c.construction_id, k23=k23)
    return c, cert


# ---------------------------------------------------------------------------
# tables

@dataclass(frozen=True)
class TableRow:
    field: Field
    d: int
    k: int
    welch: float
    improved: float
    exact: float | None
    achieved: float
    construction: str
    optimal: bool

    @property
    def fallback(self) -> bool:
        return "+fallback-from-" in self.construction

    def as_csv_row(self) -> list[str]:
        def num(x):
            return "" if x is None else format(x, ".17g")

        return [
            self.field.value, str(self.d), str(self.k), num(self.welch), num(self.improved),
            num(self.exact), num(self.achieved), self.construction, str(self.optimal).lower(),
        ]


def emit_table(field: Field, k: int, d_min: int, d_max: int, *, tol: float = DEFAULT_TOL, k23: bool = False) -> list[TableRow]:
    field = Field.parse(field)
    if d_min > d_max:
        raise ValueError("d_min must not exceed d_max")
    rows = []
    for d in range(d_min, d_max + 1):
        c, cert = certify_construction(field, d, k, tol, k23=k23)
        rows.append(
            TableRow(field, d, k, cert.welch, cert.improved, cert.exact, cert.coherence,
                     c.construction_id, cert.optimal)
        )
    return rows


def table_csv(rows: list[TableRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(TABLE_COLUMNS)
    for row in rows:
        writer.writerow(row.as_csv_row())
    return buf.getvalue()


# ---------------------------------------------------------------------------
# persistence

def atomic_write(path, text: str) -> None:
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def gram_header(g: GramSystem, construction_id: str) -> dict:
    return {
        "spec": SCHEMA_VERSION,
        "field": g.field.value,
        "d": g.d,
        "k": g.k,
        "coherence": g.coherence,
        "construction_id": construction_id,
    }


def write_construction(prefix, construction, certificate: Certificate) -> dict[str, str]:
    """Write ``PREFIX.gram.txt``, ``PREFIX.gram.json`` and ``PREFIX.cert.json``."""
    prefix = os.fspath(prefix)
    paths = {
        "gram": prefix + ".gram.txt",
        "header": prefix + ".gram.json",
        "certificate": prefix + ".cert.json",
    }
    g = construction.gram
    atomic_write(paths["gram"], format_matrix(g.gram, g.field))
    atomic_write(paths["header"], json.dumps(gram_header(g, construction.construction_id), indent=2) + "\n")
    atomic_write(paths["certificate"], certificate.to_json() + "\n")
    return paths
