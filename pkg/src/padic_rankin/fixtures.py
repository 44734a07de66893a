"""JSON fixtures for eigenform records; integers travel as decimal strings."""

from __future__ import annotations

import json
import os
from pathlib import Path

from .modforms import EigenformRecord, cusp_eigenforms
from .padic import PadicScalar
from .qexp import QExpansion

CACHE_ENV = "PADIC_RANKIN_CACHE"
SCHEMA_VERSION = 1


def record_to_json(f: EigenformRecord) -> dict:
    q = f.qexp
    return {
        "schema": SCHEMA_VERSION,
        "p": f.p,
        "N": f.N,
        "weight": f.weight,
        "prec": q.prec,
        "exact": q.is_exact,
        "coeffs": [str(c) for c in q.ints()],
        "eigenvalues": {str(ell): str(int(a)) for ell, a in sorted(f.eigenvalues.items())},
        "ordinary": f.ordinary,
        "alpha": None if f.alpha is None else f.alpha.to_json(),
        "level_exponent": f.level_exponent,
        "coords": [str(c) for c in f.coords],
    }


def record_from_json(d: dict) -> EigenformRecord:
    p, N, k = int(d["p"]), int(d["N"]), int(d["weight"])
    coeffs = [int(c) for c in d["coeffs"]]
    if len(coeffs) != int(d["prec"]) + 1:
        raise ValueError("fixture prec does not match its coefficient list")
    q = QExpansion.exact(coeffs, k) if d.get("exact", True) else QExpansion.modular(coeffs, p, N, k)
    alpha = None if d.get("alpha") is None else PadicScalar.from_json(d["alpha"], p)
    return EigenformRecord(
        k, q, {int(ell): int(a) for ell, a in d["eigenvalues"].items()}, p, N,
        bool(d["ordinary"]), alpha, int(d.get("level_exponent", 0)),
        tuple(int(c) for c in d.get("coords", ["1"])))


def dumps(obj) -> str:
    """Canonical JSON: sorted keys, fixed separators, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2, separators=(",", ": ")) + "\n"


def save_records(path, records) -> None:
    Path(path).write_text(dumps([record_to_json(f) for f in records]))


def load_records(path) -> list[EigenformRecord]:
    return [record_from_json(d) for d in json.loads(Path(path).read_text())]


def cache_dir(override=None) -> Path | None:
    d = override or os.environ.get(CACHE_ENV)
    return Path(d) if d else None


def eigenforms_cached(k: int, p: int, N: int, prec: int, directory=None) -> list[EigenformRecord]:
    """cusp_eigenforms with an optional on-disk fixture cache."""
    d = cache_dir(directory)
    if d is None:
        return cusp_eigenforms(k, p, N, prec)
    path = d / f"eigenforms_p{p}_k{k}_N{N}_M{prec}.json"
    if path.exists():
        return load_records(path)
    records = cusp_eigenforms(k, p, N, prec)
    d.mkdir(parents=True, exist_ok=True)
    save_records(path, records)
    return records
