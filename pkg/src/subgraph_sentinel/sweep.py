"""Phase-diagram sweeps: calibrate and measure risk over a parameter grid.

Each grid cell is a parameter tuple (N, n, p0, p1, model); crossing the
cells with a detector list yields one risk row per pair.  Rows are
checkpointed as JSON lines keyed by (cell hash, detector, seed), so an
interrupted sweep resumes without redoing finished work and the final
table is identical to an uninterrupted run.  Replicate-level randomness
is tied to stream indices, never to workers or scheduling, so the
numbers are reproducible at any parallelism; only the seconds column
reflects the wall clock of whichever run produced the row.
"""

from __future__ import annotations

import hashlib
import json
import time

from .calibration import calibrate
from .errors import InvalidSpecError, SentinelError
from .models import ModelSpec
from .regimes import classify_regime
from .risk import estimate_risk

CSV_HEADER = (
    "N,n,p0,p1,model,detector,alpha,replicates,"
    "type1,type2,gamma,ci_half,regime,seconds"
)

MODEL_PLANTED = "planted"
MODEL_FIXED_DEGREE = "fixed_degree"

# detectors whose statistic is parameterized by the subset size
_SIZED_PARAMS = {
    "scan": lambda n: {"n": n, "mode": "branch_bound"},
    "glr": lambda n: {"n": n},
    "relaxed_scan": lambda n: {"n": n},
    "sparse_eig": lambda n: {"n": n},
    "densest_at_least": lambda n: {"n": n},
}


def default_params(detector_id: str, n: int) -> dict:
    maker = _SIZED_PARAMS.get(detector_id)
    return maker(int(n)) if maker else {}


def normalize_cell(cell: dict) -> dict:
    """Canonical cell dict with validated fields and fixed key order."""
    required = {"N", "n", "p0", "p1"}
    allowed = required | {"model"}
    extra = set(cell) - allowed
    if extra:
        raise InvalidSpecError(f"unknown cell keys {sorted(extra)}")
    missing = required - set(cell)
    if missing:
        raise InvalidSpecError(f"cell is missing keys {sorted(missing)}")
    model = cell.get("model", MODEL_PLANTED)
    if model not in (MODEL_PLANTED, MODEL_FIXED_DEGREE):
        raise InvalidSpecError(f"unknown cell model {model!r}")
    return {
        "N": int(cell["N"]),
        "n": int(cell["n"]),
        "p0": float(cell["p0"]),
        "p1": float(cell["p1"]),
        "model": model,
    }


def cell_hash(cell: dict) -> str:
    blob = json.dumps(normalize_cell(cell), sort_keys=True,
                      separators=(",", ":"))
    return hashlib.blake2s(blob.encode(), digest_size=8).hexdigest()


def _derive_seed(master_seed: int, *parts: str) -> int:
    blob = "|".join([str(int(master_seed)), *parts]).encode()
    return int.from_bytes(
        hashlib.blake2s(blob, digest_size=8).digest(), "big"
    ) >> 1


def cell_specs(cell: dict):
    """(null_spec, alt_spec) for a normalized cell.

    The planted model keeps the caller's p0 as the ambient density; the
    fixed-degree model reads p0 as the off-block density and tests
    against the matching-edge-count null.  The alternative uses the
    fixed prefix planted set, which by node exchangeability has the same
    rejection probability as any other set of that size.
    """
    witness = tuple(range(cell["n"]))
    if cell["model"] == MODEL_PLANTED:
        alt = ModelSpec.planted(cell["N"], cell["p0"], cell["p1"],
                                cell["n"], planted_set=witness)
    else:
        alt = ModelSpec.planted_fixed_degree(cell["N"], cell["p0"],
                                             cell["p1"], cell["n"],
                                             planted_set=witness)
    return alt.matched_null(), alt


def run_cell(
    cell: dict,
    detector_id: str,
    alpha: float,
    replicates: int,
    seed: int,
    workers: int | None = None,
) -> dict:
    """One sweep row: calibrate on the cell's null, then estimate risk.

    Detector or model failures land in the row's error field instead of
    aborting, so a sweep covers what it can and reports the rest.
    """
    cell = normalize_cell(cell)
    key = cell_hash(cell)
    knowledge = "known" if cell["model"] == MODEL_PLANTED else "unknown"
    row = {
        "N": cell["N"], "n": cell["n"], "p0": cell["p0"], "p1": cell["p1"],
        "model": cell["model"], "detector": detector_id,
        "alpha": float(alpha), "replicates": int(replicates),
        "type1": None, "type2": None, "gamma": None, "ci_half": None,
        "regime": None, "seconds": None, "error": None,
        "cell_hash": key, "seed": int(seed),
    }
    start = time.perf_counter()
    try:
        report = classify_regime(cell["N"], cell["n"], cell["p0"],
                                 cell["p1"], knowledge=knowledge)
        row["regime"] = report.label
        null_spec, alt_spec = cell_specs(cell)
        params = default_params(detector_id, cell["n"])
        test = calibrate(
            detector_id, params, null_spec, alpha, replicates,
            _derive_seed(seed, key, detector_id, "cal"), workers,
        )
        risk = estimate_risk(
            test, null_spec, alt_spec, replicates,
            _derive_seed(seed, key, detector_id, "risk"), workers,
        )
        row["type1"] = risk.type1_hat
        row["type2"] = risk.type2_hat
        row["gamma"] = risk.gamma_hat
        row["ci_half"] = risk.gamma_half_width
    except SentinelError as exc:
        row["error"] = f"{type(exc).__name__}: {exc}"
    row["seconds"] = time.perf_counter() - start
    return row


def _load_checkpoint(path) -> dict:
    done = {}
    try:
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                try:
                    row = json.loads(line)
                except json.JSONDecodeError:
                    continue  # a kill can truncate the final line
                try:
                    done[(row["cell_hash"], row["detector"], row["seed"])] = row
                except (KeyError, TypeError):
                    continue
    except FileNotFoundError:
        pass
    return done


def phase_sweep(
    grid,
    detectors,
    alpha: float,
    replicates: int,
    seed: int,
    checkpoint_path=None,
    workers: int | None = None,
    progress=None,
) -> list[dict]:
    """Risk rows for every (cell, detector) pair of the grid.

    Rows come back in grid-by-detector order regardless of how they were
    produced.  With checkpoint_path set, finished rows are appended to
    that file as they complete and are reused verbatim on resume.
    """
    cells = [normalize_cell(c) for c in grid]
    if not cells:
        raise InvalidSpecError("grid must contain at least one cell")
    detectors = list(detectors)
    if not detectors:
        raise InvalidSpecError("need at least one detector")
    done = _load_checkpoint(checkpoint_path) if checkpoint_path else {}
    sink = None
    if checkpoint_path:
        sink = open(checkpoint_path, "a", encoding="utf-8")
    rows = []
    try:
        for cell in cells:
            key = cell_hash(cell)
            for det in detectors:
                found = done.get((key, det, int(seed)))
                if found is not None:
                    rows.append(found)
                    continue
                row = run_cell(cell, det, alpha, replicates, seed, workers)
                rows.append(row)
                if sink is not None:
                    sink.write(json.dumps(row, sort_keys=True) + "\n")
                    sink.flush()
                if progress is not None:
                    progress(row)
    finally:
        if sink is not None:
            sink.close()
    return rows


def _csv_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return format(value, ".10g")
    return str(value)


def rows_to_csv(rows) -> str:
    """Fixed-header CSV; error rows leave their unavailable fields empty."""
    names = CSV_HEADER.split(",")
    lines = [CSV_HEADER]
    for row in rows:
        lines.append(",".join(_csv_cell(row.get(name)) for name in names))
    return "\n".join(lines) + "\n"


def rows_to_json_lines(rows) -> str:
    return "".join(json.dumps(row, sort_keys=True) + "\n" for row in rows)
