"""Instance files, seeded generation, bound-vs-spectrum verification and suite runs."""

from __future__ import annotations

import csv
import io
import json
import logging
import math
import os
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Sequence

import numpy as np

from qbound.bounds import EIGENVALUE_BOUNDS, SHORT_NAMES, all_bounds
from qbound.companion import MatrixPolynomial, polynomial_right_eigenpairs, polynomial_right_spectrum
from qbound.errors import DegreeError, MonicityError, ParameterError, ParseError, QBoundError, ShapeError
from qbound.qmatrix import QMatrix
from qbound.quaternion import Quaternion

log = logging.getLogger(__name__)

DEFAULT_TOL = 1e-8
TOL_ENV = "QBOUND_TOL"

CSV_COLUMNS = [
    "id", "k", "n", "rho_r",
    "thm35", "thm36", "thm37", "b1",
    "tightest",
    "slack_thm35", "slack_thm36", "slack_thm37", "slack_b1",
    "elapsed_ms",
]
SHORT_BOUNDS = [SHORT_NAMES[b] for b in EIGENVALUE_BOUNDS]


# PRNG --------------------------------------------------------------------

_MASK64 = (1 << 64) - 1


class SplitMix64:
    """SplitMix64 stream: ``state += 0x9E3779B97F4A7C15`` then the two
    xor-shift-multiply rounds with 0xBF58476D1CE4E5B9 and 0x94D049BB133111EB.

    Doubles use the top 53 bits: ``(x >> 11) * 2**-53`` in [0, 1).
    """

    GAMMA = 0x9E3779B97F4A7C15
    MUL1 = 0xBF58476D1CE4E5B9
    MUL2 = 0x94D049BB133111EB

    def __init__(self, seed: int):
        self.state = seed & _MASK64

    def next_u64(self) -> int:
        self.state = (self.state + self.GAMMA) & _MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * self.MUL1) & _MASK64
        z = ((z ^ (z >> 27)) * self.MUL2) & _MASK64
        return z ^ (z >> 31)

    def next_double(self) -> float:
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def uniform(self, lo: float, hi: float) -> float:
        return lo + (hi - lo) * self.next_double()


def random_polynomial(k: int, n: int, seed: int, scale: float = 1.0) -> MatrixPolynomial:
    """Monic polynomial with every component i.i.d. uniform on [-scale, scale].

    Draw order: A_0 .. A_{k-1}, each row-major, each entry (w, x, y, z).
    """
    if not isinstance(k, int) or k < 1:
        raise ParameterError(f"k must be a positive integer, got {k!r}")
    if not isinstance(n, int) or n < 1:
        raise ParameterError(f"n must be a positive integer, got {n!r}")
    if not (isinstance(scale, (int, float)) and math.isfinite(scale) and scale > 0):
        raise ParameterError(f"scale must be a positive finite number, got {scale!r}")
    rng = SplitMix64(int(seed))
    s = float(scale)
    draws = np.array([rng.uniform(-s, s) for _ in range(k * n * n * 4)])
    data = draws.reshape(k, n, n, 4)
    return MatrixPolynomial([QMatrix(data[i]) for i in range(k)])


# file I/O ------------------------------------------------------------------


def polynomial_to_dict(poly: MatrixPolynomial) -> dict:
    return {"n": poly.n, "k": poly.k, "coeffs": [a.to_nested() for a in poly.coeffs]}


def dumps_polynomial(poly: MatrixPolynomial) -> str:
    return json.dumps(polynomial_to_dict(poly)) + "\n"


def save_polynomial(poly: MatrixPolynomial, path: str | os.PathLike) -> None:
    Path(path).write_text(dumps_polynomial(poly), encoding="utf-8")


def _require_int(doc: dict, key: str, where: str) -> int:
    if key not in doc:
        raise ParseError(f"{where}: missing field {key!r}")
    value = doc[key]
    if isinstance(value, bool) or not isinstance(value, int):
        raise ParseError(f"{where}: field {key!r} must be an integer, got {value!r}")
    return value


def _parse_matrix(raw: Any, n: int, where: str) -> QMatrix:
    if not isinstance(raw, list) or len(raw) != n:
        raise ShapeError(f"{where}: expected {n} rows")
    for r, row in enumerate(raw):
        if not isinstance(row, list) or len(row) != n:
            raise ShapeError(f"{where}: row {r} must have {n} entries")
        for c, q in enumerate(row):
            if (
                not isinstance(q, list)
                or len(q) != 4
                or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in q)
            ):
                raise ShapeError(f"{where}[{r}][{c}]: expected [w, x, y, z] of 4 numbers, got {q!r}")
    return QMatrix(raw)


def polynomial_from_dict(doc: Any, where: str = "<polynomial>") -> MatrixPolynomial:
    if not isinstance(doc, dict):
        raise ParseError(f"{where}: top level must be a JSON object")
    n = _require_int(doc, "n", where)
    k = _require_int(doc, "k", where)
    if "coeffs" not in doc:
        raise ParseError(f"{where}: missing field 'coeffs'")
    if n < 1:
        raise ShapeError(f"{where}: n must be >= 1, got {n}")
    if k < 1:
        raise DegreeError(f"{where}: degree k must be >= 1, got {k}")
    raw = doc["coeffs"]
    if not isinstance(raw, list):
        raise ParseError(f"{where}: field 'coeffs' must be a list")
    if len(raw) != k:
        raise ShapeError(f"{where}: k = {k} but {len(raw)} coefficients given")
    coeffs = [_parse_matrix(m, n, f"{where}: coeffs[{i}]") for i, m in enumerate(raw)]
    leading = None
    if doc.get("leading") is not None:
        leading = _parse_matrix(doc["leading"], n, f"{where}: leading")
    try:
        return MatrixPolynomial(coeffs, leading=leading)
    except MonicityError as exc:
        raise MonicityError(f"{where}: {exc}") from None


def _load_json(path: str | os.PathLike) -> Any:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"{path}: cannot read file ({exc.strerror})") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def load_polynomial(path: str | os.PathLike) -> MatrixPolynomial:
    """Read ``{"n": int, "k": int, "coeffs": [A_0, ..., A_{k-1}]}``."""
    return polynomial_from_dict(_load_json(path), str(path))


def load_scalar_coeffs(path: str | os.PathLike) -> list[Quaternion]:
    """Scalar coefficients a_0 .. a_{k-1}.

    Accepts a bare list of ``[w, x, y, z]``, an object ``{"coeffs": [...]}``
    with such a list, or a regular polynomial file with n = 1.
    """
    doc = _load_json(path)
    where = str(path)
    if isinstance(doc, dict) and "n" in doc:
        poly = polynomial_from_dict(doc, where)
        if poly.n != 1:
            raise ShapeError(f"{where}: scalar polynomial needs n = 1, got n = {poly.n}")
        return [a[0, 0] for a in poly.coeffs]
    if isinstance(doc, dict):
        if "coeffs" not in doc:
            raise ParseError(f"{where}: missing field 'coeffs'")
        doc = doc["coeffs"]
    if not isinstance(doc, list) or not doc:
        raise ParseError(f"{where}: expected a non-empty list of [w, x, y, z] coefficients")
    out = []
    for i, q in enumerate(doc):
        if not isinstance(q, list) or len(q) != 4 or not all(
            isinstance(v, (int, float)) and not isinstance(v, bool) for v in q
        ):
            raise ShapeError(f"{where}: coeffs[{i}] must be [w, x, y, z], got {q!r}")
        out.append(Quaternion.from_seq(q))
    return out


# verification ----------------------------------------------------------------


def verification_tolerance() -> float:
    raw = os.environ.get(TOL_ENV)
    if raw is None or raw.strip() == "":
        return DEFAULT_TOL
    try:
        tol = float(raw)
    except ValueError:
        raise ParameterError(f"{TOL_ENV}={raw!r} is not a number") from None
    if not (math.isfinite(tol) and tol >= 0):
        raise ParameterError(f"{TOL_ENV} must be a nonnegative finite number, got {raw!r}")
    return tol


def is_violation(rho: float, bound: float, tol: float) -> bool:
    return rho > bound + tol * max(1.0, bound)


@dataclass(frozen=True)
class InstanceRecord:
    id: str
    polynomial: MatrixPolynomial
    seed: int | None = None
    source: str = "random"


@dataclass
class VerificationRow:
    id: str
    k: int
    n: int
    rho_r: float | None
    values: dict[str, float | None] = field(default_factory=dict)
    slacks: dict[str, float | None] = field(default_factory=dict)
    tightest_bound: str | None = None
    violations: list[str] = field(default_factory=list)
    errors: list[str] = field(default_factory=list)
    max_residual_ratio: float | None = None
    elapsed_ms: float = 0.0

    @property
    def passed(self) -> bool:
        return not self.violations and not self.errors

    def to_dict(self, timing: bool = True) -> dict:
        return {
            "id": self.id,
            "k": self.k,
            "n": self.n,
            "rho_r": self.rho_r,
            "values": dict(self.values),
            "slacks": dict(self.slacks),
            "tightest": self.tightest_bound,
            "violations": list(self.violations),
            "errors": list(self.errors),
            "max_residual_ratio": self.max_residual_ratio,
            "elapsed_ms": self.elapsed_ms if timing else None,
        }


def verify_instance(
    poly: MatrixPolynomial,
    instance_id: str = "instance",
    tol: float | None = None,
    check_residuals: bool = True,
) -> VerificationRow:
    """Compare every applicable bound with the right spectral radius of the companion matrix.

    Solver failures land in ``row.errors``; nothing is raised.
    """
    tol = verification_tolerance() if tol is None else tol
    start = time.perf_counter()
    row = VerificationRow(instance_id, poly.k, poly.n, None)
    spectrum = None
    try:
        spectrum = polynomial_right_spectrum(poly)
        row.rho_r = spectrum.radius
    except QBoundError as exc:
        row.errors.append(f"spectrum: {type(exc).__name__}: {exc}")

    reports = all_bounds(poly)
    for rep in reports:
        short = SHORT_NAMES[rep.bound_name]
        row.values[short] = rep.value
        if not rep.applicable:
            row.slacks[short] = None
            if not rep.skip_reason.startswith(rep.bound_name + " requires degree"):
                row.errors.append(f"{short}: {rep.skip_reason}")
            continue
        if rep.tightest:
            row.tightest_bound = short
        if row.rho_r is None:
            row.slacks[short] = None
            continue
        row.slacks[short] = rep.value - row.rho_r
        if is_violation(row.rho_r, rep.value, tol):
            row.violations.append(f"{short}: rho_r={row.rho_r!r} > bound={rep.value!r}")

    if check_residuals and spectrum is not None:
        try:
            pairs = polynomial_right_eigenpairs(poly, spectrum)
            ratios = [p.residual / p.threshold for p in pairs]
            row.max_residual_ratio = max(ratios, default=0.0)
            bad = [p for p in pairs if not p.ok]
            if bad:
                row.errors.append(
                    f"residual: {len(bad)} eigenpair(s) above threshold (worst ratio {row.max_residual_ratio:.3e})"
                )
        except QBoundError as exc:
            row.errors.append(f"eigenpair: {type(exc).__name__}: {exc}")

    row.elapsed_ms = (time.perf_counter() - start) * 1e3
    return row


# suites ------------------------------------------------------------------------


@dataclass
class SuiteConfig:
    instances: list[InstanceRecord]
    jobs: int = 1
    check_residuals: bool = True
    source: dict = field(default_factory=dict)


def random_instances(
    seeds: Iterable[int], ks: Sequence[int], ns: Sequence[int], scale: float = 1.0
) -> list[InstanceRecord]:
    """Seed number i (in iteration order) gets ``k = ks[i % len(ks)]`` and
    ``n = ns[(i // len(ks)) % len(ns)]``, cycling through every (k, n) pair."""
    if not ks or not ns:
        raise ParameterError("k and n lists must be non-empty")
    out = []
    for i, seed in enumerate(seeds):
        k = ks[i % len(ks)]
        n = ns[(i // len(ks)) % len(ns)]
        out.append(InstanceRecord(
            f"r{seed:08d}-k{k}-n{n}", random_polynomial(k, n, seed, scale), seed, "random"
        ))
    return out


def _int_list(value: Any, key: str) -> list[int]:
    if isinstance(value, int) and not isinstance(value, bool):
        return [value]
    if isinstance(value, list) and all(isinstance(v, int) and not isinstance(v, bool) for v in value):
        return list(value)
    raise ParseError(f"suite config: {key!r} must be an integer or a list of integers")


def suite_config_from_dict(doc: Any, base_dir: str | os.PathLike = ".") -> SuiteConfig:
    """Build a suite from a config object.

    Keys (all optional):
      ``random``: ``{"seed_start": int, "count": int, "k": [..], "n": [..], "scale": float}``
      ``seeds``: explicit seed list, used instead of seed_start/count
      ``files``: polynomial files, relative to the config's directory
      ``jobs``: worker processes, ``check_residuals``: bool
    """
    if not isinstance(doc, dict):
        raise ParseError("suite config: top level must be a JSON object")
    instances: list[InstanceRecord] = []
    base = Path(base_dir)
    for i, f in enumerate(doc.get("files", []) or []):
        path = Path(f)
        if not path.is_absolute():
            path = base / path
        instances.append(InstanceRecord(f"f{i:04d}-{path.stem}", load_polynomial(path), None, "file"))
    rnd = doc.get("random")
    if rnd is not None:
        if not isinstance(rnd, dict):
            raise ParseError("suite config: 'random' must be an object")
        if "seeds" in rnd:
            seeds = _int_list(rnd["seeds"], "seeds")
        else:
            start = _int_list(rnd.get("seed_start", 0), "seed_start")[0]
            count = _int_list(rnd.get("count", 0), "count")[0]
            if count < 0:
                raise ParameterError("suite config: count must be >= 0")
            seeds = list(range(start, start + count))
        ks = _int_list(rnd.get("k", [4, 5, 6, 7, 8]), "k")
        ns = _int_list(rnd.get("n", [1, 2, 3, 4]), "n")
        scale = rnd.get("scale", 1.0)
        if isinstance(scale, bool) or not isinstance(scale, (int, float)):
            raise ParseError("suite config: 'scale' must be a number")
        instances.extend(random_instances(seeds, ks, ns, float(scale)))
    ids = [r.id for r in instances]
    if len(set(ids)) != len(ids):
        raise ParameterError("suite config: instance ids are not unique (repeated seed or file?)")
    jobs = doc.get("jobs", 1)
    if isinstance(jobs, bool) or not isinstance(jobs, int) or jobs < 1:
        raise ParseError("suite config: 'jobs' must be a positive integer")
    return SuiteConfig(instances, jobs, bool(doc.get("check_residuals", True)), doc)


def load_suite_config(path: str | os.PathLike) -> SuiteConfig:
    return suite_config_from_dict(_load_json(path), Path(path).parent)


def _fmt(value: float | None) -> str:
    return "NA" if value is None else repr(float(value))


def rows_to_csv(rows: Sequence[VerificationRow], timing: bool = False) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in rows:
        writer.writerow(
            [r.id, r.k, r.n, _fmt(r.rho_r)]
            + [_fmt(r.values.get(b)) for b in SHORT_BOUNDS]
            + [r.tightest_bound or "NA"]
            + [_fmt(r.slacks.get(b)) for b in SHORT_BOUNDS]
            + [f"{r.elapsed_ms:.3f}" if timing else "NA"]
        )
    return buf.getvalue()


def summarize(rows: Sequence[VerificationRow], tol: float, tol_source: str) -> dict:
    per_bound = {}
    for b in SHORT_BOUNDS:
        slacks = [r.slacks[b] for r in rows if r.slacks.get(b) is not None]
        wins = sum(1 for r in rows if r.tightest_bound == b)
        computed = len(slacks)
        per_bound[b] = {
            "computed": computed,
            "mean_slack": statistics.fmean(slacks) if slacks else 0.0,
            "median_slack": statistics.median(slacks) if slacks else 0.0,
            "min_slack": min(slacks) if slacks else 0.0,
            "tightest_wins": wins,
            "win_rate": wins / len(rows) if rows else 0.0,
        }
    return {
        "instances": len(rows),
        "violations": sum(1 for r in rows if r.violations),
        "violation_details": [f"{r.id}: {v}" for r in rows for v in r.violations],
        "solver_errors": sum(1 for r in rows if r.errors),
        "error_details": [f"{r.id}: {e}" for r in rows for e in r.errors],
        "tolerance": tol,
        "tolerance_source": tol_source,
        "max_residual_ratio": max(
            (r.max_residual_ratio for r in rows if r.max_residual_ratio is not None), default=0.0
        ),
        "per_bound": per_bound,
    }


def _verify_record(args) -> VerificationRow:
    rec, tol, check = args
    return verify_instance(rec.polynomial, rec.id, tol, check)


@dataclass
class SuiteResult:
    rows: list[VerificationRow]
    summary: dict
    csv_path: Path
    summary_path: Path

    @property
    def exit_code(self) -> int:
        return 1 if self.summary["violations"] or self.summary["solver_errors"] else 0


def run_suite(config: SuiteConfig, out_dir: str | os.PathLike, timing: bool = False) -> SuiteResult:
    """Verify every instance and write ``results.csv`` and ``summary.json`` into out_dir.

    Rows are written in instance-id order whatever the completion order.
    Without ``timing`` the outputs are byte-identical across reruns.
    """
    tol = verification_tolerance()
    tol_source = TOL_ENV if os.environ.get(TOL_ENV, "").strip() else "default"
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise ParseError(f"{out}: cannot create output directory ({exc.strerror})") from None

    work = [(rec, tol, config.check_residuals) for rec in config.instances]
    if config.jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            rows = list(pool.map(_verify_record, work, chunksize=4))
    else:
        rows = [_verify_record(w) for w in work]
    rows.sort(key=lambda r: r.id)
    for r in rows:
        if not r.passed:
            log.warning("%s: violations=%s errors=%s", r.id, r.violations, r.errors)

    summary = summarize(rows, tol, tol_source)
    if timing:
        summary["total_elapsed_ms"] = sum(r.elapsed_ms for r in rows)
    csv_path = out / "results.csv"
    summary_path = out / "summary.json"
    try:
        csv_path.write_text(rows_to_csv(rows, timing), encoding="utf-8")
        summary_path.write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"{out}: cannot write report ({exc.strerror})") from None
    return SuiteResult(rows, summary, csv_path, summary_path)
