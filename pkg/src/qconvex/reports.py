"""Scenario files, certificate reports and their serialization.

Scenario files are JSON objects::

    {
      "n": 4, "q": 2, "p": 1,
      "ambient": {"c": 1.0},                 # or {"eigenvalues": [...]} (sorted)
      "points": [{"curvatures": [-1, 1, 1, 1]}],
      "diameter": 3.14,                      # optional
      "flags": {"ambient_strict_at_point": false}   # optional
    }

Unknown keys are rejected.  Structured reports are JSON with sorted keys;
:func:`parse_report` inverts :func:`render` exactly.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from math import comb
from pathlib import Path
from typing import Any

import jsonschema

from . import __version__
from .betti_engine import (
    BettiCertificate,
    DegreeStatus,
    HypersurfaceSample,
    Rule,
    Status,
    certify,
)
from .convexity_bounds import bochner_pointwise_bound, qconvex_margin, tmin
from .curvature_bochner import AmbientModel
from .errors import DomainError, ScenarioParseError, ScenarioValidationError

REPORT_SCHEMA_VERSION = 1

_number = {"type": "number"}

SCENARIO_SCHEMA: dict[str, Any] = {
    "type": "object",
    "additionalProperties": False,
    "required": ["n", "q", "p", "ambient", "points"],
    "properties": {
        "n": {"type": "integer", "minimum": 3},
        "q": {"type": "integer", "minimum": 1},
        "p": {"type": "integer", "minimum": 1},
        "ambient": {
            "type": "object",
            "additionalProperties": False,
            "minProperties": 1,
            "maxProperties": 1,
            "properties": {
                "c": _number,
                "eigenvalues": {"type": "array", "items": _number, "minItems": 1},
            },
        },
        "points": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "additionalProperties": False,
                "required": ["curvatures"],
                "properties": {"curvatures": {"type": "array", "items": _number}},
            },
        },
        "diameter": {"type": "number", "exclusiveMinimum": 0},
        "flags": {
            "type": "object",
            "additionalProperties": False,
            "properties": {"ambient_strict_at_point": {"type": "boolean"}},
        },
    },
}

REPORT_KEYS = {"kind", "schema_version", "version", "tolerance", "data"}


@dataclass(frozen=True)
class Scenario:
    n: int
    q: int
    p: int
    points: tuple[tuple[float, ...], ...]
    c: float | None = None
    eigenvalues: tuple[float, ...] | None = None
    diameter: float | None = None
    ambient_strict_at_point: bool = False

    def sample(self) -> HypersurfaceSample:
        return HypersurfaceSample(self.n, self.points, self.q, self.diameter)

    def ambient(self) -> AmbientModel:
        return AmbientModel(self.n, self.p, c=self.c, eigenvalues=self.eigenvalues,
                            strict_at_point=self.ambient_strict_at_point)


def _path(err) -> tuple:
    return tuple(err.absolute_path)


def _fmt_path(path) -> str:
    return "$" + "".join(f"[{p}]" if isinstance(p, int) else f".{p}" for p in path)


def parse_scenario(source) -> Scenario:
    """Parse and validate a scenario from a path, JSON text, or dict.

    Raises
    ------
    ScenarioParseError
        Malformed JSON or a schema violation; carries the field path.
    ScenarioValidationError
        The data parse but the first listed point is not q-nonnegative.
    """
    if isinstance(source, dict):
        data = source
    else:
        if isinstance(source, str) and source.lstrip().startswith("{"):
            text = source
        else:
            try:
                text = Path(source).read_text()
            except OSError as exc:
                raise ScenarioParseError(f"cannot read scenario: {exc}") from exc
        try:
            data = json.loads(text, parse_constant=_reject_constant)
        except json.JSONDecodeError as exc:
            raise ScenarioParseError(f"invalid JSON: {exc}") from exc

    validator = jsonschema.Draft202012Validator(SCENARIO_SCHEMA)
    errors = sorted(validator.iter_errors(data), key=lambda e: list(map(str, e.absolute_path)))
    if errors:
        err = errors[0]
        raise ScenarioParseError(f"{_fmt_path(_path(err))}: {err.message}", _path(err))

    n, q, p = data["n"], data["q"], data["p"]
    if not 1 <= q <= n - 1:
        raise ScenarioParseError(f"$.q: must lie in [1, {n - 1}]", ("q",))
    if not 1 <= p <= n // 2:
        raise ScenarioParseError(f"$.p: must lie in [1, {n // 2}]", ("p",))
    for idx, pt in enumerate(data["points"]):
        if len(pt["curvatures"]) != n:
            path = ("points", idx, "curvatures")
            raise ScenarioParseError(f"{_fmt_path(path)}: expected {n} values, got {len(pt['curvatures'])}", path)
    amb = data["ambient"]
    eig = None
    if "eigenvalues" in amb:
        eig = tuple(float(v) for v in amb["eigenvalues"])
        if len(eig) != comb(n + 1, 2):
            path = ("ambient", "eigenvalues")
            raise ScenarioParseError(f"{_fmt_path(path)}: expected {comb(n + 1, 2)} values, got {len(eig)}", path)
        if any(b < a for a, b in zip(eig, eig[1:])):
            raise ScenarioParseError("$.ambient.eigenvalues: must be sorted ascending", ("ambient", "eigenvalues"))

    scenario = Scenario(
        n=n, q=q, p=p,
        points=tuple(tuple(float(v) for v in pt["curvatures"]) for pt in data["points"]),
        c=float(amb["c"]) if "c" in amb else None,
        eigenvalues=eig,
        diameter=float(data["diameter"]) if "diameter" in data else None,
        ambient_strict_at_point=bool(data.get("flags", {}).get("ambient_strict_at_point", False)),
    )
    for idx, k in enumerate(scenario.points):
        m = qconvex_margin(k, q)
        if not m.nonnegative:
            raise ScenarioValidationError(
                f"$.points[{idx}]: not {q}-convex, margin {m.margin!r}", point_index=idx, margin=m.margin
            )
    return scenario


def _reject_constant(name):
    raise ScenarioParseError(f"non-finite number {name} is not allowed")


@dataclass(frozen=True)
class Report:
    """A self-describing result; ``data`` holds plain JSON values only."""

    kind: str
    data: dict = field(default_factory=dict)
    tolerance: float | None = None
    version: str = __version__
    schema_version: int = REPORT_SCHEMA_VERSION

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "schema_version": self.schema_version,
            "version": self.version,
            "tolerance": self.tolerance,
            "data": self.data,
        }

    @property
    def certificate(self) -> BettiCertificate:
        if self.kind != "certificate":
            raise DomainError(f"a {self.kind} report carries no certificate")
        return certificate_from_dict(self.data["certificate"])


def render(report: Report, fmt: str = "structured") -> str:
    if fmt == "structured":
        return json.dumps(report.to_dict(), sort_keys=True, indent=2, allow_nan=False) + "\n"
    if fmt == "text":
        return _render_text(report)
    raise DomainError(f"unknown format {fmt!r}")


def parse_report(text: str) -> Report:
    raw = json.loads(text)
    unknown = set(raw) - REPORT_KEYS
    if unknown:
        raise ScenarioParseError(f"unknown report fields: {sorted(unknown)}")
    if raw.get("schema_version") != REPORT_SCHEMA_VERSION:
        raise ScenarioParseError(f"unsupported report schema version {raw.get('schema_version')!r}")
    return Report(kind=raw["kind"], data=raw["data"], tolerance=raw["tolerance"],
                  version=raw["version"], schema_version=raw["schema_version"])


def certificate_to_dict(cert: BettiCertificate) -> dict:
    out = asdict(cert)
    out["degrees"] = [dict(asdict(d), status=d.status.value, rule=d.rule.value) for d in cert.degrees]
    out["notes"] = list(cert.notes)
    return out


def certificate_from_dict(data: dict) -> BettiCertificate:
    degrees = tuple(
        DegreeStatus(**dict(d, status=Status(d["status"]), rule=Rule(d["rule"]))) for d in data["degrees"]
    )
    return BettiCertificate(data["n"], data["p"], data["q"], data["c"], degrees, tuple(data["notes"]))


def _point_diagnostics(scenario: Scenario, c: float) -> list[dict]:
    n, q, p = scenario.n, scenario.q, scenario.p
    out = []
    for idx, k in enumerate(scenario.points):
        m = qconvex_margin(k, q)
        H = sum(k) / n
        bounds = {}
        for ell in range(1, p + 1):
            if ell >= q or ell <= min(q - 1, n - q):
                bounds[str(ell)] = {
                    "bochner_bound": bochner_pointwise_bound(c, n, q, ell, max(H, 0.0)),
                    "tmin": tmin(k, ell),
                }
        out.append({"index": idx, "curvatures": list(k), "H": H, "q_margin": m.margin,
                    "margin_status": m.status.value, "by_degree": bounds})
    return out


def run_scenario(source, *, tol: float = 1e-10, **certify_options) -> Report:
    """Certify a scenario and wrap the result with per-point diagnostics."""
    scenario = parse_scenario(source)
    cert = certify(scenario.sample(), scenario.ambient(), scenario.p, tol=tol, **certify_options)
    data = {
        "scenario": {"n": scenario.n, "q": scenario.q, "p": scenario.p, "c": cert.c,
                     "diameter": scenario.diameter,
                     "ambient_strict_at_point": scenario.ambient_strict_at_point},
        "certificate": certificate_to_dict(cert),
        "points": _point_diagnostics(scenario, cert.c),
    }
    return Report("certificate", data, tolerance=tol)


def _render_text(report: Report) -> str:
    lines = [f"# {report.kind} report (qconvex {report.version}, tolerance {report.tolerance})"]
    d = report.data
    if report.kind == "certificate":
        s = d["scenario"]
        lines.append(f"n={s['n']} q={s['q']} p={s['p']} c={s['c']!r} diameter={s['diameter']}")
        for deg in d["certificate"]["degrees"]:
            extra = ""
            if deg["exponent"] is not None:
                extra = f" exponent={deg['exponent']:.6g}"
            if deg["rigid"]:
                extra += " [rigid]"
            lines.append(f"  b_{deg['degree']}: {deg['status']:<18} ({deg['rule']}){extra}  {deg['reason']}")
        for note in d["certificate"]["notes"]:
            lines.append(f"  note: {note}")
    elif report.kind == "torus_scan":
        cols = ["r", "q_margin", "H", "pinching_slack", "lambda_min", "tmin_bound", "bochner_min", "rigidity"]
        lines.append(f"n={d['n']} p={d['p']} q={d['q']} c={d['c']!r}")
        lines.append("  ".join(f"{c:>14}" for c in cols))
        for row in d["rows"]:
            lines.append("  ".join(f"{row[c]:>14.8g}" if isinstance(row[c], float) else f"{row[c]:>14}" for c in cols))
    else:
        for key in sorted(d):
            lines.append(f"{key}: {d[key]}")
    return "\n".join(lines) + "\n"
