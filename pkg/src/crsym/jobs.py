"""Job files and the report pipeline behind the command line.

A job file is flat ``key = value`` text; ``#`` starts a comment.  Keys:

==============  =======================================================
kind            ``tube`` | ``rigid`` | ``hermitian-rigid``
m, d            CR dimension and codimension (default 1, 1)
phi             defining function(s); separate several with ``;``
levi_signs      optional comma list of +1/-1
name            optional label echoed in the report
order           expansion order N of phi for derive/symmetries (>= 3)
ansatz_degree   symmetry jet degree D
dep_degree      dependence search degree bound
dep_order       dependence search order
kmax            longest Segre chain for minimality
seed            seed for random evaluation points
format          ``text`` | ``json``
==============  =======================================================
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import asdict, dataclass, field, replace

from .exactnum import GaussRat
from .lie import (
    VectorFieldAnsatz,
    classify,
    compute_symmetries,
    determining_for,
)
from .obstruct import (
    finite_nondegeneracy,
    minimality,
    rigid_obstruction_report,
    tube_obstruction_report,
)
from .parser import ParseError, expand, parse_expr
from .segre import HypersurfaceSpec, complexify, derive_pde_system, input_varset

__all__ = [
    "SCHEMA",
    "COMMANDS",
    "JobError",
    "JobConfig",
    "parse_job",
    "load_job",
    "run",
    "render_text",
    "dump_json",
]

SCHEMA = "crsym-report/1"
COMMANDS = ("derive", "symmetries", "classify", "obstruct", "minimality", "full")

_INT_KEYS = ("m", "d", "order", "ansatz_degree", "dep_degree", "dep_order", "kmax", "seed")


class JobError(ValueError):
    pass


@dataclass(frozen=True)
class JobConfig:
    kind: str
    phi: tuple
    m: int = 1
    d: int = 1
    levi_signs: tuple | None = None
    name: str = ""
    order: int = 20
    ansatz_degree: int = 3
    dep_degree: int = 4
    dep_order: int = 24
    kmax: int = 6
    seed: int = 0
    format: str = "text"

    def validate(self):
        if self.kind not in ("tube", "rigid", "hermitian-rigid"):
            raise JobError(f"unknown kind {self.kind!r}")
        if self.order < 3:
            raise JobError("order must be at least 3")
        for key in ("m", "d", "ansatz_degree", "dep_degree", "dep_order", "kmax"):
            if getattr(self, key) < 1:
                raise JobError(f"{key} must be positive")
        if self.seed < 0:
            raise JobError("seed must be nonnegative")
        if self.format not in ("text", "json"):
            raise JobError("format must be text or json")
        if len(self.phi) != self.d:
            raise JobError(f"expected {self.d} phi expressions, got {len(self.phi)}")
        return self

    def echo(self) -> dict:
        out = asdict(self)
        out["phi"] = list(self.phi)
        out["levi_signs"] = list(self.levi_signs) if self.levi_signs else None
        out.pop("format")
        return out


def parse_job(text: str) -> JobConfig:
    values: dict = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise JobError(f"line {lineno}: expected 'key = value'")
        key, val = (s.strip() for s in line.split("=", 1))
        if key in values:
            raise JobError(f"line {lineno}: duplicate key {key!r}")
        values[key] = val
    known = set(JobConfig.__dataclass_fields__)
    unknown = set(values) - known
    if unknown:
        raise JobError(f"unknown keys: {', '.join(sorted(unknown))}")
    if "kind" not in values or "phi" not in values:
        raise JobError("job needs at least 'kind' and 'phi'")
    kw: dict = {}
    for key, val in values.items():
        if key in _INT_KEYS:
            try:
                kw[key] = int(val)
            except ValueError:
                raise JobError(f"{key} must be an integer, got {val!r}") from None
        elif key == "phi":
            kw[key] = tuple(p.strip() for p in val.split(";") if p.strip())
        elif key == "levi_signs":
            try:
                kw[key] = tuple(int(s) for s in val.split(","))
            except ValueError:
                raise JobError("levi_signs must be a comma list of +1/-1") from None
        else:
            kw[key] = val
    return JobConfig(**kw).validate()


def load_job(path: str) -> JobConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_job(fh.read())


def build_spec(job: JobConfig, order: int) -> HypersurfaceSpec:
    vs = input_varset(job.kind, job.m)
    phi = []
    for text in job.phi:
        try:
            phi.append(expand(parse_expr(text), vs, order))
        except ParseError as exc:
            raise JobError(f"phi {text!r}: {exc}") from None
    return HypersurfaceSpec(job.kind, job.m, phi, job.d, job.levi_signs)


def _plain(obj):
    """JSON-ready copy: GaussRat to text, infinities to "inf", tuples to lists."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, GaussRat):
        return str(obj)
    if isinstance(obj, float) and math.isinf(obj):
        return "inf"
    return obj


def _normalized(spec: HypersurfaceSpec):
    lin = [p for p in spec.linear_part() if p]
    if lin and spec.kind == "tube":
        return spec.without_linear_part(), "linear terms of phi removed by w -> w - a.z"
    return spec, None


def _derive_section(job: JobConfig, spec: HypersurfaceSpec, ctx: dict) -> dict:
    if spec.d != 1:
        return {"skipped": "PDE system is implemented for hypersurfaces (d = 1) only"}
    spec, note = _normalized(spec)
    sys = derive_pde_system(complexify(spec))
    ctx["sys"] = sys
    out = {
        "F": {f"{k1},{k2}": f.render() for (k1, k2), f in sorted(sys.F.items())},
        "trusted_order": sys.trusted_order,
        "input_order": job.order,
    }
    if note:
        out["normalization"] = note
    return out


def _symmetry_section(job: JobConfig, spec: HypersurfaceSpec, ctx: dict) -> dict:
    if spec.d != 1:
        return {"skipped": "symmetries are implemented for hypersurfaces (d = 1) only"}
    if "sys" not in ctx:
        _derive_section(job, spec, ctx)
    sys = ctx["sys"]
    alg = compute_symmetries(sys, job.ansatz_degree)
    ctx["alg"] = alg
    meta = alg.metadata
    ans = VectorFieldAnsatz(sys.m, meta["jet_degree"])
    ds = determining_for(sys, ans, jet_degree=meta["jet_degree"])
    return {
        "dim": alg.dim,
        "dim_real_aut": alg.dim,
        "basis": alg.render(),
        "D": meta["D"],
        "N_trust": meta["N_trust"],
        "jet_degree": meta["jet_degree"],
        "polynomial_dim": meta["polynomial_dim"],
        "bounds_meet": meta["bounds_meet"],
        "slack_dims": meta["slack_dims"],
        "semantics": meta["semantics"],
        "determining": {"equations": len(ds), "unknowns": len(ans)},
    }


def _classify_section(job: JobConfig, spec: HypersurfaceSpec, ctx: dict) -> dict:
    if spec.d != 1:
        return {"skipped": "classification needs the symmetry algebra (d = 1 only)"}
    if "alg" not in ctx:
        _symmetry_section(job, spec, ctx)
    return classify(ctx["alg"], spec)


def _obstruct_section(job: JobConfig, spec: HypersurfaceSpec, ctx: dict) -> dict:
    deep = build_spec(job, max(job.order, 2 * job.dep_order + 2))
    out = {}
    if deep.kind == "tube":
        nd = finite_nondegeneracy(deep, L=min(6, deep.order - 1))
        out["nondegeneracy"] = {
            "found": nd.found,
            "ell0": nd.ell0,
            "betas": [list(b) for b in nd.betas],
            "components": nd.components,
            "jacobian": nd.jacobian,
            "bound": nd.bound,
        }
        if nd.found and nd.ell0 == 1:
            out["report"] = tube_obstruction_report(deep, job.dep_degree, job.dep_order)
        else:
            out["report"] = {"skipped": "first derivatives do not give a rank-m map"}
    else:
        out["report"] = rigid_obstruction_report(deep, job.dep_degree, job.dep_order)
    return out


def _minimality_section(job: JobConfig, spec: HypersurfaceSpec, ctx: dict) -> dict:
    order = min(job.order, 8)
    return minimality(complexify(spec), job.kmax, job.seed, order=order) | {"chain_order": order}


_SECTIONS = {
    "derive": [("pde", _derive_section)],
    "symmetries": [("symmetries", _symmetry_section)],
    "classify": [("symmetries", _symmetry_section), ("classification", _classify_section)],
    "obstruct": [("obstruction", _obstruct_section)],
    "minimality": [("minimality", _minimality_section)],
}
_SECTIONS["full"] = (
    _SECTIONS["derive"]
    + _SECTIONS["classify"]
    + _SECTIONS["obstruct"]
    + _SECTIONS["minimality"]
)


def run(job: JobConfig, command: str = "full") -> dict:
    """Run one subcommand; the result is a plain dict in the documented schema."""
    if command not in COMMANDS:
        raise JobError(f"unknown command {command!r}; expected one of {COMMANDS}")
    job.validate()
    spec = build_spec(job, job.order)
    ctx: dict = {}
    report = {"schema": SCHEMA, "command": command, "job": job.echo()}
    timing = {}
    for key, fn in _SECTIONS[command]:
        t0 = time.perf_counter()
        report[key] = fn(job, spec, ctx)
        timing[key] = time.perf_counter() - t0
    report = _plain(report)
    report["_timing"] = timing
    return report


def dump_json(report) -> str:
    """Deterministic JSON (timing stripped, keys sorted)."""
    def strip(r):
        return {k: v for k, v in r.items() if k != "_timing"}

    data = [strip(r) for r in report] if isinstance(report, list) else strip(report)
    return json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _lines(prefix: str, obj, out: list):
    if isinstance(obj, dict):
        for k in obj:
            _lines(f"{prefix}.{k}" if prefix else str(k), obj[k], out)
    elif isinstance(obj, list) and obj and any(isinstance(v, (dict, list)) for v in obj):
        for i, v in enumerate(obj):
            _lines(f"{prefix}[{i}]", v, out)
    else:
        out.append(f"{prefix}: {obj}")


def render_text(report: dict) -> str:
    lines = [f"# {report['job'].get('name') or report['job']['kind']}  ({report['command']})"]
    body = {k: v for k, v in report.items() if k not in ("_timing", "job", "schema", "command")}
    _lines("", {"job": report["job"]}, lines)
    _lines("", body, lines)
    for k, v in report.get("_timing", {}).items():
        lines.append(f"time.{k}: {v:.3f}s")
    return "\n".join(lines) + "\n"


def with_overrides(job: JobConfig, **kw) -> JobConfig:
    kw = {k: v for k, v in kw.items() if v is not None}
    return replace(job, **kw).validate() if kw else job
