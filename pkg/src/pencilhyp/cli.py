"""Command-line front end: ``pencilhyp <command> --config FILE``.

Exit status: 0 strong or strict, 2 weak, 3 not hyperbolic, 1 on error.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import dataclass, field
from importlib import metadata

import jsonschema
import numpy as np

from .classify import HypClass, ScanConfig, classify_direction, classify_system, sample_directions
from .errors import PencilError, SchemaError
from .factorize import factorize
from .matcore import Tolerances
from .models import almost_wave, repeated_operator, wave
from .models import maxwell as mx
from .pencil import CONVENTION_NOTE, SecondOrderSystem, build_quadratic
from .selftest import run_selftest

COMMANDS = ("classify", "spectrum", "factorize", "maxwell-case", "selftest")
EXIT_OK, EXIT_ERROR, EXIT_WEAK, EXIT_NONHYP = 0, 1, 2, 3

_NUMBER = {"type": "number"}
_POSITIVE = {"type": "number", "exclusiveMinimum": 0}
_VECTOR = {"type": "array", "items": _NUMBER, "minItems": 1}
_MATRIX = {"type": "array", "items": _VECTOR, "minItems": 1}
_MATRIX4 = {"type": "array", "minItems": 4, "maxItems": 4,
            "items": {"type": "array", "items": _NUMBER, "minItems": 4, "maxItems": 4}}

_SECTIONS = {
    "tolerances": {
        "type": "object", "additionalProperties": False,
        "properties": {name: _POSITIVE for name in
                       ("rank_tol", "cluster_tol", "imag_tol", "residual_tol", "cond_cap",
                        "defect_tol")},
    },
    "sampling": {
        "type": "object", "additionalProperties": False,
        "properties": {
            "count": {"type": "integer", "minimum": 1},
            "scheme": {"enum": ["default", "lattice", "random"]},
            "directions": {"type": "array", "items": _VECTOR, "minItems": 1},
            "refine": {"type": "boolean"},
            "seed": {"type": "integer", "minimum": 0},
        },
    },
    "outputs": {
        "type": "object", "additionalProperties": False,
        "properties": {
            "report": {"type": "string"},
            "csv": {"type": "string"},
            "verbosity": {"type": "integer", "minimum": 0, "maximum": 2},
        },
    },
}

_MODEL_PARAMS = {
    "almost_wave": ({"a": _NUMBER, "b": _NUMBER}, ["a", "b"]),
    "wave": ({"speeds": _VECTOR, "components": {"type": "integer", "minimum": 1}}, []),
    "repeated_operator": ({"B": {"type": "array", "items": _MATRIX, "minItems": 1}}, ["B"]),
    "maxwell": ({name: _MATRIX4 for name in ("g", "ghat", "gtilde", "fhat", "ftilde")}
                | {"n": {"type": "array", "items": _NUMBER, "minItems": 4, "maxItems": 4}}, []),
}

_INLINE = {
    "type": "object", "additionalProperties": False, "required": ["d", "N", "coeffs"],
    "properties": {
        "d": {"type": "integer", "minimum": 2},
        "N": {"type": "integer", "minimum": 1},
        "coeffs": {"type": "array", "minItems": 1,
                   "items": {"type": "array", "minItems": 1, "items": _MATRIX}},
        "n": _VECTOR,
    },
}

_BASE = {
    "type": "object",
    "properties": {"model": {"enum": sorted(_MODEL_PARAMS)}, "system": {"type": "object"}},
}


def _schema_for(model: str | None) -> dict:
    props = dict(_SECTIONS)
    required = []
    if model is None:
        props["system"] = _INLINE
        required.append("system")
    else:
        params, required = _MODEL_PARAMS[model]
        props.update(params)
        props["model"] = {"const": model}
        required = ["model"] + list(required)
    return {"type": "object", "properties": props, "required": required,
            "additionalProperties": False}


def _validate(instance, schema) -> None:
    validator = jsonschema.Draft202012Validator(schema)
    err = jsonschema.exceptions.best_match(validator.iter_errors(instance))
    if err is not None:
        raise SchemaError(err.message, err.absolute_path)


@dataclass
class RunConfig:
    source: str
    params: dict
    tolerances: Tolerances
    sampling: dict
    outputs: dict
    raw: dict = field(repr=False, default_factory=dict)

    def build_system(self) -> SecondOrderSystem:
        p = self.params
        tol = self.tolerances
        if self.source == "inline":
            c = np.array(p["coeffs"], dtype=float)
            return SecondOrderSystem(c, p.get("n"), tol)
        if self.source == "almost_wave":
            return almost_wave(p["a"], p["b"])
        if self.source == "wave":
            return wave(p.get("speeds", [1.0]), p.get("components", 1))
        if self.source == "repeated_operator":
            return repeated_operator(p["B"])
        if self.source == "maxwell":
            return mx.maxwell_system(self.maxwell_config(), tol)
        raise SchemaError(f"unknown model {self.source!r}", ("model",))  # pragma: no cover

    def maxwell_config(self) -> mx.MaxwellConfig:
        if self.source != "maxwell":
            raise SchemaError("this command needs model 'maxwell'", ("model",))
        p = self.params
        return mx.MaxwellConfig.from_arrays(
            p.get("g", mx.MINKOWSKI), p.get("ghat", mx.MINKOWSKI), p.get("gtilde", mx.MINKOWSKI),
            p.get("fhat"), p.get("ftilde"), p.get("n"))


def parse_config(text: str) -> RunConfig:
    """Validate a JSON configuration.

    A system comes either from ``"model"`` plus that model's parameters at the
    top level, or from an inline ``"system": {"d", "N", "coeffs", "n"}``.
    Unknown keys are rejected.
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise SchemaError("configuration must be a JSON object")
    _validate(data, _BASE)
    has_model, has_system = "model" in data, "system" in data
    if has_model == has_system:
        raise SchemaError("exactly one of 'model' or 'system' is required")
    model = data.get("model")
    _validate(data, _schema_for(model))

    if has_system:
        sysdata = data["system"]
        d, n = sysdata["d"], sysdata["N"]
        c = sysdata["coeffs"]
        if len(c) != d:
            raise SchemaError(f"expected {d} rows of coefficient blocks, got {len(c)}",
                              ("system", "coeffs"))
        for a, row in enumerate(c):
            if len(row) != d:
                raise SchemaError(f"expected {d} blocks, got {len(row)}", ("system", "coeffs", a))
            for b, block in enumerate(row):
                if len(block) != n or any(len(r) != n for r in block):
                    raise SchemaError(f"block must be {n}x{n}", ("system", "coeffs", a, b))
        if "n" in sysdata and len(sysdata["n"]) != d:
            raise SchemaError(f"n must have {d} components", ("system", "n"))
        params = dict(sysdata)
        source = "inline"
    else:
        params = {k: v for k, v in data.items()
                  if k not in ("model", "tolerances", "sampling", "outputs")}
        source = model
        if model == "repeated_operator":
            b = params["B"]
            n = len(b[0])
            for i, m in enumerate(b):
                if len(m) != n or any(len(r) != n for r in m):
                    raise SchemaError(f"each B matrix must be {n}x{n}", ("B", i))
    try:
        tol = Tolerances(**data.get("tolerances", {}))
    except ValueError as exc:
        raise SchemaError(str(exc), ("tolerances",)) from exc
    return RunConfig(source, params, tol, dict(data.get("sampling", {})),
                     dict(data.get("outputs", {})), data)


# -- reports ---------------------------------------------------------------------

def _num(x):
    x = float(x)
    if np.isfinite(x):
        return x
    return "inf" if x > 0 else ("-inf" if x < 0 else "nan")


def _complex_list(values):
    return [[_num(np.real(z)), _num(np.imag(z))] for z in values]


def _matrix(m):
    m = np.asarray(m)
    if np.iscomplexobj(m):
        return {"re": [[_num(x) for x in row] for row in m.real],
                "im": [[_num(x) for x in row] for row in m.imag]}
    return [[_num(x) for x in row] for row in m]


def _verdict_doc(v) -> dict:
    sd = v.spectral
    doc = {
        "khat": [_num(x) for x in v.khat],
        "class": v.label,
        "eigenvalues": _complex_list(sd.eigenvalues),
        "alg_mult": list(sd.alg_mult),
        "geo_mult": list(sd.geo_mult),
        "gap": _num(sd.gap),
        "marginal": bool(sd.marginal),
        "max_imag": _num(v.max_imag),
    }
    if v.uniformity is not None:
        doc["uniformity"] = {k: _num(x) for k, x in v.uniformity.items()}
    if v.factor_error:
        doc["factor_error"] = v.factor_error
    return doc


def _version() -> str:
    try:
        return metadata.version("artifact")
    except metadata.PackageNotFoundError:  # pragma: no cover
        return "0+unknown"


def dumps(doc: dict) -> str:
    """Deterministic JSON: sorted keys, shortest round-trip float text."""
    return json.dumps(doc, sort_keys=True, indent=2, allow_nan=False) + "\n"


def _exit_for(cls: HypClass) -> int:
    if cls >= HypClass.STRONG:
        return EXIT_OK
    if cls == HypClass.WEAK:
        return EXIT_WEAK
    return EXIT_NONHYP


CSV_NORMS = ("v1", "q", "qd2_minus_d1q", "v1_inv", "qd2_minus_d1q_inv")


def _fmt(z) -> str:
    z = complex(z)
    if z.imag == 0:
        return f"{z.real:.17g}"
    return f"{z.real:.17g}{z.imag:+.17g}j"


def write_csv(report, handle) -> None:
    """One row per sampled direction."""
    dim = len(report.verdicts[0].khat) if report.verdicts else 0
    writer = csv.writer(handle, lineterminator="\n")
    writer.writerow([f"k{i + 1}" for i in range(dim)]
                    + ["eigenvalues", "q", "s", "class"] + list(CSV_NORMS))
    for v in report.verdicts:
        sd = v.spectral
        norms = v.uniformity or {}
        writer.writerow([f"{x:.17g}" for x in v.khat]
                        + [";".join(_fmt(z) for z in sd.eigenvalues),
                           ";".join(str(q) for q in sd.alg_mult),
                           ";".join(str(s) for s in sd.geo_mult),
                           v.label]
                        + [f"{norms[n]:.17g}" if n in norms else "" for n in CSV_NORMS])


def _scan_config(cfg: RunConfig, samples: int | None, direction) -> ScanConfig:
    s = cfg.sampling
    dirs = s.get("directions")
    if direction is not None:
        dirs = [direction]
    if dirs is not None:
        dirs = tuple(tuple(np.asarray(d, float) / np.linalg.norm(d)) for d in dirs)
    return ScanConfig(count=samples or s.get("count", 64), scheme=s.get("scheme", "default"),
                      directions=dirs, refine=s.get("refine", True), seed=s.get("seed", 0),
                      tol=cfg.tolerances)


def _single_direction(cfg: RunConfig, system: SecondOrderSystem, direction) -> np.ndarray:
    if direction is None and cfg.sampling.get("directions"):
        direction = cfg.sampling["directions"][0]
    if direction is None:
        k = np.zeros(system.spatial_dim)
        k[0] = 1.0
        return k
    k = np.asarray(direction, dtype=float)
    if k.shape != (system.spatial_dim,):
        raise SchemaError(f"direction needs {system.spatial_dim} components", ("direction",))
    return k / np.linalg.norm(k)


def run(cmd: str, cfg: RunConfig | None, samples: int | None = None, direction=None,
        out: str | None = None, csv_path: str | None = None, stream=None) -> int:
    """Execute one command; returns the exit status."""
    stream = sys.stdout if stream is None else stream
    if cmd not in COMMANDS:
        raise ValueError(f"unknown command {cmd!r}")
    doc = {"tool": "pencilhyp", "version": _version(), "command": cmd,
           "convention_note": CONVENTION_NOTE}
    status = EXIT_OK
    if cmd == "selftest":
        checks = run_selftest()
        doc["checks"] = [{"name": c.name, "passed": c.passed, "detail": c.detail} for c in checks]
        status = EXIT_OK if all(c.passed for c in checks) else EXIT_ERROR
        for c in checks:
            print(f"{'PASS' if c.passed else 'FAIL'}  {c.name}: {c.detail}", file=sys.stderr)
    else:
        if cfg is None:
            raise SchemaError("a configuration file is required for this command")
        doc["config"] = cfg.raw
        if cfg.source == "maxwell":
            doc["convention_note"] = f"{CONVENTION_NOTE} {mx.CONVENTION_NOTE}"
        out = out or cfg.outputs.get("report")
        csv_path = csv_path or cfg.outputs.get("csv")
        system = cfg.build_system()
        tol = cfg.tolerances
        if cmd == "classify":
            report = classify_system(system, _scan_config(cfg, samples, direction))
            doc["verdict"] = report.label
            doc["samples"] = {"count": report.count, "scheme": report.scheme}
            doc["worst_norms"] = {k: _num(v) for k, v in report.worst_norms.items()}
            doc["worst_directions"] = {k: (None if v is None else [_num(x) for x in v])
                                       for k, v in report.worst_directions.items()}
            doc["growth"] = {k: _num(v) for k, v in report.growth.items()}
            doc["marginal_directions"] = report.marginal_directions
            doc["directions"] = [_verdict_doc(v) for v in report.verdicts]
            status = _exit_for(report.verdict)
            if csv_path:
                with open(csv_path, "w", encoding="utf-8", newline="") as fh:
                    write_csv(report, fh)
        elif cmd in ("spectrum", "factorize"):
            k = _single_direction(cfg, system, direction)
            v = classify_direction(system, k, tol, with_factorization=False)
            doc["direction"] = _verdict_doc(v)
            status = _exit_for(v.cls)
            if cmd == "factorize":
                try:
                    f = factorize(build_quadratic(system, k), tol, v.spectral)
                except PencilError as exc:
                    doc["factorization_error"] = f"{type(exc).__name__}: {exc}"
                else:
                    doc["factorization"] = {
                        "path": f.path, "V1": _matrix(f.v1), "Q": _matrix(f.q),
                        "D1": [_num(x) for x in f.d1], "D2": [_num(x) for x in f.d2],
                        "A1": _matrix(f.a1), "A2": _matrix(f.a2), "P": _matrix(f.p),
                        "partition_order": "columns of V1 and V1 Q keep eigenvalue order "
                                           "(descending)",
                        "residuals": {k2: _num(x) for k2, x in f.residuals.items()},
                        "uniformity": {k2: _num(x) for k2, x in f.uniformity_norms().items()},
                    }
        elif cmd == "maxwell-case":
            mcfg = cfg.maxwell_config()
            if direction is not None:
                dirs = [_single_direction(cfg, system, direction)]
            elif cfg.sampling.get("directions"):
                dirs = [np.asarray(d, float) / np.linalg.norm(d)
                        for d in cfg.sampling["directions"]]
            else:
                dirs = sample_directions(3, samples or cfg.sampling.get("count", 64),
                                         cfg.sampling.get("scheme", "default"),
                                         cfg.sampling.get("seed", 0))
            rep = mx.maxwell_case_classify(mcfg, dirs, tol)
            doc["verdict"] = rep.aggregate.label
            doc["directions"] = [dict(_verdict_doc(v), case=lab, consistent=bool(c))
                                 for v, lab, c in zip(rep.verdicts, rep.labels, rep.consistent)]
            doc["case_counts"] = {lab: rep.labels.count(lab) for lab in sorted(set(rep.labels))}
            status = _exit_for(rep.aggregate.verdict)
    text = dumps(doc)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        stream.write(text)
    return status


def _direction_arg(text: str):
    try:
        return [float(x) for x in text.split(",")]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad direction {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="pencilhyp",
                                 description="Hyperbolicity of fully second-order systems.")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--config", help="JSON configuration file")
    ap.add_argument("--out", help="write the JSON report here instead of stdout")
    ap.add_argument("--csv", help="per-direction CSV table (classify)")
    ap.add_argument("--samples", type=int, help="number of sampled directions")
    ap.add_argument("--direction", type=_direction_arg, help="comma-separated unit direction")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    cfg = None
    try:
        if args.config is not None:
            with open(args.config, encoding="utf-8") as fh:
                cfg = parse_config(fh.read())
        elif args.command != "selftest":
            raise SchemaError("--config is required")
        if args.samples is not None and args.samples < 1:
            raise SchemaError("--samples must be positive", ("samples",))
        return run(args.command, cfg, args.samples, args.direction, args.out, args.csv)
    except (PencilError, ValueError, OSError) as exc:
        echo = "" if cfg is None else f"\nconfig: {json.dumps(cfg.raw, sort_keys=True)}"
        where = f" (direction {args.direction})" if args.direction else ""
        print(f"pencilhyp: error{where}: {type(exc).__name__}: {exc}{echo}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
