"""Command-line front end: ``qbilateral verify`` and ``qbilateral eval``.

Exit codes
    0  success (verify: no failing records)
    1  verify found failing records; eval hit a numerical failure
    2  bad flags, malformed config or params, unreadable files
    3  the sampler exhausted its rejection budget
    4  eval parameters outside the domain (violations printed)
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import tempfile
from dataclasses import fields

from .errors import DomainError, QSeriesError, SamplerExhausted
from .harness import IDENTITIES, SamplerConfig, SuiteReport, run_all, run_suite
from .identities import (
    CorollarySpec,
    LemmaSpec,
    Psi2Spec,
    TheoremSpec,
    TruncationConfig,
    corollary_lhs,
    corollary_rhs,
    lemma_lhs,
    lemma_rhs,
    psi2_lhs,
    psi2_rhs,
    theorem_lhs,
    theorem_rhs,
)
from .phi import GeneralProductSpec, PhiSpec, QuadratureConfig, laurent_coeff, phi_continued, phi_series
from .qcore import EvalResult, qpoch_finite, qpoch_infinite

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_EXHAUSTED, EXIT_DOMAIN = 0, 1, 2, 3, 4

SAMPLER_KEYS = {f.name for f in fields(SamplerConfig)}
TRUNC_KEYS = {f.name for f in fields(TruncationConfig)}
CONFIG_KEYS = SAMPLER_KEYS | TRUNC_KEYS | {"tol"}

CSV_COLUMNS = [
    "trial", "identity", "verdict", "lhs_re", "lhs_im", "rhs_re", "rhs_im",
    "abs_diff", "rel_diff", "lhs_err", "rhs_err", "wall_time_ms", "reason", "params",
]


class UsageError(Exception):
    """Malformed user input; maps to exit code 2."""


# ------------------------------------------------------------------ decoding


def as_complex(value, name: str = "value") -> complex:
    """Accept a JSON number or a {"re": .., "im": ..} object."""
    if isinstance(value, bool):
        raise UsageError(f"{name}: expected a number, got a boolean")
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, dict) and set(value) <= {"re", "im"} and "re" in value:
        re, im = value["re"], value.get("im", 0.0)
        if all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in (re, im)):
            return complex(re, im)
    raise UsageError(f"{name}: expected a number or {{'re', 'im'}} object, got {value!r}")


def as_complex_list(value, name: str) -> tuple:
    if not isinstance(value, list):
        raise UsageError(f"{name}: expected a list")
    return tuple(as_complex(v, f"{name}[{i}]") for i, v in enumerate(value))


def as_int(value, name: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise UsageError(f"{name}: expected an integer, got {value!r}")
    return value


def encode_complex(z: complex):
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        return None
    return {"re": z.real, "im": z.imag}


def dumps(obj) -> str:
    """Canonical JSON text; loading and re-dumping reproduces it byte for byte."""
    return json.dumps(obj, indent=2, allow_nan=False) + "\n"


def write_atomic(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".qbilateral-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _read_json(text_or_path: str, what: str):
    text = text_or_path
    if not text_or_path.lstrip().startswith(("{", "[")):
        try:
            with open(text_or_path, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise UsageError(f"cannot read {what} file {text_or_path!r}: {exc.strerror}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{what} is not valid JSON: {exc}") from exc


# -------------------------------------------------------------------- verify


def load_run_config(path: str) -> dict:
    """Read a run config file, rejecting unknown keys."""
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read config {path!r}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"config {path!r} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise UsageError("config must be a JSON object")
    unknown = sorted(set(data) - CONFIG_KEYS)
    if unknown:
        raise UsageError(f"unknown config keys: {', '.join(unknown)}")
    return data


def _normalize_identity(name: str) -> str:
    return name.replace("-", "_")


def build_run(args) -> tuple:
    """Merge flags and config file into (SamplerConfig, run_all?, tol, TruncationConfig)."""
    settings = {
        "identity": _normalize_identity(args.identity),
        "k": args.k,
        "l": args.l,
        "trials": args.trials,
        "seed": args.seed,
        "tol": args.tol,
    }
    if args.q:
        settings["q_values"] = list(args.q)
    if args.config:
        settings.update(load_run_config(args.config))
    identity = settings.pop("identity")
    if not isinstance(identity, str):
        raise UsageError("identity must be a string")
    identity = _normalize_identity(identity)
    if identity != "all" and identity not in IDENTITIES:
        raise UsageError(f"unknown identity {identity!r}")
    tol = settings.pop("tol")
    if isinstance(tol, bool) or not isinstance(tol, (int, float)) or not tol > 0:
        raise UsageError(f"tol must be a positive number, got {tol!r}")
    trunc_kw = {key: settings.pop(key) for key in list(settings) if key in TRUNC_KEYS}
    if "q_values" in settings:
        settings["q_values"] = as_complex_list(settings["q_values"], "q_values")
    for key in ("k", "l", "trials", "seed"):
        settings[key] = as_int(settings[key], key)
    try:
        trunc = TruncationConfig(**trunc_kw)
        cfg = SamplerConfig(identity="lemma" if identity == "all" else identity, **settings)
    except (TypeError, ValueError) as exc:
        raise UsageError(str(exc)) from exc
    return cfg, identity == "all", float(tol), trunc


def report_csv(report: SuiteReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for i, rec in enumerate(report.records):
        d = rec.to_dict()
        lhs = d["lhs"] or {"re": "", "im": ""}
        rhs = d["rhs"] or {"re": "", "im": ""}
        writer.writerow([
            i, d["identity"], d["verdict"], lhs["re"], lhs["im"], rhs["re"], rhs["im"],
            _blank(d["abs_diff"]), _blank(d["rel_diff"]), _blank(d["lhs_err"]),
            _blank(d["rhs_err"]), d["wall_time_ms"], d["reason"],
            json.dumps(d["params"], sort_keys=True),
        ])
    return buf.getvalue()


def _blank(v):
    return "" if v is None else repr(v)


def cmd_verify(args) -> int:
    cfg, everything, tol, trunc = build_run(args)
    try:
        report = run_all(cfg, tol, trunc) if everything else run_suite(cfg, tol, trunc)
    except SamplerExhausted as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_EXHAUSTED
    text = dumps(report.to_dict()) if args.format == "json" else report_csv(report)
    if args.out:
        write_atomic(args.out, text)
    else:
        sys.stdout.write(text)
    print(
        f"pass={report.pass_count} fail={report.fail_count} skipped={report.skip_count}",
        file=sys.stderr,
    )
    return EXIT_OK if report.fail_count == 0 else EXIT_FAIL


# ---------------------------------------------------------------------- eval


def _get(params: dict, key: str, default=...):
    if key in params:
        return params[key]
    if default is ...:
        raise UsageError(f"missing parameter {key!r}")
    return default


def _only(params: dict, allowed: set):
    extra = sorted(set(params) - allowed)
    if extra:
        raise UsageError(f"unexpected parameters: {', '.join(extra)}")


def _quad(params: dict) -> QuadratureConfig:
    radius = _get(params, "radius", None)
    if radius is not None and (isinstance(radius, bool) or not isinstance(radius, (int, float))):
        raise UsageError("radius must be a real number")
    try:
        return QuadratureConfig(radius=radius)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _phi_spec(p) -> PhiSpec:
    return PhiSpec(
        as_complex_list(_get(p, "num"), "num"),
        as_complex_list(_get(p, "den"), "den"),
        as_complex(_get(p, "q"), "q"),
        as_complex(_get(p, "z"), "z"),
    )


def _eval_phi(p):
    _only(p, {"num", "den", "q", "z"})
    return phi_series(_phi_spec(p))


def _eval_phi_cont(p):
    _only(p, {"num", "den", "q", "z", "radius", "force_quadrature"})
    force = _get(p, "force_quadrature", False)
    if not isinstance(force, bool):
        raise UsageError("force_quadrature must be a boolean")
    return phi_continued(_phi_spec(p), _quad(p), force)


def _eval_qpoch(p):
    _only(p, {"a", "q", "n"})
    a = as_complex(_get(p, "a"), "a")
    q = as_complex(_get(p, "q"), "q")
    n = _get(p, "n", "inf")
    if n == "inf":
        return qpoch_infinite(a, q)
    n = as_int(n, "n")
    return EvalResult(qpoch_finite(a, q, n), 0.0, abs(n), "closed_form")


def _lemma(p):
    _only(p, {"a", "b", "x", "t", "q"})
    return LemmaSpec(
        as_complex_list(_get(p, "a"), "a"), as_complex_list(_get(p, "b"), "b"),
        as_complex(_get(p, "x"), "x"), as_complex(_get(p, "t"), "t"), as_complex(_get(p, "q"), "q"),
    )


def _theorem(p):
    _only(p, {"a", "b", "c", "d", "x", "y", "t", "q"})
    return TheoremSpec(
        *(as_complex_list(_get(p, key), key) for key in "abcd"),
        *(as_complex(_get(p, key), key) for key in ("x", "y", "t", "q")),
    )


def _corollary(p):
    _only(p, {"a", "b", "x", "c", "d", "t", "q"})
    return CorollarySpec(
        as_complex_list(_get(p, "a"), "a"), as_complex_list(_get(p, "b"), "b"),
        *(as_complex(_get(p, key), key) for key in ("x", "c", "d", "t", "q")),
    )


def _psi2(p):
    _only(p, {"a", "b", "c", "d", "t", "q"})
    return Psi2Spec(*(as_complex(_get(p, key), key) for key in ("a", "b", "c", "d", "t", "q")))


def _eval_laurent(p):
    _only(p, {"alpha", "gamma", "beta", "delta", "q", "n", "radius"})
    spec = GeneralProductSpec(
        *(as_complex_list(_get(p, key, []), key) for key in ("alpha", "gamma", "beta", "delta")),
        q=as_complex(_get(p, "q"), "q"),
    )
    return laurent_coeff(spec, as_int(_get(p, "n"), "n"), _quad(p))


EXPRESSIONS = {
    "phi": _eval_phi,
    "phi-cont": _eval_phi_cont,
    "qpoch": _eval_qpoch,
    "lemma-lhs": lambda p: lemma_lhs(_lemma(p)),
    "lemma-rhs": lambda p: lemma_rhs(_lemma(p)),
    "theorem-lhs": lambda p: theorem_lhs(_theorem(p)),
    "theorem-rhs": lambda p: theorem_rhs(_theorem(p)),
    "corollary-lhs": lambda p: corollary_lhs(_corollary(p)),
    "corollary-rhs": lambda p: corollary_rhs(_corollary(p)),
    "psi2-lhs": lambda p: psi2_lhs(_psi2(p)),
    "psi2-rhs": lambda p: psi2_rhs(_psi2(p)),
    "laurent": _eval_laurent,
}


def cmd_eval(args) -> int:
    params = _read_json(args.params, "params")
    if not isinstance(params, dict):
        raise UsageError("params must be a JSON object")
    try:
        result = EXPRESSIONS[args.expr](params)
    except DomainError as exc:
        violations = list(exc.violations) or [str(exc)]
        print(dumps({"error": "domain", "violations": violations}), end="")
        return EXIT_DOMAIN
    except QSeriesError as exc:
        print(dumps({"error": type(exc).__name__, "message": str(exc)}), end="")
        return EXIT_FAIL
    out = {
        "value": encode_complex(result.value),
        "err_est": result.err_est if math.isfinite(result.err_est) else None,
        "work": result.work,
        "method": result.method,
    }
    print(dumps(out), end="")
    return EXIT_OK


# -------------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qbilateral",
        description="Numerical checks of bilateral basic hypergeometric summations.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="sample parameters and verify an identity")
    v.add_argument(
        "--identity", default="lemma",
        choices=["lemma", "theorem", "corollary", "psi2", "swap", "proof-integral", "all"],
    )
    v.add_argument("--k", type=int, default=1)
    v.add_argument("--l", type=int, default=1)
    v.add_argument("--trials", type=int, default=10)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--tol", type=float, default=1e-8)
    v.add_argument("--q", type=float, action="append", help="base q (repeatable)")
    v.add_argument("--config", metavar="PATH", help="JSON run config; overrides flags")
    v.add_argument("--out", metavar="PATH", help="write the report here instead of stdout")
    v.add_argument("--format", choices=["json", "csv"], default="json")
    v.set_defaults(func=cmd_verify)

    e = sub.add_parser("eval", help="evaluate one expression")
    e.add_argument("--expr", required=True, choices=sorted(EXPRESSIONS))
    e.add_argument("--params", required=True, help="inline JSON object or path to a JSON file")
    e.set_defaults(func=cmd_eval)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main_exit() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_exit()
