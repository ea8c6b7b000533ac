"""Command-line entry point and the JSON file formats it reads and writes.

Layout of an observable file::

    {"dim": 2, "outcomes": ["0", "1"], "effects": [[[..re, im..], ...], ...]}

Every complex entry is a two-element array [re, im]; effect matrices are
row-major. Reports wrap a full classification plus tool name/version, the
input paths and the tolerance used, and round-trip losslessly.

Exit codes: 0 success (requested predicate holds), 1 predicate fails,
2 input or validation error. Stdout carries JSON only; all human-oriented
text goes to stderr.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__, analysis, linalg
from .errors import (
    BadPartition,
    DimMismatch,
    InvalidDim,
    MubkitError,
    NotAtomic,
    ParseError,
)
from .fourier import example_partitions, fourier_matrix, momentum_observable, position_observable
from .observables import Observable, PartitionMap, coarse_grain, observable_new
from .paper_suite import run_paper_suite

ENV_TOL = "MUBKIT_TOL"


# ---------------------------------------------------------------- encoding

def _num(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def matrix_to_json(m: np.ndarray) -> list:
    return [[_num(z) for z in row] for row in np.asarray(m, dtype=complex)]


def matrix_from_json(rows) -> np.ndarray:
    try:
        m = np.array([[complex(re, im) for re, im in row] for row in rows])
    except (TypeError, ValueError) as exc:
        raise ParseError(f"matrix entries must be [re, im] pairs: {exc}") from exc
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ParseError(f"matrix must be square, got shape {m.shape}")
    return m


def observable_to_json(obs: Observable) -> dict:
    return {
        "dim": obs.dim,
        "outcomes": list(obs.outcomes),
        "effects": [matrix_to_json(e.matrix) for e in obs.effects],
    }


def observable_from_json(obj, tol: float | None = None) -> Observable:
    if not isinstance(obj, dict):
        raise ParseError("observable file must hold a JSON object")
    missing = {"dim", "outcomes", "effects"} - set(obj)
    if missing:
        raise ParseError(f"observable file is missing field(s) {sorted(missing)}")
    matrices = [matrix_from_json(rows) for rows in obj["effects"]]
    return observable_new(obj["dim"], obj["outcomes"], matrices, tol)


def load_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: {exc}") from exc


def dump_json(obj, out: str | None) -> None:
    text = json.dumps(obj, indent=2, ensure_ascii=False) + "\n"
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


# ------------------------------------------------------------------ report

def _witness_to_json(w: dict | None) -> dict | None:
    if w is None:
        return None
    out = dict(w)
    if "state" in out:
        out["state"] = [list(pair) for pair in out["state"]]
    return out


def _witness_from_json(w: dict | None) -> dict | None:
    if w is None:
        return None
    out = dict(w)
    if "state" in out:
        out["state"] = tuple((float(re), float(im)) for re, im in out["state"])
    return out


def verdict_to_json(v: analysis.Verdict | None) -> dict | None:
    if v is None:
        return None
    return {
        "holds": v.holds,
        "max_deviation": v.max_deviation,
        "witness": _witness_to_json(v.witness),
        "vacuous": v.vacuous,
    }


def verdict_from_json(obj) -> analysis.Verdict | None:
    if obj is None:
        return None
    return analysis.Verdict(
        holds=bool(obj["holds"]),
        max_deviation=float(obj["max_deviation"]),
        witness=_witness_from_json(obj["witness"]),
        vacuous=bool(obj["vacuous"]),
    )


def report_to_json(report: analysis.PairReport) -> dict:
    return {
        "dim": report.dim,
        "m": report.m,
        "n": report.n,
        "verdicts": {
            "mu": verdict_to_json(report.mu),
            "value_complementary": verdict_to_json(report.value_complementary),
            "condition1": verdict_to_json(report.condition1),
            "condition2": verdict_to_json(report.condition2),
            "generalized_mu": verdict_to_json(report.generalized_mu),
        },
        "alpha": report.alpha,
        "flags": list(report.flags),
    }


def report_from_json(obj) -> analysis.PairReport:
    v = obj["verdicts"]
    return analysis.PairReport(
        dim=int(obj["dim"]), m=int(obj["m"]), n=int(obj["n"]),
        mu=verdict_from_json(v["mu"]),
        value_complementary=verdict_from_json(v["value_complementary"]),
        condition1=verdict_from_json(v["condition1"]),
        condition2=verdict_from_json(v["condition2"]),
        generalized_mu=verdict_from_json(v["generalized_mu"]),
        alpha=None if obj["alpha"] is None else float(obj["alpha"]),
        flags=tuple(obj["flags"]),
    )


def report_file(report: analysis.PairReport, tolerance: float, inputs: list[str]) -> dict:
    return {
        "tool": {"name": "mubkit", "version": __version__},
        "inputs": inputs,
        "tolerance": tolerance,
        "report": report_to_json(report),
    }


def resolve_tol(flag_value: float | None, dim: int) -> float:
    """Tolerance resolution order: --tol flag, MUBKIT_TOL env var, 1e-9 * dim."""
    if flag_value is not None:
        return flag_value
    env = os.environ.get(ENV_TOL)
    if env is not None and env != "":
        try:
            return float(env)
        except ValueError as exc:
            raise ParseError(f"{ENV_TOL}={env!r} is not a number") from exc
    return linalg.default_tol(dim)


# ---------------------------------------------------------------- commands

def _info(msg: str) -> None:
    print(msg, file=sys.stderr)


def cmd_construct(args) -> int:
    n = args.N
    if args.kind in ("example5", "example6"):
        if n != 4:
            raise InvalidDim(f"kind {args.kind!r} is defined for N=4, got {n}")
        if args.out is None:
            raise ParseError("--out is required for the two-observable kinds")
        q_half, p_parity, p_half = example_partitions()
        stem = Path(args.out)
        if stem.suffix == ".json":
            stem = stem.with_suffix("")
        second = ("pprime", p_parity) if args.kind == "example5" else ("pdprime", p_half)
        for tag, obs in (("qprime", q_half), second):
            path = f"{stem}.{tag}.json"
            dump_json(observable_to_json(obs), path)
            _info(f"wrote {path}")
        return 0
    if args.kind == "fourier":
        obj = {"dim": n, "matrix": matrix_to_json(fourier_matrix(n))}
    elif args.kind == "position":
        obj = observable_to_json(position_observable(n))
    else:
        obj = observable_to_json(momentum_observable(n))
    dump_json(obj, args.out)
    if args.out is not None:
        _info(f"wrote {args.out}")
    return 0


_PREDICATE_FIELDS = {
    "mu": "mu",
    "condition1": "condition1",
    "condition2": "condition2",
    "value-complementary": "value_complementary",
    "generalized-mu": "generalized_mu",
}


def cmd_check(args) -> int:
    raw_a = load_json(args.fileA)
    raw_b = load_json(args.fileB)
    for path, raw in ((args.fileA, raw_a), (args.fileB, raw_b)):
        if not isinstance(raw, dict) or "dim" not in raw:
            raise ParseError(f"{path}: not an observable file")
    if raw_a["dim"] != raw_b["dim"]:
        raise DimMismatch(f"dims {raw_a['dim']} and {raw_b['dim']} differ")
    tol = resolve_tol(args.tol, int(raw_a["dim"]))
    a = observable_from_json(raw_a, tol)
    b = observable_from_json(raw_b, tol)
    report = analysis.classify_pair(a, b, tol)

    if args.predicate == "all":
        verdicts = [report.condition1, report.condition2,
                    report.value_complementary, report.generalized_mu]
        if report.mu is not None:
            verdicts.append(report.mu)
        ok = all(v.holds for v in verdicts)
    else:
        field = _PREDICATE_FIELDS[args.predicate]
        verdict = getattr(report, field)
        if verdict is None:
            raise NotAtomic("mu requires two atomic observables")
        ok = verdict.holds

    dump_json(report_file(report, tol, [args.fileA, args.fileB]), None)
    for name, field in _PREDICATE_FIELDS.items():
        v = getattr(report, field)
        if v is None:
            _info(f"{name}: not applicable")
        else:
            _info(f"{name}: {'holds' if v.holds else 'FAILS'} (max deviation {v.max_deviation:.3e})")
    if report.flags:
        _info(f"flags: {', '.join(report.flags)}")
    return 0 if ok else 1


def parse_partition_spec(spec: str, outcomes: tuple[str, ...]) -> PartitionMap:
    """Turn '0,1|2,3' into a partition of the given outcome labels."""
    fibers = [[lab.strip() for lab in chunk.split(",")] for chunk in spec.split("|")]
    flat = [lab for fiber in fibers for lab in fiber]
    if any(lab == "" for lab in flat):
        raise BadPartition(f"empty label in spec {spec!r}")
    unknown = set(flat) - set(outcomes)
    if unknown:
        raise BadPartition(f"unknown outcome(s) {sorted(unknown)}")
    if len(set(flat)) != len(flat):
        dupes = sorted({lab for i, lab in enumerate(flat) if lab in flat[:i]})
        raise BadPartition(f"outcome(s) {dupes} appear in more than one fiber")
    missing = set(outcomes) - set(flat)
    if missing:
        raise BadPartition(f"outcome(s) {sorted(missing)} not covered")
    targets = tuple(str(i) for i in range(len(fibers)))
    mapping = {lab: str(i) for i, fiber in enumerate(fibers) for lab in fiber}
    return PartitionMap(outcomes, targets, mapping)


def cmd_coarse_grain(args) -> int:
    raw = load_json(args.fileA)
    if not isinstance(raw, dict) or "dim" not in raw:
        raise ParseError(f"{args.fileA}: not an observable file")
    tol = resolve_tol(args.tol, int(raw["dim"]))
    obs = observable_from_json(raw, tol)
    pmap = parse_partition_spec(args.partition, obs.outcomes)
    merged = coarse_grain(obs, pmap, tol)
    dump_json(observable_to_json(merged), args.out)
    if args.out is not None:
        _info(f"wrote {args.out}")
    return 0


def cmd_paper_suite(args) -> int:
    results = run_paper_suite(seed=args.seed)
    width = max(len(r.name) for r in results)
    for r in results:
        _info(f"{r.name:<{width}}  {'PASS' if r.passed else 'FAIL'}  {r.detail}")
    passed = all(r.passed for r in results)
    _info(f"{sum(r.passed for r in results)}/{len(results)} fixtures passed")
    dump_json({
        "tool": {"name": "mubkit", "version": __version__},
        "seed": args.seed,
        "fixtures": [{"name": r.name, "passed": r.passed, "detail": r.detail} for r in results],
        "passed": passed,
    }, None)
    return 0 if passed else 1


# ------------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mubkit",
        description="Construct observable pairs and check unbiasedness predicates.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_con = sub.add_parser("construct", help="write a built-in observable or transform matrix")
    p_con.add_argument("kind", choices=["position", "momentum", "fourier", "example5", "example6"])
    p_con.add_argument("N", type=int, help="dimension (the example kinds need 4)")
    p_con.add_argument("--out", help="output path; stdout if omitted (single-output kinds)")
    p_con.add_argument("--tol", type=float, default=None)
    p_con.set_defaults(fn=cmd_construct)

    p_chk = sub.add_parser("check", help="classify a pair of observable files")
    p_chk.add_argument("predicate", choices=[*_PREDICATE_FIELDS, "all"])
    p_chk.add_argument("fileA")
    p_chk.add_argument("fileB")
    p_chk.add_argument("--tol", type=float, default=None,
                       help=f"comparison tolerance (default {ENV_TOL} or 1e-9*dim)")
    p_chk.set_defaults(fn=cmd_check)

    p_cg = sub.add_parser("coarse-grain", help="merge outcomes of an observable file")
    p_cg.add_argument("fileA")
    p_cg.add_argument("partition", help="fibers as comma lists split by '|', e.g. '0,1|2,3'")
    p_cg.add_argument("--out", help="output path; stdout if omitted")
    p_cg.add_argument("--tol", type=float, default=None)
    p_cg.set_defaults(fn=cmd_coarse_grain)

    p_ps = sub.add_parser("paper-suite", help="run the bundled worked-example fixtures")
    p_ps.add_argument("--seed", type=int, default=0)
    p_ps.set_defaults(fn=cmd_paper_suite)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (MubkitError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
