"""Command-line interface: ``fundom project|verify|cayley-demo|dirichlet``.

Exit codes: 0 success, 1 a verification check failed, 2 usage or format
error.  Output records are the input line with new fields spliced in before
the closing brace, so pass-through fields keep their exact bytes.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from contextlib import contextmanager
from typing import Iterator

import numpy as np

from .actions import ActionSpec, Tensor, flatten, spec_from_json
from .cayley import cayley_demo
from .dirichlet import DirichletConfig, DirichletError, brute_force_min, descend, descend_multi_seed
from .group import build_chain
from .perm import Permutation, inverse
from .project import KINDS, Projector
from .verify import SUITES, VerificationError, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
CHUNK = 4096


class UsageError(Exception):
    pass


# -- serialisation ---------------------------------------------------------


def format_number(v) -> str:
    v = float(v)
    if not math.isfinite(v):
        raise UsageError(f"cannot serialise non-finite value {v}")
    if v.is_integer() and abs(v) < 2**53:
        return str(int(v))
    return repr(v)


def format_value(v) -> str:
    if isinstance(v, np.ndarray):
        v = v.tolist()
    if isinstance(v, (list, tuple)):
        return "[" + ",".join(format_value(e) for e in v) + "]"
    if isinstance(v, dict):
        return "{" + ",".join(f"{json.dumps(k)}:{format_value(e)}" for k, e in v.items()) + "}"
    if isinstance(v, bool) or v is None:
        return json.dumps(v)
    if isinstance(v, (int, float, np.integer, np.floating)):
        return format_number(v)
    return json.dumps(v)


def splice(raw: str, record: dict, fields: dict) -> str:
    """Append ``fields`` to the JSON object text ``raw``.

    Falls back to re-serialising the whole record when a new key already
    exists in the input.
    """
    if any(k in record for k in fields):
        merged = dict(record)
        merged.update(fields)
        return format_value(merged)
    body = raw.rstrip()
    if not body.endswith("}"):
        raise UsageError("record is not a JSON object")
    head = body[:-1].rstrip()
    extra = ",".join(f"{json.dumps(k)}:{format_value(v)}" for k, v in fields.items())
    sep = "" if head.endswith("{") else ","
    return f"{head}{sep}{extra}}}"


@contextmanager
def _open_in(path: str):
    if path == "-":
        yield sys.stdin
    else:
        try:
            f = open(path, encoding="utf-8")
        except OSError as e:
            raise UsageError(f"cannot open {path}: {e}") from e
        with f:
            yield f


@contextmanager
def _open_out(path: str):
    if path == "-":
        yield sys.stdout
    else:
        try:
            f = open(path, "w", encoding="utf-8")
        except OSError as e:
            raise UsageError(f"cannot open {path}: {e}") from e
        with f:
            yield f


def load_spec(path: str | None) -> tuple[ActionSpec, dict]:
    if path is None:
        raise UsageError("--group is required")
    try:
        with _open_in(path) as f:
            obj = json.load(f)
    except json.JSONDecodeError as e:
        raise UsageError(f"{path}: invalid JSON at line {e.lineno}: {e.msg}") from e
    try:
        return spec_from_json(obj), obj
    except (ValueError, KeyError, TypeError) as e:
        raise UsageError(f"{path}: invalid group spec: {e}") from e


def read_records(f, spec: ActionSpec) -> Iterator[tuple[int, str, dict, np.ndarray]]:
    """Yield ``(line_no, raw, record, x)``; blank lines are skipped."""
    shape = tuple(spec.shape)
    for line_no, raw in enumerate(f, 1):
        if not raw.strip():
            continue
        try:
            rec = json.loads(raw)
        except json.JSONDecodeError as e:
            raise UsageError(f"line {line_no}: invalid JSON: {e.msg}") from e
        if not isinstance(rec, dict) or "x" not in rec:
            raise UsageError(f"line {line_no}: record must be an object with an \"x\" field")
        try:
            x = np.asarray(rec["x"], dtype=np.float64)
        except (ValueError, TypeError) as e:
            raise UsageError(f"line {line_no}: \"x\" is not a numeric array") from e
        if x.shape != shape and not (x.ndim == 1 and x.size == spec.degree):
            raise UsageError(f"line {line_no}: shape {x.shape} does not match action shape {shape}")
        if not np.all(np.isfinite(x)):
            raise UsageError(f"line {line_no}: non-finite entry")
        yield line_no, raw.rstrip("\r\n"), rec, x


def _chunks(it, size: int = CHUNK):
    buf = []
    for item in it:
        buf.append(item)
        if len(buf) == size:
            yield buf
            buf = []
    if buf:
        yield buf


def _witness_json(winv_row) -> dict:
    return inverse(Permutation(tuple(int(v) for v in winv_row))).to_json()


# -- commands --------------------------------------------------------------


def cmd_project(args) -> int:
    spec, _ = load_spec(args.group)
    kind = args.projection
    P = Projector(spec)
    if kind.endswith("_avg") and not isinstance(spec, Tensor):
        raise UsageError("averaging projections need a tensor group spec")
    with _open_in(args.input) as fin, _open_out(args.output) as fout:
        for chunk in _chunks(read_records(fin, spec)):
            X = np.stack([c[3].reshape(-1) for c in chunk])
            canon, winv = P.project_batch(X, kind)
            canon = canon.reshape(len(chunk), -1)
            for (_, raw, rec, x), c, w in zip(chunk, canon, winv):
                fields = {"canonical": c.reshape(x.shape)}
                if args.witness:
                    fields["witness"] = _witness_json(w)
                fout.write(splice(raw, rec, fields) + "\n")
    return EXIT_OK


def cmd_verify(args) -> int:
    spec, obj = load_spec(args.group)
    if args.suite is None:
        raise UsageError(f"--suite is required; one of {', '.join(SUITES)}")
    try:
        report = run_suite(args.suite, spec, args.trials, args.seed, args.projection, group_spec=obj)
    except VerificationError as e:
        raise UsageError(str(e)) from e
    with _open_out(args.output) as fout:
        fout.write(json.dumps(report, ensure_ascii=False) + "\n")
    return EXIT_OK if report["passed"] else EXIT_FAIL


def cmd_cayley_demo(args) -> int:
    if args.per_class < 1:
        raise UsageError("--per-class must be >= 1")
    report = cayley_demo(args.per_class, args.seed).to_json()
    with _open_out(args.output) as fout:
        fout.write(json.dumps(report, ensure_ascii=False) + "\n")
    return EXIT_OK if report["passed"] else EXIT_FAIL


def cmd_dirichlet(args) -> int:
    spec, _ = load_spec(args.group)
    try:
        reference = json.loads(args.reference) if args.reference else None
        cfg = DirichletConfig.for_spec(spec, reference=reference, max_steps=args.max_steps)
    except (json.JSONDecodeError, DirichletError, ValueError, TypeError) as e:
        raise UsageError(f"invalid Dirichlet configuration: {e}") from e
    if args.multi_seed and not (isinstance(spec, Tensor) and len(spec.factors) == 2):
        raise UsageError("--multi-seed needs a two-factor tensor group spec")
    chain = build_chain(flatten(spec)) if args.oracle else None
    trials = matches = 0
    with _open_in(args.input) as fin, _open_out(args.output) as fout:
        for line_no, raw, rec, x in read_records(fin, spec):
            try:
                xs = x.reshape(spec.shape) if args.multi_seed else x
                res = descend_multi_seed(xs, spec, cfg) if args.multi_seed else descend(x, cfg)
            except DirichletError as e:
                raise UsageError(f"line {line_no}: {e}") from e
            fields = {"canonical": res.canonical.reshape(x.shape), "objective": res.objective,
                      "steps": res.steps, "converged": res.converged}
            if args.witness:
                fields["witness"] = res.witness.to_json()
            if chain is not None:
                exact = brute_force_min(chain, x.reshape(-1), cfg.r)
                hit = bool(np.array_equal(exact.canonical.reshape(-1), res.canonical.reshape(-1)))
                fields["oracle_objective"] = exact.objective
                fields["oracle_match"] = hit
                trials += 1
                matches += hit
            fout.write(splice(raw, rec, fields) + "\n")
    if chain is not None:
        summary = {"suite": "dirichlet-oracle", "trials": trials,
                   "match_rate": matches / trials if trials else None}
        sys.stderr.write(json.dumps(summary) + "\n")
    return EXIT_OK


# -- parser ----------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_USAGE)


def _kind(text: str) -> str:
    k = text.replace("-", "_")
    if k not in KINDS:
        raise argparse.ArgumentTypeError(f"expected one of asc, desc, asc-avg, desc-avg")
    return k


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="fundom", description="Fundamental-domain projections for permutation actions.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, group=True, io=True):
        if group:
            sp.add_argument("--group", metavar="FILE", help="group-spec JSON file ('-' for stdin)")
        if io:
            sp.add_argument("--input", default="-", metavar="FILE", help="JSON-lines records (default stdin)")
        sp.add_argument("--output", default="-", metavar="FILE", help="output file (default stdout)")

    sp = sub.add_parser("project", help="canonicalize JSON-lines records")
    common(sp)
    sp.add_argument("--projection", type=_kind, default="asc")
    sp.add_argument("--witness", action="store_true", help="also write the group element used")
    sp.set_defaults(func=cmd_project)

    sp = sub.add_parser("verify", help="run a verification suite")
    common(sp, io=False)
    sp.add_argument("--suite", choices=SUITES)
    sp.add_argument("--trials", type=int, default=1000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--projection", type=_kind, default="asc")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("cayley-demo", help="classify permuted Cayley tables of order-8 groups")
    common(sp, group=False, io=False)
    sp.add_argument("--per-class", type=int, default=2000)
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_cayley_demo)

    sp = sub.add_parser("dirichlet", help="greedy Dirichlet projection of JSON-lines records")
    common(sp)
    sp.add_argument("--max-steps", type=int, default=10_000)
    sp.add_argument("--multi-seed", action="store_true", help="restart from every cyclic shift")
    sp.add_argument("--oracle", action="store_true", help="compare with the brute-force minimiser")
    sp.add_argument("--reference", metavar="JSON", help="reference vector r (default 1..n)")
    sp.add_argument("--witness", action="store_true")
    sp.add_argument("--seed", type=int, default=0, help="accepted for uniformity; descent is deterministic")
    sp.set_defaults(func=cmd_dirichlet)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as e:
        sys.stderr.write(f"fundom: error: {e}\n")
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
