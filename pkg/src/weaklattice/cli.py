"""Command-line front end.

Descriptors are JSON (a file path or inline text) or one of the shorthands::

    tau_min  tau_c  tau_L  tau_R  pair(X,Y)
    top  frechet  raw  F_omega  F_evens  F_odds  F_mult<k>  F_mod<m>_<r>

Exit codes: 0 computed or Pass, 1 a check failed, 2 bad input, 3 Unknown.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from typing import Any, Sequence

from . import filters as flt
from . import omegasets as osets
from . import topologies as topo
from . import verify
from .core import parse_element
from .filters import TOP, SIFilter, Top, Verdict
from .omegasets import OmegaSet
from .topologies import NbhdParams, WeakTopology

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_UNKNOWN = 0, 1, 2, 3


class ParseError(ValueError):
    pass


class ValidationError(ValueError):
    pass


# -- descriptors --------------------------------------------------------------

_SIMPLE_SETS = {
    "omega": osets.omega,
    "evens": osets.evens,
    "odds": osets.odds,
}


def _shorthand_set(name: str) -> OmegaSet | None:
    if name in _SIMPLE_SETS:
        return _SIMPLE_SETS[name]()
    match = re.fullmatch(r"mult(\d+)", name)
    if match:
        return osets.multiples(int(match.group(1)))
    match = re.fullmatch(r"mod(\d+)_(\d+)", name)
    if match:
        return osets.residue(int(match.group(1)), int(match.group(2)))
    return None


def _shorthand_slot(name: str):
    name = name.strip()
    if name in ("top", "1"):
        return TOP
    if name in ("frechet", "Fr"):
        return flt.Frechet()
    if name == "raw":
        return verify.RAW_BASE
    if name.startswith("F_"):
        s = _shorthand_set(name[2:])
        if s is not None:
            return flt.factorial_filter(s)
    raise ParseError(f"unknown filter shorthand {name!r}")


def _shorthand(text: str):
    text = text.strip()
    canon = {"tau_min": topo.tau_min, "tau_c": topo.tau_c, "tau_L": topo.tau_L, "tau_R": topo.tau_R}
    if text in canon:
        return canon[text]()
    match = re.fullmatch(r"(?:pair|tau)\((.*),(.*)\)", text)
    if match:
        return topo.from_pair(_shorthand_slot(match.group(1)), _shorthand_slot(match.group(2)))
    s = _shorthand_set(text)
    if s is not None:
        return s
    return _shorthand_slot(text)


def _from_json(data: Any):
    if not isinstance(data, dict):
        raise ValidationError("descriptor must be a JSON object")
    kind = data.get("kind")
    if kind is None and "left" in data and "right" in data:
        return topo.topology_from_json(data)
    if kind is None and ("progressions" in data or "include" in data):
        return OmegaSet.from_json(data)
    if kind in ("top", "filter"):
        return topo.sif_from_json(data)
    if kind in ("frechet", "factorial", "filter-induced", "meet", "join"):
        return flt.filter_from_json(data)
    raise ValidationError(f"unrecognised descriptor kind {kind!r}")


def parse_descriptor(text: str):
    """Parse a descriptor from a file path, inline JSON, or a shorthand."""
    source = text
    if os.path.isfile(text):
        with open(text) as fh:
            source = fh.read()
    stripped = source.strip()
    if not stripped.startswith("{"):
        return _shorthand(stripped)
    try:
        data = json.loads(stripped)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{exc.msg} at line {exc.lineno} column {exc.colno}") from exc
    try:
        return _from_json(data)
    except (flt.ImproperBase, flt.NotInfinite) as exc:
        raise ValidationError(f"{type(exc).__name__}: {exc}") from exc
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ValidationError):
            raise
        raise ValidationError(str(exc)) from exc


def descriptor_json(x) -> Any:
    if isinstance(x, WeakTopology):
        return x.to_json()
    if isinstance(x, Top):
        return {"kind": "top"}
    return x.to_json()


def format_descriptor(x) -> str:
    return json.dumps(descriptor_json(x), sort_keys=True, separators=(",", ":"))


def _as_topology(x) -> WeakTopology:
    if not isinstance(x, WeakTopology):
        raise ValidationError("expected a topology descriptor")
    return x


def _split_top(text: str) -> list[str]:
    parts, depth, cur = [], 0, ""
    for ch in text:
        if ch in "[(":
            depth += 1
        elif ch in "])":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append(cur)
            cur = ""
        else:
            cur += ch
    parts.append(cur)
    return parts


def _tuplify(x):
    return tuple(_tuplify(i) for i in x) if isinstance(x, list) else x


def parse_params(text: str) -> NbhdParams:
    """``n,m[,li[,ri]]``; an empty field leaves that index unset."""
    fields = _split_top(text)
    if not 2 <= len(fields) <= 4:
        raise ParseError(f"params need 2 to 4 fields, got {text!r}")
    values = []
    for f in fields:
        f = f.strip()
        if not f:
            values.append(None)
            continue
        try:
            values.append(_tuplify(json.loads(f.replace("(", "[").replace(")", "]"))))
        except json.JSONDecodeError as exc:
            raise ParseError(f"bad params field {f!r}") from exc
    values += [None] * (4 - len(values))
    return NbhdParams(*values)


# -- output -------------------------------------------------------------------

def _emit(args, record: dict, human: list[str]) -> None:
    if args.format == "machine":
        print(json.dumps(record, sort_keys=True, separators=(",", ":")))
    else:
        for line in human:
            print(line)


def _report(args, r: verify.CheckReport) -> None:
    lines = [f"{r.check}: {r.verdict}"]
    if r.counterexample is not None:
        lines.append(f"  counterexample: {json.dumps(r.counterexample, sort_keys=True)}")
    else:
        lines.append(f"  witnesses: {len(r.witnesses)}")
    _emit(args, r.to_json(), lines)


def _exit_for(verdicts: Sequence[str]) -> int:
    if verify.FAIL in verdicts:
        return EXIT_FAIL
    if verify.UNKNOWN in verdicts:
        return EXIT_UNKNOWN
    return EXIT_OK


# -- commands -----------------------------------------------------------------

def cmd_order(args) -> int:
    a, b = parse_descriptor(args.a), parse_descriptor(args.b)
    if isinstance(a, WeakTopology) and isinstance(b, WeakTopology):
        v = topo.compare_topologies(a, b, args.bound)
    elif isinstance(a, (SIFilter, Top)) and isinstance(b, (SIFilter, Top)):
        v = topo.compare_sif(a, b, args.bound)
    else:
        raise ValidationError("order needs two topologies or two filters")
    data = v.to_json()
    record = {
        "check": "order",
        "inputs": {"a": descriptor_json(a), "b": descriptor_json(b)},
        "params": {"bound": args.bound},
        "verdict": v.verdict.value,
        "witnesses": [data.get("certificates", {})],
    }
    lines = [v.verdict.value]
    for key, cert in sorted(data.get("certificates", {}).items()):
        lines.append(f"  {key}: {_short(cert)}")
    _emit(args, record, lines)
    return EXIT_UNKNOWN if v.verdict is Verdict.UNKNOWN else EXIT_OK


def _short(x: Any, limit: int = 160) -> str:
    text = json.dumps(x, sort_keys=True)
    return text if len(text) <= limit else text[: limit - 3] + "..."


def _lattice(args, op: str) -> int:
    a, b = parse_descriptor(args.a), parse_descriptor(args.b)
    if isinstance(a, WeakTopology) and isinstance(b, WeakTopology):
        out = topo.join_topologies(a, b) if op == "join" else topo.meet_topologies(a, b)
    elif isinstance(a, SIFilter) and isinstance(b, SIFilter):
        out = flt.join_filters(a, b) if op == "join" else flt.meet_filters(a, b)
    else:
        raise ValidationError(f"{op} needs two topologies or two filters")
    record = {
        "check": op,
        "inputs": {"a": descriptor_json(a), "b": descriptor_json(b)},
        "params": {},
        "verdict": "ok",
        "witnesses": [descriptor_json(out)],
    }
    _emit(args, record, [format_descriptor(out)])
    return EXIT_OK


def cmd_join(args) -> int:
    return _lattice(args, "join")


def cmd_meet(args) -> int:
    return _lattice(args, "meet")


def cmd_member(args) -> int:
    t = _as_topology(parse_descriptor(args.topology))
    p = parse_params(args.params)
    e = parse_element(args.point)
    result = topo.nbhd_member(t, p, e)
    record = {
        "check": "member",
        "inputs": {"topology": descriptor_json(t), "point": str(e)},
        "params": p.to_json(),
        "verdict": result,
        "witnesses": [],
    }
    _emit(args, record, ["true" if result else "false"])
    if args.figure:
        from .plots import plot_neighborhood

        plot_neighborhood(t, p, args.figure, size=args.size, mark=e)
    return EXIT_OK


def cmd_trace(args) -> int:
    t = _as_topology(parse_descriptor(args.topology))
    p = parse_params(args.params)
    side, i = ("row", args.row) if args.row is not None else ("column", args.column)
    tr = topo.filter_trace(t, side, i, p)
    members = tr.upto(args.upto)
    record = {
        "check": "trace",
        "inputs": {"topology": descriptor_json(t), "side": side, "index": i},
        "params": {**p.to_json(), "upto": args.upto},
        "verdict": "ok",
        "witnesses": [members],
    }
    _emit(args, record, [f"{side} {i} trace up to {args.upto}: {members}"])
    return EXIT_OK


def cmd_verify(args) -> int:
    t = _as_topology(parse_descriptor(args.topology))
    reports = verify.run_suite(t, args.suite, args.depth, args.point_bound, args.bound)
    for r in reports:
        _report(args, r)
    if args.figure:
        from .plots import plot_neighborhood

        plot_neighborhood(t, topo.default_params(t, args.depth), args.figure, size=args.size)
    return _exit_for([r.verdict for r in reports])


def _family(args, fam: verify.Family, labels: list[str]) -> int:
    for r in fam.reports:
        _report(args, r)
    if args.format != "machine":
        passed = sum(r.passed for r in fam.reports)
        print(f"{len(fam.topologies)} topologies, {passed}/{len(fam.reports)} certificates pass")
    if args.figure:
        from .plots import plot_order_matrix

        plot_order_matrix(fam.topologies, labels, args.figure, bound=args.bound)
    return _exit_for([r.verdict for r in fam.reports])


def cmd_antichain(args) -> int:
    fam = verify.build_antichain(args.size, args.flavor, args.bound)
    return _family(args, fam, [f"{r} mod {args.size}" for r in range(args.size)])


def cmd_chain(args) -> int:
    fam = verify.build_chain(args.length, args.flavor, args.bound)
    return _family(args, fam, [f"T{j + 1}" for j in range(args.length)])


# -- argument parsing ---------------------------------------------------------------

def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def _natural(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be a natural number")
    return value


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_INPUT)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="weaklattice", description="Weak shift-continuous topologies on the bicyclic monoid with zero.")
    parser.add_argument("--format", choices=("human", "machine"), default="human")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("order", help="compare two topologies or two filters")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--bound", type=_natural, default=40)
    p.set_defaults(func=cmd_order)

    for name, func in (("join", cmd_join), ("meet", cmd_meet)):
        p = sub.add_parser(name, help=f"{name} of two topologies or two filters")
        p.add_argument("a")
        p.add_argument("b")
        p.set_defaults(func=func)

    p = sub.add_parser("member", help="membership in a basic neighborhood of zero")
    p.add_argument("--topology", required=True)
    p.add_argument("--point", required=True)
    p.add_argument("--params", required=True, help="n,m[,li[,ri]]")
    p.add_argument("--figure", help="write a neighborhood heatmap to this file")
    p.add_argument("--size", type=_positive, default=40)
    p.set_defaults(func=cmd_member)

    p = sub.add_parser("trace", help="row or column trace of a basic neighborhood")
    p.add_argument("--topology", required=True)
    side = p.add_mutually_exclusive_group(required=True)
    side.add_argument("--row", type=_natural)
    side.add_argument("--column", type=_natural)
    p.add_argument("--params", required=True)
    p.add_argument("--upto", type=_natural, default=50)
    p.set_defaults(func=cmd_trace)

    p = sub.add_parser("verify", help="run verification checks on a topology")
    p.add_argument("--topology", required=True)
    p.add_argument("--suite", choices=("all",) + verify.SUITES, default="all")
    p.add_argument("--depth", type=_natural, default=10)
    p.add_argument("--point-bound", type=_natural, default=20)
    p.add_argument("--bound", type=_natural, default=40)
    p.add_argument("--figure", help="write a heatmap of a basic neighborhood at the given depth")
    p.add_argument("--size", type=_positive, default=40)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("antichain", help="pairwise incomparable topologies over residue classes")
    p.add_argument("--size", type=_positive, required=True)
    p.add_argument("--flavor", choices=("residues", "filter-induced"), default="residues")
    p.add_argument("--bound", type=_natural, default=40)
    p.add_argument("--figure", help="write the order matrix to this file")
    p.set_defaults(func=cmd_antichain)

    p = sub.add_parser("chain", help="strictly increasing chain from the power-of-two tower")
    p.add_argument("--length", type=_positive, required=True)
    p.add_argument("--flavor", choices=("tower", "filter-chain"), default="tower")
    p.add_argument("--bound", type=_natural, default=40)
    p.add_argument("--figure", help="write the order matrix to this file")
    p.set_defaults(func=cmd_chain)
    return parser


_INPUT_ERRORS = (
    ParseError,
    ValidationError,
    topo.InvalidParams,
    flt.InvalidIndex,
    flt.ImproperBase,
    flt.NotInfinite,
    OSError,
)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except _INPUT_ERRORS as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except topo.BoundExhausted as exc:
        print(f"unknown: {exc}", file=sys.stderr)
        return EXIT_UNKNOWN


if __name__ == "__main__":
    sys.exit(main())
