"""Command line front end: ``smallideals <command> [options]``.

Exit codes: 0 pass, 1 verification failure, 2 input error, 3 scale limit.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

from . import suites
from .constructions import (
    associated_functional,
    build_tree_vector,
    pairing_value,
    repeated_average_sequence,
    schreier_dyadic_family,
    strict_singularity_witness,
    validate_dyadic_family,
)
from .diagnostics import NormBracket, separation_curve
from .schlumprecht import functional_to_json, schlumprecht_norm
from .schreier import decompose_maximal, is_maximal_schreier, is_schreier, next_maximal_set, schreier_norm
from .towers import Enclosure, Mag, mag_to_json
from .trees import (
    CoreTree,
    DyadicScheme,
    build_core_tree,
    check_conditions,
    check_coupling,
    check_scheme,
    generate_params,
    uniform_core_tree,
)
from .vectors import IntervalSet, SparseVector

EXIT_PASS, EXIT_FAIL, EXIT_INPUT, EXIT_SCALE = 0, 1, 2, 3
SCALE_MARKERS = ("scale exceeded", "not materializable", "tower budget")
COMMANDS = ("norm", "schreier", "tree", "construct", "verify", "separate")
TARGETS = ("params", "tree-vector", "dyadic-family", "averages", "witness")


class InputError(Exception):
    pass


def _encode(obj):
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, Enclosure):
        return obj.to_json()
    if isinstance(obj, Mag):
        return mag_to_json(obj)
    if isinstance(obj, NormBracket):
        return {"lower": obj.lower, "upper": obj.upper}
    if isinstance(obj, IntervalSet):
        return [list(r) for r in obj.ranges]
    if isinstance(obj, (set, frozenset)):
        return sorted(obj)
    if hasattr(obj, "to_json"):
        return obj.to_json()
    raise TypeError(f"cannot encode {type(obj).__name__}")


def dumps(obj) -> str:
    return json.dumps(obj, default=_encode, sort_keys=True, indent=2)


def _read_input(spec: str | None):
    if spec is None:
        return None
    try:
        if spec == "-":
            return json.load(sys.stdin)
        text = spec.strip()
        if text.startswith(("{", "[")):
            return json.loads(text)
        with open(spec) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"unreadable input: {exc}") from exc


def _need(obj, what: str):
    if obj is None:
        raise InputError(f"--input with {what} is required")
    return obj


# -- commands -------------------------------------------------------------------

def cmd_norm(args) -> tuple[int, object]:
    obj = _need(_read_input(args.input), "a vector")
    x = SparseVector.from_json(obj)
    space = obj.get("space", "schlumprecht")
    if space == "schlumprecht":
        est = schlumprecht_norm(x)
        return EXIT_PASS, {"space": "schlumprecht", "value": est.value, "error": est.error}
    if isinstance(space, dict) and "schreier" in space:
        N = int(space["schreier"])
        return EXIT_PASS, {"space": {"schreier": N}, "value": str(schreier_norm(x, N))}
    raise InputError(f"unknown space {space!r}")


def cmd_schreier(args) -> tuple[int, object]:
    obj = _read_input(args.input) or {}
    N = int(obj.get("N", args.level if args.level is not None else 1))
    out: dict = {"N": N}
    if "set" in obj:
        A = sorted(int(a) for a in obj["set"])
        out.update({"set": A, "is_schreier": is_schreier(A, N), "is_maximal": is_maximal_schreier(A, N)})
        if out["is_maximal"] and N >= 1:
            out["decomposition"] = [list(F) for F in decompose_maximal(A, N)]
    if "start" in obj:
        out["next_maximal_set"] = list(next_maximal_set(int(obj["start"]), N))
    if "entries" in obj:
        out["norm"] = str(schreier_norm(SparseVector.from_json(obj), N))
    return EXIT_PASS, out


def _tree_from(obj, depth: int) -> CoreTree:
    if obj.get("uniform"):
        return uniform_core_tree(obj["m"], obj.get("q", ()), obj.get("depth"))
    return build_core_tree(obj["m"], obj.get("q", ()), int(obj.get("depth", depth)))


def cmd_tree(args) -> tuple[int, object]:
    obj = _need(_read_input(args.input), "tree parameters")
    depth = args.depth if args.depth is not None else 1
    if "nodes" in obj:
        rep = check_scheme(DyadicScheme.from_json(obj))
    elif "R" in obj:
        T, R = _tree_from(obj["T"], depth), _tree_from(obj["R"], depth)
        rep = check_coupling(T, R, args.level if args.level is not None else 1)
    else:
        rep = check_conditions(_tree_from(obj, depth))
    return (EXIT_PASS if rep["passed"] else EXIT_FAIL), rep


def cmd_construct(args) -> tuple[int, object]:
    target = args.target
    depth = args.depth if args.depth is not None else 1
    N = args.level if args.level is not None else 1
    if target == "params":
        out = generate_params(depth, args.mode)
        if args.mode == "coupled_pair":
            return EXIT_PASS, {"T": out[0].to_json(), "R": out[1].to_json()}
        return EXIT_PASS, out.to_json()
    if target == "tree-vector":
        obj = _need(_read_input(args.input), "tree parameters")
        va = build_tree_vector(_tree_from(obj, depth), depth)
        f = associated_functional(va)
        if pairing_value(va)["exact"] != 1:
            return EXIT_FAIL, {"error": "associated functional does not norm the vector"}
        return EXIT_PASS, {"vector": va.vector().to_json(), "functional": functional_to_json(f),
                           "exact": va.is_exact}
    if target == "dyadic-family":
        fam = schreier_dyadic_family(depth, N)
        problems = validate_dyadic_family(fam)
        if problems:
            return EXIT_FAIL, {"errors": problems}
        return EXIT_PASS, fam.to_json()
    if target == "averages":
        blocks = repeated_average_sequence(args.count if args.count is not None else 2, N)
        return EXIT_PASS, [{"E": [b.lo, b.hi], "s": b.s} for b in blocks]
    if target == "witness":
        w = strict_singularity_witness(2, args.k if args.k is not None else 1)
        return (EXIT_PASS if w.passed else EXIT_FAIL), w.to_json()
    raise InputError(f"unknown target {target!r}; choose from {', '.join(TARGETS)}")


def _run_suite(name: str, args) -> tuple[list, list]:
    depth, seed = args.depth, args.seed
    if name == "est-vectors":
        return suites.est_vectors_suite(), []
    if name == "est-functionals2":
        return suites.est_functionals2_suite(seed, args.count or 20), []
    if name == "contraction":
        return suites.contraction_suite(seed, args.count or 500), []
    if name == "sch-av":
        return suites.sch_av_suite(seed, args.count or 4), []
    if name == "sch-dyadic":
        return suites.sch_dyadic_suite(depth if depth is not None else 5, args.level or 1), []
    if name == "witness":
        return suites.witness_suite(args.k if args.k is not None else 2), []
    if name == "separation":
        return suites.separation_suite(depth if depth is not None else 2)
    if name == "params":
        return suites.params_suite(depth if depth is not None else 4), []
    if name == "biorthogonality":
        return suites.biorthogonality_suite(), []
    raise InputError(f"unknown suite {name!r}")


SUITE_NAMES = ("est-vectors", "est-functionals2", "contraction", "sch-av", "sch-dyadic",
               "witness", "separation", "params", "biorthogonality")


def cmd_verify(args) -> tuple[int, object]:
    names = SUITE_NAMES if args.suite == "all" else (args.suite,)
    if args.suite != "all" and args.suite not in SUITE_NAMES:
        raise InputError(f"unknown suite {args.suite!r}")
    reports, rows = [], []
    for name in names:
        r, c = _run_suite(name, args)
        reports += [{"suite": name, **x} for x in r]
        rows += c
    failed = any(r["verdict"] == "fail" for r in reports)
    if args.format == "csv" and rows:
        return (EXIT_FAIL if failed else EXIT_PASS), _csv(rows)
    return (EXIT_FAIL if failed else EXIT_PASS), {"seed": args.seed, "reports": reports}


def _csv(rows: list) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=["level", "N", "bound_upper_log2"], extrasaction="ignore",
                            lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
    return buf.getvalue()


def cmd_separate(args) -> tuple[int, object]:
    scheme = generate_params(args.depth if args.depth is not None else 2, "dyadic_scheme")
    obj = _read_input(args.input) or {}
    leaves = scheme.leaves()
    pair = tuple(obj.get("pair", (leaves[0], leaves[-1])))
    rows = separation_curve(scheme, pair)
    if args.format == "csv":
        return EXIT_PASS, _csv(rows)
    return EXIT_PASS, {"pair": list(pair), "curve": rows}


HANDLERS = {"norm": cmd_norm, "schreier": cmd_schreier, "tree": cmd_tree,
            "construct": cmd_construct, "verify": cmd_verify, "separate": cmd_separate}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="smallideals", description=__doc__.splitlines()[0])
    p.add_argument("command", nargs="?", choices=COMMANDS)
    p.add_argument("target", nargs="?", help="construct target: " + ", ".join(TARGETS))
    p.add_argument("--command", dest="command_flag", choices=COMMANDS)
    p.add_argument("--input", help="JSON file, inline JSON, or - for stdin")
    p.add_argument("--output", help="write the result here instead of stdout")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--suite", default="all")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--depth", type=int)
    p.add_argument("--level", type=int, help="Schreier level N or coupling level")
    p.add_argument("--k", type=int)
    p.add_argument("--count", type=int)
    p.add_argument("--mode", default="single", choices=("single", "coupled_pair", "dyadic_scheme"))
    p.add_argument("--tolerance", type=float, default=1e-9)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    command = args.command or args.command_flag
    try:
        if command is None:
            raise InputError("a command is required: " + ", ".join(COMMANDS))
        if args.tolerance <= 0:
            raise InputError("--tolerance must be positive")
        code, result = HANDLERS[command](args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ValueError, KeyError, IndexError, TypeError) as exc:
        message = str(exc)
        print(f"error: {message}", file=sys.stderr)
        return EXIT_SCALE if any(m in message for m in SCALE_MARKERS) else EXIT_INPUT
    text = result if isinstance(result, str) else dumps(result) + "\n"
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
