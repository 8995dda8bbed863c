"""Command-line front end.

Subcommands: ``verify``, ``moments``, ``sample``, ``suite``, ``congruence``,
``scan-wolstenholme``.  Exit status is 0 when everything holds, 1 on any
mathematical failure and 2 on usage or parameter errors.

Every checker is addressable by id, both from ``verify`` flags and from
suite files; both routes build the same parameter dict and go through
:func:`run_item`.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from typing import Any, Callable

from . import congruences, distribution, identities, matrices
from .compositions import BudgetExceeded
from .exact import DomainError, GaussianRational
from .reports import IdentityReport

SCHEMA = "cvlab/1"

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


class ParamError(ValueError):
    """A suite item or flag set does not fit its checker."""


# parameter coercion


def _int(params: dict, name: str) -> int:
    if name not in params or params[name] is None:
        raise ParamError(f"missing parameter {name!r}")
    try:
        return int(params[name])
    except (TypeError, ValueError):
        raise ParamError(f"parameter {name!r} must be an integer") from None


def _int_list(params: dict, name: str) -> list[int]:
    raw = params.get(name)
    if raw is None:
        raise ParamError(f"missing parameter {name!r}")
    if isinstance(raw, str):
        raw = [x for x in raw.split(",") if x.strip()]
    try:
        return [int(x) for x in raw]
    except (TypeError, ValueError):
        raise ParamError(f"parameter {name!r} must be a list of integers") from None


def _gauss(params: dict, name: str) -> GaussianRational:
    raw = params.get(name)
    if raw is None:
        raise ParamError(f"missing parameter {name!r}")
    try:
        return GaussianRational.coerce(str(raw) if isinstance(raw, int) else raw)
    except (TypeError, ValueError) as exc:
        raise ParamError(f"parameter {name!r}: {exc}") from None


def _gauss_list(params: dict, name: str) -> list[GaussianRational]:
    raw = params.get(name)
    if raw is None:
        raise ParamError(f"missing parameter {name!r}")
    if isinstance(raw, str):
        raw = raw.split(",")
    try:
        return [GaussianRational.coerce(str(x) if isinstance(x, int) else x) for x in raw]
    except (TypeError, ValueError) as exc:
        raise ParamError(f"parameter {name!r}: {exc}") from None


def _matrices(params: dict, name: str = "A") -> list[matrices.ExactMatrix]:
    raw = params.get(name)
    if raw is None:
        raise ParamError(f"missing parameter {name!r}")
    if isinstance(raw, str):
        raw = json.loads(raw)
    try:
        return [matrices.ExactMatrix.from_json(obj) for obj in raw]
    except (KeyError, TypeError, ValueError) as exc:
        raise ParamError(f"parameter {name!r}: {exc}") from None


def _spec(params: dict) -> distribution.MultisetSpec:
    return distribution.MultisetSpec(tuple(_gauss_list(params, "values")),
                                     tuple(_int_list(params, "mults")))


def _flag(params: dict, name: str) -> bool:
    raw = params.get(name, False)
    if isinstance(raw, str):
        return raw.lower() in ("1", "true", "yes")
    return bool(raw)


Runner = Callable[[dict, Any], list]

REGISTRY: dict[str, Runner] = {
    "eq3": lambda p, b: _moment_item("eq3", p, b),
    "eq4": lambda p, b: _moment_item("eq4", p, b),
    "eq5": lambda p, b: _moment_item("eq5", p, b),
    "eq8": lambda p, b: [identities.check_eq8(_int_list(p, "caps"), _gauss_list(p, "z"), _int(p, "m"), b)],
    "eq12": lambda p, b: [identities.check_eq12(_int_list(p, "caps"), _int(p, "m"), b)],
    "eq13": lambda p, b: [identities.check_eq13(_int(p, "a"), _int(p, "b"), _int(p, "m"))],
    "eq14": lambda p, b: [identities.check_eq14(_int(p, "n1"), _int(p, "n2"), _gauss(p, "z"), _int(p, "m"))],
    "eq15": lambda p, b: [identities.check_eq15(_int(p, "n1"), _int(p, "n2"), _int(p, "n3"),
                                                _gauss(p, "z"), _gauss(p, "w"), _int(p, "m"))],
    "eq16": lambda p, b: [identities.check_eq16(_int(p, "n1"), _int(p, "n2"), _int(p, "n3"), _int(p, "m"))],
    "eq17": lambda p, b: [identities.check_eq17(_int(p, "s"), _int(p, "l"), _int(p, "m"), b)],
    "eq21": lambda p, b: [identities.check_eq21(_int(p, "n"), _int(p, "s"), _int(p, "m"), b)],
    "corollary_binary": lambda p, b: [identities.check_corollary_binary(_int(p, "s"), _int(p, "m"))],
    "eq22": lambda p, b: [identities.check_eq22(_int_list(p, "caps"), _gauss_list(p, "z"), _int(p, "m"), b)],
    "eq26": lambda p, b: [identities.check_eq26(_int(p, "s"), _int(p, "l"), _int(p, "m"), b)],
    "eq27": lambda p, b: [identities.check_eq27(_int_list(p, "caps"), _gauss_list(p, "z"), _int(p, "m"), b)],
    "remark22": lambda p, b: [identities.check_remark22(_int(p, "k1"), _int(p, "k2"), _int(p, "n"))],
    "eq28": lambda p, b: [matrices.check_eq28(_int_list(p, "caps"), _matrices(p), _int(p, "m"), b)],
    "eq29": lambda p, b: [matrices.check_eq29(_int_list(p, "caps"), _matrices(p), _int(p, "m"), b)],
    "eq30": lambda p, b: [matrices.check_eq30(_int_list(p, "caps"), _matrices(p), _int(p, "m"), b)],
    "wolstenholme": lambda p, b: [congruences.check_wolstenholme_theorem(_int(p, "p"))],
    "glaisher": lambda p, b: [congruences.check_glaisher(_int(p, "p"), _int(p, "s"))],
    "c18": lambda p, b: [congruences.check_congruence18(_int(p, "p"), _int(p, "s"), _flag(p, "direct"), b)],
    "c20": lambda p, b: [congruences.check_congruence20(_int(p, "p"), _int(p, "s"))],
}
ALIASES = {"eq15_16": ("eq15", "eq16"), "eq18": ("c18",), "eq20": ("c20",)}

IDENTITY_IDS = sorted(set(REGISTRY) | set(ALIASES))


def _moment_item(ident: str, params: dict, budget) -> list[IdentityReport]:
    spec = _spec(params)
    if ident != "eq3" and spec.N < 2:
        raise DomainError("closed forms for higher moments need N >= 2")
    reports = distribution.check_moments(spec, _int(params, "m"), budget)
    return [r for r in reports if r.identity_id == ident]


def run_item(item: dict, budget: int | None = None) -> list[dict]:
    """Run one suite item; returns serialized reports (errors become error records)."""
    ident = item.get("id")
    targets = ALIASES.get(ident, (ident,))
    out = []
    for target in targets:
        runner = REGISTRY.get(target)
        if runner is None:
            out.append({"kind": "error", "id": ident, "error": f"unknown identity id {ident!r}"})
            continue
        try:
            out.extend(r.to_json() for r in runner(item, budget))
        except (ParamError, DomainError, BudgetExceeded, ValueError) as exc:
            out.append({"kind": "error", "id": target, "error": f"{type(exc).__name__}: {exc}"})
    return out


# reports


def _status(rec: dict) -> str:
    if rec.get("kind") == "error":
        return "error"
    if rec.get("verdict") == "fails":
        return "fail"
    return "pass"


def build_run_report(command: str, records: list[dict], started: float, **meta) -> dict:
    counts = {"pass": 0, "fail": 0, "error": 0}
    for rec in records:
        counts[_status(rec)] += 1
    counts["total"] = len(records)
    errata = sorted({rec["note"] for rec in records if rec.get("note")})
    report = {
        "schema": SCHEMA,
        "command": command,
        "items": records,
        "counts": counts,
        "errata": errata,
        "wall_time": round(time.perf_counter() - started, 6),
    }
    report.update(meta)
    return report


def exit_code(report: dict) -> int:
    if report["counts"]["fail"]:
        return EXIT_FAIL
    if report["counts"]["error"]:
        return EXIT_USAGE
    return EXIT_OK


def dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)


def _summary_line(rec: dict) -> str:
    kind = rec.get("kind")
    if kind == "error":
        return f"[error] {rec['id']}: {rec['error']}"
    if kind == "identity":
        lhs, rhs = rec["lhs"], rec["rhs"]
        if isinstance(lhs, dict) and "value" in lhs:
            lhs = f"{lhs['value']} mod {lhs['modulus']}"
            rhs = f"{rhs['value']} mod {rhs['modulus']}"
        elif isinstance(lhs, dict):
            lhs = f"<{lhs['rows']}x{lhs['cols']} matrix>"
            rhs = f"<{rhs['rows']}x{rhs['cols']} matrix>"
        line = f"[{rec['verdict']}] {rec['id']}: lhs={lhs} rhs={rhs}"
        for name, ok in rec.get("checks", {}).items():
            line += f" {name}={'ok' if ok else 'FAILED'}"
        if rec.get("note"):
            line += f"\n    note: {rec['note']} (published form gives {rec['as_published']})"
        return line
    if kind == "moment":
        line = f"{rec['moment']} [{rec['method']}] = {rec['value']}"
        if rec["method"] == "monte_carlo":
            line += f" (~{rec['estimate_float']}, std err {rec['std_error']:.3g})"
        return line
    if kind == "scan":
        flag = " WOLSTENHOLME PRIME" if rec["wolstenholme"] else ""
        return f"p={rec['p']} residue={rec['residue']}{flag}"
    return json.dumps(rec)


def _emit(report: dict, as_json: bool, out=None) -> int:
    out = out or sys.stdout
    if as_json:
        print(dump_json(report), file=out)
    else:
        for rec in report["items"]:
            print(_summary_line(rec), file=out)
        c = report["counts"]
        print(f"{c['pass']} passed, {c['fail']} failed, {c['error']} errors", file=out)
    return exit_code(report)


# subcommands

_PARAM_FLAGS = ("caps", "z", "w", "m", "a", "b", "n1", "n2", "n3", "s", "l", "n",
                "k1", "k2", "A", "values", "mults", "p")


def cmd_verify(args) -> int:
    started = time.perf_counter()
    if args.identity_id not in REGISTRY and args.identity_id not in ALIASES:
        print(f"unknown identity id {args.identity_id!r}; known: {', '.join(IDENTITY_IDS)}",
              file=sys.stderr)
        return EXIT_USAGE
    item = {"id": args.identity_id}
    for name in _PARAM_FLAGS:
        value = getattr(args, name, None)
        if value is not None:
            item[name] = value
    if args.direct:
        item["direct"] = True
    records = run_item(item, args.budget)
    return _emit(build_run_report("verify", records, started), args.json)


def cmd_moments(args) -> int:
    started = time.perf_counter()
    try:
        spec = _load_spec(args)
        records: list[dict] = []
        if args.pmf:
            records.append({"kind": "pmf", **distribution.pmf(spec, args.m, args.budget).to_json()})
        orders = [args.order] if args.order else [1, 2, 3]
        if spec.N < 2:
            orders = [o for o in orders if o == 1]
        if args.method == "both":
            wanted = {MOMENT_IDS[o] for o in orders}
            records.extend(r.to_json() for r in distribution.check_moments(spec, args.m, args.budget)
                           if r.identity_id in wanted)
        else:
            for order in orders:
                if args.method == "oracle":
                    rep = distribution.moment_oracle(spec, args.m, order, order == 2, args.budget)
                else:
                    rep = CLOSED_FORMS[order](spec, args.m)
                records.append(rep.to_json())
    except (ParamError, DomainError, BudgetExceeded, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    report = build_run_report("moments", records, started)
    if args.json:
        print(dump_json(report))
        return exit_code(report)
    for rec in records:
        if rec["kind"] == "pmf":
            for e in rec["entries"]:
                print(f"P(X = {e['value']}) = {e['prob']}  (q = {e['q']})")
        else:
            print(_summary_line(rec))
    return exit_code(report)


MOMENT_IDS = {1: "eq3", 2: "eq4", 3: "eq5"}
CLOSED_FORMS = {
    1: distribution.mean_closed,
    2: distribution.second_abs_moment_closed,
    3: distribution.third_moment_closed,
}


def _load_spec(args) -> distribution.MultisetSpec:
    if args.spec:
        obj = json.loads(args.spec) if args.spec.lstrip().startswith("{") else _read_json(args.spec)
        return distribution.MultisetSpec.from_json(obj)
    if args.values is None or args.mults is None:
        raise ParamError("give --spec or both --values and --mults")
    return _spec({"values": args.values, "mults": args.mults})


def _read_json(path: str):
    with open(path) as fh:
        return json.load(fh)


def cmd_sample(args) -> int:
    started = time.perf_counter()
    try:
        spec = _load_spec(args)
        reps = distribution.sample_moments(spec, args.m, args.trials, args.seed)
    except (ParamError, DomainError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    report = build_run_report("sample", [r.to_json() for r in reps], started,
                              seed=args.seed, trials=args.trials)
    return _emit(report, args.json)


def cmd_suite(args) -> int:
    started = time.perf_counter()
    try:
        config = _read_json(args.file)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: cannot read suite: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if isinstance(config, list):
        config = {"items": config}
    items = config.get("items")
    if not isinstance(items, list):
        print("error: suite must be a list of items or an object with 'items'", file=sys.stderr)
        return EXIT_USAGE
    unknown = [it.get("id") for it in items if it.get("id") not in REGISTRY and it.get("id") not in ALIASES]
    if unknown:
        print(f"error: unknown identity ids in suite: {unknown}", file=sys.stderr)
        return EXIT_USAGE
    budget = args.budget if args.budget is not None else config.get("budget")
    records: list[dict] = []
    for item in items:
        records.extend(run_item(item, budget))
    report = build_run_report("suite", records, started, suite=args.file)
    return _emit(report, args.json)


def cmd_congruence(args) -> int:
    started = time.perf_counter()
    item = {"id": args.kind, "p": args.p, "s": args.s, "direct": args.direct}
    records = run_item(item, args.budget)
    return _emit(build_run_report("congruence", records, started), args.json)


def cmd_scan(args) -> int:
    started = time.perf_counter()
    if args.max < 0:
        print("error: --max must be nonnegative", file=sys.stderr)
        return EXIT_USAGE
    hits = []
    count = 0
    for rec in congruences.iter_scan(args.max, args.checkpoint, args.workers):
        count += 1
        if rec.is_wolstenholme:
            hits.append(rec.p)
        if args.jsonl:
            print(json.dumps(rec.to_json()))
        elif rec.is_wolstenholme or args.verbose:
            print(_summary_line({"kind": "scan", **rec.to_json()}))
    summary = {
        "schema": SCHEMA,
        "command": "scan-wolstenholme",
        "max_p": args.max,
        "primes_scanned": count,
        "wolstenholme_primes": hits,
        "wall_time": round(time.perf_counter() - started, 6),
    }
    if args.json:
        print(dump_json(summary))
    elif not args.jsonl:
        print(f"scanned {count} primes up to {args.max}; Wolstenholme primes: {hits or 'none'}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cvlab", description=__doc__.split("\n\n")[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit a JSON run report")
    common.add_argument("--budget", type=int, default=None,
                        help="composition enumeration budget (overrides CVLAB_BUDGET)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", parents=[common], help="run one identity checker")
    p.add_argument("identity_id", help=f"one of: {', '.join(IDENTITY_IDS)}")
    for name in _PARAM_FLAGS:
        p.add_argument(f"--{name}", default=None)
    p.add_argument("--direct", action="store_true")
    p.set_defaults(func=cmd_verify)

    def spec_args(q):
        q.add_argument("--spec", help="multiset JSON (inline or file path)")
        q.add_argument("--values", help="comma-separated Gaussian rationals")
        q.add_argument("--mults", help="comma-separated multiplicities")
        q.add_argument("--m", type=int, required=True)

    p = sub.add_parser("moments", parents=[common], help="exact moments of X(m, Phi)")
    spec_args(p)
    p.add_argument("--order", type=int, choices=(1, 2, 3))
    p.add_argument("--method", choices=("oracle", "closed_form", "both"), default="both")
    p.add_argument("--pmf", action="store_true", help="also print the exact distribution")
    p.set_defaults(func=cmd_moments)

    p = sub.add_parser("sample", parents=[common], help="Monte-Carlo moment estimates")
    spec_args(p)
    p.add_argument("--trials", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("suite", parents=[common], help="run a JSON batch of checkers")
    p.add_argument("file")
    p.set_defaults(func=cmd_suite)

    p = sub.add_parser("congruence", parents=[common], help="binomial congruences mod p^k")
    p.add_argument("kind", choices=("wolstenholme", "glaisher", "c18", "c20"))
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--s", type=int, default=1)
    p.add_argument("--direct", action="store_true", help="c18: also sum over compositions")
    p.set_defaults(func=cmd_congruence)

    p = sub.add_parser("scan-wolstenholme", help="scan primes for C(2p-1,p-1) = 1 mod p^4")
    p.add_argument("--max", type=int, required=True)
    p.add_argument("--checkpoint", help="JSON-lines file to append to and resume from")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--json", action="store_true", help="emit a JSON summary")
    p.add_argument("--jsonl", action="store_true", help="stream one JSON record per prime")
    p.add_argument("--verbose", action="store_true")
    p.set_defaults(func=cmd_scan)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
