"""Command-line experiment driver.

Exit status: 0 on success, 1 on an internal error or a failed check, 2 on a
usage error (bad flags, malformed JSON, caps exceeded).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from . import fp_algebra as fp
from . import harness
from .groups import SchemaError, builtin_group_names
from .translation import HiddenTranslationInstance


class UsageError(Exception):
    pass


# --------------------------------------------------------------------------
# output
# --------------------------------------------------------------------------

def _csv(rows: list[dict]) -> str:
    if not rows:
        return ""
    buf = io.StringIO()
    fields = list(rows[0])
    w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: json.dumps(v) if isinstance(v, (list, dict)) else v for k, v in r.items()})
    return buf.getvalue()


def _emit(args, exp: harness.Experiment, table: str = "summary"):
    """CSV: the aggregate row (or the table rows); JSON: summary plus per-trial detail."""
    if args.format == "json":
        text = json.dumps({"summary": exp.summary, "trials": exp.trials}, indent=2, sort_keys=True) + "\n"
    else:
        text = _csv([exp.summary] if table == "summary" else exp.trials)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


# --------------------------------------------------------------------------
# commands
# --------------------------------------------------------------------------

def _check_pn(args):
    if args.p is not None and not fp.is_prime(args.p):
        raise UsageError(f"--p must be prime, got {args.p}")
    if args.n is not None and args.n < 1:
        raise UsageError(f"--n must be >= 1, got {args.n}")
    if getattr(args, "trials", 1) < 1:
        raise UsageError("--trials must be >= 1")


def cmd_ht_run(args) -> int:
    _check_pn(args)
    mode = args.mode or "statevector"
    if mode not in ("statevector", "shortcut"):
        raise UsageError("ht-run --mode is statevector or shortcut")
    exp = harness.ht_run(args.p, args.n, args.trials, args.seed, mode)
    _emit(args, exp)
    return 0


def cmd_lemma_check(args) -> int:
    _check_pn(args)
    try:
        results = harness.lemma_suite(args.p, args.n, args.exhaustive, args.trials, args.seed,
                                      fault=args.inject_fault)
    except harness.CapExceeded as exc:
        raise UsageError(str(exc)) from None
    lines = []
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        extra = f" {r.detail}" if r.detail else ""
        lines.append(f"{r.name}: {status} (checked {r.checked}){extra}")
        if not r.passed:
            lines.append(f"  counterexample: {json.dumps(r.counterexample, sort_keys=True)}")
    text = "\n".join(lines) + "\n"
    if args.format == "json":
        text = json.dumps([r.__dict__ for r in results], indent=2, sort_keys=True) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0 if all(r.passed for r in results) else 1


def cmd_distribution(args) -> int:
    _check_pn(args)
    mode = args.mode or "statevector"
    if mode not in ("statevector", "shortcut"):
        raise UsageError("distribution --mode is statevector or shortcut")
    samples = args.samples if args.samples is not None else (10_000 if mode == "statevector" else 0)
    exp = harness.sampling_table(args.p, args.n, args.seed, samples, mode)
    _emit(args, exp, table="rows")
    return 0


def cmd_orbit_demo(args) -> int:
    mode = args.mode or ("transparent" if args.action else "faithful")
    if mode not in ("faithful", "transparent"):
        raise UsageError("orbit-demo --mode is faithful or transparent")
    if args.action:
        names = harness.all_builtin_actions() if args.action == "all" else [args.action]
        exp = harness.superposition_report(names, args.seed, mode)
        _emit(args, exp, table="rows")
        return 0
    if args.group not in builtin_group_names():
        raise UsageError(f"unknown group {args.group!r}; choose from {builtin_group_names()}")
    exp = harness.orbit_coset_trials(args.group, args.trials, args.seed, mode, args.epsilon, args.disjoint)
    _emit(args, exp)
    return 0


def cmd_hsp_run(args) -> int:
    _check_pn(args)
    exp = harness.hsp_run(args.p, args.n, args.trials, args.seed, zero=args.zero)
    _emit(args, exp)
    return 0


def cmd_stabilizer_run(args) -> int:
    mode = args.mode or "faithful"
    if mode not in ("faithful", "transparent"):
        raise UsageError("stabilizer-run --mode is faithful or transparent")
    names = harness.all_builtin_actions() if args.action == "all" else [args.action]
    exp = harness.stabilizer_report(names, args.trials, args.seed, mode, args.epsilon, args.method)
    _emit(args, exp, table="rows")
    return 0


def cmd_make_instance(args) -> int:
    _check_pn(args)
    inst = HiddenTranslationInstance.random(args.p, args.n, harness.trial_rng(args.seed, 0))
    text = inst.to_json("verify" if args.reveal else "sealed") + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


# --------------------------------------------------------------------------
# parser
# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="orbitcoset", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, p=3, n=2, trials=1):
        sp.add_argument("--p", type=int, default=p)
        sp.add_argument("--n", type=int, default=n)
        sp.add_argument("--trials", type=int, default=trials)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--mode", default=None)
        sp.add_argument("--epsilon", type=float, default=1e-3)
        sp.add_argument("--out", default=None)
        sp.add_argument("--format", choices=("csv", "json"), default="csv")
        return sp

    sp = common(sub.add_parser("ht-run", help="repeated Translation Finding runs"), n=3, trials=200)
    sp.set_defaults(func=cmd_ht_run)

    sp = common(sub.add_parser("lemma-check", help="Line Lemma, span rank, fraction bound, identity"),
                trials=200)
    sp.add_argument("--exhaustive", action="store_true", help="sweep every (z, y) pair")
    sp.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
    sp.set_defaults(func=cmd_lemma_check)

    sp = common(sub.add_parser("distribution", help="Fourier-sampling class table"))
    sp.add_argument("--samples", type=int, default=None)
    sp.set_defaults(func=cmd_distribution)

    sp = common(sub.add_parser("orbit-demo", help="orbit superposition / recursive Orbit Coset demos"),
                trials=50)
    sp.add_argument("--group", default="z3sq_semidirect_z2")
    sp.add_argument("--action", default=None, help="built-in action name, JSON path, or 'all'")
    sp.add_argument("--disjoint", action="store_true", help="plant disjoint orbits (expect Reject)")
    sp.set_defaults(func=cmd_orbit_demo)

    sp = common(sub.add_parser("hsp-run", help="hidden subgroup in Z_p^n x| Z_2"), n=3, trials=200)
    sp.add_argument("--zero", action="store_true", help="plant u = 0")
    sp.set_defaults(func=cmd_hsp_run)

    sp = common(sub.add_parser("stabilizer-run", help="Stabilizer on built-in actions"), trials=5)
    sp.add_argument("--action", default="all")
    sp.add_argument("--method", choices=("smooth", "solvable"), default="smooth")
    sp.set_defaults(func=cmd_stabilizer_run)

    sp = common(sub.add_parser("make-instance", help="emit a hidden-translation instance as JSON"))
    sp.add_argument("--reveal", action="store_true", help="include the planted shift")
    sp.set_defaults(func=cmd_make_instance)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, SchemaError) as exc:
        print(f"orbitcoset {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001
        print(f"orbitcoset {args.command}: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
