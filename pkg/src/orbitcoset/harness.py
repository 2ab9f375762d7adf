"""Seeded experiments behind the command line: trial loops and aggregates."""
from __future__ import annotations

import itertools
import math
from contextlib import contextmanager
from dataclasses import dataclass, field
from statistics import NormalDist

import numpy as np

from . import fp_algebra as fp
from .actions import builtin_action, builtin_action_names, load_action, planted_translation_instance, section_view
from .groups import builtin_group
from .orbits import (SolverConfig, SolverContext, orbit_state, orbit_superposition, solve_orbit_coset,
                     solve_stabilizer)
from .state import fidelity, label_state
from .translation import (HiddenTranslationInstance, exact_sample_distribution, hsp_semidirect,
                          ht_fourier_sample, sample_count, semidirect_hiding_function,
                          statevector_distribution, translation_finding)


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    """Independent stream per ``(seed, trial)``."""
    return np.random.default_rng(np.random.SeedSequence([seed, trial]))


def wilson_interval(successes: int, n: int, confidence: float = 0.99) -> tuple[float, float]:
    if n == 0:
        return 0.0, 1.0
    z = NormalDist().inv_cdf(0.5 + confidence / 2)
    phat = successes / n
    denom = 1 + z * z / n
    centre = (phat + z * z / (2 * n)) / denom
    half = z * math.sqrt(phat * (1 - phat) / n + z * z / (4 * n * n)) / denom
    return max(0.0, centre - half), min(1.0, centre + half)


@dataclass
class Experiment:
    """Aggregate row plus per-trial detail records."""

    summary: dict
    trials: list = field(default_factory=list)


# --------------------------------------------------------------------------
# lemma checks
# --------------------------------------------------------------------------

LEMMA_PAIR_CAP = 250_000


class CapExceeded(ValueError):
    """A requested exhaustive sweep is beyond the desk-scale cap."""


@contextmanager
def corrupted_sym_power():
    """Fault injection: perturb the last coordinate of every symmetric power."""
    orig = fp.sym_power_matrix

    def bad(ys, p, k):
        out = np.array(orig(ys, p, k), copy=True)
        out[:, -1] = (out[:, -1] + 1) % p
        return out

    fp.sym_power_matrix = bad
    try:
        yield
    finally:
        fp.sym_power_matrix = orig


@dataclass
class LemmaResult:
    name: str
    passed: bool
    checked: int
    detail: str = ""
    counterexample: dict | None = None


def _vectors(p, n):
    return [tuple(int(a) for a in row) for row in fp.all_vectors(p, n)]


def check_line_lemma_sweep(p: int, n: int, exhaustive: bool, rng) -> LemmaResult:
    vs = _vectors(p, n)
    if exhaustive:
        if len(vs) ** 2 > LEMMA_PAIR_CAP:
            raise CapExceeded(f"{len(vs) ** 2} pairs exceed the cap {LEMMA_PAIR_CAP}")
        pairs = itertools.product(vs, vs)
    else:
        pairs = ((vs[int(rng.integers(len(vs)))], vs[int(rng.integers(len(vs)))]) for _ in range(500))
    count = 0
    for z, y in pairs:
        count += 1
        if not fp.check_line_lemma(p, n, z, y):
            return LemmaResult("line_lemma", False, count, "", {"z": list(z), "y": list(y)})
    return LemmaResult("line_lemma", True, count)


def check_span_rank(p: int, n: int) -> LemmaResult:
    if p ** n > LEMMA_PAIR_CAP:
        raise CapExceeded(f"{p ** n} vectors exceed the cap {LEMMA_PAIR_CAP}")
    got, want = fp.check_span(p, n), math.comb(n + p - 2, p - 1)
    res = LemmaResult("span", got == want, p ** n, f"rank={got} expected={want}")
    if got != want:
        res.counterexample = {"rank": got, "expected": want}
    return res


def check_fraction_sweep(p: int, n: int, trials: int, rng) -> LemmaResult:
    if p ** n > LEMMA_PAIR_CAP:
        raise CapExceeded(f"{p ** n} vectors exceed the cap {LEMMA_PAIR_CAP}")
    nonzero = _vectors(p, n)[1:]
    for t in range(trials):
        u = nonzero[int(rng.integers(len(nonzero)))]
        w = fp.random_proper_subspace(p, n, rng)
        if not fp.check_fraction_lemma(p, n, u, w):
            return LemmaResult("fraction", False, t + 1, "",
                               {"u": list(u), "W": [[int(a) for a in row] for row in w]})
    return LemmaResult("fraction", True, trials)


def check_identity_sweep(p: int, n: int) -> LemmaResult:
    """``y^(p-1) . u* = (y . u)^(p-1)`` for every pair."""
    vs = fp.all_vectors(p, n)
    if len(vs) ** 2 > LEMMA_PAIR_CAP:
        raise CapExceeded(f"{len(vs) ** 2} pairs exceed the cap {LEMMA_PAIR_CAP}")
    ys = fp.sym_power_matrix(vs, p, p - 1)
    us = fp.star_matrix(vs, p, p - 1)
    lhs = (ys @ us.T) % p
    rhs = np.vectorize(lambda d: pow(int(d), p - 1, p))((vs @ vs.T) % p)
    bad = np.argwhere(lhs != rhs)
    if len(bad):
        i, j = bad[0]
        return LemmaResult("identity", False, len(vs) ** 2, "",
                           {"y": vs[i].tolist(), "u": vs[j].tolist()})
    return LemmaResult("identity", True, len(vs) ** 2)


def lemma_suite(p: int, n: int, exhaustive: bool = True, fraction_trials: int = 200, seed: int = 0,
                fault: bool = False) -> list[LemmaResult]:
    fp.check_prime(p)
    rng = trial_rng(seed, 0)
    with corrupted_sym_power() if fault else _null():
        return [check_line_lemma_sweep(p, n, exhaustive, rng), check_span_rank(p, n),
                check_fraction_sweep(p, n, fraction_trials, rng), check_identity_sweep(p, n)]


@contextmanager
def _null():
    yield


# --------------------------------------------------------------------------
# hidden translation
# --------------------------------------------------------------------------

def ht_run(p: int, n: int, trials: int, seed: int, mode: str = "statevector",
           multiplier: int = 1) -> Experiment:
    rows = []
    for t in range(trials):
        rng = trial_rng(seed, t)
        inst = HiddenTranslationInstance.random(p, n, rng)
        out = translation_finding(inst, rng, mode, multiplier)
        rows.append({"trial": t, "u": list(inst.reveal()), "outcome": "found" if out.found else "abort",
                     "reason": out.reason, "output": list(out.u) if out.found else None,
                     "correct": bool(out.found and inst.verify(out.u)), "samples": out.samples,
                     "kept": out.kept})
    aborts = sum(r["outcome"] == "abort" for r in rows)
    found = trials - aborts
    mismatches = sum(r["outcome"] == "found" and not r["correct"] for r in rows)
    lo, hi = wilson_interval(aborts, trials)
    summary = {"p": p, "n": n, "trials": trials, "seed": seed, "mode": mode,
               "samples_per_run": sample_count(p, n) * multiplier, "found": found, "aborted": aborts,
               "mismatches": mismatches, "correct_rate": (found - mismatches) / trials,
               "abort_rate": aborts / trials, "abort_ci99_low": lo,
               "abort_ci99_high": hi}
    return Experiment(summary, rows)


def sampling_table(p: int, n: int, seed: int, samples: int = 0, mode: str = "statevector") -> Experiment:
    """Exact class table; with ``samples`` also empirical frequencies from ``mode``."""
    rng = trial_rng(seed, 0)
    inst = HiddenTranslationInstance.random(p, n, rng)
    u = inst.reveal()
    exact = exact_sample_distribution(p, n, u)
    emp = {key: 0 for key in exact}
    if samples:
        for rec in ht_fourier_sample(inst, rng, mode, size=samples):
            emp[(sum(a * b for a, b in zip(rec.y, u)) % p, rec.c)] += 1
    rows = []
    for (k, c), prob in sorted(exact.items(), key=lambda kv: (-kv[0][1], kv[0][0])):
        row = {"k": k, "c": c, "probability": round(prob, 12)}
        if samples:
            row["empirical"] = emp[(k, c)] / samples
        rows.append(row)
    summary = {"p": p, "n": n, "u": list(u), "total": round(sum(exact.values()), 12)}
    if samples:
        summary["tv_distance"] = round(0.5 * sum(abs(r["probability"] - r["empirical"]) for r in rows), 6)
        summary["samples"] = samples
    if mode == "statevector":
        sv = statevector_distribution(inst)
        classes = {key: 0.0 for key in exact}
        for o, pr in sv.items():
            y, c = o[:-1], o[-1]
            classes[(sum(a * b for a, b in zip(y, u)) % p, c)] += pr
        summary["statevector_tv"] = 0.5 * sum(abs(classes[k] - exact[k]) for k in exact)
    return Experiment(summary, rows)


def hsp_run(p: int, n: int, trials: int, seed: int, zero: bool = False) -> Experiment:
    rows = []
    for t in range(trials):
        rng = trial_rng(seed, t)
        if zero:
            u = (0,) * n
        else:
            u = tuple(int(a) for a in rng.integers(0, p, size=n))
        f = semidirect_hiding_function(p, n, u, rng)
        res = hsp_semidirect(p, n, f, rng)
        correct = (not res.aborted) and res.generators == [(u, 1)]
        rows.append({"trial": t, "u": list(u), "aborted": res.aborted,
                     "generator": None if res.aborted else [list(res.generators[0][0]), 1],
                     "correct": correct})
    ok = sum(not r["aborted"] for r in rows)
    summary = {"p": p, "n": n, "trials": trials, "seed": seed, "non_abort": ok,
               "non_abort_rate": ok / trials,
               "wrong": sum((not r["aborted"]) and not r["correct"] for r in rows)}
    return Experiment(summary, rows)


# --------------------------------------------------------------------------
# orbit experiments
# --------------------------------------------------------------------------

def orbit_coset_trials(group_name: str, trials: int, seed: int, mode: str = "faithful",
                       eps: float = 1e-3, disjoint: bool = False) -> Experiment:
    """Planted hidden-translation instances over a built-in group, via the translation action."""
    group = builtin_group(group_name)
    rows = []
    for t in range(trials):
        rng = trial_rng(seed, t)
        u = group.random_element(rng)
        inst = planted_translation_instance(group, u, int(rng.integers(2 ** 31)), disjoint=disjoint)
        rep = solve_orbit_coset(group, inst.action, inst.phi0, inst.phi1, SolverConfig(mode=mode, eps=eps), rng)
        res = rep.result
        got = None if res.rejected else list(res.representative)
        exact = (not res.rejected) and (not disjoint) and tuple(res.representative) == tuple(u)
        rows.append({"trial": t, "planted": None if disjoint else list(u), "output": got,
                     "rejected": res.rejected, "exact": exact, "queries": rep.queries,
                     "copies": rep.copies["phi0"] + rep.copies["phi1"],
                     "fidelity_loss": round(rep.fidelity_loss, 9)})
    rejected = sum(r["rejected"] for r in rows)
    exact = sum(r["exact"] for r in rows)
    summary = {"group": group_name, "mode": mode, "trials": trials, "seed": seed, "eps": eps,
               "disjoint": disjoint, "rejected": rejected, "exact": exact,
               "success_rate": (rejected if disjoint else exact) / trials,
               "wrong": sum((not r["rejected"]) and not r["exact"] for r in rows)}
    return Experiment(summary, rows)


def superposition_report(names, seed: int, mode: str = "transparent", s: int = 2) -> Experiment:
    rows = []
    for i, name in enumerate(names):
        action, phi = load_action(name)
        group = action.group
        rng = trial_rng(seed, i)
        ctx = SolverContext(SolverConfig(mode=mode), rng, group.order)
        res = orbit_superposition(group, action, label_state(phi), ctx, s=s)
        target = orbit_state(section_view(action, group), phi)
        fids = [fidelity(c, target) for c in res.copies]
        rows.append({"action": name, "group_order": group.order, "labels": len(action.labels),
                     "copies": len(fids), "min_fidelity": round(min(fids), 12),
                     "all_zero_steps": sum(r.all_zero for r in res.reports),
                     "phase_steps": sum(not r.all_zero for r in res.reports),
                     "queries": action.queries})
    summary = {"actions": len(rows), "mode": mode, "min_fidelity": min(r["min_fidelity"] for r in rows)}
    return Experiment(summary, rows)


def stabilizer_report(names, trials: int, seed: int, mode: str = "faithful", eps: float = 1e-3,
                      method: str = "smooth") -> Experiment:
    rows = []
    for i, name in enumerate(names):
        action, phi = load_action(name)
        group = action.group
        truth = frozenset(action.stabilizer_elements(phi))
        good = 0
        for t in range(trials):
            rng = trial_rng(seed, 1000 * i + t)
            rep = solve_stabilizer(group, action, label_state(phi), SolverConfig(mode=mode, eps=eps), rng, method)
            good += group.closure(rep.result) == truth
        rows.append({"action": name, "stabilizer_order": len(truth), "trials": trials, "correct": good})
    summary = {"actions": len(rows), "mode": mode, "method": method,
               "all_correct": all(r["correct"] == r["trials"] for r in rows)}
    return Experiment(summary, rows)


def all_builtin_actions() -> list[str]:
    return builtin_action_names()


__all__ = ["trial_rng", "wilson_interval", "lemma_suite", "LemmaResult", "CapExceeded", "ht_run",
           "sampling_table", "hsp_run", "orbit_coset_trials", "superposition_report", "stabilizer_report", "all_builtin_actions", "builtin_action"]
