"""Hidden translation in Z_p^n and the solvers built on it.

Contents: the planted instance type, Fourier sampling over ``Z_p^n x Z_2``
(full statevector or the class-level shortcut), the two-oracle access
program, Translation Finding, the abelian Stabilizer solver, Orbit Coset in
``Z_p^n`` for quantum actions, and the hidden subgroup reduction for
``Z_p^n x| Z_2``.
"""
from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import fp_algebra as fp
from .actions import OrbitCosetResult
from .groups import AbelianGroup, SemidirectZpnZ2, orthogonal_subgroup
from .state import (CopySupply, OracleFn, PureState, Register, apply_oracle, apply_permutation,
                    as_supply, content_key, equality_test, max_support, probabilities, qft,
                    sample_outcomes, swap_test_rounds, tensor, uniform_superposition,
                    zero_state, SizeCapExceeded)


def sample_count(p: int, n: int) -> int:
    """Number of Fourier samples per run: ``13 p C(n+p-2, p-1)``."""
    return 13 * p * math.comb(n + p - 2, p - 1)


def _vec_index(x, p: int) -> int:
    out = 0
    for a in x:
        out = out * p + int(a)
    return out


def _neg(x, p: int) -> tuple:
    return tuple((-a) % p for a in x)


def _add(x, y, p: int) -> tuple:
    return tuple((a + b) % p for a, b in zip(x, y))


def _dot(x, y, p: int) -> int:
    return sum(int(a) * int(b) for a, b in zip(x, y)) % p


# --------------------------------------------------------------------------
# instances
# --------------------------------------------------------------------------

class HiddenTranslationInstance:
    """Injective ``f0`` on ``Z_p^n`` and ``f1`` with ``f1(x + u) = f0(x)``.

    Tables are indexed by the lexicographic order of ``Z_p^n``.  The shift
    ``u`` is private; ``verify`` and ``reveal`` exist for checking results.
    """

    def __init__(self, p: int, n: int, f0_table: Sequence[int], f1_table: Sequence[int],
                 modulus: int | None = None, u=None):
        self.p = fp.check_prime(p)
        if n < 1:
            raise ValueError("n must be >= 1")
        self.n = n
        size = p ** n
        if len(f0_table) != size or len(f1_table) != size:
            raise ValueError(f"function tables need {size} entries")
        self.f0_table = tuple(int(v) for v in f0_table)
        self.f1_table = tuple(int(v) for v in f1_table)
        self.modulus = modulus or (max(self.f0_table + self.f1_table) + 1)
        self.group = AbelianGroup.elementary(p, n)
        xs = [tuple(int(a) for a in row) for row in fp.all_vectors(p, n)]
        self.f0 = OracleFn(dict(zip(xs, self.f0_table)), self.modulus, injective=True, name="f0")
        self.f1 = OracleFn(dict(zip(xs, self.f1_table)), self.modulus, injective=True, name="f1")
        self._u = None if u is None else tuple(int(a) % p for a in u)
        self._dist: dict = {}

    def __repr__(self):
        return f"HiddenTranslationInstance(p={self.p}, n={self.n})"

    @classmethod
    def planted(cls, p: int, n: int, u, rng: np.random.Generator) -> HiddenTranslationInstance:
        u = tuple(int(a) % p for a in u)
        size = p ** n
        f0 = rng.permutation(size)
        xs = fp.all_vectors(p, n)
        f1 = [int(f0[_vec_index(_add(x, _neg(u, p), p), p)]) for x in xs]
        return cls(p, n, [int(v) for v in f0], f1, size, u)

    @classmethod
    def random(cls, p: int, n: int, seed, allow_zero: bool = False) -> HiddenTranslationInstance:
        rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
        while True:
            u = tuple(int(a) for a in rng.integers(0, p, size=n))
            if allow_zero or any(u):
                break
        return cls.planted(p, n, u, rng)

    def origin(self) -> tuple:
        return (0,) * self.n

    def verify(self, w) -> bool:
        """Whether ``w`` is the hidden shift (checked on the tables if ``u`` is unknown)."""
        w = tuple(int(a) % self.p for a in w)
        if self._u is not None:
            return w == self._u
        return all(self.f1(_add(x, w, self.p)) == self.f0(x) for x in self.f0.table)

    def reveal(self) -> tuple:
        if self._u is None:
            raise ValueError("this instance carries no planted shift")
        return self._u

    def to_dict(self, mode: str = "sealed") -> dict:
        if mode not in ("sealed", "verify"):
            raise ValueError("mode must be 'sealed' or 'verify'")
        doc = {"p": self.p, "n": self.n, "modulus": self.modulus,
               "f0": list(self.f0_table), "f1": list(self.f1_table)}
        if mode == "verify" and self._u is not None:
            doc["u"] = list(self._u)
        return doc

    def to_json(self, mode: str = "sealed") -> str:
        return json.dumps(self.to_dict(mode), sort_keys=True)

    @classmethod
    def from_dict(cls, doc: dict) -> HiddenTranslationInstance:
        return cls(doc["p"], doc["n"], doc["f0"], doc["f1"], doc.get("modulus"), doc.get("u"))


# --------------------------------------------------------------------------
# oracles over Z_p^n x Z_2
# --------------------------------------------------------------------------

def product_group(p: int, n: int) -> AbelianGroup:
    """``Z_p^n x Z_2``; elements are ``(x_1, ..., x_n, b)``."""
    return AbelianGroup((p,) * n + (2,), name=f"Z{p}^{n}xZ2")


def combined_oracle(inst: HiddenTranslationInstance) -> OracleFn:
    """``f(x, b) = f_b(x)`` as one oracle (both functions quantumly selectable)."""
    table = {}
    for x in inst.f0.table:
        table[x + (0,)] = inst.f0(x)
        table[x + (1,)] = inst.f1(x)
    return OracleFn(table, inst.modulus, name="f")


class DualOracle:
    """``|x,b>|0>|0> -> |x,b>|f_b(x)>|f_{1-b}(-x)>`` from separate f0 and f1 oracles.

    ``apply`` runs the register program that uses each oracle once;
    ``direct`` is the target map written down directly.
    """

    def __init__(self, f0: OracleFn, f1: OracleFn, p: int, n: int):
        self.f0, self.f1, self.p, self.n = f0, f1, p, n
        self.modulus = f0.modulus
        self.group = product_group(p, n)
        self.calls = {"f0": 0, "f1": 0}

    def layout(self):
        return (Register.of_group(self.group, "xb"), Register.values(self.modulus, "s0"),
                Register.values(self.modulus, "s1"))

    def _negate_x_if(self, state, cond: Callable[[int], bool]):
        p = self.p

        def fn(lab):
            xb = lab[0]
            if cond(xb[-1]):
                xb = _neg(xb[:-1], p) + xb[-1:]
            return (xb,) + lab[1:]

        return apply_permutation(state, fn)

    def _swap_if_b(self, state):
        return apply_permutation(state, lambda lab: (lab[0], lab[2], lab[1]) if lab[0][-1] else lab)

    def apply(self, state: PureState) -> PureState:
        x_only = lambda xb: xb[:-1]  # noqa: E731
        state = self._negate_x_if(state, lambda b: b == 1)           # (-1)^b x
        state = apply_oracle(state, self.f0, 0, 1, select=x_only)     # f0 into s0
        state = self._negate_x_if(state, lambda b: True)              # (-1)^{b+1} x
        state = apply_oracle(state, self.f1, 0, 2, select=x_only)     # f1 into s1
        state = self._negate_x_if(state, lambda b: b == 0)            # times (-1)^{b+1}: back to x
        state = self._swap_if_b(state)
        self.calls["f0"] += 1
        self.calls["f1"] += 1
        return state

    def unapply(self, state: PureState) -> PureState:
        x_only = lambda xb: xb[:-1]  # noqa: E731
        state = self._swap_if_b(state)
        state = self._negate_x_if(state, lambda b: b == 0)
        state = apply_oracle(state, self.f1, 0, 2, inverse=True, select=x_only)
        state = self._negate_x_if(state, lambda b: True)
        state = apply_oracle(state, self.f0, 0, 1, inverse=True, select=x_only)
        state = self._negate_x_if(state, lambda b: b == 1)
        self.calls["f0"] += 1
        self.calls["f1"] += 1
        return state

    def direct_values(self, x, b) -> tuple[int, int]:
        fb, fo = (self.f0, self.f1) if b == 0 else (self.f1, self.f0)
        return fb(tuple(x)), fo(_neg(x, self.p))

    def direct(self, state: PureState) -> PureState:
        """The combined map on states whose value registers are zero."""
        m = self.modulus

        def fn(lab):
            xb, s0, s1 = lab
            if s0 or s1:
                raise ValueError("direct map is defined on zero value registers only")
            v0, v1 = self.direct_values(xb[:-1], xb[-1])
            return (xb, v0 % m, v1 % m)

        return apply_permutation(state, fn)

    def basis_input(self, x, b) -> PureState:
        return PureState(self.layout(), {(tuple(x) + (b,), 0, 0): 1.0})


def dual_oracle(inst: HiddenTranslationInstance) -> DualOracle:
    return DualOracle(inst.f0, inst.f1, inst.p, inst.n)


# --------------------------------------------------------------------------
# Fourier sampling over Z_p^n x Z_2
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class SampleRecord:
    y: tuple
    c: int


def class_probability(p: int, k: int, c: int) -> float:
    """``P(y.u = k, c)`` summed over the class: ``|1 + (-1)^c w^k|^2 / (4p)``."""
    sign = -1.0 if c else 1.0
    return (2.0 + 2.0 * sign * math.cos(2.0 * math.pi * k / p)) / (4.0 * p)


def exact_sample_distribution(p: int, n: int, u) -> dict:
    """``(k, c) -> probability`` for Fourier sampling with shift ``u != 0``."""
    fp.check_prime(p)
    u = tuple(int(a) % p for a in u)
    if len(u) != n:
        raise ValueError(f"u must have length {n}")
    if not any(u):
        raise ValueError("the class table is defined for u != 0")
    return {(k, c): class_probability(p, k, c) for k in range(p) for c in (0, 1)}


def exact_element_distribution(p: int, n: int, u) -> dict:
    """``(y, c) -> |1 + (-1)^c chi_y(u)|^2 / (4 p^n)`` over all elements."""
    u = tuple(int(a) % p for a in u)
    size = p ** n
    out = {}
    for row in fp.all_vectors(p, n):
        y = tuple(int(a) for a in row)
        k = _dot(y, u, p)
        for c in (0, 1):
            pr = class_probability(p, k, c) * p / size
            if pr > 0:
                out[y + (c,)] = pr
    return out


def statevector_support(p: int, n: int) -> int:
    return 2 * p ** (2 * n)


def statevector_distribution(inst: HiddenTranslationInstance, oracle: str = "combined") -> dict:
    """Born distribution of the full simulation, keyed by ``(y_1..y_n, c)``."""
    key = ("sv", oracle)
    if key not in inst._dist:
        if statevector_support(inst.p, inst.n) > max_support():
            raise SizeCapExceeded(f"statevector simulation of Z{inst.p}^{inst.n}xZ2 exceeds the cap")
        g = product_group(inst.p, inst.n)
        if oracle == "combined":
            f = combined_oracle(inst)
            state = tensor(uniform_superposition(g, "xb"), zero_state(Register.values(f.modulus, "s")))
            state = apply_oracle(state, f, "xb", "s")
        elif oracle == "dual":
            d = dual_oracle(inst)
            state = tensor(uniform_superposition(g, "xb"), zero_state(Register.values(d.modulus, "s0")),
                           zero_state(Register.values(d.modulus, "s1")))
            state = d.apply(state)
        else:
            raise ValueError(f"unknown oracle access {oracle!r}")
        state = qft(state, "xb")
        inst._dist[key] = {k[0]: v for k, v in probabilities(state, "xb").items()}
    return inst._dist[key]


def default_mode(p: int, n: int) -> str:
    return "statevector" if statevector_support(p, n) <= max_support() else "shortcut"


def _shortcut_draw(inst: HiddenTranslationInstance, rng, size: int) -> list[SampleRecord]:
    p, n = inst.p, inst.n
    u = inst.reveal()
    if not any(u):
        ys = [tuple(int(a) for a in row) for row in fp.all_vectors(p, n)]
        idx = rng.integers(0, len(ys), size=size)
        return [SampleRecord(ys[i], 0) for i in idx]
    classes = inst._dist.get("classes")
    if classes is None:
        classes = {k: [] for k in range(p)}
        for row in fp.all_vectors(p, n):
            y = tuple(int(a) for a in row)
            classes[_dot(y, u, p)].append(y)
        inst._dist["classes"] = classes
    table = exact_sample_distribution(p, n, u)
    picks = sample_outcomes(table, rng, size)
    out = []
    for k, c in picks:
        members = classes[k]
        out.append(SampleRecord(members[int(rng.integers(len(members)))], c))
    return out


def ht_fourier_sample(inst: HiddenTranslationInstance, rng: np.random.Generator,
                      mode: str = "statevector", size: int | None = None, oracle: str = "combined"):
    """One sample (or ``size`` samples) of Fourier sampling over ``Z_p^n x Z_2``.

    ``statevector`` simulates the circuit exactly; ``shortcut`` draws the
    class ``k = y.u`` from the closed-form table and then ``y`` uniformly
    within the class (it reads the planted shift).
    """
    want = 1 if size is None else size
    if mode == "statevector":
        dist = statevector_distribution(inst, oracle)
        recs = [SampleRecord(o[:-1], o[-1]) for o in sample_outcomes(dist, rng, want)]
    elif mode == "shortcut":
        recs = _shortcut_draw(inst, rng, want)
    else:
        raise ValueError(f"unknown sampling mode {mode!r}")
    return recs[0] if size is None else recs


# --------------------------------------------------------------------------
# Translation Finding
# --------------------------------------------------------------------------

@dataclass
class TFOutcome:
    """``Found(u)`` or ``Abort``; ``reason`` records which step decided."""

    u: tuple | None
    reason: str
    samples: int = 0
    kept: int = 0
    rank: int = 0

    @property
    def found(self) -> bool:
        return self.u is not None

    def __repr__(self):
        return f"Found({self.u})" if self.found else f"Abort({self.reason})"


def recover_direction(U, p: int, n: int):
    """Steps 7-8: ``(j, v)`` from a solution vector ``U``, or ``None`` without a pivot."""
    index = fp.monomial_index(n, p - 1)
    for j in range(n):
        e = [0] * n
        e[j] = p - 1
        if U[index[tuple(e)]] % p == 1:
            v = [0] * n
            v[j] = 1
            for k in range(n):
                if k == j:
                    continue
                e = [0] * n
                e[k] += 1
                e[j] += p - 2
                v[k] = int(U[index[tuple(e)]]) % p
            return j, tuple(v)
    return None


def translation_finding_core(p: int, n: int, draw: Callable[[int], Sequence],
                             equal_origin: Callable[[], bool], equal_at: Callable[[tuple], bool],
                             multiplier: int = 1) -> TFOutcome:
    """Translation Finding against abstract oracles.

    ``draw(N)`` returns ``N`` Fourier samples ``(y, c)``; ``equal_origin``
    decides ``f0(0) = f1(0)`` and ``equal_at(w)`` decides ``f0(0) = f1(w)``.
    """
    if equal_origin():
        return TFOutcome((0,) * n, "origin")
    total = sample_count(p, n) * multiplier
    samples = draw(total)
    ys = sorted({tuple(s[0]) for s in samples if s[1] == 1})
    kept = sum(1 for s in samples if s[1] == 1)
    dim = fp.sym_dimension(n, p - 1)
    rows = fp.sym_power_matrix(ys, p, p - 1) if ys else np.zeros((0, dim), dtype=np.int64)
    sol = fp.solve_matrix(rows, np.ones(len(ys), dtype=np.int64), p)
    if sol.status is fp.SolutionStatus.MULTIPLE:
        return TFOutcome(None, "multiple", total, kept, sol.rank)
    if sol.status is fp.SolutionStatus.INCONSISTENT:
        return TFOutcome(None, "inconsistent", total, kept, sol.rank)
    rec = recover_direction(sol.vector, p, n)
    if rec is None:
        return TFOutcome(None, "no-pivot", total, kept, sol.rank)
    _, v = rec
    for a in range(1, p):
        w = tuple((a * x) % p for x in v)
        if equal_at(w):
            return TFOutcome(w, "found", total, kept, sol.rank)
    return TFOutcome(None, "no-scalar", total, kept, sol.rank)


def translation_finding(inst: HiddenTranslationInstance, rng: np.random.Generator,
                        mode: str | None = None, multiplier: int = 1,
                        oracle: str = "combined") -> TFOutcome:
    """Translation Finding on a classical instance; ``Found(w)`` implies ``w = u``."""
    mode = mode or default_mode(inst.p, inst.n)
    zero = inst.origin()
    f00 = inst.f0(zero)

    def draw(k):
        return [(r.y, r.c) for r in ht_fourier_sample(inst, rng, mode, size=k, oracle=oracle)]

    return translation_finding_core(inst.p, inst.n, draw, lambda: f00 == inst.f1(zero),
                                    lambda w: f00 == inst.f1(w), multiplier)


# --------------------------------------------------------------------------
# quantum functions |x . phi>
# --------------------------------------------------------------------------

def _fs_cache(action) -> dict:
    top = action.top
    cache = getattr(top, "_fs_cache", None)
    if cache is None:
        cache = top._fs_cache = {}
        top._fs_cache_hits = 0
    if len(cache) > 20_000:
        cache.clear()
    return cache


def quantum_function_distribution(action, phi: PureState) -> dict:
    """Fourier sampling distribution of ``f(x) = |x . phi>`` over ``action.group``."""
    cache = _fs_cache(action)
    key = ("stab", action.name, content_key(phi))
    dist = cache.get(key)
    if dist is None:
        group = action.group
        elems = group.elements()
        a = 1.0 / math.sqrt(len(elems))
        amps = {}
        for x in elems:
            moved = action.act_state(x, phi, count=False)
            for lab, b in moved.amps.items():
                amps[(x,) + lab] = a * b
        state = PureState((Register.of_group(group, "x"),) + phi.layout, amps)
        state = qft(state, "x")
        dist = {k[0]: v for k, v in probabilities(state, "x").items()}
        cache[key] = dist
    return dist


def translation_pair_distribution(action, phi0: PureState, phi1: PureState) -> dict:
    """Distribution of ``(y, c)`` for the two-register access ``|x.phi_b>|(-x).phi_{1-b}>``."""
    cache = _fs_cache(action)
    key = ("pair", action.name, content_key(phi0), content_key(phi1))
    dist = cache.get(key)
    if dist is None:
        group = action.group
        p, n = group.factors[0], group.rank
        g2 = product_group(p, n)
        a = 1.0 / math.sqrt(g2.order)
        phis = (phi0, phi1)
        amps = {}
        for x in group.elements():
            mx = _neg(x, p)
            for b in (0, 1):
                first = action.act_state(x, phis[b], count=False)
                second = action.act_state(mx, phis[1 - b], count=False)
                for l1, a1 in first.amps.items():
                    for l2, a2 in second.amps.items():
                        amps[(x + (b,),) + l1 + l2] = a * a1 * a2
        layout = (Register.of_group(g2, "xb"),) + phi0.layout + phi1.layout
        state = qft(PureState(layout, amps), "xb")
        dist = {k[0]: v for k, v in probabilities(state, "xb").items()}
        cache[key] = dist
    return dist


def _draw_grouped(rng, copies: list, keyfn, distfn) -> list:
    """Sample once per copy (or pair of copies), batching identical inputs."""
    groups: dict = {}
    for c in copies:
        k = keyfn(c)
        if k in groups:
            groups[k][1] += 1
        else:
            groups[k] = [c, 1]
    out = []
    for rep, count in groups.values():
        out.extend(sample_outcomes(distfn(rep), rng, count))
    order = rng.permutation(len(out))
    return [out[i] for i in order]


# --------------------------------------------------------------------------
# abelian Stabilizer
# --------------------------------------------------------------------------

def stabilizer_sample_count(order: int, eps: float, c0: float = 1.0) -> int:
    logg = max(1, math.ceil(math.log2(max(order, 2))))
    return max(1, math.ceil(c0 * logg * swap_test_rounds(eps)))


def stabilizer_abelian(action, copies, rng: np.random.Generator, eps: float = 1e-3,
                       c0: float = 1.0) -> list:
    """Generators of the stabilizer of ``|phi>`` under an abelian action.

    Each Fourier sample swaps in one copy and applies the controlled action
    (one query); samples are uniform on the orthogonal of the stabilizer.
    """
    group = action.group
    if not isinstance(group, AbelianGroup):
        raise TypeError("stabilizer_abelian needs an abelian group (or an abelian view)")
    supply = as_supply(copies)
    t = stabilizer_sample_count(group.order, eps, c0)
    batch = supply.take(t)
    action.top.queries += t
    samples = _draw_grouped(rng, batch, content_key, lambda s: quantum_function_distribution(action, s))
    return orthogonal_subgroup(set(samples), group)


# --------------------------------------------------------------------------
# Orbit Coset in Z_p^n
# --------------------------------------------------------------------------

def _span_rref(gens, p: int, n: int) -> np.ndarray:
    if not gens:
        return np.zeros((0, n), dtype=np.int64)
    return fp.row_space_basis(np.array(gens, dtype=np.int64).reshape(len(gens), n), p)


def _complement_basis(h_rref: np.ndarray, n: int) -> np.ndarray:
    pivots = set()
    for row in h_rref:
        nz = np.nonzero(row)[0]
        if len(nz):
            pivots.add(int(nz[0]))
    free = [k for k in range(n) if k not in pivots]
    c = np.zeros((len(free), n), dtype=np.int64)
    for i, k in enumerate(free):
        c[i, k] = 1
    return c


class _QuotientView:
    """``Z_p^n / H`` acting through lifts ``z -> z C`` (C spans a complement of H)."""

    def __init__(self, action, comp: np.ndarray, p: int):
        self.base, self.comp, self.p = action, comp, p
        self.group = AbelianGroup.elementary(p, comp.shape[0])
        rows = tuple(tuple(int(a) for a in r) for r in comp)
        self.name = f"{action.name}/q{rows}"

    @property
    def top(self):
        return self.base.top

    def lift(self, z) -> tuple:
        v = (np.asarray(z, dtype=np.int64) @ self.comp) % self.p if len(z) else np.zeros(self.comp.shape[1], dtype=np.int64)
        return tuple(int(a) for a in v)

    def act_state(self, z, state, count: bool = True):
        return self.base.act_state(self.lift(z), state, count=count)


@dataclass
class ZpnBudget:
    """Error split for one Orbit Coset call in ``Z_p^n``."""

    stabilizer_eps: float
    equality_eps: float
    multiplier: int

    @classmethod
    def split(cls, eps: float, p: int) -> ZpnBudget:
        third = eps / 3.0
        return cls(third / 2.0, third / p, swap_test_rounds(third))


def orbit_coset_zpn(action, copies0, copies1, rng: np.random.Generator, eps: float = 1e-3,
                    c0: float = 1.0, budget: ZpnBudget | None = None) -> OrbitCosetResult:
    """Orbit Coset for an action of ``Z_p^n`` given copies of ``|phi0>`` and ``|phi1>``.

    Returns ``u`` with ``u . phi1 = phi0`` plus stabilizer generators, or Reject.
    """
    group = action.group
    p = group.elementary_prime
    if p is None:
        raise TypeError("orbit_coset_zpn needs an elementary abelian group")
    n = group.rank
    s0, s1 = as_supply(copies0, "phi0"), as_supply(copies1, "phi1")
    budget = budget or ZpnBudget.split(eps, p)
    q0 = action.top.queries

    h0 = stabilizer_abelian(action, s0, rng, budget.stabilizer_eps, c0)
    h1 = stabilizer_abelian(action, s1, rng, budget.stabilizer_eps, c0)
    r0, r1 = _span_rref(h0, p, n), _span_rref(h1, p, n)
    if r0.shape != r1.shape or not np.array_equal(r0, r1):
        return OrbitCosetResult.reject("stabilizers differ", queries=action.top.queries - q0)
    gens = [tuple(int(a) for a in row) for row in r1]
    comp = _complement_basis(r1, n)
    view = _QuotientView(action, comp, p)
    nq = comp.shape[0]
    k_eq = swap_test_rounds(budget.equality_eps)

    def eq(g):
        return equality_test(lambda: s0.take(),
                             lambda: view.act_state(g, s1.take()), budget.equality_eps, rng, rounds=k_eq)

    if nq == 0:
        if eq(()):
            return OrbitCosetResult(group.identity(), gens, {"reason": "origin", "queries": action.top.queries - q0})
        return OrbitCosetResult.reject("unequal", queries=action.top.queries - q0)

    def draw(count):
        pairs = list(zip(s0.take(count), s1.take(count)))
        action.top.queries += 2 * count
        return _draw_grouped(
            rng, pairs, lambda pr: (content_key(pr[0]), content_key(pr[1])),
            lambda pr: translation_pair_distribution(view, pr[0], pr[1]))

    split = lambda o: (o[:-1], o[-1])  # noqa: E731
    out = translation_finding_core(
        p, nq, lambda k: [split(o) for o in draw(k)],
        lambda: eq((0,) * nq), eq, budget.multiplier)
    info = {"reason": out.reason, "samples": out.samples, "queries": action.top.queries - q0}
    if not out.found:
        return OrbitCosetResult.reject(out.reason, **info)
    return OrbitCosetResult(view.lift(out.u), gens, info)


# --------------------------------------------------------------------------
# Hidden Subgroup in Z_p^n x| Z_2
# --------------------------------------------------------------------------

@dataclass
class HSPResult:
    generators: list | None
    outcome: TFOutcome = field(repr=False, default=None)

    @property
    def aborted(self) -> bool:
        return self.generators is None


def hsp_semidirect(p: int, n: int, f, rng: np.random.Generator, mode: str | None = None) -> HSPResult:
    """Hidden subgroup ``{(0,0), (u,1)}`` of ``Z_p^n x| Z_2`` from ``f(x, b) = f_b(x)``.

    ``f`` maps group elements ``(x, b)`` to integers (a dict or callable).
    The output generator is ``(u, 1)``.
    """
    group = SemidirectZpnZ2(p, n)
    get = f if callable(f) else f.__getitem__
    xs = [tuple(int(a) for a in row) for row in fp.all_vectors(p, n)]
    f0 = [int(get((x, 0))) for x in xs]
    f1 = [int(get((x, 1))) for x in xs]
    inst = HiddenTranslationInstance(p, n, f0, f1)
    # f(x,0) = f(x+u,1) on the coset {(x,0), (x+u,1)}: f1(x+u) = f0(x)
    out = translation_finding(inst, rng, mode or "statevector")
    if not out.found:
        return HSPResult(None, out)
    assert group.contains((out.u, 1))
    return HSPResult([(out.u, 1)], out)


def semidirect_hiding_function(p: int, n: int, u, rng: np.random.Generator) -> dict:
    """Random ``f`` on ``Z_p^n x| Z_2`` hiding ``{(0,0), (u,1)}``."""
    inst = HiddenTranslationInstance.planted(p, n, u, rng)
    out = {}
    for x in inst.f0.table:
        out[(x, 0)] = inst.f0(x)
        out[(x, 1)] = inst.f1(x)
    return out
