"""Exact sparse statevector simulation.

A :class:`PureState` is a map from basis labels to complex amplitudes.  A label
is a tuple with one entry per register of the state's layout:

* group registers hold abelian group elements (residue tuples) and support
  the quantum Fourier transform;
* value registers hold integers modulo ``M``; oracles write into them by
  addition, so every oracle is a permutation of basis states;
* label registers hold opaque hashable labels of mutually orthogonal states
  (the sets acted on by group actions).

States are immutable; every operation returns a new state.
"""
from __future__ import annotations

import itertools
import json
import math
import os
from collections import defaultdict
from dataclasses import dataclass
from typing import Callable, Hashable, Mapping, Sequence

import numpy as np

from .groups import AbelianGroup

PRUNE = 1e-12
NORM_TOL = 1e-9
DEFAULT_MAX_SUPPORT = 2 ** 20


class StateError(ValueError):
    """Invalid state operation (layout mismatch, broken norm, ...)."""


class SizeCapExceeded(StateError):
    """A state outgrew the configured support cap."""


def max_support() -> int:
    return int(os.environ.get("ORBITCOSET_MAX_SUPPORT", DEFAULT_MAX_SUPPORT))


@dataclass(frozen=True)
class Register:
    name: str
    kind: str  # "group" | "value" | "label"
    group: AbelianGroup | None = None
    modulus: int | None = None

    @classmethod
    def of_group(cls, group: AbelianGroup, name: str = "x") -> Register:
        return cls(name, "group", group=group)

    @classmethod
    def values(cls, modulus: int, name: str = "s") -> Register:
        return cls(name, "value", modulus=int(modulus))

    @classmethod
    def labels(cls, name: str = "gamma") -> Register:
        return cls(name, "label")

    def zero(self):
        if self.kind == "group":
            return self.group.identity()
        if self.kind == "value":
            return 0
        raise StateError(f"label register {self.name!r} has no zero state")


_uid = itertools.count()


class PureState:
    """Normalised sparse superposition over tuple-labelled basis states."""

    __slots__ = ("layout", "amps", "uid")

    def __init__(self, layout: Sequence[Register], amps: Mapping[tuple, complex], check: bool = True):
        self.layout = tuple(layout)
        cleaned = {}
        for lab, a in amps.items():
            if abs(a) >= PRUNE:
                cleaned[lab] = complex(a)
        if len(cleaned) > max_support():
            raise SizeCapExceeded(f"support {len(cleaned)} exceeds cap {max_support()}")
        self.amps = cleaned
        self.uid = next(_uid)
        if check:
            nrm = self.norm_squared()
            if abs(nrm - 1.0) > NORM_TOL:
                raise StateError(f"state norm^2 {nrm!r} is not 1")

    # ---- basics -------------------------------------------------------
    def __repr__(self):
        names = ",".join(r.name for r in self.layout)
        return f"PureState([{names}], support={len(self.amps)})"

    def __len__(self):
        return len(self.amps)

    def norm_squared(self) -> float:
        return math.fsum(abs(a) ** 2 for a in self.amps.values())

    def items(self):
        return self.amps.items()

    @property
    def support(self) -> list:
        return list(self.amps)

    def amplitude(self, label) -> complex:
        return self.amps.get(tuple(label), 0j)

    def reg(self, key) -> int:
        """Index of a register given by index or name."""
        if isinstance(key, int):
            if not 0 <= key < len(self.layout):
                raise StateError(f"register index {key} out of range")
            return key
        for i, r in enumerate(self.layout):
            if r.name == key:
                return i
        raise StateError(f"no register named {key!r}")

    def with_amps(self, amps, check=True) -> PureState:
        return PureState(self.layout, amps, check=check)

    def normalized(self) -> PureState:
        nrm = math.sqrt(self.norm_squared())
        if nrm < PRUNE:
            raise StateError("cannot normalise the zero vector")
        return PureState(self.layout, {k: a / nrm for k, a in self.amps.items()})

    def to_json(self) -> str:
        """Deterministic dump: label -> [re, im], labels sorted by repr."""
        rows = sorted(((repr(k), [a.real, a.imag]) for k, a in self.amps.items()))
        return json.dumps({
            "layout": [{"name": r.name, "kind": r.kind} for r in self.layout],
            "amplitudes": dict(rows),
        }, sort_keys=True)


def _raw(layout, amps) -> PureState:
    """Build without the norm check (intermediate, sub-normalised vectors)."""
    return PureState(layout, amps, check=False)


# --------------------------------------------------------------------------
# construction
# --------------------------------------------------------------------------

def basis_state(layout: Sequence[Register], label) -> PureState:
    return PureState(layout, {tuple(label): 1.0})


def label_state(label: Hashable, name: str = "gamma") -> PureState:
    """A single label-register basis state ``|label>``."""
    return PureState((Register.labels(name),), {(label,): 1.0})


def label_superposition(weights: Mapping[Hashable, complex], name: str = "gamma") -> PureState:
    return PureState((Register.labels(name),), {(k,): a for k, a in weights.items()})


def zero_state(reg: Register) -> PureState:
    return PureState((reg,), {(reg.zero(),): 1.0})


def uniform_superposition(group: AbelianGroup, name: str = "x") -> PureState:
    """``|G|^{-1/2} sum_x |x>`` on one group register."""
    n = group.order
    if n > max_support():
        raise SizeCapExceeded(f"|G| = {n} exceeds cap {max_support()}")
    a = 1.0 / math.sqrt(n)
    return PureState((Register.of_group(group, name),), {(x,): a for x in group.elements()})


def tensor(*states: PureState) -> PureState:
    layout = tuple(r for s in states for r in s.layout)
    amps = {(): 1.0 + 0j}
    for s in states:
        nxt = {}
        for lab, a in amps.items():
            for lab2, b in s.amps.items():
                nxt[lab + lab2] = a * b
        amps = nxt
        if len(amps) > max_support():
            raise SizeCapExceeded(f"tensor product support {len(amps)} exceeds cap")
    return PureState(layout, amps)


# --------------------------------------------------------------------------
# unitaries
# --------------------------------------------------------------------------

def apply_permutation(state: PureState, fn: Callable[[tuple], tuple], layout=None) -> PureState:
    """Relabel basis states by ``fn``; it must be injective on the support."""
    out = {}
    for lab, a in state.amps.items():
        new = tuple(fn(lab))
        if new in out:
            raise StateError("map is not injective on the support; not a unitary")
        out[new] = a
    return PureState(layout or state.layout, out)


def apply_phase(state: PureState, fn: Callable[[tuple], complex]) -> PureState:
    return state.with_amps({lab: a * fn(lab) for lab, a in state.amps.items()})


@dataclass
class OracleFn:
    """A classical function from source labels into ``Z_M``.

    ``table`` maps each source label to a value in ``[0, modulus)``.  When
    ``injective`` is ``True`` the flag is verified at construction.
    """

    table: Mapping
    modulus: int
    injective: bool = False
    name: str = "f"

    def __post_init__(self):
        self.table = dict(self.table)
        for k, v in self.table.items():
            if not 0 <= v < self.modulus:
                raise StateError(f"oracle value {v} for {k!r} outside Z_{self.modulus}")
        if self.injective and len(set(self.table.values())) != len(self.table):
            raise StateError(f"oracle {self.name} is flagged injective but is not")

    def __call__(self, x):
        try:
            return self.table[x]
        except KeyError:
            raise StateError(f"oracle {self.name} undefined at {x!r}") from None

    @classmethod
    def from_function(cls, domain, fn, modulus, injective=False, name="f") -> OracleFn:
        return cls({x: int(fn(x)) for x in domain}, modulus, injective, name)


def apply_oracle(state: PureState, f: OracleFn, src, dst, inverse: bool = False,
                 select: Callable | None = None) -> PureState:
    """``|x>|s> -> |x>|s + f(x) mod M>`` (or ``- f(x)`` for the inverse).

    ``src`` is a register key or a tuple of keys; with several keys the
    oracle is evaluated on the tuple of their contents.  ``select`` maps the
    source contents to the oracle argument (e.g. to drop a control bit).
    """
    multi = isinstance(src, (tuple, list))
    srcs = tuple(state.reg(k) for k in src) if multi else (state.reg(src),)
    d = state.reg(dst)
    reg = state.layout[d]
    if reg.kind != "value":
        raise StateError(f"oracle target {reg.name!r} is not a value register")
    if reg.modulus != f.modulus:
        raise StateError(f"oracle modulus {f.modulus} does not match register Z_{reg.modulus}")
    sign = -1 if inverse else 1
    m = f.modulus

    def fn(lab):
        x = tuple(lab[i] for i in srcs) if multi else lab[srcs[0]]
        if select is not None:
            x = select(x)
        new = list(lab)
        new[d] = (lab[d] + sign * f(x)) % m
        return tuple(new)

    return apply_permutation(state, fn)


def swap_registers(state: PureState, a, b) -> PureState:
    i, j = state.reg(a), state.reg(b)
    layout = list(state.layout)
    layout[i], layout[j] = layout[j], layout[i]

    def fn(lab):
        lab = list(lab)
        lab[i], lab[j] = lab[j], lab[i]
        return tuple(lab)

    return apply_permutation(state, fn, tuple(layout))


def qft(state: PureState, reg, inverse: bool = False) -> PureState:
    """Exact ``QFT_G |x> = |G|^{-1/2} sum_y chi_y(x) |y>`` on a group register."""
    r = state.reg(reg)
    register = state.layout[r]
    if register.kind != "group" or not isinstance(register.group, AbelianGroup):
        raise StateError(f"register {register.name!r} does not carry an abelian group")
    group = register.group
    shape = group.factors
    if not shape:
        return state
    rests = defaultdict(list)
    for lab, a in state.amps.items():
        rests[lab[:r] + lab[r + 1:]].append((lab[r], a))
    transform = np.fft.fftn if inverse else np.fft.ifftn
    ys = list(itertools.product(*(range(m) for m in shape)))
    out = {}
    for rest, entries in rests.items():
        arr = np.zeros(shape, dtype=complex)
        for x, a in entries:
            arr[x] += a
        res = transform(arr, norm="ortho").ravel()
        for y, v in zip(ys, res):
            if abs(v) >= PRUNE:
                out[rest[:r] + (y,) + rest[r:]] = complex(v)
        if len(out) > max_support():
            raise SizeCapExceeded(f"QFT output support exceeds cap {max_support()}")
    return PureState(state.layout, out)


# --------------------------------------------------------------------------
# measurement and comparison
# --------------------------------------------------------------------------

def probabilities(state: PureState, regs) -> dict:
    """Marginal Born distribution of the given registers."""
    idx = tuple(state.reg(k) for k in (regs if isinstance(regs, (tuple, list)) else (regs,)))
    out = defaultdict(float)
    for lab, a in state.amps.items():
        out[tuple(lab[i] for i in idx)] += abs(a) ** 2
    return dict(out)


def measure(state: PureState, regs, rng: np.random.Generator):
    """Measure ``regs``; returns ``(outcome, collapsed_state)``."""
    idx = tuple(state.reg(k) for k in (regs if isinstance(regs, (tuple, list)) else (regs,)))
    probs = probabilities(state, idx)
    outcomes = list(probs)
    weights = np.array([probs[o] for o in outcomes])
    pick = outcomes[int(rng.choice(len(outcomes), p=weights / weights.sum()))]
    kept = {lab: a for lab, a in state.amps.items() if tuple(lab[i] for i in idx) == pick}
    collapsed = _raw(state.layout, kept).normalized()
    return pick, collapsed


def sample_outcomes(distribution: Mapping, rng: np.random.Generator, size: int) -> list:
    """``size`` independent draws from an outcome -> probability map."""
    outcomes = list(distribution)
    weights = np.array([distribution[o] for o in outcomes], dtype=float)
    picks = rng.choice(len(outcomes), size=size, p=weights / weights.sum())
    return [outcomes[i] for i in picks]


def inner(s1: PureState, s2: PureState) -> complex:
    """``<s1|s2>``."""
    if len(s1.layout) != len(s2.layout):
        raise StateError("layout mismatch")
    small, big = (s1, s2) if len(s1.amps) <= len(s2.amps) else (s2, s1)
    acc = 0j
    for lab, a in small.amps.items():
        b = big.amps.get(lab)
        if b is not None:
            acc += (a.conjugate() * b) if small is s1 else (b.conjugate() * a)
    return acc


def fidelity(s1: PureState, s2: PureState) -> float:
    return abs(inner(s1, s2)) ** 2


def swap_test_accept_probability(s1: PureState, s2: PureState) -> float:
    return 0.5 * (1.0 + fidelity(s1, s2))


def swap_test(s1: PureState, s2: PureState, rng: np.random.Generator) -> bool:
    """One swap test; accepts with probability ``(1 + |<s1|s2>|^2) / 2``."""
    if [r.kind for r in s1.layout] != [r.kind for r in s2.layout]:
        raise StateError("swap test needs states with the same layout")
    return bool(rng.random() < swap_test_accept_probability(s1, s2))


def swap_test_rounds(eps: float) -> int:
    """``ceil(log2(1/eps))`` swap tests bound the one-sided error by ``eps``."""
    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0, 1)")
    return max(1, math.ceil(math.log2(1.0 / eps)))


def equality_test(s1, s2, eps: float, rng: np.random.Generator, rounds: int | None = None) -> bool:
    """Repeated swap tests; never wrong on equal inputs, errs with prob <= eps on orthogonal ones.

    ``s1``/``s2`` may be states or zero-argument callables producing a fresh
    copy per round (copies are consumed by each test).
    """
    k = rounds if rounds is not None else swap_test_rounds(eps)
    for _ in range(k):
        a = s1() if callable(s1) else s1
        b = s2() if callable(s2) else s2
        if not swap_test(a, b, rng):
            return False
    return True


# --------------------------------------------------------------------------
# Fourier sampling
# --------------------------------------------------------------------------

def fourier_sampling_state(f: OracleFn, group: AbelianGroup) -> PureState:
    """Steps 1-4: zero state, uniform superposition, query, QFT."""
    state = tensor(uniform_superposition(group, "x"), zero_state(Register.values(f.modulus, "s")))
    state = apply_oracle(state, f, "x", "s")
    return qft(state, "x")


def fourier_sampling_distribution(f: OracleFn, group: AbelianGroup) -> dict:
    return {k[0]: v for k, v in probabilities(fourier_sampling_state(f, group), "x").items()}


def fourier_sampling(f: OracleFn, group: AbelianGroup, rng: np.random.Generator):
    """One run of Fourier sampling; returns the observed group element."""
    outcome, _ = measure(fourier_sampling_state(f, group), "x", rng)
    return outcome[0]


# --------------------------------------------------------------------------
# copies of input states
# --------------------------------------------------------------------------

class CopiesExhausted(StateError):
    """An algorithm asked for more copies of an input state than it was given."""


class CopySupply:
    """Copies of an input state, handed out one at a time and counted.

    Three flavours: a fixed state with an optional ``limit`` (``None`` means
    unlimited, only counted), an explicit list of (possibly distinct)
    copies, or a ``factory`` returning fresh batches of copies on demand.
    """

    def __init__(self, state: PureState | None = None, limit: int | None = None,
                 copies: Sequence[PureState] | None = None,
                 factory: Callable[[], Sequence[PureState]] | None = None, name: str = "phi"):
        if sum(x is not None for x in (state, copies, factory)) != 1:
            raise StateError("give exactly one of state, copies, factory")
        self.state = state
        self.limit = limit
        self._queue = list(copies) if copies is not None else []
        self.factory = factory
        self.name = name
        self.used = 0
        self.batches = 0

    def __repr__(self):
        return f"CopySupply({self.name!r}, used={self.used})"

    @property
    def remaining(self) -> int | None:
        if self.state is not None:
            return None if self.limit is None else self.limit - self.used
        if self.factory is not None:
            return None
        return len(self._queue)

    def take(self, k: int | None = None):
        """One copy, or a list of ``k`` copies."""
        want = 1 if k is None else k
        out = []
        if self.state is not None:
            if self.limit is not None and self.used + want > self.limit:
                raise CopiesExhausted(f"{self.name}: need {self.used + want} copies, have {self.limit}")
            out = [self.state] * want
        else:
            while len(self._queue) < want:
                if self.factory is None:
                    raise CopiesExhausted(f"{self.name}: out of copies after {self.used}")
                batch = list(self.factory())
                if not batch:
                    raise CopiesExhausted(f"{self.name}: factory produced no copies")
                self.batches += 1
                self._queue.extend(batch)
            out, self._queue = self._queue[:want], self._queue[want:]
        self.used += want
        return out[0] if k is None else out


def as_supply(x, name: str = "phi") -> CopySupply:
    if isinstance(x, CopySupply):
        return x
    if isinstance(x, PureState):
        return CopySupply(state=x, name=name)
    return CopySupply(copies=list(x), name=name)


_KEYS: dict[int, tuple] = {}


def content_key(state: PureState) -> tuple:
    """Hashable fingerprint of a state's amplitudes (equal for equal states)."""
    key = _KEYS.get(state.uid)
    if key is None:
        key = tuple(sorted((lab, round(a.real, 10), round(a.imag, 10)) for lab, a in state.amps.items()))
        if len(_KEYS) > 200_000:
            _KEYS.clear()
        _KEYS[state.uid] = key
    return key
