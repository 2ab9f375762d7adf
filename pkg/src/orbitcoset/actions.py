"""Quantum group actions on orthonormal labelled sets.

An action maps ``(g, label) -> label``; states are :class:`PureState` values
over one label register, and acting on a state relabels every basis state
(one oracle query, counted).  The translation action on function
superpositions, coset actions and a registry of small built-in actions live
here too.
"""
from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Callable, Hashable

import numpy as np

from .groups import (AbelianGroup, FiniteGroup, GroupError, PolycyclicGroup, SemidirectZpnZ2,
                     SchemaError, builtin_group, elementary_polycyclic, group_from_dict,
                     semidirect_presentation)
from .state import PureState, Register, apply_permutation, label_state, StateError


class ActionError(ValueError):
    """Malformed action data (non-permutation tables, broken homomorphism)."""


class QuantumAction:
    """A group acting on labels of mutually orthogonal states.

    ``act_fn(g, label)`` must be a left action.  ``queries`` counts how many
    times the action oracle was applied to a state.
    """

    def __init__(self, group: FiniteGroup, act_fn: Callable[[tuple, Hashable], Hashable],
                 name: str = "action", labels=None):
        self.group = group
        self._act = act_fn
        self.name = name
        self.labels = list(labels) if labels is not None else None
        self.queries = 0
        self._cache: dict = {}

    def __repr__(self):
        return f"QuantumAction({self.name!r}, group={self.group!r})"

    @property
    def top(self) -> QuantumAction:
        return self

    def lift(self, g):
        return g

    def act_label(self, g, label):
        key = (g, label)
        out = self._cache.get(key)
        if out is None:
            out = self._act(g, label)
            if len(self._cache) > 500_000:
                self._cache.clear()
            self._cache[key] = out
        return out

    def act_state(self, g, state: PureState, count: bool = True, reg: int = 0) -> PureState:
        """``|phi> -> |g . phi>`` on the label register ``reg``."""
        if count:
            self.queries += 1
        g = self.lift(g)
        top = self.top

        def fn(lab):
            return lab[:reg] + (top.act_label(g, lab[reg]),) + lab[reg + 1:]

        return apply_permutation(state, fn)

    # ---- brute-force helpers (verification only, no query counting) ---
    def orbit(self, label) -> dict:
        """``label' -> g`` with ``g . label = label'`` for the whole orbit (BFS)."""
        gens = group_generators(self.group)
        seen = {label: self.group.identity()}
        todo = deque([label])
        while todo:
            cur = todo.popleft()
            g = seen[cur]
            for z in gens:
                nxt = self.act_label(self.lift(z), cur)
                if nxt not in seen:
                    seen[nxt] = self.group.multiply(z, g)
                    todo.append(nxt)
        return seen

    def stabilizer_elements(self, label) -> list:
        return [g for g in self.group.elements() if self.act_label(self.lift(g), label) == label]

    def check_homomorphism(self, labels=None, gens=None) -> list:
        """Failures of ``act(e) = id`` and ``act(xy) = act(x) act(y)`` on generator pairs."""
        labels = self.labels if labels is None else labels
        if labels is None:
            raise ActionError("no label set to check against")
        gens = group_generators(self.group) if gens is None else gens
        e = self.group.identity()
        bad = [("identity", lab) for lab in labels if self.act_label(self.lift(e), lab) != lab]
        for x in gens:
            for y in gens:
                xy = self.group.multiply(x, y)
                for lab in labels:
                    if self.act_label(self.lift(xy), lab) != self.act_label(
                            self.lift(x), self.act_label(self.lift(y), lab)):
                        bad.append(((x, y), lab))
        return bad

    # ---- table form ---------------------------------------------------
    @classmethod
    def from_generator_tables(cls, group, labels, tables, name="action") -> QuantumAction:
        """Action given by a permutation of ``labels`` for each series generator.

        ``tables[i][k]`` is the index of ``z_i . labels[k]``.
        """
        labels = list(labels)
        gens = group_generators(group)
        if len(tables) != len(gens):
            raise ActionError(f"expected {len(gens)} generator tables, got {len(tables)}")
        index = {lab: k for k, lab in enumerate(labels)}
        if len(index) != len(labels):
            raise ActionError("labels must be distinct")
        perms = []
        for i, t in enumerate(tables):
            t = [int(v) for v in t]
            if sorted(t) != list(range(len(labels))):
                raise ActionError(f"table {i} is not a permutation of the labels")
            perms.append(t)
        orders = generator_exponent_ranges(group)

        def act(g, lab):
            k = index[lab]
            exps = exponents_of(group, g)
            for i in reversed(range(len(perms))):
                for _ in range(exps[i]):
                    k = perms[i][k]
            return labels[k]

        if len(orders) != len(perms):
            raise ActionError("generator count mismatch")
        action = cls(group, act, name, labels)
        action.tables = perms
        return action


def group_generators(group) -> list:
    if isinstance(group, PolycyclicGroup):
        return group.generators()
    if isinstance(group, AbelianGroup):
        out = []
        for i in range(group.rank):
            e = [0] * group.rank
            e[i] = 1
            out.append(tuple(e))
        return out
    if isinstance(group, SemidirectZpnZ2):
        out = [((0,) * group.n, 1)]
        for i in range(group.n):
            e = [0] * group.n
            e[i] = 1
            out.append((tuple(e), 0))
        return out
    raise GroupError(f"no generator list for {group!r}")


def generator_exponent_ranges(group) -> list[int]:
    if isinstance(group, PolycyclicGroup):
        return list(group.relative_orders)
    if isinstance(group, AbelianGroup):
        return list(group.factors)
    raise GroupError(f"{group!r} has no normal-form exponents")


def exponents_of(group, g) -> list[int]:
    """Exponents of ``g`` along the generator list (normal-form word)."""
    if isinstance(group, PolycyclicGroup):
        return list(g[group.start:group.end])
    return list(g)


class GroupView:
    """A group acting through a map ``lift`` into the group of ``action``.

    Used for sections of a series (quotients act by coset representatives
    on states invariant under the kernel) and for coordinate views of
    elementary abelian sections.
    """

    def __init__(self, group, action, lift: Callable = lambda g: g, name: str | None = None):
        self.group = group
        self._base = action
        self._lift = lift
        self.name = name or f"{action.name}|{group!r}"

    def __repr__(self):
        return f"GroupView({self.name!r})"

    @property
    def top(self) -> QuantumAction:
        return self._base.top

    def lift(self, g):
        return self._base.lift(self._lift(g))

    def act_label(self, g, label):
        return self.top.act_label(self.lift(g), label)

    def act_state(self, g, state: PureState, count: bool = True, reg: int = 0) -> PureState:
        if count:
            self.top.queries += 1
        return self.top.act_state(self.lift(g), state, count=False, reg=reg)

    @property
    def queries(self) -> int:
        return self.top.queries


def section_view(action, section: PolycyclicGroup) -> GroupView:
    """The action restricted to a series section (elements share the encoding)."""
    return GroupView(section, action, name=f"{action.name}|[{section.start},{section.end})")


def elementary_view(action, section: PolycyclicGroup) -> GroupView:
    """Coordinates ``Z_p^k`` for a section that is one elementary-abelian block."""
    zp, _, from_coords = section.elementary_view()
    return GroupView(zp, action, from_coords, name=f"{action.name}|Z{zp.factors[0]}^{zp.rank}")


# --------------------------------------------------------------------------
# power action
# --------------------------------------------------------------------------

class PowerAction:
    """``alpha^t``: acts diagonally on t-tuples of states, one query per copy."""

    def __init__(self, action, t: int):
        if t < 1:
            raise ValueError("t must be >= 1")
        self.action, self.t = action, t
        self.group = action.group

    def act_states(self, g, states):
        if len(states) != self.t:
            raise StateError(f"expected {self.t} states, got {len(states)}")
        return tuple(self.action.act_state(g, s) for s in states)

    def act_label(self, g, labels: tuple) -> tuple:
        return tuple(self.action.act_label(g, lab) for lab in labels)


def power_action(action, t: int):
    return action if t == 1 else PowerAction(action, t)


# --------------------------------------------------------------------------
# translation action on function superpositions
# --------------------------------------------------------------------------

class _ElementIndex:
    def __init__(self, group: FiniteGroup):
        self.group = group
        self.elements = list(group.elements())
        self.index = {g: i for i, g in enumerate(self.elements)}
        self._right: dict = {}

    def right_perm(self, x) -> tuple:
        """``perm[i] = index(g_i x)``."""
        perm = self._right.get(x)
        if perm is None:
            mul, idx = self.group.multiply, self.index
            perm = tuple(idx[mul(g, x)] for g in self.elements)
            self._right[x] = perm
        return perm


_INDEX_CACHE: dict = {}


def element_index(group) -> _ElementIndex:
    key = id(group)
    ent = _INDEX_CACHE.get(key)
    if ent is None or ent.group is not group:
        ent = _ElementIndex(group)
        _INDEX_CACHE[key] = ent
    return ent


def function_label(group, f) -> tuple:
    """Table of ``f`` in the group's element order; the label of ``|f>``."""
    elems = element_index(group).elements
    if callable(f):
        return tuple(f(g) for g in elems)
    return tuple(f[g] for g in elems)


def translation_action(group, name: str | None = None) -> QuantumAction:
    """``(x . f)(g) = f(g x)`` on function tables."""
    ix = element_index(group)

    def act(x, table):
        perm = ix.right_perm(x)
        return tuple(table[j] for j in perm)

    return QuantumAction(group, act, name or f"translation[{getattr(group, 'name', group)}]")


def function_state(group, f, modulus: int) -> PureState:
    """``|f> = |G|^{-1/2} sum_g |g>|f(g)>`` in register form."""
    elems = element_index(group).elements
    a = 1.0 / math.sqrt(len(elems))
    table = function_label(group, f)
    layout = (Register.labels("g"), Register.values(modulus, "s"))
    return PureState(layout, {(g, v): a for g, v in zip(elems, table)})


def translate_function_state(state: PureState, group, x) -> PureState:
    """Right-multiply the first register by ``x^{-1}``: ``|f'> -> |x . f'>``."""
    xinv = group.inverse(x)
    return apply_permutation(state, lambda lab: (group.multiply(lab[0], xinv),) + lab[1:])


def left_coset_action(group, subgroup_elements, name: str | None = None) -> QuantumAction:
    """``G`` acting on left cosets ``gH`` by left multiplication.

    A coset is labelled by its smallest element; the stabilizer of the label
    of ``H`` itself is ``H``.
    """
    h = list(subgroup_elements)
    canon: dict = {}
    for g in group.elements():
        if g in canon:
            continue
        coset = [group.multiply(g, k) for k in h]
        rep = min(coset)
        for c in coset:
            canon[c] = rep
    labels = sorted(set(canon.values()))

    def act(x, rep):
        return canon[group.multiply(x, rep)]

    return QuantumAction(group, act, name or "cosets", labels)


# --------------------------------------------------------------------------
# results and problem instances
# --------------------------------------------------------------------------

@dataclass
class OrbitCosetResult:
    """Reject (``representative is None``) or ``u`` with ``u . phi1 = phi0``.

    ``generators`` generate the stabilizer of ``phi1``; ``info`` carries
    diagnostics (abort reasons, copy and query counts).
    """

    representative: tuple | None
    generators: list = field(default_factory=list)
    info: dict = field(default_factory=dict)

    @classmethod
    def reject(cls, reason: str = "", **info) -> OrbitCosetResult:
        return cls(None, [], {"reason": reason, **info})

    @property
    def rejected(self) -> bool:
        return self.representative is None

    def __repr__(self):
        if self.rejected:
            return f"Reject({self.info.get('reason', '')!r})"
        return f"Coset({self.representative!r}, gens={self.generators!r})"


@dataclass
class OrbitCosetInstance:
    group: FiniteGroup
    action: QuantumAction
    phi0: PureState
    phi1: PureState
    t: int | None = None
    planted: tuple | None = field(default=None, repr=False)


@dataclass
class StabilizerInstance:
    group: FiniteGroup
    action: QuantumAction
    phi: PureState
    t: int | None = None


def reduce_ht_to_oc(group, f0, f1, t: int | None = None) -> OrbitCosetInstance:
    """Hidden translation ``f1(g u) = f0(g)`` as orbit coset of ``|f0>, |f1>``."""
    action = translation_action(group)
    return OrbitCosetInstance(group, action, label_state(function_label(group, f0)),
                              label_state(function_label(group, f1)), t)


def reduce_hsp_to_stab(group, f, t: int | None = None) -> StabilizerInstance:
    """The stabilizer of ``|f>`` under translation is the subgroup hidden by ``f``."""
    return StabilizerInstance(group, translation_action(group), label_state(function_label(group, f)), t)


def planted_translation_instance(group, u, seed: int, disjoint: bool = False) -> OrbitCosetInstance:
    """Random injective ``f0`` and ``f1(g) = f0(g u^{-1})`` so the orbit coset is ``{u}``.

    With ``disjoint`` the values of ``f1`` are shifted out of the range of
    ``f0``, which makes the two orbits disjoint (and the states orthogonal).
    """
    rng = np.random.default_rng(seed)
    elems = element_index(group).elements
    m = len(elems)
    vals = rng.permutation(m)
    f0 = {g: int(v) for g, v in zip(elems, vals)}
    uinv = group.inverse(u)
    shift = m if disjoint else 0
    f1 = {g: f0[group.multiply(g, uinv)] + shift for g in elems}
    inst = reduce_ht_to_oc(group, f0, f1)
    inst.planted = None if disjoint else tuple(u)
    return inst


# --------------------------------------------------------------------------
# JSON and built-ins
# --------------------------------------------------------------------------

def _hashable(x):
    if isinstance(x, list):
        return tuple(_hashable(v) for v in x)
    return x


def _jsonable(x):
    if isinstance(x, tuple):
        return [_jsonable(v) for v in x]
    return x


def action_to_dict(action: QuantumAction, group_ref, phi=None) -> dict:
    labels = action.labels
    if labels is None:
        raise ActionError("action has no finite label list")
    index = {lab: k for k, lab in enumerate(labels)}
    tables = [[index[action.act_label(action.lift(z), lab)] for lab in labels]
              for z in group_generators(action.group)]
    doc = {"name": action.name, "group": group_ref, "labels": [_jsonable(x) for x in labels],
           "generators": tables}
    if phi is not None:
        doc["phi"] = index[phi]
    return doc


def action_from_dict(doc: dict):
    """Returns ``(action, phi_label_or_None)``; errors carry a JSON location."""
    if not isinstance(doc, dict):
        raise SchemaError("$", "action document must be an object")
    for key in ("group", "labels", "generators"):
        if key not in doc:
            raise SchemaError(f"$.{key}", "missing field")
    gref = doc["group"]
    try:
        group = builtin_group(gref) if isinstance(gref, str) else group_from_dict(gref)
    except SchemaError as exc:
        raise SchemaError(f"$.group{'' if exc.location == '$' else exc.location[1:]}", str(exc)) from None
    if not isinstance(doc["labels"], list) or not doc["labels"]:
        raise SchemaError("$.labels", "expected a non-empty list")
    labels = [_hashable(x) for x in doc["labels"]]
    tables = doc["generators"]
    if not isinstance(tables, list):
        raise SchemaError("$.generators", "expected a list of permutation tables")
    for i, t in enumerate(tables):
        if not isinstance(t, list) or sorted(t) != list(range(len(labels))):
            raise SchemaError(f"$.generators[{i}]", "not a permutation of the label indices")
    try:
        action = QuantumAction.from_generator_tables(group, labels, tables, doc.get("name", "action"))
    except ActionError as exc:
        raise SchemaError("$.generators", str(exc)) from None
    bad = action.check_homomorphism()
    if bad:
        raise SchemaError("$.generators", f"tables do not define a group action ({len(bad)} failures)")
    phi = doc.get("phi")
    if phi is not None:
        if not isinstance(phi, int) or not 0 <= phi < len(labels):
            raise SchemaError("$.phi", "expected a label index")
        phi = labels[phi]
    return action, phi


def load_action(source):
    if isinstance(source, dict):
        return action_from_dict(source)
    path = Path(source)
    if path.suffix == ".json" and path.exists():
        try:
            doc = json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise SchemaError(f"{path}:{exc.lineno}:{exc.colno}", exc.msg) from None
        return action_from_dict(doc)
    return builtin_action(str(source))


def builtin_action_names() -> list[str]:
    files = resources.files("orbitcoset") / "data" / "actions"
    return sorted(f.name[:-5] for f in files.iterdir() if f.name.endswith(".json"))


def builtin_action(name: str):
    res = resources.files("orbitcoset") / "data" / "actions" / f"{name}.json"
    if not res.is_file():
        raise SchemaError("$", f"unknown built-in action {name!r}; choose from {builtin_action_names()}")
    return action_from_dict(json.loads(res.read_text()))


def _builtin_definitions():
    """Generators of the shipped action fixtures: name -> (group_ref, group, action, phi)."""
    out = {}

    def coset(name, gref, group, sub):
        act = left_coset_action(group, sub, name)
        out[name] = (gref, group, act, min(sub))

    z2, z3 = elementary_polycyclic(2, 1), elementary_polycyclic(3, 1)
    z2_doc = {"kind": "polycyclic", "name": "Z2", "relative_orders": [2],
              "blocks": [{"start": 0, "stop": 1, "kind": "elementary", "p": 2}], "commutator_index": 1}
    z3_doc = {"kind": "polycyclic", "name": "Z3", "relative_orders": [3],
              "blocks": [{"start": 0, "stop": 1, "kind": "elementary", "p": 3}], "commutator_index": 1}
    z3sq_doc = {"kind": "polycyclic", "name": "Z3^2", "relative_orders": [3, 3],
                "blocks": [{"start": 0, "stop": 2, "kind": "elementary", "p": 3}], "commutator_index": 2}
    z3sq = group_from_dict(z3sq_doc)
    coset("z2-swap", z2_doc, z2, [(0,)])
    coset("z3-free", z3_doc, z3, [(0,)])
    coset("z3sq-regular", z3sq_doc, z3sq, [(0, 0)])
    coset("z3sq-cosets", z3sq_doc, z3sq, [(0, 0), (1, 1), (2, 2)])
    coset("z3sq-axis", z3sq_doc, z3sq, [(0, 0), (0, 1), (0, 2)])
    z3c = builtin_group("z3cube")
    coset("z3cube-plane", "z3cube", z3c, sorted({(a, b, (a + b) % 3) for a in range(3) for b in range(3)}))
    s3 = builtin_group("s3")
    coset("s3-points", "s3", s3, [s3.identity(), s3.generator(0)])
    coset("s3-regular", "s3", s3, [s3.identity()])
    sd = builtin_group("z3sq_semidirect_z2")
    coset("semidirect18-regular", "z3sq_semidirect_z2", sd, [sd.identity()])
    refl = sd.multiply(sd.generator(0), sd.multiply(sd.generator(1), sd.generator(2)))
    coset("semidirect18-reflection", "z3sq_semidirect_z2", sd, [sd.identity(), refl])
    coset("semidirect18-line", "z3sq_semidirect_z2", sd, [sd.identity(), sd.generator(1), sd.power(sd.generator(1), 2)])
    he = builtin_group("heisenberg3")
    coset("heisenberg-regular", "heisenberg3", he, [he.identity()])
    coset("heisenberg-center", "heisenberg3", he, [he.identity(), he.generator(2), he.power(he.generator(2), 2)])
    coset("heisenberg-noncentral", "heisenberg3", he, [he.identity(), he.generator(0), he.power(he.generator(0), 2)])
    z4 = builtin_group("z4xz2")
    coset("z4xz2-cosets", "z4xz2", z4, [z4.identity(), z4.generator(2)])
    # translation action on the orbit of one injective function table
    rng = np.random.default_rng(18)
    elems = element_index(sd).elements
    f = {g: int(v) for g, v in zip(elems, rng.permutation(len(elems)))}
    tr = translation_action(sd, "semidirect18-translation")
    phi = function_label(sd, f)
    tr.labels = sorted(tr.orbit(phi))
    out["semidirect18-translation"] = ("z3sq_semidirect_z2", sd, tr, phi)
    return out


def write_builtin_fixtures(directory) -> list[Path]:
    """Regenerate the shipped action JSON files."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    for name, (gref, _, act, phi) in _builtin_definitions().items():
        path = directory / f"{name}.json"
        path.write_text(json.dumps(action_to_dict(act, gref, phi), separators=(",", ":")) + "\n")
        written.append(path)
    return written
