"""Orbit superposition and the recursive Orbit Coset / Stabilizer solvers.

Groups are polycyclic sections with smooth-series block annotations.  A
solver works on a section ``S`` of the series and an action of the top group;
quotient sections act through coset representatives on states that are
invariant under the kernel (the orbit superpositions built here).

Two modes:

* ``faithful``: sub-solvers only see copies of their input states; equality
  is decided by swap tests and error accumulates as in the reductions;
* ``transparent``: base solvers and the coset lookups inside orbit
  superposition are exact enumerations, isolating the reduction logic.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .actions import (GroupView, OrbitCosetResult, QuantumAction, elementary_view,
                      section_view)
from .groups import AbelianGroup, GroupError, PolycyclicGroup
from .state import (CopySupply, PureState, Register, as_supply, equality_test, fidelity, inner,
                    label_state, measure, qft, swap_test_rounds)
from .translation import ZpnBudget, orbit_coset_zpn, stabilizer_abelian

FIDELITY_EQUAL = 1.0 - 1e-9


@dataclass
class SolverConfig:
    mode: str = "faithful"          # "faithful" | "transparent"
    eps: float = 1e-3               # total error budget
    c0: float = 1.0                 # stabilizer sample constant
    budget_c: float = 1.0           # constant in the per-call error split
    batch: int = 8                  # orbit-superposition copies produced per batch (s)
    small_threshold: int = 64       # largest section searched exhaustively when unannotated

    def __post_init__(self):
        if self.mode not in ("faithful", "transparent"):
            raise ValueError(f"unknown solver mode {self.mode!r}")
        if not 0 < self.eps < 1:
            raise ValueError("eps must lie in (0, 1)")
        if self.batch < 1:
            raise ValueError("batch must be >= 1")


class SolverContext:
    """Configuration, randomness, the per-call error budget and counters."""

    def __init__(self, config: SolverConfig | None = None, rng: np.random.Generator | None = None,
                 group_order: int = 2):
        self.config = config or SolverConfig()
        self.rng = rng if rng is not None else np.random.default_rng()
        self.per_call_eps = per_call_eps(self.config.eps, group_order, self.config.batch,
                                         self.config.budget_c)
        self.counters = {"oc_calls": 0, "stabilizer_calls": 0, "osp_steps": 0, "osp_batches": 0,
                         "inner_rejects": 0, "lift_failures": 0}
        self.fidelity_loss = 0.0
        self.garbage: list = []

    @property
    def transparent(self) -> bool:
        return self.config.mode == "transparent"

    def bump(self, key: str, by: int = 1):
        self.counters[key] = self.counters.get(key, 0) + by


def per_call_eps(eps: float, order: int, s: int, c: float = 1.0) -> float:
    """``eps / (c (s log|G| + log^2 |G|))``."""
    lg = max(1, math.ceil(math.log2(max(order, 2))))
    return eps / (c * (s * lg + lg * lg))


# --------------------------------------------------------------------------
# exact helpers (transparent mode and verification)
# --------------------------------------------------------------------------

def _equal(a: PureState, b: PureState) -> bool:
    return fidelity(a, b) >= FIDELITY_EQUAL


def exact_orbit_coset(view, phi0: PureState, phi1: PureState) -> OrbitCosetResult:
    """Enumerate the group: first ``g`` with ``g . phi1 = phi0`` and the stabilizer of ``phi1``."""
    group = view.group
    rep = None
    stab = []
    for g in group.elements():
        moved = view.act_state(g, phi1, count=False)
        if rep is None and _equal(moved, phi0):
            rep = g
        if _equal(moved, phi1):
            stab.append(g)
    if rep is None:
        return OrbitCosetResult.reject("disjoint orbits")
    return OrbitCosetResult(rep, group.generating_subset(stab), {"reason": "exact"})


def exact_stabilizer(view, phi: PureState) -> list:
    return exact_orbit_coset(view, phi, phi).generators


def orbit_state(view, phi_label) -> PureState:
    """Analytic ``|G . phi>`` for a basis label: uniform over the orbit."""
    orbit = set()
    for g in view.group.elements():
        orbit.add(view.act_label(g, phi_label))
    a = 1.0 / math.sqrt(len(orbit))
    return PureState((Register.labels(),), {(lab,): a for lab in orbit})


def _exact_orbit_map(view, phi_label) -> dict:
    out = {}
    for g in view.group.elements():
        out.setdefault(view.act_label(g, phi_label), g)
    return out


# --------------------------------------------------------------------------
# exhaustive search on small sections
# --------------------------------------------------------------------------

def orbit_coset_exhaustive(view, copies0, copies1, rng, eps: float) -> OrbitCosetResult:
    """Try every element with repeated swap tests (small sections)."""
    group = view.group
    s0, s1 = as_supply(copies0, "phi0"), as_supply(copies1, "phi1")
    elems = group.elements()
    each = eps / (2 * len(elems))
    k = swap_test_rounds(each)
    rep = None
    for g in elems:
        if equality_test(lambda: s0.take(), lambda: view.act_state(g, s1.take()), each, rng, rounds=k):
            rep = g
            break
    if rep is None:
        return OrbitCosetResult.reject("no element passed")
    stab = [g for g in elems
            if equality_test(lambda: s1.take(), lambda: view.act_state(g, s1.take()), each, rng, rounds=k)]
    return OrbitCosetResult(rep, group.generating_subset(stab), {"reason": "exhaustive"})


def stabilizer_exhaustive(view, copies, rng, eps: float) -> list:
    supply = as_supply(copies)
    return orbit_coset_exhaustive(view, supply, supply, rng, eps).generators


# --------------------------------------------------------------------------
# base solvers per block
# --------------------------------------------------------------------------

def _single_block(section: PolycyclicGroup):
    blocks = section.section_blocks()
    return blocks[0] if len(blocks) == 1 else None


def _block_kind(section: PolycyclicGroup, ctx: SolverContext) -> str:
    block = _single_block(section)
    if block is None:
        if section.order <= ctx.config.small_threshold:
            return "small"
        raise GroupError(f"{section!r} spans several blocks")
    return block.kind


def _base_orbit_coset(section, action, s0, s1, ctx: SolverContext) -> OrbitCosetResult:
    view = section_view(action, section)
    if ctx.transparent:
        return exact_orbit_coset(view, s0.take(), s1.take())
    kind = _block_kind(section, ctx)
    if kind == "small":
        return orbit_coset_exhaustive(view, s0, s1, ctx.rng, ctx.per_call_eps)
    ev = elementary_view(action, section)
    res = orbit_coset_zpn(ev, s0, s1, ctx.rng, c0=ctx.config.c0,
                          budget=ZpnBudget.split(ctx.per_call_eps, ev.group.elementary_prime))
    if res.rejected:
        return res
    lift = ev._lift
    return OrbitCosetResult(lift(res.representative), [lift(g) for g in res.generators], res.info)


def _base_stabilizer(section, action, supply, ctx: SolverContext) -> list:
    view = section_view(action, section)
    if ctx.transparent:
        return exact_stabilizer(view, supply.take())
    kind = _block_kind(section, ctx)
    if kind == "small":
        return stabilizer_exhaustive(view, supply, ctx.rng, ctx.per_call_eps)
    ev = elementary_view(action, section)
    gens = stabilizer_abelian(ev, supply, ctx.rng, ctx.per_call_eps / 2, ctx.config.c0)
    return [ev._lift(g) for g in gens]


# --------------------------------------------------------------------------
# orbit superposition
# --------------------------------------------------------------------------

@dataclass
class StepReport:
    outputs: list
    all_zero: bool
    js: list
    garbage: tuple | None = None
    fidelity_loss: float = 0.0


def orbit_superposition_step(K: PolycyclicGroup, action, copies: list, oc_solver, rng,
                             ctx: SolverContext | None = None) -> StepReport:
    """``|L.phi>^t -> |K.phi>^(t-1)`` for ``L = K_1`` the next series term.

    ``z`` is the first generator of ``K`` and ``r`` its relative order.
    ``oc_solver(label)`` returns ``g in K`` with ``g . phi = |label>`` (or
    ``None``); it resolves the coset of each basis state when cancelling
    phases.
    """
    t = len(copies)
    if t < 2:
        raise ValueError("a step needs at least two copies")
    r = K.relative_orders[0]
    z = K.generator(0)
    zr = AbelianGroup((r,), name=f"Z{r}")
    zpows = [K.power(z, i) for i in range(r)]
    amp = 1.0 / math.sqrt(r)
    top = action.top
    posts, js = [], []
    for c in copies:
        terms = {}
        for i in range(r):
            moved = top.act_state(zpows[i], c, count=False)
            for lab, a in moved.amps.items():
                terms[((i,),) + lab] = amp * a
        top.queries += 1  # one controlled action per copy
        state = qft(PureState((Register.of_group(zr, "i"),) + c.layout, terms), "i")
        (j,), post = measure(state, "i", rng)
        js.append(j[0])
        posts.append(PureState(c.layout, {lab[1:]: a for lab, a in post.amps.items()}))
    if ctx is not None:
        ctx.bump("osp_steps")
    if all(j == 0 for j in js):
        return StepReport(posts[:-1], True, js)

    first = next(k for k, j in enumerate(js) if j != 0)
    j0 = js[first]
    psi0 = posts[first]
    inv = pow(j0, -1, r)
    outputs, loss = [], 0.0
    for k, (j, post) in enumerate(zip(js, posts)):
        if k == first:
            continue
        if j == 0:
            outputs.append(post)
            continue
        f = (j * inv) % r
        amps = {}
        for lab, a in post.amps.items():
            g = oc_solver(lab[0])
            if g is None:
                continue
            moved = top.act_state(K.power(g, f), psi0, count=False)
            amps[lab] = a * inner(psi0, moved)
        top.queries += 1  # controlled action on |psi_j0> driven by the coset register
        norm2 = sum(abs(v) ** 2 for v in amps.values())
        if norm2 < 1e-24:
            # every branch failed; keep the uncorrected state and book the loss
            outputs.append(post)
            loss += 1.0
            continue
        loss += max(0.0, 1.0 - norm2)
        s = math.sqrt(norm2)
        outputs.append(PureState(post.layout, {k_: v / s for k_, v in amps.items()}))
    return StepReport(outputs, False, js, (j0, psi0), loss)


@dataclass
class OrbitSuperposition:
    phi: PureState
    copies: list
    reports: list = field(default_factory=list)

    @property
    def fidelity_loss(self) -> float:
        return sum(r.fidelity_loss for r in self.reports)

    @property
    def garbage(self) -> list:
        return [r.garbage for r in self.reports if r.garbage is not None]


def _oc_lookup(K, action, phi: PureState, supply, ctx: SolverContext):
    """``label -> g in K`` with ``g . phi = |label>`` (exact or via the K solver)."""
    if ctx.transparent:
        view = section_view(action, K)
        if len(phi.amps) == 1:
            table = _exact_orbit_map(view, next(iter(phi.amps))[0])
            return table.get
        return lambda lab: (lambda res: None if res.rejected else res.representative)(
            exact_orbit_coset(view, label_state(lab), phi))

    def solve(lab):
        res = orbit_coset_smooth(K, action, CopySupply(state=label_state(lab), name="branch"),
                                 supply, ctx)
        if res.rejected:
            ctx.bump("inner_rejects")
            return None
        return res.representative

    return solve


def orbit_superposition(section: PolycyclicGroup, action, copies, ctx: SolverContext,
                        s: int = 1) -> OrbitSuperposition:
    """``|phi>^(s+m+1) -> |phi> (x) |S.phi>^s`` along the series of ``section`` (length m)."""
    supply = as_supply(copies)
    m = section.length
    batch = supply.take(s + m + 1)
    phi, current = batch[0], batch[1:]
    if len(phi.amps) != 1 and not ctx.transparent:
        raise ValueError("orbit superposition expects a basis state |phi>")
    reports = []
    for i in range(section.end, section.start, -1):
        K = PolycyclicGroup(section.presentation, i - 1, section.end, section.blocks,
                            section.commutator_index, section.name)
        rep = orbit_superposition_step(K, action, current, _oc_lookup(K, action, phi, supply, ctx),
                                       ctx.rng, ctx)
        if rep.garbage is not None:
            ctx.garbage.append(rep.garbage)
        ctx.fidelity_loss += rep.fidelity_loss
        reports.append(rep)
        current = rep.outputs
    ctx.bump("osp_batches")
    return OrbitSuperposition(phi, current, reports)


def _orbit_supply(section, action, supply, ctx: SolverContext, name: str) -> CopySupply:
    """Copies of ``|section . phi>`` produced in batches on demand."""
    if section.order == 1:
        return supply

    def factory():
        return orbit_superposition(section, action, supply, ctx, ctx.config.batch).copies

    return CopySupply(factory=factory, name=name)


def _moved_supply(action, g, supply, name: str) -> CopySupply:
    """Copies of ``|g . phi>`` made by acting on fresh copies of ``|phi>``."""
    return CopySupply(factory=lambda: [action.act_state(g, supply.take())], name=name)


# --------------------------------------------------------------------------
# recursion
# --------------------------------------------------------------------------

def _first_block_subgroup(section: PolycyclicGroup) -> PolycyclicGroup:
    blocks = section.section_blocks()
    return section.prefix_subgroup(blocks[0].stop - section.start)


def _quotient(section: PolycyclicGroup, N: PolycyclicGroup) -> PolycyclicGroup:
    return section.quotient(N.start - section.start)


def stabilizer_recursive(section, N, action, copies, ctx: SolverContext, quotient_solver=None) -> list:
    """Stabilizer in ``section`` from Stabilizer in ``section/N`` and Orbit Coset in ``N``."""
    supply = as_supply(copies)
    ctx.bump("stabilizer_calls")
    h0 = stabilizer_smooth(N, action, supply, ctx)
    q = _quotient(section, N)
    nphi = _orbit_supply(N, action, supply, ctx, "N.phi")
    solver = quotient_solver or _base_stabilizer
    vgens = solver(q, action, nphi, ctx)
    lifts = []
    for zq in vgens:
        z = tuple(zq)
        moved = _moved_supply(action, section.inverse(z), supply, "z^-1.phi")
        res = orbit_coset_smooth(N, action, moved, supply, ctx)
        if res.rejected:
            ctx.bump("lift_failures")
            continue
        lifts.append(section.multiply(z, res.representative))
    return list(h0) + lifts


def orbit_coset_recursive(section, N, action, copies0, copies1, ctx: SolverContext) -> OrbitCosetResult:
    """Orbit Coset in ``section`` from Orbit Coset in ``section/N`` and in ``N``."""
    s0, s1 = as_supply(copies0, "phi0"), as_supply(copies1, "phi1")
    gens = stabilizer_recursive(section, N, action, s1, ctx)
    q = _quotient(section, N)
    n0 = _orbit_supply(N, action, s0, ctx, "N.phi0")
    n1 = _orbit_supply(N, action, s1, ctx, "N.phi1")
    top = _base_orbit_coset(q, action, n0, n1, ctx)
    if top.rejected:
        return OrbitCosetResult.reject(f"quotient: {top.info.get('reason', '')}")
    v = tuple(top.representative)
    moved = _moved_supply(action, section.inverse(v), s0, "v^-1.phi0")
    low = orbit_coset_smooth(N, action, moved, s1, ctx)
    if low.rejected:
        return OrbitCosetResult.reject(f"subgroup: {low.info.get('reason', '')}")
    return OrbitCosetResult(section.multiply(v, low.representative), gens, {"reason": "recursive"})


def orbit_coset_smooth(section, action, copies0, copies1, ctx: SolverContext) -> OrbitCosetResult:
    """Orbit Coset by induction over the smooth-series blocks of ``section``."""
    s0, s1 = as_supply(copies0, "phi0"), as_supply(copies1, "phi1")
    ctx.bump("oc_calls")
    if section.order == 1:
        if ctx.transparent:
            ok = _equal(s0.take(), s1.take())
        else:
            e = ctx.per_call_eps
            ok = equality_test(lambda: s0.take(), lambda: s1.take(), e, ctx.rng)
        return (OrbitCosetResult(section.identity(), [], {"reason": "trivial"}) if ok
                else OrbitCosetResult.reject("unequal"))
    if _single_block(section) is not None or (
            section.order <= ctx.config.small_threshold and not section.section_blocks()):
        return _base_orbit_coset(section, action, s0, s1, ctx)
    return orbit_coset_recursive(section, _first_block_subgroup(section), action, s0, s1, ctx)


def stabilizer_smooth(section, action, copies, ctx: SolverContext) -> list:
    supply = as_supply(copies)
    if section.order == 1:
        return []
    if _single_block(section) is not None:
        ctx.bump("stabilizer_calls")
        return _base_stabilizer(section, action, supply, ctx)
    return stabilizer_recursive(section, _first_block_subgroup(section), action, supply, ctx)


# --------------------------------------------------------------------------
# abelian quotients and the commutator-subgroup entry point
# --------------------------------------------------------------------------

def abelian_cover(section: PolycyclicGroup):
    """``(A, lift)``: ``A = prod Z_{o_i}`` mapping onto an abelian section via its generators."""
    gens = section.generators()
    orders = [section.element_order(g) for g in gens]
    cover = AbelianGroup(tuple(orders), name=f"cover({section.name})")

    def lift(e):
        out = section.identity()
        for g, k in zip(gens, e):
            if k:
                out = section.multiply(out, section.power(g, k))
        return out

    return cover, lift


def _abelian_quotient_stabilizer(q, action, supply, ctx: SolverContext) -> list:
    if ctx.transparent:
        return exact_stabilizer(section_view(action, q), supply.take())
    cover, lift = abelian_cover(q)
    view = GroupView(cover, action, lift, name=f"{action.name}|cover[{q.start},{q.end})")
    gens = stabilizer_abelian(view, supply, ctx.rng, ctx.per_call_eps / 2, ctx.config.c0)
    out = []
    for e in gens:
        g = lift(e)
        if g != q.identity() and g not in out:
            out.append(g)
    return out


def stabilizer_solvable(group: PolycyclicGroup, action, copies, ctx: SolverContext) -> list:
    """Stabilizer with ``N = G'``: abelian ``G/G'`` by Fourier sampling, ``G'`` by smooth Orbit Coset."""
    if group.commutator_index is None:
        raise GroupError("the group document does not give its commutator subgroup")
    supply = as_supply(copies)
    ci = max(0, min(group.commutator_index - group.start, group.length))
    N = group.prefix_subgroup(ci)
    if N.order == 1:
        return _abelian_quotient_stabilizer(group, action, supply, ctx)
    return stabilizer_recursive(group, N, action, supply, ctx,
                                quotient_solver=_abelian_quotient_stabilizer)


# --------------------------------------------------------------------------
# entry points
# --------------------------------------------------------------------------

@dataclass
class SolveReport:
    result: object
    queries: int
    copies: dict
    counters: dict
    fidelity_loss: float


def _context(group, config, rng) -> SolverContext:
    return SolverContext(config, rng, group.order)


def solve_orbit_coset(group, action, phi0, phi1, config: SolverConfig | None = None,
                      rng=None) -> SolveReport:
    """Orbit Coset for a polycyclic group (smooth series) or ``Z_p^n``."""
    ctx = _context(group, config, rng)
    s0, s1 = as_supply(phi0, "phi0"), as_supply(phi1, "phi1")
    q0 = action.top.queries
    if isinstance(group, AbelianGroup):
        if ctx.transparent:
            res = exact_orbit_coset(action, s0.take(), s1.take())
        else:
            res = orbit_coset_zpn(action, s0, s1, ctx.rng, ctx.config.eps, ctx.config.c0)
    else:
        res = orbit_coset_smooth(group, action, s0, s1, ctx)
    return SolveReport(res, action.top.queries - q0, {"phi0": s0.used, "phi1": s1.used},
                       dict(ctx.counters), ctx.fidelity_loss)


def solve_stabilizer(group, action, phi, config: SolverConfig | None = None, rng=None,
                     method: str = "smooth") -> SolveReport:
    ctx = _context(group, config, rng)
    s = as_supply(phi, "phi")
    q0 = action.top.queries
    if isinstance(group, AbelianGroup):
        gens = (exact_stabilizer(action, s.take()) if ctx.transparent
                else stabilizer_abelian(action, s, ctx.rng, ctx.config.eps, ctx.config.c0))
    elif method == "solvable":
        gens = stabilizer_solvable(group, action, s, ctx)
    else:
        gens = stabilizer_smooth(group, action, s, ctx)
    return SolveReport(gens, action.top.queries - q0, {"phi": s.used}, dict(ctx.counters),
                       ctx.fidelity_loss)
