import math

import numpy as np
import pytest

from orbitcoset.actions import builtin_action, left_coset_action, planted_translation_instance
from orbitcoset.groups import (AbelianGroup, SemidirectZpnZ2, builtin_group, elementary_polycyclic,
                               semidirect_presentation)
from orbitcoset.orbits import (SolverConfig, SolverContext, orbit_state, orbit_superposition,
                               orbit_superposition_step, per_call_eps, section_view,
                               solve_orbit_coset, solve_stabilizer)
from orbitcoset.state import fidelity, label_state, label_superposition


def uniform(labels):
    a = 1 / math.sqrt(len(labels))
    return label_superposition({lab: a for lab in labels})


def test_per_call_budget():
    # |G| = 18: ceil(log2 18) = 5, s = 8 -> 8*5 + 25 = 65
    assert per_call_eps(1e-3, 18, 8) == pytest.approx(1e-3 / 65)


@pytest.mark.parametrize("seed", range(6))
def test_step_on_swap_pair(seed):
    action, phi = builtin_action("z2-swap")
    orbit = action.orbit(phi)
    rep = orbit_superposition_step(action.group, action, [label_state(phi)] * 2, orbit.get,
                                   np.random.default_rng(seed))
    assert len(rep.outputs) == 1
    assert fidelity(rep.outputs[0], uniform(list(orbit))) >= 1 - 1e-6


@pytest.mark.parametrize("seed", range(6))
def test_step_on_free_triple(seed):
    action, phi = builtin_action("z3-free")
    orbit = action.orbit(phi)
    rep = orbit_superposition_step(action.group, action, [label_state(phi)] * 3, orbit.get,
                                   np.random.default_rng(seed))
    assert len(rep.outputs) == 2
    for out in rep.outputs:
        assert fidelity(out, uniform(list(orbit))) >= 1 - 1e-6


def test_step_when_stabilizer_is_not_below():
    # trivial action of Z_2: the L-orbit already equals the K-orbit
    k = elementary_polycyclic(2, 1)
    action = left_coset_action(k, k.elements())
    phi = label_state(action.labels[0])
    rep = orbit_superposition_step(k, action, [phi] * 3, lambda lab: k.identity(),
                                   np.random.default_rng(0))
    assert rep.all_zero
    assert all(fidelity(o, phi) == pytest.approx(1.0) for o in rep.outputs)


@pytest.mark.parametrize("mode", ["faithful", "transparent"])
def test_orbit_superposition_free_plane(mode):
    g = elementary_polycyclic(3, 2)
    action = left_coset_action(g, [g.identity()])
    ctx = SolverContext(SolverConfig(mode=mode), np.random.default_rng(1), g.order)
    phi = g.identity()
    res = orbit_superposition(g, action, label_state(phi), ctx, s=2)
    target = orbit_state(section_view(action, g), phi)
    assert len(target.support) == 9
    assert len(res.copies) == 2
    assert all(fidelity(c, target) >= 1 - 1e-6 for c in res.copies)


def test_orbit_superposition_order_18():
    action, phi = builtin_action("semidirect18-regular")
    g = action.group
    ctx = SolverContext(SolverConfig(mode="faithful"), np.random.default_rng(4), g.order)
    res = orbit_superposition(g, action, label_state(phi), ctx, s=1)
    target = orbit_state(section_view(action, g), phi)
    assert len(target.support) == 18
    assert fidelity(res.copies[0], target) >= 1 - 1e-6


def test_orbit_superposition_trivial_group():
    g = semidirect_presentation(3, 1).prefix_subgroup(2)
    action, phi = builtin_action("z3-free")
    ctx = SolverContext(SolverConfig(), np.random.default_rng(0), 1)
    res = orbit_superposition(g, action, label_state(phi), ctx, s=2)
    assert all(fidelity(c, label_state(phi)) == pytest.approx(1.0) for c in res.copies)


def test_equal_inputs_free_action():
    g = elementary_polycyclic(3, 2)
    action = left_coset_action(g, [g.identity()])
    phi = label_state(g.identity())
    rep = solve_orbit_coset(g, action, phi, phi, SolverConfig(), np.random.default_rng(0))
    assert rep.result.representative == g.identity()
    assert g.closure(rep.result.generators) == {g.identity()}


@pytest.mark.parametrize("mode", ["faithful", "transparent"])
def test_disjoint_orbits_rejected(mode):
    g = builtin_group("z3sq_semidirect_z2")
    inst = planted_translation_instance(g, g.random_element(np.random.default_rng(0)), 3, disjoint=True)
    rep = solve_orbit_coset(g, inst.action, inst.phi0, inst.phi1, SolverConfig(mode=mode),
                            np.random.default_rng(1))
    assert rep.result.rejected


def test_small_group_exhaustive_search():
    g = builtin_group("z4xz2")
    action, phi = builtin_action("z4xz2-cosets")
    orbit = action.orbit(phi)
    rng = np.random.default_rng(2)
    for target, _ in list(orbit.items())[:4]:
        rep = solve_orbit_coset(g, action, label_state(target), label_state(phi), SolverConfig(), rng)
        u = rep.result.representative
        assert action.act_label(u, phi) == target
        assert g.closure(rep.result.generators) == set(action.stabilizer_elements(phi))


def test_translation_in_z3_cube():
    g = AbelianGroup.elementary(3, 3)
    rng = np.random.default_rng(6)
    hits = 0
    for t in range(6):
        u = g.random_element(rng)
        inst = planted_translation_instance(g, u, t)
        rep = solve_orbit_coset(g, inst.action, inst.phi0, inst.phi1, SolverConfig(), rng)
        if not rep.result.rejected:
            assert rep.result.representative == u
            hits += 1
    assert hits >= 3


def test_order_18_translation():
    g = builtin_group("z3sq_semidirect_z2")
    rng = np.random.default_rng(3)
    u = g.random_element(rng)
    inst = planted_translation_instance(g, u, 11)
    rep = solve_orbit_coset(g, inst.action, inst.phi0, inst.phi1, SolverConfig(mode="transparent"), rng)
    assert rep.result.representative == u
    assert g.closure(rep.result.generators) == {g.identity()}


@pytest.mark.parametrize("method", ["smooth", "solvable"])
def test_planted_reflection_stabilizer(method):
    sd = SemidirectZpnZ2(3, 2)
    g = semidirect_presentation(3, 2)
    h = [sd.to_polycyclic(((0, 0), 0)), sd.to_polycyclic(((1, 2), 1))]
    action = left_coset_action(g, h)
    phi = min(h)
    rep = solve_stabilizer(g, action, label_state(phi), SolverConfig(), np.random.default_rng(0), method)
    assert g.closure(rep.result) == frozenset(h)


@pytest.mark.parametrize("method", ["smooth", "solvable"])
def test_free_action_stabilizer(method):
    action, phi = builtin_action("semidirect18-regular")
    g = action.group
    rep = solve_stabilizer(g, action, label_state(phi), SolverConfig(), np.random.default_rng(1), method)
    assert g.closure(rep.result) == {g.identity()}


def test_abelian_solvable_route():
    g = elementary_polycyclic(3, 2)
    action = left_coset_action(g, [(0, 0), (1, 1), (2, 2)])
    rep = solve_stabilizer(g, action, label_state((0, 0)), SolverConfig(), np.random.default_rng(0),
                           "solvable")
    assert g.closure(rep.result) == {(0, 0), (1, 1), (2, 2)}


def test_config_validation():
    with pytest.raises(ValueError):
        SolverConfig(mode="magic")
    with pytest.raises(ValueError):
        SolverConfig(eps=0)
