import numpy as np
import pytest

from orbitcoset.actions import (builtin_action, builtin_action_names, function_label,
                                function_state, left_coset_action, load_action, power_action,
                                reduce_hsp_to_stab, reduce_ht_to_oc, translate_function_state,
                                translation_action)
from orbitcoset.groups import AbelianGroup, SchemaError, builtin_group, elementary_polycyclic
from orbitcoset.state import fidelity, label_state
from orbitcoset.translation import orbit_coset_zpn, stabilizer_abelian

Z3 = AbelianGroup((3,))
Z3SQ = AbelianGroup.elementary(3, 2)


def test_power_action_counts_queries():
    action = translation_action(Z3)
    assert power_action(action, 1) is action
    pw = power_action(action, 3)
    phi = label_state(function_label(Z3, lambda g: g[0]))
    action.queries = 0
    pw.act_states((1,), (phi, phi, phi))
    assert action.queries == 3


def test_power_action_keeps_stabilizer():
    act = left_coset_action(Z3SQ, [(0, 0), (1, 1), (2, 2)])
    lab = act.labels[0]
    pw = power_action(act, 2)
    single = {g for g in Z3SQ.elements() if act.act_label(g, lab) == lab}
    double = {g for g in Z3SQ.elements() if pw.act_label(g, (lab, lab)) == (lab, lab)}
    assert single == double


def test_translation_action_on_registers():
    f = {(0,): 5, (1,): 3, (2,): 8}
    action = translation_action(Z3)
    assert action.act_label((0,), function_label(Z3, f)) == function_label(Z3, f)
    moved = translate_function_state(function_state(Z3, f, 9), Z3, (1,))
    direct = function_state(Z3, lambda g: f[((g[0] + 1) % 3,)], 9)
    assert fidelity(moved, direct) == pytest.approx(1.0)
    assert action.act_label((1,), function_label(Z3, f)) == function_label(
        Z3, lambda g: f[((g[0] + 1) % 3,)])


def test_translation_action_is_left_action():
    g = builtin_group("s3")
    action = translation_action(g)
    rng = np.random.default_rng(0)
    f = function_label(g, {x: i for i, x in enumerate(g.elements())})
    els = g.elements()
    for _ in range(100):
        x, y = (els[i] for i in rng.integers(len(els), size=2))
        lhs = action.act_label(x, action.act_label(y, f))
        assert lhs == action.act_label(g.multiply(x, y), f)


def test_reduction_from_translation():
    f0 = {x: i for i, x in enumerate(Z3SQ.elements())}
    inst = reduce_ht_to_oc(Z3SQ, f0, f0)
    assert inst.action.act_state((0, 0), inst.phi1).support == inst.phi0.support
    u = (2, 1)
    f1 = {x: f0[Z3SQ.multiply(x, Z3SQ.inverse(u))] for x in Z3SQ.elements()}
    inst = reduce_ht_to_oc(Z3SQ, f0, f1)
    res = orbit_coset_zpn(inst.action, inst.phi0, inst.phi1, np.random.default_rng(2))
    assert res.representative == u


def test_reduction_from_hidden_subgroup():
    f = {x: (x[0] - x[1]) % 3 for x in Z3SQ.elements()}
    inst = reduce_hsp_to_stab(Z3SQ, f)
    moved = inst.action.act_state((1, 1), inst.phi)
    assert fidelity(moved, inst.phi) == pytest.approx(1.0)
    gens = stabilizer_abelian(inst.action, inst.phi, np.random.default_rng(0))
    assert Z3SQ.closure(gens) == {(0, 0), (1, 1), (2, 2)}


def test_stabilizer_examples():
    rng = np.random.default_rng(5)
    triv = left_coset_action(Z3SQ, Z3SQ.elements())
    assert Z3SQ.closure(stabilizer_abelian(triv, label_state(triv.labels[0]), rng)) == set(Z3SQ.elements())
    free = left_coset_action(Z3SQ, [(0, 0)])
    assert Z3SQ.closure(stabilizer_abelian(free, label_state((0, 0)), rng)) == {(0, 0)}


@pytest.mark.parametrize("name", builtin_action_names())
def test_builtin_actions_load(name):
    action, phi = builtin_action(name)
    assert not action.check_homomorphism()
    orbit = action.orbit(phi)
    assert len(orbit) * len(action.stabilizer_elements(phi)) == action.group.order


def test_action_json_errors_have_locations(tmp_path):
    good = {"group": "s3", "labels": [0, 1, 2], "generators": [[0, 2, 1], [1, 2, 0]], "phi": 0}
    load_action(good)
    with pytest.raises(SchemaError, match=r"\$\.generators\[1\]"):
        load_action({**good, "generators": [[0, 2, 1], [1, 1, 0]]})
    with pytest.raises(SchemaError, match=r"\$\.labels"):
        load_action({k: v for k, v in good.items() if k != "labels"})
    with pytest.raises(SchemaError, match=r"\$\.generators"):
        # swapping z_1 with a transposition breaks the relations of S3
        load_action({**good, "generators": [[0, 2, 1], [1, 0, 2]]})
    bad = tmp_path / "broken.json"
    bad.write_text('{"group": "s3", "labels": [0, 1,')
    with pytest.raises(SchemaError, match="broken.json:1"):
        load_action(str(bad))


def test_elementary_group_views_agree():
    pc = elementary_polycyclic(3, 2)
    assert sorted(pc.elements()) == sorted(Z3SQ.elements())
