import itertools
import json

import numpy as np
import pytest

from orbitcoset.groups import (AbelianGroup, SemidirectZpnZ2, SchemaError, builtin_group,
                               builtin_group_names, char_eval, group_from_dict,
                               orthogonal_subgroup, semidirect_presentation)


def test_abelian_arithmetic():
    g = AbelianGroup.elementary(3, 2)
    assert g.multiply((1, 2), (2, 2)) == (0, 1)
    assert g.inverse(g.identity()) == g.identity()
    assert g.order == 9


def test_semidirect_multiply_example():
    g = SemidirectZpnZ2(3, 2)
    assert g.multiply(((1, 0), 1), ((1, 0), 0)) == ((0, 0), 1)
    assert g.inverse(g.identity()) == g.identity()


def test_semidirect_group_axioms():
    g = SemidirectZpnZ2(3, 2)
    els = g.elements()
    e = g.identity()
    for a in els:
        assert g.multiply(a, g.inverse(a)) == e
    for a, b, c in itertools.islice(itertools.product(els, repeat=3), 0, 5832, 7):
        assert g.multiply(g.multiply(a, b), c) == g.multiply(a, g.multiply(b, c))


def test_characters():
    g = AbelianGroup.elementary(3, 2)
    for y in g.elements():
        assert abs(char_eval(g, y, (0, 0)) - 1) < 1e-12
    assert abs(char_eval(g, (1, 2), (2, 2)) - 1) < 1e-12
    assert abs(char_eval(AbelianGroup((2,)), (1,), (1,)) + 1) < 1e-12


def test_orthogonal_subgroup_elementary():
    g = AbelianGroup.elementary(3, 2)
    assert len(g.closure(orthogonal_subgroup([], g))) == 9
    h = g.closure(orthogonal_subgroup([(1, 0)], g))
    assert h == frozenset({(0, 0), (0, 1), (0, 2)})


def test_orthogonal_subgroup_mixed_orders():
    g = AbelianGroup((4, 2))
    h = g.closure(orthogonal_subgroup([(2, 1)], g))
    brute = {x for x in g.elements() if (2 * x[0] / 4 + x[1] / 2) % 1 == 0}
    assert h == frozenset(brute)


def test_presentation_matches_semidirect():
    sd = SemidirectZpnZ2(3, 2)
    pc = semidirect_presentation(3, 2)
    assert pc.order == 18
    for a in sd.elements():
        for b in sd.elements():
            lhs = pc.multiply(sd.to_polycyclic(a), sd.to_polycyclic(b))
            assert sd.from_polycyclic(lhs) == sd.multiply(a, b)


def test_series_split():
    g = semidirect_presentation(3, 2)
    n = g.prefix_subgroup(1)
    q = g.quotient(1)
    assert n.order == 9 and q.order == 2
    assert g.prefix_subgroup(g.length).order == 1
    assert g.prefix_subgroup(0).order == g.order


@pytest.mark.parametrize("name", builtin_group_names())
def test_builtin_groups_are_consistent(name):
    g = builtin_group(name)
    els = g.elements()
    assert len(set(els)) == g.order
    rng = np.random.default_rng(0)
    for _ in range(200):
        a, b, c = (els[i] for i in rng.integers(len(els), size=3))
        assert g.multiply(g.multiply(a, b), c) == g.multiply(a, g.multiply(b, c))
    orders = {"s3": 6, "z4xz2": 8, "z3sq_semidirect_z2": 18, "heisenberg3": 27,
              "z3cube": 27, "z3cube_semidirect_z2": 54}
    assert g.order == orders[name]


def test_bad_group_documents_report_location():
    with pytest.raises(SchemaError, match=r"\$\.relative_orders"):
        group_from_dict({"kind": "polycyclic", "relative_orders": []})
    with pytest.raises(SchemaError, match=r"\$\.conjugates\[0\]"):
        group_from_dict({"kind": "polycyclic", "relative_orders": [2, 3], "conjugates": [{"i": 0}]})
    with pytest.raises(SchemaError, match="not prime"):
        group_from_dict({"kind": "polycyclic", "relative_orders": [4]})
    with pytest.raises(SchemaError, match=r"\$\.kind"):
        group_from_dict(json.loads('{"kind": "free"}'))
