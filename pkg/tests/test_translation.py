import cmath
import itertools
import math
from collections import defaultdict

import numpy as np
import pytest

from orbitcoset.state import fidelity
from orbitcoset.translation import (HiddenTranslationInstance, class_probability, dual_oracle,
                                    exact_element_distribution, exact_sample_distribution,
                                    hsp_semidirect, ht_fourier_sample, recover_direction,
                                    sample_count, semidirect_hiding_function,
                                    statevector_distribution, translation_finding,
                                    translation_finding_core)
from orbitcoset import fp_algebra as fp


def brute_distribution(inst):
    """P(y, c) from the character sum, grouped by oracle value."""
    p, n = inst.p, inst.n
    xs = list(itertools.product(range(p), repeat=n))
    norm = 2 * p ** n
    amps = defaultdict(complex)
    for y in xs:
        for c in (0, 1):
            for x in xs:
                for b in (0, 1):
                    v = (inst.f1 if b else inst.f0)(x)
                    phase = cmath.exp(2j * math.pi * sum(a * z for a, z in zip(y, x)) / p)
                    amps[(y + (c,), v)] += phase * (-1) ** (b * c) / norm
    out = defaultdict(float)
    for (o, _), a in amps.items():
        out[o] += abs(a) ** 2
    return dict(out)


def test_class_table_examples():
    assert class_probability(2, 1, 1) == pytest.approx(0.5)
    assert class_probability(2, 0, 1) == pytest.approx(0.0)
    assert class_probability(3, 1, 1) == pytest.approx(0.25)
    assert class_probability(3, 2, 1) == pytest.approx(0.25)
    for p in (2, 3, 5, 7):
        assert sum(exact_sample_distribution(p, 2, (1, 0)).values()) == pytest.approx(1.0)


@pytest.mark.parametrize("p,n", [(2, 2), (3, 1), (3, 2), (5, 1)])
def test_statevector_matches_character_sum(p, n):
    inst = HiddenTranslationInstance.random(p, n, 17)
    brute = brute_distribution(inst)
    for oracle in ("combined", "dual"):
        sv = statevector_distribution(inst, oracle)
        keys = set(brute) | set(sv)
        assert max(abs(brute.get(k, 0) - sv.get(k, 0)) for k in keys) < 1e-12
    exact = exact_element_distribution(p, n, inst.reveal())
    assert max(abs(brute.get(k, 0) - exact.get(k, 0)) for k in brute) < 1e-12


def test_samples_avoid_orthogonal_complement():
    rng = np.random.default_rng(0)
    inst = HiddenTranslationInstance.random(3, 3, rng)
    u = inst.reveal()
    recs = ht_fourier_sample(inst, rng, "statevector", size=10_000)
    ones = [r for r in recs if r.c == 1]
    assert all(sum(a * b for a, b in zip(r.y, u)) % 3 for r in ones)
    assert abs(len(ones) / 10_000 - 0.5) < 0.02


def test_shortcut_agrees_with_statevector():
    rng = np.random.default_rng(1)
    inst = HiddenTranslationInstance.random(3, 2, rng)
    counts = {m: defaultdict(int) for m in ("statevector", "shortcut")}
    for m in counts:
        for r in ht_fourier_sample(inst, rng, m, size=10_000):
            counts[m][r.y + (r.c,)] += 1
    keys = set(counts["statevector"]) | set(counts["shortcut"])
    tv = 0.5 * sum(abs(counts["statevector"][k] - counts["shortcut"][k]) for k in keys) / 10_000
    assert tv < 0.03


def test_sample_count():
    assert sample_count(3, 3) == 234


def test_zero_shift_skips_sampling():
    inst = HiddenTranslationInstance.planted(3, 2, (0, 0), np.random.default_rng(0))
    out = translation_finding(inst, np.random.default_rng(0))
    assert out.found and out.u == (0, 0) and out.samples == 0


def test_translation_finding_is_correct_when_it_answers():
    found = 0
    for seed in range(40):
        rng = np.random.default_rng(seed)
        inst = HiddenTranslationInstance.random(3, 2, rng)
        out = translation_finding(inst, rng)
        if out.found:
            found += 1
            assert inst.verify(out.u)
        else:
            assert out.reason in ("multiple", "inconsistent", "no-pivot", "no-scalar")
    assert found >= 20


def test_core_abort_paths():
    p, n = 3, 2
    never = lambda *a: False  # noqa: E731
    # no c = 1 samples: the system has no equations, many solutions
    out = translation_finding_core(p, n, lambda k: [((1, 0), 0)] * k, never, never)
    assert out.reason == "multiple"
    # samples orthogonal to every direction cannot be explained
    out = translation_finding_core(p, n, lambda k: [((0, 0), 1)] * k, never, never)
    assert out.reason == "inconsistent"


def test_recover_direction_from_star_vector():
    for u in [(1, 2, 0), (0, 1, 1), (2, 2, 1)]:
        ustar = fp.star_vector(u, 2, 3).coords
        j, v = recover_direction(ustar, 3, 3)
        scale = pow(u[j], -1, 3)
        assert v == tuple(a * scale % 3 for a in u)


def test_dual_oracle_matches_direct():
    inst = HiddenTranslationInstance.random(3, 3, 4)
    d = dual_oracle(inst)
    for x in itertools.product(range(3), repeat=3):
        for b in (0, 1):
            s = d.basis_input(x, b)
            assert fidelity(d.apply(s), d.direct(s)) == pytest.approx(1.0)
            assert fidelity(d.unapply(d.apply(s)), s) == pytest.approx(1.0)
    zero = d.basis_input((0, 0, 0), 0)
    (lab,) = d.apply(zero).support
    assert lab[1:] == (inst.f0((0, 0, 0)), inst.f1((0, 0, 0)))


def test_instance_json_round_trip():
    inst = HiddenTranslationInstance.random(3, 2, 9)
    sealed = inst.to_dict("sealed")
    assert "u" not in sealed
    back = HiddenTranslationInstance.from_dict(sealed)
    assert back.verify(inst.reveal())
    assert HiddenTranslationInstance.from_dict(inst.to_dict("verify")).reveal() == inst.reveal()


def test_hsp_zero_shift():
    rng = np.random.default_rng(0)
    f = semidirect_hiding_function(3, 2, (0, 0), rng)
    res = hsp_semidirect(3, 2, f, rng)
    assert res.generators == [((0, 0), 1)]


def test_hsp_hidden_reflection():
    rng = np.random.default_rng(3)
    u = (1, 2)
    f = semidirect_hiding_function(3, 2, u, rng)
    # f is constant on the left cosets {(x,0), (x+u,1)}
    for x in itertools.product(range(3), repeat=2):
        assert f[(x, 0)] == f[(tuple((a + b) % 3 for a, b in zip(x, u)), 1)]
    res = None
    for _ in range(10):
        res = hsp_semidirect(3, 2, f, rng)
        if not res.aborted:
            break
    assert res.generators == [(u, 1)]
