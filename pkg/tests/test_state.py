import cmath
import math

import numpy as np
import pytest

from orbitcoset.groups import AbelianGroup
from orbitcoset.state import (CopiesExhausted, CopySupply, OracleFn, PureState, Register,
                              StateError, apply_oracle, equality_test, fidelity,
                              fourier_sampling, fourier_sampling_distribution, label_state,
                              label_superposition, measure, probabilities, qft, swap_test,
                              tensor, uniform_superposition, zero_state)

Z2 = AbelianGroup((2,))
Z3 = AbelianGroup((3,))
Z3SQ = AbelianGroup.elementary(3, 2)


def test_uniform_superposition():
    s = uniform_superposition(Z2)
    assert all(abs(a - 1 / math.sqrt(2)) < 1e-12 for _, a in s.items())
    s = uniform_superposition(Z3SQ)
    assert len(s.support) == 9
    assert all(abs(a - 1 / 3) < 1e-12 for _, a in s.items())
    trivial = uniform_superposition(AbelianGroup(()))
    assert trivial.support == [((),)]


def test_oracle_identity_function():
    f = OracleFn.from_function(Z3.elements(), lambda x: x[0], 3)
    s = tensor(uniform_superposition(Z3), zero_state(Register.values(3)))
    out = apply_oracle(s, f, "x", "s")
    assert sorted(out.support) == [((0,), 0), ((1,), 1), ((2,), 2)]


def test_oracle_constant_factorizes():
    f = OracleFn.from_function(Z3.elements(), lambda x: 2, 3)
    s = tensor(uniform_superposition(Z3), zero_state(Register.values(3)))
    out = apply_oracle(s, f, "x", "s")
    assert probabilities(out, "s") == pytest.approx({(2,): 1.0})
    assert probabilities(out, "x") == pytest.approx(probabilities(s, "x"))


def test_oracle_injective_marginal_is_uniform():
    vals = {x: i for i, x in enumerate(Z3SQ.elements())}
    f = OracleFn(vals, 9, injective=True)
    s = apply_oracle(tensor(uniform_superposition(Z3SQ), zero_state(Register.values(9))), f, "x", "s")
    rng = np.random.default_rng(0)
    counts = {}
    for _ in range(900):
        o, _ = measure(s, "x", rng)
        counts[o] = counts.get(o, 0) + 1
    assert len(counts) == 9
    assert all(60 < c < 140 for c in counts.values())


def test_oracle_injective_flag_is_checked():
    with pytest.raises(StateError):
        OracleFn({(0,): 1, (1,): 1}, 2, injective=True)


def test_qft_examples():
    s = PureState((Register.of_group(Z2),), {((0,),): 1.0})
    out = qft(s, "x")
    assert out.amplitude(((1,),)) == pytest.approx(1 / math.sqrt(2))
    s = PureState((Register.of_group(Z3),), {((1,),): 1.0})
    out = qft(s, "x")
    w = cmath.exp(2j * math.pi / 3)
    for y in range(3):
        assert out.amplitude(((y,),)) == pytest.approx(w ** y / math.sqrt(3))


def test_qft_round_trip():
    rng = np.random.default_rng(5)
    g = AbelianGroup((3, 4))
    amps = {(x,): complex(*rng.normal(size=2)) for x in g.elements()}
    s = PureState((Register.of_group(g),), amps, check=False).normalized()
    back = qft(qft(s, "x"), "x", inverse=True)
    assert fidelity(back, s) >= 1 - 1e-9


def test_measure_statistics():
    s = label_superposition({0: 1 / math.sqrt(2), 1: 1 / math.sqrt(2)})
    rng = np.random.default_rng(11)
    zeros = 0
    for _ in range(10_000):
        (o,), post = measure(s, 0, rng)
        zeros += o == 0
        assert abs(post.norm_squared() - 1) < 1e-9
    assert abs(zeros / 10_000 - 0.5) < 0.02
    (o,), _ = measure(label_state(7), 0, rng)
    assert o == 7


def test_fourier_sampling_constant_and_injective():
    const = OracleFn.from_function(Z3SQ.elements(), lambda x: 0, 1)
    assert fourier_sampling_distribution(const, Z3SQ) == pytest.approx({(0, 0): 1.0})
    inj = OracleFn({x: i for i, x in enumerate(Z3SQ.elements())}, 9)
    dist = fourier_sampling_distribution(inj, Z3SQ)
    assert len(dist) == 9 and all(v == pytest.approx(1 / 9) for v in dist.values())


def test_fourier_sampling_hidden_diagonal():
    # f constant on cosets of <(1,1)>
    f = OracleFn.from_function(Z3SQ.elements(), lambda x: (x[0] - x[1]) % 3, 3)
    rng = np.random.default_rng(2)
    counts = {}
    n = 10_000
    for _ in range(n):
        y = fourier_sampling(f, Z3SQ, rng)
        counts[y] = counts.get(y, 0) + 1
    assert set(counts) == {(0, 0), (1, 2), (2, 1)}
    chi2 = sum((c - n / 3) ** 2 / (n / 3) for c in counts.values())
    assert chi2 < 13.8  # 99.9% quantile, 2 dof


def test_swap_test_rates():
    rng = np.random.default_rng(4)
    a, b = label_state(0), label_state(1)
    plus = label_superposition({0: 1 / math.sqrt(2), 1: 1 / math.sqrt(2)})
    n = 10_000
    assert all(swap_test(a, a, rng) for _ in range(200))
    assert abs(sum(swap_test(a, b, rng) for _ in range(n)) / n - 0.5) < 0.02
    assert abs(sum(swap_test(a, plus, rng) for _ in range(n)) / n - 0.75) < 0.02


def test_equality_test_error_rates():
    rng = np.random.default_rng(8)
    a, b = label_state(0), label_state(1)
    assert all(equality_test(a, a, 1e-3, rng) for _ in range(100))
    wrong = sum(equality_test(a, b, 1e-3, rng) for _ in range(5000))
    assert wrong <= 15
    # more rounds never hurts
    rates = [sum(equality_test(a, b, 0.5, rng, rounds=k) for _ in range(4000)) for k in (1, 2, 4)]
    assert rates[0] > rates[1] > rates[2]


def test_copy_supply_counts_and_limits():
    s = CopySupply(state=label_state(0), limit=3)
    s.take(2)
    assert s.used == 2 and s.remaining == 1
    with pytest.raises(CopiesExhausted):
        s.take(2)
    f = CopySupply(factory=lambda: [label_state(1)] * 4)
    f.take(6)
    assert f.batches == 2


def test_norm_is_enforced():
    with pytest.raises(StateError):
        PureState((Register.labels(),), {(0,): 1.0, (1,): 1.0})
