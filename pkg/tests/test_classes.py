import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sampling_recovery.classes import (ClassParamsA, ClassParamsW, a_beta_norm, delta_s,
                                       generate_A, generate_W, layer_part, layer_parts,
                                       membership_A, membership_W, shell_index)
from sampling_recovery.index_sets import full_cube
from sampling_recovery.trig import SparseCoefFn

import oracles

FOUR = SparseCoefFn([[0], [1], [2], [3]], [0.4, -0.3j, 0.2, 0.1])


def test_delta_s_examples():
    f = SparseCoefFn.from_dict({0: 1, 1: 2})
    assert delta_s(f, (0,)).to_dict() == {(0,): 1}
    assert len(delta_s(SparseCoefFn.single(5), (1,))) == 0
    g = SparseCoefFn.from_dict({(1, 1): 3, (2, 0): 5})
    assert delta_s(g, (1, 1)).to_dict() == {(1, 1): 3}


def test_delta_s_uses_block_definition():
    rng = np.random.default_rng(0)
    f = SparseCoefFn(rng.integers(-9, 10, size=(40, 2)), rng.standard_normal(40), d=2)
    for s in [(0, 0), (1, 2), (3, 1), (2, 2)]:
        expected = {k for k in f.to_dict() if oracles.in_block(k, s)}
        assert set(delta_s(f, s).to_dict()) == expected


def test_layer_part_examples():
    f = SparseCoefFn.from_dict({0: 1})
    assert layer_part(f, 0).allclose(f)
    assert len(layer_part(f, 3)) == 0
    g = SparseCoefFn.from_dict({(1, 0): 1, (0, 1): 1})
    assert layer_part(g, 1).allclose(g)


def test_layers_resum_on_cube():
    rng = np.random.default_rng(3)
    J = full_cube(3, 2).array
    f = SparseCoefFn(J, rng.standard_normal(len(J)) + 1j * rng.standard_normal(len(J)), d=2)
    total = SparseCoefFn.zero(2)
    for j in range(8):
        total = total + layer_part(f, j)
    assert total.allclose(f, atol=0)
    assert sum(len(p) for p in layer_parts(f).values()) == len(f)


def test_a_beta_examples():
    assert a_beta_norm(SparseCoefFn.single(4, 2 - 1j), 0.5) == pytest.approx(abs(2 - 1j))
    assert a_beta_norm(FOUR, 1) == pytest.approx(1.0)
    ref = sum(math.sqrt(x) for x in (0.4, 0.3, 0.2, 0.1)) ** 2
    assert a_beta_norm(FOUR, 0.5) == pytest.approx(ref, rel=1e-14)
    assert a_beta_norm(FOUR, 0.5) == pytest.approx(3.777657, abs=1e-6)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.floats(0, 1e6), min_size=1, max_size=30), st.floats(0.05, 1), st.floats(0.05, 1))
def test_quasi_norm_monotone_in_beta(mags, b1, b2):
    b1, b2 = sorted((b1, b2))
    a = np.array(mags)
    assert a_beta_norm(a, b1) >= a_beta_norm(a, b2) * (1 - 1e-12)


def test_a_beta_rejects_bad_beta():
    with pytest.raises(ValueError):
        a_beta_norm(FOUR, 1.5)
    with pytest.raises(ValueError):
        a_beta_norm(FOUR, 0)


def test_params_validation():
    with pytest.raises(ValueError):
        ClassParamsW(a=0)
    with pytest.raises(ValueError):
        ClassParamsW(a=1, beta=2)
    with pytest.raises(ValueError):
        ClassParamsA(r=-1)


# membership

def test_constant_is_boundary_member():
    f = SparseCoefFn.from_dict({0: 1})
    for a, b, beta in [(1, 0, 1), (3, 2, 0.5), (0.5, 1, 0.25)]:
        assert membership_W(f, ClassParamsW(a, b, beta)).member
    for r in (0.5, 1, 4):
        assert membership_A(f, ClassParamsA(r)).member


def test_w_violation_reported():
    res = membership_W(SparseCoefFn.single(1), ClassParamsW(a=1))
    assert not res.member and res.j == 1
    assert res.excess == pytest.approx(2.0)


def test_a_violation_and_rescaled_member():
    f = SparseCoefFn.single(1)
    res = membership_A(f, ClassParamsA(r=2))
    assert not res.member and res.j == 1
    assert membership_A(f / 4, ClassParamsA(r=2)).member


def test_shell_index_matches_linf_definition():
    rng = np.random.default_rng(5)
    k = rng.integers(-70, 71, size=(200, 3))
    linf = np.abs(k).max(axis=1)
    ref = np.array([0 if x == 0 else int(math.floor(math.log2(x))) + 1 for x in linf])
    np.testing.assert_array_equal(shell_index(k), ref)


# generators

def test_generator_trivial_cases():
    assert generate_W(ClassParamsW(1, 0, 1), 1, j_max=0).to_dict() == {(0,): 1}
    assert generate_A(ClassParamsA(1), 1, j_max=0).to_dict() == {(0,): 1}


@pytest.mark.parametrize("profile", ["saturating", "saturating-spike", "random-sparse"])
def test_generated_members_pass(profile):
    params_w = ClassParamsW(1.5, 1.0, 0.5)
    params_a = ClassParamsA(1.2, 0.75)
    for seed in range(100):
        f = generate_W(params_w, 2, j_max=4, seed=seed, profile=profile)
        assert membership_W(f, params_w).member
        g = generate_A(params_a, 2, j_max=4, seed=seed, profile=profile)
        assert membership_A(g, params_a).member


@pytest.mark.parametrize("d,beta", [(1, 1.0), (2, 0.5), (3, 0.25)])
def test_saturating_layers_meet_bound(d, beta):
    params = ClassParamsW(a=1.0, b=2.0, beta=beta)
    f = generate_W(params, d, j_max=4, seed=7)
    for j in range(5):
        bound = 2.0 ** (-j) * max(j, 1) ** ((d - 1) * 2.0)
        assert abs(a_beta_norm(layer_part(f, j), beta) - bound) <= 1e-12


def test_saturating_shells_meet_bound():
    params = ClassParamsA(r=1.5, beta=0.5)
    f = generate_A(params, 2, j_max=5, seed=1)
    si = shell_index(f.indices)
    for j in range(6):
        q = a_beta_norm(f.coef[si == j], 0.5)
        assert abs(q - 2.0 ** (-1.5 * j)) <= 1e-12


def test_generator_is_seeded():
    p = ClassParamsW(1.0)
    assert generate_W(p, 2, 3, seed=4).allclose(generate_W(p, 2, 3, seed=4), atol=0)
    assert not generate_W(p, 2, 3, seed=4).allclose(generate_W(p, 2, 3, seed=5))


def test_constant_term_real_positive():
    f = generate_W(ClassParamsW(1.0), 1, 3, seed=11)
    c0 = f.to_dict()[(0,)]
    assert c0.imag == 0 and c0.real > 0
