import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sampling_recovery.index_sets import (IndexSet, dyadic_block, full_cube, hyperbolic_cross,
                                          layer, linf_shell, parse_index_set)

from oracles import block, cross, in_block
from oracles import layer as layer_ref


def as_set(J):
    return set(J.members)


def test_zero_block_is_origin():
    assert as_set(dyadic_block((0,))) == {(0,)}


def test_block_first_axis_only():
    assert as_set(dyadic_block((1, 0))) == {(-1, 0), (1, 0)}


def test_block_2_1():
    J = dyadic_block((2, 1))
    assert len(J) == 8
    assert as_set(J) == {(a, b) for a in (-3, -2, 2, 3) for b in (-1, 1)}


# j=3: blocks (3,0), (0,3), (2,1), (1,2) hold 8 indices each
@pytest.mark.parametrize("j,size", [(0, 1), (1, 4), (2, 12), (3, 32)])
def test_layer_sizes_2d(j, size):
    assert len(layer(j, 2)) == size
    assert as_set(layer(j, 2)) == layer_ref(j, 2)


def test_layer_one_2d():
    assert as_set(layer(1, 2)) == {(1, 0), (-1, 0), (0, 1), (0, -1)}


def test_cross_examples():
    assert as_set(hyperbolic_cross(2, 1)) == {(k,) for k in range(-3, 4)}
    assert as_set(hyperbolic_cross(1, 2)) == {(0, 0), (1, 0), (-1, 0), (0, 1), (0, -1)}
    assert as_set(hyperbolic_cross(0, 2)) == {(0, 0)}


@pytest.mark.parametrize("M,d,size", [(1, 2, 9), (3, 1, 7), (2, 3, 125)])
def test_full_cube_sizes(M, d, size):
    assert len(full_cube(M, d)) == size


@pytest.mark.parametrize("d", [1, 2, 3])
def test_partition_and_disjoint_blocks(d):
    for n in range(0, 7 if d < 3 else 5):
        layers = [layer(j, d) for j in range(n + 1)]
        assert sum(map(len, layers)) == len(hyperbolic_cross(n, d))
    # blocks inside a layer do not overlap
    for j in range(5):
        seen = set()
        for s in itertools.product(range(j + 1), repeat=d):
            if sum(s) != j:
                continue
            b = as_set(dyadic_block(s))
            assert not (b & seen)
            seen |= b


@pytest.mark.parametrize("d", [1, 2, 3])
def test_cross_matches_reference(d):
    for n in range(4 if d < 3 else 3):
        assert as_set(hyperbolic_cross(n, d)) == cross(n, d)


@pytest.mark.parametrize("d", [1, 2, 3])
def test_nesting(d):
    for n in range(5):
        Qn, Qn1 = hyperbolic_cross(n, d), hyperbolic_cross(n + 1, d)
        assert Qn.issubset(Qn1)
        assert Qn1.issubset(full_cube(2 ** (n + 1), d))


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(0, 5), min_size=1, max_size=3), st.data())
def test_block_membership_closure(s, data):
    k = tuple(data.draw(st.lists(st.integers(-40, 40), min_size=len(s), max_size=len(s))))
    assert (k in dyadic_block(tuple(s))) == in_block(k, s)


def test_block_matches_reference_small():
    for s in itertools.product(range(4), repeat=2):
        assert as_set(dyadic_block(s)) == block(s)


def test_lexicographic_order():
    arr = hyperbolic_cross(3, 2).array
    keys = [tuple(r) for r in arr]
    assert keys == sorted(keys)


def test_immutable_and_text_round_trip():
    J = hyperbolic_cross(2, 2)
    with pytest.raises(AttributeError):
        J.foo = 1
    assert not J.array.flags.writeable
    assert IndexSet.from_text(J.to_text()) == J


def test_linf_shell():
    assert as_set(linf_shell(0, 2)) == {(0, 0)}
    # max |k_i| in [1, 2)
    assert len(linf_shell(1, 2)) == 8
    assert len(linf_shell(2, 1)) == 4


def test_parse_specs():
    assert parse_index_set("cross:2", 1) == hyperbolic_cross(2, 1)
    assert parse_index_set("cube:1", 2) == full_cube(1, 2)
    assert parse_index_set("block:2,1", 2) == dyadic_block((2, 1))
    assert len(parse_index_set("range:0,9", 1)) == 10
    with pytest.raises(ValueError):
        parse_index_set("nonsense", 1)


def test_cube_size_guard():
    with pytest.raises(ValueError):
        full_cube(10**4, 3)


def test_negative_inputs_rejected():
    with pytest.raises(ValueError):
        layer(-1, 2)
    with pytest.raises(ValueError):
        hyperbolic_cross(-1, 2)


def test_contains_position():
    J = full_cube(2, 1)
    pos = J.position()
    assert [pos[k] for k in J.members] == list(range(len(J)))
    assert (5,) not in J and np.array([2]).tolist() == [2]
