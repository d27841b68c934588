import random
from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from conftest import positive_tuples, random_word

from loopgroup.core_matrix import (ChevE, ChevF, GeneratorWord, PeriodicBandMatrix, chevalley_e, chevalley_f, curl,
                                   folded_det, identity, minor, multiply, shift, torus, whirl)
from loopgroup.cylnet import (CylNetwork, Edge, alpha, build_block, coefficient_sign_violations, common_vertices,
                              concatenate, curl_network, example_network, folded_det_families, is_uncrossed,
                              lindstrom_minor, network_eval, network_from_word, paths, proper_crossing_test,
                              swap_tails, uncrossed_families)
from loopgroup.errors import NetworkError
from loopgroup.laurent import Series

F = Fraction
EX2 = PeriodicBandMatrix(3, -1, 2, [[2, 3, 1, 0], [1, 2, 1, 1], [0, 1, 1, 0]])
EX3 = PeriodicBandMatrix(2, -2, 3, [[0, 3, 3, 5, 2, 1], [1, 1, 7, 4, 2, 0]])


def crossing_network():
    """Two paths through c1 and c2: one takes the edge around the cut, one does not."""
    heights = {"v1": 0, "v2": 1, "v3": 2, "v4": 3, "c1": 4, "c2": 5, "w1": 6, "w2": 7, "w3": 8, "w4": 9}
    edges = [Edge("v1", "c1"), Edge("v2", "c1"), Edge("c1", "c2", F(2), 1), Edge("c1", "c2", F(3), 0),
             Edge("c2", "w1"), Edge("c2", "w2"), Edge("v3", "w3"), Edge("v4", "w4")]
    return CylNetwork(4, heights, edges, ["v1", "v2", "v3", "v4"], ["w1", "w2", "w3", "w4"])


def test_alpha():
    assert [alpha(i, 4) for i in (-3, 0, 1, 4, 5, 6, 9)] == [-1, -1, 0, 0, 1, 1, 2]


def test_proper_and_improper_crossings():
    N = crossing_network()
    (p,) = paths(N, 1, 6)
    (q,) = paths(N, 2, 1)
    assert common_vertices(p, q) == ["c1", "c2"]
    assert proper_crossing_test(p, q, "c1", 4)
    assert not proper_crossing_test(p, q, "c2", 4)
    assert not is_uncrossed(p, q, 4)
    pv, pe, qv, qe = swap_tails(p, q, "c2")
    assert (pv[-1], sum(e.cross for e in pe)) == ("w1", 1)
    assert (qv[-1], sum(e.cross for e in qe)) == ("w2", 0)
    with pytest.raises(NetworkError):
        proper_crossing_test(p, q, "v3", 4)


def test_disjoint_paths_are_uncrossed():
    N = crossing_network()
    (p,) = paths(N, 3, 3)
    (q,) = paths(N, 4, 4)
    assert common_vertices(p, q) == [] and is_uncrossed(p, q, 4)


def test_path_weights_and_rotors():
    N = crossing_network()
    assert [p.weight for p in paths(N, 1, 6)] == [2]
    assert [p.weight for p in paths(N, 1, 1)] == [3]
    assert paths(N, 1, 6)[0].rot == 1


def test_example_network_evaluation():
    N = example_network()
    assert network_eval(N) == EX3
    assert folded_det(network_eval(N)) == Series({0: 6, 1: -1})
    assert folded_det_families(N) == Series({0: 6, 1: -1})


def test_example_network_lindstrom():
    N = example_network()
    X = network_eval(N)
    assert lindstrom_minor(N, (1, 2), (3, 4)) == minor(X, (1, 2), (3, 4))
    for i in range(1, 5):
        for j in range(-1, 6):
            assert lindstrom_minor(N, (i,), (j,)) == X.entry(i, j)


def test_some_counted_family_intersects():
    N = example_network()
    hits = [fam for I in combinations(range(1, 5), 2) for J in combinations(range(1, 5), 2)
            for fam in uncrossed_families(N, I, J) if common_vertices(*fam)]
    assert hits


def test_blocks_evaluate_to_generators():
    a = (F(2), F(3), F(5))
    assert network_eval(build_block("whirl", a)) == whirl(a)
    assert network_eval(build_block("e", (3, 3, F(7)))) == chevalley_e(3, 3, 7)
    assert network_eval(build_block("f", (3, 3, F(7)))) == chevalley_f(3, 3, 7)
    assert network_eval(build_block("shift", (3, 1))) == shift(3)
    assert network_eval(build_block("shift", (3, -2))) == shift(3, -2)
    assert network_eval(build_block("torus", a)) == torus(a)
    assert network_eval(build_block("identity", n=2)) == identity(2)
    with pytest.raises(NetworkError):
        build_block("spiral", (1,))


def test_word_network_for_polynomial_example():
    w = GeneratorWord(3, (ChevF(3, 2), ChevF(1, 1), ChevE(2, 1), ChevE(1, 1), ChevE(3, 1)))
    assert network_eval(network_from_word(w)) == EX2


@given(positive_tuples(count=2))
def test_concatenated_whirls(L):
    a, b = L
    N = concatenate(build_block("whirl", a), build_block("whirl", b))
    assert network_eval(N) == multiply(whirl(a), whirl(b))


def test_curl_network():
    N = curl_network((1, 2))
    assert N.cyclic
    assert network_eval(N, max_rotor=3).agrees_with(curl((1, 2), 6), 6)


def test_identity_network_det_is_one():
    assert folded_det_families(build_block("identity", n=3)) == Series.const(1)


@settings(max_examples=25)
@given(st.integers(0, 10 ** 9))
def test_random_networks_det_and_minors(seed):
    rng = random.Random(seed)
    n = rng.choice([2, 3])
    w = random_word(rng, n, 3)
    N = network_from_word(w)
    X = network_eval(N)
    assert X == w.evaluate()
    assert folded_det_families(N) == folded_det(X)
    I = tuple(sorted(rng.sample(range(1, n + 2), 2)))
    J = tuple(sorted(rng.sample(range(0, n + 3), 2)))
    assert lindstrom_minor(N, I, J) == minor(X, I, J)


def test_coefficient_signs():
    assert coefficient_sign_violations(EX3) == []
    assert coefficient_sign_violations(EX2) == []


def test_validation():
    heights = {"v1": 0, "w1": 1}
    with pytest.raises(NetworkError):
        CylNetwork(1, heights, [Edge("v1", "w1", F(-1))], ["v1"], ["w1"])
    with pytest.raises(NetworkError):
        CylNetwork(1, heights, [Edge("w1", "v1")], ["v1"], ["w1"])
    with pytest.raises(NetworkError):
        CylNetwork(2, heights, [], ["v1"], ["w1"])
    with pytest.raises(NetworkError):
        CylNetwork(1, heights, [Edge("v1", "x")], ["v1"], ["w1"])


def test_json_and_diagram():
    N = crossing_network()
    M = CylNetwork.from_json(N.to_json())
    assert network_eval(M) == network_eval(N)
    text = N.diagram()
    assert "c1 -> c2  w=2  [crosses +1]" in text and text.startswith("n=4")
