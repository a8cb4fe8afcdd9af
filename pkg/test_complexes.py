#!/usr/bin/env python3
"""
Complex construction tests
Independence and neighborhood complexes, f-vectors, cover pairs and the
counting recursions used as cross-checks.
"""

import os
import sys

sys.path.append(os.path.dirname(os.path.abspath(__file__)))

from complexes import (complex_from_maximal_faces, cover_pairs, euler_characteristic, f_vector,
                       independence_complex, independence_count, independence_polynomial_at_minus_one,
                       labels_to_face, neighborhood_complex, wheels_and_triangles)
from errors import SizeError
from graphs import IntLabel, basic_graph, e_graph, el_graph, stable_kneser
from morse_sg2k import triangles_avoiding_one


def test_ind_of_c5():
    k = independence_complex(basic_graph("C", 5))
    assert f_vector(k).counts == (1, 5, 5)
    assert str(f_vector(k)) == "(1,5,5)"
    assert k.dimension == 1
    assert len(k.maximal_faces) == 5
    assert euler_characteristic(k) == 0


def test_ind_of_complete_graph_and_point():
    k3 = independence_complex(basic_graph("K", 3))
    assert f_vector(k3).counts == (1, 3)
    point = independence_complex(basic_graph("P", 1))
    assert point.num_faces == 2
    assert point.maximal_faces == ((0,),)


def test_faces_are_independent_and_sorted():
    g = e_graph(3)
    k = independence_complex(g)
    for face in k.all_faces():
        assert list(face) == sorted(face)
        for u in face:
            assert not g.adjacency[u] & set(face)
    assert k.num_faces == independence_count(g)


def test_independence_count_matches_complex():
    for g in (basic_graph("C", 7), basic_graph("P", 6), el_graph(3), stable_kneser(2, 3)):
        assert independence_complex(g).num_faces == independence_count(g), g.name


def test_polynomial_at_minus_one_is_reduced_euler():
    for g in (basic_graph("C", 5), basic_graph("C", 6), basic_graph("P", 4), el_graph(4),
              stable_kneser(2, 4)):
        k = independence_complex(g)
        assert independence_polynomial_at_minus_one(g) == -(euler_characteristic(k) - 1), g.name
    # an isolated vertex makes the complex a cone
    assert independence_polynomial_at_minus_one(basic_graph("P", 3), [0, 2]) == 0


def test_complex_from_maximal_faces():
    labels = [IntLabel(i) for i in range(1, 5)]
    sphere = complex_from_maximal_faces(labels, [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)])
    assert f_vector(sphere).counts == (1, 4, 6, 4)
    assert euler_characteristic(sphere) == 2
    simplex = complex_from_maximal_faces(labels, [(0, 1, 2, 3)])
    assert simplex.num_faces == 16
    assert simplex.contains((1, 3)) and not sphere.contains((0, 1, 2, 3))


def test_neighborhood_complex_of_c5():
    k = neighborhood_complex(basic_graph("C", 5))
    assert f_vector(k).counts == (1, 5, 5)


def test_cover_pairs():
    k = independence_complex(basic_graph("C", 5))
    pairs = list(cover_pairs(k))
    assert len(pairs) == 5 + 10
    for sigma, tau in pairs:
        assert len(tau) == len(sigma) + 1 and set(sigma) < set(tau)
    assert pairs[0] == ((), (0,))


def test_face_budget():
    try:
        independence_complex(basic_graph("C", 5), face_budget=5)
        assert False, "budget should stop the enumeration"
    except SizeError as e:
        assert e.budget == 5


def test_wheels_and_triangles_are_faces():
    k = 4
    g = stable_kneser(2, k)
    ind = independence_complex(g)
    faces = wheels_and_triangles(k)
    assert sum(1 for name in faces if name.startswith("W")) == k + 4
    for name, labels in faces.items():
        assert ind.contains(labels_to_face(g, labels)), name


def test_wheels_and_triangles_are_all_maximal_faces():
    expected = {2: 8, 3: 14, 4: 24, 5: 39, 6: 60, 7: 88, 8: 124}
    for k, count in expected.items():
        g = stable_kneser(2, k)
        claimed = {labels_to_face(g, labels) for labels in wheels_and_triangles(k).values()}
        assert len(claimed) == count, k
        assert set(independence_complex(g).maximal_faces) == claimed, k


def test_stable_triangles_avoiding_one():
    assert triangles_avoiding_one(3) == [(2, 4, 6), (2, 4, 7), (2, 5, 7), (3, 5, 7)]


if __name__ == "__main__":
    tests = [(name, fn) for name, fn in sorted(globals().items())
             if name.startswith("test_") and callable(fn)]
    failed = 0
    for name, fn in tests:
        try:
            fn()
            print(f"✅ {name}")
        except Exception as e:
            failed += 1
            print(f"❌ {name}: {e!r}")
    print(f"\n{len(tests) - failed}/{len(tests)} passed")
    sys.exit(1 if failed else 0)
