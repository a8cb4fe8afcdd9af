#!/usr/bin/env python3
"""
Prediction and verification tests
Homotopy-type predictions, expected Morse counts, verification sweeps over
the small families and the side claims about SG_{n,k}.
"""

import json
import os
import sys
import tempfile

sys.path.append(os.path.dirname(os.path.abspath(__file__)))

from errors import ParameterError
from graphs import basic_graph, is_isomorphic_small
from theorems import (CONTRACTIBLE, INCOMPLETE, MATCH, MISMATCH, SKIPPED, ChannelVerdict, Prediction,
                      VerificationReport, VerifySettings, check_chromatic, check_neighborhood,
                      check_sg_structure, check_vertex_critical, complex_id, family_graph,
                      formula_identity, parity_case, predict_family, predict_ind_cycle, predict_ind_e,
                      predict_ind_el, predict_ind_path, predict_ind_sg2, predict_ind_small_sg,
                      predict_morse_counts, sg2_sphere_count, sweep_exit_code, verify_family,
                      verify_instance)


def test_prediction_text():
    assert str(CONTRACTIBLE) == "contractible"
    assert str(Prediction(((1, 1),))) == "S^1"
    assert str(Prediction(((1, 2),))) == "2xS^1"
    try:
        Prediction(((1, 0),))
        assert False, "zero spheres"
    except ParameterError:
        pass


def test_cycle_and_path_predictions():
    assert predict_ind_cycle(3).expected_betti() == {0: 2}
    assert predict_ind_cycle(5).expected_betti() == {1: 1}
    assert predict_ind_cycle(6).expected_betti() == {1: 2}
    assert predict_ind_cycle(7).expected_betti() == {1: 1}
    assert predict_ind_path(4).contractible
    assert predict_ind_path(8).expected_betti() == {2: 1}
    assert predict_ind_path(9).expected_betti() == {2: 1}


def test_el_and_sg2_predictions():
    assert predict_ind_el(0).expected_betti() == {0: 1}
    assert predict_ind_el(2).contractible
    assert predict_ind_el(5).expected_betti() == {2: 1}
    assert predict_ind_sg2(2).expected_betti() == {1: 2}
    assert predict_ind_sg2(3).expected_betti() == {1: 1}
    assert [sg2_sphere_count(k) for k in range(4, 9)] == [3, 11, 24, 43, 69]


def test_formula_identity():
    for k in range(3, 65):
        assert formula_identity(k), k


def test_parity_cases():
    for n in range(3, 200):
        tag, k = parity_case(n)
        assert tag in ("4k+1", "4k+3", "6k", "6k+2", "6k+4"), n
    assert parity_case(9) == ("4k+1", 2)
    assert parity_case(10) == ("6k+4", 1)
    assert predict_ind_e(5).expected_betti() == {3: 3}
    assert predict_ind_e(8).expected_betti() == {3: 2}
    try:
        parity_case(2)
        assert False, "n=2 has no case"
    except ParameterError:
        pass


def test_predicted_morse_counts():
    assert predict_morse_counts("el", 5).critical_counts == {2: 1}
    assert predict_morse_counts("el", 3).critical_counts == {}
    assert predict_morse_counts("path", 8).critical_counts == {2: 1}
    assert predict_morse_counts("cycle", 6).critical_counts == {1: 2}
    assert predict_morse_counts("sg2", 2).critical_counts == {1: 2}
    assert predict_morse_counts("sg2", 6).critical_counts == {2: 24}
    assert predict_morse_counts("e", 9).critical_counts == {5: 3}
    try:
        predict_morse_counts("sgn2", 3)
        assert False, "no construction for sgn2"
    except ParameterError:
        pass


def test_complex_ids():
    assert complex_id("e", 7) == "ind-e-n7"
    assert complex_id("sg2", 4) == "ind-sg2-k4"
    assert predict_family("e", 2) is None
    assert predict_family("sgn2", 4) is None


def test_small_sweeps_match():
    for family, values in (("cycle", range(3, 13)), ("path", range(1, 16)), ("el", range(0, 11))):
        reports = verify_family(family, values)
        bad = [(r.complex_id, r.to_dict()["channels"]) for r in reports if r.verdict != MATCH]
        assert not bad, bad
        assert sweep_exit_code(reports) == 0


def test_small_sg_predictions():
    assert predict_ind_small_sg(1, 0).expected_betti() == {0: 1}
    assert predict_ind_small_sg(1, 4).expected_betti() == {0: 5}
    assert predict_ind_small_sg(5, 0).expected_betti() == {0: 1}
    assert predict_ind_small_sg(3, 1) == predict_ind_cycle(7)
    assert predict_family("sg1k", 3) == predict_ind_small_sg(1, 3)
    assert predict_morse_counts("sg1k", 3).critical_counts == {0: 4}
    assert predict_morse_counts("sgn0", 6).critical_counts == {0: 1}
    assert predict_morse_counts("sgn1", 4).critical_counts == {2: 2}
    for n, k in ((2, 2), (0, 1), (1, -1)):
        try:
            predict_ind_small_sg(n, k)
            assert False, (n, k)
        except ParameterError:
            pass


def test_small_sg_graphs():
    assert family_graph("sg1k", 3).num_vertices == 5
    assert family_graph("sg1k", 3).num_edges == 10
    k2 = family_graph("sgn0", 4)
    assert k2.num_vertices == 2 and k2.num_edges == 1
    for n in range(1, 7):
        assert is_isomorphic_small(family_graph("sgn1", n), basic_graph("C", 2 * n + 1)), n
    assert complex_id("sgn1", 3) == "ind-sgn1-n3"


def test_small_sg_sweeps_match():
    for family, values in (("sg1k", range(0, 7)), ("sgn0", range(1, 5)), ("sgn1", range(1, 9))):
        reports = verify_family(family, values)
        bad = [(r.complex_id, r.to_dict()["channels"]) for r in reports if r.verdict != MATCH]
        assert not bad, bad
        assert all(r.morse_source == "search" for r in reports)
        assert sweep_exit_code(reports) == 0
    sg13 = verify_instance("sg1k", 3)
    assert sg13.homology.nonzero_betti() == {0: 4}


def test_sg2_sweep():
    reports = verify_family("sg2", range(2, 7))
    for report in reports:
        assert report.verdict == MATCH, report.to_dict()
    assert reports[0].morse_source == "search"
    assert reports[1].morse_source == "sg2k"
    assert reports[4].homology.nonzero_betti() == {2: 24}
    k3 = reports[1].channels["morse"]
    assert k3.status == MATCH and k3.reasons == [], k3.reasons
    assert reports[1].morse.critical_counts.get(1) == 1


def test_e_sweep():
    reports = verify_family("e", range(3, 6))
    for report in reports:
        assert report.verdict == MATCH, report.to_dict()
    assert len(reports[0].findings) == 2


def test_e_sweep_morse_only():
    reports = verify_family("e", range(8, 11), channels=("morse",))
    for report in reports:
        assert report.verdict == MATCH, report.to_dict()
        assert "homology" not in report.channels


def test_exploratory_instances():
    report = verify_instance("sgn2", 3)
    assert report.verdict == "exploratory"
    assert report.channels["homology"].status == SKIPPED
    assert report.channels["morse"].status == SKIPPED
    assert report.channels["invariants"].status == MATCH
    e2 = verify_instance("e", 2)
    assert e2.verdict == "exploratory" and e2.homology is not None


def test_homology_cache():
    with tempfile.TemporaryDirectory() as cache_dir:
        first = verify_instance("cycle", 6, channels=("homology",), cache_dir=cache_dir)
        assert first.verdict == MATCH
        path = os.path.join(cache_dir, "ind-cycle-n6.json")
        with open(path, encoding="utf-8") as f:
            data = json.load(f)
        data["betti"]["1"] = 5
        with open(path, "w", encoding="utf-8") as f:
            json.dump(data, f)
        assert verify_instance("cycle", 6, channels=("homology",), cache_dir=cache_dir).verdict == MISMATCH
        again = verify_instance("cycle", 6, channels=("homology",), cache_dir=cache_dir, force=True)
        assert again.verdict == MATCH


def test_budget_exhaustion_is_skipped():
    # EL_20 has 42 vertices, above what the search accepts
    report = verify_instance("el", 20, channels=("morse",))
    assert report.budget_exhausted
    assert report.channels["morse"].status == SKIPPED
    assert sweep_exit_code([report]) == 3


def test_face_budget_never_passes_silently():
    # Ind(C_12) has 322 faces
    report = verify_instance("cycle", 12, settings=VerifySettings(face_budget=50))
    assert report.num_faces == 322
    assert report.budget_exhausted
    assert report.channels["homology"].status == SKIPPED
    assert report.verdict == INCOMPLETE
    assert any("face budget" in f for f in report.findings)
    assert sweep_exit_code([report]) == 3
    morse_only = verify_instance("cycle", 12, channels=("morse",), settings=VerifySettings(face_budget=50))
    assert not morse_only.budget_exhausted
    assert morse_only.verdict == MATCH


def test_sweep_exit_code_precedence():
    bad = VerificationReport("cycle", 5, "ind-cycle-n5", predict_ind_cycle(5),
                             channels={"morse": ChannelVerdict(MISMATCH, ["forced"])})
    tired = VerificationReport("cycle", 6, "ind-cycle-n6", predict_ind_cycle(6), budget_exhausted=True)
    assert sweep_exit_code([tired]) == 3
    assert sweep_exit_code([bad, tired]) == 1
    assert sweep_exit_code([]) == 0


def test_bad_sweep_arguments():
    for family, channels in (("zz", ("morse",)), ("cycle", ("colour",))):
        try:
            verify_family(family, [5], channels)
            assert False, (family, channels)
        except ParameterError:
            pass


def test_side_claims():
    for n, k in ((1, 1), (2, 1), (2, 2), (3, 1)):
        assert check_chromatic(n, k).ok, (n, k)
    assert check_vertex_critical(2, 1).ok
    assert check_vertex_critical(2, 2).ok
    assert check_neighborhood(2, 1).ok
    assert check_neighborhood(2, 2).ok


def test_sg_structure():
    for n in (4, 5):
        checks = check_sg_structure(n)
        failed = [(c.name, c.detail) for c in checks if not c.ok]
        assert not failed, (n, failed)
        assert len(checks) == 6


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
