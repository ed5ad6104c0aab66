"""
Test script for the largeness detectors and transfer experiments
Run directly (python test_largeness_lab.py) or collect with pytest
"""

import sys
import traceback

import numpy as np

from largeness_lab import (
    FiniteSetWindow,
    LargenessParams,
    analyze_additive,
    analyze_multiplicative,
    analyze_star,
    check_duality,
    check_monotonicity,
    check_translation_invariance,
    pullback_compare,
    run_ap_content_experiment,
    run_transfer_corpus,
    star_translate_largeness,
)
from pattern_engine import Window
from symmetric_algebra import AffineShift, StarParams
from utils import ValidationError


def _blocks(hi):
    """∪ [8^i, 4·8^i) on [1, hi]; multiplicatively thick for m = 3."""
    return FiniteSetWindow.from_predicate(
        Window(1, hi), lambda v: any(8 ** i <= v < 4 * 8 ** i for i in range(8))
    )


def test_set_window_basics():
    A = FiniteSetWindow.from_members(Window(0, 10), [1, 2, 3, 7, 15])
    assert A.members() == [1, 2, 3, 7]
    assert A.to_rle() == [[1, 3], [7, 7]]
    assert FiniteSetWindow.from_json(A.to_json()).members() == A.members()
    assert A.shifted(5).members() == [6, 7, 8, 12]
    assert A.complement().members() == [0, 4, 5, 6, 8, 9, 10]
    assert A.contains(7) and not A.contains(8) and not A.contains(99)
    for bad in ({"window": {"lo": 0}}, {"window": {"lo": 0, "hi": 5}, "intervals": [[4, 9]]}):
        try:
            FiniteSetWindow.from_json(bad)
        except ValidationError:
            continue
        raise AssertionError(f"{bad} should be rejected")


def test_additive_examples():
    evens = FiniteSetWindow.from_predicate(Window(0, 100), lambda v: v % 2 == 0)
    report = analyze_additive(evens, LargenessParams(gap=2, run=8))
    assert report.syndetic and not report.thick and report.pws

    A = FiniteSetWindow.from_predicate(Window(0, 100), lambda v: 10 <= v <= 40 or 60 <= v <= 90)
    assert analyze_additive(A, LargenessParams(gap=10, run=30)).thick
    report = analyze_additive(A, LargenessParams(gap=10, run=30))
    assert not report.syndetic
    assert report.witnesses["syndetic"]["counterexample"] == [0, 9]
    assert report.witnesses["thick"]["run"] == [10, 39]

    empty = FiniteSetWindow.from_members(Window(0, 100), [])
    report = analyze_additive(empty, LargenessParams())
    assert (report.thick, report.syndetic, report.pws) == (False, False, False)


def test_additive_short_windows():
    A = FiniteSetWindow.from_members(Window(0, 2), [1])
    report = analyze_additive(A, LargenessParams(gap=5, run=4))
    assert report.syndetic and report.witnesses["syndetic"] == {"vacuous": True}
    assert not report.thick and not report.pws


def test_multiplicative_examples():
    full = FiniteSetWindow.full(Window(1, 120))
    report = analyze_multiplicative(full, LargenessParams(gap=2, run=8, translate_bound=3))
    assert report.thick and report.syndetic and report.pws
    assert report.interior == [1, 40]

    powers = FiniteSetWindow.from_members(Window(1, 1024), [2 ** i for i in range(11)])
    report = analyze_multiplicative(powers, LargenessParams(gap=2, run=8, translate_bound=3))
    assert not report.syndetic
    assert report.witnesses["syndetic"]["counterexample"] == 3

    report = analyze_multiplicative(_blocks(4096), LargenessParams(gap=2, run=8, translate_bound=3))
    assert report.thick
    x = report.witnesses["thick"]["x"]
    assert all(_blocks(4096).contains(f * x) for f in (1, 2, 3))

    try:
        analyze_multiplicative(FiniteSetWindow.full(Window(0, 10)), LargenessParams())
    except ValidationError:
        pass
    else:
        raise AssertionError("multiplicative analysis needs a positive window")


def test_star_examples():
    odot_1 = AffineShift(1).star_params
    full = FiniteSetWindow.full(Window(-20, 60))
    report = analyze_star(full, odot_1, LargenessParams(gap=2, run=8, translate_bound=3))
    assert report.thick and report.syndetic and report.pws
    assert report.experiment["excluded"] == [1]

    # singleton at the absorbing element is never thick
    for t in (-2, 0, 3):
        single = FiniteSetWindow.from_members(Window(t - 10, t + 10), [t])
        report = analyze_star(single, AffineShift(t).star_params, LargenessParams(gap=2, run=2, translate_bound=3))
        assert not report.thick

    try:
        analyze_star(full, StarParams(2, 2), LargenessParams())
    except ValidationError:
        pass
    else:
        raise AssertionError("⊛_{2,2} has no identity")


def test_pullback_of_thick_blocks():
    params = LargenessParams(gap=2, run=8, translate_bound=3)
    B = _blocks(4096)
    result = pullback_compare(B, 1, params)
    assert result.agreement and result.multiplicative.thick and result.shifted.thick
    assert result.shifted.witnesses["thick"]["x"] == result.multiplicative.witnesses["thick"]["x"] + 1

    result = pullback_compare(B, 5, params)
    assert result.agreement and result.translation_invariant
    full = pullback_compare(FiniteSetWindow.full(Window(1, 300)), -4, params)
    assert full.agreement


def test_duality_and_invariance():
    rng = np.random.default_rng(11)
    for _ in range(20):
        A = FiniteSetWindow.random(Window(-30, 90), 0.6, rng)
        for g in (1, 2, 3, 5):
            assert check_duality(A, g)
        assert check_translation_invariance(A, 17, LargenessParams(gap=3, run=6))
    try:
        check_duality(FiniteSetWindow.full(Window(0, 1)), 4)
    except ValidationError:
        pass
    else:
        raise AssertionError("duality needs windows at least g wide")


def test_monotonicity_along_chain():
    rng = np.random.default_rng(2)
    window = Window(1, 600)
    A = FiniteSetWindow.random(window, 0.2, rng)
    chain = [A]
    for _ in range(4):
        chain.append(chain[-1].union(FiniteSetWindow.random(window, 0.3, rng)))
    params = LargenessParams(gap=4, run=6, translate_bound=3)
    assert check_monotonicity(chain, analyze_additive, params)
    assert check_monotonicity(chain, analyze_multiplicative, params)


def test_star_translate_largeness():
    result = star_translate_largeness(FiniteSetWindow.full(Window(0, 50)), StarParams(1, 1), 1,
                                      LargenessParams(gap=2, run=4))
    assert result["scale"] == 2 and result["window"] == [1, 101]
    assert result["A"]["syndetic"] and result["n*A"]["syndetic"]


def test_transfer_corpus_small():
    result = run_transfer_corpus(range(-2, 3), count=3, width=64, seed=4)
    assert result["passed"]
    assert [row["t"] for row in result["rows"]] == [-2, -1, 0, 1, 2]
    assert result == run_transfer_corpus(range(-2, 3), count=3, width=64, seed=4)


def test_ap_content_experiment_reports():
    result = run_ap_content_experiment(count=5, width=256, t=2, seed=1)
    assert result["tested"] == 5
    assert result["ap_ok"] + len(result["misses"]) == result["pws_true"]


def test_report_rows():
    A = FiniteSetWindow.from_members(Window(0, 30), range(5, 20))
    rows = analyze_additive(A, LargenessParams(gap=3, run=10)).to_rows("A")
    assert [r["verdict"] for r in rows] == ["thick", "syndetic", "pws"]
    assert all(r["set"] == "A" and r["param_g"] == 3 for r in rows)


if __name__ == "__main__":
    print("\n" + "=" * 60)
    print("LARGENESS LAB - TEST")
    print("=" * 60)

    tests = [(name, fn) for name, fn in list(globals().items()) if name.startswith("test_") and callable(fn)]
    results = []
    for name, fn in tests:
        try:
            fn()
            results.append((name, True))
        except Exception as e:
            print(f"✗ Error in {name}: {e}")
            traceback.print_exc()
            results.append((name, False))

    print("\n" + "=" * 60)
    print("TEST SUMMARY")
    print("=" * 60)
    for name, success in results:
        print(f"{'✓ PASS' if success else '✗ FAIL'} - {name}")
    passed = sum(1 for _, ok in results if ok)
    print(f"\nTotal: {passed}/{len(results)} tests passed")
    print("=" * 60 + "\n")
    sys.exit(0 if passed == len(results) else 1)
