"""
Test script for the avoidability search, the brute-force oracle and Rado numbers
Run directly (python test_pr_search.py) or collect with pytest
"""

import sys
import traceback

from cnf_export import coloring_to_model, export_cnf, random_models, validate_model
from pattern_engine import Coloring, Window, enumerate_solutions, find_monochromatic
from pattern_factory import catalog_examples, parse_pattern
from pr_search import (
    brute_force_decide,
    build_tuple_index,
    decide,
    make_window,
    pinned_position,
    rado_number,
    search_index,
    split_prefixes,
)
from utils import GuardExceededError, ValidationError


def _same_outcome(a, b):
    assert a.avoidable == b.avoidable, (a.pattern, a.window)
    if a.avoidable:
        assert a.coloring.colors == b.coloring.colors, (a.pattern, a.window)


def test_decide_schur_examples():
    outcome = decide("schur:add", 2, 4)
    assert outcome.verdict == "Avoidable"
    assert outcome.coloring.classes() == [[1, 4], [2, 3]]
    assert find_monochromatic(outcome.coloring, parse_pattern("schur:add")) is None
    assert decide("schur:add", 2, 5).verdict == "Unavoidable"
    assert decide("ap:3", 1, 3).verdict == "Unavoidable"
    assert decide("ap:3", 2, 8).avoidable


def test_decide_matches_brute_force_on_schur():
    for n in range(1, 13):
        _same_outcome(decide("schur:add", 2, n), brute_force_decide("schur:add", 2, n))


def test_oracle_equivalence_on_catalog():
    for name in catalog_examples():
        for n in range(1, 13):
            _same_outcome(decide(name, 2, n), brute_force_decide(name, 2, n))
        for n in range(1, 9):
            _same_outcome(decide(name, 3, n), brute_force_decide(name, 3, n))


def test_oracle_equivalence_in_z_mode():
    for name in ("schur:add", "moreira", "ap:3"):
        for n in range(1, 4):
            a = decide(name, 2, n, domain="z")
            b = brute_force_decide(name, 2, n, domain="z")
            _same_outcome(a, b)
            assert a.window.exclude_zero


def test_rado_regressions():
    schur = rado_number("schur:add", 2, 30)
    assert schur.n_star == 5 and not schur.bound_exceeded
    assert schur.certificate.window == Window(1, 4)
    assert find_monochromatic(schur.certificate, parse_pattern("schur:add")) is None
    assert brute_force_decide("schur:add", 2, 4).avoidable
    assert not brute_force_decide("schur:add", 2, 5).avoidable

    ap3 = rado_number("ap:3", 2, 30)
    assert ap3.n_star == 9
    assert find_monochromatic(ap3.certificate, parse_pattern("ap:3")) is None
    assert brute_force_decide("ap:3", 2, 8).avoidable
    assert not brute_force_decide("ap:3", 2, 9).avoidable

    assert rado_number("ap:2", 2, 10).n_star == 3


def test_rado_sweep_and_bound():
    result = rado_number("schur:add", 2, 8, sweep=True)
    assert result.n_star == 5
    assert [v for _, v in result.history] == ["Avoidable"] * 4 + ["Unavoidable"] * 4
    short = rado_number("ap:3", 2, 6)
    assert short.bound_exceeded and short.n_star is None
    assert short.certificate.window == Window(1, 6)
    assert short.to_dict()["bound_exceeded"] is True


def test_determinism_across_workers():
    for name, n in (("ap:3", 8), ("schur:add", 4), ("ap:3", 9)):
        outcomes = [decide(name, 2, n, workers=w, split_depth=3) for w in (1, 2, 8)]
        for other in outcomes[1:]:
            assert other.to_dict() == outcomes[0].to_dict(), name
    rados = [rado_number("ap:3", 2, 12, workers=w, split_depth=4).to_dict() for w in (1, 2, 8)]
    assert rados[0] == rados[1] == rados[2]


def test_split_depth_does_not_change_the_witness():
    base = decide("ap:3", 2, 8, split_depth=1)
    for depth in (2, 5, 8, 20):
        assert decide("ap:3", 2, 8, split_depth=depth).coloring == base.coloring


def test_star_one_one_matches_shifted_products():
    # x ⊛_{1,1} y = (x+1)(y+1) - 1, so i -> i+1 carries one search onto the other
    mul = parse_pattern("schur:mul")
    for n in range(1, 21):
        star = decide("schur:star:1,1", 2, n)
        window = Window(2, n + 1)
        index = build_tuple_index(enumerate_solutions(mul, window), window)
        colors, _ = search_index(index, 2)
        assert star.avoidable == (colors is not None), n
        if colors is not None:
            assert list(star.coloring.colors) == [int(c) for c in colors], n


def test_prefix_split_is_lexicographic():
    window = Window(1, 6)
    index = build_tuple_index(enumerate_solutions(parse_pattern("schur:add"), window), window)
    prefixes, _ = split_prefixes(index, 2, 3)
    assert prefixes == sorted(prefixes)
    assert all(p[0] == 0 for p in prefixes)
    assert (0, 1, 1) in prefixes and (0, 0, 0) not in prefixes


def test_guards_and_validation():
    try:
        brute_force_decide("ap:3", 2, 25)
    except GuardExceededError:
        pass
    else:
        raise AssertionError("2^25 colorings must be refused")
    for call in (lambda: make_window(0), lambda: make_window(5, "negative"),
                 lambda: decide("ap:3", 0, 5), lambda: rado_number("ap:3", 2, 0)):
        try:
            call()
        except ValidationError:
            continue
        raise AssertionError("expected ValidationError")


def _assert_every_coloring_fails(pattern, n, count=100):
    doc = export_cnf(pattern, 2, n)
    for model in random_models(doc, count, seed=n):
        assert not validate_model(doc, model).accepted, (doc.pattern, n)


def test_headline_equation_certificate():
    pattern = parse_pattern("glue:poly=d^2:star=1,1")
    result = rado_number(pattern, 2, 24)
    assert result.certificate is not None
    assert find_monochromatic(result.certificate, pattern) is None
    if result.n_star is not None:
        assert result.certificate.window == Window(1, result.n_star - 1)
        assert not decide(pattern, 2, result.n_star).avoidable
        _assert_every_coloring_fails(pattern, result.n_star)
    else:
        doc = export_cnf(pattern, 2, 24)
        assert validate_model(doc, coloring_to_model(doc, result.certificate)).accepted


def test_rado_numbers_reject_random_colorings_on_catalog():
    for name in catalog_examples():
        result = rado_number(name, 2, 12)
        if result.n_star is None:
            continue
        if result.n_star > 1:
            doc = export_cnf(name, 2, result.n_star - 1)
            assert validate_model(doc, coloring_to_model(doc, result.certificate)).accepted, name
        _assert_every_coloring_fails(name, result.n_star)


def test_z_mode_pins_the_color_of_one():
    for n in range(1, 4):
        window = make_window(n, "z")
        assert window.value_at(pinned_position(window)) == 1
        for name in catalog_examples():
            a = decide(name, 2, n, domain="z")
            b = brute_force_decide(name, 2, n, domain="z")
            _same_outcome(a, b)
            if a.avoidable:
                assert a.coloring.color_of(1) == 0, (name, n)
    assert pinned_position(Window(1, 6)) == 0
    assert pinned_position(Window(3, 6)) == 0
    assert pinned_position(Window(-2, 5)) == 3


def test_unavoidable_single_color():
    for name in catalog_examples():
        pattern = parse_pattern(name)
        n = 10
        if enumerate_solutions(pattern, Window(1, n)):
            assert not decide(pattern, 1, n).avoidable, name
        else:
            assert decide(pattern, 1, n).coloring == Coloring.monochrome(Window(1, n))


if __name__ == "__main__":
    print("\n" + "=" * 60)
    print("PR SEARCH - TEST")
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
