"""
Test script for the (l,k)-symmetric algebra
Run directly (python test_symmetric_algebra.py) or collect with pytest
"""

import itertools
import math
import random
import sys
import traceback

import numpy as np

from symmetric_algebra import (
    AffineShift,
    IntPolynomial,
    StarParams,
    check_symmetric,
    elem_sym,
    elem_sym_all,
    find_asymmetry,
    fp_products,
    fs_set,
    gsym,
    h_iso,
    odot,
    odot_fold,
    oplus,
    sigma_set,
    star,
    star_factorizations,
    star_fold,
    star_translate,
    verify_identities,
    verify_ring_isomorphism,
    verify_sigma_translate,
)
from utils import ArithmeticOverflowError, DomainError, ValidationError


def test_star_values():
    assert star(StarParams(1, 1), 2, 3) == 11
    assert star(StarParams(1, 1), 5, 0) == 5
    assert star(StarParams(2, 3), 1, 4) == 26
    p = StarParams(2, 3)
    assert p.lift(26) == p.lift(1) * p.lift(4)


def test_star_params_validation():
    for l, k in [(0, 1), (3, 2), (4, 3)]:
        try:
            StarParams(l, k)
        except ValidationError:
            continue
        raise AssertionError(f"StarParams({l},{k}) should be rejected")
    assert StarParams(2, 2).constant == 1


def test_identity_and_absorbing():
    p = StarParams(2, 3)
    assert p.has_identity and p.identity == -1
    assert all(star(p, a, p.identity) == a for a in range(-20, 21))
    q = StarParams(1, 1)
    assert q.absorbing == -1
    assert all(star(q, a, -1) == -1 for a in range(-20, 21))
    assert not StarParams(2, 2).has_identity
    assert StarParams(2, 2).identity is None

    shift = AffineShift(3)
    assert shift.identity_add == 3 and shift.identity_mul == 4 and shift.absorbing == 3
    assert oplus(3, 5, shift.neg(5)) == 3


def test_star_is_elementwise_on_arrays():
    p = StarParams(3, 4)
    a = np.arange(-5, 6, dtype=np.int64)
    b = a[::-1].copy()
    c = star(p, a, b)
    assert (p.lift(c) == p.lift(a) * p.lift(b)).all()


def test_fixed_width_overflow():
    try:
        star(StarParams(1, 1), 2 ** 62, 4, fixed_width=True)
    except ArithmeticOverflowError as e:
        assert "star" in str(e)
    else:
        raise AssertionError("expected ArithmeticOverflowError")
    # same call is exact on Python integers
    assert star(StarParams(1, 1), 2 ** 62, 4) == 2 ** 62 * 4 + 2 ** 62 + 4


def test_star_fold_and_gsym():
    assert star_fold(StarParams(1, 1), [2, 3]) == 11
    assert star_fold(StarParams(1, 1), [7]) == 7
    assert star_fold(StarParams(2, 3), [1, 4]) == 26
    assert gsym(StarParams(1, 1), [2, 3]) == 11
    assert gsym(StarParams(2, 3), [1, 4]) == 26
    assert gsym(StarParams(3, 4), [9]) == 9
    p = StarParams(2, 3)
    xs = [5, -2, 7, 0, 11, -9]
    assert gsym(p, xs) == star_fold(p, xs)
    try:
        star_fold(p, [])
    except DomainError:
        pass
    else:
        raise AssertionError("empty fold must raise DomainError")


def test_elementary_symmetric():
    assert elem_sym(2, [1, 2, 3]) == 11
    assert elem_sym(3, [1, 2, 3]) == 6
    assert elem_sym(1, [42]) == 42
    assert elem_sym_all([1, 2, 3]) == [6, 11, 6]
    big = [10 ** 12 + i for i in range(6)]
    assert elem_sym(6, big) == int(np.prod(np.array(big, dtype=object)))
    for j in (0, 4):
        try:
            elem_sym(j, [1, 2, 3])
        except DomainError:
            continue
        raise AssertionError(f"j={j} should be out of range")


def test_symmetric_functions_ignore_order():
    rng = random.Random(11)
    params = [StarParams(l, k) for l, k in ((1, 1), (1, 0), (2, 3), (1, -2), (3, -2), (2, -1), (3, 1))]
    for n in range(1, 6):
        for _ in range(4):
            xs = [rng.randint(-9, 9) for _ in range(n)]
            e = [sum(math.prod(c) for c in itertools.combinations(xs, j)) for j in range(1, n + 1)]
            assert elem_sym_all(xs) == e, xs
            for p in params:
                g = gsym(p, xs)
                assert p.l * g + p.k == math.prod(p.lift(x) for x in xs), (p, xs)
                fold = star_fold(p, xs)
                assert fold == g, (p, xs)
                for perm in itertools.permutations(xs):
                    assert gsym(p, perm) == g, (p, perm)
                    assert star_fold(p, perm) == fold, (p, perm)
            for perm in itertools.permutations(xs):
                assert [elem_sym(j, perm) for j in range(1, n + 1)] == e, perm


def test_shifted_ring():
    assert oplus(3, 5, 7) == 9
    assert oplus(3, 8, 3) == 8
    assert odot(0, 4, 5) == 20
    assert odot(1, 2, 3) == 3
    assert odot(3, 7, 8) == 23
    assert odot_fold(3, [7, 8]) == 23
    assert h_iso(3, 20) == 23 == odot(3, h_iso(3, 4), h_iso(3, 5))
    assert h_iso(3, 23, "inverse") == 20
    assert h_iso(0, 17) == 17
    try:
        h_iso(1, 2, "sideways")
    except ValidationError:
        pass
    else:
        raise AssertionError("unknown direction must raise")


def test_symmetry_checker():
    assert check_symmetric(2, lambda xs: xs[0] + xs[1] + xs[0] * xs[1], 200, 100)
    assert not check_symmetric(2, lambda xs: xs[0] - xs[1], 50, 100)
    xs, perm = find_asymmetry(2, lambda v: v[0] - v[1], 50, 100)
    assert xs[0] != xs[1] and sorted(perm) == [0, 1]
    assert check_symmetric(3, lambda v: gsym(StarParams(2, 3), v), 200, 50, seed=4)


def test_sigma_and_fs_sets():
    assert sigma_set(0, [2, 3], 2) == {2, 3, 6}
    assert sigma_set(1, [2, 3], 2) == {2, 3}
    assert sigma_set(1, [3, 5], 2) == {3, 5, 9}
    assert sigma_set(1, [3, 5], 1) == {3, 5}
    assert fp_products([2, 3, 5], 3) == {2, 3, 5, 6, 10, 15, 30}
    assert fs_set(0, [1, 3], 2) == {1, 3, 4}
    assert fs_set(2, [1, 3], 2) == {1, 2, 3}
    assert fs_set(0, [9], 1) == {9}
    for call in (lambda: sigma_set(0, [], 1), lambda: fs_set(0, [1, 2], 3),
                 lambda: fs_set(0, [2, 2], 1, distinct=True)):
        try:
            call()
        except DomainError:
            continue
        raise AssertionError("expected DomainError")


def test_star_translate_and_factorizations():
    p = StarParams(1, 1)
    assert star_translate(p, 2, [1, 5]) == [star(p, 2, 1), star(p, 2, 5)] == [5, 17]
    q = StarParams(3, 4)
    assert star_translate(q, -2, [0, 7, -3]) == [star(q, -2, v) for v in (0, 7, -3)]

    assert star_factorizations(p, 11, 2, 1, 20) == [(1, 5), (2, 3)]
    assert star_factorizations(p, -1, 2, -10, 10) == []
    for ys in star_factorizations(p, 23, 3, 1, 30):
        assert list(ys) == sorted(ys)
        assert star_fold(p, ys) == 23


def test_polynomial_parsing():
    square = IntPolynomial.parse("d^2")
    assert square.coefficients == (0, 1) and square.zero_constant
    assert square.to_text() == "d^2" and square(7) == 49
    cubic = IntPolynomial.parse("3d^3-d")
    assert cubic.to_text() == "3*d^3-d" and cubic(2) == 22 and cubic.degree == 3
    assert IntPolynomial.parse("2*d").to_text() == "2*d"
    assert not IntPolynomial.parse("d+1").zero_constant
    try:
        IntPolynomial.parse("d/2")
    except ValidationError:
        pass
    else:
        raise AssertionError("fractional coefficients must be rejected")


def test_identity_suite_small():
    report = verify_identities([(2, 3), (1, -4)], samples=5000, seed=7, bound=1000, fold_max=5)
    assert report["passed"], report
    assert [r["l"] for r in report["results"]] == [2, 1]
    assert all(r["product_failures"] == 0 for r in report["results"])
    # same seed, same report
    assert verify_identities([(2, 3)], samples=500, seed=3, bound=50) == \
        verify_identities([(2, 3)], samples=500, seed=3, bound=50)


def test_identity_suite_exact_objects():
    # wide bound forces the object-dtype path
    report = verify_identities([(3, 4)], samples=200, seed=1, bound=10 ** 12, fold_max=3)
    assert report["passed"]


def test_ring_isomorphism_suite():
    report = verify_ring_isomorphism(range(-3, 4), -20, 20)
    assert report["passed"]
    assert len(report["results"]) == 7


def test_sigma_translate_suite():
    report = verify_sigma_translate(count=100, seed=5)
    assert report["passed"] and report["checks"] == 700


if __name__ == "__main__":
    print("\n" + "=" * 60)
    print("SYMMETRIC ALGEBRA - TEST")
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
