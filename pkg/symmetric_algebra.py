"""
Exact integer algebra of the (l,k)-symmetric operation and its relatives.

    a ⊛_{l,k} b = c  <=>  (l·a + k)(l·b + k) = l·c + k

Shifted ring operations ⊕_t / ⊙_t, the isomorphism h_t(x) = x + t, elementary
symmetric polynomials, the (l,k)-symmetric polynomial and finite FS/FP/σ_t sets.

Arithmetic is arbitrary precision by default. Functions that take
``fixed_width=True`` check every intermediate against the int64 range and raise
ArithmeticOverflowError instead of wrapping. The binary operations are written
with plain arithmetic operators so they also evaluate elementwise on numpy arrays.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from functools import lru_cache, reduce

import numpy as np
from sympy import divisors
from sympy.parsing.sympy_parser import (
    convert_xor,
    implicit_multiplication_application,
    parse_expr,
    standard_transformations,
)
import sympy

from utils import (
    INT64_MAX,
    DomainError,
    ValidationError,
    checked_add,
    checked_mul,
    log,
)

LOG_PREFIX = "[symmetric_algebra]"

_POLY_TRANSFORMS = standard_transformations + (convert_xor, implicit_multiplication_application)
_D = sympy.Symbol("d")


# ------------------------------
# Domain types
# ------------------------------
@dataclass(frozen=True)
class StarParams:
    """Parameters (l, k) of ⊛_{l,k}; closed on ℤ iff l | k(k-1)."""
    l: int
    k: int

    def __post_init__(self):
        if self.l == 0:
            raise ValidationError("l must be nonzero")
        if (self.k * (self.k - 1)) % self.l != 0:
            raise ValidationError(f"l={self.l} does not divide k(k-1)={self.k * (self.k - 1)}")

    @property
    def constant(self) -> int:
        return (self.k * self.k - self.k) // self.l

    @property
    def has_identity(self) -> bool:
        return (self.k - 1) % self.l == 0

    @property
    def identity(self):
        """(1-k)/l when l | (k-1), else None."""
        return (1 - self.k) // self.l if self.has_identity else None

    @property
    def absorbing(self):
        """The element a with l·a + k = 0, when it is an integer."""
        return -self.k // self.l if self.k % self.l == 0 else None

    def lift(self, a):
        return self.l * a + self.k

    def __str__(self):
        return f"{self.l},{self.k}"


@dataclass(frozen=True)
class AffineShift:
    """The shift t behind ⊕_t (a+b-t) and ⊙_t (= ⊛_{1,-t})."""
    t: int

    @property
    def identity_add(self) -> int:
        return self.t

    def neg(self, a):
        return 2 * self.t - a

    @property
    def identity_mul(self) -> int:
        return self.t + 1

    @property
    def absorbing(self) -> int:
        return self.t

    @property
    def star_params(self) -> StarParams:
        return StarParams(1, -self.t)


@dataclass(frozen=True)
class IntPolynomial:
    """
    Univariate integer polynomial c_1·d + c_2·d² + ... + c_n·dⁿ (+ constant).

    Patterns built from the glue construction require ``zero_constant``.
    """
    coefficients: tuple
    constant: int = 0

    @property
    def zero_constant(self) -> bool:
        return self.constant == 0

    @property
    def degree(self) -> int:
        deg = 0
        for i, c in enumerate(self.coefficients, start=1):
            if c != 0:
                deg = i
        return deg

    def __call__(self, d: int, fixed_width: bool = False) -> int:
        acc = 0
        for c in reversed(self.coefficients):
            if fixed_width:
                acc = checked_add(checked_mul(acc, d, "polynomial"), c, "polynomial")
            else:
                acc = acc * d + c
        if fixed_width:
            return checked_add(checked_mul(acc, d, "polynomial"), self.constant, "polynomial")
        return acc * d + self.constant

    @classmethod
    def parse(cls, text: str) -> "IntPolynomial":
        """Parse text such as ``d^2``, ``3d^3-d`` or ``d**2 + 2*d``."""
        try:
            expr = parse_expr(text.strip(), local_dict={"d": _D}, transformations=_POLY_TRANSFORMS)
            poly = sympy.Poly(expr, _D)
        except Exception as e:
            raise ValidationError(f"Cannot parse polynomial {text!r}: {e}")
        coeffs = poly.all_coeffs()[::-1]  # constant first
        if any(not c.is_integer for c in coeffs):
            raise ValidationError(f"Polynomial {text!r} must have integer coefficients")
        values = [int(c) for c in coeffs]
        constant = values[0]
        rest = tuple(values[1:]) or (0,)
        return cls(rest, constant)

    def to_text(self) -> str:
        terms = []
        for power in range(len(self.coefficients), 0, -1):
            c = self.coefficients[power - 1]
            if c == 0:
                continue
            mono = "d" if power == 1 else f"d^{power}"
            if c == 1:
                body = mono
            elif c == -1:
                body = "-" + mono
            else:
                body = f"{c}*{mono}"
            terms.append(body)
        if self.constant:
            terms.append(str(self.constant))
        if not terms:
            return "0"
        text = terms[0]
        for term in terms[1:]:
            text += term if term.startswith("-") else "+" + term
        return text


@dataclass(frozen=True)
class IndexedSequence:
    """Finite sequence x_1..x_n; subsets are always taken on increasing indices."""
    values: tuple
    distinct: bool = False

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(int(v) for v in self.values))
        if self.distinct and len(set(self.values)) != len(self.values):
            raise DomainError(f"Sequence {self.values} repeats a value but distinctness is required")

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def shifted(self, c: int) -> "IndexedSequence":
        return IndexedSequence(tuple(v + c for v in self.values), self.distinct)


def _as_shift(t) -> AffineShift:
    return t if isinstance(t, AffineShift) else AffineShift(int(t))


def _as_sequence(xs, distinct: bool = False) -> IndexedSequence:
    if isinstance(xs, IndexedSequence) and not distinct:
        return xs
    return IndexedSequence(tuple(xs), distinct)


# ------------------------------
# ⊛_{l,k}
# ------------------------------
def star(p: StarParams, a, b, fixed_width: bool = False):
    """
    c = l·a·b + k(a+b) + (k²-k)/l, so that l·c + k = (l·a+k)(l·b+k).
    """
    if fixed_width:
        ab = checked_mul(checked_mul(p.l, a, "star"), b, "star")
        kab = checked_mul(p.k, checked_add(a, b, "star"), "star")
        return checked_add(checked_add(ab, kab, "star"), p.constant, "star")
    return p.l * a * b + p.k * (a + b) + p.constant


def star_fold(p: StarParams, xs, fixed_width: bool = False):
    values = list(_as_sequence(xs))
    if not values:
        raise DomainError("star_fold needs a nonempty sequence")
    return reduce(lambda acc, x: star(p, acc, x, fixed_width), values[1:], values[0])


def star_translate(p: StarParams, n: int, values) -> list:
    """n ⊛ A via the affine form (k·n + (k²-k)/l) + (l·n + k)·a."""
    offset = p.k * n + p.constant
    scale = p.l * n + p.k
    return [offset + scale * a for a in values]


@lru_cache(maxsize=200_000)
def _signed_divisors(value: int) -> tuple:
    pos = divisors(abs(value))
    return tuple(sorted([-d for d in pos] + list(pos)))


def star_factorizations(p: StarParams, value: int, n: int, lo: int, hi: int,
                        exclude_zero: bool = False) -> list:
    """
    All non-decreasing (y_1..y_n) with lo <= y_i <= hi and
    ∏(l·y_i + k) = l·value + k, found by divisor enumeration.

    An empty list is returned when l·value + k = 0.
    """
    if n < 1:
        raise DomainError("factorization arity must be >= 1")
    target = p.l * value + p.k
    if target == 0:
        return []

    def admissible(y):
        return lo <= y <= hi and not (exclude_zero and y == 0)

    def rec(remaining, count, min_y):
        if count == 1:
            f = remaining
            if (f - p.k) % p.l != 0:
                return
            y = (f - p.k) // p.l
            if y >= min_y and admissible(y):
                yield (y,)
            return
        candidates = []
        for f in _signed_divisors(remaining):
            if (f - p.k) % p.l != 0:
                continue
            y = (f - p.k) // p.l
            if y >= min_y and admissible(y):
                candidates.append((y, f))
        for y, f in sorted(candidates):
            for rest in rec(remaining // f, count - 1, y):
                yield (y,) + rest

    return list(rec(target, n, lo))


# ------------------------------
# Symmetric polynomials
# ------------------------------
def elem_sym_all(xs) -> list:
    """[e_1, ..., e_n] from the expansion of ∏(X + x_i)."""
    values = list(_as_sequence(xs))
    e = [1] + [0] * len(values)
    for count, x in enumerate(values, start=1):
        for i in range(count, 0, -1):
            e[i] += e[i - 1] * x
    return e[1:]


def elem_sym(j: int, xs) -> int:
    values = list(_as_sequence(xs))
    n = len(values)
    if not 1 <= j <= n:
        raise DomainError(f"e_j needs 1 <= j <= n, got j={j}, n={n}")
    e = [1] + [0] * j
    for count, x in enumerate(values, start=1):
        for i in range(min(count, j), 0, -1):
            e[i] += e[i - 1] * x
    return e[j]


def gsym(p: StarParams, xs) -> int:
    """𝔊_{l,k}(x_1..x_n) = Σ_j l^{j-1} k^{n-j} e_j + (k^n - k)/l."""
    values = list(_as_sequence(xs))
    n = len(values)
    if n == 0:
        raise DomainError("gsym needs a nonempty sequence")
    e = elem_sym_all(values)
    total = sum(p.l ** (j - 1) * p.k ** (n - j) * e[j - 1] for j in range(1, n + 1))
    tail, rem = divmod(p.k ** n - p.k, p.l)
    assert rem == 0, "k^n - k is a multiple of k(k-1)"
    return total + tail


# ------------------------------
# ⊕_t, ⊙_t and h_t
# ------------------------------
def oplus(t, a, b):
    return a + b - _as_shift(t).t


def odot(t, a, b):
    return star(_as_shift(t).star_params, a, b)


def odot_fold(t, values) -> int:
    """Closed form ∏(x_i - t) + t of a ⊙_t fold."""
    shift = _as_shift(t).t
    acc = 1
    for v in values:
        acc *= v - shift
    return acc + shift


def h_iso(t, x, direction: str = "forward"):
    shift = _as_shift(t).t
    if direction == "forward":
        return x + shift
    if direction == "inverse":
        return x - shift
    raise ValidationError(f"direction must be 'forward' or 'inverse', got {direction!r}")


# ------------------------------
# Symmetry falsifier
# ------------------------------
def find_asymmetry(arity: int, evaluator, samples: int, bound: int, seed: int = 0):
    """
    Search for (tuple, permutation) with evaluator(tuple) != evaluator(permuted).

    Sampling only: None means no counterexample was found, not a proof.
    """
    if arity < 1 or samples < 1:
        raise DomainError("arity and samples must be >= 1")
    rng = random.Random(seed)
    if arity <= 5:
        perms = list(itertools.permutations(range(arity)))
    else:
        perms = [tuple(rng.sample(range(arity), arity)) for _ in range(120)]
    for _ in range(samples):
        xs = tuple(rng.randint(-bound, bound) for _ in range(arity))
        base = evaluator(xs)
        for perm in perms:
            permuted = tuple(xs[i] for i in perm)
            if evaluator(permuted) != base:
                return xs, perm
    return None


def check_symmetric(arity: int, evaluator, samples: int, bound: int, seed: int = 0) -> bool:
    return find_asymmetry(arity, evaluator, samples, bound, seed) is None


# ------------------------------
# Finite FS / FP / σ_t sets
# ------------------------------
def _check_depth(values, max_depth):
    if not values:
        raise DomainError("sequence must be nonempty")
    if not 1 <= max_depth <= len(values):
        raise DomainError(f"depth must lie in [1, {len(values)}], got {max_depth}")


def sigma_set(t, xs, max_depth: int, distinct: bool = False) -> set:
    """{ ⊙_t-fold of (x_i)_{i∈α} : α increasing, 1 <= |α| <= max_depth }."""
    values = list(_as_sequence(xs, distinct))
    _check_depth(values, max_depth)
    out = set()
    for size in range(1, max_depth + 1):
        for combo in itertools.combinations(values, size):
            out.add(odot_fold(t, combo))
    return out


def fp_products(xs, max_depth: int) -> set:
    return sigma_set(0, xs, max_depth)


def fs_set(s, xs, max_depth: int, distinct: bool = False) -> set:
    """{ Σ_{i∈α} x_i - (|α|-1)·s }; s = 0 gives classical finite sums."""
    shift = _as_shift(s).t
    values = list(_as_sequence(xs, distinct))
    _check_depth(values, max_depth)
    out = set()
    for size in range(1, max_depth + 1):
        for combo in itertools.combinations(values, size):
            out.add(sum(combo) - (size - 1) * shift)
    return out


# ------------------------------
# Identity suites
# ------------------------------
DEFAULT_PARAMS = [(1, 1), (1, -1), (2, 3), (3, 4)] + [(1, -t) for t in range(-5, 6)]


def _int_arrays(rng, bound, size, count, exact_objects):
    arrays = [rng.integers(-bound, bound + 1, size=size, dtype=np.int64) for _ in range(count)]
    if exact_objects:
        arrays = [a.astype(object) for a in arrays]
    return arrays


def _first_failure(mask, *columns):
    idx = np.flatnonzero(mask)
    if idx.size == 0:
        return 0, None
    i = int(idx[0])
    return int(idx.size), [int(col[i]) for col in columns]


def verify_identities(params_list=None, samples: int = 1_000_000, seed: int = 0,
                      bound: int = 1_000_000, fold_max: int = 8) -> dict:
    """
    Seeded identity suite for ⊛_{l,k}: product identity, commutativity,
    associativity, identity law, gsym = star_fold, translate form.
    """
    params_list = params_list or DEFAULT_PARAMS
    log(LOG_PREFIX, f"🚀 Identity suite: {len(params_list)} parameter sets, {samples} pairs, seed={seed}")
    rng = np.random.default_rng(seed)
    results = []
    all_passed = True
    for l, k in params_list:
        p = StarParams(l, k)
        # int64 is exact while |(l·a+k)(l·b+k)| and |l·a·b| stay in range
        worst = max((abs(l) * bound + abs(k)) ** 2, abs(l) * bound * bound + 2 * abs(k) * bound + abs(p.constant))
        exact_objects = worst >= INT64_MAX
        a, b = _int_arrays(rng, bound, samples, 2, exact_objects)
        c = star(p, a, b)
        product_fail, product_cx = _first_failure(p.lift(c) != p.lift(a) * p.lift(b), a, b)
        comm_fail, comm_cx = _first_failure(c != star(p, b, a), a, b)

        n3 = max(1, samples // 10)
        x, y, z = _int_arrays(rng, bound, n3, 3, True)
        left = star(p, star(p, x, y), z)
        right = star(p, x, star(p, y, z))
        assoc_fail, assoc_cx = _first_failure(left != right, x, y, z)

        identity_fail, identity_cx = 0, None
        if p.has_identity:
            identity_fail, identity_cx = _first_failure(star(p, a, p.identity) != a, a)

        fold_fail, fold_cx = 0, None
        per_length = max(1, samples // 1000)
        py_rng = random.Random(seed * 1_000_003 + l * 101 + k)
        for n in range(1, fold_max + 1):
            for _ in range(per_length):
                xs = [py_rng.randint(-bound, bound) for _ in range(n)]
                left_fold = star_fold(p, xs)
                right_fold = reduce(lambda acc, v: star(p, v, acc), reversed(xs[:-1]), xs[-1])
                if not (gsym(p, xs) == left_fold == right_fold):
                    fold_fail += 1
                    fold_cx = fold_cx or xs

        translate_fail = 0
        for n in (-3, -1, 0, 2, 7):
            sample = [py_rng.randint(-bound, bound) for _ in range(16)]
            if star_translate(p, n, sample) != [star(p, n, v) for v in sample]:
                translate_fail += 1

        failures = product_fail + comm_fail + assoc_fail + identity_fail + fold_fail + translate_fail
        all_passed = all_passed and failures == 0
        results.append({
            "l": l, "k": k,
            "pairs": samples, "triples": n3, "fold_sequences": per_length * fold_max,
            "product_failures": product_fail, "product_counterexample": product_cx,
            "commutativity_failures": comm_fail, "commutativity_counterexample": comm_cx,
            "associativity_failures": assoc_fail, "associativity_counterexample": assoc_cx,
            "identity": p.identity, "identity_failures": identity_fail, "identity_counterexample": identity_cx,
            "fold_failures": fold_fail, "fold_counterexample": fold_cx,
            "translate_failures": translate_fail,
            "passed": failures == 0,
        })
        status = "✅" if failures == 0 else "❌"
        log(LOG_PREFIX, f"{status} (l,k)=({l},{k}) failures={failures}")
    return {"suite": "identities", "seed": seed, "bound": bound, "results": results, "passed": all_passed}


def verify_ring_isomorphism(t_values=range(-5, 6), x_lo: int = -50, x_hi: int = 50) -> dict:
    """Exhaustive check of h(x+y) = h(x) ⊕_t h(y) and h(xy) = h(x) ⊙_t h(y)."""
    grid = np.arange(x_lo, x_hi + 1, dtype=np.int64)
    X, Y = np.meshgrid(grid, grid)
    results = []
    for t in t_values:
        shift = AffineShift(int(t))
        add_bad = h_iso(shift, X + Y) != oplus(shift, h_iso(shift, X), h_iso(shift, Y))
        mul_bad = h_iso(shift, X * Y) != odot(shift, h_iso(shift, X), h_iso(shift, Y))
        round_bad = h_iso(shift, h_iso(shift, grid), "inverse") != grid
        add_fail, add_cx = _first_failure(add_bad.ravel(), X.ravel(), Y.ravel())
        mul_fail, mul_cx = _first_failure(mul_bad.ravel(), X.ravel(), Y.ravel())
        results.append({
            "t": int(t), "pairs": int(X.size),
            "oplus_failures": add_fail, "oplus_counterexample": add_cx,
            "odot_failures": mul_fail, "odot_counterexample": mul_cx,
            "roundtrip_failures": int(np.count_nonzero(round_bad)),
        })
    passed = all(r["oplus_failures"] == r["odot_failures"] == r["roundtrip_failures"] == 0 for r in results)
    log(LOG_PREFIX, f"{'✅' if passed else '❌'} Ring isomorphism over t∈{list(t_values)[0]}..{list(t_values)[-1]}")
    return {"suite": "ring_isomorphism", "window": [x_lo, x_hi], "results": results, "passed": passed}


def verify_sigma_translate(count: int = 1000, max_len: int = 6, max_entry: int = 1000,
                           t_values=range(-3, 4), seed: int = 0) -> dict:
    """σ_t({x_i + t}, d) - t ⊆ FP(x, d) on seeded sequences."""
    rng = random.Random(seed)
    failures = 0
    counterexample = None
    checks = 0
    for _ in range(count):
        n = rng.randint(1, max_len)
        xs = [rng.randint(1, max_entry) for _ in range(n)]
        depth = rng.randint(1, n)
        fp = fp_products(xs, depth)
        for t in t_values:
            lifted = sigma_set(t, [x + t for x in xs], depth)
            checks += 1
            if not {v - t for v in lifted} <= fp:
                failures += 1
                counterexample = counterexample or {"xs": xs, "t": int(t), "depth": depth}
    log(LOG_PREFIX, f"{'✅' if failures == 0 else '❌'} σ-translate inclusion: {checks} checks, {failures} failures")
    return {"suite": "sigma_translate", "seed": seed, "checks": checks, "failures": failures,
            "counterexample": counterexample, "passed": failures == 0}
