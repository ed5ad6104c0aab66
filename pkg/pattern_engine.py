"""
Solution enumeration and monochromatic matching for the pattern catalog.

Every enumerator returns SolutionTuple records; enumerate_solutions sorts them
by occupied integers, then by assignment, which is the witness order used
everywhere else (matching, search certificates, CNF clauses).
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from pattern_factory import MixedPattern, QuadPattern, get_enumerator
from symmetric_algebra import (
    fs_set,
    odot,
    sigma_set,
    star,
    star_factorizations,
)
from utils import (
    DomainError,
    GuardExceededError,
    ValidationError,
    checked,
    checked_add,
    checked_mul,
    env_int,
    format_int_set,
    log,
)

LOG_PREFIX = "[pattern_engine]"

DEFAULT_MAX_TUPLES = 2_000_000


# ------------------------------
# Domain types
# ------------------------------
@dataclass(frozen=True)
class Window:
    """Integer window [lo, hi], optionally with 0 removed (ℤ mode)."""
    lo: int
    hi: int
    exclude_zero: bool = False

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValidationError(f"window needs lo <= hi, got [{self.lo},{self.hi}]")
        if self.exclude_zero and self.lo == self.hi == 0:
            raise ValidationError("window [0,0] without 0 is empty")

    @classmethod
    def positive(cls, n: int) -> "Window":
        return cls(1, n)

    @classmethod
    def symmetric(cls, n: int) -> "Window":
        return cls(-n, n, True)

    @property
    def _skips_zero(self) -> bool:
        return self.exclude_zero and self.lo <= 0 <= self.hi

    @property
    def size(self) -> int:
        return self.hi - self.lo + 1 - (1 if self._skips_zero else 0)

    def values(self) -> list:
        return [v for v in range(self.lo, self.hi + 1) if not (self.exclude_zero and v == 0)]

    def __contains__(self, v) -> bool:
        return self.lo <= v <= self.hi and not (self.exclude_zero and v == 0)

    def index(self, v: int) -> int:
        if v not in self:
            raise DomainError(f"{v} is not in window {self}")
        return v - self.lo - (1 if self._skips_zero and v > 0 else 0)

    def value_at(self, i: int) -> int:
        v = self.lo + i
        if self._skips_zero and v >= 0:
            v += 1
        return v

    def to_dict(self) -> dict:
        return {"lo": self.lo, "hi": self.hi, "exclude_zero": self.exclude_zero}

    def __str__(self):
        return f"[{self.lo},{self.hi}]" + ("\\{0}" if self.exclude_zero else "")


@dataclass(frozen=True)
class Coloring:
    """r-coloring of a window; colors[i] is the color of window.value_at(i)."""
    window: Window
    r: int
    colors: tuple

    def __post_init__(self):
        object.__setattr__(self, "colors", tuple(int(c) for c in self.colors))
        if self.r < 1:
            raise ValidationError("a coloring needs r >= 1")
        if len(self.colors) != self.window.size:
            raise ValidationError(f"coloring covers {len(self.colors)} integers, window has {self.window.size}")
        bad = [c for c in self.colors if not 0 <= c < self.r]
        if bad:
            raise ValidationError(f"colors must lie in [0,{self.r - 1}], got {bad[0]}")

    @classmethod
    def from_classes(cls, window: Window, classes) -> "Coloring":
        table = {}
        for color, members in enumerate(classes):
            for v in members:
                if v in table:
                    raise ValidationError(f"{v} appears in two color classes")
                table[v] = color
        missing = [v for v in window.values() if v not in table]
        if missing:
            raise ValidationError(f"classes leave {format_int_set(missing[:8])} uncolored")
        return cls(window, max(len(classes), 1), tuple(table[v] for v in window.values()))

    @classmethod
    def monochrome(cls, window: Window, r: int = 1) -> "Coloring":
        return cls(window, r, (0,) * window.size)

    def color_of(self, v: int) -> int:
        return self.colors[self.window.index(v)]

    def classes(self) -> list:
        out = [[] for _ in range(self.r)]
        for v, c in zip(self.window.values(), self.colors):
            out[c].append(v)
        return out

    def to_dict(self) -> dict:
        return {"window": self.window.to_dict(), "r": self.r, "classes": self.classes()}


@dataclass(frozen=True)
class SolutionTuple:
    """
    assignment: (name, value) pairs in declaration order
    occupied:   sorted distinct integers that get colored
    reach:      least hi for which the tuple is enumerated on [lo, hi]
    """
    assignment: tuple
    occupied: tuple
    reach: int

    def value(self, name: str) -> int:
        for key, v in self.assignment:
            if key == name:
                return v
        raise KeyError(name)

    def as_dict(self) -> dict:
        return dict(self.assignment)

    def sort_key(self):
        return self.occupied, tuple(sorted(self.assignment))

    def to_dict(self) -> dict:
        return {"assignment": self.as_dict(), "occupied": list(self.occupied), "reach": self.reach}


@dataclass(frozen=True)
class Witness:
    solution: SolutionTuple
    color: int
    pattern: str
    window: Window

    def to_dict(self) -> dict:
        return {
            "pattern": self.pattern,
            "color": self.color,
            "window": self.window.to_dict(),
            **self.solution.to_dict(),
        }


def _solution(assignment, colored, extra_bounds=()) -> SolutionTuple:
    occupied = tuple(sorted(set(colored)))
    reach = max(occupied + tuple(extra_bounds))
    return SolutionTuple(tuple(assignment), occupied, reach)


def _all_in(window: Window, values) -> bool:
    return all(v in window for v in values)


def _max_tuples() -> int:
    return env_int("PR_MAX_TUPLES", DEFAULT_MAX_TUPLES)


# ------------------------------
# Enumerators (one per family)
# ------------------------------
def enumerate_ap(pattern, window: Window) -> list:
    out = []
    length = pattern.length
    for a in window.values():
        if length == 1:
            out.append(_solution([("a", a)], [a]))
            continue
        d = 1
        while a + (length - 1) * d <= window.hi:
            terms = [a + i * d for i in range(length)]
            if _all_in(window, terms):
                out.append(_solution([("a", a), ("d", d)], terms))
            d += 1
    return out


def enumerate_polyvdw(pattern, window: Window) -> list:
    out = []
    width = window.hi - window.lo
    for a in window.values():
        for d in range(1, width + 1):
            terms = [a] + [checked_add(a, poly(d, fixed_width=True), "polyvdw term") for poly in pattern.polynomials]
            if _all_in(window, terms):
                out.append(_solution([("a", a), ("d", d)], terms, extra_bounds=(window.lo + d,)))
    return out


def _schur_op(pattern):
    if pattern.op == "add":
        return lambda x, y: checked_add(x, y, "schur sum")
    if pattern.op == "mul":
        return lambda x, y: checked_mul(x, y, "schur product")
    return lambda x, y: star(pattern.star, x, y, fixed_width=True)


def enumerate_schur(pattern, window: Window) -> list:
    out = []
    op = _schur_op(pattern)
    values = window.values()
    # + and · are increasing in y on positive windows
    monotone = pattern.op in ("add", "mul") and window.lo >= 1
    for i, x in enumerate(values):
        for y in values[i + 1 if pattern.distinct else i:]:
            z = op(x, y)
            if z in window:
                out.append(_solution([("x", x), ("y", y), ("z", z)], [x, y, z]))
            elif monotone and z > window.hi:
                break
    return out


def _sum_product_family(pattern, window: Window, combine) -> list:
    out = []
    values = window.values()
    for x in values:
        for y in values:
            if y == 0:
                continue
            s = combine(x, y)
            p = checked_mul(x, y, f"{pattern.kind} product")
            if s in window and p in window:
                out.append(_solution([("x", x), ("y", y), ("s", s), ("p", p)], [x, s, p], extra_bounds=(y,)))
            elif window.lo >= 1 and s > window.hi:
                break
    return out


def enumerate_moreira(pattern, window: Window) -> list:
    return _sum_product_family(pattern, window, lambda x, y: checked_add(x, y, "moreira sum"))


def enumerate_blm(pattern, window: Window) -> list:
    return _sum_product_family(
        pattern, window,
        lambda x, y: checked_add(checked_add(x, y, "blm sum"), checked_mul(x, y, "blm product"), "blm sum"),
    )


def _nondegenerate(values, avoid) -> list:
    return [v for v in values if v not in avoid]


def enumerate_sigma(pattern, window: Window) -> list:
    t, depth = pattern.t, pattern.depth
    values = window.values()
    if depth >= 2:
        # products collapse on the absorbing element t and the identity t+1
        values = _nondegenerate(values, {t, t + 1})
    monotone = window.lo > t
    out = []

    def extend(prefix, products, start):
        if len(prefix) == depth:
            names = [(f"x{i + 1}", v) for i, v in enumerate(prefix)]
            out.append(_solution(names, products))
            return
        for j in range(start, len(values)):
            x = values[j]
            new = [x] + [checked(odot(t, s, x), "sigma product") for s in products]
            if _all_in(window, new):
                extend(prefix + [x], products + new, j + 1 if pattern.distinct else j)
            elif monotone and any(v > window.hi for v in new):
                break

    extend([], [], 0)
    return out


def _h_names(side: str, n: int) -> list:
    first, rest = ("c", "d") if side == "mean" else ("z", "w")
    if n == 1:
        return [first]
    if n == 2:
        return [first, rest]
    return [first] + [f"{rest}{i}" for i in range(1, n)]


def enumerate_glue(pattern, window: Window) -> list:
    p, n = pattern.star, pattern.n
    names = _h_names(pattern.side, n)
    values = window.values()
    out = []

    def factor(v):
        checked_add(checked_mul(p.l, v, "glue l*v"), p.k, "glue l*v+k")
        return star_factorizations(p, v, n, window.lo, window.hi, window.exclude_zero)

    if pattern.side == "mean":
        for i, a in enumerate(values):
            for b in values[i if pattern.allow_equal else i + 1:]:
                if (a + b) % 2:
                    continue
                v = (a + b) // 2
                for hs in factor(v):
                    assignment = [("a", a), ("b", b), ("v", v)] + list(zip(names, hs))
                    out.append(_solution(assignment, [a, b, *hs]))
        return out

    first, others = pattern.polynomials[0], pattern.polynomials[1:]
    for x in values:
        for y in values:
            if x == y and not pattern.allow_equal:
                continue
            gap = y - x
            if pattern.side == "poly":
                v = checked_add(x, first(gap, fixed_width=True), "glue value")
                for hs in factor(v):
                    assignment = [("x", x), ("y", y), ("v", v)] + list(zip(names, hs))
                    out.append(_solution(assignment, [x, y, *hs]))
                continue
            offsets = [poly(gap, fixed_width=True) for poly in others]
            lead = first(gap, fixed_width=True)
            for x1 in values:
                v = x1 - lead
                xs = [x1] + [checked_add(v, off, "glue system") for off in offsets]
                if not _all_in(window, xs):
                    continue
                for hs in factor(v):
                    assignment = ([("x", x), ("y", y)] + [(f"x{i + 1}", xi) for i, xi in enumerate(xs)]
                                  + [("v", v)] + list(zip(names, hs)))
                    out.append(_solution(assignment, [x, y, *xs, *hs]))
    return out


def _mixed_unit_set(t, family_set, x):
    return set(family_set) | {x} | {odot(t, f, x) for f in family_set}


def enumerate_mixed(pattern, window: Window, admit=None) -> list:
    """
    Depth-1 units (F, x) give F ∪ {x} ∪ F⊙x; depth 2 adds the cross
    products of two units. ``admit`` filters units before pairing.
    """
    t = pattern.t
    # a family set enters on [lo, n] once one of its solutions does
    family_reach = {}
    for s in enumerate_solutions(pattern.family, window):
        if t not in s.occupied:
            family_reach[s.occupied] = min(s.reach, family_reach.get(s.occupied, s.reach))
    families = sorted(family_reach)
    xs = _nondegenerate(window.values(), {t, t + 1})
    units = []
    for F in families:
        for x in xs:
            unit = _mixed_unit_set(t, F, x)
            if not _all_in(window, unit):
                continue
            if admit is not None and not admit(unit):
                continue
            units.append((F, x, unit))

    out = []
    if pattern.depth == 1:
        for F, x, unit in units:
            assignment = [(f"f1_{j + 1}", f) for j, f in enumerate(F)] + [("x1", x)]
            out.append(_solution(assignment, unit, extra_bounds=(family_reach[F],)))
        return out

    for (F1, x1, u1), (F2, x2, u2) in itertools.combinations(units, 2):
        cross = {odot(t, x1, x2)}
        cross |= {odot(t, odot(t, f1, x1), odot(t, f2, x2)) for f1 in F1 for f2 in F2}
        cross |= {odot(t, f1, f2) for f1 in F1 for f2 in F2}
        if not _all_in(window, cross):
            continue
        union = u1 | u2 | cross
        if admit is not None and not admit(union):
            continue
        assignment = ([(f"f1_{j + 1}", f) for j, f in enumerate(F1)] + [("x1", x1)]
                      + [(f"f2_{j + 1}", f) for j, f in enumerate(F2)] + [("x2", x2)])
        out.append(_solution(assignment, union, extra_bounds=(family_reach[F1], family_reach[F2])))
    return out


QUAD_STRUCTURES = ("x", "w", "y", "z")


def quad_structure_set(name: str, t: int, seq, depth: int) -> set:
    """FS(x), FP(w), t + FS_{-t}(y), t + σ_{-t}(z)."""
    if name == "x":
        return fs_set(0, seq, depth)
    if name == "w":
        return sigma_set(0, seq, depth)
    if name == "y":
        return {t + v for v in fs_set(-t, seq, depth)}
    if name == "z":
        return {t + v for v in sigma_set(-t, seq, depth)}
    raise ValidationError(f"unknown quad structure {name!r}")


def _quad_avoid(name: str, t: int) -> set:
    return {"x": {0}, "w": {0, 1}, "y": {-t}, "z": {-t, -t + 1}}[name]


def quad_candidates(name: str, t: int, depth: int, window: Window):
    """Strictly increasing sequences (lexicographic order) whose structure set fits the window."""
    values = window.values()
    if depth >= 2:
        values = _nondegenerate(values, _quad_avoid(name, t))
    for seq in itertools.combinations(values, depth):
        members = quad_structure_set(name, t, seq, depth)
        if _all_in(window, members):
            yield seq, members


def _quad_solution(seqs: dict, sets: dict) -> SolutionTuple:
    assignment = []
    union = set()
    for name in QUAD_STRUCTURES:
        assignment += [(f"{name}{i + 1}", v) for i, v in enumerate(seqs[name])]
        union |= sets[name]
    return _solution(assignment, union, extra_bounds=[v for _, v in assignment])


def enumerate_quad(pattern, window: Window) -> list:
    lists = {name: list(quad_candidates(name, pattern.t, pattern.depth, window)) for name in QUAD_STRUCTURES}
    total = math.prod(len(v) for v in lists.values())
    if total > _max_tuples():
        raise GuardExceededError(f"quad enumeration would produce {total} tuples (PR_MAX_TUPLES={_max_tuples()})")
    out = []
    for combo in itertools.product(*(lists[name] for name in QUAD_STRUCTURES)):
        seqs = {name: c[0] for name, c in zip(QUAD_STRUCTURES, combo)}
        sets = {name: c[1] for name, c in zip(QUAD_STRUCTURES, combo)}
        out.append(_quad_solution(seqs, sets))
    return out


# ------------------------------
# Public operations
# ------------------------------
def enumerate_solutions(pattern, window: Window, limit: int = None) -> list:
    """
    All solution tuples of ``pattern`` inside ``window`` in witness order.

    Args:
        pattern: parsed pattern
        window: integer window
        limit: optional cap on the number of returned tuples

    Returns:
        List of SolutionTuple sorted by (occupied, assignment)
    """
    if limit is not None and limit < 1:
        raise ValidationError("limit must be >= 1")
    enumerator = get_enumerator(pattern)
    raw = enumerator(pattern, window)
    if len(raw) > _max_tuples():
        raise GuardExceededError(
            f"{pattern.canonical_name()} has {len(raw)} tuples on {window}, above PR_MAX_TUPLES={_max_tuples()}"
        )
    raw.sort(key=SolutionTuple.sort_key)
    log(LOG_PREFIX, f"📊 {pattern.canonical_name()} on {window}: {len(raw)} solutions")
    return raw[:limit] if limit is not None else raw


def _monochromatic_color(coloring: Coloring, values):
    colors = {coloring.color_of(v) for v in values}
    return colors.pop() if len(colors) == 1 else None


def find_monochromatic(coloring: Coloring, pattern):
    """Least monochromatic witness of ``pattern`` in ``coloring``, or None."""
    if pattern.kind == "quad":
        return find_quad_sequences(coloring, pattern.t, pattern.depth)
    if pattern.kind == "mixed":
        return find_mixed_configuration(coloring, pattern.family, pattern.t, pattern.depth)
    for solution in enumerate_solutions(pattern, coloring.window):
        color = _monochromatic_color(coloring, solution.occupied)
        if color is not None:
            return Witness(solution, color, pattern.canonical_name(), coloring.window)
    return None


def find_mixed_configuration(coloring: Coloring, family, t, depth: int):
    """
    Least F_1..F_d, x_1..x_d (d in {1, 2}) whose σ_t union is monochromatic.
    """

    shift = getattr(t, "t", t)
    if depth not in (1, 2):
        raise ValidationError(f"mixed depth must be 1 or 2, got {depth}")
    pattern = MixedPattern(family, shift, depth)
    admit = lambda members: _monochromatic_color(coloring, members) is not None  # noqa: E731
    candidates = enumerate_mixed(pattern, coloring.window, admit=admit)
    if not candidates:
        return None
    best = min(candidates, key=SolutionTuple.sort_key)
    color = coloring.color_of(best.occupied[0])
    log(LOG_PREFIX, f"✅ Mixed configuration {format_int_set(best.occupied)} in color {color}")
    return Witness(best, color, pattern.canonical_name(), coloring.window)


def find_quad_sequences(coloring: Coloring, t, depth: int):
    """
    For each color take the least admissible sequence of each of the four
    structures; return the least of the complete per-color candidates.
    """

    shift = getattr(t, "t", t)
    if depth not in (1, 2):
        raise ValidationError(f"quad depth must be 1 or 2, got {depth}")
    pattern = QuadPattern(shift, depth)
    best = None
    for color in range(coloring.r):
        seqs, sets = {}, {}
        for name in QUAD_STRUCTURES:
            for seq, members in quad_candidates(name, shift, depth, coloring.window):
                if all(coloring.color_of(v) == color for v in members):
                    seqs[name], sets[name] = seq, members
                    break
            else:
                break
        if len(seqs) < len(QUAD_STRUCTURES):
            continue
        candidate = Witness(_quad_solution(seqs, sets), color, pattern.canonical_name(), coloring.window)
        if best is None or candidate.solution.sort_key() < best.solution.sort_key():
            best = candidate
    return best


# ------------------------------
# Independent validator
# ------------------------------
def _poly_value(poly, d: int) -> int:
    return sum(c * d ** i for i, c in enumerate(poly.coefficients, start=1)) + poly.constant


def _shifted_product(values, t: int) -> int:
    return math.prod(v - t for v in values) + t


def _subset_values(seq, combine) -> set:
    return {combine(c) for size in range(1, len(seq) + 1) for c in itertools.combinations(seq, size)}


def expected_occupied(pattern, solution: SolutionTuple) -> set:
    """Recompute the colored set of a solution straight from the defining equations."""
    a = solution.as_dict()
    kind = pattern.kind
    if kind == "ap":
        return {a["a"] + i * a.get("d", 0) for i in range(pattern.length)}
    if kind == "polyvdw":
        return {a["a"]} | {a["a"] + _poly_value(p, a["d"]) for p in pattern.polynomials}
    if kind == "schur":
        return {a["x"], a["y"], a["z"]}
    if kind in ("moreira", "blm"):
        return {a["x"], a["s"], a["p"]}
    if kind == "sigma":
        seq = [a[f"x{i + 1}"] for i in range(pattern.depth)]
        return _subset_values(seq, lambda c: _shifted_product(c, pattern.t))
    if kind == "glue":
        colored = {v for name, v in solution.assignment if name != "v"}
        return colored
    if kind == "mixed":
        t = pattern.t
        units = []
        for i in range(1, pattern.depth + 1):
            F = [v for name, v in solution.assignment if name.startswith(f"f{i}_")]
            units.append((F, a[f"x{i}"]))
        xs = [x for _, x in units]
        fx_sets = [[_shifted_product([f, x], t) for f in F] for F, x in units]
        f_sets = [F for F, _ in units]
        out = _subset_values(xs, lambda c: _shifted_product(c, t))
        for sets in (fx_sets, f_sets):
            for size in range(1, len(sets) + 1):
                for combo in itertools.combinations(sets, size):
                    out |= {_shifted_product(pick, t) for pick in itertools.product(*combo)}
        return out
    if kind == "quad":
        t = pattern.t
        seq = {n: [a[f"{n}{i + 1}"] for i in range(pattern.depth)] for n in QUAD_STRUCTURES}
        out = _subset_values(seq["x"], sum)
        out |= _subset_values(seq["w"], math.prod)
        out |= _subset_values([v + t for v in seq["y"]], sum)
        out |= _subset_values([v + t for v in seq["z"]], math.prod)
        return out
    raise ValidationError(f"unknown pattern family {kind!r}")


def validate_solution(pattern, solution: SolutionTuple) -> bool:
    """
    Substitute a solution into its defining equations.

    Uses direct formulas only; nothing here goes through the enumerators or
    the divisor search.
    """
    a = solution.as_dict()
    kind = pattern.kind
    if set(solution.occupied) != expected_occupied(pattern, solution):
        return False
    if kind in ("ap", "polyvdw") and a.get("d", 1) < 1:
        return False
    if kind == "schur":
        x, y, z = a["x"], a["y"], a["z"]
        if pattern.distinct and x == y:
            return False
        if pattern.op == "add":
            return z == x + y
        if pattern.op == "mul":
            return z == x * y
        l, k = pattern.star.l, pattern.star.k
        return l * z + k == (l * x + k) * (l * y + k)
    if kind == "moreira":
        return a["y"] != 0 and a["s"] == a["x"] + a["y"] and a["p"] == a["x"] * a["y"]
    if kind == "blm":
        x, y = a["x"], a["y"]
        return y != 0 and a["s"] == x + y + x * y and a["p"] == x * y
    if kind == "glue":
        l, k = pattern.star.l, pattern.star.k
        if pattern.side == "mean":
            hs = [v for name, v in solution.assignment if name[0] in ("c", "d")]
            if not pattern.allow_equal and a["a"] == a["b"]:
                return False
            if a["a"] + a["b"] != 2 * a["v"]:
                return False
        else:
            hs = [v for name, v in solution.assignment if name[0] in ("z", "w")]
            if not pattern.allow_equal and a["x"] == a["y"]:
                return False
            gap = a["y"] - a["x"]
            if pattern.side == "poly":
                if a["v"] != a["x"] + _poly_value(pattern.polynomials[0], gap):
                    return False
            else:
                for i, poly in enumerate(pattern.polynomials, start=1):
                    if a[f"x{i}"] - _poly_value(poly, gap) != a["v"]:
                        return False
        if len(hs) != pattern.n:
            return False
        return l * a["v"] + k == math.prod(l * h + k for h in hs)
    return True


# ------------------------------
# Arithmetic progressions in finite sets
# ------------------------------
AP_TABLE_LIMIT = 1 << 16


def ap_longest(A, max_len: int) -> tuple:
    """
    Longest AP (a, a+d, ...), d >= 1, inside A, capped at max_len.

    Args:
        A: nonempty finite set of integers
        max_len: cap L >= 1

    Returns:
        (length, witness tuple) with the least start a, then the least d
    """
    values = sorted(set(int(v) for v in A))
    if not values:
        raise DomainError("ap_longest needs a nonempty set")
    if max_len < 1:
        raise DomainError("max_len must be >= 1")
    lo = values[0]
    span = values[-1] - lo
    best = (1, lo, 0)
    if max_len == 1 or span == 0:
        return 1, (lo,)

    def better(length, a, d):
        return (-length, a, d) < (-best[0], best[1], best[2])

    if span <= AP_TABLE_LIMIT:
        table = np.zeros(span + 1, dtype=bool)
        table[np.asarray(values, dtype=np.int64) - lo] = True
        for d in range(1, span + 1):
            if span // d + 1 < best[0]:
                break
            starts = table
            length = 1
            while length < max_len and length * d <= span:
                nxt = starts[:span + 1 - length * d] & table[length * d:]
                if not nxt.any():
                    break
                starts, length = nxt, length + 1
            if length > 1:
                a = lo + int(np.flatnonzero(starts)[0])
                if better(length, a, d):
                    best = (length, a, d)
    else:
        members = set(values)
        for i, a in enumerate(values):
            for b in values[i + 1:]:
                d = b - a
                length = 2
                while length < max_len and a + length * d in members:
                    length += 1
                if better(length, a, d):
                    best = (length, a, d)
    length, a, d = best
    return length, tuple(a + i * d for i in range(length))
