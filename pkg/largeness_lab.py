"""
Finite-window largeness detectors (thick / syndetic / piecewise syndetic) for
(ℤ,+), (ℕ,·) and (ℤ,⊛_{l,k}), plus the transfer experiments between them.

Every verdict is a claim about a finite proxy: runs of length L, gaps below g,
translate families of size m, evaluated only on the interior window where all
translates stay inside the data. Central sets are stood in for by the
piecewise-syndetic verdict (proxy=pws).
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from pattern_engine import Window, ap_longest
from symmetric_algebra import AffineShift, StarParams, star, star_translate
from utils import INT64_MAX, ValidationError, log

LOG_PREFIX = "[largeness_lab]"

MAX_TABLE = 50_000_000


# ------------------------------
# Domain types
# ------------------------------
@dataclass(frozen=True, eq=False)
class FiniteSetWindow:
    """Membership table of A over an integer window [lo, hi]."""
    window: Window
    membership: np.ndarray

    def __post_init__(self):
        if self.window.exclude_zero:
            raise ValidationError("largeness windows are plain intervals")
        table = np.asarray(self.membership, dtype=bool)
        if table.shape != (self.window.hi - self.window.lo + 1,):
            raise ValidationError(f"membership has shape {table.shape}, window {self.window} needs "
                                  f"{self.window.hi - self.window.lo + 1}")
        object.__setattr__(self, "membership", table)

    @classmethod
    def from_members(cls, window: Window, members) -> "FiniteSetWindow":
        table = np.zeros(window.hi - window.lo + 1, dtype=bool)
        idx = np.asarray([v - window.lo for v in members if window.lo <= v <= window.hi], dtype=np.int64)
        table[idx] = True
        return cls(window, table)

    @classmethod
    def from_predicate(cls, window: Window, predicate) -> "FiniteSetWindow":
        return cls(window, np.array([bool(predicate(v)) for v in range(window.lo, window.hi + 1)], dtype=bool))

    @classmethod
    def full(cls, window: Window) -> "FiniteSetWindow":
        return cls(window, np.ones(window.hi - window.lo + 1, dtype=bool))

    @classmethod
    def random(cls, window: Window, density: float, rng: np.random.Generator) -> "FiniteSetWindow":
        return cls(window, rng.random(window.hi - window.lo + 1) < density)

    def members(self) -> list:
        return [int(v) for v in np.flatnonzero(self.membership) + self.window.lo]

    def contains(self, v: int) -> bool:
        return self.window.lo <= v <= self.window.hi and bool(self.membership[v - self.window.lo])

    def shifted(self, c: int) -> "FiniteSetWindow":
        """A + c on the window shifted by c."""
        return FiniteSetWindow(Window(self.window.lo + c, self.window.hi + c), self.membership.copy())

    def complement(self) -> "FiniteSetWindow":
        return FiniteSetWindow(self.window, ~self.membership)

    def union(self, other: "FiniteSetWindow") -> "FiniteSetWindow":
        if other.window != self.window:
            raise ValidationError("union needs equal windows")
        return FiniteSetWindow(self.window, self.membership | other.membership)

    def to_rle(self) -> list:
        starts, lengths = _runs(self.membership)
        return [[int(s) + self.window.lo, int(s + n - 1) + self.window.lo] for s, n in zip(starts, lengths)]

    def to_json(self) -> dict:
        return {"window": {"lo": self.window.lo, "hi": self.window.hi}, "intervals": self.to_rle()}

    @classmethod
    def from_json(cls, data: dict) -> "FiniteSetWindow":
        try:
            window = Window(int(data["window"]["lo"]), int(data["window"]["hi"]))
            intervals = data.get("intervals", [])
        except (KeyError, TypeError, ValueError) as e:
            raise ValidationError(f"malformed set JSON: {e}")
        table = np.zeros(window.hi - window.lo + 1, dtype=bool)
        for a, b in intervals:
            if a > b or a < window.lo or b > window.hi:
                raise ValidationError(f"interval [{a},{b}] does not fit {window}")
            table[a - window.lo:b - window.lo + 1] = True
        return cls(window, table)


@dataclass(frozen=True)
class LargenessParams:
    gap: int = 2
    run: int = 8
    translate_bound: int = 3

    def __post_init__(self):
        for name in ("gap", "run", "translate_bound"):
            if getattr(self, name) < 1:
                raise ValidationError(f"{name} must be >= 1")

    def to_dict(self) -> dict:
        return {"g": self.gap, "L": self.run, "m": self.translate_bound}


@dataclass
class LargenessReport:
    structure: str
    params: dict
    interior: list
    thick: bool
    syndetic: bool
    pws: bool
    witnesses: dict = field(default_factory=dict)
    experiment: dict = field(default_factory=dict)
    proxy: str = "pws"

    def to_dict(self) -> dict:
        return {
            "structure": self.structure,
            "params": self.params,
            "interior": self.interior,
            "verdicts": {"thick": self.thick, "syndetic": self.syndetic, "pws": self.pws},
            "witnesses": self.witnesses,
            "experiment": self.experiment,
            "proxy": self.proxy,
        }

    def to_rows(self, label: str = "") -> list:
        rows = []
        for verdict in ("thick", "syndetic", "pws"):
            rows.append({
                "set": label,
                "structure": self.structure,
                "verdict": verdict,
                "value": getattr(self, verdict),
                "witness": str(self.witnesses.get(verdict)),
                "interior": str(self.interior),
                **{f"param_{k}": v for k, v in self.params.items()},
            })
        return rows


# ------------------------------
# Helpers
# ------------------------------
def _runs(mask: np.ndarray):
    """Start offsets and lengths of the True runs of a boolean array."""
    padded = np.concatenate(([False], np.asarray(mask, dtype=bool), [False])).astype(np.int8)
    diff = np.diff(padded)
    starts = np.flatnonzero(diff == 1)
    ends = np.flatnonzero(diff == -1)
    return starts, ends - starts


def _first_run(mask: np.ndarray, length: int):
    starts, lengths = _runs(mask)
    hit = np.flatnonzero(lengths >= length)
    if hit.size:
        return int(starts[hit[0]])
    return None


def _longest_run(mask: np.ndarray):
    starts, lengths = _runs(mask)
    if not lengths.size:
        return None, 0
    i = int(np.argmax(lengths))
    return int(starts[i]), int(lengths[i])


def _pws_start(member: np.ndarray, g: int, L: int):
    """
    First s with [s, s+L-1] meeting A and containing no length-g hole.
    """
    W = member.size
    if W < L or not member.any():
        return None
    s = np.arange(0, W - L + 1)
    cm = np.concatenate(([0], np.cumsum(member, dtype=np.int64)))
    meets = cm[s + L] - cm[s] > 0
    if L >= g and W >= g:
        holes = np.convolve((~member).astype(np.int64), np.ones(g, dtype=np.int64), mode="valid") == g
        cz = np.concatenate(([0], np.cumsum(holes, dtype=np.int64)))
        clean = cz[s + L - g + 1] - cz[s] == 0
        good = meets & clean
    else:
        good = meets
    hit = np.flatnonzero(good)
    return int(hit[0]) if hit.size else None


def _as_set(A) -> FiniteSetWindow:
    if not isinstance(A, FiniteSetWindow):
        raise ValidationError("expected a FiniteSetWindow")
    return A


# ------------------------------
# Additive
# ------------------------------
def analyze_additive(A: FiniteSetWindow, p: LargenessParams) -> LargenessReport:
    """
    thick:    L consecutive members
    syndetic: every length-g subinterval meets A (vacuous when the window is shorter than g)
    pws:      some length-L subinterval meets A and has no length-g hole
    """
    A = _as_set(A)
    member = A.membership
    lo = A.window.lo
    W = member.size
    g, L = p.gap, p.run
    witnesses = {}

    start = _first_run(member, L)
    thick = start is not None
    if thick:
        witnesses["thick"] = {"run": [lo + start, lo + start + L - 1]}
    else:
        s, n = _longest_run(member)
        witnesses["thick"] = {"longest_run": [lo + s, lo + s + n - 1] if n else None}

    if not member.any():
        syndetic = False
        witnesses["syndetic"] = {"counterexample": lo}
    elif W < g:
        syndetic = True
        witnesses["syndetic"] = {"vacuous": True}
    else:
        hole = _first_run(~member, g)
        syndetic = hole is None
        if syndetic:
            _, max_gap = _longest_run(~member)
            witnesses["syndetic"] = {"max_hole": max_gap}
        else:
            witnesses["syndetic"] = {"counterexample": [lo + hole, lo + hole + g - 1]}

    s = _pws_start(member, g, L)
    pws = s is not None
    witnesses["pws"] = {"interval": [lo + s, lo + s + L - 1]} if pws else None

    return LargenessReport("additive", p.to_dict(), [A.window.lo, A.window.hi], thick, syndetic, pws, witnesses)


# ------------------------------
# ⊛ translates (multiplicative is ⊛_{1,0})
# ------------------------------
def _translate_scan(A: FiniteSetWindow, sp: StarParams, p: LargenessParams, structure: str) -> LargenessReport:
    e = sp.identity
    m, L = p.translate_bound, p.run
    lo, hi = A.window.lo, A.window.hi
    family = np.arange(e, e + m, dtype=np.int64)
    ys = np.arange(lo, hi + 1, dtype=np.int64)
    bound = max(abs(lo), abs(hi), abs(e) + m)
    if abs(sp.l) * bound * bound + 2 * abs(sp.k) * bound + abs(sp.constant) >= INT64_MAX:
        raise ValidationError(f"window {A.window} is too wide for 64-bit translate tables")
    if family.size * ys.size > MAX_TABLE:
        raise ValidationError(f"translate table {family.size}x{ys.size} exceeds {MAX_TABLE} cells")

    images = star(sp, family[:, None], ys[None, :])  # images[f, y] = f ⊛ y
    inside = (images >= lo) & (images <= hi)
    interior = inside.all(axis=0)
    if sp.absorbing is not None and lo <= sp.absorbing <= hi:
        interior[sp.absorbing - lo] = False
    hits = np.zeros_like(inside)
    hits[inside] = A.membership[(images[inside] - lo)]

    witnesses = {"family": [int(f) for f in family]}
    interior_ys = ys[interior]
    excluded = [sp.absorbing] if sp.absorbing is not None and lo <= sp.absorbing <= hi else []
    certified = [int(interior_ys[0]), int(interior_ys[-1])] if interior_ys.size else None
    if not interior_ys.size:
        log(LOG_PREFIX, f"⚠️ {structure}: empty interior for m={m} on {A.window}")
        return LargenessReport(structure, {**p.to_dict(), "l": sp.l, "k": sp.k}, None, False, False, False,
                               {"thick": None, "syndetic": None, "pws": None, **witnesses})

    covered = hits.any(axis=0) & interior
    uncovered = interior & ~covered
    syndetic = not uncovered.any()
    if syndetic:
        needed = sorted({int(family[np.flatnonzero(hits[:, j])[0]]) for j in np.flatnonzero(interior)})
        witnesses["syndetic"] = {"cover": needed}
    else:
        witnesses["syndetic"] = {"counterexample": int(ys[np.flatnonzero(uncovered)[0]])}

    full = hits.all(axis=0) & interior
    thick = bool(full.any())
    if thick:
        y = int(ys[np.flatnonzero(full)[0]])
        witnesses["thick"] = {"x": y, "translates": [int(v) for v in star(sp, family, y)]}
    else:
        witnesses["thick"] = None

    start = _first_run(covered, L)
    pws = start is not None
    witnesses["pws"] = {"run": [lo + start, lo + start + L - 1]} if pws else None

    params = {**p.to_dict(), "l": sp.l, "k": sp.k}
    report = LargenessReport(structure, params, certified, thick, syndetic, pws, witnesses)
    if excluded:
        report.experiment["excluded"] = excluded
    return report


def analyze_multiplicative(A: FiniteSetWindow, p: LargenessParams) -> LargenessReport:
    """
    Translates f^{-1}A = {y : f·y ∈ A} for f in [1, m] on the interior [lo, ⌊hi/m⌋].
    """
    A = _as_set(A)
    if A.window.lo < 1:
        raise ValidationError(f"multiplicative analysis needs a positive window, got {A.window}")
    report = _translate_scan(A, StarParams(1, 0), p, "multiplicative")
    log(LOG_PREFIX, f"📊 multiplicative thick={report.thick} syndetic={report.syndetic} pws={report.pws}")
    return report


def analyze_star(A: FiniteSetWindow, sp: StarParams, p: LargenessParams) -> LargenessReport:
    """
    Translates f^{-1}A = {y : f ⊛ y ∈ A} over the family [e, e+m-1] from the
    identity e; also reports the additive pws verdict of A as an experiment.
    """
    A = _as_set(A)
    if not isinstance(sp, StarParams):
        raise ValidationError("analyze_star needs StarParams")
    if not sp.has_identity:
        raise ValidationError(f"translate semantics need l | (k-1), got (l,k)=({sp})")
    report = _translate_scan(A, sp, p, "star")
    report.experiment["implied_additive_pws"] = analyze_additive(A, p).pws
    log(LOG_PREFIX, f"📊 ⊛_{{{sp}}} thick={report.thick} syndetic={report.syndetic} pws={report.pws}")
    return report


# ------------------------------
# Transfer experiments
# ------------------------------
@dataclass
class PullbackComparison:
    t: int
    multiplicative: LargenessReport
    shifted: LargenessReport
    additive_pws: bool
    additive_pws_shifted: bool
    agreement: bool

    @property
    def translation_invariant(self) -> bool:
        return self.additive_pws == self.additive_pws_shifted

    def to_dict(self) -> dict:
        return {
            "t": self.t,
            "multiplicative": self.multiplicative.to_dict(),
            "odot_shifted": self.shifted.to_dict(),
            "additive_pws": {"A": self.additive_pws, "A+t": self.additive_pws_shifted},
            "agreement": self.agreement,
            "translation_invariant": self.translation_invariant,
        }

    def to_rows(self) -> list:
        return self.multiplicative.to_rows("A") + self.shifted.to_rows("A+t")


def pullback_compare(A: FiniteSetWindow, t, p: LargenessParams) -> PullbackComparison:
    """
    ⊙_t verdicts on A+t against multiplicative verdicts on A, compared on the
    interior window mapped through h(x) = x + t.
    """
    A = _as_set(A)
    shift = t.t if isinstance(t, AffineShift) else int(t)
    mult = analyze_multiplicative(A, p)
    moved = A.shifted(shift)
    direct = analyze_star(moved, AffineShift(shift).star_params, p)

    mapped_interior = [v + shift for v in mult.interior] if mult.interior else None
    agreement = (
        mapped_interior == direct.interior
        and (mult.thick, mult.syndetic, mult.pws) == (direct.thick, direct.syndetic, direct.pws)
    )
    if agreement and mult.thick:
        agreement = mult.witnesses["thick"]["x"] + shift == direct.witnesses["thick"]["x"]
    pws_a = analyze_additive(A, p).pws
    pws_shifted = analyze_additive(moved, p).pws
    status = "✅" if agreement else "❌"
    log(LOG_PREFIX, f"{status} pullback t={shift}: agreement={agreement}")
    return PullbackComparison(shift, mult, direct, pws_a, pws_shifted, bool(agreement))


def star_translate_largeness(A: FiniteSetWindow, sp: StarParams, n: int, p: LargenessParams) -> dict:
    """Additive syndetic/pws of A against n ⊛ A = (k·n + (k²-k)/l) + (l·n + k)·A."""
    A = _as_set(A)
    ends = star_translate(sp, n, [A.window.lo, A.window.hi])
    window = Window(min(ends), max(ends))
    if window.hi - window.lo + 1 > MAX_TABLE:
        raise ValidationError(f"translated window {window} is too large")
    image = FiniteSetWindow.from_members(window, star_translate(sp, n, A.members()))
    before = analyze_additive(A, p)
    after = analyze_additive(image, p)
    return {
        "l": sp.l, "k": sp.k, "n": n,
        "scale": sp.l * n + sp.k,
        "window": [window.lo, window.hi],
        "A": {"syndetic": before.syndetic, "pws": before.pws},
        "n*A": {"syndetic": after.syndetic, "pws": after.pws},
    }


# ------------------------------
# Property checks
# ------------------------------
def check_duality(A: FiniteSetWindow, g: int) -> bool:
    """thick(A) with L = g iff not syndetic(complement), on windows at least g wide."""
    A = _as_set(A)
    if A.membership.size < g:
        raise ValidationError("duality is stated for windows at least g wide")
    p = LargenessParams(gap=g, run=g, translate_bound=1)
    return analyze_additive(A, p).thick == (not analyze_additive(A.complement(), p).syndetic)


def check_translation_invariance(A: FiniteSetWindow, c: int, p: LargenessParams) -> bool:
    return analyze_additive(A, p).pws == analyze_additive(A.shifted(c), p).pws


def check_monotonicity(chain, analyzer, p: LargenessParams) -> bool:
    """Along A ⊆ A' ⊆ A'' no verdict may go from True to False."""
    previous = None
    for A in chain:
        report = analyzer(A, p)
        verdicts = (report.thick, report.syndetic, report.pws)
        if previous is not None and any(a and not b for a, b in zip(previous, verdicts)):
            return False
        previous = verdicts
    return True


def run_transfer_corpus(t_values=range(-5, 6), count: int = 100, width: int = 2 ** 12,
                        density: float = 0.5, seed: int = 0, p: LargenessParams = None) -> dict:
    """
    Seeded random sets on [1, width·m] (interior width ``width``): pullback
    agreement and additive pws translation invariance for every t.
    """
    p = p or LargenessParams(gap=4, run=16, translate_bound=3)
    rng = np.random.default_rng(seed)
    window = Window(1, width * p.translate_bound)
    rows = []
    for t in t_values:
        agree = invariant = 0
        for _ in range(count):
            A = FiniteSetWindow.random(window, density, rng)
            result = pullback_compare(A, int(t), p)
            agree += result.agreement
            invariant += result.translation_invariant
        rows.append({"t": int(t), "sets": count, "agreement": agree, "translation_invariant": invariant})
    passed = all(r["agreement"] == r["translation_invariant"] == count for r in rows)
    log(LOG_PREFIX, f"{'✅' if passed else '❌'} transfer corpus: {len(rows)} shifts x {count} sets")
    return {"experiment": "transfer_corpus", "seed": seed, "width": width, "density": density,
            "params": p.to_dict(), "rows": rows, "passed": passed}


def run_ap_content_experiment(count: int = 20, width: int = 2 ** 12, t: int = 0, density: float = 0.5,
                              seed: int = 0, p: LargenessParams = None, ap_cap: int = 4) -> dict:
    """
    For seeded A whose ⊙_t-pws verdict is true, record whether A holds a
    3-term AP. Reported only; a miss is logged, not raised.
    """
    p = p or LargenessParams(gap=4, run=16, translate_bound=3)
    rng = np.random.default_rng(seed)
    window = Window(t + 1, t + width)
    sp = AffineShift(t).star_params
    pws_true = ap_ok = 0
    misses = []
    for i in range(count):
        A = FiniteSetWindow.random(window, density, rng)
        if not analyze_star(A, sp, p).pws:
            continue
        pws_true += 1
        members = A.members()
        length, progression = ap_longest(members, ap_cap) if members else (0, ())
        if length >= 3:
            ap_ok += 1
        else:
            misses.append({"index": i, "longest": length})
            log(LOG_PREFIX, f"⚠️ set {i}: ⊙_{t}-pws but longest AP is {length}")
    return {"experiment": "ap_content", "seed": seed, "t": t, "width": width, "tested": count,
            "pws_true": pws_true, "ap_ok": ap_ok, "misses": misses}
