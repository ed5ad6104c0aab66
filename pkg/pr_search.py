"""
Finite avoidability search: decide, brute-force oracle and Rado-type numbers.

Window integers are assigned in order. Solution tuples are indexed by their
largest position, so assigning position n only has to look at tuples that n
completes. The subtree search is a numba kernel released from the GIL; the
tree is split at a fixed depth and the prefixes are fanned out over a thread
pool in lexicographic batches, so the first avoiding leaf is the same for any
worker count.
"""
from __future__ import annotations

import asyncio
import itertools
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from numba import njit

from pattern_engine import Coloring, Window, enumerate_solutions, find_monochromatic
from pattern_factory import parse_pattern
from utils import GuardExceededError, ValidationError, env_flag, env_int, format_classes, log

LOG_PREFIX = "[pr_search]"

DEFAULT_SPLIT_DEPTH = 10
BRUTE_FORCE_LIMIT = 2 ** 24


# ------------------------------
# Results
# ------------------------------
@dataclass(frozen=True)
class SearchOutcome:
    pattern: str
    r: int
    window: Window
    avoidable: bool
    coloring: Coloring = None
    stats: dict = field(default_factory=dict)

    @property
    def verdict(self) -> str:
        return "Avoidable" if self.avoidable else "Unavoidable"

    def to_dict(self) -> dict:
        return {
            "pattern": self.pattern,
            "r": self.r,
            "window": self.window.to_dict(),
            "verdict": self.verdict,
            "coloring": self.coloring.classes() if self.coloring is not None else None,
            "stats": self.stats,
        }


@dataclass(frozen=True)
class RadoResult:
    """
    n_star: least unavoidable N, or None when N_max was reached first.
    certificate: avoiding coloring at n_star - 1 (or at N_max).
    """
    pattern: str
    r: int
    n_max: int
    domain: str
    n_star: int = None
    certificate: Coloring = None
    history: tuple = ()
    stats: dict = field(default_factory=dict)

    @property
    def bound_exceeded(self) -> bool:
        return self.n_star is None

    def to_dict(self) -> dict:
        return {
            "pattern": self.pattern,
            "r": self.r,
            "n_max": self.n_max,
            "domain": self.domain,
            "n_star": self.n_star,
            "bound_exceeded": self.bound_exceeded,
            "certificate": self.certificate.to_dict() if self.certificate is not None else None,
            "history": [{"n": n, "verdict": v} for n, v in self.history],
            "stats": self.stats,
        }


# ------------------------------
# Tuple index
# ------------------------------
@dataclass(frozen=True)
class TupleIndex:
    """
    CSR layout: tuples completed at position p are tup_ptr[p]..tup_ptr[p+1];
    their other members are members[mem_ptr[t]:mem_ptr[t+1]].
    """
    window: Window
    tup_ptr: np.ndarray
    mem_ptr: np.ndarray
    members: np.ndarray
    count: int
    pinned: int = 0


def distinct_occupied(solutions) -> list:
    """Distinct occupied sets, first occurrence order."""
    seen = set()
    out = []
    for s in solutions:
        if s.occupied not in seen:
            seen.add(s.occupied)
            out.append(s.occupied)
    return out


def pinned_position(window: Window) -> int:
    """Position whose color is fixed to 0: the integer 1 when present, else the first."""
    return window.index(1) if 1 in window else 0


def build_tuple_index(solutions, window: Window) -> TupleIndex:
    groups = [[] for _ in range(window.size)]
    for occupied in distinct_occupied(solutions):
        positions = sorted(window.index(v) for v in occupied)
        groups[positions[-1]].append(positions[:-1])
    tup_ptr = np.zeros(window.size + 1, dtype=np.int64)
    mem_ptr = [0]
    members = []
    for p, group in enumerate(groups):
        tup_ptr[p + 1] = tup_ptr[p] + len(group)
        for others in group:
            members.extend(others)
            mem_ptr.append(len(members))
    return TupleIndex(
        window,
        tup_ptr,
        np.asarray(mem_ptr, dtype=np.int64),
        np.asarray(members, dtype=np.int64),
        int(tup_ptr[-1]),
        pinned_position(window),
    )


# ------------------------------
# Kernel
# ------------------------------
@njit(cache=True, nogil=True)
def _subtree_search(n, r, tup_ptr, mem_ptr, members, colors, start, pinned):
    """
    Depth-first search over positions start..n-1 with colors[:start] fixed.

    Returns (found, nodes, max_depth); on success colors holds the least
    avoiding completion.
    """
    nodes = 0
    max_depth = start
    if start >= n:
        return True, nodes, max_depth
    next_color = np.zeros(n + 1, dtype=np.int64)
    pos = start
    while pos >= start:
        limit = 1 if pos == pinned else r
        chosen = -1
        c = next_color[pos]
        while c < limit:
            ok = True
            for t in range(tup_ptr[pos], tup_ptr[pos + 1]):
                mono = True
                for m in range(mem_ptr[t], mem_ptr[t + 1]):
                    if colors[members[m]] != c:
                        mono = False
                        break
                if mono:
                    ok = False
                    break
            if ok:
                chosen = c
                break
            c += 1
        if chosen < 0:
            next_color[pos] = 0
            pos -= 1
            continue
        colors[pos] = chosen
        next_color[pos] = chosen + 1
        nodes += 1
        if pos + 1 > max_depth:
            max_depth = pos + 1
        if pos + 1 == n:
            return True, nodes, max_depth
        pos += 1
        next_color[pos] = 0
    return False, nodes, max_depth


def _admissible(index: TupleIndex, colors, pos: int, c: int) -> bool:
    for t in range(index.tup_ptr[pos], index.tup_ptr[pos + 1]):
        others = index.members[index.mem_ptr[t]:index.mem_ptr[t + 1]]
        if all(colors[m] == c for m in others):
            return False
    return True


def split_prefixes(index: TupleIndex, r: int, depth: int) -> tuple:
    """All consistent colorings of the first ``depth`` positions, lexicographic."""
    n = index.window.size
    depth = min(depth, n)
    prefixes = []
    nodes = 0
    colors = [0] * n

    def extend(pos):
        nonlocal nodes
        if pos == depth:
            prefixes.append(tuple(colors[:depth]))
            return
        for c in range(1 if pos == index.pinned else r):
            if _admissible(index, colors, pos, c):
                colors[pos] = c
                nodes += 1
                extend(pos + 1)

    extend(0)
    return prefixes, nodes


def _run_subtree(index: TupleIndex, r: int, prefix: tuple):
    colors = np.zeros(index.window.size, dtype=np.int64)
    colors[:len(prefix)] = prefix
    found, nodes, max_depth = _subtree_search(
        index.window.size, r, index.tup_ptr, index.mem_ptr, index.members, colors, len(prefix), index.pinned
    )
    return bool(found), (colors.copy() if found else None), int(nodes), int(max_depth)


async def _search_prefixes(index: TupleIndex, r: int, prefixes: list, workers: int):
    """Lexicographic batches of ``workers`` prefixes; stats stop at the winning prefix."""
    loop = asyncio.get_running_loop()
    nodes, max_depth = 0, 0
    with ThreadPoolExecutor(max_workers=workers) as pool:
        for start in range(0, len(prefixes), workers):
            batch = prefixes[start:start + workers]
            tasks = [loop.run_in_executor(pool, _run_subtree, index, r, prefix) for prefix in batch]
            results = await asyncio.gather(*tasks)
            for prefix, (found, colors, sub_nodes, sub_depth) in zip(batch, results):
                nodes += sub_nodes
                max_depth = max(max_depth, sub_depth, len(prefix))
                if found:
                    return colors, nodes, max_depth
    return None, nodes, max_depth


def search_index(index: TupleIndex, r: int, workers: int = None, split_depth: int = None):
    """
    Least avoiding coloring for a prebuilt index.

    Returns:
        (colors or None, stats dict)
    """
    workers = max(1, workers or env_int("PR_WORKERS", 1))
    split_depth = max(1, split_depth or env_int("PR_SPLIT_DEPTH", DEFAULT_SPLIT_DEPTH))
    prefixes, prefix_nodes = split_prefixes(index, r, split_depth)
    colors, nodes, max_depth = asyncio.run(_search_prefixes(index, r, prefixes, workers))
    stats = {
        "nodes": prefix_nodes + nodes,
        "max_depth": max_depth,
        "prefixes": len(prefixes),
        "split_depth": min(split_depth, index.window.size),
        "tuples": index.count,
    }
    return colors, stats


# ------------------------------
# Public operations
# ------------------------------
def _as_pattern(pattern):
    return parse_pattern(pattern) if isinstance(pattern, str) else pattern


def make_window(n: int, domain: str = "positive") -> Window:
    if n < 1:
        raise ValidationError("N must be >= 1")
    if domain == "positive":
        return Window.positive(n)
    if domain == "z":
        return Window.symmetric(n)
    raise ValidationError(f"domain must be 'positive' or 'z', got {domain!r}")


def decide(pattern, r: int, n: int, workers: int = None, domain: str = "positive",
           split_depth: int = None, solutions=None, timing: bool = None) -> SearchOutcome:
    """
    Decide whether some r-coloring of the window avoids every monochromatic solution.

    Args:
        pattern: pattern or canonical name
        r: number of colors
        n: window size parameter ([1,N], or [-N,N] without 0 for domain 'z')
        workers: thread count for the prefix fan-out (env PR_WORKERS)
        solutions: precomputed solution tuples on the window (used by rado_number)

    Returns:
        SearchOutcome with the lexicographically least avoiding coloring, if any
    """
    pattern = _as_pattern(pattern)
    if r < 1:
        raise ValidationError("r must be >= 1")
    window = make_window(n, domain)
    timing = env_flag("PR_REPORT_TIMING") if timing is None else timing
    started = time.perf_counter()
    if solutions is None:
        solutions = enumerate_solutions(pattern, window)
    index = build_tuple_index(solutions, window)
    colors, stats = search_index(index, r, workers, split_depth)
    if timing:
        stats["elapsed"] = round(time.perf_counter() - started, 6)

    if colors is None:
        log(LOG_PREFIX, f"✅ {pattern.canonical_name()} r={r} {window}: Unavoidable ({stats['nodes']} nodes)")
        return SearchOutcome(pattern.canonical_name(), r, window, False, None, stats)

    coloring = Coloring(window, r, tuple(int(c) for c in colors))
    witness = find_monochromatic(coloring, pattern)
    if witness is not None:
        raise RuntimeError(f"search returned a coloring with monochromatic {witness.solution.occupied}")
    log(LOG_PREFIX, f"⚠️ {pattern.canonical_name()} r={r} {window}: Avoidable {format_classes(coloring.classes())}")
    return SearchOutcome(pattern.canonical_name(), r, window, True, coloring, stats)


def brute_force_decide(pattern, r: int, n: int, domain: str = "positive") -> SearchOutcome:
    """
    Oracle: scan every coloring with the pinned position in color 0, lexicographically.
    """
    pattern = _as_pattern(pattern)
    if r < 1:
        raise ValidationError("r must be >= 1")
    window = make_window(n, domain)
    if r ** window.size > BRUTE_FORCE_LIMIT:
        raise GuardExceededError(f"brute force refuses r^N = {r}^{window.size} > 2^24")
    tuples = [[window.index(v) for v in occ] for occ in distinct_occupied(enumerate_solutions(pattern, window))]
    pin = pinned_position(window)
    checked = 0
    for tail in itertools.product(range(r), repeat=window.size - 1):
        colors = tail[:pin] + (0,) + tail[pin:]
        checked += 1
        if not any(len({colors[i] for i in t}) == 1 for t in tuples):
            coloring = Coloring(window, r, colors)
            return SearchOutcome(pattern.canonical_name(), r, window, True, coloring, {"colorings": checked})
    return SearchOutcome(pattern.canonical_name(), r, window, False, None, {"colorings": checked})


def _assert_monotone(history):
    seen_unavoidable = False
    for n, verdict in history:
        if verdict == "Unavoidable":
            seen_unavoidable = True
        elif seen_unavoidable:
            raise RuntimeError(f"verdict flipped back to Avoidable at N={n}")


def rado_number(pattern, r: int, n_max: int, workers: int = None, domain: str = "positive",
                sweep: bool = False, split_depth: int = None, timing: bool = None) -> RadoResult:
    """
    Least N <= n_max whose window is unavoidable.

    On positive windows the tuples are enumerated once on [1, n_max] and each
    N reuses those with reach <= N. ``sweep`` keeps deciding up to n_max and
    checks that the verdicts never return to Avoidable.
    """
    pattern = _as_pattern(pattern)
    if n_max < 1:
        raise ValidationError("N_max must be >= 1")
    timing = env_flag("PR_REPORT_TIMING") if timing is None else timing
    started = time.perf_counter()
    log(LOG_PREFIX, f"🚀 Rado search {pattern.canonical_name()} r={r} up to N={n_max} ({domain})")

    all_solutions = enumerate_solutions(pattern, make_window(n_max)) if domain == "positive" else None
    history = []
    n_star = None
    certificate = None
    nodes = 0
    for n in range(1, n_max + 1):
        solutions = [s for s in all_solutions if s.reach <= n] if all_solutions is not None else None
        outcome = decide(pattern, r, n, workers, domain, split_depth, solutions, timing=False)
        history.append((n, outcome.verdict))
        nodes += outcome.stats.get("nodes", 0)
        if outcome.avoidable:
            if n_star is None:
                certificate = outcome.coloring
            continue
        if n_star is None:
            n_star = n
        if not sweep:
            break
    _assert_monotone(history)

    stats = {"nodes": nodes, "decided": len(history)}
    if timing:
        stats["elapsed"] = round(time.perf_counter() - started, 6)
    if n_star is None:
        log(LOG_PREFIX, f"⚠️ No unavoidable window up to N={n_max}")
    else:
        log(LOG_PREFIX, f"✅ N* = {n_star} for {pattern.canonical_name()} with r={r}")
    return RadoResult(pattern.canonical_name(), r, n_max, domain, n_star, certificate, tuple(history), stats)
