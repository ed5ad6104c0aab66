"""
DIMACS CNF export of avoidability problems and model checking.

Variable of (integer i, color c) is pos(i)·r + c + 1, where pos(i) = i - lo on
positive windows. The document is satisfiable iff some r-coloring of the
window has no monochromatic solution tuple.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from pysat.solvers import Solver

from pattern_engine import Coloring, Window, enumerate_solutions, find_monochromatic
from pattern_factory import GRAMMAR_VERSION, parse_pattern
from pr_search import BRUTE_FORCE_LIMIT, distinct_occupied, make_window
from utils import GuardExceededError, ValidationError, format_int_set, log

LOG_PREFIX = "[cnf_export]"

MAP_RULE = "(i-lo)*r+c+1"


@dataclass(frozen=True)
class CnfDocument:
    pattern: str
    n: int
    r: int
    window: Window
    num_vars: int
    clauses: tuple

    def variable(self, i: int, c: int) -> int:
        return self.window.index(i) * self.r + c + 1

    def decode(self, var: int) -> tuple:
        pos, c = divmod(abs(var) - 1, self.r)
        return self.window.value_at(pos), c

    @property
    def comments(self) -> list:
        # ℤ mode skips 0, so positions are no longer i - lo past it
        rule = "pos(i)*r+c+1" if self.window.exclude_zero else MAP_RULE
        return [
            f"pattern={self.pattern} n={self.n} r={self.r} map={rule}",
            f"lo={self.window.lo} hi={self.window.hi} exclude_zero={int(self.window.exclude_zero)} grammar={GRAMMAR_VERSION}",
        ]

    def to_dimacs(self) -> str:
        lines = [f"c {line}" for line in self.comments]
        lines.append(f"p cnf {self.num_vars} {len(self.clauses)}")
        lines += [" ".join(str(lit) for lit in clause) + " 0" for clause in self.clauses]
        return "\n".join(lines) + "\n"

    def describe_clause(self, index: int) -> str:
        clause = self.clauses[index]
        decoded = [self.decode(lit) for lit in clause]
        values = {v for v, _ in decoded}
        if all(lit > 0 for lit in clause):
            return f"at-least-one color for {decoded[0][0]}"
        if len(clause) == 2 and len(values) == 1:
            return f"at-most-one color for {decoded[0][0]} (colors {decoded[0][1]},{decoded[1][1]})"
        return f"tuple {format_int_set(values)} not all color {decoded[0][1]}"


@dataclass(frozen=True)
class ModelCheck:
    accepted: bool
    coloring: Coloring = None
    violated_index: int = None
    violated_clause: tuple = None
    reason: str = ""

    def to_dict(self) -> dict:
        return {
            "accepted": self.accepted,
            "coloring": self.coloring.classes() if self.coloring is not None else None,
            "violated_clause": list(self.violated_clause) if self.violated_clause else None,
            "violated_index": self.violated_index,
            "reason": self.reason,
        }


# ------------------------------
# Export / import
# ------------------------------
def export_cnf(pattern, r: int, n: int, domain: str = "positive") -> CnfDocument:
    """
    Clauses: per integer one at-least-one clause and r(r-1)/2 at-most-one
    clauses, then per distinct solution tuple and color one clause forbidding
    that tuple in that color.
    """
    pattern = parse_pattern(pattern) if isinstance(pattern, str) else pattern
    if r < 1:
        raise ValidationError("r must be >= 1")
    window = make_window(n, domain)
    name = pattern.canonical_name()
    var = lambda i, c: window.index(i) * r + c + 1  # noqa: E731

    clauses = []
    for i in window.values():
        clauses.append(tuple(var(i, c) for c in range(r)))
        for c1, c2 in itertools.combinations(range(r), 2):
            clauses.append((-var(i, c1), -var(i, c2)))
    tuples = distinct_occupied(enumerate_solutions(pattern, window))
    for occupied in tuples:
        for c in range(r):
            clauses.append(tuple(-var(i, c) for i in occupied))
    doc = CnfDocument(name, n, r, window, window.size * r, tuple(clauses))
    log(LOG_PREFIX, f"✅ {name} n={n} r={r}: {doc.num_vars} variables, {len(clauses)} clauses ({len(tuples)} tuples)")
    return doc


def parse_dimacs(text: str) -> CnfDocument:
    """Read a document written by to_dimacs (metadata comes from the comment lines)."""
    meta = {}
    header = None
    clauses = []
    current = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("c"):
            for token in line[1:].split():
                if "=" in token:
                    key, value = token.split("=", 1)
                    meta[key] = value
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise ValidationError(f"bad DIMACS header: {line!r}")
            header = (int(parts[2]), int(parts[3]))
            continue
        for token in line.split():
            lit = int(token)
            if lit == 0:
                clauses.append(tuple(current))
                current = []
            else:
                current.append(lit)
    if header is None:
        raise ValidationError("DIMACS text has no 'p cnf' header")
    missing = {"pattern", "n", "r", "lo", "hi"} - set(meta)
    if missing:
        raise ValidationError(f"DIMACS comments lack {', '.join(sorted(missing))}")
    if len(clauses) != header[1]:
        raise ValidationError(f"header announces {header[1]} clauses, found {len(clauses)}")
    window = Window(int(meta["lo"]), int(meta["hi"]), meta.get("exclude_zero", "0") == "1")
    return CnfDocument(meta["pattern"], int(meta["n"]), int(meta["r"]), window, header[0], tuple(clauses))


def parse_model(text: str) -> list:
    """Literals from DIMACS 'v' lines (bare integer lines are accepted too)."""
    literals = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line[0] in "cs":
            continue
        if line.startswith("v"):
            line = line[1:]
        try:
            literals.extend(int(tok) for tok in line.split() if tok != "0")
        except ValueError:
            raise ValidationError(f"model line is not a literal list: {raw!r}")
    return literals


def coloring_to_model(doc: CnfDocument, coloring: Coloring) -> list:
    model = []
    for i, color in zip(doc.window.values(), coloring.colors):
        for c in range(doc.r):
            lit = doc.variable(i, c)
            model.append(lit if c == color else -lit)
    return model


def random_models(doc: CnfDocument, count: int, seed: int = 0) -> list:
    """Seeded exactly-one assignments, i.e. random colorings."""
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        colors = tuple(rng.randrange(doc.r) for _ in range(doc.window.size))
        out.append(coloring_to_model(doc, Coloring(doc.window, doc.r, colors)))
    return out


# ------------------------------
# Model checking
# ------------------------------
def validate_model(doc: CnfDocument, assignment) -> ModelCheck:
    """
    Reject any assignment violating a clause (naming it); otherwise rebuild
    the coloring and rescan it with find_monochromatic.
    """
    truth = {}
    for lit in assignment:
        var = abs(int(lit))
        if var == 0 or var > doc.num_vars:
            raise ValidationError(f"literal {lit} outside 1..{doc.num_vars}")
        if var in truth and truth[var] != (lit > 0):
            raise ValidationError(f"variable {var} assigned both ways")
        truth[var] = lit > 0
    if len(truth) != doc.num_vars:
        raise ValidationError(f"assignment covers {len(truth)} of {doc.num_vars} variables")

    for index, clause in enumerate(doc.clauses):
        if not any(truth[abs(lit)] == (lit > 0) for lit in clause):
            reason = f"clause {index + 1} violated: {doc.describe_clause(index)}"
            log(LOG_PREFIX, f"❌ {reason}")
            return ModelCheck(False, None, index, clause, reason)

    colors = []
    for i in doc.window.values():
        colors.append(next(c for c in range(doc.r) if truth[doc.variable(i, c)]))
    coloring = Coloring(doc.window, doc.r, tuple(colors))
    witness = find_monochromatic(coloring, parse_pattern(doc.pattern))
    if witness is not None:
        reason = f"coloring has monochromatic {format_int_set(witness.solution.occupied)}"
        log(LOG_PREFIX, f"❌ {reason}")
        return ModelCheck(False, coloring, None, None, reason)
    log(LOG_PREFIX, "✅ Model accepted, coloring rescanned clean")
    return ModelCheck(True, coloring, None, None, "model satisfies every clause")


def satisfiable_by_enumeration(doc: CnfDocument):
    """
    Decide the document by walking all r^N exactly-one assignments.

    Returns:
        (satisfiable, least satisfying model or None)
    """
    size = doc.window.size
    if doc.r ** size > BRUTE_FORCE_LIMIT:
        raise GuardExceededError(f"model enumeration refuses r^N = {doc.r}^{size} > 2^24")
    forbidden = []
    for clause in doc.clauses:
        if all(lit < 0 for lit in clause) and not (len(clause) == 2 and len({doc.decode(lit)[0] for lit in clause}) == 1):
            decoded = [doc.decode(lit) for lit in clause]
            forbidden.append(([doc.window.index(v) for v, _ in decoded], decoded[0][1]))
    for colors in itertools.product(range(doc.r), repeat=size):
        if not any(all(colors[p] == c for p in positions) for positions, c in forbidden):
            return True, coloring_to_model(doc, Coloring(doc.window, doc.r, colors))
    return False, None


def solve_cnf(doc: CnfDocument, solver_name: str = "cadical195") -> ModelCheck:
    """Run an external SAT solver (python-sat) and validate what it returns."""
    log(LOG_PREFIX, f"🚀 Solving {doc.num_vars} vars / {len(doc.clauses)} clauses with {solver_name}")
    with Solver(name=solver_name, bootstrap_with=[list(c) for c in doc.clauses]) as solver:
        if not solver.solve():
            log(LOG_PREFIX, "⚠️ Solver reports UNSAT")
            return ModelCheck(False, None, None, None, "unsatisfiable")
        model = solver.get_model()
    return validate_model(doc, model)
