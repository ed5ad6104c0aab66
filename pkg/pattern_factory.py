"""
Pattern Factory - catalog of monochromatic configurations and equations
Supports: ap, polyvdw, schur, moreira, blm, sigma, glue, mixed, quad

Every pattern has a canonical textual name (grammar v1) that round-trips
through parse_pattern; the CLI, reports and CNF metadata only ever carry that
name.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from symmetric_algebra import IntPolynomial, StarParams
from utils import ValidationError, log

LOG_PREFIX = "[pattern_factory]"

GRAMMAR_VERSION = "v1"


# ------------------------------
# Pattern variants
# ------------------------------
@dataclass(frozen=True)
class APPattern:
    length: int
    kind: str = field(default="ap", init=False)

    def __post_init__(self):
        if self.length < 1:
            raise ValidationError("ap length must be >= 1")

    def canonical_name(self) -> str:
        return f"ap:{self.length}"


@dataclass(frozen=True)
class PolyVdWPattern:
    """{a} ∪ {a + p(d) : p ∈ F} with d >= 1."""
    polynomials: tuple
    kind: str = field(default="polyvdw", init=False)

    def __post_init__(self):
        if not self.polynomials:
            raise ValidationError("polyvdw needs at least one polynomial")
        for poly in self.polynomials:
            if not poly.zero_constant:
                raise ValidationError(f"polyvdw polynomial {poly.to_text()} has a constant term")
            if poly.degree == 0:
                raise ValidationError("polyvdw polynomials must be nonzero")

    def canonical_name(self) -> str:
        return "polyvdw:" + ",".join(p.to_text() for p in self.polynomials)


@dataclass(frozen=True)
class SchurPattern:
    """{x, y, x∘y} with ∘ one of +, ·, ⊛_{l,k}."""
    op: str
    star: StarParams = None
    distinct: bool = False
    kind: str = field(default="schur", init=False)

    def __post_init__(self):
        if self.op not in ("add", "mul", "star"):
            raise ValidationError(f"schur op must be add, mul or star, got {self.op!r}")
        if (self.op == "star") != (self.star is not None):
            raise ValidationError("schur:star needs parameters l,k (and only star takes them)")

    def canonical_name(self) -> str:
        name = f"schur:{self.op}"
        if self.op == "star":
            name += f":{self.star}"
        return name + (":distinct" if self.distinct else "")


@dataclass(frozen=True)
class MoreiraPattern:
    """{x, x+y, x·y}."""
    kind: str = field(default="moreira", init=False)

    def canonical_name(self) -> str:
        return "moreira"


@dataclass(frozen=True)
class BLMPattern:
    """{x, x+y+x·y, x·y}."""
    kind: str = field(default="blm", init=False)

    def canonical_name(self) -> str:
        return "blm"


@dataclass(frozen=True)
class SigmaPattern:
    t: int
    depth: int
    distinct: bool = False
    kind: str = field(default="sigma", init=False)

    def __post_init__(self):
        if self.depth < 1:
            raise ValidationError("sigma depth must be >= 1")

    def canonical_name(self) -> str:
        return f"sigma:t={self.t}:d={self.depth}" + (":distinct" if self.distinct else "")


@dataclass(frozen=True)
class GluePattern:
    """
    G-side = H-side with H = n-fold ⊛_{l,k}.

    side "poly":   x + P(y-x)
    side "mean":   (a+b)/2
    side "system": x_i - P_i(y-x) for every i
    """
    side: str
    star: StarParams
    polynomials: tuple = ()
    n: int = 2
    allow_equal: bool = False
    kind: str = field(default="glue", init=False)

    def __post_init__(self):
        if self.side not in ("poly", "mean", "system"):
            raise ValidationError(f"glue side must be poly, mean or system, got {self.side!r}")
        if not self.star.has_identity:
            raise ValidationError(f"glue needs l | (k-1), got (l,k)=({self.star})")
        if self.n < 1:
            raise ValidationError("glue n must be >= 1")
        if self.side == "mean" and self.polynomials:
            raise ValidationError("glue:mean takes no polynomial")
        if self.side == "poly" and len(self.polynomials) != 1:
            raise ValidationError("glue:poly takes exactly one polynomial")
        if self.side == "system" and len(self.polynomials) < 1:
            raise ValidationError("glue:system needs at least one polynomial")
        for poly in self.polynomials:
            if not poly.zero_constant:
                raise ValidationError(f"glue polynomial {poly.to_text()} must have no constant term")

    def canonical_name(self) -> str:
        if self.side == "mean":
            head = "glue:mean"
        else:
            head = f"glue:{self.side}=" + ",".join(p.to_text() for p in self.polynomials)
        name = f"{head}:star={self.star}"
        if self.n != 2:
            name += f":n={self.n}"
        return name + (":allow-equal" if self.allow_equal else "")


@dataclass(frozen=True)
class MixedPattern:
    """σ_t(⟨x⟩) ∪ σ_t(⟨F·x⟩) ∪ σ_t(⟨F⟩) with F_i drawn from a family pattern."""
    family: object
    t: int
    depth: int
    kind: str = field(default="mixed", init=False)

    def __post_init__(self):
        if self.depth not in (1, 2):
            raise ValidationError(f"mixed depth must be 1 or 2, got {self.depth}")
        if self.family.kind in ("mixed", "quad"):
            raise ValidationError("mixed family must be an equation or progression pattern")

    def canonical_name(self) -> str:
        return f"mixed:t={self.t}:d={self.depth}:family={self.family.canonical_name()}"


@dataclass(frozen=True)
class QuadPattern:
    """FS(x) ∪ FP(w) ∪ (t + FS_{-t}(y)) ∪ (t + σ_{-t}(z))."""
    t: int
    depth: int
    kind: str = field(default="quad", init=False)

    def __post_init__(self):
        if self.depth not in (1, 2):
            raise ValidationError(f"quad depth must be 1 or 2, got {self.depth}")

    def canonical_name(self) -> str:
        return f"quad:t={self.t}:d={self.depth}"


# ------------------------------
# Grammar
# ------------------------------
def _int(text: str, what: str) -> int:
    try:
        return int(text)
    except (TypeError, ValueError):
        raise ValidationError(f"{what} must be an integer, got {text!r}")


def _star(text: str) -> StarParams:
    parts = text.split(",")
    if len(parts) != 2:
        raise ValidationError(f"star parameters must be 'l,k', got {text!r}")
    return StarParams(_int(parts[0], "l"), _int(parts[1], "k"))


def _options(parts: list) -> tuple:
    """Split "key=value" options from bare flags."""
    values, flags = {}, set()
    for part in parts:
        if "=" in part:
            key, value = part.split("=", 1)
            key = key.strip()
            if key in values:
                raise ValidationError(f"option {key!r} given twice")
            values[key] = value.strip()
        elif part:
            flags.add(part.strip())
    return values, flags


def _reject_unknown(values: dict, flags: set, allowed_values: set, allowed_flags: set, head: str):
    unknown = (set(values) - allowed_values) | (flags - allowed_flags)
    if unknown:
        raise ValidationError(f"unknown option(s) for {head}: {', '.join(sorted(unknown))}")


def _polys(text: str) -> tuple:
    return tuple(IntPolynomial.parse(p) for p in text.split(",") if p.strip())


def parse_pattern(text: str):
    """
    Parse a canonical pattern name.

    Args:
        text: e.g. 'ap:3', 'schur:star:1,1', 'glue:poly=d^2:star=1,1', 'quad:t=0:d=2'

    Returns:
        One of the pattern dataclasses
    """
    if text is None or not text.strip():
        raise ValidationError("empty pattern name")
    text = text.strip()
    head, _, rest = text.partition(":")
    head = head.lower()

    if head == "mixed":
        # family= swallows the remainder, it has colons of its own
        before, sep, family_text = rest.partition("family=")
        if not sep:
            raise ValidationError("mixed needs family=<pattern>")
        values, flags = _options([p for p in before.split(":") if p])
        _reject_unknown(values, flags, {"t", "d"}, set(), head)
        return MixedPattern(parse_pattern(family_text), _int(values.get("t", "0"), "t"),
                            _int(values.get("d", "1"), "d"))

    parts = [p for p in rest.split(":")] if rest else []

    if head == "ap":
        if len(parts) != 1:
            raise ValidationError("ap takes exactly one argument, e.g. ap:3")
        return APPattern(_int(parts[0], "ap length"))

    if head == "polyvdw":
        if len(parts) != 1:
            raise ValidationError("polyvdw takes a comma separated polynomial list")
        return PolyVdWPattern(_polys(parts[0]))

    if head == "schur":
        if not parts:
            raise ValidationError("schur needs an operation: add, mul or star:l,k")
        op = parts[0].lower()
        tail = parts[1:]
        star = None
        if op == "star":
            if not tail:
                raise ValidationError("schur:star needs l,k")
            star, tail = _star(tail[0]), tail[1:]
        values, flags = _options(tail)
        _reject_unknown(values, flags, set(), {"distinct"}, head)
        return SchurPattern(op, star, "distinct" in flags)

    if head in ("moreira", "blm"):
        if parts:
            raise ValidationError(f"{head} takes no arguments")
        return MoreiraPattern() if head == "moreira" else BLMPattern()

    if head == "sigma":
        values, flags = _options(parts)
        _reject_unknown(values, flags, {"t", "d"}, {"distinct"}, head)
        return SigmaPattern(_int(values.get("t", "0"), "t"), _int(values.get("d", "2"), "d"),
                            "distinct" in flags)

    if head == "glue":
        if parts and parts[0] == "mean":
            side, polys, tail = "mean", (), parts[1:]
        else:
            values, _ = _options(parts[:1])
            if "poly" in values:
                side, polys = "poly", _polys(values["poly"])
            elif "system" in values:
                side, polys = "system", _polys(values["system"])
            else:
                raise ValidationError("glue needs poly=P, system=P1,P2 or mean")
            tail = parts[1:]
        values, flags = _options(tail)
        _reject_unknown(values, flags, {"star", "n"}, {"allow-equal"}, head)
        if "star" not in values:
            raise ValidationError("glue needs star=l,k")
        return GluePattern(side, _star(values["star"]), polys, _int(values.get("n", "2"), "n"),
                           "allow-equal" in flags)

    if head == "quad":
        values, flags = _options(parts)
        _reject_unknown(values, flags, {"t", "d"}, set(), head)
        return QuadPattern(_int(values.get("t", "0"), "t"), _int(values.get("d", "1"), "d"))

    raise ValidationError(f"unknown pattern family {head!r} (grammar {GRAMMAR_VERSION})")


# ------------------------------
# Family dispatch
# ------------------------------
def get_enumerator(pattern):
    """
    Get the solution enumerator for a pattern family.

    Args:
        pattern: parsed pattern

    Returns:
        Callable (pattern, window) -> list of raw solution records
    """
    import pattern_engine

    enumerators = {
        "ap": pattern_engine.enumerate_ap,
        "polyvdw": pattern_engine.enumerate_polyvdw,
        "schur": pattern_engine.enumerate_schur,
        "moreira": pattern_engine.enumerate_moreira,
        "blm": pattern_engine.enumerate_blm,
        "sigma": pattern_engine.enumerate_sigma,
        "glue": pattern_engine.enumerate_glue,
        "mixed": pattern_engine.enumerate_mixed,
        "quad": pattern_engine.enumerate_quad,
    }
    if pattern.kind not in enumerators:
        raise ValidationError(f"no enumerator for pattern family {pattern.kind!r}")
    log(LOG_PREFIX, f"🔍 Using {pattern.kind} enumerator for {pattern.canonical_name()}")
    return enumerators[pattern.kind]


def catalog_examples() -> list:
    """One representative name per family, as used by the oracle tests."""
    return [
        "ap:3",
        "polyvdw:d,d^2",
        "schur:add",
        "schur:mul",
        "schur:star:1,1",
        "moreira",
        "blm",
        "sigma:t=1:d=2",
        "glue:poly=d^2:star=1,1",
        "glue:mean:star=1,1",
        "glue:system=d,2*d:star=1,1",
        "mixed:t=1:d=1:family=ap:3",
        "quad:t=0:d=1",
    ]
