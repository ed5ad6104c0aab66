import os
import sys

LOG_PREFIX = "[utils]"

INT64_MIN = -(2 ** 63)
INT64_MAX = 2 ** 63 - 1


# ------------------------------
# Errors
# ------------------------------
class ValidationError(ValueError):
    """Malformed pattern, config, argument or parameter set."""


class DomainError(ValueError):
    """Operation called outside its mathematical domain."""


class GuardExceededError(ValueError):
    """A brute-force guard or a memory bound was exceeded."""


class ArithmeticOverflowError(OverflowError):
    """Fixed-width 64-bit checked arithmetic left the int64 range."""


# ------------------------------
# Logging
# ------------------------------
def log(prefix: str, message: str):
    # stdout is reserved for reports
    if env_flag("PR_QUIET"):
        return
    print(f"{prefix} {message}", file=sys.stderr, flush=True)


# ------------------------------
# Env helpers
# ------------------------------
def env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw)
    except ValueError:
        log(LOG_PREFIX, f"⚠️ Ignoring non-integer {name}={raw!r}, using {default}")
        return default


def env_flag(name: str, default: bool = False) -> bool:
    raw = os.environ.get(name)
    if raw is None:
        return default
    return raw.strip().lower() in ("1", "true", "yes", "on")


# ------------------------------
# Checked 64-bit arithmetic
# ------------------------------
def checked(value: int, what: str = "value") -> int:
    """
    Return value unchanged if it fits a signed 64-bit integer.

    Raises ArithmeticOverflowError naming the operation otherwise.
    """
    if value < INT64_MIN or value > INT64_MAX:
        raise ArithmeticOverflowError(f"{what} = {value} does not fit in 64 bits")
    return value


def checked_mul(a: int, b: int, what: str = "product") -> int:
    return checked(checked(a, what) * checked(b, what), what)


def checked_add(a: int, b: int, what: str = "sum") -> int:
    return checked(checked(a, what) + checked(b, what), what)


# ------------------------------
# Formatting helpers
# ------------------------------
def parse_int_list(text: str) -> list:
    """
    Parse "1,2,3" (or "1 2 3") into [1, 2, 3].
    Ranges "a-b" with a <= b are expanded.
    """
    if text is None:
        return []
    items = []
    for part in text.replace(" ", ",").split(","):
        part = part.strip()
        if not part:
            continue
        # "-3" is a negative number, "2-5" is a range
        if "-" in part[1:]:
            cut = part.index("-", 1)
            try:
                a, b = int(part[:cut]), int(part[cut + 1:])
            except ValueError:
                raise ValidationError(f"Not an integer range: {part!r}")
            if a > b:
                raise ValidationError(f"Empty range {part!r}")
            items.extend(range(a, b + 1))
            continue
        try:
            items.append(int(part))
        except ValueError:
            raise ValidationError(f"Not an integer: {part!r}")
    return items


def format_int_set(values) -> str:
    """Compact "{1,2,5}" rendering used in log lines."""
    return "{" + ",".join(str(v) for v in sorted(values)) + "}"


def format_classes(classes) -> str:
    """Render color classes as "{1,4 | 2,3}"."""
    return "{" + " | ".join(",".join(str(v) for v in sorted(c)) for c in classes) + "}"
