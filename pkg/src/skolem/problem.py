"""Problem files: a sectioned ``key = value`` format.

    # Fibonacci numbers modulo 6
    [ring]
    characteristic = 6
    variables =
    ideal =

    [lrs]
    coefficients = 1, 1
    initial = 0, 1

    [primary_decomposition]      (optional; one line per component)
    component = x
    component = y

    [options]                    (optional)
    bound = 128
    certify_bound = 4096
    backend = auto
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import InvalidProblem, ParseError
from .poly import MultiPoly, format_poly, parse_poly

SECTIONS = ("ring", "lrs", "primary_decomposition", "options")
KEYS = {
    "ring": ("characteristic", "variables", "ideal"),
    "lrs": ("coefficients", "initial"),
    "primary_decomposition": ("component",),
    "options": ("bound", "certify_bound", "backend"),
}
BACKENDS = ("auto", "finite", "certify")
DEFAULT_OPTIONS = {"bound": 128, "certify_bound": 4096, "backend": "auto"}
_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*$")


@dataclass
class Problem:
    characteristic: int
    variables: tuple[str, ...]
    ideal: tuple[MultiPoly, ...]
    coefficients: tuple[MultiPoly, ...]
    initial: tuple[MultiPoly, ...]
    primary_decomposition: tuple[tuple[str, ...], ...] = ()
    options: dict = field(default_factory=lambda: dict(DEFAULT_OPTIONS))

    @property
    def order(self) -> int:
        return len(self.coefficients)

    def __eq__(self, other):
        if not isinstance(other, Problem):
            return NotImplemented
        return (
            self.characteristic == other.characteristic
            and self.variables == other.variables
            and self.ideal == other.ideal
            and self.coefficients == other.coefficients
            and self.initial == other.initial
            and self.primary_decomposition == other.primary_decomposition
            and self.options == other.options
        )

    @classmethod
    def build(cls, characteristic: int, coefficients, initial, variables=(), ideal=(), primary_decomposition=(), **options) -> "Problem":
        """Construct from polynomial strings (or ints)."""
        T = characteristic
        vs = tuple(variables)

        def P(x):
            return x if isinstance(x, MultiPoly) else parse_poly(str(x), vs, T)

        opts = dict(DEFAULT_OPTIONS)
        opts.update(options)
        prob = cls(
            T,
            vs,
            tuple(P(g) for g in ideal),
            tuple(P(c) for c in coefficients),
            tuple(P(c) for c in initial),
            tuple(tuple(c) for c in primary_decomposition),
            opts,
        )
        prob.validate()
        return prob

    def validate(self) -> None:
        if self.characteristic == 0:
            raise InvalidProblem(
                "characteristic zero is out of scope: the Skolem problem over Z is open"
            )
        if self.characteristic < 2:
            raise InvalidProblem("characteristic must be at least 2")
        if not self.coefficients:
            raise InvalidProblem("recurrence order must be positive")
        if len(self.coefficients) != len(self.initial):
            raise InvalidProblem(
                f"{len(self.coefficients)} coefficients but {len(self.initial)} initial terms"
            )
        if self.options.get("backend") not in BACKENDS:
            raise InvalidProblem(f"backend must be one of {', '.join(BACKENDS)}")
        for k in ("bound", "certify_bound"):
            if not isinstance(self.options.get(k), int) or self.options[k] < 1:
                raise InvalidProblem(f"{k} must be a positive integer")
        from .reduction import crt_split

        comps = crt_split(self.characteristic, self.variables, self.ideal, self.coefficients, self.initial)
        if all(c.lrs.coefficients[-1].is_zero() for c in comps):
            raise InvalidProblem("trailing coefficient is zero in the ring (a_d = 0)")


# -- parsing -------------------------------------------------------------------------


def _split_list(value: str, col: int) -> list[tuple[str, int]]:
    """Comma separated items with their 1-based columns."""
    if not value.strip():
        return []
    out = []
    pos = 0
    for piece in value.split(","):
        lead = len(piece) - len(piece.lstrip())
        out.append((piece.strip(), col + pos + lead))
        pos += len(piece) + 1
    return out


def parse_problem(text: str) -> Problem:
    sections: dict[str, dict[str, list[tuple[str, int, int]]]] = {}
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        stripped = line.strip()
        col0 = len(line) - len(line.lstrip()) + 1
        if stripped.startswith("["):
            if not stripped.endswith("]"):
                raise ParseError("unterminated section header", lineno, col0 + len(stripped), ["]"])
            name = stripped[1:-1].strip()
            if name not in SECTIONS:
                raise ParseError(f"unknown section [{name}]", lineno, col0 + 1, list(SECTIONS))
            if name in sections:
                raise ParseError(f"duplicate section [{name}]", lineno, col0, [])
            sections[name] = {}
            current = name
            continue
        if current is None:
            raise ParseError("content before the first section header", lineno, col0, ["[ring]"])
        if "=" not in line:
            raise ParseError("expected 'key = value'", lineno, col0 + len(stripped), ["="])
        key_part, value = line.split("=", 1)
        key = key_part.strip()
        if key not in KEYS[current]:
            raise ParseError(f"unknown key '{key}' in [{current}]", lineno, col0, list(KEYS[current]))
        vcol = len(key_part) + 2
        lead = len(value) - len(value.lstrip())
        entries = sections[current].setdefault(key, [])
        if entries and key != "component":
            raise ParseError(f"duplicate key '{key}'", lineno, col0, [])
        entries.append((value.strip(), lineno, vcol + lead))

    for name in ("ring", "lrs"):
        if name not in sections:
            raise ParseError(f"missing section [{name}]", len(text.splitlines()) + 1, 1, [f"[{name}]"])

    def need(sec, key):
        if key not in sections[sec]:
            raise ParseError(f"missing key '{key}' in [{sec}]", len(text.splitlines()) + 1, 1, [key])
        return sections[sec][key][0]

    cval, cline, ccol = need("ring", "characteristic")
    if not re.fullmatch(r"\d+", cval):
        raise ParseError("characteristic must be a nonnegative integer", cline, ccol, ["integer"])
    T = int(cval)
    if T == 0:
        raise InvalidProblem("characteristic zero is out of scope: the Skolem problem over Z is open")
    if T == 1:
        raise ParseError("characteristic must be at least 2", cline, ccol, ["integer >= 2"])

    variables: list[str] = []
    if "variables" in sections["ring"]:
        vval, vline, vcol = sections["ring"]["variables"][0]
        for name, col in _split_list(vval, vcol):
            if not _IDENT.match(name):
                raise ParseError(f"invalid variable name '{name}'", vline, col, ["identifier"])
            if name in variables:
                raise ParseError(f"duplicate variable '{name}'", vline, col, [])
            variables.append(name)
    vs = tuple(variables)

    def polys(sec, key, required=True):
        if key not in sections[sec]:
            if required:
                need(sec, key)
            return []
        val, line, col = sections[sec][key][0]
        return [parse_poly(item, vs, T, line, c) for item, c in _split_list(val, col)]

    ideal = polys("ring", "ideal", required=False)
    coeffs = polys("lrs", "coefficients")
    init = polys("lrs", "initial")
    if not coeffs:
        cl = sections["lrs"]["coefficients"][0]
        raise ParseError("recurrence needs at least one coefficient", cl[1], cl[2], ["polynomial"])
    if len(coeffs) != len(init):
        il = sections["lrs"]["initial"][0]
        raise ParseError(
            f"{len(coeffs)} coefficients but {len(init)} initial terms", il[1], il[2], [f"{len(coeffs)} polynomials"]
        )
    decomposition = []
    for val, line, col in sections.get("primary_decomposition", {}).get("component", []):
        items = _split_list(val, col)
        if not items:
            raise ParseError("empty component", line, col, ["polynomial"])
        decomposition.append(tuple(item for item, _ in items))

    options = dict(DEFAULT_OPTIONS)
    for key, entries in sections.get("options", {}).items():
        val, line, col = entries[0]
        if key in ("bound", "certify_bound"):
            if not re.fullmatch(r"\d+", val) or int(val) < 1:
                raise ParseError(f"{key} must be a positive integer", line, col, ["integer"])
            options[key] = int(val)
        else:
            if val not in BACKENDS:
                raise ParseError(f"unknown backend '{val}'", line, col, list(BACKENDS))
            options[key] = val

    prob = Problem(T, vs, tuple(ideal), tuple(coeffs), tuple(init), tuple(decomposition), options)
    prob.validate()
    return prob


def emit_problem(problem: Problem) -> str:
    def plist(ps):
        return ", ".join(format_poly(p) for p in ps)

    lines = [
        "[ring]",
        f"characteristic = {problem.characteristic}",
        f"variables = {', '.join(problem.variables)}",
        f"ideal = {plist(problem.ideal)}",
        "",
        "[lrs]",
        f"coefficients = {plist(problem.coefficients)}",
        f"initial = {plist(problem.initial)}",
    ]
    if problem.primary_decomposition:
        lines += ["", "[primary_decomposition]"]
        lines += [f"component = {', '.join(c)}" for c in problem.primary_decomposition]
    lines += ["", "[options]"]
    lines += [f"{k} = {problem.options[k]}" for k in ("bound", "certify_bound", "backend")]
    return "\n".join(lines) + "\n"
