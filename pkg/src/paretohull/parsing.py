"""Readers and writers for LP and MPS interchange files.

Both dialects allow several objective rows: the LP reader takes every line of
the objective section as one objective, the MPS reader takes every N row.
The writers emit what the readers accept, with enough precision (17
significant digits) that write -> parse reproduces every coefficient exactly.

Dialect notes, where conventions differ between tools:
  * default bounds are [0, +inf) for every column, integer columns included;
  * an upper bound below zero does not silently drop the lower bound to -inf;
  * constants are folded into a constraint's right-hand side but are an
    error in an objective;
  * quadratic terms live in ``[ ... ] / 2`` brackets (LP only) and make the
    row or objective quadratic; MPS files stay linear.
"""

from __future__ import annotations

from dataclasses import dataclass
import math
import pathlib
import re

import numpy as np

from .model import (
    Constraint,
    MAX,
    MIN,
    Problem,
    SENSE_EQ,
    SENSE_GE,
    SENSE_LE,
)


@dataclass(frozen=True)
class SourceLocation:
    file: str
    line: int
    column: int

    def __str__(self):
        return f"{self.file}:{self.line}:{self.column}"


class ParseError(Exception):
    def __init__(self, message: str, location: SourceLocation):
        super().__init__(f"{location}: {message}")
        self.message = message
        self.location = location


# ---------------------------------------------------------------------------
# LP reader


@dataclass(frozen=True)
class _Token:
    kind: str  # num | name | op
    text: str
    location: SourceLocation


_TOKEN_RE = re.compile(
    r"(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z0-9_.]*)"
    r"|(?P<op><=|>=|=<|=>|[<>=+\-*/^\[\]:])"
    r"|(?P<ws>\s+)"
    r"|(?P<bad>.)"
)

_OBJ_SECTIONS = {
    "minimize": MIN, "minimise": MIN, "min": MIN,
    "maximize": MAX, "maximise": MAX, "max": MAX,
}
_ROW_SECTIONS = {"subject to", "such that", "st", "s.t.", "st."}
_BOUND_SECTIONS = {"bounds", "bound"}
_INT_SECTIONS = {"general", "generals", "gen", "integer", "integers"}
_BIN_SECTIONS = {"binary", "binaries", "bin"}
_INF_NAMES = {"inf", "infinity"}
_SENSE_OPS = {
    "<=": SENSE_LE, "=<": SENSE_LE, "<": SENSE_LE,
    ">=": SENSE_GE, "=>": SENSE_GE, ">": SENSE_GE,
    "=": SENSE_EQ,
}


class _LpParser:
    def __init__(self, text: str, filename: str):
        self.filename = filename
        self.lines = text.splitlines()
        self.var_index: dict[str, int] = {}
        self.objectives: list[tuple[str, str, dict, dict]] = []  # (name, sense, lin, quad)
        self.rows: list[tuple[str, dict, dict, str, float]] = []
        self.bounds: dict[int, list[float]] = {}
        self.explicit_bounds: set[int] = set()
        self.integers: set[int] = set()
        self.binaries: set[int] = set()

    def fail(self, message, location=None):
        loc = location or SourceLocation(self.filename, len(self.lines) or 1, 1)
        raise ParseError(message, loc)

    def var(self, name: str) -> int:
        if name not in self.var_index:
            self.var_index[name] = len(self.var_index)
        return self.var_index[name]

    def tokenize(self, line: str, lineno: int) -> list[_Token]:
        out = []
        for match in _TOKEN_RE.finditer(line):
            kind = match.lastgroup
            if kind == "ws":
                continue
            loc = SourceLocation(self.filename, lineno, match.start() + 1)
            if kind == "bad":
                raise ParseError(f"unexpected character {match.group()!r}", loc)
            out.append(_Token(kind, match.group(), loc))
        return out

    def parse(self) -> Problem:
        section = None
        obj_sense = MIN
        for lineno, raw in enumerate(self.lines, start=1):
            line = raw.split("\\", 1)[0]
            if not line.strip():
                continue
            header = " ".join(line.lower().split())
            if header in _OBJ_SECTIONS:
                section, obj_sense = "objectives", _OBJ_SECTIONS[header]
                continue
            if header in _ROW_SECTIONS:
                section = "rows"
                continue
            if header in _BOUND_SECTIONS:
                section = "bounds"
                continue
            if header in _INT_SECTIONS:
                section = "integer"
                continue
            if header in _BIN_SECTIONS:
                section = "binary"
                continue
            if header == "end":
                break
            toks = self.tokenize(line, lineno)
            if section == "objectives":
                self.parse_objective(toks, obj_sense)
            elif section == "rows":
                self.parse_row(toks)
            elif section == "bounds":
                self.parse_bound(toks)
            elif section in ("integer", "binary"):
                target = self.integers if section == "integer" else self.binaries
                for tok in toks:
                    if tok.kind != "name":
                        self.fail(f"expected a variable name, got {tok.text!r}", tok.location)
                    target.add(self.var(tok.text))
            else:
                self.fail("content before the first section header", toks[0].location)
        return self.build()

    def parse_objective(self, toks, default_sense):
        start = toks[0].location
        sense = default_sense
        if (
            toks[0].kind == "name"
            and toks[0].text.lower() in ("min", "max")
            and not (len(toks) > 1 and toks[1].text == ":")
        ):
            sense = MIN if toks[0].text.lower() == "min" else MAX
            toks = toks[1:]
        name = ""
        if len(toks) > 1 and toks[0].kind == "name" and toks[1].text == ":":
            name, toks = toks[0].text, toks[2:]
        if not toks:
            self.fail("objective line has no expression", start)
        lin, quad, const, rest = self.parse_expr(toks, allow_quad=True)
        if rest:
            self.fail(f"unexpected {rest[0].text!r} in objective", rest[0].location)
        if const != 0.0:
            self.fail("constant term in an objective is not supported", start)
        self.objectives.append((name, sense, lin, quad))

    def parse_row(self, toks):
        start = toks[0].location
        name = ""
        if len(toks) > 1 and toks[0].kind == "name" and toks[1].text == ":":
            name, toks = toks[0].text, toks[2:]
        if not toks:
            self.fail("constraint line has no expression", start)
        lin, quad, const, rest = self.parse_expr(toks, allow_quad=True)
        if not rest:
            self.fail("constraint has no comparison operator", toks[-1].location)
        op = rest[0]
        if op.text not in _SENSE_OPS:
            self.fail(f"expected a comparison operator, got {op.text!r}", op.location)
        rhs, rest = self.parse_value(rest[1:], op.location)
        if rest:
            self.fail(f"unexpected {rest[0].text!r} after right-hand side", rest[0].location)
        if not math.isfinite(rhs):
            self.fail("right-hand side must be finite", op.location)
        self.rows.append((name, lin, quad, _SENSE_OPS[op.text], rhs - const))

    def parse_expr(self, toks, allow_quad):
        """Linear terms, quadratic terms and constant; stops at a comparison."""
        lin: dict[int, float] = {}
        quad: dict[tuple[int, int], float] = {}
        const = 0.0
        i = 0
        while i < len(toks):
            if toks[i].text in _SENSE_OPS:
                break
            sign = 1.0
            while i < len(toks) and toks[i].text in ("+", "-"):
                if toks[i].text == "-":
                    sign = -sign
                i += 1
            if i >= len(toks):
                self.fail("dangling sign", toks[-1].location)
            if toks[i].text == "[":
                if not allow_quad:
                    self.fail("quadratic bracket is not allowed here", toks[i].location)
                i = self.parse_quad_bracket(toks, i, sign, quad)
                continue
            coef = None
            if toks[i].kind == "num":
                coef = float(toks[i].text)
                i += 1
                if i < len(toks) and toks[i].text == "*":
                    i += 1
            if i < len(toks) and toks[i].kind == "name":
                j = self.var(toks[i].text)
                loc = toks[i].location
                i += 1
                if i < len(toks) and toks[i].text == "^":
                    self.fail("quadratic terms must appear inside [ ]", loc)
                lin[j] = lin.get(j, 0.0) + sign * (1.0 if coef is None else coef)
            elif coef is not None:
                const += sign * coef
            else:
                self.fail(f"expected a term, got {toks[i].text!r}", toks[i].location)
        return lin, quad, const, toks[i:]

    def parse_quad_bracket(self, toks, i, outer_sign, quad):
        """Parse ``[ c x ^ 2 + c x * y ... ] (/ 2)?`` starting at the ``[``."""
        open_loc = toks[i].location
        i += 1
        terms = []  # (sign*coef, j, k)
        while True:
            if i >= len(toks):
                self.fail("unterminated quadratic bracket", open_loc)
            if toks[i].text == "]":
                i += 1
                break
            sign = 1.0
            while i < len(toks) and toks[i].text in ("+", "-"):
                if toks[i].text == "-":
                    sign = -sign
                i += 1
            coef = 1.0
            if i < len(toks) and toks[i].kind == "num":
                coef = float(toks[i].text)
                i += 1
                if i < len(toks) and toks[i].text == "*":
                    i += 1
            if i >= len(toks) or toks[i].kind != "name":
                loc = toks[i].location if i < len(toks) else open_loc
                self.fail("expected a variable inside the quadratic bracket", loc)
            j = self.var(toks[i].text)
            i += 1
            if i < len(toks) and toks[i].text == "^":
                if i + 1 >= len(toks) or toks[i + 1].text != "2":
                    self.fail("only squares are supported", toks[i].location)
                terms.append((sign * coef, j, j))
                i += 2
            elif i < len(toks) and toks[i].text == "*" and i + 1 < len(toks) and toks[i + 1].kind == "name":
                k = self.var(toks[i + 1].text)
                terms.append((sign * coef, j, k))
                i += 2
            else:
                loc = toks[i].location if i < len(toks) else open_loc
                self.fail("linear term inside a quadratic bracket", loc)
        halve = 1.0
        if i < len(toks) and toks[i].text == "/":
            if i + 1 >= len(toks) or toks[i + 1].text != "2":
                self.fail("only division by 2 is supported", toks[i].location)
            halve = 0.5
            i += 2
        for coef, j, k in terms:
            c = outer_sign * coef * halve
            if j == k:
                quad[(j, j)] = quad.get((j, j), 0.0) + c
            else:
                quad[(j, k)] = quad.get((j, k), 0.0) + c / 2.0
                quad[(k, j)] = quad.get((k, j), 0.0) + c / 2.0
        return i

    def parse_value(self, toks, fallback_loc):
        """Signed number or signed infinity; returns (value, remaining tokens)."""
        sign = 1.0
        i = 0
        while i < len(toks) and toks[i].text in ("+", "-"):
            if toks[i].text == "-":
                sign = -sign
            i += 1
        if i >= len(toks):
            self.fail("expected a number", fallback_loc)
        tok = toks[i]
        if tok.kind == "num":
            return sign * float(tok.text), toks[i + 1:]
        if tok.kind == "name" and tok.text.lower() in _INF_NAMES:
            return sign * math.inf, toks[i + 1:]
        self.fail(f"expected a number, got {tok.text!r}", tok.location)

    def parse_bound(self, toks):
        # forms: x free | x = v | x <= v | x >= v | v <= x | v <= x <= v | v >= x >= v
        if (
            len(toks) == 2
            and toks[0].kind == "name"
            and toks[1].kind == "name"
            and toks[1].text.lower() == "free"
        ):
            j = self.var(toks[0].text)
            self.set_bound(j, -math.inf, math.inf)
            return
        items = []  # ("var", index, loc) or ("val", value, loc)
        ops = []
        expect_item = True
        rest = toks
        while rest:
            if expect_item:
                tok = rest[0]
                if tok.kind == "name" and tok.text.lower() not in _INF_NAMES:
                    items.append(("var", self.var(tok.text), tok.location))
                    rest = rest[1:]
                else:
                    val, rest = self.parse_value(rest, tok.location)
                    items.append(("val", val, tok.location))
            else:
                if rest[0].text not in _SENSE_OPS:
                    self.fail(f"expected a comparison, got {rest[0].text!r}", rest[0].location)
                ops.append(_SENSE_OPS[rest[0].text])
                rest = rest[1:]
            expect_item = not expect_item
        if expect_item or not ops or len(items) != len(ops) + 1:
            loc = toks[-1].location if toks else SourceLocation(self.filename, 1, 1)
            self.fail("malformed bounds line", loc)
        var_positions = [p for p, item in enumerate(items) if item[0] == "var"]
        if len(var_positions) != 1:
            self.fail("bounds line must mention exactly one variable", items[0][2])
        pos = var_positions[0]
        j = items[pos][1]
        lo, hi = self.bounds.get(j, [0.0, math.inf])
        for k, op in enumerate(ops):
            left, right = items[k], items[k + 1]
            if op == SENSE_EQ:
                if len(ops) != 1:
                    self.fail("chained = in bounds", items[0][2])
                value = right[1] if left[0] == "var" else left[1]
                lo = hi = value
            else:
                le = op == SENSE_LE
                if left[0] == "var":  # x <= v  (or x >= v)
                    if le:
                        hi = right[1]
                    else:
                        lo = right[1]
                elif right[0] == "var":  # v <= x  (or v >= x)
                    if le:
                        lo = left[1]
                    else:
                        hi = left[1]
                else:
                    self.fail("bounds comparison without the variable", items[k][2])
        self.set_bound(j, lo, hi)

    def set_bound(self, j, lo, hi):
        self.bounds[j] = [lo, hi]
        self.explicit_bounds.add(j)

    def build(self) -> Problem:
        if not self.objectives:
            self.fail("no objective section", SourceLocation(self.filename, 1, 1))
        n = len(self.var_index)
        d = len(self.objectives)
        objectives = np.zeros((d, n))
        quads = []
        names, senses = [], []
        for idx, (name, sense, lin, quad) in enumerate(self.objectives):
            for j, c in lin.items():
                objectives[idx, j] = c
            if quad:
                mat = np.zeros((n, n))
                for (j, k), c in quad.items():
                    mat[j, k] = c
                quads.append(mat)
            else:
                quads.append(None)
            names.append(name or f"obj{idx}")
            senses.append(sense)

        rows = []
        for name, lin, quad, sense, rhs in self.rows:
            coeffs = np.zeros(n)
            for j, c in lin.items():
                coeffs[j] = c
            mat = None
            if quad:
                mat = np.zeros((n, n))
                for (j, k), c in quad.items():
                    mat[j, k] = c
            rows.append(Constraint(coeffs, sense, rhs, quad=mat, name=name))

        lower = np.zeros(n)
        upper = np.full(n, math.inf)
        integer = np.zeros(n, dtype=bool)
        for j in self.binaries:
            integer[j] = True
            if j not in self.explicit_bounds:
                lower[j], upper[j] = 0.0, 1.0
        for j, (lo, hi) in self.bounds.items():
            lower[j], upper[j] = lo, hi
        for j in self.integers:
            integer[j] = True

        var_names = [""] * n
        for name, j in self.var_index.items():
            var_names[j] = name
        return Problem(
            objectives=objectives,
            constraints=tuple(rows),
            lower=lower,
            upper=upper,
            integer=integer,
            senses=tuple(senses),
            objective_quads=tuple(quads),
            variable_names=tuple(var_names),
            objective_names=tuple(names),
        )


def parse_lp(text: str, filename: str = "<string>") -> Problem:
    """Parse LP-format text with one objective per line of the objective section."""
    return _LpParser(text, filename).parse()


# ---------------------------------------------------------------------------
# MPS reader

_MPS_SECTIONS = {
    "NAME", "OBJSENSE", "ROWS", "COLUMNS", "RHS", "RANGES", "BOUNDS", "ENDATA",
}
_MPS_BOUND_TYPES = {"LO", "UP", "FX", "FR", "MI", "PL", "BV", "LI", "UI"}


class _MpsParser:
    def __init__(self, text: str, filename: str):
        self.filename = filename
        self.lines = text.splitlines()
        self.name = ""
        self.objsense = MIN
        self.obj_rows: list[str] = []                       # N rows in file order
        self.row_sense: dict[str, str] = {}                 # constraint rows
        self.row_order: list[str] = []
        self.entries: dict[str, dict[str, float]] = {}      # row -> {col: coef}
        self.col_order: list[str] = []
        self.col_integer: dict[str, bool] = {}
        self.rhs: dict[str, float] = {}
        self.ranges: dict[str, float] = {}
        self.bounds: dict[str, list[float]] = {}

    def fail(self, message, lineno, column=1):
        raise ParseError(message, SourceLocation(self.filename, lineno, column))

    def number(self, token, lineno):
        try:
            return float(token)
        except ValueError:
            self.fail(f"not a number: {token!r}", lineno)

    def parse(self) -> Problem:
        section = None
        integer_mode = False
        pending_objsense = False
        for lineno, raw in enumerate(self.lines, start=1):
            if not raw.strip() or raw.lstrip().startswith("*"):
                continue
            tokens = raw.split()
            is_header = not raw[0].isspace() and tokens[0].upper() in _MPS_SECTIONS
            if is_header:
                section = tokens[0].upper()
                pending_objsense = False
                if section == "NAME":
                    self.name = tokens[1] if len(tokens) > 1 else ""
                elif section == "OBJSENSE":
                    if len(tokens) > 1:
                        self.set_objsense(tokens[1], lineno)
                    else:
                        pending_objsense = True
                elif section == "ENDATA":
                    break
                continue
            if section is None:
                self.fail("data before the first section header", lineno)
            if pending_objsense:
                self.set_objsense(tokens[0], lineno)
                pending_objsense = False
                continue
            if section == "ROWS":
                self.parse_row(tokens, lineno)
            elif section == "COLUMNS":
                integer_mode = self.parse_column(tokens, lineno, integer_mode)
            elif section == "RHS":
                self.parse_pairs(tokens, lineno, self.apply_rhs)
            elif section == "RANGES":
                self.parse_pairs(tokens, lineno, self.apply_range)
            elif section == "BOUNDS":
                self.parse_bound(tokens, lineno)
            else:
                self.fail(f"data line in section {section}", lineno)
        return self.build()

    def set_objsense(self, token, lineno):
        word = token.upper()
        if word in ("MIN", "MINIMIZE"):
            self.objsense = MIN
        elif word in ("MAX", "MAXIMIZE"):
            self.objsense = MAX
        else:
            self.fail(f"unknown objective sense {token!r}", lineno)

    def parse_row(self, tokens, lineno):
        if len(tokens) != 2:
            self.fail("ROWS lines have the form: <type> <name>", lineno)
        kind, name = tokens[0].upper(), tokens[1]
        if name in self.row_sense or name in self.obj_rows:
            self.fail(f"duplicate row {name!r}", lineno)
        if kind == "N":
            self.obj_rows.append(name)
        elif kind in ("L", "G", "E"):
            self.row_sense[name] = {"L": SENSE_LE, "G": SENSE_GE, "E": SENSE_EQ}[kind]
            self.row_order.append(name)
        else:
            self.fail(f"unknown row type {tokens[0]!r}", lineno)
        self.entries[name] = {}

    def parse_column(self, tokens, lineno, integer_mode):
        if len(tokens) >= 3 and tokens[1] == "'MARKER'":
            marker = tokens[2].strip("'").upper()
            if marker == "INTORG":
                return True
            if marker == "INTEND":
                return False
            self.fail(f"unknown marker {tokens[2]!r}", lineno)
        col = tokens[0]
        if col not in self.col_integer:
            self.col_order.append(col)
            self.col_integer[col] = integer_mode
        if len(tokens) < 3 or len(tokens) % 2 == 0:
            self.fail("COLUMNS lines have the form: <col> (<row> <value>)+", lineno)
        for k in range(1, len(tokens), 2):
            row, value = tokens[k], self.number(tokens[k + 1], lineno)
            if row not in self.entries:
                self.fail(f"row {row!r} not declared in ROWS", lineno)
            self.entries[row][col] = self.entries[row].get(col, 0.0) + value
        return integer_mode

    def parse_pairs(self, tokens, lineno, apply):
        # odd token count means a set name leads the line
        pairs = tokens[1:] if len(tokens) % 2 == 1 else tokens
        if not pairs or len(pairs) % 2 == 1:
            self.fail("expected (<row> <value>) pairs", lineno)
        for k in range(0, len(pairs), 2):
            apply(pairs[k], self.number(pairs[k + 1], lineno), lineno)

    def apply_rhs(self, row, value, lineno):
        if row in self.obj_rows:
            self.fail("a right-hand side on an objective row (a constant) is not supported", lineno)
        if row not in self.row_sense:
            self.fail(f"row {row!r} not declared in ROWS", lineno)
        self.rhs[row] = value

    def apply_range(self, row, value, lineno):
        if row not in self.row_sense:
            self.fail(f"row {row!r} not declared in ROWS", lineno)
        self.ranges[row] = value

    def parse_bound(self, tokens, lineno):
        kind = tokens[0].upper()
        if kind not in _MPS_BOUND_TYPES:
            self.fail(f"unknown bound type {tokens[0]!r}", lineno)
        needs_value = kind in ("LO", "UP", "FX", "LI", "UI")
        # some writers put a dummy value on FR/MI/PL/BV lines; tolerate it
        if (needs_value and len(tokens) != 4) or (not needs_value and len(tokens) not in (3, 4)):
            self.fail(f"malformed {kind} bound line", lineno)
        col = tokens[2]
        if col not in self.col_integer:
            self.fail(f"variable {col!r} not declared in COLUMNS", lineno)
        bound = self.bounds.setdefault(col, [0.0, math.inf])
        value = self.number(tokens[3], lineno) if needs_value else None
        if kind == "LO":
            bound[0] = value
        elif kind == "UP":
            bound[1] = value
        elif kind == "FX":
            bound[0] = bound[1] = value
        elif kind == "FR":
            bound[0], bound[1] = -math.inf, math.inf
        elif kind == "MI":
            bound[0] = -math.inf
        elif kind == "PL":
            bound[1] = math.inf
        elif kind == "BV":
            bound[0], bound[1] = 0.0, 1.0
            self.col_integer[col] = True
        elif kind == "LI":
            bound[0] = value
            self.col_integer[col] = True
        elif kind == "UI":
            bound[1] = value
            self.col_integer[col] = True

    def build(self) -> Problem:
        if not self.obj_rows:
            self.fail("no N row: the file declares no objective", len(self.lines) or 1)
        n = len(self.col_order)
        col_pos = {c: j for j, c in enumerate(self.col_order)}
        d = len(self.obj_rows)
        objectives = np.zeros((d, n))
        for i, row in enumerate(self.obj_rows):
            for col, coef in self.entries[row].items():
                objectives[i, col_pos[col]] = coef

        rows = []
        for name in self.row_order:
            coeffs = np.zeros(n)
            for col, coef in self.entries[name].items():
                coeffs[col_pos[col]] = coef
            sense = self.row_sense[name]
            rhs = self.rhs.get(name, 0.0)
            if name in self.ranges:
                rows.extend(self.split_range(name, coeffs, sense, rhs, self.ranges[name]))
            else:
                rows.append(Constraint(coeffs, sense, rhs, name=name))

        lower = np.zeros(n)
        upper = np.full(n, math.inf)
        integer = np.zeros(n, dtype=bool)
        for col, j in col_pos.items():
            integer[j] = self.col_integer[col]
            if col in self.bounds:
                lower[j], upper[j] = self.bounds[col]

        return Problem(
            objectives=objectives,
            constraints=tuple(rows),
            lower=lower,
            upper=upper,
            integer=integer,
            senses=(self.objsense,) * d,
            variable_names=tuple(self.col_order),
            objective_names=tuple(self.obj_rows),
            name=self.name,
        )

    @staticmethod
    def split_range(name, coeffs, sense, rhs, rng):
        """A RANGES entry turns one row into a two-sided pair of rows."""
        if sense == SENSE_LE:
            lo, hi = rhs - abs(rng), rhs
        elif sense == SENSE_GE:
            lo, hi = rhs, rhs + abs(rng)
        else:
            lo, hi = (rhs, rhs + rng) if rng >= 0 else (rhs + rng, rhs)
        return [
            Constraint(coeffs, SENSE_GE, lo, name=name),
            Constraint(coeffs, SENSE_LE, hi, name=f"{name}.rng"),
        ]


def parse_mps(text: str, filename: str = "<string>") -> Problem:
    """Parse MPS text; every N row becomes one objective, in file order."""
    return _MpsParser(text, filename).parse()


# ---------------------------------------------------------------------------
# writers


def _fmt(value: float) -> str:
    if value == math.inf:
        return "inf"
    if value == -math.inf:
        return "-inf"
    return format(float(value), ".17g")


def _lp_terms(coeffs, names, force_all=False):
    parts = []
    for j, c in enumerate(coeffs):
        if c == 0.0 and not force_all:
            continue
        sign = "-" if c < 0 else "+"
        if not parts:
            lead = "-" if c < 0 else ""
            parts.append(f"{lead}{_fmt(abs(c))} {names[j]}")
        else:
            parts.append(f"{sign} {_fmt(abs(c))} {names[j]}")
    if not parts:
        parts.append(f"0 {names[0]}")
    return " ".join(parts)


def _lp_quad(quad, names) -> str:
    # parse maps bracket coefficient c with /2 to c/2 on squares and c/4 on
    # cross pairs, so doubling/quadrupling here round-trips exactly
    terms = []
    n = quad.shape[0]
    for j in range(n):
        for k in range(j, n):
            if j == k:
                c = 2.0 * quad[j, j]
                body = f"{names[j]} ^ 2"
            else:
                c = 4.0 * quad[j, k]
                body = f"{names[j]} * {names[k]}"
            if c == 0.0:
                continue
            sign = "-" if c < 0 else "+"
            if not terms:
                lead = "-" if c < 0 else ""
                terms.append(f"{lead}{_fmt(abs(c))} {body}")
            else:
                terms.append(f"{sign} {_fmt(abs(c))} {body}")
    if not terms:
        terms.append(f"0 {names[0]} ^ 2")
    return "[ " + " ".join(terms) + " ] / 2"


def write_lp(problem: Problem) -> str:
    """LP text that parse_lp maps back to an identical Problem.

    The first objective line carries a term for every variable, zeros
    included, so the reader reconstructs the original variable order.
    """
    if problem.num_variables == 0:
        raise ValueError("cannot write a problem with no variables")
    names = problem.variable_names
    head_sense = problem.senses[0]
    out = ["minimize" if head_sense == MIN else "maximize"]
    for i in range(problem.num_objectives):
        expr = _lp_terms(problem.objectives[i], names, force_all=(i == 0))
        if problem.objective_quads[i] is not None:
            expr += " + " + _lp_quad(problem.objective_quads[i], names)
        prefix = "" if problem.senses[i] == head_sense else f"{problem.senses[i]} "
        out.append(f" {prefix}{problem.objective_names[i]}: {expr}")
    out.append("subject to")
    for row in problem.constraints:
        expr = _lp_terms(row.coeffs, names)
        if row.quad is not None:
            expr += " + " + _lp_quad(row.quad, names)
        label = f"{row.name}: " if row.name else ""
        out.append(f" {label}{expr} {row.sense} {_fmt(row.rhs)}")
    bound_lines = []
    for j, name in enumerate(names):
        lo, hi = problem.lower[j], problem.upper[j]
        if lo == 0.0 and hi == math.inf:
            continue
        if lo == -math.inf and hi == math.inf:
            bound_lines.append(f" {name} free")
        elif lo == hi:
            bound_lines.append(f" {name} = {_fmt(lo)}")
        elif hi == math.inf:
            bound_lines.append(f" {name} >= {_fmt(lo)}")
        elif lo == 0.0:
            bound_lines.append(f" {name} <= {_fmt(hi)}")
        else:
            bound_lines.append(f" {_fmt(lo)} <= {name} <= {_fmt(hi)}")
    if bound_lines:
        out.append("bounds")
        out.extend(bound_lines)
    int_names = [names[j] for j in range(problem.num_variables) if problem.integer[j]]
    if int_names:
        out.append("general")
        out.append(" " + " ".join(int_names))
    out.append("end")
    return "\n".join(out) + "\n"


def write_mps(problem: Problem) -> str:
    """MPS text that parse_mps maps back to an identical Problem.

    MPS cannot mix objective senses or carry quadratic parts; both raise.
    """
    senses = set(problem.senses)
    if len(senses) > 1:
        raise ValueError("MPS files cannot mix min and max objectives")
    if not problem.is_linear:
        raise ValueError("MPS files cannot carry quadratic terms")
    if problem.num_variables == 0:
        raise ValueError("cannot write a problem with no variables")
    names = problem.variable_names
    out = [f"NAME {problem.name}".rstrip()]
    out.append("OBJSENSE")
    out.append("    MAX" if problem.senses[0] == MAX else "    MIN")
    out.append("ROWS")
    for oname in problem.objective_names:
        out.append(f" N  {oname}")
    letter = {SENSE_LE: "L", SENSE_GE: "G", SENSE_EQ: "E"}
    for k, row in enumerate(problem.constraints):
        if not row.name:
            raise ValueError(f"MPS rows need names; constraint {k} has none")
        out.append(f" {letter[row.sense]}  {row.name}")
    out.append("COLUMNS")
    integer_mode = False
    marker_id = 0
    for j, cname in enumerate(names):
        if problem.integer[j] != integer_mode:
            integer_mode = bool(problem.integer[j])
            flag = "INTORG" if integer_mode else "INTEND"
            out.append(f"    M{marker_id}  'MARKER'  '{flag}'")
            marker_id += 1
        entries = []
        for i, oname in enumerate(problem.objective_names):
            if problem.objectives[i, j] != 0.0:
                entries.append((oname, problem.objectives[i, j]))
        for row in problem.constraints:
            if row.coeffs[j] != 0.0:
                entries.append((row.name, row.coeffs[j]))
        if not entries:
            # declare the column even when it appears nowhere
            entries.append((problem.objective_names[0], 0.0))
        for rname, value in entries:
            out.append(f"    {cname:<10}{rname:<10}{_fmt(value)}")
    if integer_mode:
        out.append(f"    M{marker_id}  'MARKER'  'INTEND'")
    out.append("RHS")
    for row in problem.constraints:
        if row.rhs != 0.0:
            out.append(f"    RHS       {row.name:<10}{_fmt(row.rhs)}")
    bound_lines = []
    for j, cname in enumerate(names):
        lo, hi = problem.lower[j], problem.upper[j]
        if lo == 0.0 and hi == math.inf:
            continue
        if lo == -math.inf and hi == math.inf:
            bound_lines.append(f" FR BND       {cname}")
            continue
        if lo == hi:
            bound_lines.append(f" FX BND       {cname:<10}{_fmt(lo)}")
            continue
        if lo == -math.inf:
            bound_lines.append(f" MI BND       {cname}")
        elif lo != 0.0:
            bound_lines.append(f" LO BND       {cname:<10}{_fmt(lo)}")
        if hi != math.inf:
            bound_lines.append(f" UP BND       {cname:<10}{_fmt(hi)}")
    if bound_lines:
        out.append("BOUNDS")
        out.extend(bound_lines)
    out.append("ENDATA")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# path helpers


def parse_path(path) -> Problem:
    """Read a model file, picking the format from the suffix (sniffing otherwise)."""
    path = pathlib.Path(path)
    text = path.read_text()
    suffix = path.suffix.lower()
    if suffix in (".mps", ".mop"):
        return parse_mps(text, str(path))
    if suffix == ".lp":
        return parse_lp(text, str(path))
    for line in text.splitlines():
        token = line.split()[0].upper() if line.split() else ""
        if token in ("NAME", "OBJSENSE", "ROWS"):
            return parse_mps(text, str(path))
        if token:
            break
    return parse_lp(text, str(path))


def write_path(problem: Problem, path) -> None:
    """Write a model file, picking the format from the suffix (.lp unless .mps/.mop)."""
    path = pathlib.Path(path)
    if path.suffix.lower() in (".mps", ".mop"):
        path.write_text(write_mps(problem))
    else:
        path.write_text(write_lp(problem))
