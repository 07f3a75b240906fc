"""Reading and writing models as LP text.

The dialect is a small, documented subset (see README):

  statement   = objective | constraint | bounds | integrality
  objective   = ("max:" | "min:") expr ";"        (first statement)
  constraint  = NAME ":" expr cmp expr ";"
  bounds      = varlist cmp number ";" | number "<=" NAME "<=" number ";"
  integrality = ("int" | "bin") varlist ";"
  cmp         = "<=" | "=" | ">="

Comments run from `//` to end of line.  Numbers are integers, exact
decimals, or `p/q` rationals; nothing is ever rounded.  Indexed variables
appear flattened with underscores (x_A_1).  `write_lp` output ordering is
a pure function of model content, so writing is deterministic and
write-parse-write is byte-stable.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .model import (
    Constraint,
    LinearExpr,
    Model,
    NumberType,
    Objective,
    ProblemSense,
    Sense,
    Variable,
    canonicalize,
    validate,
)


class LpParseError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class LpWriteError(ValueError):
    pass


@dataclass(frozen=True)
class LpDocument:
    raw: str
    model: Model
    spans: dict  # constraint name -> (first line, last line), 1-based


# ---------------------------------------------------------------------------
# Number rendering: exact decimal when the denominator is 2^a 5^b, else p/q.

def render_rational(x: Fraction) -> str:
    if x.denominator == 1:
        return str(x.numerator)
    d = x.denominator
    twos = fives = 0
    while d % 2 == 0:
        d //= 2
        twos += 1
    while d % 5 == 0:
        d //= 5
        fives += 1
    if d != 1:
        return f"{x.numerator}/{x.denominator}"
    k = max(twos, fives)
    scaled = abs(x.numerator) * 10 ** k // x.denominator
    digits = str(scaled).rjust(k + 1, "0")
    whole, frac = digits[:-k], digits[-k:].rstrip("0")
    sign = "-" if x < 0 else ""
    return f"{sign}{whole}.{frac}"


def _render_expr(expr: LinearExpr) -> str:
    expr = expr.normalized()
    parts = []
    # order by flattened key so reparsing (which only sees flat names)
    # reproduces the exact same ordering
    for t in sorted(expr.terms, key=lambda t: t.variable.key):
        mag = abs(t.coefficient)
        body = t.variable.key if mag == 1 else f"{render_rational(mag)} {t.variable.key}"
        parts.append(("-" if t.coefficient < 0 else "+", body))
    if expr.constant != 0 or not parts:
        parts.append(("-" if expr.constant < 0 else "+", render_rational(abs(expr.constant))))
    first_sign, first_body = parts[0]
    out = (first_sign + " " if first_sign == "-" else "") + first_body
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


def write_lp(model: Model) -> str:
    """Canonical LP text: objective, constraints by name, bounds, integrality."""
    report = validate(model)
    if not report.ok:
        raise LpWriteError(f"model does not validate: {report.violations}")

    lines = [f"// model: {model.name}"]
    lines.append(f"{model.objective.sense.value}: {_render_expr(model.objective.expr)};")
    lines.append("")
    for c in sorted(model.constraints, key=lambda c: c.name):
        lines.append(f"{c.name}: {_render_expr(LinearExpr(c.lhs.normalized().terms))} "
                     f"{c.sense.value} {render_rational(c.rhs - c.lhs.constant)};")
    lines.append("")
    variables = sorted(model.variables, key=lambda v: v.key)
    for v in variables:
        if v.number_type is NumberType.BINARY:
            continue
        if v.upper is None:
            lines.append(f"{v.key} >= {render_rational(v.lower)};")
        else:
            lines.append(f"{render_rational(v.lower)} <= {v.key} <= {render_rational(v.upper)};")
    lines.append("")
    for v in variables:
        if v.number_type is NumberType.NONNEG_INTEGER:
            lines.append(f"int {v.key};")
    for v in variables:
        if v.number_type is NumberType.BINARY:
            lines.append(f"bin {v.key};")
    while lines and lines[-1] == "":
        lines.pop()
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Parsing

_TOKEN_RE = re.compile(
    r"""(?P<ws>[ \t\r\n]+)
      | (?P<comment>//[^\n]*)
      | (?P<number>\d+\.\d+|\.\d+|\d+(?:/\d+)?)
      | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
      | (?P<op><=|>=|=<|=>|[=:;,+\-])
    """,
    re.VERBOSE,
)

_MODEL_NAME_RE = re.compile(r"^//\s*model:\s*(\S+)\s*$", re.MULTILINE)


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    line: int
    column: int


def _tokenize(text: str):
    tokens = []
    line, col, pos = 1, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise LpParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        raw = m.group()
        if kind not in ("ws", "comment"):
            tokens.append(_Token(kind, raw, line, col))
        newlines = raw.count("\n")
        if newlines:
            line += newlines
            col = len(raw) - raw.rfind("\n")
        else:
            col += len(raw)
        pos = m.end()
    return tokens


def _number(text: str) -> Fraction:
    return Fraction(text)


_SENSES = {"<=": Sense.LE, "=<": Sense.LE, "=": Sense.EQ, ">=": Sense.GE, "=>": Sense.GE}


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self, offset: int = 0) -> Optional[_Token]:
        i = self.pos + offset
        return self.tokens[i] if i < len(self.tokens) else None

    def take(self) -> _Token:
        t = self.peek()
        if t is None:
            last = self.tokens[-1] if self.tokens else _Token("", "", 1, 1)
            raise LpParseError("unexpected end of input", last.line, last.column)
        self.pos += 1
        return t

    def expect(self, text: str) -> _Token:
        t = self.take()
        if t.text != text:
            raise LpParseError(f"expected {text!r}, found {t.text!r}", t.line, t.column)
        return t

    def fail(self, message: str):
        t = self.peek() or (self.tokens[-1] if self.tokens else _Token("", "", 1, 1))
        raise LpParseError(message, t.line, t.column)

def _parse_expr(p: _Parser, stop: set):
    terms = []
    constant = Fraction(0)
    sign = Fraction(1)
    expect_operand = True
    while True:
        t = p.peek()
        if t is None or (t.text in stop and not expect_operand):
            break
        t = p.take()
        if t.text in ("+", "-"):
            if expect_operand and t.text == "-":
                sign = -sign
            elif expect_operand:
                pass
            else:
                sign = Fraction(-1 if t.text == "-" else 1)
                expect_operand = True
            continue
        if not expect_operand:
            raise LpParseError(f"expected operator, found {t.text!r}", t.line, t.column)
        if t.kind == "number":
            value = sign * _number(t.text)
            nxt = p.peek()
            if nxt is not None and nxt.kind == "name":
                var = p.take()
                terms.append((value, var.text))
            else:
                constant += value
        elif t.kind == "name":
            terms.append((sign, t.text))
        else:
            raise LpParseError(f"unexpected token {t.text!r}", t.line, t.column)
        sign = Fraction(1)
        expect_operand = False
    if expect_operand:
        p.fail("expected an expression")
    return terms, constant


@dataclass
class _VarRecord:
    name: str
    number_type: NumberType = NumberType.NONNEG_REAL
    lower: Fraction = Fraction(0)
    upper: Optional[Fraction] = None
    explicit_bounds: bool = False


def parse_lp_document(text: str) -> LpDocument:
    p = _Parser(text)
    variables: dict = {}
    constraints = []
    spans: dict = {}
    objective: Optional[Objective] = None
    obj_terms = None

    def var(name: str) -> _VarRecord:
        return variables.setdefault(name, _VarRecord(name))

    def build_expr(parsed) -> list:
        terms, constant = parsed
        for _, name in terms:
            var(name)
        return terms, constant

    first = True
    while True:
        t = p.peek()
        if t is None:
            break
        if first:
            if t.text not in ("max", "min"):
                raise LpParseError("input must start with 'max:' or 'min:'", t.line, t.column)
            p.take()
            p.expect(":")
            obj_terms = build_expr(_parse_expr(p, stop={";"}))
            p.expect(";")
            first = False
            continue
        if t.text in ("max", "min"):
            raise LpParseError("duplicate objective", t.line, t.column)
        if t.text in ("int", "bin"):
            p.take()
            ntype = NumberType.NONNEG_INTEGER if t.text == "int" else NumberType.BINARY
            while True:
                name = p.take()
                if name.kind != "name":
                    raise LpParseError("expected a variable name", name.line, name.column)
                var(name.text).number_type = ntype
                nxt = p.take()
                if nxt.text == ";":
                    break
                if nxt.text != ",":
                    raise LpParseError(f"expected ',' or ';', found {nxt.text!r}",
                                       nxt.line, nxt.column)
            continue

        # ranged bounds: number <= name <= number
        if (t.kind == "number" and p.peek(1) is not None and p.peek(1).text in ("<=", "=<")):
            lo_tok = p.take()
            p.take()
            name = p.take()
            if name.kind != "name":
                raise LpParseError("expected a variable name", name.line, name.column)
            op = p.take()
            if op.text not in ("<=", "=<"):
                raise LpParseError(f"expected '<=', found {op.text!r}", op.line, op.column)
            hi_tok = p.take()
            if hi_tok.kind != "number":
                raise LpParseError("expected a number", hi_tok.line, hi_tok.column)
            p.expect(";")
            rec = var(name.text)
            rec.lower = _number(lo_tok.text)
            rec.upper = _number(hi_tok.text)
            rec.explicit_bounds = True
            continue

        # named constraint: NAME ':' expr cmp expr
        if t.kind == "name" and p.peek(1) is not None and p.peek(1).text == ":":
            name_tok = p.take()
            p.take()
            if name_tok.text in spans:
                raise LpParseError(f"duplicate constraint name {name_tok.text!r}",
                                   name_tok.line, name_tok.column)
            lhs_terms, lhs_const = build_expr(_parse_expr(p, stop={"<=", ">=", "=<", "=>", "="}))
            op = p.take()
            if op.text not in _SENSES:
                raise LpParseError(f"expected a comparison, found {op.text!r}", op.line, op.column)
            rhs_terms, rhs_const = build_expr(_parse_expr(p, stop={";"}))
            end = p.expect(";")
            merged: dict = {}
            for coef, vname in lhs_terms:
                merged[vname] = merged.get(vname, Fraction(0)) + coef
            for coef, vname in rhs_terms:
                merged[vname] = merged.get(vname, Fraction(0)) - coef
            constraints.append((name_tok.text, merged, _SENSES[op.text], rhs_const - lhs_const))
            spans[name_tok.text] = (name_tok.line, end.line)
            continue

        # bounds over a variable list: v1, v2 cmp number
        if t.kind == "name":
            names = [p.take()]
            while p.peek() is not None and p.peek().text == ",":
                p.take()
                nxt = p.take()
                if nxt.kind != "name":
                    raise LpParseError("expected a variable name", nxt.line, nxt.column)
                names.append(nxt)
            op = p.take()
            if op.text not in _SENSES or _SENSES[op.text] is Sense.EQ:
                raise LpParseError(
                    "unnamed statements must be bounds or integrality declarations",
                    op.line, op.column)
            num = p.take()
            if num.kind != "number":
                raise LpParseError("expected a number", num.line, num.column)
            p.expect(";")
            value = _number(num.text)
            for name in names:
                rec = var(name.text)
                rec.explicit_bounds = True
                if _SENSES[op.text] is Sense.LE:
                    rec.upper = value
                else:
                    rec.lower = value
            continue

        raise LpParseError(f"unexpected token {t.text!r}", t.line, t.column)

    if obj_terms is None:
        raise LpParseError("empty input: an objective is required", 1, 1)

    built_vars = {}
    for name in sorted(variables, key=lambda n: variables[n].name):
        rec = variables[name]
        if rec.number_type is NumberType.BINARY:
            # explicit bounds are kept even on binaries so that
            # contradictions surface in validate() instead of vanishing
            if rec.explicit_bounds:
                built_vars[name] = Variable(name, (), NumberType.BINARY,
                                            rec.lower, rec.upper)
            else:
                built_vars[name] = Variable(name, (), NumberType.BINARY)
        else:
            built_vars[name] = Variable(name, (), rec.number_type, rec.lower, rec.upper)

    def to_expr(terms, constant=Fraction(0)) -> LinearExpr:
        return LinearExpr.of(((c, built_vars[n]) for c, n in terms), constant)

    terms, constant = obj_terms
    m = _MODEL_NAME_RE.search(text)
    model = Model(
        m.group(1) if m else "model",
        tuple(built_vars.values()),
        (),
        Objective(_objective_sense(text), to_expr(terms, constant)),
        tuple(
            Constraint(name, to_expr([(c, n) for n, c in merged.items()]), sense_, rhs)
            for name, merged, sense_, rhs in constraints
        ),
    )
    return LpDocument(text, model, spans)


def _objective_sense(text: str) -> ProblemSense:
    stripped = re.sub(r"//[^\n]*", "", text).lstrip()
    return ProblemSense.MAX if stripped.startswith("max") else ProblemSense.MIN


def parse_lp(text: str) -> Model:
    return parse_lp_document(text).model
