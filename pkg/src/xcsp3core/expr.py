"""Functional expression trees: parsing, printing, evaluation, substitution.

Expressions use the functional notation of XCSP3-core, e.g.
``le(add(mul(250,b),mul(200,c)),4000)``. No whitespace is permitted
anywhere inside an expression. Booleans are the integers 0 and 1; any
integer may feed a boolean slot (nonzero counts as true) and any boolean
result may feed an integer slot.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

from .errors import (
    ArityError,
    DivisionByZero,
    EvalError,
    ExprSyntaxError,
    MissingArgument,
    NegativeExponent,
    Overflow,
    RestInsideExpression,
    UnboundVariable,
    WhitespaceError,
    check_int64,
)


@dataclass(frozen=True)
class IntConst:
    value: int


@dataclass(frozen=True)
class VarRef:
    """Reference to a variable, possibly an array cell like ``x[0][3]``."""
    id: str


@dataclass(frozen=True)
class Param:
    """Template parameter %k."""
    index: int


@dataclass(frozen=True)
class ParamRest:
    """Template parameter %... (absorbs the tail of an argument sequence)."""


@dataclass(frozen=True)
class SetLiteral:
    """set(...) of integer constants; only valid as the second slot of in()."""
    values: Tuple[int, ...]


@dataclass(frozen=True)
class OpCall:
    op: str
    args: Tuple["Expr", ...]


Expr = Union[IntConst, VarRef, Param, ParamRest, SetLiteral, OpCall]

# operator -> (min arity, max arity or None when unbounded)
ARITIES: Dict[str, Tuple[int, Optional[int]]] = {
    "neg": (1, 1), "abs": (1, 1), "sqr": (1, 1),
    "add": (2, None), "sub": (2, 2), "mul": (2, None),
    "div": (2, 2), "mod": (2, 2), "pow": (2, 2), "dist": (2, 2),
    "min": (2, None), "max": (2, None),
    "lt": (2, 2), "le": (2, 2), "ge": (2, 2), "gt": (2, 2),
    "ne": (2, 2), "eq": (2, None),
    "in": (2, 2),
    "not": (1, 1), "and": (2, None), "or": (2, None),
    "xor": (2, None), "iff": (2, None), "imp": (2, 2),
    "if": (3, 3),
}

BOOLEAN_OPS = frozenset(
    {"lt", "le", "ge", "gt", "ne", "eq", "in", "not", "and", "or", "xor", "iff", "imp"}
)

# Reserved words; none of them may be used as an identifier.
KEYWORDS = frozenset(
    """neg abs add sub mul div mod sqr pow min max dist lt le ge gt ne eq set in
    not and or xor iff imp if card union inter diff sdiff hull djoint subset
    subseq supseq supset convex PI E fdiv fmod sqrt nroot exp ln log sin cos tan
    asin acos atan sinh cosh tanh others""".split()
)

_IDENT_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*")
_INT_RE = re.compile(r"[+-]?[0-9]+")


def is_identifier(token: str) -> bool:
    """Valid identifier: letter then letters/digits/underscores, not a keyword."""
    return bool(_IDENT_RE.fullmatch(token)) and token not in KEYWORDS


class _Parser:
    def __init__(self, text: str, path: Optional[str] = None):
        self.text = text
        self.pos = 0
        self.path = path

    def fail(self, message: str, offset: Optional[int] = None) -> ExprSyntaxError:
        return ExprSyntaxError(message, self.pos if offset is None else offset,
                               path=self.path, rule="expression-syntax")

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str) -> None:
        if self.peek() != ch:
            raise self.fail(f"expected '{ch}'")
        self.pos += 1

    def parse(self) -> Expr:
        node = self.parse_node()
        if self.pos != len(self.text):
            raise self.fail("trailing characters after expression")
        return node

    def parse_node(self) -> Expr:
        ch = self.peek()
        if ch == "":
            raise self.fail("unexpected end of expression")
        if ch == "%":
            return self.parse_param()
        if ch in "+-" or ch.isdigit():
            return self.parse_int()
        if ch.isalpha():
            return self.parse_name()
        raise self.fail(f"unexpected character {ch!r}")

    def parse_param(self) -> Expr:
        start = self.pos
        self.pos += 1
        if self.text.startswith("...", self.pos):
            self.pos += 3
            return ParamRest()
        m = re.compile(r"[0-9]+").match(self.text, self.pos)
        if not m:
            raise self.fail("malformed parameter", start)
        self.pos = m.end()
        return Param(int(m.group()))

    def parse_int(self) -> IntConst:
        m = _INT_RE.match(self.text, self.pos)
        if not m:
            raise self.fail("malformed integer")
        self.pos = m.end()
        value = int(m.group())
        check_int64(value, "integer literal")
        return IntConst(value)

    def parse_name(self) -> Expr:
        start = self.pos
        m = _IDENT_RE.match(self.text, self.pos)
        assert m is not None
        name = m.group()
        self.pos = m.end()
        if self.peek() == "(":
            return self.parse_call(name, start)
        if name in ARITIES:
            raise self.fail(f"operator '{name}' used as a variable", start)
        if name in KEYWORDS:
            raise self.fail(f"reserved word '{name}' used as a variable", start)
        return VarRef(name + self.parse_indexing())

    def parse_indexing(self) -> str:
        # Array cell references carry plain unsigned indexes: x[2][3].
        out = []
        while self.peek() == "[":
            self.pos += 1
            m = re.compile(r"[0-9]+").match(self.text, self.pos)
            if not m:
                raise self.fail("array index must be an unsigned integer")
            self.pos = m.end()
            self.expect("]")
            out.append(f"[{m.group()}]")
        return "".join(out)

    def parse_call(self, name: str, start: int) -> Expr:
        if name != "set" and name not in ARITIES:
            raise self.fail(f"unknown operator '{name}'", start)
        self.expect("(")
        args: List[Expr] = []
        if self.peek() == ")":
            self.pos += 1
        else:
            while True:
                args.append(self.parse_node())
                ch = self.peek()
                if ch == ",":
                    self.pos += 1
                    continue
                if ch == ")":
                    self.pos += 1
                    break
                raise self.fail("expected ',' or ')'")
        if name == "set":
            values = []
            for a in args:
                if not isinstance(a, IntConst):
                    raise self.fail("set literals may only contain integers", start)
                values.append(a.value)
            return SetLiteral(tuple(values))
        lo, hi = ARITIES[name]
        if len(args) < lo or (hi is not None and len(args) > hi):
            bound = str(lo) if hi == lo else (f">= {lo}" if hi is None else f"{lo}..{hi}")
            raise ArityError(
                f"operator '{name}' takes {bound} arguments, got {len(args)}",
                start, path=self.path, rule="operator-arity")
        if name == "in" and not isinstance(args[1], SetLiteral):
            raise self.fail("second argument of in() must be a set literal", start)
        return OpCall(name, tuple(args))


def parse_expr(text: str, path: Optional[str] = None) -> Expr:
    """Parse a functional expression. The text must contain no whitespace."""
    for i, ch in enumerate(text):
        if ch.isspace():
            raise WhitespaceError("whitespace inside functional expression", i,
                                  path=path, rule="expression-whitespace")
    if not text:
        raise ExprSyntaxError("empty expression", 0, path=path, rule="expression-syntax")
    return _Parser(text, path).parse()


def print_expr(e: Expr) -> str:
    """Render canonically; parse_expr(print_expr(e)) == e."""
    if isinstance(e, IntConst):
        return str(e.value)
    if isinstance(e, VarRef):
        return e.id
    if isinstance(e, Param):
        return f"%{e.index}"
    if isinstance(e, ParamRest):
        return "%..."
    if isinstance(e, SetLiteral):
        return "set(" + ",".join(str(v) for v in e.values) + ")"
    return e.op + "(" + ",".join(print_expr(a) for a in e.args) + ")"


def _truth(v: int) -> bool:
    return v != 0


def _trunc_div(a: int, b: int) -> int:
    if b == 0:
        raise DivisionByZero(f"div({a},{b})")
    q = abs(a) // abs(b)
    return q if (a >= 0) == (b >= 0) else -q


def _power(base: int, exponent: int) -> int:
    if exponent < 0:
        raise NegativeExponent(f"pow({base},{exponent})")
    if base == 0:
        return 1 if exponent == 0 else 0
    if base == 1:
        return 1
    if base == -1:
        return 1 if exponent % 2 == 0 else -1
    if exponent > 63:
        # |base| >= 2 here, so the result cannot fit in 64 bits.
        raise Overflow(f"pow({base},{exponent}) leaves the 64-bit integer range")
    result = 1
    for _ in range(exponent):
        result = check_int64(result * base, "pow")
    return result


def eval_expr(e: Expr, env: Mapping[str, int]) -> int:
    """Evaluate under env (variable id -> int). Booleans come back as 0/1."""
    if isinstance(e, IntConst):
        return e.value
    if isinstance(e, VarRef):
        v = env.get(e.id)
        if not isinstance(v, int):
            raise UnboundVariable(e.id)
        return v
    if isinstance(e, (Param, ParamRest)):
        raise EvalError("template parameter in expression; substitute arguments first")
    if isinstance(e, SetLiteral):
        raise EvalError("set literal outside in()")

    op, raw_args = e.op, e.args
    if op == "if":
        cond = eval_expr(raw_args[0], env)
        # Only the selected branch is evaluated.
        return eval_expr(raw_args[1] if _truth(cond) else raw_args[2], env)
    if op == "in":
        lhs = eval_expr(raw_args[0], env)
        members = raw_args[1]
        assert isinstance(members, SetLiteral)
        return int(lhs in members.values)

    args = [eval_expr(a, env) for a in raw_args]
    if op == "neg":
        return check_int64(-args[0], op)
    if op == "abs":
        return check_int64(abs(args[0]), op)
    if op == "sqr":
        return check_int64(args[0] * args[0], op)
    if op == "add":
        total = 0
        for a in args:
            total = check_int64(total + a, op)
        return total
    if op == "sub":
        return check_int64(args[0] - args[1], op)
    if op == "mul":
        total = 1
        for a in args:
            total = check_int64(total * a, op)
        return total
    if op == "div":
        return _trunc_div(args[0], args[1])
    if op == "mod":
        if args[1] == 0:
            raise DivisionByZero(f"mod({args[0]},{args[1]})")
        return args[0] - args[1] * _trunc_div(args[0], args[1])
    if op == "pow":
        return _power(args[0], args[1])
    if op == "dist":
        return check_int64(abs(args[0] - args[1]), op)
    if op == "min":
        return min(args)
    if op == "max":
        return max(args)
    if op == "lt":
        return int(args[0] < args[1])
    if op == "le":
        return int(args[0] <= args[1])
    if op == "ge":
        return int(args[0] >= args[1])
    if op == "gt":
        return int(args[0] > args[1])
    if op == "ne":
        return int(args[0] != args[1])
    if op == "eq":
        return int(all(a == args[0] for a in args[1:]))
    if op == "not":
        return int(not _truth(args[0]))
    if op == "and":
        return int(all(_truth(a) for a in args))
    if op == "or":
        return int(any(_truth(a) for a in args))
    if op == "xor":
        return int(sum(1 for a in args if _truth(a)) % 2 == 1)
    if op == "iff":
        first = _truth(args[0])
        return int(all(_truth(a) == first for a in args[1:]))
    if op == "imp":
        return int(not _truth(args[0]) or _truth(args[1]))
    raise EvalError(f"unhandled operator {op!r}")


def substitute_params(e: Expr, args: Sequence[Expr]) -> Expr:
    """Replace %k leaves with args[k]. %... is illegal inside an expression."""
    if isinstance(e, Param):
        if e.index >= len(args):
            raise MissingArgument(f"no argument for parameter %{e.index}")
        return args[e.index]
    if isinstance(e, ParamRest):
        raise RestInsideExpression("%... cannot occur inside a functional expression")
    if isinstance(e, OpCall):
        return OpCall(e.op, tuple(substitute_params(a, args) for a in e.args))
    return e


def free_vars(e: Expr) -> List[str]:
    """Variable ids in first-occurrence order, without duplicates."""
    seen: Dict[str, None] = {}

    def walk(node: Expr) -> None:
        if isinstance(node, VarRef):
            seen.setdefault(node.id, None)
        elif isinstance(node, OpCall):
            for a in node.args:
                walk(a)

    walk(e)
    return list(seen)
