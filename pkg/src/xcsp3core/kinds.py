"""Typed constraint kinds and objectives.

Each constraint family from the core subset gets one frozen dataclass.
Variable lists are tuples of variable ids (strings); where the format
grants integer-expression views (allDifferent, allEqual, sum, count,
nValues, minimum, maximum and specialized objectives) the operand lists
hold expression trees instead.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Tuple, Union

from .errors import ParseError
from .expr import Expr, VarRef
from .model import Condition, Domain, Interval, Star, Value

# value-or-variable slot (coeffs, lengths, heights, counted values, size)
Val = Union[int, VarRef]


class OrderOp(Enum):
    LT = "lt"
    LE = "le"
    GE = "ge"
    GT = "gt"

    def holds(self, a, b) -> bool:
        if self is OrderOp.LT:
            return a < b
        if self is OrderOp.LE:
            return a <= b
        if self is OrderOp.GE:
            return a >= b
        return a > b


@dataclass(frozen=True)
class Intension:
    function: Expr


@dataclass(frozen=True)
class Extension:
    """Table constraint. Non-unary tables hold tuples (with * wildcards
    allowed); unary tables hold a Domain built from value/interval tokens."""

    scope: Tuple[str, ...]
    positive: bool
    tuples: Optional[Tuple[Tuple[Value, ...], ...]] = None
    unary: Optional[Domain] = None

    def __post_init__(self) -> None:
        if (self.tuples is None) == (self.unary is None):
            raise ValueError("exactly one of tuples/unary must be set")
        if self.unary is not None and len(self.scope) != 1:
            raise ValueError("unary table with non-unary scope")


@dataclass(frozen=True)
class Regular:
    scope: Tuple[str, ...]
    transitions: Tuple[Tuple[str, int, str], ...]
    start: str
    finals: Tuple[str, ...]


@dataclass(frozen=True)
class Mdd:
    scope: Tuple[str, ...]
    transitions: Tuple[Tuple[str, int, str], ...]


def mdd_root_terminal(transitions: Tuple[Tuple[str, int, str], ...]) -> Tuple[str, str]:
    """Root has no incoming arcs, terminal no outgoing; both must be unique."""
    sources = {t[0] for t in transitions}
    targets = {t[2] for t in transitions}
    roots = sources - targets
    terminals = targets - sources
    if len(roots) != 1 or len(terminals) != 1:
        raise ParseError(
            f"mdd needs one root and one terminal, found {sorted(roots)} / {sorted(terminals)}",
            rule="mdd-shape")
    return next(iter(roots)), next(iter(terminals))


@dataclass(frozen=True)
class AllDifferent:
    operands: Tuple[Expr, ...]
    excepts: Tuple[int, ...] = ()


@dataclass(frozen=True)
class AllDifferentLists:
    lists: Tuple[Tuple[str, ...], ...]
    excepts: Tuple[Tuple[int, ...], ...] = ()


@dataclass(frozen=True)
class AllDifferentMatrix:
    rows: Tuple[Tuple[str, ...], ...]


@dataclass(frozen=True)
class AllEqual:
    operands: Tuple[Expr, ...]


@dataclass(frozen=True)
class Ordered:
    vars: Tuple[str, ...]
    op: OrderOp
    lengths: Optional[Tuple[Val, ...]] = None


@dataclass(frozen=True)
class Lex:
    lists: Tuple[Tuple[str, ...], ...]
    op: OrderOp


@dataclass(frozen=True)
class Lex2:
    """Lex chain over the rows and over the columns of a matrix."""

    rows: Tuple[Tuple[str, ...], ...]
    op: OrderOp


@dataclass(frozen=True)
class Sum:
    terms: Tuple[Expr, ...]
    coeffs: Tuple[Val, ...]
    condition: Condition


@dataclass(frozen=True)
class Count:
    operands: Tuple[Expr, ...]
    values: Tuple[Val, ...]
    condition: Condition


@dataclass(frozen=True)
class NValues:
    operands: Tuple[Expr, ...]
    condition: Condition
    excepts: Tuple[int, ...] = ()


@dataclass(frozen=True)
class Cardinality:
    vars: Tuple[str, ...]
    values: Tuple[Val, ...]
    occurs: Tuple[Union[int, VarRef, Interval], ...]
    closed: bool = False


@dataclass(frozen=True)
class Minimum:
    operands: Tuple[Expr, ...]
    condition: Condition


@dataclass(frozen=True)
class Maximum:
    operands: Tuple[Expr, ...]
    condition: Condition


# right-hand side of element: a target value/variable or a full condition
ElementRhs = Union[int, VarRef, Condition]


@dataclass(frozen=True)
class ElementVarList:
    vars: Tuple[str, ...]
    index: str
    rhs: ElementRhs


@dataclass(frozen=True)
class ElementValList:
    values: Tuple[int, ...]
    index: str
    rhs: ElementRhs


@dataclass(frozen=True)
class ElementMatrix:
    """cells holds variable ids (str) or plain values (int), homogeneously."""

    cells: Tuple[Tuple[Union[str, int], ...], ...]
    row_index: str
    col_index: str
    rhs: ElementRhs


@dataclass(frozen=True)
class ChannelOne:
    vars: Tuple[str, ...]


@dataclass(frozen=True)
class ChannelTwo:
    first: Tuple[str, ...]
    second: Tuple[str, ...]


@dataclass(frozen=True)
class ChannelValue:
    vars: Tuple[str, ...]
    value: str


@dataclass(frozen=True)
class NoOverlap1:
    origins: Tuple[str, ...]
    lengths: Tuple[Val, ...]
    zero_ignored: bool = True


@dataclass(frozen=True)
class NoOverlapK:
    origins: Tuple[Tuple[str, ...], ...]
    lengths: Tuple[Tuple[Val, ...], ...]
    zero_ignored: bool = True


@dataclass(frozen=True)
class Cumulative:
    origins: Tuple[str, ...]
    lengths: Tuple[Val, ...]
    heights: Tuple[Val, ...]
    condition: Condition


@dataclass(frozen=True)
class Circuit:
    vars: Tuple[str, ...]
    size: Optional[Val] = None


@dataclass(frozen=True)
class InstantiationCtr:
    """instantiation posted as a constraint; * entries restrict nothing."""

    vars: Tuple[str, ...]
    values: Tuple[Value, ...]


ConstraintKind = Union[
    Intension, Extension, Regular, Mdd,
    AllDifferent, AllDifferentLists, AllDifferentMatrix, AllEqual,
    Ordered, Lex, Lex2,
    Sum, Count, NValues, Cardinality,
    Minimum, Maximum,
    ElementVarList, ElementValList, ElementMatrix,
    ChannelOne, ChannelTwo, ChannelValue,
    NoOverlap1, NoOverlapK, Cumulative, Circuit,
    InstantiationCtr,
]


class Sense(Enum):
    MINIMIZE = "minimize"
    MAXIMIZE = "maximize"


class ObjKind(Enum):
    EXPRESSION = "expression"
    SUM = "sum"
    MINIMUM = "minimum"
    MAXIMUM = "maximum"
    NVALUES = "nValues"
    LEX = "lex"


@dataclass(frozen=True)
class Objective:
    sense: Sense
    kind: ObjKind
    expression: Optional[Expr] = None
    operands: Tuple[Expr, ...] = ()
    coeffs: Optional[Tuple[int, ...]] = None

    def __post_init__(self) -> None:
        if self.kind is ObjKind.EXPRESSION:
            if self.expression is None:
                raise ValueError("expression objective without an expression")
        elif not self.operands:
            raise ValueError(f"{self.kind.value} objective needs operands")
        if self.coeffs is not None and len(self.coeffs) != len(self.operands):
            raise ValueError("coeffs length differs from operand count")
        if self.kind is ObjKind.LEX and self.coeffs is not None:
            raise ValueError("lex objectives take no coefficients")
