"""Core data model: domains, variables, arrays, conditions, instances.

All integers live in the signed 64-bit range; leaving it is a hard error.
The ``*`` wildcard (Star) appears only in solution value lists and in
short extension tuples, never in a domain.
"""

from __future__ import annotations

import itertools
import re
from collections.abc import Mapping as MappingABC
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

from .errors import (
    DuplicateId,
    IndexOutOfBounds,
    MalformedCompactToken,
    MalformedInterval,
    MatrixContextError,
    OutOfOrder,
    UnknownArray,
    UnresolvedOperand,
    check_int64,
)
from .expr import VarRef


class Star:
    """Singleton wildcard; compares by identity, prints as ``*``."""

    _instance: Optional["Star"] = None

    def __new__(cls) -> "Star":
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "*"


STAR = Star()

Value = Union[int, Star]


@dataclass(frozen=True)
class Domain:
    """Finite ordered set of integers, stored as closed (lo, hi) runs.

    Runs must be strictly increasing and non-overlapping; single values
    are stored as (v, v). The declared shape is preserved (adjacent runs
    are not merged) so rendering stays close to the source text.
    """

    items: Tuple[Tuple[int, int], ...]

    def __post_init__(self) -> None:
        prev_hi: Optional[int] = None
        for lo, hi in self.items:
            check_int64(lo, "domain bound")
            check_int64(hi, "domain bound")
            if lo > hi:
                raise MalformedInterval(f"empty interval {lo}..{hi}", rule="interval-bounds")
            if prev_hi is not None and lo <= prev_hi:
                raise OutOfOrder(
                    f"domain values must be strictly increasing ({prev_hi} then {lo})",
                    rule="domain-order")
            prev_hi = hi

    @property
    def size(self) -> int:
        return sum(hi - lo + 1 for lo, hi in self.items)

    @property
    def min_value(self) -> int:
        return self.items[0][0]

    @property
    def max_value(self) -> int:
        return self.items[-1][1]

    def contains(self, v: int) -> bool:
        return any(lo <= v <= hi for lo, hi in self.items)

    def values(self) -> Iterator[int]:
        for lo, hi in self.items:
            yield from range(lo, hi + 1)

    def render(self) -> str:
        out = []
        for lo, hi in self.items:
            out.append(str(lo) if lo == hi else f"{lo}..{hi}")
        return " ".join(out)


def domain_contains(domain: Domain, v: int) -> bool:
    return domain.contains(v)


@dataclass(frozen=True)
class Variable:
    """An integer variable; domain None means declared-but-undefined."""

    id: str
    domain: Optional[Domain]

    @property
    def is_defined(self) -> bool:
        return self.domain is not None


@dataclass(frozen=True)
class VarArray:
    """Dense array of variables; cells stored row-major, 0-based."""

    id: str
    size: Tuple[int, ...]
    cells: Tuple[Variable, ...]

    def __post_init__(self) -> None:
        expected = 1
        for n in self.size:
            expected *= n
        if len(self.cells) != expected:
            raise ValueError(f"array {self.id}: {len(self.cells)} cells for size {self.size}")

    def flat_index(self, indexes: Sequence[int]) -> int:
        flat = 0
        for n, i in zip(self.size, indexes):
            if not 0 <= i < n:
                raise IndexOutOfBounds(f"{self.id}: index {i} outside 0..{n - 1}")
            flat = flat * n + i
        return flat

    def cell(self, indexes: Sequence[int]) -> Variable:
        if len(indexes) != len(self.size):
            raise IndexOutOfBounds(
                f"{self.id}: {len(indexes)} indexes for {len(self.size)} dimensions")
        return self.cells[self.flat_index(indexes)]

    def cell_id(self, indexes: Sequence[int]) -> str:
        return self.id + "".join(f"[{i}]" for i in indexes)


def cell_ids(array_id: str, size: Sequence[int]) -> List[str]:
    """All cell ids of an array shape in row-major order."""
    return [array_id + "".join(f"[{i}]" for i in idx)
            for idx in itertools.product(*(range(n) for n in size))]


# -- conditions ---------------------------------------------------------------

class CondOp(Enum):
    LT = "lt"
    LE = "le"
    GT = "gt"
    GE = "ge"
    EQ = "eq"
    NE = "ne"
    IN = "in"
    NOTIN = "notin"


RELATIONAL_OPS = frozenset({CondOp.LT, CondOp.LE, CondOp.GT, CondOp.GE, CondOp.EQ, CondOp.NE})
MEMBERSHIP_OPS = frozenset({CondOp.IN, CondOp.NOTIN})


@dataclass(frozen=True)
class Interval:
    lo: int
    hi: int


@dataclass(frozen=True)
class IntSet:
    values: Tuple[int, ...]


Operand = Union[int, VarRef, Interval, IntSet]


@dataclass(frozen=True)
class Condition:
    """Numerical condition (op, operand) attached to many constraints."""

    op: CondOp
    operand: Operand

    def __post_init__(self) -> None:
        if self.op in RELATIONAL_OPS and not isinstance(self.operand, (int, VarRef)):
            raise ValueError(f"{self.op.value} needs a value or variable operand")
        if self.op in MEMBERSHIP_OPS and not isinstance(self.operand, (Interval, IntSet)):
            raise ValueError(f"{self.op.value} needs an interval or set operand")


def eval_condition(lhs: int, condition: Condition, env: Mapping[str, int]) -> bool:
    """Test lhs against the condition, resolving a variable operand via env."""
    operand = condition.operand
    if isinstance(operand, VarRef):
        v = env.get(operand.id)
        if not isinstance(v, int):
            raise UnresolvedOperand(operand.id)
        operand = v
    op = condition.op
    if op is CondOp.LT:
        return lhs < operand
    if op is CondOp.LE:
        return lhs <= operand
    if op is CondOp.GT:
        return lhs > operand
    if op is CondOp.GE:
        return lhs >= operand
    if op is CondOp.EQ:
        return lhs == operand
    if op is CondOp.NE:
        return lhs != operand
    if isinstance(operand, Interval):
        inside = operand.lo <= lhs <= operand.hi
    else:
        assert isinstance(operand, IntSet)
        inside = lhs in operand.values
    return inside if op is CondOp.IN else not inside


# -- instantiations -----------------------------------------------------------

class Instantiation(MappingABC):
    """Immutable assignment of values (or Star) to variable ids."""

    __slots__ = ("_values",)

    def __init__(self, pairs: Union[Mapping[str, Value], Iterable[Tuple[str, Value]]]):
        items = list(pairs.items()) if isinstance(pairs, Mapping) else list(pairs)
        values: Dict[str, Value] = {}
        for vid, val in items:
            if vid in values:
                raise DuplicateId(f"variable {vid} assigned twice", rule="instantiation-ids")
            if isinstance(val, int):
                check_int64(val, f"value of {vid}")
            values[vid] = val
        self._values = values

    def __getitem__(self, key: str) -> Value:
        return self._values[key]

    def __iter__(self) -> Iterator[str]:
        return iter(self._values)

    def __len__(self) -> int:
        return len(self._values)

    def __repr__(self) -> str:
        inner = " ".join(f"{k}={v}" for k, v in self._values.items())
        return f"Instantiation({inner})"

    def value(self, vid: str) -> int:
        """Integer value of vid; Star and missing ids raise UnresolvedOperand."""
        v = self._values.get(vid)
        if not isinstance(v, int):
            raise UnresolvedOperand(vid)
        return v


# -- compact tokens -----------------------------------------------------------

_VXK_RE = re.compile(r"([+-]?[0-9]+)x([+-]?[0-9]+)")
_PLAIN_INT_RE = re.compile(r"[+-]?[0-9]+")


def expand_vxk(tokens: Union[str, Sequence[str]]) -> List[int]:
    """Expand a value sequence where ``vxk`` means v repeated k times."""
    if isinstance(tokens, str):
        tokens = tokens.split()
    out: List[int] = []
    for token in tokens:
        m = _VXK_RE.fullmatch(token)
        if m:
            v, k = int(m.group(1)), int(m.group(2))
            if k <= 0:
                raise MalformedCompactToken(
                    f"repeat count must be positive in {token!r}", rule="vxk-count")
            out.extend([check_int64(v, "vxk value")] * k)
        elif _PLAIN_INT_RE.fullmatch(token):
            out.append(check_int64(int(token), "value"))
        else:
            raise MalformedCompactToken(f"bad integer token {token!r}", rule="vxk-token")
    return out


class Context(Enum):
    """Where a compact array reference appears; governs its expansion."""

    LIST = "list"
    MATRIX = "matrix"


_COMPACT_RE = re.compile(r"([A-Za-z][A-Za-z0-9_]*)((?:\[[^\[\]]*\])+)")
_SLOT_RE = re.compile(r"\[([^\[\]]*)\]")

def is_compact_token(token: str) -> bool:
    """True for array references carrying index slots: x[], x[2], x[1..3]."""
    return bool(_COMPACT_RE.fullmatch(token))


def _parse_slot(token: str, slot: str, dim: int) -> Tuple[int, int, bool]:
    """Return (lo, hi, fixed). fixed means the slot was a single index."""
    if slot == "":
        return 0, dim - 1, False
    m = re.fullmatch(r"([+-]?[0-9]+)\.\.([+-]?[0-9]+)", slot)
    if m:
        lo, hi = int(m.group(1)), int(m.group(2))
        if lo > hi:
            raise MalformedInterval(f"empty index range in {token!r}", rule="interval-bounds")
        return lo, hi, False
    if _PLAIN_INT_RE.fullmatch(slot):
        i = int(slot)
        return i, i, True
    raise MalformedCompactToken(f"bad index slot [{slot}] in {token!r}", rule="compact-token")


def expand_compact_variable_list(
    token: str,
    arrays: Mapping[str, VarArray],
    context: Context = Context.LIST,
) -> Union[List[str], List[List[str]]]:
    """Expand a compact array reference into cell ids.

    LIST context flattens lexicographically by index tuple. MATRIX context
    yields one row per leading free dimension and requires the token to
    select a 2-dimensional grid (exactly two slots not fixed to a single
    index).
    """
    m = _COMPACT_RE.fullmatch(token)
    if not m:
        raise MalformedCompactToken(f"not a compact array reference: {token!r}",
                                    rule="compact-token")
    name, slot_text = m.group(1), m.group(2)
    array = arrays.get(name)
    if array is None:
        raise UnknownArray(f"unknown array {name!r}")
    slots = _SLOT_RE.findall(slot_text)
    if len(slots) != len(array.size):
        raise IndexOutOfBounds(
            f"{token!r}: {len(slots)} index slots for {len(array.size)}-dimensional array")
    ranges: List[range] = []
    free: List[int] = []
    for axis, (slot, dim) in enumerate(zip(slots, array.size)):
        lo, hi, fixed = _parse_slot(token, slot, dim)
        if not 0 <= lo <= hi < dim:
            raise IndexOutOfBounds(f"{token!r}: indexes {lo}..{hi} outside 0..{dim - 1}")
        ranges.append(range(lo, hi + 1))
        if not fixed:
            free.append(axis)
    if context is Context.LIST:
        return [array.cell_id(idx) for idx in itertools.product(*ranges)]
    if len(free) != 2:
        raise MatrixContextError(
            f"{token!r} selects a {len(free)}-dimensional grid; matrix slots need 2")
    rows: List[List[str]] = []
    for r in ranges[free[0]]:
        row = []
        fixed_idx = [rng[0] for rng in ranges]
        fixed_idx[free[0]] = r
        for c in ranges[free[1]]:
            fixed_idx[free[1]] = c
            row.append(array.cell_id(fixed_idx))
        rows.append(row)
    return rows


# -- instances ----------------------------------------------------------------

class Framework(Enum):
    CSP = "CSP"
    COP = "COP"


@dataclass(frozen=True)
class PostedConstraint:
    """A constraint occurrence with identity and block metadata."""

    kind: Any  # one of the dataclasses in kinds.py
    id: Optional[str] = None
    classes: Tuple[str, ...] = ()
    note: Optional[str] = None

    def label(self, position: int) -> str:
        """Stable name for reports: the id, or a positional #k fallback."""
        return self.id if self.id is not None else f"#{position}"


@dataclass
class Instance:
    """A parsed instance: declarations in document order plus constraints."""

    declarations: Tuple[Union[Variable, VarArray], ...]
    constraints: Tuple[PostedConstraint, ...]
    objective: Optional[Any] = None  # kinds.Objective
    decision: Optional[Tuple[str, ...]] = None

    def __post_init__(self) -> None:
        self._vars_by_id: Dict[str, Variable] = {}
        self._arrays_by_id: Dict[str, VarArray] = {}
        for decl in self.declarations:
            if isinstance(decl, VarArray):
                if decl.id in self._arrays_by_id or decl.id in self._vars_by_id:
                    raise DuplicateId(f"id {decl.id!r} declared twice")
                self._arrays_by_id[decl.id] = decl
                for cell in decl.cells:
                    self._vars_by_id[cell.id] = cell
            else:
                if decl.id in self._vars_by_id or decl.id in self._arrays_by_id:
                    raise DuplicateId(f"id {decl.id!r} declared twice")
                self._vars_by_id[decl.id] = decl

    @property
    def framework(self) -> Framework:
        return Framework.COP if self.objective is not None else Framework.CSP

    @property
    def vars(self) -> Tuple[Variable, ...]:
        return tuple(d for d in self.declarations if isinstance(d, Variable))

    @property
    def arrays(self) -> Tuple[VarArray, ...]:
        return tuple(d for d in self.declarations if isinstance(d, VarArray))

    @property
    def arrays_by_id(self) -> Dict[str, VarArray]:
        return self._arrays_by_id

    def variables(self) -> Iterator[Variable]:
        """Every variable (stand-alone and array cells) in document order."""
        for decl in self.declarations:
            if isinstance(decl, VarArray):
                yield from decl.cells
            else:
                yield decl

    def variable(self, vid: str) -> Optional[Variable]:
        return self._vars_by_id.get(vid)

    def has_variable(self, vid: str) -> bool:
        return vid in self._vars_by_id

    def constraint_labels(self) -> List[str]:
        return [c.label(i) for i, c in enumerate(self.constraints)]


def export_id(identifier: str) -> str:
    """Flat-file spelling of a structured id: x[0][3] -> x_0_3, g[0] -> g_0."""
    return identifier.replace("[", "_").replace("]", "")
