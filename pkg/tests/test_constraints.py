"""Checker semantics for every constraint kind, plus whole-solution verdicts."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from xcsp3core import kinds as K
from xcsp3core.checker import (
    CheckMode,
    VerdictKind,
    check_constraint,
    check_solution,
    ensure_scope_assigned,
    eval_objective,
    objective_scope,
    partial_violated,
    scope_of,
    useful_variables,
)
from xcsp3core.errors import (
    CostMismatch,
    Overflow,
    StarInScope,
    UnboundVariable,
    UnknownVariable,
    ValueOutsideDomain,
)
from xcsp3core.expr import VarRef, parse_expr
from xcsp3core.model import (
    STAR,
    CondOp,
    Condition,
    Instantiation,
    Interval,
    IntSet,
    Domain,
)
from xcsp3core.parser import parse_file, parse_string

import oracles
from conftest import fixture_path


def V(name):
    return VarRef(name)


def cond(op, operand):
    return Condition(CondOp(op), operand)


def expr(text):
    return parse_expr(text)


# -- intension / extension --------------------------------------------------------


def test_intension_truthiness():
    kind = K.Intension(expr("eq(add(x,y),z)"))
    assert check_constraint(kind, {"x": 1, "y": 2, "z": 3})
    assert not check_constraint(kind, {"x": 1, "y": 2, "z": 4})


def test_extension_positive_with_stars():
    kind = K.Extension(scope=("x", "y", "z"), positive=True,
                       tuples=((1, STAR, 3), (2, 2, 2)))
    assert check_constraint(kind, {"x": 1, "y": 9, "z": 3})
    assert check_constraint(kind, {"x": 2, "y": 2, "z": 2})
    assert not check_constraint(kind, {"x": 1, "y": 9, "z": 4})


def test_extension_negative_forbids_matches():
    kind = K.Extension(scope=("x", "y"), positive=False, tuples=((0, STAR),))
    assert not check_constraint(kind, {"x": 0, "y": 5})
    assert check_constraint(kind, {"x": 1, "y": 0})


def test_extension_unary_domain():
    dom = Domain(((1, 2), (5, 5)))
    pos = K.Extension(scope=("x",), positive=True, unary=dom)
    neg = K.Extension(scope=("x",), positive=False, unary=dom)
    assert check_constraint(pos, {"x": 2})
    assert not check_constraint(pos, {"x": 3})
    assert check_constraint(neg, {"x": 3})
    assert not check_constraint(neg, {"x": 5})


def test_extension_rejects_ambiguous_payload():
    with pytest.raises(ValueError):
        K.Extension(scope=("x",), positive=True)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000))
def test_short_table_matches_expanded_table(seed):
    """A starred row constrains exactly like the set of rows it abbreviates."""
    rng = random.Random(seed)
    rows, domains = oracles.random_short_table(rng)
    names = [f"v{i}" for i in range(len(domains))]
    short = K.Extension(scope=tuple(names), positive=True,
                        tuples=tuple(tuple(r) for r in rows))
    expanded = oracles.expand_short_tuples(rows, domains)
    import itertools
    for point in itertools.product(*domains):
        env = dict(zip(names, point))
        assert check_constraint(short, env) == (point in expanded)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000))
def test_negative_table_is_complement(seed):
    rng = random.Random(seed)
    rows, domains = oracles.random_short_table(rng)
    names = [f"v{i}" for i in range(len(domains))]
    pos = K.Extension(scope=tuple(names), positive=True,
                      tuples=tuple(tuple(r) for r in rows))
    neg = K.Extension(scope=tuple(names), positive=False,
                      tuples=tuple(tuple(r) for r in rows))
    import itertools
    for point in itertools.product(*domains):
        env = dict(zip(names, point))
        assert check_constraint(pos, env) != check_constraint(neg, env)


# -- regular / mdd ------------------------------------------------------------


WORD_AUTOMATON = K.Regular(
    scope=tuple(f"x{i}" for i in range(1, 8)),
    transitions=(("a", 0, "a"), ("a", 1, "b"), ("b", 1, "c"), ("c", 0, "d"),
                 ("d", 0, "d"), ("d", 1, "e"), ("e", 0, "e")),
    start="a",
    finals=("e",),
)


def _word_env(word):
    return {f"x{i}": v for i, v in enumerate(word, start=1)}


def test_regular_accepts_frozen_word():
    assert check_constraint(WORD_AUTOMATON, _word_env([0, 1, 1, 0, 0, 1, 0]))


def test_regular_rejects_dead_and_nonfinal_words():
    # no transition out of e on 1
    assert not check_constraint(WORD_AUTOMATON, _word_env([0, 1, 1, 0, 0, 1, 1]))
    # stops in d, which is not final
    assert not check_constraint(WORD_AUTOMATON, _word_env([0, 1, 1, 0, 0, 0, 0]))


def test_regular_matches_fixture_parse():
    inst = parse_file(fixture_path("regular_word.xml"))
    kind = inst.constraints[0].kind
    assert isinstance(kind, K.Regular)
    assert check_constraint(kind, _word_env([0, 1, 1, 0, 0, 1, 0]))


MDD_TRIPLES = K.Mdd(
    scope=("x1", "x2", "x3"),
    transitions=(("r", 0, "n1"), ("r", 1, "n2"), ("r", 2, "n3"),
                 ("n1", 2, "n4"), ("n2", 2, "n4"), ("n3", 0, "n5"),
                 ("n4", 0, "t"), ("n5", 0, "t")),
)


def test_mdd_accepts_exactly_frozen_triples():
    expected = {(0, 2, 0), (1, 2, 0), (2, 0, 0)}
    got = set()
    for a in range(3):
        for b in range(3):
            for c in range(3):
                if check_constraint(MDD_TRIPLES, {"x1": a, "x2": b, "x3": c}):
                    got.add((a, b, c))
    assert got == expected


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10_000))
def test_regular_agrees_with_path_enumeration(seed):
    rng = random.Random(seed)
    transitions, start, finals, alphabet, length = oracles.random_automaton(rng)
    names = tuple(f"w{i}" for i in range(length))
    kind = K.Regular(scope=names, transitions=tuple(transitions),
                     start=start, finals=tuple(finals))
    import itertools
    for word in itertools.product(alphabet, repeat=length):
        env = dict(zip(names, word))
        assert check_constraint(kind, env) == oracles.automaton_accepts(
            transitions, start, finals, word)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10_000))
def test_mdd_agrees_with_path_enumeration(seed):
    rng = random.Random(seed)
    transitions, arity, alphabet = oracles.random_mdd(rng)
    names = tuple(f"w{i}" for i in range(arity))
    kind = K.Mdd(scope=names, transitions=tuple(transitions))
    accepted = oracles.mdd_accepted(transitions)
    import itertools
    for word in itertools.product(alphabet, repeat=arity):
        env = dict(zip(names, word))
        assert check_constraint(kind, env) == (word in accepted)


# -- comparison family --------------------------------------------------------


def test_all_different_and_excepts():
    plain = K.AllDifferent(operands=(V("a"), V("b"), V("c")))
    assert check_constraint(plain, {"a": 1, "b": 2, "c": 3})
    assert not check_constraint(plain, {"a": 1, "b": 2, "c": 1})
    spared = K.AllDifferent(operands=(V("a"), V("b"), V("c")), excepts=(0,))
    assert check_constraint(spared, {"a": 0, "b": 0, "c": 3})
    assert not check_constraint(spared, {"a": 4, "b": 4, "c": 0})


def test_all_different_over_expressions():
    # the queens diagonal view: x_i + i all different
    kind = K.AllDifferent(operands=(expr("add(q0,0)"), expr("add(q1,1)"),
                                    expr("add(q2,2)")))
    assert check_constraint(kind, {"q0": 0, "q1": 2, "q2": 0})
    assert not check_constraint(kind, {"q0": 1, "q1": 0, "q2": 0})


def test_all_different_lists_with_excepts():
    kind = K.AllDifferentLists(lists=(("a", "b"), ("c", "d"), ("e", "f")),
                               excepts=((0, 0),))
    env = {"a": 0, "b": 0, "c": 0, "d": 0, "e": 1, "f": 2}
    assert check_constraint(kind, env)
    env2 = {"a": 1, "b": 2, "c": 1, "d": 2, "e": 0, "f": 0}
    assert not check_constraint(kind, env2)


def test_all_different_matrix_checks_rows_and_columns():
    kind = K.AllDifferentMatrix(rows=(("a", "b"), ("c", "d")))
    assert check_constraint(kind, {"a": 1, "b": 2, "c": 2, "d": 1})
    # column clash: a and c share a value
    assert not check_constraint(kind, {"a": 1, "b": 2, "c": 1, "d": 2})


def test_all_equal():
    kind = K.AllEqual(operands=(V("a"), V("b"), V("c")))
    assert check_constraint(kind, {"a": 5, "b": 5, "c": 5})
    assert not check_constraint(kind, {"a": 5, "b": 5, "c": 6})


def test_ordered_with_and_without_lengths():
    strict = K.Ordered(vars=("a", "b", "c"), op=K.OrderOp.LT)
    assert check_constraint(strict, {"a": 1, "b": 2, "c": 5})
    assert not check_constraint(strict, {"a": 1, "b": 1, "c": 5})
    # separation: a + 3 <= b, b + 1 <= c
    gapped = K.Ordered(vars=("a", "b", "c"), op=K.OrderOp.LE, lengths=(3, 1))
    assert check_constraint(gapped, {"a": 0, "b": 3, "c": 4})
    assert not check_constraint(gapped, {"a": 0, "b": 2, "c": 4})


def test_ordered_with_variable_lengths():
    kind = K.Ordered(vars=("a", "b"), op=K.OrderOp.LT, lengths=(V("g"),))
    assert check_constraint(kind, {"a": 0, "b": 2, "g": 1})
    assert not check_constraint(kind, {"a": 0, "b": 2, "g": 2})


def test_lex_chains():
    kind = K.Lex(lists=(("a", "b"), ("c", "d")), op=K.OrderOp.LE)
    assert check_constraint(kind, {"a": 1, "b": 9, "c": 2, "d": 0})
    assert check_constraint(kind, {"a": 1, "b": 2, "c": 1, "d": 2})
    assert not check_constraint(kind, {"a": 2, "b": 0, "c": 1, "d": 9})
    strict = K.Lex(lists=(("a", "b"), ("c", "d")), op=K.OrderOp.LT)
    assert not check_constraint(strict, {"a": 1, "b": 2, "c": 1, "d": 2})


def test_lex2_orders_rows_and_columns():
    kind = K.Lex2(rows=(("a", "b"), ("c", "d")), op=K.OrderOp.LE)
    assert check_constraint(kind, {"a": 0, "b": 1, "c": 1, "d": 0})
    # rows (1,0) <= (1,2) hold but columns (1,1) > (0,2) do not
    assert not check_constraint(kind, {"a": 1, "b": 0, "c": 1, "d": 2})


# -- counting / summing -------------------------------------------------------


def test_sum_with_variable_coefficient_and_rhs():
    kind = K.Sum(terms=(V("a"), V("b")), coeffs=(V("k"), 2),
                 condition=cond("eq", V("t")))
    assert check_constraint(kind, {"a": 3, "b": 4, "k": 2, "t": 14})
    assert not check_constraint(kind, {"a": 3, "b": 4, "k": 2, "t": 15})


def test_sum_overflow_is_loud():
    kind = K.Sum(terms=(V("a"), V("b")), coeffs=(2**62, 2**62),
                 condition=cond("ge", 0))
    with pytest.raises(Overflow):
        check_constraint(kind, {"a": 2, "b": 2})


def test_count_with_variable_values():
    kind = K.Count(operands=(V("a"), V("b"), V("c")), values=(V("w"),),
                   condition=cond("eq", 2))
    assert check_constraint(kind, {"a": 7, "b": 7, "c": 1, "w": 7})
    assert not check_constraint(kind, {"a": 7, "b": 1, "c": 2, "w": 7})


def test_count_condition_interval():
    kind = K.Count(operands=(V("a"), V("b"), V("c")), values=(1, 2),
                   condition=cond("in", Interval(1, 2)))
    assert check_constraint(kind, {"a": 1, "b": 5, "c": 5})
    assert check_constraint(kind, {"a": 1, "b": 2, "c": 5})
    assert not check_constraint(kind, {"a": 5, "b": 5, "c": 5})
    assert not check_constraint(kind, {"a": 1, "b": 2, "c": 2})


def test_nvalues_with_excepts():
    kind = K.NValues(operands=(V("a"), V("b"), V("c")),
                     condition=cond("eq", 1), excepts=(0,))
    assert check_constraint(kind, {"a": 4, "b": 0, "c": 4})
    assert not check_constraint(kind, {"a": 4, "b": 5, "c": 4})


def test_cardinality_exact_and_interval_occurs():
    kind = K.Cardinality(vars=("a", "b", "c", "d"), values=(1, 2),
                         occurs=(2, Interval(0, 1)))
    assert check_constraint(kind, {"a": 1, "b": 1, "c": 2, "d": 9})
    assert check_constraint(kind, {"a": 1, "b": 1, "c": 9, "d": 9})
    assert not check_constraint(kind, {"a": 1, "b": 1, "c": 2, "d": 2})
    assert not check_constraint(kind, {"a": 1, "b": 9, "c": 9, "d": 9})


def test_cardinality_closed_restricts_value_set():
    kind = K.Cardinality(vars=("a", "b"), values=(0, 1),
                         occurs=(1, 1), closed=True)
    assert check_constraint(kind, {"a": 0, "b": 1})
    assert not check_constraint(kind, {"a": 0, "b": 2})


def test_cardinality_variable_values_must_be_distinct():
    kind = K.Cardinality(vars=("a", "b"), values=(V("u"), V("v")),
                         occurs=(1, 1))
    assert check_constraint(kind, {"a": 3, "b": 4, "u": 3, "v": 4})
    assert not check_constraint(kind, {"a": 3, "b": 3, "u": 3, "v": 3})


def test_minimum_and_maximum_conditions():
    mn = K.Minimum(operands=(V("a"), V("b"), V("c")), condition=cond("eq", V("m")))
    assert check_constraint(mn, {"a": 4, "b": 2, "c": 9, "m": 2})
    assert not check_constraint(mn, {"a": 4, "b": 2, "c": 9, "m": 4})
    mx = K.Maximum(operands=(V("a"), V("b")), condition=cond("notin", Interval(5, 9)))
    assert check_constraint(mx, {"a": 4, "b": 2})
    assert not check_constraint(mx, {"a": 7, "b": 2})


def test_minimum_over_expressions():
    kind = K.Minimum(operands=(expr("add(a,1)"), expr("mul(b,2)")),
                     condition=cond("le", 3))
    assert check_constraint(kind, {"a": 2, "b": 1})
    assert not check_constraint(kind, {"a": 4, "b": 2})


# -- element ------------------------------------------------------------------


def test_element_var_list_forms():
    base = dict(vars=("a", "b", "c"), index="i")
    value_rhs = K.ElementVarList(rhs=7, **base)
    assert check_constraint(value_rhs, {"a": 7, "b": 1, "c": 2, "i": 0})
    assert not check_constraint(value_rhs, {"a": 7, "b": 1, "c": 2, "i": 1})
    var_rhs = K.ElementVarList(rhs=V("t"), **base)
    assert check_constraint(var_rhs, {"a": 0, "b": 5, "c": 0, "i": 1, "t": 5})
    cond_rhs = K.ElementVarList(rhs=cond("gt", 4), **base)
    assert check_constraint(cond_rhs, {"a": 0, "b": 5, "c": 0, "i": 1})
    assert not check_constraint(cond_rhs, {"a": 0, "b": 4, "c": 0, "i": 1})


def test_element_index_out_of_range_is_violation():
    kind = K.ElementVarList(vars=("a", "b"), index="i", rhs=0)
    assert not check_constraint(kind, {"a": 0, "b": 0, "i": 2})
    assert not check_constraint(kind, {"a": 0, "b": 0, "i": -1})


def test_element_val_list():
    kind = K.ElementValList(values=(10, 20, 30), index="i", rhs=V("t"))
    assert check_constraint(kind, {"i": 2, "t": 30})
    assert not check_constraint(kind, {"i": 2, "t": 20})
    assert not check_constraint(kind, {"i": 3, "t": 30})


def test_element_matrix_with_mixed_rhs():
    cells = (("a", "b"), ("c", "d"))
    kind = K.ElementMatrix(cells=cells, row_index="r", col_index="s", rhs=9)
    env = {"a": 1, "b": 9, "c": 3, "d": 4, "r": 0, "s": 1}
    assert check_constraint(kind, env)
    assert not check_constraint(kind, env | {"s": 0})
    assert not check_constraint(kind, env | {"r": 2})
    values = K.ElementMatrix(cells=((10, 20), (30, 40)), row_index="r",
                             col_index="s", rhs=cond("ge", 25))
    assert check_constraint(values, {"r": 1, "s": 0})
    assert not check_constraint(values, {"r": 0, "s": 1})


# -- connection constraints -----------------------------------------------------


def test_channel_single_list_is_involution():
    kind = K.ChannelOne(vars=("a", "b", "c"))
    assert check_constraint(kind, {"a": 1, "b": 0, "c": 2})
    assert check_constraint(kind, {"a": 0, "b": 1, "c": 2})
    assert not check_constraint(kind, {"a": 1, "b": 2, "c": 0})
    assert not check_constraint(kind, {"a": 3, "b": 0, "c": 2})


def test_channel_two_lists():
    kind = K.ChannelTwo(first=("a", "b"), second=("u", "v"))
    assert check_constraint(kind, {"a": 1, "b": 0, "u": 1, "v": 0})
    assert not check_constraint(kind, {"a": 1, "b": 0, "u": 0, "v": 1})


def test_channel_two_lists_shorter_first():
    # only the first list is channeled when sizes differ
    kind = K.ChannelTwo(first=("a",), second=("u", "v", "w"))
    assert check_constraint(kind, {"a": 2, "u": 9, "v": 9, "w": 0})
    assert not check_constraint(kind, {"a": 2, "u": 9, "v": 9, "w": 1})


def test_channel_value_points_at_the_single_one():
    kind = K.ChannelValue(vars=("a", "b", "c"), value="p")
    assert check_constraint(kind, {"a": 0, "b": 1, "c": 0, "p": 1})
    assert not check_constraint(kind, {"a": 0, "b": 1, "c": 1, "p": 1})
    assert not check_constraint(kind, {"a": 0, "b": 0, "c": 0, "p": 1})
    assert not check_constraint(kind, {"a": 0, "b": 1, "c": 0, "p": 2})


# -- packing / scheduling ---------------------------------------------------------


def test_no_overlap_basic_and_zero_length():
    kind = K.NoOverlap1(origins=("a", "b"), lengths=(3, 2))
    assert check_constraint(kind, {"a": 0, "b": 3})
    assert not check_constraint(kind, {"a": 0, "b": 2})
    ignored = K.NoOverlap1(origins=("a", "b"), lengths=(4, 0))
    assert check_constraint(ignored, {"a": 0, "b": 2})
    strict = K.NoOverlap1(origins=("a", "b"), lengths=(4, 0), zero_ignored=False)
    assert not check_constraint(strict, {"a": 0, "b": 2})
    # a zero-length task at the boundary touches without overlapping
    assert check_constraint(strict, {"a": 0, "b": 4})


def test_no_overlap_k_dimensional():
    kind = K.NoOverlapK(origins=(("ax", "ay"), ("bx", "by")),
                        lengths=((2, 2), (2, 2)))
    # boxes disjoint horizontally
    assert check_constraint(kind, {"ax": 0, "ay": 0, "bx": 2, "by": 1})
    # overlapping in both dimensions
    assert not check_constraint(kind, {"ax": 0, "ay": 0, "bx": 1, "by": 1})
    flat = K.NoOverlapK(origins=(("ax", "ay"), ("bx", "by")),
                        lengths=((2, 0), (2, 2)), zero_ignored=False)
    assert not check_constraint(flat, {"ax": 0, "ay": 1, "bx": 0, "by": 0})
    lax = K.NoOverlapK(origins=(("ax", "ay"), ("bx", "by")),
                       lengths=((2, 0), (2, 2)))
    assert check_constraint(lax, {"ax": 0, "ay": 1, "bx": 0, "by": 0})


def test_cumulative_load_profile():
    kind = K.Cumulative(origins=("a", "b", "c"), lengths=(3, 3, 2),
                        heights=(1, 1, 2), condition=cond("le", 2))
    assert check_constraint(kind, {"a": 0, "b": 0, "c": 3})
    assert not check_constraint(kind, {"a": 0, "b": 0, "c": 2})


def test_cumulative_with_variable_fields():
    kind = K.Cumulative(origins=("a", "b"), lengths=(V("la"), 2),
                        heights=(2, V("hb")), condition=cond("le", V("cap")))
    env = {"a": 0, "b": 1, "la": 2, "hb": 1, "cap": 3}
    assert check_constraint(kind, env)
    assert not check_constraint(kind, env | {"cap": 2})
    # zero-length tasks put no load anywhere
    assert check_constraint(kind, {"a": 0, "b": 0, "la": 0, "hb": 9, "cap": 9})


def test_circuit_semantics():
    kind = K.Circuit(vars=("a", "b", "c", "d"))
    # full tour 0 -> 1 -> 2 -> 3 -> 0
    assert check_constraint(kind, {"a": 1, "b": 2, "c": 3, "d": 0})
    # subtour 0 -> 2 -> 0 with 1 and 3 self-looping
    assert check_constraint(kind, {"a": 2, "b": 1, "c": 0, "d": 3})
    # two disjoint 2-cycles do not make one circuit
    assert not check_constraint(kind, {"a": 1, "b": 0, "c": 3, "d": 2})
    # everybody self-loops: no circuit at all
    assert not check_constraint(kind, {"a": 0, "b": 1, "c": 2, "d": 3})
    # successor outside the list
    assert not check_constraint(kind, {"a": 4, "b": 1, "c": 2, "d": 3})


def test_circuit_with_size():
    sized = K.Circuit(vars=("a", "b", "c", "d"), size=V("n"))
    assert check_constraint(sized, {"a": 2, "b": 1, "c": 0, "d": 3, "n": 2})
    assert not check_constraint(sized, {"a": 2, "b": 1, "c": 0, "d": 3, "n": 3})


def test_instantiation_constraint_with_stars():
    kind = K.InstantiationCtr(vars=("a", "b", "c"), values=(1, STAR, 3))
    assert check_constraint(kind, {"a": 1, "b": 42, "c": 3})
    assert not check_constraint(kind, {"a": 1, "b": 42, "c": 4})


# -- scopes and guards ----------------------------------------------------------


def test_scope_first_use_order():
    kind = K.Sum(terms=(V("b"), V("a")), coeffs=(V("k"), 2),
                 condition=cond("lt", V("a")))
    assert scope_of(kind) == ["b", "a", "k"]
    elem = K.ElementVarList(vars=("p", "q"), index="i", rhs=cond("eq", V("t")))
    assert scope_of(elem) == ["p", "q", "i", "t"]


def test_unassigned_scope_variable_raises():
    kind = K.AllDifferent(operands=(V("a"), V("b")))
    with pytest.raises(UnboundVariable):
        check_constraint(kind, {"a": 1})
    with pytest.raises(StarInScope):
        ensure_scope_assigned(kind, {"a": 1, "b": STAR})


def test_partial_violated_prunes_only_certain_kinds():
    alldiff = K.AllDifferent(operands=(V("a"), V("b"), V("c")))
    assert partial_violated(alldiff, {"a": 1, "b": 1})
    assert not partial_violated(alldiff, {"a": 1, "b": 2})
    # a sum cannot be declared dead from a prefix
    total = K.Sum(terms=(V("a"), V("b")), coeffs=(1, 1), condition=cond("eq", 0))
    assert not partial_violated(total, {"a": 50})


def test_partial_violated_on_extension_prefix():
    kind = K.Extension(scope=("a", "b"), positive=True, tuples=((0, 0), (1, 1)))
    assert partial_violated(kind, {"a": 2})
    assert not partial_violated(kind, {"a": 1})


# -- objectives -----------------------------------------------------------------


def test_objective_kinds_evaluate():
    env = {"a": 3, "b": 5, "c": 3}
    ops = (V("a"), V("b"), V("c"))
    sense = K.Sense.MINIMIZE
    assert eval_objective(K.Objective(sense, K.ObjKind.EXPRESSION,
                                      expression=expr("mul(a,b)")), env) == 15
    assert eval_objective(K.Objective(sense, K.ObjKind.SUM, operands=ops), env) == 11
    assert eval_objective(K.Objective(sense, K.ObjKind.SUM, operands=ops,
                                      coeffs=(1, 2, 3)), env) == 22
    assert eval_objective(K.Objective(sense, K.ObjKind.MINIMUM, operands=ops), env) == 3
    assert eval_objective(K.Objective(sense, K.ObjKind.MAXIMUM, operands=ops), env) == 5
    assert eval_objective(K.Objective(sense, K.ObjKind.NVALUES, operands=ops), env) == 2
    assert eval_objective(K.Objective(sense, K.ObjKind.LEX, operands=ops),
                          env) == (3, 5, 3)


def test_objective_scope_covers_expression_and_operands():
    obj = K.Objective(K.Sense.MAXIMIZE, K.ObjKind.EXPRESSION,
                      expression=expr("add(mul(b,400),mul(c,450))"))
    assert objective_scope(obj) == ["b", "c"]


# -- whole-solution verdicts -------------------------------------------------------


CSP_TEXT = """<instance format="XCSP3" type="CSP">
  <variables>
    <var id="x"> 0..3 </var>
    <var id="y"> 0..3 </var>
    <var id="free"> 0 1 </var>
  </variables>
  <constraints>
    <intension id="c1"> lt(x,y) </intension>
    <allDifferent id="c2"> x y </allDifferent>
  </constraints>
</instance>
"""


def test_check_solution_verdicts():
    inst = parse_string(CSP_TEXT)
    good = check_solution(inst, Instantiation({"x": 0, "y": 2}))
    assert good.kind is VerdictKind.SATISFIED and good.satisfied
    bad = check_solution(inst, Instantiation({"x": 1, "y": 1}))
    assert bad.kind is VerdictKind.VIOLATED
    assert bad.violated == ("c1", "c2")
    one = check_solution(inst, Instantiation({"x": 2, "y": 1}))
    assert one.violated == ("c1",)


def test_check_solution_ignores_useless_variables():
    inst = parse_string(CSP_TEXT)
    # "free" sits in no constraint, so leaving it out is still complete
    verdict = check_solution(inst, Instantiation({"x": 0, "y": 1}))
    assert verdict.satisfied
    assert useful_variables(inst) == ["x", "y"]


def test_check_solution_total_vs_partial():
    inst = parse_string(CSP_TEXT)
    partial = Instantiation({"x": 2})
    total = check_solution(inst, partial, CheckMode.TOTAL_REQUIRED)
    assert total.kind is VerdictKind.INCOMPLETE and total.missing == ("y",)
    lenient = check_solution(inst, partial, CheckMode.PARTIAL_ALLOWED)
    assert lenient.kind is VerdictKind.INCOMPLETE
    # a violation visible in the assigned part beats incompleteness
    seen = check_solution(inst, Instantiation({"x": 2, "y": 1, "free": STAR}),
                          CheckMode.PARTIAL_ALLOWED)
    assert seen.kind is VerdictKind.VIOLATED


def test_check_solution_guards():
    inst = parse_string(CSP_TEXT)
    with pytest.raises(UnknownVariable):
        check_solution(inst, Instantiation({"x": 0, "y": 1, "ghost": 0}))
    with pytest.raises(ValueOutsideDomain):
        check_solution(inst, Instantiation({"x": 9, "y": 1}))


def test_check_solution_cost_verification():
    inst = parse_file(fixture_path("cake_intension.xml"))
    best = Instantiation({"b": 2, "c": 2})
    assert check_solution(inst, best, declared_cost=1700).satisfied
    with pytest.raises(CostMismatch):
        check_solution(inst, best, declared_cost=1650)
    plain = parse_string(CSP_TEXT)
    with pytest.raises(CostMismatch):
        check_solution(plain, Instantiation({"x": 0, "y": 1}), declared_cost=3)
