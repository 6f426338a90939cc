"""Instance-level parsing: sections, variables, aliases, strictness."""

import pytest

from xcsp3core.errors import (
    AliasOnForbiddenElement,
    BadFramework,
    BadSize,
    DuplicateId,
    ForwardAlias,
    MisplacedOthers,
    MissingVariables,
    ObjectiveCountError,
    OverlappingFor,
    ParseError,
    TransitiveAlias,
    UnknownAliasTarget,
    UnknownElement,
    WhitespaceError,
)
from xcsp3core.kinds import Extension, Intension, Sum
from xcsp3core.model import Framework
from xcsp3core.parser import ParserConfig, parse_string


def wrap(variables, constraints, type_="CSP", objectives="", annotations=""):
    return (f'<instance format="XCSP3" type="{type_}">\n'
            f"<variables>{variables}</variables>\n"
            f"<constraints>{constraints}</constraints>\n"
            f"{objectives}{annotations}</instance>")


TRIVIAL = "<intension> eq(0,0) </intension>"


# -- instance envelope ---------------------------------------------------------------

def test_framework_attribute_checked():
    with pytest.raises(BadFramework):
        parse_string('<instance format="XCSP2" type="CSP">'
                     "<variables><var id=\"x\"> 0 </var></variables>"
                     "<constraints/></instance>")
    with pytest.raises(BadFramework):
        parse_string('<instance format="XCSP3" type="WCSP">'
                     "<variables><var id=\"x\"> 0 </var></variables>"
                     "<constraints/></instance>")


def test_csp_must_not_carry_objective():
    text = wrap('<var id="x"> 0 1 </var>', TRIVIAL,
                objectives="<objectives><minimize> x </minimize></objectives>")
    with pytest.raises(BadFramework):
        parse_string(text)


def test_cop_needs_exactly_one_objective():
    base = '<var id="x"> 0 1 </var>'
    with pytest.raises(ObjectiveCountError):
        parse_string(wrap(base, TRIVIAL, type_="COP"))
    both = ("<objectives><minimize> x </minimize>"
            "<maximize> x </maximize></objectives>")
    with pytest.raises(ObjectiveCountError):
        parse_string(wrap(base, TRIVIAL, type_="COP", objectives=both))


def test_section_order_enforced():
    text = ('<instance format="XCSP3" type="CSP">'
            f"<constraints>{TRIVIAL}</constraints>"
            '<variables><var id="x"> 0 1 </var></variables></instance>')
    with pytest.raises(ParseError):
        parse_string(text)


def test_malformed_xml_reports_rule():
    with pytest.raises(ParseError) as err:
        parse_string("<instance format='XCSP3' type='CSP'><variables>")
    assert err.value.rule == "xml"


# -- variables -----------------------------------------------------------------------

def test_var_list_and_interval_domains():
    inst = parse_string(wrap('<var id="x"> 1 3..5 9 </var><var id="y"> 0..2 </var>',
                             "<intension> ne(x,y) </intension>"))
    assert [v.id for v in inst.variables()] == ["x", "y"]
    assert list(inst.variable("x").domain.values()) == [1, 3, 4, 5, 9]


def test_empty_var_rejected():
    # undefined variables only arise as array cells missed by for= groups
    with pytest.raises(ParseError):
        parse_string(wrap('<var id="x"> 0 1 </var><var id="u"/>', TRIVIAL))


def test_undefined_cell_allowed_when_unused():
    text = wrap('<array id="z" size="[3]">'
                '<domain for="z[0..1]"> 0 1 </domain></array>',
                "<intension> eq(z[0],0) </intension>")
    inst = parse_string(text)
    assert inst.variable("z[2]").domain is None


def test_undefined_useful_variable_rejected():
    text = wrap('<array id="z" size="[3]">'
                '<domain for="z[0..1]"> 0 1 </domain></array>',
                "<intension> eq(z[2],0) </intension>")
    with pytest.raises(MissingVariables) as err:
        parse_string(text)
    assert err.value.rule == "undefined-useful"


def test_arrays_flatten_row_major():
    inst = parse_string(wrap('<array id="x" size="[2][3]"> 0..4 </array>', TRIVIAL))
    arr = inst.arrays_by_id["x"]
    assert arr.size == (2, 3)
    assert arr.cell((1, 2)).id == "x[1][2]"
    assert [v.id for v in inst.variables()][:3] == ["x[0][0]", "x[0][1]", "x[0][2]"]


def test_array_size_must_be_positive():
    with pytest.raises(BadSize):
        parse_string(wrap('<array id="x" size="[0]"> 0 1 </array>', TRIVIAL))


def test_array_domain_groups():
    text = wrap('<array id="z" size="[10]">'
                '<domain for="z[0..4]"> 1..10 </domain>'
                '<domain for="z[6..9]"> 1..20 </domain>'
                "</array>", TRIVIAL)
    inst = parse_string(text)
    arr = inst.arrays_by_id["z"]
    assert arr.cell((0,)).domain.max_value == 10
    assert arr.cell((9,)).domain.max_value == 20
    assert arr.cell((5,)).domain is None


def test_array_domain_others():
    text = wrap('<array id="z" size="[4]">'
                '<domain for="z[0]"> 0 1 </domain>'
                '<domain for="others"> 5..8 </domain>'
                "</array>", TRIVIAL)
    inst = parse_string(text)
    arr = inst.arrays_by_id["z"]
    assert list(arr.cell((0,)).domain.values()) == [0, 1]
    assert arr.cell((3,)).domain.min_value == 5


def test_others_must_come_last():
    text = wrap('<array id="z" size="[4]">'
                '<domain for="others"> 5..8 </domain>'
                '<domain for="z[0]"> 0 1 </domain>'
                "</array>", TRIVIAL)
    with pytest.raises(MisplacedOthers):
        parse_string(text)


def test_overlapping_for_groups_rejected():
    text = wrap('<array id="z" size="[4]">'
                '<domain for="z[0..2]"> 0 1 </domain>'
                '<domain for="z[2..3]"> 3 4 </domain>'
                "</array>", TRIVIAL)
    with pytest.raises(OverlappingFor):
        parse_string(text)


def test_duplicate_variable_id():
    with pytest.raises(DuplicateId):
        parse_string(wrap('<var id="x"> 0 </var><var id="x"> 1 </var>', TRIVIAL))


# -- aliases -------------------------------------------------------------------------

def test_alias_copies_domain():
    inst = parse_string(wrap('<var id="x0"> 2 4 6 </var><var id="x2" as="x0"/>',
                             TRIVIAL))
    assert inst.variable("x2").domain == inst.variable("x0").domain


def test_alias_on_array_reuses_shape():
    text = wrap('<array id="a" size="[2]"> 0..3 </array>'
                '<array id="b" size="[2]" as="a"/>', TRIVIAL)
    inst = parse_string(text)
    assert inst.arrays_by_id["b"].cell((1,)).domain.max_value == 3


def test_alias_errors():
    with pytest.raises(UnknownAliasTarget):
        parse_string(wrap('<var id="x" as="ghost"/>', TRIVIAL))
    with pytest.raises(ForwardAlias):
        parse_string(wrap('<var id="x" as="y"/><var id="y"> 0 1 </var>', TRIVIAL))
    with pytest.raises(TransitiveAlias):
        parse_string(wrap('<var id="x"> 0 1 </var><var id="y" as="x"/>'
                          '<var id="z" as="y"/>', TRIVIAL))
    with pytest.raises(ParseError):
        # aliased elements must have no content of their own
        parse_string(wrap('<var id="x"> 0 1 </var><var id="y" as="x"> 2 </var>',
                          TRIVIAL))


def test_alias_forbidden_on_constraints():
    text = wrap('<var id="x"> 0 1 </var>',
                '<intension id="c"> eq(x,0) </intension>'
                '<intension as="c"/>')
    with pytest.raises(AliasOnForbiddenElement):
        parse_string(text)


# -- constraints section -------------------------------------------------------------

def test_unknown_constraint_strict_vs_lenient():
    text = wrap('<var id="x"> 0 1 </var>',
                "<regular8> x </regular8>" + TRIVIAL)
    with pytest.raises(UnknownElement):
        parse_string(text)
    inst = parse_string(text, ParserConfig(strict=False))
    assert len(inst.constraints) == 1
    assert isinstance(inst.constraints[0].kind, Intension)


def test_drop_class_removes_tagged_constraints():
    text = wrap('<var id="x"> 0 1 </var>',
                '<intension class="redundant"> eq(x,0) </intension>' + TRIVIAL)
    inst = parse_string(text)
    assert len(inst.constraints) == 2
    inst = parse_string(text, ParserConfig(drop_classes=frozenset({"redundant"})))
    assert len(inst.constraints) == 1


def test_block_classes_accumulate():
    text = wrap('<var id="x"> 0 1 </var>',
                '<block class="clues"><block class="week1">'
                '<intension> eq(x,0) </intension>'
                "</block></block>")
    inst = parse_string(text)
    assert set(inst.constraints[0].classes) == {"clues", "week1"}


def test_constraint_references_validated():
    text = wrap('<var id="x"> 0 1 </var>', "<intension> eq(ghost,0) </intension>")
    with pytest.raises(MissingVariables):
        parse_string(text)


def test_duplicate_constraint_id():
    text = wrap('<var id="x"> 0 1 </var>',
                '<intension id="c"> eq(x,0) </intension>'
                '<intension id="c"> ne(x,1) </intension>')
    with pytest.raises(DuplicateId):
        parse_string(text)


def test_strict_id_prefix_rule_for_arrays():
    # an array id that prefixes another id breaks compact-token resolution
    text = wrap('<array id="x" size="[2]"> 0 1 </array><var id="x2"> 0 </var>',
                TRIVIAL)
    with pytest.raises(ParseError):
        parse_string(text)
    assert parse_string(text, ParserConfig(strict=False)) is not None


def test_attribute_whitespace_rejected_everywhere():
    with pytest.raises(WhitespaceError):
        parse_string(wrap('<var id=" x"> 0 1 </var>', TRIVIAL))
    with pytest.raises(WhitespaceError):
        parse_string(wrap('<var id="x "> 0 1 </var>', TRIVIAL))


def test_element_text_padding_tolerated():
    inst = parse_string(wrap('<var id="x">   0 1   </var>',
                             "<intension>\n   eq(x,0)\n  </intension>"))
    assert isinstance(inst.constraints[0].kind, Intension)


# -- extension specifics -------------------------------------------------------------

def test_extension_tuples_and_stars():
    text = wrap('<var id="x"> 0 1 </var><var id="y"> 0 1 </var>',
                "<extension><list> x y </list>"
                "<supports> (0,*)(1,1) </supports></extension>")
    inst = parse_string(text)
    kind = inst.constraints[0].kind
    assert isinstance(kind, Extension) and kind.positive


def test_extension_table_order_checked_when_strict():
    text = wrap('<var id="x"> 0..3 </var><var id="y"> 0..3 </var>',
                "<extension><list> x y </list>"
                "<supports> (1,1)(0,0) </supports></extension>")
    with pytest.raises(ParseError):
        parse_string(text)
    assert parse_string(text, ParserConfig(strict=False)) is not None


def test_extension_arity_mismatch():
    text = wrap('<var id="x"> 0 1 </var><var id="y"> 0 1 </var>',
                "<extension><list> x y </list>"
                "<supports> (0,0,0) </supports></extension>")
    with pytest.raises(ParseError):
        parse_string(text)


def test_unary_extension_uses_domain_form():
    text = wrap('<var id="x"> 0..9 </var>',
                "<extension><list> x </list>"
                "<supports> 1 3..5 </supports></extension>")
    kind = parse_string(text).constraints[0].kind
    assert isinstance(kind, Extension)
    assert kind.unary is not None and kind.unary.contains(4)


# -- objectives and annotations ------------------------------------------------------

def test_sum_objective_with_bare_list():
    text = wrap('<var id="x"> 0..5 </var><var id="y"> 0..5 </var>', TRIVIAL,
                type_="COP",
                objectives="<objectives><minimize type=\"sum\"> x y "
                           "</minimize></objectives>")
    obj = parse_string(text).objective
    assert obj is not None and obj.coeffs is None and len(obj.operands) == 2


def test_objective_scope_validated():
    text = wrap('<var id="x"> 0..5 </var>', TRIVIAL, type_="COP",
                objectives="<objectives><minimize> ghost </minimize></objectives>")
    with pytest.raises(MissingVariables):
        parse_string(text)


def test_decision_annotation():
    text = wrap('<array id="x" size="[3]"> 0 1 </array>', TRIVIAL,
                annotations="<annotations><decision> x[] </decision></annotations>")
    inst = parse_string(text)
    assert inst.decision == ("x[0]", "x[1]", "x[2]")


def test_unknown_annotation_strict_vs_lenient():
    text = wrap('<var id="x"> 0 1 </var>', TRIVIAL,
                annotations="<annotations><viewer> x </viewer></annotations>")
    with pytest.raises(UnknownElement):
        parse_string(text)
    assert parse_string(text, ParserConfig(strict=False)).decision is None
