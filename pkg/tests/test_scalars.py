from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from diffmodal.scalars import (BOOL, NAT, QQ, ZZ, Rig, RigElement, RigError, add, mul, negate,
                               parse, render, rig_from_name)

Z10 = Rig("Zmod", 10)
Z7 = rig_from_name("Zmod:7")

RAW = {
    "Q": st.fractions(max_denominator=50).map(QQ.normalize),
    "Z": st.integers(-10**12, 10**12),
    "Zmod:10": st.integers(0, 9),
    "Zmod:7": st.integers(0, 6),
    "bool": st.booleans(),
    "nat": st.integers(0, 10**12),
}
RIGS = {"Q": QQ, "Z": ZZ, "Zmod:10": Z10, "Zmod:7": Z7, "bool": BOOL, "nat": NAT}


def elements(name):
    rig = RIGS[name]
    return RAW[name].map(lambda v: RigElement(rig, v))


def el(rig, v):
    return rig.element(v)


@pytest.mark.parametrize("name", sorted(RIGS))
def test_rig_axioms(name):
    rig = RIGS[name]
    zero, one = el(rig, rig.zero), el(rig, rig.one)

    @settings(max_examples=1000)
    @given(elements(name), elements(name), elements(name))
    def check(a, b, c):
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a + b == b + a
        assert a * b == b * a
        assert a * (b + c) == a * b + a * c
        assert a + zero == a
        assert a * one == a
        assert a * zero == zero

    check()


@pytest.mark.parametrize("name", sorted(RIGS))
def test_parse_render_roundtrip(name):
    rig = RIGS[name]

    @settings(max_examples=1000)
    @given(elements(name))
    def check(a):
        assert parse(render(a), rig) == a

    check()


@pytest.mark.parametrize("name", ["Q", "Z", "Zmod:10"])
def test_negation_is_additive_inverse(name):
    rig = RIGS[name]

    @given(elements(name))
    def check(a):
        assert a + negate(a) == el(rig, rig.zero)

    check()


def test_examples():
    assert add(parse("1/2", QQ), parse("1/3", QQ)) == parse("5/6", QQ)
    assert el(BOOL, True) + el(BOOL, True) == el(BOOL, True)
    assert mul(el(ZZ, 2), el(ZZ, 3)) == el(ZZ, 6)
    assert mul(el(Z10, 3), el(Z10, 4)) == el(Z10, 2)
    assert negate(el(ZZ, 2)) == el(ZZ, -2)
    assert negate(el(ZZ, 0)) == el(ZZ, 0)
    assert parse("3/6", QQ).value == Fraction(1, 2)
    assert parse("-4", ZZ).value == -4
    assert parse("6/3", QQ).value == 2


def test_canonical_forms():
    half = parse("-2/4", QQ)
    assert half.value == Fraction(-1, 2) and half.value.denominator > 0
    assert parse("13", Z10).value == 3
    assert parse("-3", Z10).value == 7


def test_errors():
    with pytest.raises(RigError, match="rig mismatch"):
        add(el(ZZ, 1), el(QQ, 1))
    with pytest.raises(RigError, match="rig mismatch"):
        mul(el(Z10, 1), el(Z7, 1))
    with pytest.raises(RigError, match="no negatives"):
        negate(el(BOOL, True))
    with pytest.raises(RigError, match="no negatives"):
        negate(el(NAT, 3))
    with pytest.raises(RigError):
        parse("-1", NAT)
    with pytest.raises(RigError):
        parse("1/0", QQ)
    with pytest.raises(RigError):
        parse("1/2", ZZ)
    with pytest.raises(RigError):
        parse("x", QQ)
    with pytest.raises(RigError):
        Rig("Zmod", 1)
    with pytest.raises(RigError):
        rig_from_name("R")


def test_descriptors():
    assert [r.has_negatives for r in (QQ, ZZ, Z10, BOOL, NAT)] == [True, True, True, False, False]
    assert [rig_from_name(r.name) for r in (QQ, ZZ, Z10, BOOL, NAT)] == [QQ, ZZ, Z10, BOOL, NAT]
