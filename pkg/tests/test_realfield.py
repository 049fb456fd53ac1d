import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from apexp.realfield import (BasisMismatchError, RealVector, SymbolBasis,
                             UnrepresentableProductError, format_rational,
                             parse_rational)


@pytest.fixture(scope="module")
def basis():
    return SymbolBasis([("1", 1.0), ("sqrt2", math.sqrt(2.0)),
                        ("theta", math.sqrt(3.0) / 2.0)],
                       check_independence=False)


rationals = st.fractions(min_value=-1000, max_value=1000, max_denominator=1000)


def vectors(basis):
    return st.builds(
        lambda a, b, c: basis.vector({"1": a, "sqrt2": b, "theta": c}),
        rationals, rationals, rationals)


class TestGroupAxioms:
    @given(st.data())
    def test_associativity_commutativity(self, data):
        b = SymbolBasis([("1", 1.0), ("x", 2.718)], check_independence=False)
        vs = st.builds(lambda a, c: b.vector({"1": a, "x": c}),
                       rationals, rationals)
        x, y, z = data.draw(vs), data.draw(vs), data.draw(vs)
        assert (x + y) + z == x + (y + z)
        assert x + y == y + x

    @given(st.data())
    def test_identity_and_inverse(self, data):
        b = SymbolBasis([("1", 1.0), ("x", 2.718)], check_independence=False)
        vs = st.builds(lambda a, c: b.vector({"1": a, "x": c}),
                       rationals, rationals)
        x = data.draw(vs)
        assert x + b.zero() == x
        assert (x + (-x)).is_zero()

    @given(st.data())
    def test_eval_is_additive(self, data):
        b = SymbolBasis([("1", 1.0), ("x", 2.718)], check_independence=False)
        vs = st.builds(lambda a, c: b.vector({"1": a, "x": c}),
                       rationals, rationals)
        x, y = data.draw(vs), data.draw(vs)
        lhs = (x + y).eval()
        rhs = x.eval() + y.eval()
        assert abs(lhs - rhs) <= 1e-12 * (abs(x.eval()) + abs(y.eval()) + 1)


def test_sparse_canonical_form(basis):
    v = basis.vector({"theta": 2, "1": 1}) + basis.vector({"theta": -1})
    assert v == basis.vector({"theta": 1, "1": 1})
    assert set(v.coords) == {basis.index("1"), basis.index("theta")}


def test_inverse_cancels(basis):
    v = basis.symbol("sqrt2")
    assert (v - v).is_zero()


def test_rational_arithmetic(basis):
    v = basis.vector({"1": "1/2"}) + basis.vector({"1": "1/3"})
    assert v == basis.vector({"1": "5/6"})


def test_scale(basis):
    assert basis.symbol("theta").scale(3) == basis.vector({"theta": 3})
    assert basis.vector({"theta": 2, "1": 4}).scale("1/2") == \
        basis.vector({"theta": 1, "1": 2})
    assert basis.symbol("theta").scale(0).is_zero()


def test_eval_witnesses(basis):
    assert basis.symbol("1").eval() == 1.0
    assert basis.symbol("theta").eval() == math.sqrt(3.0) / 2.0
    v = basis.vector({"theta": 2, "1": 1})
    assert abs(v.eval() - (math.sqrt(3.0) + 1.0)) < 1e-14


def test_basis_mismatch(basis):
    other = SymbolBasis([("1", 1.0)])
    with pytest.raises(BasisMismatchError):
        basis.symbol("1") + other.symbol("1")


class TestProducts:
    def make(self):
        return SymbolBasis(
            [("1", 1.0), ("sqrt2", math.sqrt(2.0)), ("sqrt3", math.sqrt(3.0))],
            products={("sqrt2", "sqrt2"): {"1": 2}},
            check_independence=False)

    def test_unit_acts_trivially(self):
        b = self.make()
        assert b.symbol("1").mul(b.symbol("sqrt2")) == b.symbol("sqrt2")

    def test_declared_product(self):
        b = self.make()
        v = b.symbol("sqrt2").mul(b.symbol("sqrt2"))
        assert v == b.vector({"1": 2})

    def test_missing_product(self):
        b = self.make()
        with pytest.raises(UnrepresentableProductError):
            b.symbol("sqrt2").mul(b.symbol("sqrt3"))


def test_independence_warning():
    with pytest.warns(UserWarning):
        SymbolBasis([("1", 1.0), ("half", 0.5)])


def test_unit_symbol_witness_checked():
    with pytest.raises(ValueError):
        SymbolBasis([("1", 2.0)])
    with pytest.raises(ValueError):
        SymbolBasis([("x", 0.0)])


def test_json_roundtrip(basis):
    b2 = SymbolBasis.from_json(basis.to_json())
    assert b2 == basis
    v = basis.vector({"theta": "7/3", "1": -2})
    v2 = RealVector.from_json(b2, v.to_json())
    assert v2.coords == v.coords


def test_rational_strings():
    assert parse_rational("3/4") == Fraction(3, 4)
    assert parse_rational("-2") == Fraction(-2)
    assert format_rational(Fraction(3, 4)) == "3/4"
    assert format_rational(Fraction(5)) == "5"
