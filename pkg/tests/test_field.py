import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cubicsym.errors import NotDivisible, NotSquarefree, ParseError, RationalRootFound
from cubicsym.field import (
    RATIONALS,
    MultiPoly,
    NumberField,
    ParamField,
    nf_create,
    poly_exact_div,
    poly_proportional,
)
from cubicsym.surface import FAMILY_FORM_TEXT

QSQ3 = nf_create("w", [1, 0, 3])
QI = nf_create("w", [1, 0, 1])
Q4 = nf_create("w", [1, 0, -4, 0, 16])

small = st.integers(-20, 20)
coeffs = st.lists(st.fractions(min_value=-9, max_value=9, max_denominator=7), min_size=4, max_size=4)


def elem(field, cs):
    return field.from_coeffs([f"{c.numerator}/{c.denominator}" for c in cs[: field.degree]])


class TestNumberField:
    def test_degree_one_is_rationals(self):
        F = nf_create("t", [1, 0])
        assert F.degree == 1
        assert F.parse("2/3") + F.parse("1/6") == F.parse("5/6")

    def test_sqrt_minus_three(self):
        w = QSQ3.gen
        assert w * w == QSQ3(-3)
        assert (1 + w) * (1 - w) == QSQ3(4)

    def test_quartic_generator_relation(self):
        w = Q4.gen
        assert (w * w - 2) ** 2 == Q4(-12)
        assert w**4 == 4 * w**2 - 16

    def test_inverse_in_gaussian_field(self):
        i = QI.gen
        inv = 1 / (1 + i)
        assert inv == (1 - i) / 2
        assert inv * (1 + i) == QI.one

    def test_rejects_reducible(self):
        with pytest.raises(RationalRootFound):
            nf_create("w", [1, 0, -4])
        with pytest.raises(NotSquarefree):
            nf_create("w", [1, 2, 1])

    def test_zero_division(self):
        with pytest.raises(ZeroDivisionError):
            QSQ3.one / QSQ3.zero

    def test_format_parse_roundtrip(self):
        a = Q4.parse("3/2*w^3 - w + 7")
        assert Q4.parse(Q4.format(a)) == a

    def test_bad_parse(self):
        with pytest.raises(ParseError):
            QSQ3.parse("w +* 2")

    def test_normalize_first_nonzero(self):
        v = QSQ3.normalize([0, 2 * QSQ3.gen, 4])
        assert v[0] == QSQ3.zero and v[1] == QSQ3.one

    @given(coeffs, coeffs, coeffs)
    @settings(max_examples=60, deadline=None)
    def test_field_axioms(self, a, b, c):
        for F in (QSQ3, Q4):
            x, y, z = elem(F, a), elem(F, b), elem(F, c)
            assert (x + y) + z == x + (y + z)
            assert x * (y + z) == x * y + x * z
            if x:
                assert x * x.inverse() == F.one


class TestParamField:
    def test_arithmetic_and_gcd(self):
        P = ParamField(("c", "e"))
        c, e = P.convert("c"), P.convert("e")
        r = (c * c - e * e) / (c - e)
        assert r == c + e
        assert r.is_polynomial()

    def test_evaluate(self):
        P = ParamField(("c", "e"))
        r = P.convert("c") / P.convert("e")
        assert P.evaluate(r, {"c": 3, "e": 4}, RATIONALS) == RATIONALS.parse("3/4")

    def test_factor(self):
        P = ParamField(("c", "e"))
        fs = P.factor(P.convert("c^3 - c*e^2"))
        texts = sorted(str(f) for f, _ in fs)
        assert len(texts) == 3


def rand_poly(rng, nvars=5, deg=3):
    names = "abcde"[:nvars]
    terms = []
    for _ in range(rng.randint(1, 4)):
        mono = "*".join(f"{rng.choice(names)}" for _ in range(rng.randint(0, deg))) or "1"
        terms.append(f"{rng.randint(1, 9)}*{mono}")
    return MultiPoly.parse(" + ".join(terms), RATIONALS, tuple(names))


class TestMultiPoly:
    def test_exact_div_simple(self):
        p = MultiPoly.parse("x^2 - y^2")
        assert poly_exact_div(p, MultiPoly.parse("x - y")) == MultiPoly.parse("x + y")

    def test_exact_div_random_pairs(self):
        rng = random.Random(11)
        for _ in range(200):
            p, q = rand_poly(rng), rand_poly(rng)
            assert poly_exact_div(p * q, q) == p

    def test_not_divisible_on_family_form(self):
        F = MultiPoly.parse(FAMILY_FORM_TEXT).subs({"b": MultiPoly.parse("-(c^2 + e*f)")})
        rng = random.Random(3)
        for _ in range(5):
            a, b, c = (rng.randint(1, 9) for _ in range(3))
            other = MultiPoly.parse(f"{a}*x + {b}*y - {c}*z + t")
            assert poly_exact_div(F * other, other) == F
            perturbed = F * other + MultiPoly.parse(f"{rng.randint(1, 9)}*x^4")
            with pytest.raises(NotDivisible):
                poly_exact_div(perturbed, other)
        with pytest.raises(NotDivisible):
            poly_exact_div(F, MultiPoly.parse("x + y + z + t"))

    def test_product_of_linear_ternary_forms(self):
        rng = random.Random(5)
        for _ in range(20):
            lam = [MultiPoly.parse(f"{rng.randint(-5, 5)}*x + {rng.randint(-5, 5)}*y + {rng.randint(1, 5)}*z") for _ in range(3)]
            r, s, t = lam
            assert poly_exact_div(r * s * t, r * s) == t

    def test_proportional(self):
        p = MultiPoly.parse("x^2*y - 3*z^3 + y*z*t")
        assert poly_proportional(p, p.scale(5))
        assert not poly_proportional(p, p + MultiPoly.parse("x^3"))

    def test_pentahedron_cubes(self):
        forms = ["y - z", "2*(y - x)", "-(x + t)", "x - 2*y + t", "2*x - y + z"]
        total = sum((MultiPoly.parse(f) ** 3 for f in forms), MultiPoly.parse("0"))
        se10 = MultiPoly.parse("x^2*y - x*y^2 + 2*x^2*z - 2*x*y*z + x*z^2 - 2*x*y*t + 2*y^2*t - y*t^2")
        assert poly_proportional(total, se10)

    def test_over_number_field(self):
        p = MultiPoly.parse("(1 + w)*x - y", QSQ3)
        q = MultiPoly.parse("(1 - w)*x + y", QSQ3)
        assert poly_exact_div(p * q, q) == p
        assert (p * q).coefficient({"x": 2}) == QSQ3(4)

    def test_queries(self):
        p = MultiPoly.parse("x^2*y + 3*y*t^2 - 5")
        assert p.total_degree() == 3
        assert p.degree_in("t") == 2
        assert not p.is_homogeneous()
        assert set(p.used_vars()) == {"x", "y", "t"}
        assert p.eval({"x": 1, "y": 2, "t": 1}) == RATIONALS(3)
        assert p.derivative("x") == MultiPoly.parse("2*x*y")

    @given(st.lists(st.tuples(small, st.integers(0, 3), st.integers(0, 3), st.integers(0, 3)), min_size=1, max_size=6))
    @settings(max_examples=80, deadline=None)
    def test_parse_print_parse(self, terms):
        text = " + ".join(f"({a})*x^{i}*y^{j}*z^{k}" for a, i, j, k in terms)
        p = MultiPoly.parse(text)
        assert MultiPoly.parse(str(p)) == p
        assert str(MultiPoly.parse(str(p))) == str(p)

    def test_number_field_print_parse(self):
        p = MultiPoly.parse("(w^3/8 - w)*x*y + 2*w*z^2 - 1/3*t^2", Q4)
        assert MultiPoly.parse(str(p), Q4) == p


def test_number_field_pickles():
    import pickle

    assert pickle.loads(pickle.dumps(Q4)) == Q4
    a = Q4.parse("w^2 + 1")
    assert pickle.loads(pickle.dumps(a)) == a


def test_numberfield_requires_monic():
    with pytest.raises(ValueError):
        NumberField([2, 0, 3])
