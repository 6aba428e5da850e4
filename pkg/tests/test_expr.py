import math

import numpy as np
import pytest

from lprim.errors import LprimError
from lprim.expr import FunctionExpr, Wrapped, maximum, minimum
from lprim.parser import parse_expr


def vals(e, xs):
    return e.values(np.asarray(xs, dtype=float))


class TestEvaluation:
    def test_polynomial(self):
        e = parse_expr("x^2 - 3*x + 1")
        assert vals(e, [0.0, 1.0, 2.0]) == pytest.approx([1.0, -1.0, -1.0])

    def test_unary_chain(self):
        e = parse_expr("exp(-x^2)*cos(x)")
        x = 0.7
        assert vals(e, [x])[0] == pytest.approx(math.exp(-x * x) * math.cos(x))

    def test_indicator_midpoint_convention(self):
        e = parse_expr("indicator(0,1)")
        assert vals(e, [-0.5, 0.0, 0.5, 1.0, 1.5]) == pytest.approx(
            [0.0, 0.5, 1.0, 0.5, 0.0]
        )

    def test_piecewise(self):
        e = parse_expr("piecewise(x < 0 -> -x, x < 1 -> x^2, else -> 1)")
        assert vals(e, [-2.0, 0.5, 3.0]) == pytest.approx([2.0, 0.25, 1.0])

    def test_abs_and_sign(self):
        e = abs(parse_expr("x"))
        assert vals(e, [-3.0, 4.0]) == pytest.approx([3.0, 4.0])

    def test_integer_power_matches_float_power(self):
        xs = np.linspace(0.1, 3.0, 17)
        e_int = parse_expr("x^3")
        e_neg = parse_expr("x^(-2)")
        assert vals(e_int, xs) == pytest.approx(xs ** 3)
        assert vals(e_neg, xs) == pytest.approx(xs ** -2.0)


class TestMetadata:
    def test_indicator_support_and_kinks(self):
        e = parse_expr("indicator(0,1)")
        assert e.support == (0.0, 1.0)
        assert e.decay == ("compact",)
        assert set(e.kinks) >= {0.0, 1.0}

    def test_gaussian_decay(self):
        assert parse_expr("exp(-x^2)").decay[0] == "gaussian"

    def test_exponential_decay(self):
        assert parse_expr("exp(-abs(x))").decay[0] == "exponential"

    def test_power_decay(self):
        kind, beta = parse_expr("(abs(x)+1)^(-2.5)").decay
        assert kind == "power" and beta == pytest.approx(2.5)

    def test_power_decay_with_growth_cofactor(self):
        kind, beta = parse_expr("x*(abs(x)+1)^(-2.5)").decay
        assert kind == "power" and beta == pytest.approx(1.5)

    def test_product_of_decays_takes_stronger(self):
        e = parse_expr("exp(-x^2)") * parse_expr("(x^2+1)^(-1)")
        assert e.decay[0] == "gaussian"

    def test_declared_singularity(self):
        e = parse_expr("sing(log(abs(x)), 0)")
        assert 0.0 in e.singularities

    def test_wrapped_growth_hint(self):
        w = FunctionExpr.from_node(
            Wrapped(lambda xs: np.ones_like(xs), name="one", growth_hint=0.0)
        )
        e = parse_expr("exp(-x^2)") * w
        assert e.decay[0] == "gaussian"


class TestTransforms:
    def test_translate(self):
        e = parse_expr("indicator(0,1)").translate(2.0)
        assert vals(e, [0.5, 2.5])[0] == 0.0
        assert vals(e, [2.5])[0] == 1.0
        assert e.support == (2.0, 3.0)

    def test_dilate_preserves_mass_shape(self):
        e = parse_expr("exp(-x^2)").dilate(0.5)
        x = 0.3
        assert vals(e, [x])[0] == pytest.approx(2.0 * math.exp(-(2 * x) ** 2))

    def test_diff_gaussian(self):
        e = parse_expr("exp(-x^2)").diff()
        x = 0.4
        assert vals(e, [x])[0] == pytest.approx(-2 * x * math.exp(-x * x))

    def test_lattice_max_min(self):
        f = parse_expr("x")
        g = parse_expr("0*x")
        hi = maximum(f, g)
        lo = minimum(f, g)
        assert vals(hi, [-1.0, 1.0]) == pytest.approx([0.0, 1.0])
        assert vals(lo, [-1.0, 1.0]) == pytest.approx([-1.0, 0.0])


class TestJets:
    def test_eval_jet_orders(self):
        e = parse_expr("exp(-x^2)")
        x = 0.6
        j = e.eval_jet(x, 2)
        assert j[0] == pytest.approx(math.exp(-x * x))
        assert j[1] == pytest.approx(-2 * x * math.exp(-x * x))
        assert j[2] == pytest.approx((4 * x * x - 2) * math.exp(-x * x))

    def test_jet_of_rational(self):
        e = parse_expr("(x^2+1)^(-1)")
        j = e.eval_jet(1.0, 1)
        assert j[0] == pytest.approx(0.5)
        assert j[1] == pytest.approx(-0.5)

    def test_wrapped_not_differentiable(self):
        w = FunctionExpr.from_node(Wrapped(lambda xs: xs, name="id"))
        with pytest.raises(LprimError):
            w.diff()
