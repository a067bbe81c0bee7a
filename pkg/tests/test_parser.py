import numpy as np
import pytest

import hardymeans as hm
from hardymeans.parser import ParseError, format_mean_expr, parse_mean_expr


class TestParsing:
    def test_power_literal(self):
        assert parse_mean_expr("power(0)") == hm.Power(0.0)
        assert parse_mean_expr("power(-1.5e-3)") == hm.Power(-1.5e-3)
        assert parse_mean_expr("power(+2.5)") == hm.Power(2.5)

    def test_gauss_literal(self):
        expr = parse_mean_expr("gauss(power(-1), power(0))")
        assert expr == hm.Gauss((hm.Power(-1.0), hm.Power(0.0)))

    def test_aliases(self):
        assert parse_mean_expr("arith") == hm.Power(1.0)
        assert parse_mean_expr("geom") == hm.Power(0.0)
        assert parse_mean_expr("harm") == hm.Power(-1.0)

    def test_generators_and_devspecs(self):
        assert parse_mean_expr("quasi(log)") == hm.QuasiArithmetic(hm.LOG)
        assert parse_mean_expr("quasi(pow:0.5)") == hm.QuasiArithmetic(
            hm.power_generator(0.5)
        )
        assert parse_mean_expr("bajrak(pow:2,pow:1)") == hm.Bajraktarevic(
            hm.power_generator(2), hm.power_generator(1)
        )
        assert parse_mean_expr("dev(arith)") == hm.Deviation(hm.ARITHMETIC_DEVIATION)
        assert parse_mean_expr("dev(pair:log,pow:0)") == hm.Deviation(
            hm.PairDeviation(hm.LOG, hm.power_generator(0.0))
        )

    def test_whitespace_insensitive(self):
        a = parse_mean_expr("gauss( power( -1 ) ,  power( 0 ) )")
        b = parse_mean_expr("gauss(power(-1),power(0))")
        assert a == b

    def test_nested_gauss(self):
        text = "gauss(gauss(power(0),power(1)),harm,gini(0.5,-1))"
        expr = parse_mean_expr(text)
        assert isinstance(expr, hm.Gauss) and len(expr.children) == 3


class TestParseErrors:
    def test_gini_arity_error_position(self):
        with pytest.raises(ParseError) as info:
            parse_mean_expr("gini(0.5)")
        assert info.value.position == 9
        assert "','" in info.value.expected

    def test_gauss_needs_two_children(self):
        with pytest.raises(ParseError) as info:
            parse_mean_expr("gauss(power(0))")
        assert "at least two" in str(info.value)

    def test_unknown_generator(self):
        with pytest.raises(ParseError) as info:
            parse_mean_expr("quasi(tanh)")
        assert "unknown generator" in str(info.value)
        assert info.value.position == 7

    def test_unknown_mean(self):
        with pytest.raises(ParseError):
            parse_mean_expr("median(1)")

    def test_trailing_input(self):
        with pytest.raises(ParseError) as info:
            parse_mean_expr("power(0) power(1)")
        assert "trailing" in str(info.value)

    def test_unexpected_character(self):
        with pytest.raises(ParseError) as info:
            parse_mean_expr("power(0);")
        assert info.value.position == 9

    def test_empty_input(self):
        with pytest.raises(ParseError):
            parse_mean_expr("   ")

    def test_missing_closing_paren(self):
        with pytest.raises(ParseError) as info:
            parse_mean_expr("power(0")
        assert "')'" in info.value.expected


PRINTABLE = [
    hm.Power(0.0),
    hm.Power(1.0),
    hm.Power(-2.5),
    hm.Power(0.125),
    hm.Gini(0.5, -1.0),
    hm.Gini(2.0, 2.0),
    hm.QuasiArithmetic(hm.LOG),
    hm.QuasiArithmetic(hm.EXP),
    hm.QuasiArithmetic(hm.IDENTITY),
    hm.QuasiArithmetic(hm.power_generator(-0.5)),
    hm.Bajraktarevic(hm.power_generator(2), hm.power_generator(1)),
    hm.Bajraktarevic(hm.LOG, hm.power_generator(0.0)),
    hm.Deviation(hm.ARITHMETIC_DEVIATION),
    hm.Deviation(hm.PairDeviation(hm.power_generator(2), hm.power_generator(1))),
    hm.Gauss((hm.Power(-1.0), hm.Power(0.0))),
    hm.Gauss((hm.Gauss((hm.Power(0.0), hm.Power(1.0))), hm.Power(-1.0), hm.Power(0.5))),
]


class TestRoundTrip:
    @pytest.mark.parametrize("expr", PRINTABLE, ids=format_mean_expr)
    def test_parse_after_print_is_identity(self, expr):
        assert parse_mean_expr(format_mean_expr(expr)) == expr

    def test_randomized_trees_round_trip(self):
        rng = np.random.default_rng(99)

        def random_generator():
            kind = rng.integers(4)
            if kind == 0:
                return hm.IDENTITY
            if kind == 1:
                return hm.LOG
            if kind == 2:
                return hm.EXP
            return hm.power_generator(round(float(rng.normal(0, 2)), 3))

        def random_expr(depth):
            kind = rng.integers(6 if depth > 0 else 5)
            if kind == 0:
                return hm.Power(round(float(rng.normal(0, 2)), 3))
            if kind == 1:
                return hm.Gini(
                    round(float(rng.normal(0, 2)), 3),
                    round(float(rng.normal(0, 2)), 3),
                )
            if kind == 2:
                gen = random_generator()
                if not gen.strictly_monotone:
                    gen = hm.LOG
                return hm.QuasiArithmetic(gen)
            if kind == 3:
                f = random_generator()
                g = hm.power_generator(round(float(rng.normal(0, 2)), 3))
                if f == g:
                    f = hm.LOG
                return hm.Bajraktarevic(f, g)
            if kind == 4:
                if rng.integers(2):
                    return hm.Deviation(hm.ARITHMETIC_DEVIATION)
                f = random_generator()
                g = hm.power_generator(round(float(rng.normal(0, 2)), 3))
                return hm.Deviation(hm.PairDeviation(f, g))
            children = tuple(
                random_expr(depth - 1) for _ in range(int(rng.integers(2, 5)))
            )
            return hm.Gauss(children)

        for _ in range(200):
            expr = random_expr(2)
            assert parse_mean_expr(format_mean_expr(expr)) == expr

    def test_unprintable_expressions_rejected(self):
        with pytest.raises(ValueError):
            format_mean_expr(hm.MinOf())
        with pytest.raises(ValueError):
            format_mean_expr(hm.QuasiArithmetic(hm.neg_power_generator(1.0)))
