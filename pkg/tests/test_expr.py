import math
import random

import pytest

from conftest import random_box, random_expr, sample_point, shrink_box
from gsiplab import expr as ex
from gsiplab.expr import (EvaluationError, Interval, evaluate, interval_eval,
                          substitute)

x, y = ex.var("x"), ex.var("y")


class TestPointEvaluation:
    def test_llp_objective_at_corner(self):
        g = (x - y) ** 2 - 10.0
        assert evaluate(g, {"x": 1.0, "y": 1.0}) == -10.0

    def test_aggregate_constraint_at_corner(self):
        hb = -2.0 * x + y
        assert evaluate(hb, {"x": 1.0, "y": 1.0}) == -1.0

    def test_min_of_two_clauses(self):
        e = ex.emin(ex.const(-2.0 * 1 + 0.45), ex.const(-1.0))
        assert evaluate(e, {}) == pytest.approx(-1.55)

    def test_unknown_variable(self):
        with pytest.raises(EvaluationError):
            evaluate(x + y, {"x": 1.0})

    def test_division_by_zero(self):
        with pytest.raises(EvaluationError):
            evaluate(x / y, {"x": 1.0, "y": 0.0})

    def test_division(self):
        assert evaluate(x / y, {"x": 1.0, "y": 4.0}) == 0.25


class TestIntervalEvaluation:
    def test_shifted_square(self):
        g = (x - y) ** 2 - 10.0
        box = {"x": Interval(-1, 1), "y": Interval(-1, 1)}
        assert interval_eval(g, box) == Interval(-10.0, -6.0)

    def test_linear(self):
        assert interval_eval(-y - 10.0, {"y": Interval(-1, 1)}) == Interval(-11.0, -9.0)

    def test_constant(self):
        assert interval_eval(ex.const(3.0), {"x": Interval(-5, 7)}) == Interval(3.0, 3.0)

    def test_divisor_interval_containing_zero(self):
        with pytest.raises(EvaluationError):
            interval_eval(x / y, {"x": Interval(0, 1), "y": Interval(-1, 1)})

    def test_even_power_tightening(self):
        assert interval_eval(x ** 2, {"x": Interval(-2, 1)}) == Interval(0.0, 4.0)
        assert interval_eval(x ** 2, {"x": Interval(1, 2)}) == Interval(1.0, 4.0)

    def test_odd_power(self):
        assert interval_eval(x ** 3, {"x": Interval(-2, 1)}) == Interval(-8.0, 1.0)


class TestStructuralInvariants:
    def test_pow_rejects_negative_exponent(self):
        with pytest.raises(ValueError):
            ex.ipow(x, -1)

    def test_neg_constant_folds(self):
        assert ex.neg(ex.const(3.0)) == ex.const(-3.0)

    def test_arity_enforced(self):
        with pytest.raises(ValueError):
            ex.Expr("add", children=(x,))


class TestSubstitution:
    def test_substitute_and_fold(self):
        g = (x - y) ** 2 - 10.0
        gy = substitute(g, {"x": 1.0})
        assert gy.variables() == frozenset({"y"})
        assert evaluate(gy, {"y": 0.0}) == evaluate(g, {"x": 1.0, "y": 0.0})

    def test_full_fold_to_constant(self):
        assert substitute(x * y + 1.0, {"x": 2.0, "y": 3.0}) == ex.const(7.0)


class TestFuzzProperties:
    def test_inclusion(self):
        rng = random.Random(20260823)
        for _ in range(1000):
            e = random_expr(rng, ["x", "y"], rng.randint(1, 5))
            box = random_box(rng, ["x", "y"])
            p = sample_point(rng, box)
            iv = interval_eval(e, box)
            v = evaluate(e, p)
            assert iv.contains(v, slack=1e-9 * max(1.0, abs(iv.lo), abs(iv.hi)))

    def test_monotone_under_box_shrinking(self):
        rng = random.Random(7)
        for _ in range(500):
            e = random_expr(rng, ["x", "y"], rng.randint(1, 5))
            box = random_box(rng, ["x", "y"])
            sub = shrink_box(rng, box)
            big = interval_eval(e, box)
            small = interval_eval(e, sub)
            assert big.encloses(small, slack=1e-9 * max(1.0, abs(big.lo), abs(big.hi)))

    def test_min_max_match_pointwise(self):
        rng = random.Random(13)
        for _ in range(500):
            a = random_expr(rng, ["x", "y"], rng.randint(0, 4))
            b = random_expr(rng, ["x", "y"], rng.randint(0, 4))
            box = random_box(rng, ["x", "y"])
            p = sample_point(rng, box)
            va, vb = evaluate(a, p), evaluate(b, p)
            assert evaluate(ex.emin(a, b), p) == min(va, vb)
            assert evaluate(ex.emax(a, b), p) == max(va, vb)
