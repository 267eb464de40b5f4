"""Connections on the line: formal solutions and triviality levels."""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from neron.dgal import (AFFINE, PUNCTURED, Connection, LaurentPoly,
                        check_gauge, default_degree_bound, formal_solution,
                        format_laurent, galois_diagnostic, triviality_mod)
from neron.errors import ShapeMismatch
from neron.ring import Scalar

PI = Scalar.pi_power(1)


def lp(pairs) -> LaurentPoly:
    return LaurentPoly({e: Scalar({p: Fraction(q)}) for e, (p, q) in pairs.items()})


def const(q, p=0) -> LaurentPoly:
    return LaurentPoly({0: Scalar({p: Fraction(q)})})


def exp_conn(power=1) -> Connection:
    return Connection(AFFINE, [[Scalar.pi_power(power)]])


def log_conn() -> Connection:
    return Connection(PUNCTURED, [[LaurentPoly({-1: PI})]])


class TestLaurent:
    def test_arithmetic(self):
        x = LaurentPoly.x_power(1)
        f = x * x + x * 2 + const(1)
        assert f.coeff(2) == Scalar.from_rational(1)
        assert f.coeff(1) == Scalar.from_rational(2)
        assert (f - f).is_zero()
        assert f.derivative() == x * 2 + const(2)

    def test_negative_exponents(self):
        inv = LaurentPoly.x_power(-1)
        assert (inv * LaurentPoly.x_power(1)) == const(1)
        assert inv.derivative() == LaurentPoly.x_power(-2, -1)

    def test_truncations(self):
        f = LaurentPoly({0: Scalar({0: Fraction(1), 3: Fraction(1)}),
                         2: Scalar({1: Fraction(1)})})
        assert f.truncate_pi(2) == LaurentPoly(
            {0: Scalar({0: Fraction(1)}), 2: Scalar({1: Fraction(1)})})
        assert f.truncate_x(1) == LaurentPoly(
            {0: Scalar({0: Fraction(1), 3: Fraction(1)})})

    def test_format(self):
        assert format_laurent(const(1)) == "1"
        assert format_laurent(LaurentPoly.x_power(1, -1)) == "-x"
        assert format_laurent(LaurentPoly.x_power(2) + const(1, 1)) == "pi + x^2"
        assert format_laurent(LaurentPoly.x_power(-1, 3)) == "3*x^-1"
        assert format_laurent(LaurentPoly()) == "0"

    @given(st.integers(-3, 3), st.integers(-3, 3))
    @settings(max_examples=30, derandomize=True)
    def test_product_rule(self, a, b):
        f = LaurentPoly.x_power(2, a) + const(1)
        g = LaurentPoly.x_power(-1, b) + LaurentPoly.x_power(1)
        lhs = (f * g).derivative()
        rhs = f.derivative() * g + f * g.derivative()
        assert lhs == rhs


class TestConnection:
    def test_validation(self):
        with pytest.raises(ShapeMismatch):
            Connection("projective-line", [[0]])
        with pytest.raises(ShapeMismatch):
            Connection(AFFINE, [[0, 0]])
        with pytest.raises(ShapeMismatch):
            Connection(AFFINE, [[LaurentPoly.x_power(-1)]])
        ok = log_conn()
        assert ok.rank == 1
        assert not ok.is_zero()
        assert Connection(AFFINE, [[0]]).is_zero()

    def test_entry_coercion(self):
        c = Connection(AFFINE, [[0, 1], [PI, 0]])
        assert c.matrix[0][1] == const(1)
        assert c.matrix[1][0] == const(1, 1)

    def test_degree(self):
        c = Connection(AFFINE, [[LaurentPoly.x_power(2) + const(1)]])
        assert c.x_degree() == 2
        assert log_conn().x_degree() == 1


class TestFormalSolution:
    def test_exponential_series(self):
        y = formal_solution(exp_conn(), 3)
        assert [[format_laurent(e) for e in row] for row in y] == [
            ["1 - pi*x + 1/2*pi^2*x^2 - 1/6*pi^3*x^3"]]

    def test_zero_connection(self):
        c = Connection(AFFINE, [[0, 0], [0, 0]])
        y = formal_solution(c, 4)
        assert [[format_laurent(e) for e in row] for row in y] == [
            ["1", "0"], ["0", "1"]]

    def test_nilpotent(self):
        c = Connection(AFFINE, [[0, 1], [0, 0]])
        y = formal_solution(c, 2)
        assert [[format_laurent(e) for e in row] for row in y] == [
            ["1", "-x"], ["0", "1"]]

    def test_punctured_rejected(self):
        with pytest.raises(ShapeMismatch):
            formal_solution(log_conn(), 2)

    def test_solution_satisfies_equation(self):
        # dY = -A Y holds through the truncation order, checked directly
        c = exp_conn()
        order = 4
        y = formal_solution(c, order)
        lhs = y[0][0].derivative()
        rhs = -(c.matrix[0][0] * y[0][0])
        assert lhs.truncate_x(order - 1) == rhs.truncate_x(order - 1)


class TestTriviality:
    def test_exponential_gauge(self):
        c = exp_conn()
        entry = triviality_mod(c, 3)
        assert entry.trivial
        expect = LaurentPoly({k: Scalar({k: Fraction(1, [1, 1, 2, 6][k])})
                              for k in range(4)})
        assert entry.gauge[0][0] == expect
        assert check_gauge(c, entry)

    def test_logarithm_blocked_at_level_one(self):
        c = log_conn()
        level0 = triviality_mod(c, 0)
        assert level0.trivial
        assert format_laurent(level0.gauge[0][0]) == "1"
        level1 = triviality_mod(c, 1)
        assert not level1.trivial
        assert level1.obstruction == ["entry (1,1), coefficient of x^-1*pi^1"]

    def test_residue_shift_gauge(self):
        c = Connection(PUNCTURED, [[LaurentPoly({-1: 3})]])
        entry = triviality_mod(c, 1, degree_bound=4)
        assert entry.trivial
        assert format_laurent(entry.gauge[0][0]) == "x^3"
        assert check_gauge(c, entry)

    def test_nilpotent_rank_two(self):
        n = Connection(AFFINE, [[0, PI], [0, 0]])
        entry = triviality_mod(n, 2)
        assert entry.trivial
        assert [[format_laurent(e) for e in row] for row in entry.gauge] == [
            ["1", "pi*x"], ["0", "1"]]
        assert check_gauge(n, entry)

    def test_monotone_in_level(self):
        for c in (exp_conn(), exp_conn(2), log_conn()):
            levels = [triviality_mod(c, k).trivial for k in range(4)]
            assert levels == sorted(levels, reverse=True)

    def test_negative_level_rejected(self):
        with pytest.raises(ValueError):
            triviality_mod(exp_conn(), -1)

    def test_default_bound(self):
        assert default_degree_bound(exp_conn(), 3) == 8
        assert default_degree_bound(log_conn(), 1) == 4


class TestDiagnostic:
    def test_full_tower(self):
        rep, verdict_rep, verdict = galois_diagnostic(exp_conn(), 5)
        assert verdict == ("trivial through level 5: consistent with the full "
                           "tower of identity blowups of the generic Galois group")
        assert rep.trivial_through() == 5
        assert [rep.levels[i].trivial for i in range(6)] == [True] * 6
        assert verdict_rep.ok
        assert verdict_rep.title == "triviality levels 0..5"

    def test_single_blowup(self):
        rep, verdict_rep, verdict = galois_diagnostic(log_conn(), 3)
        assert verdict == ("trivial exactly below level 1: consistent with 1 "
                           "identity blowup(s) of the generic Galois group")
        assert rep.trivial_through() == 0
        assert not verdict_rep.ok

    def test_zero_connection(self):
        c = Connection(AFFINE, [[0]])
        _, _, verdict = galois_diagnostic(c, 2)
        assert verdict == ("the connection is zero: its differential Galois "
                           "group is trivial")

    def test_full_group_on_fibre(self):
        # a unit residue obstruction already at level 0
        c = Connection(PUNCTURED, [[LaurentPoly({-2: 1})]])
        rep, _, verdict = galois_diagnostic(c, 1)
        assert verdict == ("not trivial even modulo pi: the special fibre "
                           "already carries the full group")
        assert rep.trivial_through() == -1
