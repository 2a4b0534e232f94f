import json
import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cyclerep.polynomials import (
    NEG_INF,
    BiPoly,
    UniPoly,
    VectorField2,
    bipoly_from_json,
    bipoly_to_json,
    chebyshev,
    compose_pair,
    compose_separable,
    field_from_json,
    field_to_json,
    fraction_to_str,
    total_degree,
    unipoly_from_json,
    unipoly_to_json,
)


def U(*coeffs):
    return UniPoly(coeffs)


class TestChebyshev:
    def test_base_case(self):
        assert chebyshev(0) == U(1)
        assert chebyshev(1) == U(0, 1)

    def test_t3(self):
        assert chebyshev(3) == U(0, -3, 0, 4)  # 4x^3 - 3x

    def test_t6_against_hand_expansion(self):
        # T4 = 2x*T3 - T2 = 8x^4 - 8x^2 + 1
        # T5 = 2x*T4 - T3 = 16x^5 - 20x^3 + 5x
        # T6 = 2x*T5 - T4 = 32x^6 - 48x^4 + 18x^2 - 1
        assert chebyshev(6) == U(-1, 0, 18, 0, -48, 0, 32)

    @pytest.mark.parametrize("m", range(0, 12))
    def test_degree_and_endpoints(self, m):
        t = chebyshev(m)
        assert t.degree() == m
        assert t.evaluate(1) == 1
        assert t.evaluate(-1) == (-1) ** m
        if m >= 1:
            assert t.leading() == Fraction(2) ** (m - 1)

    @pytest.mark.parametrize("m", [2, 3, 5, 8])
    def test_cosine_identity(self, m):
        t = chebyshev(m)
        rng = random.Random(1234 + m)
        for _ in range(1000):
            theta = rng.uniform(0.0, math.pi)
            assert abs(t.evaluate_float(math.cos(theta)) - math.cos(m * theta)) <= 1e-12

    @pytest.mark.parametrize("a", [2, 3, 4])
    @pytest.mark.parametrize("b", [2, 3, 4])
    def test_nesting(self, a, b):
        assert chebyshev(a).compose(chebyshev(b)) == chebyshev(a * b)

    def test_negative_index_rejected(self):
        with pytest.raises(ValueError):
            chebyshev(-1)


class TestUniPoly:
    def test_derivative_t3(self):
        assert chebyshev(3).derivative() == U(-3, 0, 12)  # 12x^2 - 3

    def test_derivative_constant(self):
        assert U(5).derivative() == UniPoly.zero()

    def test_derivative_power(self):
        assert U(0, 0, 0, 0, 0, 1).derivative() == U(0, 0, 0, 0, 5)

    def test_derivative_drops_degree_by_one(self):
        rng = random.Random(7)
        for _ in range(50):
            deg = rng.randint(1, 8)
            coeffs = [rng.randint(-5, 5) for _ in range(deg)] + [rng.randint(1, 5)]
            p = UniPoly(coeffs)
            assert p.derivative().degree() == deg - 1

    def test_zero_degree_sentinel(self):
        assert UniPoly.zero().degree() == NEG_INF
        assert NEG_INF != -1 and NEG_INF < -1
        assert U(7).degree() == 0

    def test_trailing_zeros_stripped(self):
        assert U(1, 2, 0, 0) == U(1, 2)
        assert U(0, 0).is_zero

    def test_exact_evaluation(self):
        p = U(Fraction(1, 3), Fraction(-2, 7), 1)
        x = Fraction(5, 11)
        assert p.evaluate(x) == Fraction(1, 3) - Fraction(2, 7) * x + x * x

    def test_scalar_multiplication(self):
        assert U(1, -2) * Fraction(1, 2) == U(Fraction(1, 2), -1)
        assert 3 * U(0, 1) == U(0, 3)
        f = BiPoly({(1, 1): 2})
        assert f * Fraction(-1, 4) == BiPoly({(1, 1): Fraction(-1, 2)})
        assert 0 * f == BiPoly.zero()

    def test_immutable(self):
        p = U(1, 2)
        with pytest.raises(AttributeError):
            p.coeffs = ()


def small_fractions():
    return st.fractions(min_value=-3, max_value=3, max_denominator=6)


def bipolys(max_deg=6):
    pairs = st.tuples(st.integers(0, max_deg // 2), st.integers(0, max_deg // 2))
    return st.dictionaries(pairs, small_fractions(), max_size=6).map(BiPoly)


class TestBiPoly:
    def test_total_degree_examples(self):
        f = BiPoly({(2, 1): 1, (0, 1): 1})  # x^2 y + y
        assert f.total_degree() == 3
        assert total_degree(BiPoly.zero()) == NEG_INF

    def test_zero_coefficients_never_stored(self):
        f = BiPoly({(1, 1): 1}) - BiPoly({(1, 1): 1})
        assert f.terms == ()
        assert f.is_zero

    @settings(max_examples=120, deadline=None)
    @given(bipolys(), bipolys(), bipolys())
    def test_distributivity(self, f, g, h):
        assert (f + g) * h == f * h + g * h

    @settings(max_examples=60, deadline=None)
    @given(bipolys(), bipolys())
    def test_commutativity(self, f, g):
        assert f * g == g * f
        assert f + g == g + f

    def test_partial_derivatives(self):
        f = BiPoly({(3, 2): Fraction(1, 2), (0, 1): 4})
        assert f.partial_u() == BiPoly({(2, 2): Fraction(3, 2)})
        assert f.partial_v() == BiPoly({(3, 1): 1, (0, 0): 4})

    def test_float_eval_matches_exact(self):
        rng = random.Random(99)
        for _ in range(30):
            f = BiPoly(
                {
                    (rng.randint(0, 4), rng.randint(0, 4)): Fraction(rng.randint(-9, 9), rng.randint(1, 4))
                    for _ in range(5)
                }
            )
            xu, xv = Fraction(rng.randint(-8, 8), 9), Fraction(rng.randint(-8, 8), 9)
            exact = float(f.evaluate(xu, xv))
            approx = f.evaluate_float(float(xu), float(xv))
            assert abs(exact - approx) <= 1e-12 * max(1.0, abs(exact))


class TestComposeSeparable:
    def test_identity_projection(self):
        # P = x composed with T_3 gives T_3(u) as a bivariate in u only
        P = BiPoly({(1, 0): 1})
        assert compose_separable(P, chebyshev(3)) == BiPoly({(3, 0): 4, (1, 0): -3})

    def test_sum_of_squares_with_t2(self):
        # (2u^2-1)^2 + (2v^2-1)^2 expanded by hand
        P = BiPoly({(2, 0): 1, (0, 2): 1})
        expected = BiPoly(
            {(4, 0): 4, (2, 0): -4, (0, 0): 2, (0, 4): 4, (0, 2): -4}
        )
        assert compose_separable(P, chebyshev(2)) == expected

    def test_lifted_circle_equation(self):
        # x^2 + y^2 - rho^2 pulled through T_3 equals T_3(u)^2 + T_3(v)^2 - rho^2,
        # the latter built through plain BiPoly products as an independent path.
        rho2 = Fraction(1, 4)
        P = BiPoly({(2, 0): 1, (0, 2): 1, (0, 0): -rho2})
        t3u = BiPoly.from_uni(chebyshev(3), 0)
        t3v = BiPoly.from_uni(chebyshev(3), 1)
        expected = t3u * t3u + t3v * t3v - BiPoly.const(rho2)
        assert compose_separable(P, chebyshev(3)) == expected

    def test_degree_multiplication_law(self):
        rng = random.Random(4242)
        for _ in range(100):
            dp, dP = rng.randint(1, 4), rng.randint(1, 4)
            p = UniPoly([rng.randint(-3, 3) for _ in range(dp)] + [rng.choice([1, 2, -1])])
            terms = {
                (rng.randint(0, dP), rng.randint(0, dP)): rng.randint(-3, 3)
                for _ in range(4)
            }
            terms[(dP, 0)] = rng.choice([1, -2, 3])  # nonzero top homogeneous part
            P = BiPoly({k: v for k, v in terms.items() if k[0] + k[1] <= dP})
            assert compose_separable(P, p).total_degree() == dp * P.total_degree()

    def test_compose_pair_matches_separable_path(self):
        P = BiPoly({(2, 1): 2, (1, 0): -1, (0, 0): Fraction(1, 3)})
        p = chebyshev(2)
        via_pair = compose_pair(P, BiPoly.from_uni(p, 0), BiPoly.from_uni(p, 1))
        assert via_pair == compose_separable(P, p)


class TestJson:
    def test_fraction_encoding(self):
        assert fraction_to_str(Fraction(-3)) == "-3/1"
        assert fraction_to_str(Fraction(2, 6)) == "1/3"

    def test_unipoly_round_trip(self):
        p = UniPoly((Fraction(-3), Fraction(0), Fraction(22, 7)))
        assert unipoly_from_json(json.loads(json.dumps(unipoly_to_json(p)))) == p

    def test_bipoly_round_trip(self):
        f = BiPoly({(0, 0): Fraction(-1, 3), (5, 2): Fraction(10, 9), (1, 1): -4})
        blob = json.dumps(bipoly_to_json(f))
        assert bipoly_from_json(json.loads(blob)) == f

    def test_field_round_trip(self):
        X = VectorField2(BiPoly({(1, 0): Fraction(1, 2)}), BiPoly({(0, 3): -2}))
        assert field_from_json(json.loads(json.dumps(field_to_json(X)))) == X

    def test_term_order_deterministic(self):
        f = BiPoly({(2, 0): 1, (0, 2): 1, (1, 1): 1})
        g = BiPoly({(1, 1): 1, (0, 2): 1, (2, 0): 1})
        assert bipoly_to_json(f) == bipoly_to_json(g)


class TestVectorField:
    def test_degree_is_max_of_components(self):
        X = VectorField2(BiPoly({(1, 2): 1}), BiPoly({(0, 1): 1}))
        assert X.degree() == 3
        assert VectorField2(BiPoly.zero(), BiPoly.zero()).degree() == NEG_INF
