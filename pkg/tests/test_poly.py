from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cend.errors import (
    DimensionMismatchError,
    NotUnimodularError,
    SingularMatrixError,
)
from cend.poly import (
    BiPoly,
    HSubmoduleBasis,
    PolyMatrix,
    UniPoly,
    divide_right_exact,
    hermite_reduce,
    hsubmodule_member,
    poly_ext_gcd,
    rat,
    smith_normal_form,
    unimodular_inverse,
)


def up(pairs, var="x"):
    return UniPoly(pairs, var)


X = UniPoly.gen("x")
ONE = UniPoly.const(1, "x")


class TestUniPoly:
    def test_construction_drops_zeros(self):
        p = up({0: 1, 2: 0, 3: Fraction(0)})
        assert p.items() == [(0, Fraction(1))]
        assert p.degree == 0

    def test_zero_degree_is_none(self):
        assert UniPoly.zero("x").degree is None
        assert not UniPoly.zero("x")

    def test_square(self):
        assert (X + ONE) * (X + ONE) == up({0: 1, 1: 2, 2: 1})

    def test_divmod(self):
        # x^3 - 1 = (x - 1)(x^2 + x + 1)
        q, r = divmod(up({3: 1, 0: -1}), X - ONE)
        assert q == up({2: 1, 1: 1, 0: 1})
        assert not r

    def test_divmod_remainder(self):
        q, r = divmod(up({2: 1, 0: 1}), X)
        assert q == X
        assert r == ONE

    def test_fraction_coefficients(self):
        assert up({1: Fraction(1, 2)}) * 2 == X

    def test_var_mismatch_raises(self):
        with pytest.raises(ValueError):
            X + UniPoly.gen("v")

    def test_shift(self):
        # (x+1)^2 = x^2 + 2x + 1
        assert (X * X).shift(1) == up({2: 1, 1: 2, 0: 1})
        assert (X * X).shift(-1).shift(1) == X * X

    def test_compose(self):
        # (x^2 + 1) at x = v - 2
        v = UniPoly.gen("v")
        got = (X * X + ONE).compose(v - UniPoly.const(2, "v"))
        assert got == UniPoly({2: 1, 1: -4, 0: 5}, "v")

    def test_derivative(self):
        assert (X ** 3).derivative() == up({2: 3})

    def test_exact_div(self):
        assert (X * X - ONE).exact_div(X - ONE) == X + ONE
        assert (X * X + ONE).exact_div(X - ONE) is None

    def test_eval(self):
        assert (X * X + ONE)(Fraction(1, 2)) == Fraction(5, 4)

    def test_rat(self):
        assert rat("3/4") == Fraction(3, 4)
        assert rat("-2") == Fraction(-2)
        assert rat(5) == Fraction(5)


@st.composite
def unipolys(draw, var="x", max_deg=4):
    n = draw(st.integers(0, 3))
    coeffs = {}
    for _ in range(n):
        d = draw(st.integers(0, max_deg))
        coeffs[d] = draw(st.integers(-5, 5))
    return UniPoly(coeffs, var)


class TestUniPolyLaws:
    @given(unipolys(), unipolys(), unipolys())
    def test_mul_distributes(self, a, b, c):
        assert a * (b + c) == a * b + a * c

    @given(unipolys(), unipolys())
    def test_divmod_reconstructs(self, a, b):
        if not b:
            return
        q, r = divmod(a, b)
        assert q * b + r == a
        assert r.degree is None or r.degree < b.degree

    @given(unipolys(), unipolys())
    def test_ext_gcd_bezout(self, a, b):
        g, u, w = poly_ext_gcd(a, b)
        assert u * a + w * b == g
        if a or b:
            assert g.lead == 1
            assert a % g == UniPoly.zero("x")
            assert b % g == UniPoly.zero("x")


DD = BiPoly.D()
VV = BiPoly.v()


class TestBiPoly:
    def test_product(self):
        # (D + v)^2 = D^2 + 2Dv + v^2
        assert (DD + VV) ** 2 == BiPoly([(2, 0, 1), (1, 1, 2), (0, 2, 1)])

    def test_derivatives(self):
        p = BiPoly([(1, 2, 3)])  # 3 D v^2
        assert p.dv() == BiPoly([(1, 1, 6)])
        assert p.dd() == BiPoly([(0, 2, 3)])

    def test_subst_v_shift_by_d(self):
        # v^2 at v -> v + D
        got = (VV ** 2).subst_v(VV + DD)
        assert got == BiPoly([(0, 2, 1), (1, 1, 2), (2, 0, 1)])

    def test_flip_then_shift_is_simultaneous(self):
        # a(-D, v-D) for a = D*v
        got = (DD * VV).flip_d().subst_v(VV - DD)
        assert got == BiPoly([(1, 1, -1), (2, 0, 1)])

    def test_eval_d0(self):
        p = BiPoly([(0, 2, 1), (1, 1, 5), (0, 0, -3)])
        assert p.eval_d0() == UniPoly({2: 1, 0: -3}, "v")

    def test_coefficient_splits(self):
        p = BiPoly([(2, 1, 1), (0, 1, 2), (2, 0, -1)])
        dc = p.d_coeffs()
        assert dc[2] == UniPoly({1: 1, 0: -1}, "v")
        assert dc[0] == UniPoly({1: 2}, "v")
        vc = p.v_coeffs()
        assert vc[1] == UniPoly({2: 1, 0: 2}, "D")
        assert vc[0] == UniPoly({2: -1}, "D")

    def test_exact_div(self):
        a = (DD + VV) * (DD * VV + BiPoly.const(2))
        assert a.exact_div(DD + VV) == DD * VV + BiPoly.const(2)
        assert (DD * VV + BiPoly.const(1)).exact_div(DD + VV) is None

    def test_from_uni_roundtrip(self):
        p = UniPoly({3: 2, 0: -1}, "D")
        assert BiPoly.from_uni(p, "D").to_uni("D") == p
        with pytest.raises(ValueError):
            (DD + VV).to_uni("D")


def pm(rows, var="v"):
    return PolyMatrix(rows, var)


V = UniPoly.gen("v")


class TestPolyMatrix:
    def test_mul_identity(self):
        m = pm([[V, 1], [0, V * V]])
        assert m * PolyMatrix.identity(2, "v") == m

    def test_det_2x2(self):
        m = pm([[V, 1], [0, V]])
        assert m.det() == V * V

    def test_det_3x3(self):
        m = pm([[V, 1, 0], [0, V, 1], [1, 0, V]])
        # v^3 + 1
        assert m.det() == UniPoly({3: 1, 0: 1}, "v")

    def test_adjugate_identity(self):
        m = pm([[V, 1], [2, V]])
        d = m.det()
        prod = m * m.adjugate()
        assert prod == PolyMatrix.diag([d, d], "v")

    def test_unimodular_inverse(self):
        u = pm([[1, V], [0, 1]])
        assert unimodular_inverse(u) == pm([[1, -V], [0, 1]])
        with pytest.raises(NotUnimodularError):
            unimodular_inverse(pm([[V, 0], [0, 1]]))

    def test_nonsquare_rejected(self):
        with pytest.raises(DimensionMismatchError):
            pm([[V, 1]])


class TestSmith:
    def assert_valid_smith(self, q):
        t, d, u = smith_normal_form(q)
        assert t * q * u == d
        # witnesses are unimodular
        for w in (t, u):
            dw = w.det()
            assert dw and dw.degree == 0
        # diagonal, monic, divisibility chain, zeros last
        n = q.n
        diag = [d.entry(i, i) for i in range(n)]
        for i in range(n):
            for j in range(n):
                if i != j:
                    assert not d.entry(i, j)
        seen_zero = False
        for i, e in enumerate(diag):
            if not e:
                seen_zero = True
                continue
            assert not seen_zero, "zero entries must come last"
            assert e.lead == 1
            if i + 1 < n and diag[i + 1]:
                assert diag[i + 1] % e == UniPoly.zero(q.var)
        return d

    def test_jordan_like_block(self):
        d = self.assert_valid_smith(pm([[V, 1], [0, V]]))
        assert [d.entry(i, i) for i in range(2)] == [
            UniPoly.const(1, "v"),
            V * V,
        ]

    def test_diagonal_gcd_lcm(self):
        d = self.assert_valid_smith(pm([[V, 0], [0, V * V - V]]))
        assert d.entry(0, 0) == V
        assert d.entry(1, 1) == V * V - V

    def test_singular(self):
        d = self.assert_valid_smith(pm([[V, V], [V, V]]))
        assert d.entry(0, 0) == V
        assert not d.entry(1, 1)

    def test_zero_matrix(self):
        d = self.assert_valid_smith(PolyMatrix.zeros(2, "v"))
        assert d.is_zero()

    @given(
        st.lists(
            st.lists(unipolys(var="v", max_deg=2), min_size=2, max_size=2),
            min_size=2,
            max_size=2,
        )
    )
    @settings(max_examples=40, deadline=None)
    def test_random_2x2(self, rows):
        self.assert_valid_smith(pm(rows))

    @given(
        st.lists(
            st.lists(unipolys(var="v", max_deg=1), min_size=3, max_size=3),
            min_size=3,
            max_size=3,
        )
    )
    @settings(max_examples=25, deadline=None)
    def test_random_3x3(self, rows):
        self.assert_valid_smith(pm(rows))


class TestDivideRightExact:
    def test_exact(self):
        q = pm([[V, 0], [0, 1]]).rows
        m = pm([[V * V, 0], [0, V]]).rows
        x = [[m[i][0] * q[0][j] + m[i][1] * q[1][j] for j in range(2)] for i in range(2)]
        got = divide_right_exact(x, q)
        assert got is not None
        assert [[e for e in r] for r in got] == [list(r) for r in m]

    def test_not_multiple(self):
        q = pm([[V, 0], [0, V]]).rows
        x = pm([[1, 0], [0, V]]).rows
        assert divide_right_exact(x, q) is None

    def test_singular_raises(self):
        q = pm([[V, V], [V, V]]).rows
        with pytest.raises(SingularMatrixError):
            divide_right_exact(q, q)

    def test_bivariate_entries(self):
        # (v - D) divides (v - D) * (D + 1) on the nose
        q = [[BiPoly.v() - BiPoly.D()]]
        x = [[(BiPoly.v() - BiPoly.D()) * (BiPoly.D() + BiPoly.const(1))]]
        got = divide_right_exact(x, q)
        assert got == [[BiPoly.D() + BiPoly.const(1)]]


def dp(pairs):
    return UniPoly(pairs, "D")


D = UniPoly.gen("D")
DZ = UniPoly.zero("D")
D1 = UniPoly.const(1, "D")


class TestHermite:
    def test_gcd_combine(self):
        # rows (D^2, D) and (D, 1) span the same module as (D, 1)
        basis = hermite_reduce([[D * D, D], [D, D1]])
        assert basis.rank == 1
        assert basis.rows == ((D, D1),)
        assert basis.pivots == (0,)

    def test_membership(self):
        basis = hermite_reduce([[D, DZ], [DZ, D1]])
        assert hsubmodule_member([D * D, UniPoly.const(5, "D")], basis)
        assert not hsubmodule_member([D1, DZ], basis)

    def test_reduction_above_pivot(self):
        # second pivot D^2 should reduce the first row's tail below degree 2
        basis = hermite_reduce([[D1, D * D * D], [DZ, D * D]])
        assert basis.pivots == (0, 1)
        tail = basis.rows[0][1]
        assert tail.degree is None or tail.degree < 2

    def test_monic_pivots(self):
        basis = hermite_reduce([[2 * D, DZ]])
        assert basis.rows[0][0] == D

    def test_zero_rows_dropped(self):
        basis = hermite_reduce([[DZ, DZ], [DZ, D]], ncols=2)
        assert basis.rank == 1

    @given(
        st.lists(
            st.lists(unipolys(var="D", max_deg=2), min_size=3, max_size=3),
            min_size=1,
            max_size=4,
        )
    )
    @settings(max_examples=40, deadline=None)
    def test_idempotent_and_contains_generators(self, rows):
        basis = hermite_reduce(rows, ncols=3)
        again = hermite_reduce(basis.rows, ncols=3)
        assert again == basis
        for r in rows:
            assert basis.member(r)  # generators always lie in the span

    @given(
        st.lists(
            st.lists(unipolys(var="D", max_deg=2), min_size=2, max_size=2),
            min_size=1,
            max_size=3,
        ),
        st.lists(unipolys(var="D", max_deg=1), min_size=1, max_size=3),
    )
    @settings(max_examples=40, deadline=None)
    def test_combinations_are_members(self, rows, coeffs):
        basis = hermite_reduce(rows, ncols=2)
        vec = [DZ, DZ]
        for r, c in zip(rows, coeffs):
            vec = [a + c * b for a, b in zip(vec, r)]
        assert basis.member(vec)
