import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cend.classify import (
    AutomorphismSpec,
    SubalgebraPresentation,
    apply_autom,
    apply_autom_weyl,
    canonicalize_Q,
    classify_irreducible,
    compose_autom,
    e_nq,
    kv_closure,
    left_ideal_member,
    right_ideal_member,
    subalgebra_closure,
)
from cend.conformal import ConformalElement, locality, nproduct
from cend.errors import (
    BoundTooSmallError,
    DimensionMismatchError,
    NotClosedError,
    NotUnimodularError,
    SingularMatrixError,
)
from cend.operators import symbol
from cend.poly import BiPoly, PolyMatrix, UniPoly
from cend.weyl import WeylElement, WeylMatrix, q_valuation

D = BiPoly.D()
V = BiPoly.v()
ONE = BiPoly.const(1)

v = UniPoly.gen("v")
one_v = UniPoly.const(1, "v")
zero_v = UniPoly.zero("v")
p = UniPoly.gen("p")


def unit(n, i, j, f=ONE):
    return ConformalElement.single(n, i, j, f)


def upper_u():
    """The transvection [[1, v], [0, 1]]."""
    return PolyMatrix([[one_v, v], [zero_v, one_v]], "v")


def conformal_of(q, arg):
    """Lift a k[v]-matrix to a conformal element, evaluated at `arg`."""
    def at(f):
        acc = BiPoly.const(0)
        power = BiPoly.const(1)
        for d in range((f.degree or 0) + 1):
            acc = acc + power * f.coeff(d)
            power = power * arg
        return acc
    return ConformalElement(
        [[at(q.entry(i, j)) for j in range(q.n)] for i in range(q.n)]
    )


@st.composite
def elements(draw, n=2, max_dd=2, max_dv=2, max_terms=3):
    rows = []
    for _ in range(n):
        row = []
        for _ in range(n):
            coeffs = {}
            for _ in range(draw(st.integers(0, max_terms))):
                i = draw(st.integers(0, max_dd))
                j = draw(st.integers(0, max_dv))
                coeffs[(i, j)] = draw(st.integers(-3, 3))
            row.append(BiPoly(coeffs))
        rows.append(row)
    return ConformalElement(rows)


@st.composite
def unimodular(draw, n=2):
    """A product of elementary transvections (hence unimodular)."""
    m = PolyMatrix.identity(n, "v")
    for _ in range(draw(st.integers(1, 3))):
        i = draw(st.integers(0, n - 1))
        j = draw(st.integers(0, n - 1))
        if i == j:
            continue
        f = UniPoly({draw(st.integers(0, 1)): draw(st.integers(-2, 2))}, "v")
        e = PolyMatrix(
            [
                [
                    one_v if a == b else (f if (a, b) == (i, j) else zero_v)
                    for b in range(n)
                ]
                for a in range(n)
            ],
            "v",
        )
        m = m * e
    return m


@st.composite
def specs(draw, n=2, with_h=False):
    h = UniPoly.zero("p")
    if with_h:
        h = UniPoly({draw(st.integers(0, 2)): draw(st.integers(-2, 2))}, "p")
    return AutomorphismSpec(
        Fraction(draw(st.integers(-2, 2))), draw(unimodular(n)), h
    )


@st.composite
def weyl_matrices(draw, n=2, max_terms=2):
    rows = []
    for _ in range(n):
        row = []
        for _ in range(n):
            terms = []
            for _ in range(draw(st.integers(0, max_terms))):
                terms.append(
                    (
                        draw(st.integers(0, 2)),
                        draw(st.integers(0, 2)),
                        draw(st.integers(-2, 2)),
                    )
                )
            row.append(WeylElement(terms))
        rows.append(row)
    return WeylMatrix(rows)


class TestApplyAutom:
    def test_identity_spec(self):
        t = AutomorphismSpec(Fraction(0), PolyMatrix.identity(2, "v"))
        a = unit(2, 0, 1, V * V - D)
        assert apply_autom(a, t) == a

    def test_pure_shift(self):
        t = AutomorphismSpec(Fraction(1), PolyMatrix.identity(1, "v"))
        a = ConformalElement([[V]])
        assert apply_autom(a, t) == ConformalElement([[V + ONE]])
        # D is untouched by the shift
        d = ConformalElement([[D]])
        assert apply_autom(d, t) == d

    def test_transvection_on_units(self):
        t = AutomorphismSpec(Fraction(0), upper_u())
        # e12 commutes with the upper transvection
        assert apply_autom(unit(2, 0, 1), t) == unit(2, 0, 1)
        # e21 picks up the full twist; computed by hand
        img = apply_autom(unit(2, 1, 0), t)
        expect = ConformalElement(
            [[-V, D * V - V * V], [ONE, V - D]]
        )
        assert img == expect

    def test_requires_h_zero(self):
        t = AutomorphismSpec(Fraction(0), PolyMatrix.identity(1, "v"), p)
        with pytest.raises(ValueError):
            apply_autom(ConformalElement.identity(1), t)

    def test_rejects_non_unimodular(self):
        t = AutomorphismSpec(Fraction(0), PolyMatrix([[v]], "v"))
        with pytest.raises(NotUnimodularError):
            apply_autom(ConformalElement.identity(1), t)

    def test_size_mismatch(self):
        t = AutomorphismSpec(Fraction(0), PolyMatrix.identity(2, "v"))
        with pytest.raises(DimensionMismatchError):
            apply_autom(ConformalElement.identity(3), t)

    @given(elements(), elements(), specs())
    @settings(max_examples=25, deadline=None)
    def test_product_homomorphism(self, a, b, t):
        for k in range(locality(a, b)):
            lhs = apply_autom(nproduct(a, k, b), t)
            rhs = nproduct(apply_autom(a, t), k, apply_autom(b, t))
            assert lhs == rhs

    @given(elements(), specs(), specs())
    @settings(max_examples=25, deadline=None)
    def test_composition_law(self, a, t1, t2):
        lhs = apply_autom(apply_autom(a, t1), t2)
        rhs = apply_autom(a, compose_autom(t1, t2))
        assert lhs == rhs

    @given(specs(), specs(), specs())
    @settings(max_examples=25, deadline=None)
    def test_compose_associative(self, t1, t2, t3):
        left = compose_autom(compose_autom(t1, t2), t3)
        right = compose_autom(t1, compose_autom(t2, t3))
        assert left.alpha == right.alpha
        assert left.q == right.q
        assert left.h == right.h


class TestApplyAutomWeyl:
    def test_shift_moves_p(self):
        t = AutomorphismSpec(Fraction(2), PolyMatrix.identity(1, "v"))
        w = WeylMatrix([[WeylElement.p()]])
        got = apply_autom_weyl(w, t)
        assert got == WeylMatrix([[WeylElement.p() + WeylElement.one() * 2]])

    def test_h_rebases_q(self):
        t = AutomorphismSpec(Fraction(0), PolyMatrix.identity(1, "v"), p)
        w = WeylMatrix([[WeylElement.q()]])
        got = apply_autom_weyl(w, t)
        assert got == WeylMatrix([[WeylElement.q() - WeylElement.p()]])

    @given(weyl_matrices(), weyl_matrices(), specs(with_h=True))
    @settings(max_examples=20, deadline=None)
    def test_multiplicative(self, w1, w2, t):
        lhs = apply_autom_weyl(w1 * w2, t)
        rhs = apply_autom_weyl(w1, t) * apply_autom_weyl(w2, t)
        assert lhs == rhs

    @given(weyl_matrices(), specs(with_h=True), specs(with_h=True))
    @settings(max_examples=20, deadline=None)
    def test_composition_law(self, w, t1, t2):
        lhs = apply_autom_weyl(apply_autom_weyl(w, t1), t2)
        rhs = apply_autom_weyl(w, compose_autom(t1, t2))
        assert lhs == rhs

    @given(elements(), specs(), st.integers(0, 3))
    @settings(max_examples=25, deadline=None)
    def test_matches_subalgebra_action(self, a, t, n):
        """For h = 0 the two actions agree through the operator picture."""
        lhs = symbol(apply_autom(a, t), n)
        rhs = apply_autom_weyl(symbol(a, n), t)
        assert lhs == rhs

    def test_h_destroys_filtration(self):
        """Re-basing by h = p drops every q-power down to valuation zero.

        This is the witness that the third parameter, unlike the other two,
        cannot act on the polynomial side: the images of q^n acquire q-free
        terms of unbounded p-degree.
        """
        t = AutomorphismSpec(Fraction(0), PolyMatrix.identity(1, "v"), p)
        for n in range(9):
            w = WeylMatrix([[WeylElement.q() ** n]])
            assert q_valuation(apply_autom_weyl(w, t)) == 0


class TestIdealMembership:
    def test_scalar_ideal(self):
        q = PolyMatrix([[v]], "v")
        assert left_ideal_member(ConformalElement([[V - D]]), q)
        assert left_ideal_member(ConformalElement([[(V - D) * V]]), q)
        assert left_ideal_member(ConformalElement([[(V - D) * D]]), q)
        assert not left_ideal_member(ConformalElement.identity(1), q)
        assert not left_ideal_member(ConformalElement([[V]]), q)

    def test_diagonal_ideal(self):
        q = PolyMatrix.diag([one_v, v], "v")
        assert left_ideal_member(unit(2, 0, 0), q)
        assert left_ideal_member(unit(2, 1, 0), q)
        assert not left_ideal_member(unit(2, 0, 1), q)
        assert left_ideal_member(unit(2, 0, 1, V - D), q)
        assert left_ideal_member(unit(2, 1, 1, V - D), q)

    def test_singular_divisor(self):
        q = PolyMatrix([[v, zero_v], [v, zero_v]], "v")
        with pytest.raises(SingularMatrixError):
            left_ideal_member(ConformalElement.identity(2), q)

    @given(elements(n=2, max_dd=1, max_dv=1))
    @settings(max_examples=25, deadline=None)
    def test_generated_members(self, m):
        q = PolyMatrix.diag([v, v * v - one_v], "v")
        x = m * conformal_of(q, V - D)
        assert left_ideal_member(x, q)

    def test_right_scalar_ideal(self):
        pmat = PolyMatrix([[v]], "v")
        assert right_ideal_member(ConformalElement([[V]]), pmat)
        assert right_ideal_member(ConformalElement([[V * D]]), pmat)
        assert not right_ideal_member(ConformalElement([[V - D]]), pmat)

    def test_right_matrix_ideal(self):
        pmat = PolyMatrix.diag([v, one_v], "v")
        assert right_ideal_member(unit(2, 0, 0, V), pmat)
        assert not right_ideal_member(unit(2, 0, 0), pmat)
        assert right_ideal_member(unit(2, 1, 0), pmat)

    @given(elements(n=2, max_dd=1, max_dv=1))
    @settings(max_examples=25, deadline=None)
    def test_right_generated_members(self, m):
        pmat = PolyMatrix.diag([v, v + one_v], "v")
        x = conformal_of(pmat, V) * m
        assert right_ideal_member(x, pmat)

    def test_e_nq(self):
        assert e_nq(1, PolyMatrix([[v]], "v")) == ConformalElement([[V - D]])
        q = PolyMatrix.diag([one_v, v], "v")
        got = e_nq(2, q)
        assert got == unit(2, 1, 1, V - D)
        assert left_ideal_member(got, q)

    def test_e_nq_size_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            e_nq(3, PolyMatrix.identity(2, "v"))


class TestCanonicalizeQ:
    def test_jordan_block(self):
        q = PolyMatrix([[v, one_v], [zero_v, v]], "v")
        diag, t_mat, t = canonicalize_Q(q)
        assert diag == PolyMatrix.diag([one_v, v * v], "v")
        assert t.alpha == 0 and t.h.is_zero()
        # both witnesses must be unimodular and tie the three together
        assert t.q.det().degree == 0
        assert t_mat.det().degree == 0
        assert t_mat * q * t.q == diag

    def test_swap_matrix(self):
        q = PolyMatrix([[zero_v, v], [v, zero_v]], "v")
        diag, _, _ = canonicalize_Q(q)
        assert diag == PolyMatrix.diag([v, v], "v")

    def test_constant_determinant_gives_unit_ideal(self):
        q = PolyMatrix([[one_v, v], [zero_v, one_v]], "v")
        diag, _, _ = canonicalize_Q(q)
        assert diag == PolyMatrix.identity(2, "v")

    @given(st.randoms(use_true_random=False))
    @settings(max_examples=10, deadline=None)
    def test_transports_the_ideal(self, rng):
        q = PolyMatrix(
            [
                [
                    UniPoly(
                        {rng.randrange(2): rng.randrange(-2, 3)}, "v"
                    )
                    for _ in range(2)
                ]
                for _ in range(2)
            ],
            "v",
        )
        if q.det().is_zero():
            q = q + PolyMatrix.diag([v, v], "v")
        if q.det().is_zero():
            return
        diag, _, t = canonicalize_Q(q)
        gen = conformal_of(q, V - D)
        for _ in range(5):
            m = ConformalElement(
                [
                    [
                        BiPoly(
                            [
                                (
                                    rng.randrange(2),
                                    rng.randrange(2),
                                    rng.randrange(-2, 3),
                                )
                            ]
                        )
                        for _ in range(2)
                    ]
                    for _ in range(2)
                ]
            )
            x = m * gen
            assert left_ideal_member(x, q)
            assert left_ideal_member(apply_autom(x, t), diag)


class TestSubalgebraClosure:
    def test_units_close_up(self):
        # three units generate the missing fourth
        gens = [unit(2, 0, 0), unit(2, 0, 1), unit(2, 1, 0)]
        pres = SubalgebraPresentation(tuple(gens), v_deg_bound=2, iter_bound=6)
        got = subalgebra_closure(pres)
        assert got.fixed_point and not got.overflow
        assert len(got.elements) == 4
        vec_e22 = unit(2, 1, 1)
        assert vec_e22 in got.elements

    def test_translation_generates_the_scalar_current(self):
        # D(2)D = -2, so the closure of {D} is the whole rank-one current
        pres = SubalgebraPresentation(
            (ConformalElement([[D]]),), v_deg_bound=1, iter_bound=4
        )
        got = subalgebra_closure(pres)
        assert got.fixed_point and not got.overflow
        assert got.elements == (ConformalElement.identity(1),)

    def test_overflow_is_flagged_but_stable(self):
        # v closes onto {v, v^2} at bound 2 while v*v^2 overflows
        pres = SubalgebraPresentation(
            (ConformalElement([[V]]),), v_deg_bound=2, iter_bound=6
        )
        got = subalgebra_closure(pres)
        assert got.fixed_point
        assert got.overflow
        assert len(got.elements) == 2

    def test_iteration_budget_reported(self):
        gens = [unit(2, 0, 0), unit(2, 0, 1), unit(2, 1, 0)]
        pres = SubalgebraPresentation(tuple(gens), v_deg_bound=2, iter_bound=1)
        got = subalgebra_closure(pres)
        assert not got.fixed_point
        assert got.iterations == 1

    def test_left_ideal_generator_spans_ideal_slice(self):
        g = e_nq(1, PolyMatrix([[v]], "v"))
        pres = SubalgebraPresentation((g,), v_deg_bound=3, iter_bound=8)
        got = subalgebra_closure(pres)
        assert got.fixed_point and got.overflow
        assert len(got.elements) == 3
        q = PolyMatrix([[v]], "v")
        for e in got.elements:
            assert left_ideal_member(e, q)

    def test_mixed_sizes_rejected(self):
        with pytest.raises(DimensionMismatchError):
            SubalgebraPresentation(
                (ConformalElement.identity(1), ConformalElement.identity(2)),
                v_deg_bound=2,
            )

    def test_empty_presentation_closes_to_nothing(self):
        pres = SubalgebraPresentation((), v_deg_bound=1, iter_bound=1)
        got = subalgebra_closure(pres)
        assert got.elements == ()
        assert got.fixed_point and not got.overflow


class TestKvClosure:
    def test_current_is_direct_with_unit_ideal(self):
        gens = [unit(2, i, j) for i in range(2) for j in range(2)]
        pres = SubalgebraPresentation(tuple(gens), v_deg_bound=2, iter_bound=4)
        got = kv_closure(pres)
        assert got.directness == "Direct"
        assert got.ideal_q == PolyMatrix.identity(2, "v")
        assert got.certified_at_bound == 2

    def test_scalar_ideal_overlaps(self):
        g = e_nq(1, PolyMatrix([[v]], "v"))
        pres = SubalgebraPresentation((g,), v_deg_bound=3, iter_bound=8)
        got = kv_closure(pres)
        assert got.directness == "Overlap"
        assert got.ideal_q == PolyMatrix([[v]], "v")

    def test_matrix_ideal_overlaps(self):
        q = PolyMatrix.diag([one_v, v], "v")
        gens = [
            unit(2, 0, 0),
            unit(2, 1, 0),
            unit(2, 0, 1, V - D),
            unit(2, 1, 1, V - D),
        ]
        pres = SubalgebraPresentation(tuple(gens), v_deg_bound=3, iter_bound=8)
        got = kv_closure(pres)
        assert got.directness == "Overlap"
        assert got.ideal_q == q

    def test_not_closed_raises(self):
        gens = [unit(2, 0, 0), unit(2, 0, 1), unit(2, 1, 0)]
        pres = SubalgebraPresentation(tuple(gens), v_deg_bound=2, iter_bound=1)
        with pytest.raises(NotClosedError):
            kv_closure(pres)


class TestClassify:
    def test_scalar_current(self):
        pres = SubalgebraPresentation(
            (ConformalElement.identity(1),), v_deg_bound=1, iter_bound=4
        )
        got = classify_irreducible(pres)
        assert got.verdict == "CurrentConjugate"
        assert got.witness.q == PolyMatrix.identity(1, "v")
        assert not got.alarm

    def test_matrix_current(self):
        gens = [unit(2, i, j) for i in range(2) for j in range(2)]
        pres = SubalgebraPresentation(tuple(gens), v_deg_bound=2, iter_bound=4)
        got = classify_irreducible(pres)
        assert got.verdict == "CurrentConjugate"
        # already a current algebra: the witness conjugation is constant
        assert all(
            got.witness.q.entry(i, j).degree in (None, 0)
            for i in range(2)
            for j in range(2)
        )

    def test_conjugated_current_recovers_witness(self):
        t = AutomorphismSpec(Fraction(0), upper_u())
        gens = [
            apply_autom(unit(2, i, j), t) for i in range(2) for j in range(2)
        ]
        pres = SubalgebraPresentation(tuple(gens), v_deg_bound=2, iter_bound=4)
        got = classify_irreducible(pres)
        assert got.verdict == "CurrentConjugate"
        assert got.witness.q == PolyMatrix(
            [[one_v, -v], [zero_v, one_v]], "v"
        )
        # and the witness indeed undoes the twist on every generator
        for g in gens:
            assert apply_autom(g, got.witness).deg_v in (None, 0)

    def test_scalar_left_ideal(self):
        g = e_nq(1, PolyMatrix([[v]], "v"))
        pres = SubalgebraPresentation((g,), v_deg_bound=3, iter_bound=8)
        got = classify_irreducible(pres)
        assert got.verdict == "LeftIdeal"
        assert got.ideal_q == PolyMatrix([[v]], "v")
        assert not got.alarm

    def test_matrix_left_ideal(self):
        gens = [
            unit(2, 0, 0),
            unit(2, 1, 0),
            unit(2, 0, 1, V - D),
            unit(2, 1, 1, V - D),
        ]
        pres = SubalgebraPresentation(tuple(gens), v_deg_bound=3, iter_bound=8)
        got = classify_irreducible(pres)
        assert got.verdict == "LeftIdeal"
        assert got.ideal_q == PolyMatrix.diag([one_v, v], "v")
        assert not got.alarm

    def test_under_bounded_budget_stays_unknown(self):
        """A too-small v-degree budget must never produce a wrong verdict."""
        g = e_nq(1, PolyMatrix([[v * v]], "v"))
        pres = SubalgebraPresentation((g,), v_deg_bound=2, iter_bound=8)
        got = classify_irreducible(pres)
        assert got.verdict == "Unknown"
        assert got.reason is not None

    def test_squared_ideal_resolves_at_larger_bound(self):
        g = e_nq(1, PolyMatrix([[v * v]], "v"))
        pres = SubalgebraPresentation((g,), v_deg_bound=5, iter_bound=10)
        got = classify_irreducible(pres)
        assert got.verdict == "LeftIdeal"
        assert got.ideal_q == PolyMatrix([[v * v]], "v")
        assert not got.alarm

    def test_non_dense_input_is_refused(self):
        # the corner unit alone acts reducibly; no positive verdict allowed
        pres = SubalgebraPresentation(
            (unit(2, 0, 0),), v_deg_bound=1, iter_bound=4
        )
        got = classify_irreducible(pres)
        assert got.verdict == "Unknown"
        assert "precondition" in got.reason

    def test_reducible_diagonal_is_refused(self):
        # D*Id closes onto scalars, whose module action fixes each line
        pres = SubalgebraPresentation(
            (ConformalElement.identity(2).d_mul(),), v_deg_bound=1, iter_bound=4
        )
        got = classify_irreducible(pres)
        assert got.verdict == "Unknown"
        assert "precondition" in got.reason
