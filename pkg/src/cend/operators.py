"""Operator realization of matrix-polynomial elements.

Every element a of M_N(k[D,v]) determines a family of operators a(n) on
V_N = k[p]^N, one for each n >= 0, living in M_N(W) for the Weyl algebra W
(p acts by multiplication, q by d/dp). Writing a = sum_s D^s C_s(v), the
coefficient list A_s = (-1)^s s! C_s gives

    a(n) = sum_s C(n,s) A_s(p) q^(n-s),

so the family is "differential": finitely many p-coefficient matrices
generate all of it, and a(n) has positive q-valuation once n passes the top
index. This module converts both ways (symbol / reconstruct, with
fit_differential_sequence recovering the list from sampled operators),
implements the action of operator matrices back on elements, checks the
composition rules that make the correspondence multiplicative, and runs the
orbit-density certificate used as a precondition for classification.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial
from typing import Mapping, Sequence

from .conformal import ConformalElement, locality, nproduct
from .errors import (
    DimensionMismatchError,
    InsufficientSamplesError,
    NotDifferentialError,
)
from .poly import BiPoly, PolyMatrix, UniPoly
from .weyl import WeylElement, WeylMatrix, q_valuation


@dataclass(frozen=True)
class DifferentialSequence:
    """Coefficient matrices A_0..A_m over k[p] (no trailing zero matrices)."""

    n: int
    coeffs: tuple[PolyMatrix, ...]

    def __post_init__(self):
        for mat in self.coeffs:
            if mat.n != self.n:
                raise DimensionMismatchError("coefficient matrix size mismatch")
        if self.coeffs and self.coeffs[-1].is_zero():
            raise ValueError("trailing zero coefficient")

    @property
    def top_index(self) -> int:
        return len(self.coeffs) - 1

    def operator(self, n: int) -> WeylMatrix:
        """The member a(n) = sum_s C(n,s) A_s(p) q^(n-s) of the family."""
        out = [[WeylElement.zero() for _ in range(self.n)] for _ in range(self.n)]
        for s, mat in enumerate(self.coeffs):
            if s > n:
                break
            c = comb(n, s)
            for i in range(self.n):
                for j in range(self.n):
                    e = mat.entry(i, j)
                    if e:
                        out[i][j] = out[i][j] + WeylElement(
                            [(d, n - s, a * c) for d, a in e.items()]
                        )
        return WeylMatrix(out)


@dataclass(frozen=True)
class OperatorSample:
    n: int
    op: WeylMatrix


def element_sequence(a: ConformalElement) -> DifferentialSequence:
    """The coefficient list of a's operator family: A_s = (-1)^s s! C_s."""
    dc = a.d_coeffs()
    if not dc:
        return DifferentialSequence(a.n, ())
    top = max(dc)
    coeffs = []
    for s in range(top + 1):
        mat = dc.get(s)
        if mat is None:
            coeffs.append(PolyMatrix.zeros(a.n, "p"))
        else:
            c = Fraction(factorial(s))
            if s % 2:
                c = -c
            coeffs.append(mat.retag("p") * c)
    while coeffs and coeffs[-1].is_zero():
        coeffs.pop()
    return DifferentialSequence(a.n, tuple(coeffs))


def symbol(a: ConformalElement, n: int) -> WeylMatrix:
    """The operator a(n) acting on k[p]^N."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return element_sequence(a).operator(n)


def reconstruct(seq: DifferentialSequence) -> ConformalElement:
    """The element whose operator family has the given coefficients."""
    acc: dict[int, PolyMatrix] = {}
    for s, mat in enumerate(seq.coeffs):
        c = Fraction(1, factorial(s))
        if s % 2:
            c = -c
        acc[s] = mat.retag("v") * c
    return ConformalElement.from_d_coeffs(acc, seq.n)


def fit_differential_sequence(
    samples: Sequence[OperatorSample],
) -> DifferentialSequence:
    """Recover the coefficient list from sampled operators.

    The largest sample determines the candidate list; every other sample
    must match its prediction (raising NotDifferentialError otherwise).
    A sample beyond the top nonzero index is required to certify the list
    is complete (else InsufficientSamplesError).
    """
    if not samples:
        raise InsufficientSamplesError("no samples given")
    size = samples[0].op.n
    by_n: dict[int, WeylMatrix] = {}
    for s in samples:
        if s.op.n != size:
            raise DimensionMismatchError("samples of mixed matrix size")
        if s.n < 0:
            raise ValueError("sample index must be nonnegative")
        if s.n in by_n and by_n[s.n] != s.op:
            raise NotDifferentialError(f"conflicting samples at n={s.n}")
        by_n[s.n] = s.op

    m_top = max(by_n)
    w = by_n[m_top]
    # group the largest sample by q-degree: a(M) = sum_s C(M,s) A_s q^(M-s)
    zero = UniPoly.zero("p")
    layers: dict[int, list[list[UniPoly]]] = {}
    for i in range(size):
        for j in range(size):
            for dp, dq, c in w.entry(i, j).items():
                if dq > m_top:
                    raise NotDifferentialError(
                        f"operator at n={m_top} has q-degree {dq} > {m_top}"
                    )
                if dq not in layers:
                    layers[dq] = [[zero for _ in range(size)] for _ in range(size)]
                layers[dq][i][j] = layers[dq][i][j] + UniPoly.monomial(dp, c, "p")
    coeffs = []
    for s in range(m_top + 1):
        rows = layers.get(m_top - s)
        if rows is None:
            coeffs.append(PolyMatrix.zeros(size, "p"))
        else:
            coeffs.append(PolyMatrix(rows, "p") * Fraction(1, comb(m_top, s)))
    while coeffs and coeffs[-1].is_zero():
        coeffs.pop()

    if len(coeffs) == m_top + 1:
        raise InsufficientSamplesError(
            f"top coefficient at index {m_top} is nonzero; "
            "a sample beyond it is required"
        )
    seq = DifferentialSequence(size, tuple(coeffs))
    for n, op in by_n.items():
        if seq.operator(n) != op:
            raise NotDifferentialError(f"sample at n={n} breaks the pattern")
    return seq


def _w_q_coeffs(w: WeylMatrix) -> dict[int, PolyMatrix]:
    """Decompose an operator matrix as sum_n W_n(p) q^n."""
    zero = UniPoly.zero("p")
    out: dict[int, list[list[UniPoly]]] = {}
    for i in range(w.n):
        for j in range(w.n):
            for dp, dq, c in w.entry(i, j).items():
                if dq not in out:
                    out[dq] = [[zero for _ in range(w.n)] for _ in range(w.n)]
                out[dq][i][j] = out[dq][i][j] + UniPoly.monomial(dp, c, "p")
    return {n: PolyMatrix(rows, "p") for n, rows in out.items()}


def _falling(n: int, k: int) -> int:
    out = 1
    for i in range(k):
        out *= n - i
    return out


def act(w: WeylMatrix, b: ConformalElement) -> ConformalElement:
    """Left action of an operator matrix on an element.

    For w = symbol(a, n) this returns the n-th product of a and b, and the
    action is associative over the operator product.
    """
    if w.n != b.n:
        raise DimensionMismatchError(f"sizes {w.n} and {b.n}")
    size = w.n
    acc: dict[int, PolyMatrix] = {}
    bd = b.d_coeffs()
    for n, wn in _w_q_coeffs(w).items():
        wv = wn.retag("v")
        for j, bj in bd.items():
            for t in range(min(n, j) + 1):
                c = Fraction(comb(n, t) * _falling(j, t))
                der = bj
                for _ in range(n - t):
                    der = der.map(lambda e: e.derivative())
                term = wv * der * c
                slot = j - t
                if slot in acc:
                    acc[slot] = acc[slot] + term
                else:
                    acc[slot] = term
    return ConformalElement.from_d_coeffs(acc, size)


def verify_composition(
    a: ConformalElement, b: ConformalElement, n: int, m: int
) -> dict:
    """Check the two composition rules tying symbols to n-products:

      symbol(a,n) * symbol(b,m) = sum_s C(n,s) symbol(a (n-s) b, m+s)
      symbol(a (m) b, n) = sum_s (-1)^s C(m,s) symbol(a, m-s) * symbol(b, n+s)
    """
    lhs = symbol(a, n) * symbol(b, m)
    rhs = WeylMatrix.zeros(a.n)
    for s in range(n + 1):
        rhs = rhs + symbol(nproduct(a, n - s, b), m + s) * comb(n, s)
    composition = lhs == rhs

    lhs2 = symbol(nproduct(a, m, b), n)
    rhs2 = WeylMatrix.zeros(a.n)
    for s in range(m + 1):
        t = (symbol(a, m - s) * symbol(b, n + s)) * comb(m, s)
        rhs2 = rhs2 + (-t if s % 2 else t)
    coefficient_rule = lhs2 == rhs2
    return {
        "composition": composition,
        "coefficient_rule": coefficient_rule,
        "ok": composition and coefficient_rule,
    }


Vector = dict[tuple[int, int], Fraction]  # (component, p-degree) -> coeff


def _apply_op(w: WeylMatrix, vec: Vector) -> Vector:
    out: Vector = {}
    for (comp, t), c in vec.items():
        for r in range(w.n):
            e = w.entry(r, comp)
            for dp, dq, a in e.items():
                f = _falling(t, dq)
                if not f:
                    continue
                key = (r, t - dq + dp)
                nv = out.get(key, Fraction(0)) + c * a * f
                if nv:
                    out[key] = nv
                else:
                    out.pop(key, None)
    return out


class _SpanBuilder:
    """Incremental row reduction over Q for sparse vectors."""

    def __init__(self):
        self.rows: dict[tuple[int, int], Vector] = {}

    @staticmethod
    def _lead(vec: Vector) -> tuple[int, int] | None:
        return max(vec) if vec else None

    def reduce(self, vec: Vector) -> Vector:
        vec = dict(vec)
        while vec:
            lead = max(vec)
            row = self.rows.get(lead)
            if row is None:
                return vec
            c = vec[lead]
            for k, a in row.items():
                nv = vec.get(k, Fraction(0)) - c * a
                if nv:
                    vec[k] = nv
                else:
                    vec.pop(k, None)
        return vec

    def insert(self, vec: Vector) -> bool:
        vec = self.reduce(vec)
        if not vec:
            return False
        lead = max(vec)
        inv = Fraction(1) / vec[lead]
        self.rows[lead] = {k: a * inv for k, a in vec.items()}
        return True

    def contains(self, vec: Vector) -> bool:
        return not self.reduce(vec)


def orbit_density_check(
    generators: Sequence[ConformalElement],
    deg_bound: int,
    n_bound: int,
) -> dict:
    """Certify that the operators act densely on V_N = k[p]^N.

    The operator pool consists of the symbols (n <= n_bound) of all words of
    length <= 2 in the generators, premultiplied by powers of p up to the
    degree bound. For each standard basis vector the span of its orbit must
    contain every p^j e_l with j <= deg_bound - c, where c is the largest
    p-vs-q degree gain any pool operator term can produce. Returns a verdict
    of Dense or Unknown (a bounded search can never certify a negative).
    """
    if not generators:
        return {"verdict": "Unknown", "reason": "no generators"}
    size = generators[0].n
    for g in generators:
        if g.n != size:
            raise DimensionMismatchError("generators of mixed size")

    words: list[ConformalElement] = [g for g in generators if not g.is_zero()]
    for g1 in generators:
        for g2 in generators:
            for k in range(min(locality(g1, g2), n_bound + 1)):
                w = nproduct(g1, k, g2)
                if not w.is_zero() and w not in words:
                    words.append(w)

    ops: list[WeylMatrix] = []
    shift = 0
    for w in words:
        for n in range(n_bound + 1):
            s = symbol(w, n)
            if s.is_zero():
                continue
            ops.append(s)
            for i in range(size):
                for j in range(size):
                    for dp, dq, _ in s.entry(i, j).items():
                        shift = max(shift, dp - dq)
    c = shift
    target_deg = deg_bound - c
    if target_deg < 0 or not ops:
        return {
            "verdict": "Unknown",
            "c": c,
            "deg_bound": deg_bound,
            "n_bound": n_bound,
            "reason": "degree bound too small for the operator pool",
        }

    p_id = WeylMatrix(
        [
            [WeylElement.p() if i == j else WeylElement.zero() for j in range(size)]
            for i in range(size)
        ]
    )
    for k in range(size):
        span = _SpanBuilder()
        start: Vector = {(k, 0): Fraction(1)}
        for op in ops:
            vec = _apply_op(op, start)
            for _ in range(deg_bound + 1):
                if not vec or max(d for (_, d) in vec) > deg_bound:
                    break
                span.insert(vec)
                vec = _apply_op(p_id, vec)
        for l in range(size):
            for j in range(target_deg + 1):
                if not span.contains({(l, j): Fraction(1)}):
                    return {
                        "verdict": "Unknown",
                        "c": c,
                        "deg_bound": deg_bound,
                        "n_bound": n_bound,
                        "reason": f"orbit of basis vector {k} misses "
                        f"degree {j} in component {l}",
                    }
    return {
        "verdict": "Dense",
        "c": c,
        "deg_bound": deg_bound,
        "n_bound": n_bound,
    }
