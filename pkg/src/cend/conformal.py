"""Matrices over k[D, v] with their families of n-products.

An element is an N x N matrix with entries in the commutative ring k[D, v].
Two families of bilinear n-products live on this space:

* the composition products coming from matrix differential operators acting
  on column vectors of polynomials (``circ=False``, the default), and
* the transported products (``circ=True``) obtained by conjugating with the
  base-change map `phi` (substitute v -> v + D entrywise), under which the
  default products become left-multiplication-friendly.

Both satisfy the same two-sided sesquilinearity laws in D:

    (D a) (n) b = -n * a (n-1) b
    a (n) (D b) = D (a (n) b) + n * a (n-1) b

together with finiteness: for fixed a, b the products vanish for all large
n. The recursion defined by those laws (with the D-free base case) is
implemented verbatim in ``nproduct_recursive``; ``nproduct`` evaluates the
same thing through a closed-form double sum and is what the rest of the
package calls.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb, factorial
from typing import Callable, Iterable, Mapping, Sequence

from .errors import DimensionMismatchError
from .poly import BiPoly, PolyMatrix, Scalar, UniPoly


class ConformalElement:
    """Square matrix over k[D, v]."""

    __slots__ = ("n", "entries")

    def __init__(self, rows: Sequence[Sequence[BiPoly | Scalar]]):
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise DimensionMismatchError("matrix must be square")
        coerced = []
        for r in rows:
            row = []
            for e in r:
                if isinstance(e, BiPoly):
                    row.append(e)
                else:
                    row.append(BiPoly.const(e))
            coerced.append(tuple(row))
        self.n = n
        self.entries = tuple(coerced)

    @classmethod
    def zero(cls, n: int) -> "ConformalElement":
        return cls([[0] * n for _ in range(n)])

    @classmethod
    def identity(cls, n: int) -> "ConformalElement":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def scalar(cls, n: int, f: BiPoly) -> "ConformalElement":
        """f * Id."""
        z = BiPoly.zero()
        return cls([[f if i == j else z for j in range(n)] for i in range(n)])

    @classmethod
    def single(cls, n: int, i: int, j: int, f: BiPoly) -> "ConformalElement":
        z = BiPoly.zero()
        return cls(
            [[f if (r, c) == (i, j) else z for c in range(n)] for r in range(n)]
        )

    @classmethod
    def from_d_coeffs(
        cls, coeffs: Mapping[int, PolyMatrix], n: int
    ) -> "ConformalElement":
        """Assemble sum_i D^i * A_i from v-coefficient matrices A_i."""
        rows = [[BiPoly.zero() for _ in range(n)] for _ in range(n)]
        for i, mat in coeffs.items():
            if mat.n != n:
                raise DimensionMismatchError("coefficient matrix size mismatch")
            for r in range(n):
                for c in range(n):
                    e = mat.entry(r, c)
                    if e:
                        rows[r][c] = rows[r][c] + BiPoly(
                            [(i, d, a) for d, a in e.items()]
                        )
        return cls(rows)

    def entry(self, i: int, j: int) -> BiPoly:
        return self.entries[i][j]

    def _require_same_size(self, other: "ConformalElement") -> None:
        if self.n != other.n:
            raise DimensionMismatchError(f"sizes {self.n} and {other.n}")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ConformalElement):
            return NotImplemented
        return self.entries == other.entries

    def __hash__(self) -> int:
        return hash(self.entries)

    def __add__(self, other: "ConformalElement") -> "ConformalElement":
        self._require_same_size(other)
        return ConformalElement(
            [
                [self.entries[i][j] + other.entries[i][j] for j in range(self.n)]
                for i in range(self.n)
            ]
        )

    def __sub__(self, other: "ConformalElement") -> "ConformalElement":
        return self + (-other)

    def __neg__(self) -> "ConformalElement":
        return ConformalElement([[-e for e in r] for r in self.entries])

    def __mul__(
        self, other: "ConformalElement | BiPoly | Scalar"
    ) -> "ConformalElement":
        if isinstance(other, ConformalElement):
            self._require_same_size(other)
            out = []
            for i in range(self.n):
                row = []
                for j in range(self.n):
                    acc = BiPoly.zero()
                    for k in range(self.n):
                        acc = acc + self.entries[i][k] * other.entries[k][j]
                    row.append(acc)
                out.append(row)
            return ConformalElement(out)
        if isinstance(other, (BiPoly, int, Fraction)):
            return ConformalElement(
                [[e * other for e in r] for r in self.entries]
            )
        return NotImplemented

    def __rmul__(self, other: "BiPoly | Scalar") -> "ConformalElement":
        # the entry ring is commutative
        return self.__mul__(other)

    def d_mul(self) -> "ConformalElement":
        """Multiply by D * Id."""
        return self * BiPoly.D()

    def v_mul(self) -> "ConformalElement":
        """Multiply by v * Id."""
        return self * BiPoly.v()

    def map(self, f: Callable[[BiPoly], BiPoly]) -> "ConformalElement":
        return ConformalElement([[f(e) for e in r] for r in self.entries])

    def transpose(self) -> "ConformalElement":
        return ConformalElement(
            [[self.entries[j][i] for j in range(self.n)] for i in range(self.n)]
        )

    @property
    def deg_d(self) -> int | None:
        degs = [e.deg_d for r in self.entries for e in r if e]
        return max(degs) if degs else None

    @property
    def deg_v(self) -> int | None:
        degs = [e.deg_v for r in self.entries for e in r if e]
        return max(degs) if degs else None

    def is_zero(self) -> bool:
        return all(not e for r in self.entries for e in r)

    def d_coeffs(self) -> dict[int, PolyMatrix]:
        """Decompose as sum_i D^i A_i(v); returns {i: A_i} over k[v]."""
        out: dict[int, list[list[UniPoly]]] = {}
        zero = UniPoly.zero("v")
        for r in range(self.n):
            for c in range(self.n):
                for i, f in self.entries[r][c].d_coeffs().items():
                    if i not in out:
                        out[i] = [
                            [zero for _ in range(self.n)] for _ in range(self.n)
                        ]
                    out[i][r][c] = f
        return {i: PolyMatrix(rows, "v") for i, rows in out.items()}

    def v_coeffs(self) -> dict[int, PolyMatrix]:
        """Decompose as sum_j C_j(D) v^j; returns {j: C_j} over k[D]."""
        out: dict[int, list[list[UniPoly]]] = {}
        zero = UniPoly.zero("D")
        for r in range(self.n):
            for c in range(self.n):
                for j, f in self.entries[r][c].v_coeffs().items():
                    if j not in out:
                        out[j] = [
                            [zero for _ in range(self.n)] for _ in range(self.n)
                        ]
                    out[j][r][c] = f
        return {j: PolyMatrix(rows, "D") for j, rows in out.items()}

    def __str__(self) -> str:
        return "[" + "; ".join(
            ", ".join(str(e) for e in r) for r in self.entries
        ) + "]"

    def __repr__(self) -> str:
        return f"ConformalElement({self})"


def v_id(n: int) -> ConformalElement:
    return ConformalElement.scalar(n, BiPoly.v())


def d_id(n: int) -> ConformalElement:
    return ConformalElement.scalar(n, BiPoly.D())


def curr_embed(mat: PolyMatrix) -> ConformalElement:
    """Embed a matrix over k[D] as a v-free element (the current part)."""
    return ConformalElement(
        [
            [BiPoly.from_uni(mat.entry(i, j), "D") for j in range(mat.n)]
            for i in range(mat.n)
        ]
    )


def _dmat(mat: PolyMatrix, m: int) -> PolyMatrix:
    for _ in range(m):
        mat = mat.map(lambda e: e.derivative())
    return mat


def _base_diff(a: PolyMatrix, m: int, b: PolyMatrix) -> dict[int, PolyMatrix]:
    # composition of A with the m-th derivative followed by B, D-free case
    return {0: a * _dmat(b, m)}


def _base_circ(a: PolyMatrix, m: int, b: PolyMatrix) -> dict[int, PolyMatrix]:
    out: dict[int, PolyMatrix] = {}
    s = 0
    der = _dmat(a, m)
    while not der.is_zero():
        out[s] = der * b * Fraction(1, factorial(s))
        der = _dmat(der, 1)
        s += 1
    return out


def _falling(n: int, k: int) -> int:
    out = 1
    for i in range(k):
        out *= n - i
    return out


def _extend_sesquilinear(
    a: ConformalElement,
    n: int,
    b: ConformalElement,
    base: Callable[[PolyMatrix, int, PolyMatrix], dict[int, PolyMatrix]],
) -> ConformalElement:
    """Extend a D-free base product to all of M_N(k[D,v]).

    This is the unique extension satisfying the two sesquilinearity laws:
    each D peeled off the left factor contributes a factor -n and lowers n,
    each D on the right Leibniz-splits into an outer D and an n-lowering.
    """
    acc: dict[int, PolyMatrix] = {}
    for i, ai in a.d_coeffs().items():
        for j, bj in b.d_coeffs().items():
            for t in range(min(j, n - i) + 1):
                c = Fraction(comb(j, t) * _falling(n, i + t))
                if i % 2:
                    c = -c
                if not c:
                    continue
                for s, mat in base(ai, n - i - t, bj).items():
                    slot = j - t + s
                    term = mat * c
                    if slot in acc:
                        acc[slot] = acc[slot] + term
                    else:
                        acc[slot] = term
    return ConformalElement.from_d_coeffs(acc, a.n)


def nproduct(
    a: ConformalElement, n: int, b: ConformalElement, circ: bool = False
) -> ConformalElement:
    """The n-th product of a and b (closed form)."""
    if a.n != b.n:
        raise DimensionMismatchError(f"sizes {a.n} and {b.n}")
    if n < 0:
        raise ValueError("n must be nonnegative")
    return _extend_sesquilinear(a, n, b, _base_circ if circ else _base_diff)


def nproduct_circ(
    a: ConformalElement, n: int, b: ConformalElement
) -> ConformalElement:
    return nproduct(a, n, b, circ=True)


def nproduct_recursive(
    a: ConformalElement, n: int, b: ConformalElement, circ: bool = False
) -> ConformalElement:
    """Same products, evaluated by the defining recursion.

    Kept as an independent reference implementation; tests compare it
    against the closed form.
    """
    if a.n != b.n:
        raise DimensionMismatchError(f"sizes {a.n} and {b.n}")
    if n < 0:
        raise ValueError("n must be nonnegative")
    size = a.n
    base = _base_circ if circ else _base_diff

    def go(x: ConformalElement, k: int, y: ConformalElement) -> ConformalElement:
        if x.is_zero() or y.is_zero():
            return ConformalElement.zero(size)
        dx = x.d_coeffs()
        if any(i > 0 for i in dx):
            rest = ConformalElement.from_d_coeffs(
                {i - 1: m for i, m in dx.items() if i > 0}, size
            )
            head = ConformalElement.from_d_coeffs(
                {0: dx[0]} if 0 in dx else {}, size
            )
            out = ConformalElement.zero(size) if k == 0 else go(rest, k - 1, y) * (-k)
            return out + go(head, k, y)
        dy = y.d_coeffs()
        if any(j > 0 for j in dy):
            rest = ConformalElement.from_d_coeffs(
                {j - 1: m for j, m in dy.items() if j > 0}, size
            )
            head = ConformalElement.from_d_coeffs(
                {0: dy[0]} if 0 in dy else {}, size
            )
            out = go(x, k, rest).d_mul()
            if k > 0:
                out = out + go(x, k - 1, rest) * k
            return out + go(x, k, head)
        return ConformalElement.from_d_coeffs(
            base(dx.get(0, PolyMatrix.zeros(size, "v")), k,
                 dy.get(0, PolyMatrix.zeros(size, "v"))),
            size,
        )

    return go(a, n, b)


def _degree_or_zero(d: int | None) -> int:
    return 0 if d is None else d


def locality_bound(a: ConformalElement, b: ConformalElement) -> int:
    """An upper bound for the locality of the pair (valid for both kinds)."""
    return (
        _degree_or_zero(a.deg_d)
        + _degree_or_zero(b.deg_d)
        + _degree_or_zero(a.deg_v)
        + _degree_or_zero(b.deg_v)
        + 1
    )


def locality(
    a: ConformalElement, b: ConformalElement, circ: bool = False
) -> int:
    """Least L with a (n) b = 0 for all n >= L.

    Zero when every product vanishes (in particular if a or b is zero).
    For the default products L <= deg_D a + deg_D b + deg_v b + 1.
    """
    if a.n != b.n:
        raise DimensionMismatchError(f"sizes {a.n} and {b.n}")
    for n in range(locality_bound(a, b) - 1, -1, -1):
        if not nproduct(a, n, b, circ=circ).is_zero():
            return n + 1
    return 0


def bracket(a: ConformalElement, n: int, b: ConformalElement) -> ConformalElement:
    """The commutator-type product over the default n-products:

    [a (n) b] = a (n) b - sum_s (-1)^(n+s) D^s/s! (b (n+s) a).
    """
    out = nproduct(a, n, b)
    limit = locality(b, a)
    d_pow = ConformalElement.identity(a.n)
    for s in range(limit - n):
        term = nproduct(b, n + s, a) * d_pow * Fraction(1, factorial(s))
        if (n + s) % 2 == 0:
            term = -term
        out = out + term
        d_pow = d_pow.d_mul()
    return out


def phi(a: ConformalElement) -> ConformalElement:
    """Base change v -> v + D; carries the default products to the circ ones."""
    t = BiPoly.v() + BiPoly.D()
    return a.map(lambda e: e.subst_v(t))


def phi_inv(a: ConformalElement) -> ConformalElement:
    t = BiPoly.v() - BiPoly.D()
    return a.map(lambda e: e.subst_v(t))


def sigma(a: ConformalElement) -> ConformalElement:
    """The involution: transpose composed with (D, v) -> (-D, v - D)."""
    t = BiPoly.v() - BiPoly.D()
    return a.transpose().map(lambda e: e.flip_d().subst_v(t))


def check_associativity(
    a: ConformalElement,
    b: ConformalElement,
    c: ConformalElement,
    n_max: int,
    m_max: int,
    circ: bool = False,
) -> dict:
    """Check both rewriting identities of the product family:

      (a(n) b)(m) c = sum_s (-1)^s C(n,s) a(n-s) (b(m+s) c)
      a(n) (b(m) c) = sum_s C(n,s) (a(n-s) b)(m+s) c

    for all n <= n_max, m <= m_max. Returns {ok, cases, failures}.
    """
    failures = []
    cases = 0
    zero = ConformalElement.zero(a.n)
    for n in range(n_max + 1):
        for m in range(m_max + 1):
            cases += 2
            lhs = nproduct(nproduct(a, n, b, circ), m, c, circ)
            rhs = zero
            for s in range(n + 1):
                t = nproduct(a, n - s, nproduct(b, m + s, c, circ), circ)
                t = t * comb(n, s)
                rhs = rhs + (-t if s % 2 else t)
            if lhs != rhs:
                failures.append({"identity": "left-expansion", "n": n, "m": m})
            lhs = nproduct(a, n, nproduct(b, m, c, circ), circ)
            rhs = zero
            for s in range(n + 1):
                t = nproduct(nproduct(a, n - s, b, circ), m + s, c, circ)
                rhs = rhs + t * comb(n, s)
            if lhs != rhs:
                failures.append({"identity": "right-expansion", "n": n, "m": m})
    return {"cases": cases, "failures": failures, "ok": not failures}


def check_lie(
    a: ConformalElement,
    b: ConformalElement,
    c: ConformalElement,
    n_max: int,
    m_max: int,
) -> dict:
    """Check skew-symmetry and the Jacobi-type expansion for the bracket."""
    failures = []
    cases = 0
    zero = ConformalElement.zero(a.n)
    for n in range(n_max + 1):
        cases += 1
        lhs = bracket(a, n, b)
        rhs = zero
        # brackets of the reversed pair vanish once both raw localities pass
        limit = max(locality(b, a), locality(a, b))
        d_pow = ConformalElement.identity(a.n)
        for s in range(max(limit - n, 0)):
            t = bracket(b, n + s, a) * d_pow * Fraction(1, factorial(s))
            if (n + s) % 2 == 0:
                t = -t
            rhs = rhs + t
            d_pow = d_pow.d_mul()
        if lhs != rhs:
            failures.append({"identity": "skew", "n": n})
    for n in range(n_max + 1):
        for m in range(m_max + 1):
            cases += 1
            lhs = bracket(a, n, bracket(b, m, c)) - bracket(b, m, bracket(a, n, c))
            rhs = zero
            for s in range(n + 1):
                rhs = rhs + bracket(bracket(a, n - s, b), m + s, c) * comb(n, s)
            if lhs != rhs:
                failures.append({"identity": "jacobi", "n": n, "m": m})
    return {"cases": cases, "failures": failures, "ok": not failures}
