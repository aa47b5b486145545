"""Exact polynomial kernel over the rationals.

Sparse univariate and bivariate polynomials with ``fractions.Fraction``
coefficients, square polynomial matrices, and the two matrix normal forms
everything else is built on: the Smith form with unimodular witnesses over
k[x], and a reduced echelon (Hermite) basis for finitely generated
submodules of k[D]^L.

All values are immutable after construction; every operation returns a new
object. Zero coefficients are never stored, so structural equality is
semantic equality.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import DimensionMismatchError, NotUnimodularError, SingularMatrixError

Rational = Fraction

Scalar = int | Fraction


def rat(x: Scalar | str) -> Fraction:
    """Coerce ints, Fractions, and strings like ``"-3/4"`` to a rational."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot interpret {x!r} as a rational")


def _term_str(coeff: Fraction, mono: str) -> str:
    if not mono:
        return str(coeff)
    if coeff == 1:
        return mono
    if coeff == -1:
        return f"-{mono}"
    return f"{coeff}*{mono}"


def _join_terms(terms: list[str]) -> str:
    if not terms:
        return "0"
    out = terms[0]
    for t in terms[1:]:
        out += f" - {t[1:]}" if t.startswith("-") else f" + {t}"
    return out


class UniPoly:
    """Sparse polynomial in one variable over the rationals.

    The variable tag keeps k[D]- and k[v]-valued data from being mixed
    silently: binary operations require equal tags.
    """

    __slots__ = ("var", "_c")

    def __init__(
        self,
        coeffs: Mapping[int, Scalar] | Iterable[tuple[int, Scalar]] = (),
        var: str = "x",
    ):
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        acc: dict[int, Fraction] = {}
        for d, a in items:
            d = int(d)
            if d < 0:
                raise ValueError("polynomial degrees must be nonnegative")
            a = Fraction(a)
            if a or d in acc:
                acc[d] = acc.get(d, Fraction(0)) + a
        self.var = var
        self._c = {d: a for d, a in acc.items() if a}

    @classmethod
    def zero(cls, var: str) -> "UniPoly":
        return cls((), var)

    @classmethod
    def const(cls, a: Scalar, var: str) -> "UniPoly":
        return cls({0: a}, var)

    @classmethod
    def gen(cls, var: str) -> "UniPoly":
        """The variable itself."""
        return cls({1: 1}, var)

    @classmethod
    def monomial(cls, deg: int, coeff: Scalar, var: str) -> "UniPoly":
        return cls({deg: coeff}, var)

    def items(self) -> list[tuple[int, Fraction]]:
        return sorted(self._c.items())

    def coeff(self, deg: int) -> Fraction:
        return self._c.get(deg, Fraction(0))

    @property
    def degree(self) -> int | None:
        """Degree, or None for the zero polynomial."""
        return max(self._c) if self._c else None

    @property
    def lead(self) -> Fraction:
        return self._c[max(self._c)] if self._c else Fraction(0)

    def is_zero(self) -> bool:
        return not self._c

    def __bool__(self) -> bool:
        return bool(self._c)

    def _require_same_var(self, other: "UniPoly") -> None:
        if self.var != other.var:
            raise ValueError(f"variable mismatch: {self.var!r} vs {other.var!r}")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, UniPoly):
            return NotImplemented
        return self.var == other.var and self._c == other._c

    def __hash__(self) -> int:
        return hash((self.var, tuple(self.items())))

    def __add__(self, other: "UniPoly") -> "UniPoly":
        if not isinstance(other, UniPoly):
            return NotImplemented
        self._require_same_var(other)
        c = dict(self._c)
        for d, a in other._c.items():
            c[d] = c.get(d, Fraction(0)) + a
        return UniPoly(c, self.var)

    def __sub__(self, other: "UniPoly") -> "UniPoly":
        return self + (-other)

    def __neg__(self) -> "UniPoly":
        return UniPoly({d: -a for d, a in self._c.items()}, self.var)

    def __mul__(self, other: "UniPoly | Scalar") -> "UniPoly":
        if isinstance(other, UniPoly):
            self._require_same_var(other)
            c: dict[int, Fraction] = {}
            for d1, a1 in self._c.items():
                for d2, a2 in other._c.items():
                    d = d1 + d2
                    c[d] = c.get(d, Fraction(0)) + a1 * a2
            return UniPoly(c, self.var)
        if isinstance(other, (int, Fraction)):
            return UniPoly({d: a * other for d, a in self._c.items()}, self.var)
        return NotImplemented

    def __rmul__(self, other: Scalar) -> "UniPoly":
        return self.__mul__(other)

    def __pow__(self, n: int) -> "UniPoly":
        if n < 0:
            raise ValueError("negative power")
        out = UniPoly.const(1, self.var)
        for _ in range(n):
            out = out * self
        return out

    def __divmod__(self, g: "UniPoly") -> tuple["UniPoly", "UniPoly"]:
        self._require_same_var(g)
        if not g:
            raise ZeroDivisionError("polynomial division by zero")
        dg, lg = g.degree, g.lead
        q: dict[int, Fraction] = {}
        r = dict(self._c)
        while r and max(r) >= dg:
            dr = max(r)
            c = r[dr] / lg
            k = dr - dg
            q[k] = c
            for d, a in g._c.items():
                nd = d + k
                nv = r.get(nd, Fraction(0)) - c * a
                if nv:
                    r[nd] = nv
                else:
                    r.pop(nd, None)
        return UniPoly(q, self.var), UniPoly(r, self.var)

    def __floordiv__(self, g: "UniPoly") -> "UniPoly":
        return divmod(self, g)[0]

    def __mod__(self, g: "UniPoly") -> "UniPoly":
        return divmod(self, g)[1]

    def exact_div(self, g: "UniPoly") -> "UniPoly | None":
        """Quotient self/g when the division is exact, else None."""
        q, r = divmod(self, g)
        return q if not r else None

    def monic(self) -> "UniPoly":
        return self * (1 / self.lead) if self else self

    def derivative(self) -> "UniPoly":
        return UniPoly({d - 1: d * a for d, a in self._c.items() if d}, self.var)

    def shift(self, alpha: Scalar) -> "UniPoly":
        """Substitute x -> x + alpha."""
        alpha = Fraction(alpha)
        if not alpha:
            return self
        from math import comb

        c: dict[int, Fraction] = {}
        for d, a in self._c.items():
            for k in range(d + 1):
                c[k] = c.get(k, Fraction(0)) + a * comb(d, k) * alpha ** (d - k)
        return UniPoly(c, self.var)

    def compose(self, inner: "UniPoly") -> "UniPoly":
        """Substitute the variable by `inner` (result takes inner's tag)."""
        degs = sorted(self._c, reverse=True)  # Horner over descending degrees
        if not degs:
            return UniPoly.zero(inner.var)
        prev = degs[0]
        out = UniPoly.const(self._c[prev], inner.var)
        for d in degs[1:]:
            out = out * inner ** (prev - d) + UniPoly.const(self._c[d], inner.var)
            prev = d
        return out * inner**prev

    def retag(self, var: str) -> "UniPoly":
        return self if var == self.var else UniPoly(self._c, var)

    def zero_like(self) -> "UniPoly":
        return UniPoly.zero(self.var)

    def one_like(self) -> "UniPoly":
        return UniPoly.const(1, self.var)

    def __call__(self, x: Scalar) -> Fraction:
        x = Fraction(x)
        return sum((a * x**d for d, a in self._c.items()), Fraction(0))

    def __str__(self) -> str:
        terms = []
        for d, a in sorted(self._c.items(), reverse=True):
            mono = "" if d == 0 else (self.var if d == 1 else f"{self.var}^{d}")
            terms.append(_term_str(a, mono))
        return _join_terms(terms)

    def __repr__(self) -> str:
        return f"UniPoly[{self.var}]({self})"


def poly_ext_gcd(a: UniPoly, b: UniPoly) -> tuple[UniPoly, UniPoly, UniPoly]:
    """Monic gcd g with a Bezout pair (u, w): u*a + w*b = g."""
    a._require_same_var(b)
    var = a.var
    r0, r1 = a, b
    u0, u1 = UniPoly.const(1, var), UniPoly.zero(var)
    w0, w1 = UniPoly.zero(var), UniPoly.const(1, var)
    while r1:
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        u0, u1 = u1, u0 - q * u1
        w0, w1 = w1, w0 - q * w1
    if r0:
        c = 1 / r0.lead
        r0, u0, w0 = r0 * c, u0 * c, w0 * c
    return r0, u0, w0


class BiPoly:
    """Sparse commutative polynomial in the pair (D, v) over the rationals.

    Monomial keys are (degree in D, degree in v).
    """

    __slots__ = ("_c",)

    def __init__(
        self,
        coeffs: Mapping[tuple[int, int], Scalar]
        | Iterable[tuple[int, int, Scalar]] = (),
    ):
        acc: dict[tuple[int, int], Fraction] = {}
        if isinstance(coeffs, Mapping):
            entries: Iterable[tuple[int, int, Scalar]] = (
                (i, j, a) for (i, j), a in coeffs.items()
            )
        else:
            entries = coeffs
        for i, j, a in entries:
            i, j = int(i), int(j)
            if i < 0 or j < 0:
                raise ValueError("polynomial degrees must be nonnegative")
            a = Fraction(a)
            key = (i, j)
            if a or key in acc:
                acc[key] = acc.get(key, Fraction(0)) + a
        self._c = {k: a for k, a in acc.items() if a}

    @classmethod
    def zero(cls) -> "BiPoly":
        return cls()

    @classmethod
    def const(cls, a: Scalar) -> "BiPoly":
        return cls([(0, 0, a)])

    @classmethod
    def D(cls, power: int = 1, coeff: Scalar = 1) -> "BiPoly":
        return cls([(power, 0, coeff)])

    @classmethod
    def v(cls, power: int = 1, coeff: Scalar = 1) -> "BiPoly":
        return cls([(0, power, coeff)])

    @classmethod
    def monomial(cls, deg_d: int, deg_v: int, coeff: Scalar) -> "BiPoly":
        return cls([(deg_d, deg_v, coeff)])

    @classmethod
    def from_uni(cls, p: UniPoly, axis: str) -> "BiPoly":
        """Lift a univariate polynomial onto the D- or v-axis."""
        if axis == "D":
            return cls([(d, 0, a) for d, a in p.items()])
        if axis == "v":
            return cls([(0, d, a) for d, a in p.items()])
        raise ValueError("axis must be 'D' or 'v'")

    def items(self) -> list[tuple[int, int, Fraction]]:
        return sorted((i, j, a) for (i, j), a in self._c.items())

    def coeff(self, deg_d: int, deg_v: int) -> Fraction:
        return self._c.get((deg_d, deg_v), Fraction(0))

    @property
    def deg_d(self) -> int | None:
        return max(i for i, _ in self._c) if self._c else None

    @property
    def deg_v(self) -> int | None:
        return max(j for _, j in self._c) if self._c else None

    def is_zero(self) -> bool:
        return not self._c

    def __bool__(self) -> bool:
        return bool(self._c)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BiPoly):
            return NotImplemented
        return self._c == other._c

    def __hash__(self) -> int:
        return hash(tuple(self.items()))

    def __add__(self, other: "BiPoly") -> "BiPoly":
        if not isinstance(other, BiPoly):
            return NotImplemented
        c = dict(self._c)
        for k, a in other._c.items():
            c[k] = c.get(k, Fraction(0)) + a
        return BiPoly(c)

    def __sub__(self, other: "BiPoly") -> "BiPoly":
        return self + (-other)

    def __neg__(self) -> "BiPoly":
        return BiPoly({k: -a for k, a in self._c.items()})

    def __mul__(self, other: "BiPoly | Scalar") -> "BiPoly":
        if isinstance(other, BiPoly):
            c: dict[tuple[int, int], Fraction] = {}
            for (i1, j1), a1 in self._c.items():
                for (i2, j2), a2 in other._c.items():
                    k = (i1 + i2, j1 + j2)
                    c[k] = c.get(k, Fraction(0)) + a1 * a2
            return BiPoly(c)
        if isinstance(other, (int, Fraction)):
            return BiPoly({k: a * other for k, a in self._c.items()})
        return NotImplemented

    def __rmul__(self, other: Scalar) -> "BiPoly":
        return self.__mul__(other)

    def __pow__(self, n: int) -> "BiPoly":
        if n < 0:
            raise ValueError("negative power")
        out = BiPoly.const(1)
        for _ in range(n):
            out = out * self
        return out

    def dv(self) -> "BiPoly":
        """Partial derivative in v."""
        return BiPoly([(i, j - 1, j * a) for (i, j), a in self._c.items() if j])

    def dd(self) -> "BiPoly":
        """Partial derivative in D."""
        return BiPoly([(i - 1, j, i * a) for (i, j), a in self._c.items() if i])

    def flip_d(self) -> "BiPoly":
        """Substitute D -> -D."""
        return BiPoly([(i, j, -a if i % 2 else a) for (i, j), a in self._c.items()])

    def shift_v(self, alpha: Scalar) -> "BiPoly":
        """Substitute v -> v + alpha."""
        alpha = Fraction(alpha)
        if not alpha:
            return self
        from math import comb

        out: dict[tuple[int, int], Fraction] = {}
        for (i, j), a in self._c.items():
            for k in range(j + 1):
                key = (i, k)
                out[key] = out.get(key, Fraction(0)) + a * comb(j, k) * alpha ** (j - k)
        return BiPoly(out)

    def subst_v(self, t: "BiPoly") -> "BiPoly":
        """Substitute v -> t(D, v)."""
        powers: dict[int, BiPoly] = {0: BiPoly.const(1)}
        out = BiPoly.zero()
        for (i, j), a in self._c.items():
            if j not in powers:
                m = max(powers)
                acc = powers[m]
                for e in range(m + 1, j + 1):
                    acc = acc * t
                    powers[e] = acc
            out = out + BiPoly.monomial(i, 0, a) * powers[j]
        return out

    def subst_d(self, t: "BiPoly") -> "BiPoly":
        """Substitute D -> t(D, v)."""
        powers: dict[int, BiPoly] = {0: BiPoly.const(1)}
        out = BiPoly.zero()
        for (i, j), a in self._c.items():
            if i not in powers:
                m = max(powers)
                acc = powers[m]
                for e in range(m + 1, i + 1):
                    acc = acc * t
                    powers[e] = acc
            out = out + BiPoly.monomial(0, j, a) * powers[i]
        return out

    def eval_d0(self) -> UniPoly:
        """Specialize D = 0, leaving a polynomial in v."""
        return UniPoly({j: a for (i, j), a in self._c.items() if i == 0}, "v")

    def d_coeffs(self) -> dict[int, UniPoly]:
        """Decompose as sum_i D^i * A_i(v); returns {i: A_i}."""
        out: dict[int, dict[int, Fraction]] = {}
        for (i, j), a in self._c.items():
            out.setdefault(i, {})[j] = a
        return {i: UniPoly(c, "v") for i, c in out.items()}

    def v_coeffs(self) -> dict[int, UniPoly]:
        """Decompose as sum_j B_j(D) * v^j; returns {j: B_j}."""
        out: dict[int, dict[int, Fraction]] = {}
        for (i, j), a in self._c.items():
            out.setdefault(j, {})[i] = a
        return {j: UniPoly(c, "D") for j, c in out.items()}

    def to_uni(self, axis: str) -> UniPoly:
        """Read off a polynomial supported on one axis (error if mixed)."""
        if axis == "D":
            if any(j for (_, j) in self._c):
                raise ValueError("polynomial involves v")
            return UniPoly({i: a for (i, _), a in self._c.items()}, "D")
        if axis == "v":
            if any(i for (i, _) in self._c):
                raise ValueError("polynomial involves D")
            return UniPoly({j: a for (_, j), a in self._c.items()}, "v")
        raise ValueError("axis must be 'D' or 'v'")

    def exact_div(self, g: "BiPoly") -> "BiPoly | None":
        """Quotient self/g when self is a multiple of g, else None.

        Single-divisor division ordered lexicographically with D > v; the
        first term that g's leading term cannot divide certifies failure.
        """
        if not g:
            raise ZeroDivisionError("polynomial division by zero")
        gl = max(g._c)
        glc = g._c[gl]
        q: dict[tuple[int, int], Fraction] = {}
        r = dict(self._c)
        while r:
            fl = max(r)
            if fl[0] < gl[0] or fl[1] < gl[1]:
                return None
            mono = (fl[0] - gl[0], fl[1] - gl[1])
            c = r[fl] / glc
            q[mono] = q.get(mono, Fraction(0)) + c
            for (i, j), a in g._c.items():
                k = (i + mono[0], j + mono[1])
                nv = r.get(k, Fraction(0)) - c * a
                if nv:
                    r[k] = nv
                else:
                    r.pop(k, None)
        return BiPoly(q)

    def zero_like(self) -> "BiPoly":
        return BiPoly.zero()

    def one_like(self) -> "BiPoly":
        return BiPoly.const(1)

    def __str__(self) -> str:
        terms = []
        for i, j, a in sorted(self.items(), key=lambda t: (-(t[0] + t[1]), -t[0])):
            parts = []
            if i:
                parts.append("D" if i == 1 else f"D^{i}")
            if j:
                parts.append("v" if j == 1 else f"v^{j}")
            terms.append(_term_str(a, "*".join(parts)))
        return _join_terms(terms)

    def __repr__(self) -> str:
        return f"BiPoly({self})"


def _perm_sign(perm: Sequence[int]) -> int:
    inv = sum(
        1
        for a, b in itertools.combinations(range(len(perm)), 2)
        if perm[a] > perm[b]
    )
    return -1 if inv % 2 else 1


def _gen_matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list]:
    n = len(a)
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            acc = a[i][0] * b[0][j]
            for k in range(1, n):
                acc = acc + a[i][k] * b[k][j]
            row.append(acc)
        out.append(row)
    return out


def _gen_det(rows: Sequence[Sequence]):
    n = len(rows)
    acc = rows[0][0].zero_like()
    for perm in itertools.permutations(range(n)):
        term = rows[0][perm[0]]
        for i in range(1, n):
            term = term * rows[i][perm[i]]
        acc = acc + (term if _perm_sign(perm) > 0 else -term)
    return acc


def _gen_adjugate(rows: Sequence[Sequence]) -> list[list]:
    n = len(rows)
    if n == 1:
        return [[rows[0][0].one_like()]]
    adj = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [
                [rows[r][c] for c in range(n) if c != j]
                for r in range(n)
                if r != i
            ]
            cof = _gen_det(minor)
            adj[j][i] = cof if (i + j) % 2 == 0 else -cof
    return adj


class PolyMatrix:
    """Square matrix over k[var]."""

    __slots__ = ("n", "var", "rows")

    def __init__(
        self,
        rows: Sequence[Sequence[UniPoly | Scalar]],
        var: str | None = None,
    ):
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise DimensionMismatchError("matrix must be square")
        if var is None:
            for r in rows:
                for e in r:
                    if isinstance(e, UniPoly):
                        var = e.var
                        break
                if var is not None:
                    break
            if var is None:
                raise ValueError("cannot infer the variable tag")
        coerced = []
        for r in rows:
            row = []
            for e in r:
                if isinstance(e, UniPoly):
                    if e.var != var:
                        raise ValueError("mixed variable tags in matrix")
                    row.append(e)
                else:
                    row.append(UniPoly.const(e, var))
            coerced.append(tuple(row))
        self.n = n
        self.var = var
        self.rows = tuple(coerced)

    @classmethod
    def identity(cls, n: int, var: str) -> "PolyMatrix":
        return cls(
            [[1 if i == j else 0 for j in range(n)] for i in range(n)], var
        )

    @classmethod
    def zeros(cls, n: int, var: str) -> "PolyMatrix":
        return cls([[0] * n for _ in range(n)], var)

    @classmethod
    def diag(cls, entries: Sequence[UniPoly | Scalar], var: str) -> "PolyMatrix":
        n = len(entries)
        return cls(
            [[entries[i] if i == j else 0 for j in range(n)] for i in range(n)],
            var,
        )

    def entry(self, i: int, j: int) -> UniPoly:
        return self.rows[i][j]

    def _require_compatible(self, other: "PolyMatrix") -> None:
        if self.n != other.n:
            raise DimensionMismatchError(f"sizes {self.n} and {other.n}")
        if self.var != other.var:
            raise ValueError("variable tags differ")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        return self.var == other.var and self.rows == other.rows

    def __hash__(self) -> int:
        return hash((self.var, self.rows))

    def __add__(self, other: "PolyMatrix") -> "PolyMatrix":
        self._require_compatible(other)
        return PolyMatrix(
            [
                [self.rows[i][j] + other.rows[i][j] for j in range(self.n)]
                for i in range(self.n)
            ],
            self.var,
        )

    def __sub__(self, other: "PolyMatrix") -> "PolyMatrix":
        return self + (-other)

    def __neg__(self) -> "PolyMatrix":
        return PolyMatrix([[-e for e in r] for r in self.rows], self.var)

    def __mul__(self, other: "PolyMatrix | UniPoly | Scalar") -> "PolyMatrix":
        if isinstance(other, PolyMatrix):
            self._require_compatible(other)
            return PolyMatrix(_gen_matmul(self.rows, other.rows), self.var)
        if isinstance(other, (UniPoly, int, Fraction)):
            return PolyMatrix(
                [[e * other for e in r] for r in self.rows], self.var
            )
        return NotImplemented

    def __rmul__(self, other: "UniPoly | Scalar") -> "PolyMatrix":
        return self.__mul__(other)

    def transpose(self) -> "PolyMatrix":
        return PolyMatrix(
            [[self.rows[j][i] for j in range(self.n)] for i in range(self.n)],
            self.var,
        )

    def det(self) -> UniPoly:
        return _gen_det(self.rows)

    def adjugate(self) -> "PolyMatrix":
        return PolyMatrix(_gen_adjugate(self.rows), self.var)

    def map(self, f) -> "PolyMatrix":
        return PolyMatrix([[f(e) for e in r] for r in self.rows], self.var)

    def shift(self, alpha: Scalar) -> "PolyMatrix":
        """Substitute x -> x + alpha entrywise."""
        return self.map(lambda e: e.shift(alpha))

    def retag(self, var: str) -> "PolyMatrix":
        return PolyMatrix([[e.retag(var) for e in r] for r in self.rows], var)

    def is_zero(self) -> bool:
        return all(not e for r in self.rows for e in r)

    def __str__(self) -> str:
        return "[" + "; ".join(", ".join(str(e) for e in r) for r in self.rows) + "]"

    def __repr__(self) -> str:
        return f"PolyMatrix[{self.var}]({self})"


def unimodular_inverse(q: PolyMatrix) -> PolyMatrix:
    """Inverse of a matrix invertible over the polynomial ring itself.

    Raises NotUnimodularError when det is zero or non-constant.
    """
    d = q.det()
    if d.is_zero() or d.degree != 0:
        raise NotUnimodularError(f"determinant {d} is not a nonzero constant")
    c = 1 / d.coeff(0)
    return q.adjugate() * c


def divide_right_exact(
    x: Sequence[Sequence], q: Sequence[Sequence]
) -> list[list] | None:
    """Solve M * Q = X exactly over the polynomial ring.

    X and Q are square nested sequences of UniPoly or BiPoly entries (Q may
    have been substituted into the same ring as X by the caller). Returns M,
    or None when X is not a right multiple of Q. Raises SingularMatrixError
    when det Q = 0.
    """
    if len(x) != len(q):
        raise DimensionMismatchError(f"sizes {len(x)} and {len(q)}")
    d = _gen_det(q)
    if not d:
        raise SingularMatrixError("divisor matrix has zero determinant")
    y = _gen_matmul(x, _gen_adjugate(q))
    out = []
    for row in y:
        orow = []
        for e in row:
            m = e.exact_div(d)
            if m is None:
                return None
            orow.append(m)
        out.append(orow)
    return out


def divide_left_exact(
    x: Sequence[Sequence], q: Sequence[Sequence]
) -> list[list] | None:
    """Solve Q * M = X exactly over the polynomial ring (see divide_right_exact)."""
    if len(x) != len(q):
        raise DimensionMismatchError(f"sizes {len(x)} and {len(q)}")
    d = _gen_det(q)
    if not d:
        raise SingularMatrixError("divisor matrix has zero determinant")
    y = _gen_matmul(_gen_adjugate(q), x)
    out = []
    for row in y:
        orow = []
        for e in row:
            m = e.exact_div(d)
            if m is None:
                return None
            orow.append(m)
        out.append(orow)
    return out


def smith_normal_form(
    q: PolyMatrix,
) -> tuple[PolyMatrix, PolyMatrix, PolyMatrix]:
    """Smith form over k[var]: returns (T, D, U) with T*Q*U = D.

    T and U are unimodular, D is diagonal with monic entries, each diagonal
    entry divides the next, and zero entries come last. Pivots are chosen by
    minimal degree with ties broken by lowest (row, column).
    """
    n = q.n
    var = q.var
    s = [list(r) for r in q.rows]
    t = [list(r) for r in PolyMatrix.identity(n, var).rows]
    u = [list(r) for r in PolyMatrix.identity(n, var).rows]

    def row_swap(i, j):
        s[i], s[j] = s[j], s[i]
        t[i], t[j] = t[j], t[i]

    def col_swap(i, j):
        for r in s:
            r[i], r[j] = r[j], r[i]
        for r in u:
            r[i], r[j] = r[j], r[i]

    def row_addmul(i, j, f):
        # row_i += f * row_j
        s[i] = [a + f * b for a, b in zip(s[i], s[j])]
        t[i] = [a + f * b for a, b in zip(t[i], t[j])]

    def col_addmul(i, j, f):
        # col_i += f * col_j
        for r in s:
            r[i] = r[i] + f * r[j]
        for r in u:
            r[i] = r[i] + f * r[j]

    def row_scale(i, c):
        s[i] = [a * c for a in s[i]]
        t[i] = [a * c for a in t[i]]

    for k in range(n):
        while True:
            pivot = None
            for i in range(k, n):
                for j in range(k, n):
                    e = s[i][j]
                    if e:
                        key = (e.degree, i, j)
                        if pivot is None or key < pivot:
                            pivot = key
            if pivot is None:
                break
            _, pi, pj = pivot
            if pi != k:
                row_swap(k, pi)
            if pj != k:
                col_swap(k, pj)
            dirty = False
            for i in range(k + 1, n):
                if s[i][k]:
                    f = s[i][k] // s[k][k]
                    if f:
                        row_addmul(i, k, -f)
                    if s[i][k]:
                        dirty = True
            for j in range(k + 1, n):
                if s[k][j]:
                    f = s[k][j] // s[k][k]
                    if f:
                        col_addmul(j, k, -f)
                    if s[k][j]:
                        dirty = True
            if dirty:
                continue
            # pivot must divide the remaining block for the divisibility chain
            bad = None
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    if s[i][j] and (s[i][j] % s[k][k]):
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is not None:
                row_addmul(k, bad, UniPoly.const(1, var))
                continue
            break
        if s[k][k]:
            lc = s[k][k].lead
            if lc != 1:
                row_scale(k, Fraction(1) / lc)

    return PolyMatrix(t, var), PolyMatrix(s, var), PolyMatrix(u, var)


class HSubmoduleBasis:
    """Canonical basis of a finitely generated submodule of k[D]^L.

    Rows are in echelon form: pivot coordinates strictly increase, pivot
    entries are monic, and entries above each pivot are reduced modulo it.
    The form is unique, so equality of bases is equality of submodules.
    """

    __slots__ = ("ncols", "rows", "pivots")

    def __init__(
        self,
        rows: Sequence[Sequence[UniPoly]],
        pivots: Sequence[int],
        ncols: int,
    ):
        self.rows = tuple(tuple(r) for r in rows)
        self.pivots = tuple(pivots)
        self.ncols = ncols

    @property
    def rank(self) -> int:
        return len(self.rows)

    def member(self, vec: Sequence[UniPoly]) -> bool:
        """Does vec lie in the row span over k[D]?"""
        if len(vec) != self.ncols:
            raise DimensionMismatchError(
                f"vector has {len(vec)} coordinates, basis has {self.ncols}"
            )
        work = list(vec)
        for row, pos in zip(self.rows, self.pivots):
            if work[pos]:
                f, r = divmod(work[pos], row[pos])
                if r:
                    return False
                work = [a - f * b for a, b in zip(work, row)]
        return not any(work)

    def __iter__(self) -> Iterator[tuple[UniPoly, ...]]:
        return iter(self.rows)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, HSubmoduleBasis):
            return NotImplemented
        return (
            self.ncols == other.ncols
            and self.pivots == other.pivots
            and self.rows == other.rows
        )

    def __hash__(self) -> int:
        return hash((self.ncols, self.pivots, self.rows))

    def __repr__(self) -> str:
        rows = "; ".join(
            ", ".join(str(e) for e in r) for r in self.rows
        )
        return f"HSubmoduleBasis(rank={self.rank}, ncols={self.ncols}, [{rows}])"


def hermite_reduce(
    rows: Iterable[Sequence[UniPoly]], ncols: int | None = None
) -> HSubmoduleBasis:
    """Echelonize generators of a submodule of k[D]^L into canonical form."""
    work = [list(r) for r in rows]
    if ncols is None:
        if not work:
            raise ValueError("cannot infer coordinate count from no rows")
        ncols = len(work[0])
    if any(len(r) != ncols for r in work):
        raise DimensionMismatchError("rows of unequal length")

    pivots: dict[int, list[UniPoly]] = {}
    queue = [r for r in work if any(r)]
    while queue:
        r = queue.pop()
        while True:
            pos = next((i for i, e in enumerate(r) if e), None)
            if pos is None:
                break
            if pos not in pivots:
                pivots[pos] = r
                break
            b = pivots[pos]
            beta, rho = b[pos], r[pos]
            f, rem = divmod(rho, beta)
            if not rem:
                r = [a - f * c for a, c in zip(r, b)]
                continue
            g, uu, ww = poly_ext_gcd(beta, rho)
            nb = [uu * a + ww * c for a, c in zip(b, r)]
            cb = rho // g
            cr = beta // g
            nr = [cb * a - cr * c for a, c in zip(b, r)]
            pivots[pos] = nb
            r = nr

    order = sorted(pivots)
    for pos in order:
        row = pivots[pos]
        lc = row[pos].lead
        if lc != 1:
            inv = Fraction(1) / lc
            pivots[pos] = [e * inv for e in row]
    # reduce entries above later pivots; later rows are already canonical
    for idx in range(len(order) - 1, -1, -1):
        pos = order[idx]
        row = pivots[pos]
        for pos2 in order[idx + 1 :]:
            e = row[pos2]
            if e:
                f = e // pivots[pos2][pos2]
                if f:
                    row = [a - f * b for a, b in zip(row, pivots[pos2])]
        pivots[pos] = row

    return HSubmoduleBasis([pivots[p] for p in order], order, ncols)


def hsubmodule_member(vec: Sequence[UniPoly], basis: HSubmoduleBasis) -> bool:
    return basis.member(vec)
