"""Exact arithmetic: rationals, multivariate polynomials, Laurent polynomials
in ``t`` and dense rational matrices.

Rationals are :class:`fractions.Fraction` (plain ``int`` is accepted wherever a
rational is expected).  Nothing in this module ever rounds.
"""

from __future__ import annotations

import re
from fractions import Fraction
from itertools import combinations
from numbers import Rational as _RationalABC

from .errors import DimensionMismatch, NegativeExponent, OrderTooLarge, ParseError, SingularMatrix

Rational = Fraction

__all__ = [
    "Rational",
    "as_rational",
    "format_rational",
    "MultiPoly",
    "LaurentPoly",
    "laurent_limit_at_zero",
    "parse_laurent",
    "poly_is_zero",
    "poly_minors",
    "determinant",
    "RatMatrix",
    "nullspace_basis",
    "rref",
]


def as_rational(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, _RationalABC):
        return Fraction(value.numerator, value.denominator)
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def format_rational(value) -> str:
    q = as_rational(value)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def _is_scalar(x) -> bool:
    return isinstance(x, (int, Fraction)) and not isinstance(x, bool)


# --------------------------------------------------------------------------
# multivariate polynomials
# --------------------------------------------------------------------------


def _grlex_key(mono: tuple) -> tuple:
    return (len(mono), mono)


class MultiPoly:
    """Polynomial in named parameters with rational coefficients.

    A monomial is a sorted tuple of variable names with repetition, so
    ``x^2*y`` is ``("x", "x", "y")``.  Zero coefficients are never stored and
    the zero polynomial has no terms.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms=None):
        clean = {}
        if terms:
            for mono, coeff in dict(terms).items():
                if isinstance(mono, str):
                    mono = (mono,)
                mono = tuple(sorted(mono))
                c = clean.get(mono, 0) + as_rational(coeff)
                if c:
                    clean[mono] = c
                else:
                    clean.pop(mono, None)
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict) -> "MultiPoly":
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def var(cls, name: str) -> "MultiPoly":
        return cls._raw({(name,): 1})

    @classmethod
    def constant(cls, c) -> "MultiPoly":
        c = as_rational(c)
        return cls._raw({(): c} if c else {})

    @classmethod
    def zero(cls) -> "MultiPoly":
        return cls._raw({})

    # -- queries ----------------------------------------------------------
    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def variables(self) -> set[str]:
        return {v for mono in self._terms for v in mono}

    def total_degree(self) -> int:
        return max((len(m) for m in self._terms), default=-1)

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and () in self._terms)

    def constant_term(self) -> Fraction:
        return Fraction(self._terms.get((), 0))

    def coefficient(self, mono) -> Fraction:
        return Fraction(self._terms.get(tuple(sorted(mono)), 0))

    def sorted_terms(self) -> list[tuple[tuple, Fraction]]:
        """Terms in ascending graded lexicographic order."""
        return sorted(self._terms.items(), key=lambda kv: _grlex_key(kv[0]))

    def evaluate(self, assignment):
        """Substitute values (rationals or polynomials) for variables.

        Unassigned variables stay symbolic.
        """
        total = 0
        for mono, coeff in self._terms.items():
            term = coeff
            rest = []
            for v in mono:
                if v in assignment:
                    term = term * assignment[v]
                else:
                    rest.append(v)
            if rest:
                term = MultiPoly._raw({tuple(rest): 1}) * term
            total = total + term
        return total

    # -- arithmetic -------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, MultiPoly):
            return other
        if _is_scalar(other):
            return MultiPoly.constant(other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if not other._terms:
            return self
        if not self._terms:
            return other
        out = dict(self._terms)
        for mono, c in other._terms.items():
            v = out.get(mono, 0) + c
            if v:
                out[mono] = v
            else:
                out.pop(mono, None)
        return MultiPoly._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._raw({m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if _is_scalar(other):
            if not other:
                return MultiPoly._raw({})
            return MultiPoly._raw({m: c * other for m, c in self._terms.items()})
        if not isinstance(other, MultiPoly):
            return NotImplemented
        out: dict = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                if not m1:
                    key = m2
                elif not m2:
                    key = m1
                else:
                    key = tuple(sorted(m1 + m2))
                v = out.get(key, 0) + c1 * c2
                if v:
                    out[key] = v
                else:
                    out.pop(key, None)
        return MultiPoly._raw(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not polynomials")
        result = MultiPoly.constant(1)
        for _ in range(k):
            result = result * self
        return result

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __str__(self):
        if not self._terms:
            return "0"
        pieces = []
        for mono, coeff in self.sorted_terms():
            factors = []
            for v in dict.fromkeys(mono):
                e = mono.count(v)
                factors.append(v if e == 1 else f"{v}^{e}")
            body = "*".join(factors)
            mag = abs(coeff)
            if not body:
                text = format_rational(mag)
            elif mag == 1:
                text = body
            else:
                text = f"{format_rational(mag)}*{body}"
            sign = "-" if coeff < 0 else "+"
            pieces.append((sign, text))
        first_sign, first = pieces[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, text in pieces[1:]:
            out += sign + text
        return out

    def __repr__(self):
        return f"MultiPoly({str(self)!r})"


def poly_is_zero(f) -> bool:
    """True iff every coefficient of ``f`` vanishes (scalars allowed)."""
    if isinstance(f, MultiPoly):
        return f.is_zero()
    return not f


# --------------------------------------------------------------------------
# Laurent polynomials in t
# --------------------------------------------------------------------------


class LaurentPoly:
    """Finite sum of ``c * t^k`` with integer ``k`` of either sign."""

    __slots__ = ("_terms",)

    def __init__(self, terms=None):
        clean = {}
        if terms:
            for k, c in dict(terms).items():
                c = as_rational(c)
                if c:
                    clean[int(k)] = clean.get(int(k), 0) + c
                    if not clean[int(k)]:
                        del clean[int(k)]
        self._terms = clean

    @classmethod
    def _raw(cls, terms: dict) -> "LaurentPoly":
        obj = cls.__new__(cls)
        obj._terms = terms
        return obj

    @classmethod
    def monomial(cls, coeff, exponent: int) -> "LaurentPoly":
        coeff = as_rational(coeff)
        return cls._raw({int(exponent): coeff} if coeff else {})

    @classmethod
    def constant(cls, c) -> "LaurentPoly":
        return cls.monomial(c, 0)

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def min_degree(self):
        return min(self._terms) if self._terms else None

    def max_degree(self):
        return max(self._terms) if self._terms else None

    def coefficient(self, k: int) -> Fraction:
        return Fraction(self._terms.get(k, 0))

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def is_constant(self) -> bool:
        return not self._terms or set(self._terms) == {0}

    def __add__(self, other):
        if _is_scalar(other):
            other = LaurentPoly.constant(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        out = dict(self._terms)
        for k, c in other._terms.items():
            v = out.get(k, 0) + c
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return LaurentPoly._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._raw({k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        if _is_scalar(other):
            other = LaurentPoly.constant(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if _is_scalar(other):
            if not other:
                return LaurentPoly._raw({})
            return LaurentPoly._raw({k: c * other for k, c in self._terms.items()})
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        out: dict = {}
        for k1, c1 in self._terms.items():
            for k2, c2 in other._terms.items():
                k = k1 + k2
                v = out.get(k, 0) + c1 * c2
                if v:
                    out[k] = v
                else:
                    out.pop(k, None)
        return LaurentPoly._raw(out)

    __rmul__ = __mul__

    def divide_by_monomial(self, coeff, exponent: int) -> "LaurentPoly":
        coeff = as_rational(coeff)
        if not coeff:
            raise ZeroDivisionError("division by the zero monomial")
        return LaurentPoly._raw({k - exponent: c / coeff for k, c in self._terms.items()})

    def __eq__(self, other):
        if _is_scalar(other):
            other = LaurentPoly.constant(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __str__(self):
        if not self._terms:
            return "0"
        out = ""
        for k in sorted(self._terms, reverse=True):
            c = self._terms[k]
            mag = format_rational(abs(c))
            if k == 0:
                body = mag
            else:
                body = f"{mag}*t^{k}"
            if not out:
                out = ("-" if c < 0 else "") + body
            else:
                out += ("-" if c < 0 else "+") + body
        return out

    def __repr__(self):
        return f"LaurentPoly({str(self)!r})"


def laurent_limit_at_zero(f) -> Fraction:
    """Value at ``t = 0`` of a Laurent polynomial without negative powers."""
    if _is_scalar(f):
        return as_rational(f)
    for k in f._terms:
        if k < 0:
            raise NegativeExponent(f"{f} has a pole at t=0 (exponent {k})")
    return Fraction(f._terms.get(0, 0))


_LAURENT_TERM = re.compile(
    r"""\s*(?P<sign>[+-])?\s*
        (?:
          (?P<coef>\d+(?:/\d+)?)\s*(?:\*\s*(?P<t1>t)(?:\s*\^\s*(?P<e1>[+-]?\d+))?)?
          |
          (?P<t2>t)(?:\s*\^\s*(?P<e2>[+-]?\d+))?
        )\s*""",
    re.VERBOSE,
)


def parse_laurent(text: str, *, line: int | None = None, column: int = 1) -> LaurentPoly:
    """Parse ``c``, ``c*t^k``, ``t^k`` terms joined by ``+``/``-``."""
    s = text
    pos = 0
    terms: dict = {}
    first = True
    if not s.strip():
        raise ParseError("empty Laurent expression", line, column)
    while pos < len(s):
        m = _LAURENT_TERM.match(s, pos)
        if not m or m.end() == pos or (not first and not m.group("sign")):
            raise ParseError(f"cannot parse Laurent term near {s[pos:]!r}", line, column + pos)
        if m.group("coef") is None and m.group("t2") is None:
            raise ParseError(f"dangling sign near {s[pos:]!r}", line, column + pos)
        sign = -1 if m.group("sign") == "-" else 1
        if m.group("coef") is not None:
            coef = Fraction(m.group("coef"))
            if m.group("t1"):
                exp = int(m.group("e1")) if m.group("e1") is not None else 1
            else:
                exp = 0
        else:
            coef = Fraction(1)
            exp = int(m.group("e2")) if m.group("e2") is not None else 1
        terms[exp] = terms.get(exp, 0) + sign * coef
        pos = m.end()
        first = False
    return LaurentPoly(terms)


# --------------------------------------------------------------------------
# determinants and minors over an arbitrary commutative ring
# --------------------------------------------------------------------------


def determinant(rows):
    """Determinant of a square matrix whose entries support ``+``/``*``.

    Laplace expansion along rows with memoisation on the remaining column
    set; fine for the small matrices used here.
    """
    size = len(rows)
    if size == 0:
        return 1
    if any(len(r) != size for r in rows):
        raise DimensionMismatch("determinant needs a square matrix")
    memo: dict = {}

    def expand(row: int, cols: tuple):
        if row == size:
            return 1
        key = cols
        if key in memo:
            return memo[key]
        total = 0
        for pos, c in enumerate(cols):
            entry = rows[row][c]
            if poly_is_zero(entry):
                continue
            sub = expand(row + 1, cols[:pos] + cols[pos + 1:])
            if poly_is_zero(sub):
                continue
            term = entry * sub
            total = total - term if pos % 2 else total + term
        memo[key] = total
        return total

    return expand(0, tuple(range(size)))


def poly_minors(matrix, order: int) -> list:
    """All ``order`` x ``order`` minors; row subsets outer, column subsets inner."""
    nrows = len(matrix)
    ncols = len(matrix[0]) if nrows else 0
    if order > min(nrows, ncols) or order < 1:
        raise OrderTooLarge(f"order {order} exceeds {nrows}x{ncols}")
    out = []
    for rsel in combinations(range(nrows), order):
        for csel in combinations(range(ncols), order):
            sub = [[matrix[r][c] for c in csel] for r in rsel]
            d = determinant(sub)
            out.append(d if isinstance(d, MultiPoly) else MultiPoly.constant(d))
    return out


# --------------------------------------------------------------------------
# rational linear algebra
# --------------------------------------------------------------------------


def rref(rows, ncols: int | None = None):
    """Reduced row echelon form of a list of rational rows.

    Returns ``(nonzero_rows, pivot_columns)``.
    """
    mat = [[as_rational(x) for x in r] for r in rows]
    if ncols is None:
        ncols = len(mat[0]) if mat else 0
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(mat)) if mat[i][c]), None)
        if pivot is None:
            continue
        mat[r], mat[pivot] = mat[pivot], mat[r]
        inv = 1 / mat[r][c]
        mat[r] = [x * inv for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c]:
                f = mat[i][c]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == len(mat):
            break
    return mat[:r], pivots


class RatMatrix:
    """Immutable dense matrix over the rationals."""

    __slots__ = ("rows", "ncols")

    def __init__(self, rows, ncols: int | None = None):
        data = tuple(tuple(as_rational(x) for x in r) for r in rows)
        if ncols is None:
            ncols = len(data[0]) if data else 0
        if any(len(r) != ncols for r in data):
            raise DimensionMismatch("ragged matrix")
        self.rows = data
        self.ncols = ncols

    @classmethod
    def identity(cls, m: int) -> "RatMatrix":
        return cls([[1 if i == j else 0 for j in range(m)] for i in range(m)])

    @classmethod
    def from_columns(cls, columns) -> "RatMatrix":
        columns = [list(c) for c in columns]
        m = len(columns[0]) if columns else 0
        return cls([[columns[j][i] for j in range(len(columns))] for i in range(m)])

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.rows), self.ncols)

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self.rows)

    def columns(self) -> list[tuple]:
        return [self.column(j) for j in range(self.ncols)]

    def transpose(self) -> "RatMatrix":
        return RatMatrix([self.column(j) for j in range(self.ncols)], len(self.rows))

    def __matmul__(self, other):
        if isinstance(other, RatMatrix):
            if self.ncols != other.nrows:
                raise DimensionMismatch(f"{self.shape} @ {other.shape}")
            cols = other.columns()
            return RatMatrix(
                [[sum((a * b for a, b in zip(r, c)), Fraction(0)) for c in cols] for r in self.rows],
                other.ncols,
            )
        vec = list(other)
        if len(vec) != self.ncols:
            raise DimensionMismatch(f"{self.shape} @ vector of length {len(vec)}")
        return tuple(sum((a * b for a, b in zip(r, vec)), Fraction(0)) for r in self.rows)

    def scaled(self, c) -> "RatMatrix":
        c = as_rational(c)
        return RatMatrix([[x * c for x in r] for r in self.rows], self.ncols)

    def rref(self):
        return rref(self.rows, self.ncols)

    def rank(self) -> int:
        return len(self.rref()[1])

    def determinant(self) -> Fraction:
        if self.nrows != self.ncols:
            raise DimensionMismatch("determinant of a non-square matrix")
        mat = [list(r) for r in self.rows]
        n = len(mat)
        det = Fraction(1)
        for c in range(n):
            pivot = next((i for i in range(c, n) if mat[i][c]), None)
            if pivot is None:
                return Fraction(0)
            if pivot != c:
                mat[c], mat[pivot] = mat[pivot], mat[c]
                det = -det
            det *= mat[c][c]
            for i in range(c + 1, n):
                if mat[i][c]:
                    f = mat[i][c] / mat[c][c]
                    mat[i] = [a - f * b for a, b in zip(mat[i], mat[c])]
        return det

    def inverse(self) -> "RatMatrix":
        n = self.nrows
        if n != self.ncols:
            raise DimensionMismatch("inverse of a non-square matrix")
        aug = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(self.rows)]
        reduced, pivots = rref(aug, 2 * n)
        if pivots[:n] != list(range(n)) or len(pivots) < n:
            raise SingularMatrix("matrix is not invertible")
        return RatMatrix([r[n:] for r in reduced[:n]], n)

    def is_invertible(self) -> bool:
        return self.nrows == self.ncols and self.rank() == self.nrows

    def nullspace(self) -> list[tuple]:
        return nullspace_basis(self)

    def __eq__(self, other):
        return isinstance(other, RatMatrix) and self.rows == other.rows and self.ncols == other.ncols

    def __hash__(self):
        return hash((self.rows, self.ncols))

    def __repr__(self):
        body = "; ".join(" ".join(format_rational(x) for x in r) for r in self.rows)
        return f"RatMatrix([{body}])"


def nullspace_basis(matrix) -> list[tuple]:
    """Echelon-normalised basis of ``{v : M v = 0}``.

    One vector per free column ``f``: it has ``1`` in position ``f``, zeros
    in the other free positions and is determined on the pivot positions.
    """
    if not isinstance(matrix, RatMatrix):
        matrix = RatMatrix(matrix)
    ncols = matrix.ncols
    reduced, pivots = matrix.rref()
    pivot_set = set(pivots)
    basis = []
    for f in range(ncols):
        if f in pivot_set:
            continue
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, pc in zip(reduced, pivots):
            v[pc] = -row[f]
        basis.append(tuple(v))
    return basis
