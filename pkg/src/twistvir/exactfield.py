"""Exact arithmetic in the cyclotomic field Q(w), w = exp(2*pi*i/n0).

Elements are stored as coefficient tuples of length phi(n0) in the power
basis 1, w, ..., w^(phi-1), reduced modulo the n0-th cyclotomic polynomial.
Rationals are gmpy2 ``mpq`` values, which are always in lowest terms with a
positive denominator.

The module also carries the dense linear algebra used everywhere else:
reduced row echelon form, rank, null spaces and fixed spaces, plus an
incremental sparse echelon for the large systems of the truncated oracle.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from gmpy2 import mpq

__all__ = [
    "CycloField",
    "FieldElem",
    "Matrix",
    "ScalarSyntaxError",
    "SparseEchelon",
    "arith",
    "cyclotomic_poly",
    "field",
    "fixed_space",
    "nullspace",
    "parse_scalar",
    "rank",
    "render_scalar",
]

_ZERO = mpq(0)
_ONE = mpq(1)


class ScalarSyntaxError(ValueError):
    pass


def _poly_divmod_int(num, den):
    # exact division of integer polynomials, den monic; coefficient lists low -> high
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for k in range(len(out) - 1, -1, -1):
        c = num[k + len(den) - 1]
        out[k] = c
        if c:
            for j, dj in enumerate(den):
                num[k + j] -= c * dj
    return out, num[: len(den) - 1]


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple[int, ...]:
    """Integer coefficients (low to high) of the n-th cyclotomic polynomial."""
    if n < 1:
        raise ValueError("cyclotomic index must be positive")
    poly = [-1] + [0] * (n - 1) + [1]  # x^n - 1
    for d in range(1, n):
        if n % d == 0:
            poly, rem = _poly_divmod_int(poly, cyclotomic_poly(d))
            assert not any(rem)
    return tuple(poly)


def _to_mpq(x) -> mpq:
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    return mpq(x)


class CycloField:
    """The field Q(w_{n0}).  Obtain instances through :func:`field`."""

    def __init__(self, n0: int):
        if n0 < 1:
            raise ValueError("field order must be >= 1")
        self.n0 = n0
        self.modulus = tuple(mpq(c) for c in cyclotomic_poly(n0))
        self.phi = len(self.modulus) - 1
        # powers w^k reduced, k = 0 .. n0-1
        powers = []
        cur = [_ZERO] * self.phi
        cur[0] = _ONE
        for _ in range(n0):
            powers.append(tuple(cur))
            cur = self._reduce([_ZERO] + cur)
        self._powers = tuple(powers)
        self.zero = FieldElem(self, (_ZERO,) * self.phi)
        self.one = FieldElem(self, (_ONE,) + (_ZERO,) * (self.phi - 1))

    def __repr__(self):
        return f"CycloField({self.n0})"

    def _reduce(self, coeffs: list) -> list:
        phi = self.phi
        mod = self.modulus
        r = list(coeffs)
        for k in range(len(r) - 1, phi - 1, -1):
            c = r[k]
            if c:
                base = k - phi
                for j in range(phi):
                    if mod[j]:
                        r[base + j] -= c * mod[j]
        r = r[:phi]
        if len(r) < phi:
            r += [_ZERO] * (phi - len(r))
        return r

    def __call__(self, x) -> "FieldElem":
        if isinstance(x, FieldElem):
            if x.F is self:
                return x
            if x.F.phi == 1:
                return self.rational(x.c[0])
            raise ValueError(f"cannot coerce element of {x.F} into {self}")
        if isinstance(x, str):
            return parse_scalar(x, self.n0)
        return self.rational(x)

    def rational(self, q) -> "FieldElem":
        return FieldElem(self, (_to_mpq(q),) + (_ZERO,) * (self.phi - 1))

    def w(self, k: int = 1) -> "FieldElem":
        """The power w^k of the primitive n0-th root of unity."""
        return FieldElem(self, self._powers[k % self.n0])

    def root_of_unity(self, n: int, k: int = 1) -> "FieldElem":
        """w_n^k, requires n | n0."""
        if self.n0 % n:
            raise ValueError(f"w_{n} does not lie in Q(w_{self.n0})")
        return self.w(k * (self.n0 // n))


@lru_cache(maxsize=None)
def field(n0: int) -> CycloField:
    return CycloField(n0)


class FieldElem:
    """Immutable element of Q(w_{n0})."""

    __slots__ = ("F", "c")

    def __init__(self, F: CycloField, coeffs: tuple):
        self.F = F
        self.c = coeffs

    # coercion -----------------------------------------------------------
    def _other(self, o):
        if isinstance(o, FieldElem):
            if o.F is self.F:
                return o.c
            return self.F(o).c
        if isinstance(o, (int, Fraction)) or type(o) is type(_ZERO):
            return (_to_mpq(o),) + (_ZERO,) * (self.F.phi - 1)
        return None

    # arithmetic ---------------------------------------------------------
    def __add__(self, o):
        oc = self._other(o)
        if oc is None:
            return NotImplemented
        return FieldElem(self.F, tuple(a + b for a, b in zip(self.c, oc)))

    __radd__ = __add__

    def __sub__(self, o):
        oc = self._other(o)
        if oc is None:
            return NotImplemented
        return FieldElem(self.F, tuple(a - b for a, b in zip(self.c, oc)))

    def __rsub__(self, o):
        oc = self._other(o)
        if oc is None:
            return NotImplemented
        return FieldElem(self.F, tuple(b - a for a, b in zip(self.c, oc)))

    def __neg__(self):
        return FieldElem(self.F, tuple(-a for a in self.c))

    def __mul__(self, o):
        F = self.F
        if F.phi == 1:
            if isinstance(o, FieldElem):
                return FieldElem(F, (self.c[0] * o.c[0],)) if o.F.phi == 1 else o * self
            oc = self._other(o)
            if oc is None:
                return NotImplemented
            return FieldElem(F, (self.c[0] * oc[0],))
        oc = self._other(o)
        if oc is None:
            return NotImplemented
        a, b = self.c, oc
        if not any(b[1:]):
            s = b[0]
            return FieldElem(F, tuple(x * s for x in a))
        prod = [_ZERO] * (2 * F.phi - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod[i + j] += x * y
        return FieldElem(F, tuple(F._reduce(prod)))

    __rmul__ = __mul__

    def inverse(self) -> "FieldElem":
        if not self:
            raise ZeroDivisionError("inverse of zero in cyclotomic field")
        F = self.F
        if F.phi == 1 or not any(self.c[1:]):
            return FieldElem(F, (1 / self.c[0],) + (_ZERO,) * (F.phi - 1))
        # extended Euclid on Q[x]: find u with u*a = 1 mod Phi
        r0, r1 = list(F.modulus), _trim(list(self.c))
        s0, s1 = [_ZERO], [_ONE]
        while len(r1) > 1 or r1[0] == 0:
            q, r = _poly_divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
        inv_const = 1 / r1[0]
        u = [x * inv_const for x in s1]
        u = F._reduce(u + [_ZERO] * max(0, F.phi - len(u)))
        return FieldElem(F, tuple(u))

    def __truediv__(self, o):
        if isinstance(o, FieldElem):
            return self * self.F(o).inverse()
        oc = self._other(o)
        if oc is None:
            return NotImplemented
        if not oc[0]:
            raise ZeroDivisionError("division by zero")
        inv = 1 / oc[0]
        return FieldElem(self.F, tuple(x * inv for x in self.c))

    def __rtruediv__(self, o):
        return self.F(o) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out, base = self.F.one, self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # comparison ---------------------------------------------------------
    def __bool__(self):
        return any(self.c)

    def __eq__(self, o):
        if isinstance(o, FieldElem):
            if o.F is self.F:
                return self.c == o.c
            if o.F.phi == 1 and self.F.phi == 1:
                return self.c == o.c
            return (not any(self.c[1:]) and not any(o.c[1:])
                    and self.c[0] == o.c[0])
        oc = self._other(o)
        if oc is None:
            return NotImplemented
        return self.c == oc

    def __hash__(self):
        if not any(self.c[1:]):
            return hash(self.c[0])
        return hash(self.c)

    def is_rational(self) -> bool:
        return not any(self.c[1:])

    def as_rational(self) -> mpq:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.c[0]

    def __repr__(self):
        return f"FieldElem({render_scalar(self)!r}, n0={self.F.n0})"

    def __str__(self):
        return render_scalar(self)


def _trim(p):
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


def _poly_divmod(a, b):
    a = list(a)
    b = _trim(list(b))
    if len(a) < len(b):
        return [_ZERO], _trim(a)
    q = [_ZERO] * (len(a) - len(b) + 1)
    lead = b[-1]
    for k in range(len(q) - 1, -1, -1):
        c = a[k + len(b) - 1] / lead
        q[k] = c
        if c:
            for j, bj in enumerate(b):
                a[k + j] -= c * bj
    return _trim(q), _trim(a[: len(b) - 1] or [_ZERO])


def _poly_mul(a, b):
    out = [_ZERO] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return _trim(out)


def _poly_sub(a, b):
    n = max(len(a), len(b))
    a = list(a) + [_ZERO] * (n - len(a))
    b = list(b) + [_ZERO] * (n - len(b))
    return _trim([x - y for x, y in zip(a, b)])


# ---------------------------------------------------------------------------
# scalar grammar
#   scalar := term (('+'|'-') term)*
#   term   := rational ('*' wpow)? | wpow
#   wpow   := 'w' ('^' uint)?
#   rational := '-'? uint ('/' uint)?
# ---------------------------------------------------------------------------

_TOKEN = re.compile(r"\d+|[-+*/^w]")


def parse_scalar(text: str, n0: int) -> FieldElem:
    """Parse a scalar expression, interpreting ``w`` as w_{n0}."""
    F = field(n0)
    src = re.sub(r"\s+", "", text)
    if not src:
        raise ScalarSyntaxError("empty scalar")
    toks = _TOKEN.findall(src)
    if "".join(toks) != src:
        raise ScalarSyntaxError(f"unexpected character in {text!r}")
    pos = 0

    def peek():
        return toks[pos] if pos < len(toks) else None

    def take(expected=None):
        nonlocal pos
        t = peek()
        if t is None or (expected is not None and t != expected):
            raise ScalarSyntaxError(f"expected {expected or 'token'} in {text!r}")
        pos += 1
        return t

    def uint():
        t = take()
        if not t.isdigit():
            raise ScalarSyntaxError(f"expected integer, got {t!r} in {text!r}")
        return int(t)

    def wpow():
        take("w")
        if peek() == "^":
            take("^")
            return F.w(uint())
        return F.w(1)

    def factor():
        sign = 1
        if peek() == "-":
            take("-")
            sign = -1
        if peek() == "w":
            return wpow() if sign == 1 else -wpow()
        num = uint()
        den = 1
        if peek() == "/":
            take("/")
            den = uint()
            if den == 0:
                raise ScalarSyntaxError(f"zero denominator in {text!r}")
        return F.rational(mpq(sign * num, den))

    def term():
        # products of several factors ("w*w", "2*w*w^3") are accepted too
        val = factor()
        while peek() == "*":
            take("*")
            val = val * factor()
        return val

    total = term()
    while peek() is not None:
        op = take()
        if op == "+":
            total = total + term()
        elif op == "-":
            total = total - term()
        else:
            raise ScalarSyntaxError(f"unexpected {op!r} in {text!r}")
    return total


def render_scalar(x: FieldElem) -> str:
    """Canonical text form; round-trips through :func:`parse_scalar`."""
    parts = []
    for k, q in enumerate(x.c):
        if not q:
            continue
        wp = "" if k == 0 else ("w" if k == 1 else f"w^{k}")
        if not parts:
            if k == 0:
                parts.append(str(q))
            elif q == 1:
                parts.append(wp)
            elif q == -1:
                parts.append(f"-{wp}")
            else:
                parts.append(f"{q}*{wp}")
        else:
            sep = "+" if q > 0 else "-"
            a = abs(q)
            if k == 0:
                parts.append(f"{sep}{a}")
            elif a == 1:
                parts.append(f"{sep}{wp}")
            else:
                parts.append(f"{sep}{a}*{wp}")
    return "".join(parts) or "0"


def arith(a: FieldElem, b: FieldElem, op: str) -> FieldElem:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        if not b:
            raise ZeroDivisionError("division by zero")
        return a / b
    raise ValueError(f"unknown operation {op!r}")


# ---------------------------------------------------------------------------
# dense matrices
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Matrix:
    rows: int
    cols: int
    entries: tuple  # row-major FieldElem

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise ValueError("entries length must equal rows*cols")

    @classmethod
    def from_rows(cls, F: CycloField, rows: Sequence[Sequence], cols: int | None = None):
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        ents = []
        for r in rows:
            if len(r) != cols:
                raise ValueError("ragged matrix")
            ents.extend(F(x) for x in r)
        return cls(len(rows), cols, tuple(ents))

    @classmethod
    def zeros(cls, F: CycloField, rows: int, cols: int):
        return cls(rows, cols, (F.zero,) * (rows * cols))

    @classmethod
    def identity(cls, F: CycloField, n: int):
        return cls(n, n, tuple(F.one if i == j else F.zero
                               for i in range(n) for j in range(n)))

    @classmethod
    def from_columns(cls, F: CycloField, columns: Sequence[Sequence], rows: int):
        cols = len(columns)
        return cls(rows, cols, tuple(F(columns[j][i])
                                     for i in range(rows) for j in range(cols)))

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i):
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def column(self, j):
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def tolist(self):
        return [list(self.row(i)) for i in range(self.rows)]

    def transpose(self):
        return Matrix(self.cols, self.rows,
                      tuple(self[i, j] for j in range(self.cols) for i in range(self.rows)))

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        out = []
        ocols = [other.column(j) for j in range(other.cols)]
        for i in range(self.rows):
            r = self.row(i)
            for col in ocols:
                acc = None
                for a, b in zip(r, col):
                    if a and b:
                        acc = a * b if acc is None else acc + a * b
                out.append(acc if acc is not None else _zero_like(self, other))
        return Matrix(self.rows, other.cols, tuple(out))

    def apply(self, v: Sequence) -> list:
        zero = _zero_like(self, self)
        out = []
        for i in range(self.rows):
            acc = zero
            for a, b in zip(self.row(i), v):
                if a and b:
                    acc = acc + a * b
            out.append(acc)
        return out

    def __add__(self, other: "Matrix") -> "Matrix":
        return Matrix(self.rows, self.cols,
                      tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "Matrix") -> "Matrix":
        return Matrix(self.rows, self.cols,
                      tuple(a - b for a, b in zip(self.entries, other.entries)))

    def scale(self, s) -> "Matrix":
        return Matrix(self.rows, self.cols, tuple(a * s for a in self.entries))

    def is_zero(self) -> bool:
        return not any(self.entries)

    def power(self, k: int) -> "Matrix":
        F = self.entries[0].F if self.entries else field(1)
        out = Matrix.identity(F, self.rows)
        for _ in range(k):
            out = out @ self
        return out


def _zero_like(a: Matrix, b: Matrix):
    src = a.entries or b.entries
    return src[0].F.zero if src else field(1).zero


def rref(rows: list[list], ncols: int):
    """Reduced row echelon form in place; returns pivot columns.

    Pivoting: leftmost nonzero column, first row (in current order) holding
    a nonzero entry there.
    """
    pivots = []
    r = 0
    nrows = len(rows)
    for c in range(ncols):
        if r >= nrows:
            break
        p = None
        for i in range(r, nrows):
            if rows[i][c]:
                p = i
                break
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        piv = rows[r]
        inv = piv[c].inverse()
        rows[r] = piv = [x * inv if x else x for x in piv]
        for i in range(nrows):
            if i != r:
                f = rows[i][c]
                if f:
                    ri = rows[i]
                    rows[i] = [x - f * y if y else x for x, y in zip(ri, piv)]
        pivots.append(c)
        r += 1
    del rows[r:]
    return pivots


def rank(M: Matrix) -> int:
    rows = M.tolist()
    return len(rref(rows, M.cols))


def _nullspace_from_rref(rows, pivots, ncols, F):
    pivset = set(pivots)
    basis = []
    for f in range(ncols):
        if f in pivset:
            continue
        v = [F.zero] * ncols
        v[f] = F.one
        for row, p in zip(rows, pivots):
            if row[f]:
                v[p] = -row[f]
        basis.append(v)
    return basis


def nullspace(M: Matrix, F: CycloField | None = None) -> list[list[FieldElem]]:
    """Basis of {v : M v = 0}, one vector per free column in increasing order."""
    if F is None:
        F = M.entries[0].F if M.entries else field(1)
    rows = M.tolist()
    pivots = rref(rows, M.cols)
    return _nullspace_from_rref(rows, pivots, M.cols, F)


def fixed_space(M: Matrix, mu) -> list[list[FieldElem]]:
    """Basis of ker(M - mu*I)."""
    if M.rows != M.cols:
        raise ValueError("fixed_space needs a square matrix")
    if M.rows == 0:
        return []
    F = M.entries[0].F
    shifted = M - Matrix.identity(F, M.rows).scale(F(mu))
    return nullspace(shifted, F)


def solve_homogeneous(F: CycloField, equations: Iterable[dict], nvars: int) -> list[list[FieldElem]]:
    """Null space of a system given as sparse rows {var: coeff}.

    Rows are first filtered through a :class:`SparseEchelon` so the dense
    reduction only sees an independent set.
    """
    ech = SparseEchelon(F)
    for eq in equations:
        ech.add(eq)
    return ech.nullspace(nvars)


class SparseEchelon:
    """Incremental row echelon form over sparse rows {column: FieldElem}.

    Each stored row is normalised to have leading coefficient 1 at its pivot
    (its smallest column).  ``add`` reduces a new row against the stored
    pivots and keeps it iff it is independent.
    """

    def __init__(self, F: CycloField):
        self.F = F
        self.pivots: dict[int, dict] = {}

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, row: dict) -> dict:
        row = {k: v for k, v in row.items() if v}
        pivots = self.pivots
        while row:
            hits = [c for c in row if c in pivots]
            if not hits:
                break
            c = min(hits)
            f = row.pop(c)
            for k, v in pivots[c].items():
                if k == c:
                    continue
                nv = row.get(k)
                nv = -f * v if nv is None else nv - f * v
                if nv:
                    row[k] = nv
                else:
                    row.pop(k, None)
        return row

    def add(self, row: dict) -> bool:
        row = self.reduce(row)
        if not row:
            return False
        c = min(row)
        inv = row[c].inverse()
        self.pivots[c] = {k: v * inv for k, v in row.items()}
        return True

    def nullspace(self, nvars: int) -> list[list[FieldElem]]:
        F = self.F
        # back-substitute to reduced form, highest pivot first
        order = sorted(self.pivots, reverse=True)
        reduced: dict[int, dict] = {}
        for c in order:
            row = dict(self.pivots[c])
            changed = True
            while changed:
                changed = False
                for k in sorted(k for k in row if k != c and k in reduced):
                    f = row.pop(k)
                    for kk, vv in reduced[k].items():
                        if kk == k:
                            continue
                        nv = row.get(kk)
                        nv = -f * vv if nv is None else nv - f * vv
                        if nv:
                            row[kk] = nv
                        else:
                            row.pop(kk, None)
                    changed = True
            reduced[c] = row
        basis = []
        for f in range(nvars):
            if f in reduced:
                continue
            v = [F.zero] * nvars
            v[f] = F.one
            for p, row in reduced.items():
                x = row.get(f)
                if x:
                    v[p] = -x
            basis.append(v)
        return basis
