"""Exact arithmetic in GF(p^m) and dense linear algebra over it.

Elements of GF(p^m) are encoded as integers in [0, q) via the base-p
coefficient expansion c0 + c1*p + ... + c_{m-1}*p^{m-1}.  For GF(4) with
modulus x^2 + x + 1 this fixes the bijection {0, 1, x, 1+x} -> {0, 1, 2, 3}.

All matrix routines use plain Gaussian elimination with first-nonzero
pivoting; arithmetic is exact so there are no stability concerns.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from .errors import (
    DivisionByZero,
    NonPrimeP,
    NotSquare,
    ReducibleModulus,
    SpecMismatch,
    UnsupportedSize,
)

MAX_FIELD_ORDER = 2 ** 16

# Default irreducible moduli, coefficient lists low degree first.
# GF(4) uses x^2 = x + 1 as in the source constructions; the rest are the
# usual minimal-weight choices.  Each is re-verified at construction.
_DEFAULT_MODULI = {
    (2, 2): (1, 1, 1),          # x^2 + x + 1
    (2, 3): (1, 1, 0, 1),       # x^3 + x + 1
    (2, 4): (1, 1, 0, 0, 1),    # x^4 + x + 1
    (3, 2): (1, 0, 1),          # x^2 + 1
}

# Cache full multiplication tables only for small extension fields.
_MUL_TABLE_MAX_Q = 64


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _poly_mulmod(a: tuple, b: tuple, modulus: tuple, p: int) -> tuple:
    """Multiply coefficient vectors mod (modulus, p); result has len(modulus)-1."""
    m = len(modulus) - 1
    prod = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] = (prod[i + j] + ai * bj) % p
    # reduce by the monic modulus
    for i in range(len(prod) - 1, m - 1, -1):
        c = prod[i]
        if c:
            prod[i] = 0
            for j in range(m + 1):
                prod[i - m + j] = (prod[i - m + j] - c * modulus[j]) % p
    return tuple(prod[:m])


def _poly_divides(div: tuple, poly: tuple, p: int) -> bool:
    """True if monic `div` divides `poly` over GF(p)."""
    rem = list(poly)
    dd = len(div) - 1
    for i in range(len(rem) - 1, dd - 1, -1):
        c = rem[i]
        if c:
            for j in range(dd + 1):
                rem[i - dd + j] = (rem[i - dd + j] - c * div[j]) % p
    return not any(rem)


def _is_irreducible(modulus: tuple, p: int) -> bool:
    """Trial division by all monic polynomials of degree <= deg/2."""
    m = len(modulus) - 1
    if m < 1 or modulus[-1] != 1:
        return False
    for deg in range(1, m // 2 + 1):
        for coeffs in itertools.product(range(p), repeat=deg):
            div = coeffs + (1,)
            if _poly_divides(div, modulus, p):
                return False
    return m >= 1


def _find_irreducible(p: int, m: int) -> tuple:
    """Smallest monic irreducible of degree m over GF(p), lexicographic."""
    for coeffs in itertools.product(range(p), repeat=m):
        cand = coeffs + (1,)
        if _is_irreducible(cand, p):
            return cand
    raise ReducibleModulus(f"no irreducible polynomial of degree {m} over GF({p})")


class FieldSpec:
    """GF(p^m) carrier: modulus, integer-repr arithmetic, element factory.

    Immutable and shareable; all arithmetic methods are pure functions on
    integer reprs in [0, q).
    """

    def __init__(self, p: int, m: int, modulus=None):
        if not _is_prime(p):
            raise NonPrimeP(f"p={p} is not prime")
        if m < 1:
            raise UnsupportedSize(f"extension degree m={m} must be >= 1")
        q = p ** m
        if q > MAX_FIELD_ORDER:
            raise UnsupportedSize(f"q={q} exceeds cap {MAX_FIELD_ORDER}")
        if m == 1:
            modulus = (0, 1) if modulus is None else tuple(int(c) % p for c in modulus)
        else:
            if modulus is None:
                modulus = _DEFAULT_MODULI.get((p, m)) or _find_irreducible(p, m)
            modulus = tuple(int(c) % p for c in modulus)
            if len(modulus) != m + 1 or modulus[-1] != 1:
                raise ReducibleModulus(f"modulus must be monic of degree {m}")
            if not _is_irreducible(modulus, p):
                raise ReducibleModulus(f"modulus {modulus} is reducible over GF({p})")
        self.p = p
        self.m = m
        self.q = q
        self.modulus = modulus
        self._mul_table = None
        self._inv_table = None
        if m > 1 and q <= _MUL_TABLE_MAX_Q:
            self._build_tables()
        elif m == 1:
            self._inv_table = [0] * q
            for a in range(1, q):
                self._inv_table[a] = pow(a, q - 2, q)

    # -- encoding ------------------------------------------------------------

    def _to_poly(self, r: int) -> tuple:
        p, m = self.p, self.m
        out = []
        for _ in range(m):
            out.append(r % p)
            r //= p
        return tuple(out)

    def _from_poly(self, coeffs) -> int:
        r = 0
        for c in reversed(coeffs):
            r = r * self.p + (c % self.p)
        return r

    def _build_tables(self):
        q = self.q
        self._mul_table = [[0] * q for _ in range(q)]
        polys = [self._to_poly(a) for a in range(q)]
        for a in range(q):
            row = self._mul_table[a]
            for b in range(a, q):
                v = self._from_poly(_poly_mulmod(polys[a], polys[b], self.modulus, self.p))
                row[b] = v
                self._mul_table[b][a] = v
        self._inv_table = [0] * q
        for a in range(1, q):
            for b in range(1, q):
                if self._mul_table[a][b] == 1:
                    self._inv_table[a] = b
                    break

    # -- int-repr arithmetic --------------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.m == 1:
            return (a + b) % self.p
        p = self.p
        r, pw = 0, 1
        while a or b:
            r += ((a + b) % p) * pw
            a //= p
            b //= p
            pw *= p
        return r

    def neg(self, a: int) -> int:
        if self.m == 1:
            return (-a) % self.p
        p = self.p
        r, pw = 0, 1
        while a:
            r += ((-a) % p) * pw
            a //= p
            pw *= p
        return r

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.m == 1:
            return (a * b) % self.p
        if self._mul_table is not None:
            return self._mul_table[a][b]
        return self._from_poly(
            _poly_mulmod(self._to_poly(a), self._to_poly(b), self.modulus, self.p)
        )

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("inverse of zero")
        if self._inv_table is not None:
            return self._inv_table[a]
        # a^(q-2) by square-and-multiply
        return self.pow(a, self.q - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            raise ValueError("exponent must be a nonnegative integer")
        r, base = 1, a
        while e:
            if e & 1:
                r = self.mul(r, base)
            base = self.mul(base, base)
            e >>= 1
        return r

    # -- elements -------------------------------------------------------------

    def element(self, r: int) -> "FieldElement":
        return FieldElement(self, r % self.q if self.m == 1 else r)

    def zero(self) -> "FieldElement":
        return FieldElement(self, 0)

    def one(self) -> "FieldElement":
        return FieldElement(self, 1)

    def elements(self):
        return (FieldElement(self, r) for r in range(self.q))

    def __eq__(self, other):
        return (
            isinstance(other, FieldSpec)
            and self.p == other.p
            and self.m == other.m
            and self.modulus == other.modulus
        )

    def __hash__(self):
        return hash((self.p, self.m, self.modulus))

    def __repr__(self):
        return f"GF({self.q})" if self.m == 1 else f"GF({self.p}^{self.m})"


def make_field(p: int, m: int = 1, modulus=None) -> FieldSpec:
    """Build GF(p^m); a built-in table supplies the modulus when omitted."""
    return FieldSpec(p, m, modulus)


@lru_cache(maxsize=None)
def gf(q: int) -> FieldSpec:
    """GF(q) with the default modulus, for q a prime power."""
    p, m = _factor_prime_power(q)
    return FieldSpec(p, m)


def _factor_prime_power(q: int):
    if q < 2:
        raise UnsupportedSize(f"q={q} is not a prime power")
    for p in range(2, q + 1):
        if q % p == 0:
            m = 0
            r = q
            while r % p == 0:
                r //= p
                m += 1
            if r != 1:
                raise UnsupportedSize(f"q={q} is not a prime power")
            return p, m
    raise UnsupportedSize(f"q={q} is not a prime power")


@dataclass(frozen=True)
class FieldElement:
    """One element of a FieldSpec, stored as an integer repr in [0, q)."""

    spec: FieldSpec
    repr: int

    def _check(self, other: "FieldElement"):
        if self.spec != other.spec:
            raise SpecMismatch("operands live in different fields")

    def __add__(self, other):
        self._check(other)
        return FieldElement(self.spec, self.spec.add(self.repr, other.repr))

    def __sub__(self, other):
        self._check(other)
        return FieldElement(self.spec, self.spec.sub(self.repr, other.repr))

    def __mul__(self, other):
        self._check(other)
        return FieldElement(self.spec, self.spec.mul(self.repr, other.repr))

    def __truediv__(self, other):
        self._check(other)
        return FieldElement(self.spec, self.spec.div(self.repr, other.repr))

    def __neg__(self):
        return FieldElement(self.spec, self.spec.neg(self.repr))

    def __pow__(self, e: int):
        return FieldElement(self.spec, self.spec.pow(self.repr, e))

    def inverse(self):
        return FieldElement(self.spec, self.spec.inv(self.repr))

    def __bool__(self):
        return self.repr != 0

    def __int__(self):
        return self.repr

    def __repr__(self):
        return f"{self.repr}∈{self.spec!r}"


def element_op(a: FieldElement, b: FieldElement, op: str) -> FieldElement:
    """Named binary field operation; pow treats b's repr as an integer exponent."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    if op == "pow":
        if a.spec != b.spec:
            raise SpecMismatch("operands live in different fields")
        return a ** b.repr
    raise ValueError(f"unknown op {op!r}")


def primitive_element(spec: FieldSpec) -> FieldElement:
    """Least-repr generator of the multiplicative group of the field."""
    target = spec.q - 1
    for r in range(1, spec.q):
        x, order = r, 1
        while x != 1:
            x = spec.mul(x, r)
            order += 1
        if order == target:
            return FieldElement(spec, r)
    raise AssertionError("no primitive element found (unreachable for a field)")


def multiplicative_order(spec: FieldSpec, r: int) -> int:
    if r == 0:
        raise DivisionByZero("0 has no multiplicative order")
    x, order = r, 1
    while x != 1:
        x = spec.mul(x, r)
        order += 1
    return order


class FFMatrix:
    """Dense matrix over one FieldSpec; entries stored as integer reprs."""

    def __init__(self, spec: FieldSpec, rows_data):
        self.spec = spec
        self.data = [list(int(x) for x in row) for row in rows_data]
        self.rows = len(self.data)
        self.cols = len(self.data[0]) if self.data else 0
        for row in self.data:
            if len(row) != self.cols:
                raise ValueError("ragged rows")
            for x in row:
                if not 0 <= x < spec.q:
                    raise ValueError(f"entry {x} out of range for {spec!r}")

    @classmethod
    def identity(cls, spec: FieldSpec, n: int) -> "FFMatrix":
        return cls(spec, [[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zero(cls, spec: FieldSpec, rows: int, cols: int) -> "FFMatrix":
        return cls(spec, [[0] * cols for _ in range(rows)])

    def __getitem__(self, rc):
        r, c = rc
        return FieldElement(self.spec, self.data[r][c])

    def row(self, r: int):
        return tuple(self.data[r])

    def col(self, c: int):
        return tuple(self.data[r][c] for r in range(self.rows))

    def __eq__(self, other):
        return (
            isinstance(other, FFMatrix)
            and self.spec == other.spec
            and self.data == other.data
        )

    def __repr__(self):
        return f"FFMatrix({self.spec!r}, {self.data})"

    def copy(self) -> "FFMatrix":
        return FFMatrix(self.spec, self.data)

    def transpose(self) -> "FFMatrix":
        return FFMatrix(self.spec, [self.col(c) for c in range(self.cols)])

    def hstack(self, other: "FFMatrix") -> "FFMatrix":
        if self.spec != other.spec or self.rows != other.rows:
            raise SpecMismatch("hstack shape/spec mismatch")
        return FFMatrix(self.spec, [self.data[r] + other.data[r] for r in range(self.rows)])

    def select_columns(self, cols) -> "FFMatrix":
        return FFMatrix(self.spec, [[self.data[r][c] for c in cols] for r in range(self.rows)])

    def matmul(self, other: "FFMatrix") -> "FFMatrix":
        if self.spec != other.spec:
            raise SpecMismatch("matmul spec mismatch")
        if self.cols != other.rows:
            raise ValueError("matmul shape mismatch")
        sp = self.spec
        ocols = [other.col(c) for c in range(other.cols)]
        out = []
        for r in range(self.rows):
            row = self.data[r]
            out.append([_dot(sp, row, col) for col in ocols])
        return FFMatrix(sp, out)

    def row_vector_mul(self, v) -> tuple:
        """v (length rows, int reprs) times this matrix; returns int reprs."""
        sp = self.spec
        acc = [0] * self.cols
        for vi, row in zip(v, self.data):
            if vi:
                for c, g in enumerate(row):
                    if g:
                        acc[c] = sp.add(acc[c], sp.mul(vi, g))
        return tuple(acc)


def _dot(spec: FieldSpec, u, v) -> int:
    acc = 0
    for a, b in zip(u, v):
        if a and b:
            acc = spec.add(acc, spec.mul(a, b))
    return acc


def _rref_data(spec: FieldSpec, data):
    """In-place RREF of a list-of-lists of int reprs; returns pivot columns."""
    rows = len(data)
    cols = len(data[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        pr = next((i for i in range(r, rows) if data[i][c]), None)
        if pr is None:
            continue
        data[r], data[pr] = data[pr], data[r]
        piv = data[r][c]
        if piv != 1:
            inv = spec.inv(piv)
            data[r] = [spec.mul(inv, x) for x in data[r]]
        prow = data[r]
        for i in range(rows):
            if i != r and data[i][c]:
                f = data[i][c]
                irow = data[i]
                if spec.m == 1:
                    p = spec.p
                    data[i] = [(a - f * b) % p for a, b in zip(irow, prow)]
                else:
                    data[i] = [spec.sub(a, spec.mul(f, b)) for a, b in zip(irow, prow)]
        pivots.append(c)
        r += 1
    return pivots


def matrix_rref(M: FFMatrix):
    """Reduced row-echelon form; returns (rref, rank, pivot columns)."""
    data = [row[:] for row in M.data]
    pivots = _rref_data(M.spec, data)
    return FFMatrix(M.spec, data), len(pivots), pivots


def matrix_rank(M: FFMatrix) -> int:
    data = [row[:] for row in M.data]
    return len(_rref_data(M.spec, data))


def matrix_det_inv(M: FFMatrix):
    """Determinant and (when nonsingular) inverse of a square matrix."""
    if M.rows != M.cols:
        raise NotSquare(f"{M.rows}x{M.cols} matrix")
    sp = M.spec
    n = M.rows
    data = [row[:] + ident_row for row, ident_row in
            zip(M.data, FFMatrix.identity(sp, n).data)]
    det = 1
    for c in range(n):
        pr = next((i for i in range(c, n) if data[i][c]), None)
        if pr is None:
            return sp.zero(), None
        if pr != c:
            data[c], data[pr] = data[pr], data[c]
            det = sp.neg(det)
        piv = data[c][c]
        det = sp.mul(det, piv)
        inv = sp.inv(piv)
        data[c] = [sp.mul(inv, x) for x in data[c]]
        prow = data[c]
        for i in range(n):
            if i != c and data[i][c]:
                f = data[i][c]
                data[i] = [sp.sub(a, sp.mul(f, b)) for a, b in zip(data[i], prow)]
    inverse = FFMatrix(sp, [row[n:] for row in data])
    return FieldElement(sp, det), inverse


def rank_of_rows(spec: FieldSpec, rows) -> int:
    """Rank of a list of row tuples (int reprs) over the field.

    Hot path for column-subset MDS certification; prime fields take a
    specialized integer-mod route.
    """
    if spec.m == 1:
        return _rank_prime(spec.p, spec._inv_table, [list(r) for r in rows])
    data = [list(r) for r in rows]
    return len(_rref_data(spec, data))


def _rank_prime(p: int, inv_table, data) -> int:
    rows = len(data)
    cols = len(data[0]) if rows else 0
    rank = 0
    for c in range(cols):
        pr = None
        for i in range(rank, rows):
            if data[i][c]:
                pr = i
                break
        if pr is None:
            continue
        data[rank], data[pr] = data[pr], data[rank]
        prow = data[rank]
        piv = prow[c]
        if piv != 1:
            inv = inv_table[piv]
            prow = data[rank] = [(inv * x) % p for x in prow]
        for i in range(rank + 1, rows):
            f = data[i][c]
            if f:
                irow = data[i]
                data[i] = [(a - f * b) % p for a, b in zip(irow, prow)]
        rank += 1
        if rank == rows:
            break
    return rank


# --- matrix text format -----------------------------------------------------
# First line: "rows cols p m"; then `rows` lines of space-separated reprs.

def format_matrix(M: FFMatrix) -> str:
    head = f"{M.rows} {M.cols} {M.spec.p} {M.spec.m}"
    body = "\n".join(" ".join(str(x) for x in row) for row in M.data)
    return head + ("\n" + body if body else "") + "\n"


def parse_matrix(text: str) -> FFMatrix:
    from .errors import FormatError

    lines = [ln for ln in text.strip().splitlines() if ln.strip()]
    if not lines:
        raise FormatError("empty matrix file")
    try:
        rows, cols, p, m = (int(x) for x in lines[0].split())
    except ValueError as exc:
        raise FormatError(f"bad matrix header: {lines[0]!r}") from exc
    if len(lines) != rows + 1:
        raise FormatError(f"expected {rows} matrix rows, got {len(lines) - 1}")
    spec = make_field(p, m)
    data = []
    for ln in lines[1:]:
        row = [int(x) for x in ln.split()]
        if len(row) != cols:
            raise FormatError(f"expected {cols} entries per row, got {len(row)}")
        if any(x < 0 or x >= spec.q for x in row):
            raise FormatError(f"matrix entry out of range [0, {spec.q}) in {ln!r}")
        data.append(row)
    return FFMatrix(spec, data)
