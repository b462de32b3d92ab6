"""Linear codes over GF(q): construction, duals, surgery, distance, MDS checks.

Generator matrices are kept exactly as given (the Singleton-array punctured
generators are deliberately non-standard); `standard_form` is explicit and
records its column permutation so callers can undo it.
"""

from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass

from .errors import (
    DegenerateCoordinate,
    OutOfRange,
    RankDeficient,
    RankDrop,
    TooLarge,
)
from .field import (
    FFMatrix,
    FieldElement,
    FieldSpec,
    matrix_rank,
    matrix_rref,
    primitive_element,
    rank_of_rows,
)

# Explicit constructor-level caps so oversize requests fail fast instead of
# hanging; acceptance tests assert TooLarge against these.
MAX_ENUM_CODEWORDS = 10 ** 8
MAX_DET_CHECKS = 10 ** 7


class LinearCode:
    """[n, k] linear code over GF(q) with a full-row-rank generator matrix."""

    def __init__(self, G: FFMatrix, _skip_rank_check: bool = False):
        if not _skip_rank_check and matrix_rank(G) != G.rows:
            raise RankDeficient(f"generator {G.rows}x{G.cols} is not full row rank")
        self.G = G
        self.spec = G.spec
        self.n = G.cols
        self.k = G.rows
        self._distance = None
        self._distance_lock = threading.Lock()

    @property
    def q(self) -> int:
        return self.spec.q

    @property
    def cached_distance(self):
        return self._distance

    def _set_distance(self, d: int):
        with self._distance_lock:
            if self._distance is None:
                self._distance = d
            elif self._distance != d:
                raise AssertionError(
                    f"conflicting distances {self._distance} and {d}"
                )

    def codeword_set(self) -> frozenset:
        return frozenset(enumerate_codewords(self))

    def __repr__(self):
        d = f",{self._distance}" if self._distance is not None else ""
        return f"[{self.n},{self.k}{d}]_{self.q}"


def code_from_generator(G: FFMatrix) -> LinearCode:
    """Wrap a full-row-rank generator matrix as a LinearCode."""
    return LinearCode(G)


def standard_form(code: LinearCode):
    """Row-reduce (and column-permute if needed) to G' = [I_k | A].

    Returns (code', perm) where perm[i] is the original column now at
    position i; apply_permutation(undo=True) style callers use perm to map
    coordinates back.
    """
    rref, rank, pivots = matrix_rref(code.G)
    assert rank == code.k
    nonpivots = [c for c in range(code.n) if c not in set(pivots)]
    perm = list(pivots) + nonpivots
    if perm == list(range(code.n)):
        return LinearCode(rref, _skip_rank_check=True), perm
    permuted = rref.select_columns(perm)
    return LinearCode(permuted, _skip_rank_check=True), perm


def dual_code(code: LinearCode) -> LinearCode:
    """[n, n-k] code orthogonal to every codeword of the input."""
    std, perm = standard_form(code)
    sp = code.spec
    k, n = code.k, code.n
    A = std.G.select_columns(range(k, n))
    negAT = FFMatrix(sp, [[sp.neg(A.data[r][c]) for r in range(k)] for c in range(n - k)])
    H = negAT.hstack(FFMatrix.identity(sp, n - k))
    # undo the column permutation: column perm[i] of the original sits at i
    inv = [0] * n
    for i, c in enumerate(perm):
        inv[c] = i
    H_orig = H.select_columns(inv)
    return LinearCode(H_orig, _skip_rank_check=True)


def enumerate_codewords(code: LinearCode):
    """All q^k codewords, lexicographic in the message vector."""
    if code.q ** code.k > MAX_ENUM_CODEWORDS:
        raise TooLarge(f"q^k = {code.q}^{code.k} exceeds enumeration cap")
    sp = code.spec
    rows = [code.G.row(r) for r in range(code.k)]
    n = code.n
    add, mul = sp.add, sp.mul
    # incremental: maintain partial sums per message prefix via product order
    for v in itertools.product(range(code.q), repeat=code.k):
        acc = [0] * n
        for vi, row in zip(v, rows):
            if vi:
                for c, g in enumerate(row):
                    if g:
                        acc[c] = add(acc[c], mul(vi, g))
        yield tuple(acc)


def _min_weight_brute(code: LinearCode) -> int:
    best = code.n + 1
    for cw in enumerate_codewords(code):
        w = sum(1 for x in cw if x)
        if 0 < w < best:
            best = w
    return best


def _min_distance_rank(code: LinearCode) -> int:
    """Minimum distance as the smallest number of dependent parity-check columns."""
    H = dual_code(code).G
    sp = code.spec
    cols = [H.col(c) for c in range(H.cols)]
    nk = code.n - code.k
    # fast path: if every (n-k)-subset is independent the code is MDS and
    # Singleton pins d = n-k+1 (this is the only feasible route for the big
    # prime-field instances)
    if all(
        rank_of_rows(sp, list(zip(*sub))) == nk
        for sub in itertools.combinations(cols, nk)
    ):
        return nk + 1
    for w in range(1, nk + 1):
        for sub in itertools.combinations(cols, w):
            if rank_of_rows(sp, list(zip(*sub))) < w:
                return w
    raise AssertionError("unreachable: some n-k+1 columns are always dependent")


def min_distance(code: LinearCode, method: str = "auto") -> int:
    """Exact minimum nonzero codeword weight; result is cached on the code.

    method: "brute" (weight scan over all codewords), "rank" (w columns of
    the parity-check matrix independent iff d >= w+1), or "auto".
    """
    if code._distance is not None:
        return code._distance
    if method == "auto":
        method = "brute" if code.q ** code.k <= 10 ** 5 else "rank"
    if method == "brute":
        d = _min_weight_brute(code)
    elif method == "rank":
        d = _min_distance_rank(code)
    else:
        raise ValueError(f"unknown method {method!r}")
    code._set_distance(d)
    return d


@dataclass
class MdsCertificate:
    is_mds: bool
    method: str
    checks: int
    witness: object = None  # failing column set / submatrix when not MDS


def is_mds(code: LinearCode, method: str = "columns") -> MdsCertificate:
    """Decide d = n-k+1, with an auditable certificate.

    methods: "distance" compares min_distance against the Singleton bound;
    "submatrix" checks every square submatrix of A (from the standard form)
    nonsingular; "columns" checks every k columns of G linearly independent.
    """
    n, k, sp = code.n, code.k, code.spec
    if method == "distance":
        d = min_distance(code)
        return MdsCertificate(d == n - k + 1, method, 1,
                              None if d == n - k + 1 else ("distance", d))
    if method == "columns":
        total = _ncr(n, k)
        cols = [code.G.col(c) for c in range(n)]
        checks = 0
        for idx in itertools.combinations(range(n), k):
            checks += 1
            sub = [cols[c] for c in idx]
            if rank_of_rows(sp, list(zip(*sub))) < k:
                return MdsCertificate(False, method, checks, ("columns", idx))
        if code._distance is None:
            code._set_distance(n - k + 1)
        return MdsCertificate(True, method, total)
    if method == "submatrix":
        std, perm = standard_form(code)
        A = std.G.select_columns(range(k, n))
        total = sum(_ncr(k, t) * _ncr(n - k, t) for t in range(1, min(k, n - k) + 1))
        if total > MAX_DET_CHECKS:
            raise TooLarge(f"{total} determinant checks exceed cap {MAX_DET_CHECKS}")
        checks = 0
        for t in range(1, min(k, n - k) + 1):
            for rset in itertools.combinations(range(k), t):
                for cset in itertools.combinations(range(n - k), t):
                    checks += 1
                    sub = [[A.data[r][c] for c in cset] for r in rset]
                    if rank_of_rows(sp, sub) < t:
                        return MdsCertificate(False, method, checks,
                                              ("submatrix", rset, cset, perm))
        if code._distance is None:
            code._set_distance(n - k + 1)
        return MdsCertificate(True, method, total)
    raise ValueError(f"unknown method {method!r}")


def _ncr(n: int, r: int) -> int:
    import math

    return math.comb(n, r) if 0 <= r <= n else 0


@dataclass
class SingletonArray:
    """Triangular Cauchy-type array: first row/column all 1, a_i = 1/(1-g^i)."""

    spec: FieldSpec
    gamma: FieldElement
    a: tuple  # a[i] for i in 1..q-2, stored as int reprs, a[0] unused

    def entry(self, r: int, c: int) -> int:
        """Int repr of the (r, c) entry; rows/cols 0-indexed, r + c <= q - 1."""
        q = self.spec.q
        if r < 0 or c < 0 or r + c > q - 1:
            raise IndexError(f"({r},{c}) outside the Singleton array of GF({q})")
        if r == 0 or c == 0:
            return 1
        return self.a[r + c - 1]

    def row(self, r: int) -> tuple:
        return tuple(self.entry(r, c) for c in range(self.spec.q - r))

    def block(self, rows: int, cols: int) -> FFMatrix:
        """Top-left rows x cols rectangular submatrix."""
        return FFMatrix(self.spec,
                        [[self.entry(r, c) for c in range(cols)] for r in range(rows)])


def singleton_array(spec: FieldSpec) -> SingletonArray:
    gamma = primitive_element(spec)
    sp = spec
    a = [0] * max(spec.q - 1, 1)
    g = 1
    for i in range(1, spec.q - 1):
        g = sp.mul(g, gamma.repr)
        a[i] = sp.inv(sp.sub(1, g))
    return SingletonArray(spec, gamma, tuple(a))


def mds_from_singleton(n: int, k: int, spec: FieldSpec) -> LinearCode:
    """MDS [n, k]_q with G = [I_k | A], A from the Singleton array; certified."""
    q = spec.q
    if not (1 <= k < n <= q + 1):
        raise OutOfRange(f"[{n},{k}]_{q} outside the Singleton-array range n <= q+1")
    arr = singleton_array(spec)
    A = arr.block(k, n - k)
    G = FFMatrix.identity(spec, k).hstack(A)
    code = LinearCode(G, _skip_rank_check=True)
    cert = is_mds(code, method="columns")
    if not cert.is_mds:
        raise AssertionError(f"Singleton-array code [{n},{k}]_{q} failed MDS check")
    return code


def puncture(code: LinearCode, coord: int) -> LinearCode:
    """Delete one coordinate, keeping k; raises RankDrop if rank would fall."""
    cols = [c for c in range(code.n) if c != coord]
    G = code.G.select_columns(cols)
    if matrix_rank(G) != code.k:
        raise RankDrop(f"puncturing coordinate {coord} drops the rank below {code.k}")
    return LinearCode(G, _skip_rank_check=True)


def shorten(code: LinearCode, coord: int) -> LinearCode:
    """Subcode of codewords vanishing at `coord`, with that coordinate deleted."""
    sp = code.spec
    # row-reduce so at most one generator row is nonzero at coord
    data = [row[:] for row in code.G.data]
    pivot_row = None
    for r in range(code.k):
        if data[r][coord]:
            if pivot_row is None:
                pivot_row = r
                inv = sp.inv(data[r][coord])
                data[r] = [sp.mul(inv, x) for x in data[r]]
            else:
                f = data[r][coord]
                data[r] = [sp.sub(a, sp.mul(f, b)) for a, b in zip(data[r], data[pivot_row])]
    if pivot_row is None:
        raise DegenerateCoordinate(f"every codeword is already 0 at coordinate {coord}")
    rows = [row for r, row in enumerate(data) if r != pivot_row]
    cols = [c for c in range(code.n) if c != coord]
    G = FFMatrix(sp, [[row[c] for c in cols] for row in rows])
    return LinearCode(G)


def mds_exists(n: int, k: int, q: int) -> bool:
    """Known existence intervals for MDS [n, k]_q codes."""
    if n < 2 or not 1 <= k <= n:
        return False
    if k in (1, n - 1, n):
        return True
    if q % 2 == 0 and k in (3, q - 1):
        return n <= q + 2
    return n <= q + 1


# --- code file format -------------------------------------------------------
# "CODE n k" then the FFMatrix text block for G.

def format_code(code: LinearCode) -> str:
    from .field import format_matrix

    return f"CODE {code.n} {code.k}\n" + format_matrix(code.G)


def parse_code(text: str) -> LinearCode:
    from .errors import FormatError
    from .field import parse_matrix

    lines = text.strip().splitlines()
    if not lines or not lines[0].startswith("CODE"):
        raise FormatError("missing CODE header")
    parts = lines[0].split()
    if len(parts) != 3:
        raise FormatError(f"bad CODE header: {lines[0]!r}")
    try:
        n, k = int(parts[1]), int(parts[2])
    except ValueError as exc:
        raise FormatError(f"bad CODE header: {lines[0]!r}") from exc
    G = parse_matrix("\n".join(lines[1:]))
    if G.cols != n or G.rows != k:
        raise FormatError(f"CODE header says {n},{k} but matrix is {G.rows}x{G.cols}")
    return LinearCode(G)
