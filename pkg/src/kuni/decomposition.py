"""Coset decomposition of MDS codes into q^2 MDS subcodes.

Implements the Singleton-array construction that yields, for odd prime
power q, the non-standard generator G of the [q, ceil(q/2)] MDS code
together with the two-column matrix Q whose kernel subcode is MDS
[q, ceil(q/2)-2].  Labels (alpha, beta) = vQ partition the codewords into
q^2 cosets of the kernel subcode.
"""

from __future__ import annotations

import itertools
import random as _random
from dataclasses import dataclass

from .codes import (
    LinearCode,
    MdsCertificate,
    enumerate_codewords,
    is_mds,
    singleton_array,
)
from .errors import (
    BadKernelDimension,
    CertificationFailed,
    NotFound,
    OutOfRange,
    TooLarge,
)
from .field import FFMatrix, FieldSpec, make_field, matrix_rank, rank_of_rows

MAX_EXPLICIT_CODEWORDS = 10 ** 6


@dataclass(frozen=True)
class QMatrix:
    """Two label columns Q1, Q2 over GF(q); v -> vQ maps messages to GF(q)^2."""

    spec: FieldSpec
    q1: tuple  # int reprs, length k
    q2: tuple

    @property
    def k(self) -> int:
        return len(self.q1)

    def as_matrix(self) -> FFMatrix:
        return FFMatrix(self.spec, [[a, b] for a, b in zip(self.q1, self.q2)])

    def rank(self) -> int:
        return matrix_rank(self.as_matrix())

    def label(self, v) -> tuple:
        """(alpha, beta) = vQ for a message vector of int reprs."""
        sp = self.spec
        alpha = beta = 0
        for vi, a, b in zip(v, self.q1, self.q2):
            if vi:
                if a:
                    alpha = sp.add(alpha, sp.mul(vi, a))
                if b:
                    beta = sp.add(beta, sp.mul(vi, b))
        return alpha, beta


@dataclass
class CosetDecomposition:
    """Partition of the parent code's codewords into q^2 cosets of the kernel."""

    parent: LinearCode
    subcode: LinearCode
    Q: QMatrix
    labels: dict | None  # explicit mode: (alpha, beta) -> list of codewords
    certified: bool = False


def _kernel_basis(Q: QMatrix):
    """Basis (rows of int reprs) of {v : vQ = 0}."""
    sp = Q.spec
    k = Q.k
    # solve v M = 0  <=>  M^T v^T = 0; nullspace via RREF of the 2 x k system
    M = FFMatrix(sp, [list(Q.q1), list(Q.q2)])
    from .field import matrix_rref

    rref, rank, pivots = matrix_rref(M)
    free = [c for c in range(k) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [0] * k
        v[f] = 1
        for r, pc in enumerate(pivots):
            v[pc] = sp.neg(rref.data[r][f])
        basis.append(tuple(v))
    return basis


def kernel_subcode(G: FFMatrix, Q: QMatrix) -> LinearCode:
    """The [n, k-2] code {vG : vQ = 0}."""
    k = G.rows
    if Q.k != k:
        raise BadKernelDimension(f"Q has {Q.k} rows but G has {k}")
    basis = _kernel_basis(Q)
    if len(basis) != k - 2:
        raise BadKernelDimension(
            f"kernel dimension {len(basis)} != k-2 = {k - 2} (rank(Q) = {Q.rank()})"
        )
    rows = [G.row_vector_mul(v) for v in basis]
    return LinearCode(FFMatrix(G.spec, rows))


def coset_partition(G: FFMatrix, Q: QMatrix, explicit: bool = True) -> CosetDecomposition:
    """Assign each message v the label vQ; explicit mode materializes all cosets."""
    sub = kernel_subcode(G, Q)  # validates kernel dimension
    parent = LinearCode(G)
    q, k = G.spec.q, G.rows
    labels = None
    if explicit:
        if q ** k > MAX_EXPLICIT_CODEWORDS:
            raise TooLarge(f"q^k = {q}^{k} exceeds explicit-partition cap")
        labels = {}
        for v in itertools.product(range(q), repeat=k):
            cw = G.row_vector_mul(v)
            labels.setdefault(Q.label(v), []).append(cw)
    return CosetDecomposition(parent, sub, Q, labels)


@dataclass
class DecompositionReport:
    """Outcome of the four hypotheses behind the AME certificate."""

    parent_mds: MdsCertificate
    kernel_mds: MdsCertificate | None
    q_rank: int
    labels_onto: bool
    kernel_error: str | None = None

    @property
    def all_pass(self) -> bool:
        return (
            self.parent_mds.is_mds
            and self.kernel_mds is not None
            and self.kernel_mds.is_mds
            and self.q_rank == 2
            and self.labels_onto
        )


def verify_decomposition(G: FFMatrix, Q: QMatrix) -> DecompositionReport:
    """Check: parent MDS, kernel subcode MDS, rank(Q) = 2, labels onto GF(q)^2."""
    parent = LinearCode(G)
    parent_cert = is_mds(parent, method="columns")
    q_rank = Q.rank()
    # v -> vQ is linear, so surjectivity onto GF(q)^2 is exactly rank 2;
    # recorded separately because it is a separate hypothesis of the certificate
    labels_onto = q_rank == 2
    kernel_cert = None
    kernel_error = None
    try:
        sub = kernel_subcode(G, Q)
        kernel_cert = is_mds(sub, method="columns")
    except BadKernelDimension as exc:
        kernel_error = str(exc)
    return DecompositionReport(parent_cert, kernel_cert, q_rank, labels_onto, kernel_error)


def construct_G_Q(spec: FieldSpec):
    """The closed-form (G, Q) pair for GF(q), q an odd prime power >= 5 or q = 4.

    For odd q: G is the ceil(q/2) x q generator obtained by puncturing the
    [q+1, ceil(q/2)] Singleton-array code at its last identity column, i.e.
    a shifted identity block with a zero bottom row next to the full
    ceil(q/2) x ceil(q/2) Cauchy block.  Q1 holds the next Singleton-array
    column (zero-padded in the last row) and Q2 the missing identity column.
    """
    q = spec.q
    if q == 4:
        return _g_q_gf4(spec)
    if q % 2 == 0 or q < 5:
        raise OutOfRange(f"construction needs odd prime power q >= 5 (or q = 4), got {q}")
    k = (q + 1) // 2
    arr = singleton_array(spec)
    A = arr.block(k, k)
    ident_cols = FFMatrix(
        spec,
        [[1 if r == c else 0 for c in range(k - 1)] for r in range(k)],
    )
    G = ident_cols.hstack(A)
    # Q1: entries of the (k+1)-th Singleton-array column (k-1 of them), then 0
    q1 = tuple(arr.entry(r, k) for r in range(q - k)) + (0,) * (k - (q - k))
    q2 = tuple(0 for _ in range(k - 1)) + (1,)
    Q = QMatrix(spec, q1, q2)
    report = verify_decomposition(G, Q)
    if not report.all_pass:
        raise CertificationFailed(f"construction for GF({q}) failed verification: {report}")
    return G, Q


def _g_q_gf4(spec: FieldSpec):
    """GF(4) special case: the [5,3]_4 code with codewords
    (i, j, l, i+j+l, i+xj+(1+x)l) and labels alpha = i+j, beta = i+xl."""
    if (spec.p, spec.m) != (2, 2):
        raise OutOfRange("the q = 4 case needs GF(4)")
    x = 2  # repr of x under the coefficient encoding
    one_plus_x = 3
    G = FFMatrix(spec, [
        [1, 0, 0, 1, 1],
        [0, 1, 0, 1, x],
        [0, 0, 1, 1, one_plus_x],
    ])
    Q = QMatrix(spec, (1, 1, 0), (1, 0, x))
    report = verify_decomposition(G, Q)
    if not report.all_pass:
        raise CertificationFailed(f"GF(4) construction failed verification: {report}")
    return G, Q


def search_Q(G: FFMatrix, budget: int = 10 ** 6, seed: int | None = None) -> QMatrix:
    """First Q (lexicographic, or seeded-random sampling) whose kernel
    subcode certifies MDS.  Raises NotFound when the budget runs out."""
    spec = G.spec
    k = G.rows
    if k <= 2:
        raise BadKernelDimension(f"k = {k} leaves no room for a rank-2 label map")
    parent_cert = is_mds(LinearCode(G), method="columns")
    if not parent_cert.is_mds:
        raise CertificationFailed(f"search_Q needs an MDS parent code: {parent_cert}")
    q = spec.q

    def candidates():
        if seed is None:
            for q1 in itertools.product(range(q), repeat=k):
                for q2 in itertools.product(range(q), repeat=k):
                    yield q1, q2
        else:
            rng = _random.Random(seed)
            while True:
                yield (
                    tuple(rng.randrange(q) for _ in range(k)),
                    tuple(rng.randrange(q) for _ in range(k)),
                )

    attempts = 0
    for q1, q2 in candidates():
        if attempts >= budget:
            break
        attempts += 1
        Q = QMatrix(spec, q1, q2)
        if rank_of_rows(spec, [q1, q2]) != 2:
            continue
        try:
            sub = kernel_subcode(G, Q)
        except BadKernelDimension:
            continue
        if is_mds(sub, method="columns").is_mds:
            return Q
    raise NotFound(f"no valid Q found within budget {budget}")


# --- Q-matrix file format ---------------------------------------------------

def format_qmatrix(Q: QMatrix) -> str:
    from .field import format_matrix

    return format_matrix(Q.as_matrix())


def parse_qmatrix(text: str) -> QMatrix:
    from .errors import FormatError
    from .field import parse_matrix

    M = parse_matrix(text)
    if M.cols != 2:
        raise FormatError(f"Q matrix must have 2 columns, got {M.cols}")
    return QMatrix(M.spec, M.col(0), M.col(1))
