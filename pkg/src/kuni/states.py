"""Sparse multipartite states with exact cyclotomic amplitudes.

A state over n parties of local dimension q = p^m maps length-n symbol
tuples (field reprs) to nonzero elements of Z[w_q].  States are never
normalized; every downstream predicate is stated on unnormalized data so
all arithmetic stays in Z[w_q].

Weyl convention: X^a shifts a site's symbol by field addition of a;
Z^b multiplies the amplitude by w_q^(int(b) * int(j)) where j is the
integer repr at the site.  On a site carrying both, X acts first.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass

from .codes import LinearCode, dual_code, enumerate_codewords
from .cyclotomic import Cyclotomic
from .decomposition import QMatrix, construct_G_Q, verify_decomposition
from .errors import (
    CertificationMissing,
    FormatError,
    LayoutMismatch,
    ShapeMismatch,
    SizeMismatch,
    SpecMismatch,
    TooLarge,
    UnknownName,
)
from .field import FFMatrix, FieldSpec, gf

HARD_MAX_TERMS = 5 * 10 ** 7
DEFAULT_MAX_TERMS = 10 ** 7


def max_terms() -> int:
    """Materialization cap; KUNI_MAX_TERMS may raise it up to the hard limit."""
    env = os.environ.get("KUNI_MAX_TERMS")
    if env is None:
        return DEFAULT_MAX_TERMS
    return min(int(env), HARD_MAX_TERMS)


class SparseState:
    """Mapping from basis symbol tuples to nonzero cyclotomic amplitudes."""

    def __init__(self, n: int, spec: FieldSpec, terms: dict | None = None):
        self.n = n
        self.spec = spec
        self.terms = {}
        if terms:
            for key, amp in terms.items():
                if len(key) != n:
                    raise ShapeMismatch(f"term {key} has {len(key)} symbols, state has {n}")
                if not amp.is_zero():
                    self.terms[key] = amp

    @property
    def q(self) -> int:
        return self.spec.q

    @property
    def support(self) -> int:
        return len(self.terms)

    def equals(self, other: "SparseState") -> bool:
        """Exact equality of the unnormalized representations."""
        if self.n != other.n or self.spec != other.spec:
            return False
        for key in self.terms.keys() | other.terms.keys():
            a = self.terms.get(key)
            b = other.terms.get(key)
            if a is None:
                if not b.is_zero():
                    return False
            elif b is None:
                if not a.is_zero():
                    return False
            elif not (a - b).is_zero():
                return False
        return True

    def __repr__(self):
        return f"SparseState(n={self.n}, q={self.q}, support={self.support})"


@dataclass(frozen=True)
class WeylWord:
    """Z/X exponent assignment per site.

    z and x are tuples of (site, exponent) pairs with exponents reduced
    mod q; sites absent from both carry the identity.
    """

    n: int
    z: tuple = ()
    x: tuple = ()

    @classmethod
    def zx_split(cls, n: int, v, k: int) -> "WeylWord":
        """Z^(v_1..v_k) on the first k sites, X^(v_{k+1}..v_n) on the rest."""
        v = tuple(v)
        if len(v) != n:
            raise LayoutMismatch(f"exponent vector length {len(v)} != n = {n}")
        z = tuple((i, e) for i, e in enumerate(v[:k]) if e)
        x = tuple((i + k, e) for i, e in enumerate(v[k:]) if e)
        return cls(n, z, x)


def apply_weyl(state: SparseState, word: WeylWord) -> SparseState:
    """Act with the word; support size is unchanged."""
    if word.n != state.n:
        raise LayoutMismatch(f"word covers {word.n} sites, state has {state.n}")
    sp = state.spec
    q = sp.q
    out = {}
    x_map = dict(word.x)
    z_map = dict(word.z)
    for key, amp in state.terms.items():
        new_key = list(key)
        for site, a in x_map.items():
            new_key[site] = sp.add(new_key[site], a % q if sp.m == 1 else a)
        phase = 0
        for site, b in z_map.items():
            phase += int(b) * int(new_key[site])
        out[tuple(new_key)] = amp.mul_root(phase)
    return SparseState(state.n, sp, out)


def state_from_code(code: LinearCode) -> SparseState:
    """Equally weighted superposition of all codewords (amplitude 1 each)."""
    if code.q ** code.k > max_terms():
        raise TooLarge(f"q^k = {code.q}^{code.k} exceeds the term cap")
    q = code.q
    one = Cyclotomic.integer(q, 1)
    terms = {cw: one for cw in enumerate_codewords(code)}
    return SparseState(code.n, code.spec, terms)


def weyl_basis(seed: SparseState, k: int):
    """M(v) seed for all v in [q]^n, lexicographic; Z on first k sites."""
    n, q = seed.n, seed.q
    for v in itertools.product(range(q), repeat=n):
        yield apply_weyl(seed, WeylWord.zx_split(n, v, k))


def tensor(s1: SparseState, s2: SparseState) -> SparseState:
    if s1.spec != s2.spec:
        raise SpecMismatch("tensor factors live over different fields")
    if s1.support * s2.support > max_terms():
        raise TooLarge("tensor product exceeds the term cap")
    terms = {}
    for k1, a1 in s1.terms.items():
        for k2, a2 in s2.terms.items():
            terms[k1 + k2] = a1 * a2
    return SparseState(s1.n + s2.n, s1.spec, terms)


def inner_product(s1: SparseState, s2: SparseState) -> Cyclotomic:
    """<s1|s2> over the shared support, exact."""
    if s1.n != s2.n or s1.spec != s2.spec:
        raise ShapeMismatch("states have different shape")
    acc = Cyclotomic.zero(s1.q)
    small = s1.terms if len(s1.terms) <= len(s2.terms) else s2.terms
    for key in small:
        a = s1.terms.get(key)
        b = s2.terms.get(key)
        if a is not None and b is not None:
            acc = acc + a.conj() * b
    return acc


def cl_plus_q(code: LinearCode, quantum_seed: SparseState, variant: str = "direct") -> SparseState:
    """Concatenate codewords with Weyl-basis states over the seed.

    direct: the code itself supplies the classical part, needs n_Q = k;
    dual: the dual code supplies the classical part, needs n_Q = n - k.
    The message tuple doubles (lexicographically) as the Weyl exponent
    vector, which is the free bijection the construction needs.
    """
    if code.spec != quantum_seed.spec:
        raise SpecMismatch("code and seed live over different fields")
    if variant == "direct":
        cl = code
    elif variant == "dual":
        cl = dual_code(code)
    else:
        raise ValueError(f"unknown variant {variant!r}")
    nq = quantum_seed.n
    if nq != cl.k:
        raise SizeMismatch(
            f"seed has {nq} parties but the classical code carries {cl.k} message symbols"
        )
    q = code.q
    if q ** cl.k * quantum_seed.support > max_terms():
        raise TooLarge("Cl+Q state exceeds the term cap")
    # seed uniformity block size: number of leading Z sites in the word; for a
    # minimal-support seed from an [n_Q, r_Q] code this is r_Q, recovered as
    # log_q(support) when the seed is minimal
    zk = _z_block_size(quantum_seed)
    sp = code.spec
    terms = {}
    rows = [cl.G.row(r) for r in range(cl.k)]
    for v in itertools.product(range(q), repeat=cl.k):
        cw = _encode(sp, v, rows, cl.n)
        basis_state = apply_weyl(quantum_seed, WeylWord.zx_split(nq, v, zk))
        for key, amp in basis_state.terms.items():
            terms[cw + key] = amp
    return SparseState(cl.n + nq, sp, terms)


def _encode(sp: FieldSpec, v, rows, n: int) -> tuple:
    acc = [0] * n
    for vi, row in zip(v, rows):
        if vi:
            for c, g in enumerate(row):
                if g:
                    acc[c] = sp.add(acc[c], sp.mul(vi, g))
    return tuple(acc)


def _z_block_size(seed: SparseState) -> int:
    q = seed.q
    s = seed.support
    k = 0
    while q ** k < s:
        k += 1
    if q ** k != s:
        raise SizeMismatch(
            f"seed support {s} is not a power of q = {q}; need a minimal-support seed"
        )
    return k


def bell_pair(spec: FieldSpec) -> SparseState:
    """Unnormalized sum_r |r, r> over GF(q)."""
    one = Cyclotomic.integer(spec.q, 1)
    return SparseState(2, spec, {(r, r): one for r in range(spec.q)})


def bell(spec: FieldSpec, l: int, m: int) -> SparseState:
    """X^l (x) Z^m applied to sum_r |r, r>."""
    word = WeylWord(2, z=(((1, m),) if m else ()), x=(((0, l),) if l else ()))
    return apply_weyl(bell_pair(spec), word)


def ghz(n: int, spec: FieldSpec) -> SparseState:
    one = Cyclotomic.integer(spec.q, 1)
    return SparseState(n, spec, {(r,) * n: one for r in range(spec.q)})


def cl_plus_q_repetition(G: FFMatrix, Q: QMatrix, certified: bool = False) -> SparseState:
    """sum_v |vG> (x) X^(vQ1) Z^(vQ2) sum_l |l, l>; AME(n+2, q) when (G, Q)
    passes the decomposition checks.

    Pass certified=True only when verify_decomposition already passed on
    this exact pair; otherwise the checks run here.
    """
    if not certified:
        report = verify_decomposition(G, Q)
        if not report.all_pass:
            raise CertificationMissing(f"(G, Q) failed decomposition checks: {report}")
    sp = G.spec
    q, k, n = sp.q, G.rows, G.cols
    if q ** k * q > max_terms():
        raise TooLarge(f"q^k * q = {q}^{k} * {q} exceeds the term cap")
    terms = {}
    seed = bell_pair(sp)
    for v in itertools.product(range(q), repeat=k):
        cw = G.row_vector_mul(v)
        alpha, beta = Q.label(v)
        word = WeylWord(2, z=(((1, beta),) if beta else ()), x=(((0, alpha),) if alpha else ()))
        for key, amp in apply_weyl(seed, word).terms.items():
            terms[cw + key] = amp
    return SparseState(n + 2, sp, terms)


def local_fourier(state: SparseState, sites) -> SparseState:
    """Apply F = sum_{i,j} w^{ij} |i><j| at each listed site."""
    sp = state.spec
    q = sp.q
    terms = dict(state.terms)
    for site in sites:
        if len(terms) * q > max_terms():
            raise TooLarge("Fourier expansion exceeds the term cap")
        new_terms = {}
        for key, amp in terms.items():
            j = key[site]
            for i in range(q):
                new_key = key[:site] + (i,) + key[site + 1:]
                contrib = amp.mul_root(i * j)
                prev = new_terms.get(new_key)
                new_terms[new_key] = contrib if prev is None else prev + contrib
        terms = {k: v for k, v in new_terms.items() if not v.is_zero()}
    return SparseState(state.n, sp, terms)


def ame_5_q(spec: FieldSpec) -> SparseState:
    """sum_{l,m} |l, m, l+m> (x) X^l Z^m sum_r |r, r> over GF(q)."""
    sp = spec
    terms = {}
    for l in range(sp.q):
        for m in range(sp.q):
            cl = (l, m, sp.add(l, m))
            for key, amp in bell(sp, l, m).terms.items():
                terms[cl + key] = amp
    return SparseState(5, sp, terms)


def ame_7_4() -> SparseState:
    """The closed-form AME(7,4): [5,3]_4 codewords with Bell labels
    alpha = i+j, beta = i+x*l."""
    G, Q = construct_G_Q(gf(4))
    return cl_plus_q_repetition(G, Q, certified=True)


def builtin_state(name: str, **kwargs):
    """Named built-ins; matrix entries return (G, Q) pairs, not states."""
    if name == "ghz":
        return ghz(int(kwargs["n"]), gf(int(kwargs["q"])))
    if name == "bell":
        return bell(gf(int(kwargs["q"])), int(kwargs["l"]), int(kwargs["m"]))
    if name == "ame_5_q":
        return ame_5_q(gf(int(kwargs["q"])))
    if name == "ame_7_4":
        return ame_7_4()
    if name == "ame_19_17_matrices":
        return ame_19_17_matrices()
    if name == "ame_21_19_matrices":
        return ame_21_19_matrices()
    raise UnknownName(f"unknown builtin {name!r}")


def ame_19_17_matrices():
    """Hard-coded 9x17 generator and label columns for AME(19,17)."""
    spec = gf(17)
    A_rows = [
        [1, 1, 1, 1, 1, 1, 1, 1, 1],
        [1, 8, 2, 15, 7, 4, 6, 5, 9],
        [1, 2, 15, 7, 4, 6, 5, 9, 13],
        [1, 15, 7, 4, 6, 5, 9, 13, 12],
        [1, 7, 4, 6, 5, 9, 13, 12, 14],
        [1, 4, 6, 5, 9, 13, 12, 14, 11],
        [1, 6, 5, 9, 13, 12, 14, 11, 3],
        [1, 5, 9, 13, 12, 14, 11, 3, 16],
        [1, 9, 13, 12, 14, 11, 3, 16, 10],
    ]
    G = _shifted_identity_block(spec, A_rows)
    Q = QMatrix(spec, (1, 13, 12, 14, 11, 3, 16, 10, 0), (0,) * 8 + (1,))
    return G, Q


def ame_21_19_matrices():
    """Hard-coded 10x19 generator and label columns for AME(21,19)."""
    spec = gf(19)
    A_rows = [
        [1, 1, 1, 1, 1, 1, 1, 1, 1, 1],
        [1, 18, 6, 8, 5, 11, 3, 16, 7, 10],
        [1, 6, 8, 5, 11, 3, 16, 7, 10, 13],
        [1, 8, 5, 11, 3, 16, 7, 10, 13, 4],
        [1, 5, 11, 3, 16, 7, 10, 13, 4, 17],
        [1, 11, 3, 16, 7, 10, 13, 4, 17, 9],
        [1, 3, 16, 7, 10, 13, 4, 17, 9, 15],
        [1, 16, 7, 10, 13, 4, 17, 9, 15, 12],
        [1, 7, 10, 13, 4, 17, 9, 15, 12, 14],
        [1, 10, 13, 4, 17, 9, 15, 12, 14, 2],
    ]
    G = _shifted_identity_block(spec, A_rows)
    Q = QMatrix(spec, (1, 13, 4, 17, 9, 15, 12, 14, 2, 0), (0,) * 9 + (1,))
    return G, Q


def _shifted_identity_block(spec: FieldSpec, A_rows) -> FFMatrix:
    k = len(A_rows)
    left = [[1 if r == c else 0 for c in range(k - 1)] for r in range(k)]
    return FFMatrix(spec, [left[r] + A_rows[r] for r in range(k)])


# --- state file format ------------------------------------------------------
# "STATE n q"; then per term: n space-separated symbol reprs, a colon, then
# q space-separated integer cyclotomic coefficients.  Terms are written in
# sorted key order so equal states round-trip byte-identically.

def format_state(state: SparseState) -> str:
    lines = [f"STATE {state.n} {state.q}"]
    for key in sorted(state.terms):
        amp = state.terms[key]
        lines.append(
            " ".join(str(s) for s in key) + " : " + " ".join(str(c) for c in amp.coeffs)
        )
    return "\n".join(lines) + "\n"


def parse_state(text: str) -> SparseState:
    lines = [ln for ln in text.strip().splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("STATE"):
        raise FormatError("missing STATE header")
    parts = lines[0].split()
    if len(parts) != 3:
        raise FormatError(f"bad STATE header: {lines[0]!r}")
    n, q = int(parts[1]), int(parts[2])
    spec = gf(q)
    terms = {}
    for ln in lines[1:]:
        if ":" not in ln:
            raise FormatError(f"bad term line: {ln!r}")
        left, right = ln.split(":", 1)
        key = tuple(int(s) for s in left.split())
        coeffs = [int(c) for c in right.split()]
        if len(key) != n:
            raise FormatError(f"term has {len(key)} symbols, header says {n}")
        if len(coeffs) != q:
            raise FormatError(f"term has {len(coeffs)} coefficients, expected {q}")
        terms[key] = Cyclotomic(q, coeffs)
    return SparseState(n, spec, terms)
