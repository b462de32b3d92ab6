"""kuni command-line frontend.

Exit codes: 0 certified / success, 1 refuted, 2 non-certifying (sampled)
pass, 64+ usage errors.  JSON is the machine interface; human-readable
tables go to stdout.  Every JSON document embeds its run manifest so equal
manifests reproduce byte-identical outputs.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys

from . import __version__
from .codes import (
    LinearCode,
    format_code,
    is_mds,
    mds_exists,
    mds_from_singleton,
    min_distance,
    parse_code,
)
from .decomposition import QMatrix, construct_G_Q, format_qmatrix, parse_qmatrix, search_Q
from .errors import KuniError
from .field import format_matrix, gf, parse_matrix
from .states import (
    SparseState,
    bell_pair,
    builtin_state,
    cl_plus_q,
    cl_plus_q_repetition,
    format_state,
    ghz,
    max_terms,
    parse_state,
)
from .verify import certify_ame_via_codes, uniformity

EXIT_OK = 0
EXIT_REFUTED = 1
EXIT_SAMPLED = 2
EXIT_USAGE = 64


def _digest(path: str) -> str:
    with open(path, "rb") as fh:
        return hashlib.sha256(fh.read()).hexdigest()


def _manifest(args, inputs=()):
    return {
        "tool": "kuni",
        "version": __version__,
        "command": args._command_line,
        "seed": getattr(args, "seed", None),
        "caps": {"max_terms": max_terms()},
        "inputs": {p: _digest(p) for p in inputs},
    }


def _emit_json(payload: dict) -> None:
    print(json.dumps(payload, indent=2, sort_keys=True, default=str))


# --- construct --------------------------------------------------------------

def _seed_state(name: str, spec, n_q: int) -> SparseState:
    if name == "bell":
        return bell_pair(spec)
    if name == "ghz":
        return ghz(n_q, spec)
    raise KuniError(f"unknown seed {name!r} (use bell or ghz)")


def cmd_construct(args) -> int:
    inputs = []
    if args.mode == "from-code":
        code = _load_code(args)
        if args.code:
            inputs.append(args.code)
        from .states import state_from_code

        state = state_from_code(code)
    elif args.mode == "clq":
        code = _load_code(args)
        if args.code:
            inputs.append(args.code)
        seed = _seed_state(args.seed_state, code.spec,
                           code.k if args.variant == "direct" else code.n - code.k)
        state = cl_plus_q(code, seed, variant=args.variant)
    elif args.mode == "clq-rep":
        G = parse_matrix(open(args.g).read())
        Q = parse_qmatrix(open(args.q_matrix).read())
        inputs += [args.g, args.q_matrix]
        state = cl_plus_q_repetition(G, Q)
    elif args.mode == "builtin":
        kwargs = {k: v for k, v in
                  (("q", args.q), ("n", args.n), ("l", args.l), ("m", args.m))
                  if v is not None}
        obj = builtin_state(args.name, **kwargs)
        if isinstance(obj, tuple):
            G, Q = obj
            g_path = args.emit_g or "g.txt"
            q_path = args.emit_q or "q.txt"
            open(g_path, "w").write(format_matrix(G))
            open(q_path, "w").write(format_qmatrix(Q))
            print(f"wrote generator to {g_path} and label columns to {q_path}")
            return EXIT_OK
        state = obj
    else:
        raise KuniError(f"unknown construct mode {args.mode!r}")
    out = args.output or "out.state"
    open(out, "w").write(format_state(state))
    print(f"wrote {state.n}-party state over GF({state.q}), support {state.support}, to {out}")
    return EXIT_OK


def _load_code(args) -> LinearCode:
    if args.code:
        return parse_code(open(args.code).read())
    if args.n is None or args.k is None or args.q is None:
        raise KuniError("need --code FILE or all of --n/--k/--q")
    return mds_from_singleton(args.n, args.k, gf(args.q))


# --- verify -----------------------------------------------------------------

def cmd_verify(args) -> int:
    state = parse_state(open(args.state).read())
    policy = "sample" if args.sample else "exhaustive"
    report = uniformity(
        state,
        k_max=args.k_max,
        policy=policy,
        sample_count=args.sample or 20,
        seed=args.seed,
    )
    result = {
        "n": report.n,
        "q": report.q,
        "mode": report.mode,
        "certifying": report.certifying,
        "max_verified_k": report.max_verified_k,
        "tallies": {str(k): list(v) for k, v in report.tallies.items()},
        "first_failure": report.first_failure,
        "support": state.support,
    }
    if args.json:
        _emit_json({"manifest": _manifest(args, [args.state]), "uniformity": result})
    else:
        label = "certified" if report.certifying else "sampled (non-certifying)"
        print(f"uniformity k = {report.max_verified_k} [{label}] "
              f"for {report.n}-party state over GF({report.q})")
        for size, (checked, passed) in sorted(report.tallies.items()):
            print(f"  |S| = {size}: {passed}/{checked} subsets maximally mixed")
        if report.first_failure:
            print(f"  first failure: {report.first_failure}")
    reached = args.k_max if args.k_max is not None else report.n // 2
    if report.max_verified_k < min(reached, report.n // 2):
        return EXIT_REFUTED
    return EXIT_OK if report.certifying else EXIT_SAMPLED


# --- certify ----------------------------------------------------------------

def cmd_certify(args) -> int:
    G = parse_matrix(open(args.g).read())
    Q = parse_qmatrix(open(args.q_matrix).read())
    cert = certify_ame_via_codes(G, Q)
    dec = cert.decomposition
    result = {
        "claim": cert.claim,
        "certified": cert.certified,
        "parent_mds": dec.parent_mds.is_mds,
        "parent_checks": cert.parent_checks,
        "kernel_mds": dec.kernel_mds.is_mds if dec.kernel_mds else False,
        "kernel_checks": cert.kernel_checks,
        "kernel_error": dec.kernel_error,
        "q_rank": dec.q_rank,
        "labels_onto": dec.labels_onto,
    }
    if args.json:
        _emit_json({"manifest": _manifest(args, [args.g, args.q_matrix]), "certificate": result})
    else:
        if cert.certified:
            print(f"certificate PASSED: {cert.claim} "
                  f"({cert.parent_checks} parent + {cert.kernel_checks} kernel rank checks)")
        else:
            print(f"certificate FAILED: {result}")
    return EXIT_OK if cert.certified else EXIT_REFUTED


# --- decompose --------------------------------------------------------------

def cmd_decompose(args) -> int:
    spec = gf(args.q)
    if args.search:
        G, _ = construct_G_Q(spec)
        Q = search_Q(G, budget=args.budget, seed=args.seed)
    else:
        G, Q = construct_G_Q(spec)
    if args.emit_g:
        open(args.emit_g, "w").write(format_matrix(G))
    if args.emit_q:
        open(args.emit_q, "w").write(format_qmatrix(Q))
    cert = certify_ame_via_codes(G, Q)
    result = {
        "q": args.q,
        "claim": cert.claim,
        "parent_checks": cert.parent_checks,
        "kernel_checks": cert.kernel_checks,
        "q1": list(Q.q1),
        "q2": list(Q.q2),
    }
    if args.json:
        _emit_json({"manifest": _manifest(args), "decomposition": result})
    else:
        print(f"GF({args.q}): G is {G.rows}x{G.cols}, Q1 = {list(Q.q1)}, Q2 = {list(Q.q2)}")
        print(f"certificate: {cert.claim or 'FAILED'}")
    return EXIT_OK if cert.certified else EXIT_REFUTED


# --- codes ------------------------------------------------------------------

def cmd_codes(args) -> int:
    if args.codes_mode == "mds":
        code = mds_from_singleton(args.n, args.k, gf(args.q))
        text = format_code(code)
        if args.output:
            open(args.output, "w").write(text)
            print(f"wrote MDS [{code.n},{code.k}]_{code.q} code to {args.output}")
        else:
            sys.stdout.write(text)
        return EXIT_OK
    if args.codes_mode == "check":
        code = parse_code(open(args.file).read())
        cert = is_mds(code, method=args.method)
        d = code.cached_distance
        result = {
            "n": code.n, "k": code.k, "q": code.q,
            "is_mds": cert.is_mds, "method": cert.method,
            "checks": cert.checks, "witness": cert.witness,
            "distance": d,
        }
        if args.json:
            _emit_json({"manifest": _manifest(args, [args.file]), "mds": result})
        else:
            verdict = "MDS" if cert.is_mds else f"not MDS (witness: {cert.witness})"
            print(f"[{code.n},{code.k}]_{code.q}: {verdict} "
                  f"via {cert.method} ({cert.checks} checks)")
        return EXIT_OK if cert.is_mds else EXIT_REFUTED
    if args.codes_mode == "distance":
        code = parse_code(open(args.file).read())
        d = min_distance(code, method=args.method)
        print(f"[{code.n},{code.k}]_{code.q}: d = {d}")
        return EXIT_OK
    raise KuniError(f"unknown codes mode {args.codes_mode!r}")


# --- table1 -----------------------------------------------------------------

# (k, n) -> (classical [n_cl, k_cl], quantum seed kind, seed party count)
_TABLE1_ROWS = {
    (2, 5): ((3, 2), "bell", 2),
    (2, 6): ((4, 2), "bell", 2),
    (2, 7): ((5, 2), "bell", 2),
    (2, 8): ((5, 3), "ghz", 3),
    (2, 9): ((6, 3), "ghz", 3),
    (2, 10): ((7, 3), "ghz", 3),
    (3, 11): ((7, 4), "ame4", 4),
    (3, 12): ((8, 4), "ame4", 4),
    (3, 13): ((9, 4), "ame4", 4),
    (3, 14): ((9, 5), "ame5", 5),
    (3, 15): ((10, 5), "ame5", 5),
    (3, 16): ((11, 5), "ame5", 5),
}

# quantum seed kind -> MDS code parameters its minimal-support basis needs
_SEED_CODE = {"bell": (2, 1), "ghz": (3, 1), "ame4": (4, 2), "ame5": (5, 2)}

_PRIME_POWERS = [2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19, 23, 25, 27, 29, 31, 32]

# exhaustive verification is attempted only below this work estimate
_EXHAUSTIVE_WORK_CAP = 5 * 10 ** 6


def _min_q_clq(n_cl: int, k_cl: int, seed_kind: str) -> int:
    sn, sk = _SEED_CODE[seed_kind]
    for q in _PRIME_POWERS:
        if mds_exists(n_cl, k_cl, q) and mds_exists(sn, sk, q):
            return q
    raise KuniError("no prime power in range")


def _min_q_mds(n: int, k: int) -> int:
    for q in _PRIME_POWERS:
        if any(mds_exists(n, kp, q) for kp in range(k, n // 2 + 1)):
            return q
    raise KuniError("no prime power in range")


def cmd_table1(args) -> int:
    rows = []
    sampled_any = False
    for (k, n), ((n_cl, k_cl), seed_kind, seed_n) in sorted(_TABLE1_ROWS.items()):
        if not (args.n_min <= n <= args.n_max and (args.k is None or k == args.k)):
            continue
        q_clq = _min_q_clq(n_cl, k_cl, seed_kind)
        q_mds = _min_q_mds(n, k)
        row = {"k": k, "n": n, "cl": f"[{n_cl},{k_cl}]", "seed": seed_kind,
               "clq_min_q": q_clq, "mds_min_q": q_mds}
        if args.verify:
            try:
                row.update(_table1_verify(n_cl, k_cl, seed_kind, seed_n, q_clq, k, args.seed))
            except KuniError as exc:
                row.update({"verified_k": None, "mode": "skipped", "why": str(exc)})
            if row.get("mode") == "sampled":
                sampled_any = True
        rows.append(row)
    if args.json:
        _emit_json({"manifest": _manifest(args), "table1": rows})
    else:
        for row in rows:
            line = (f"k={row['k']} n={row['n']:2d}  Cl {row['cl']:>7} + {row['seed']:<4} "
                    f"Cl+Q q>={row['clq_min_q']}  MDS q>={row['mds_min_q']}")
            if args.verify:
                line += f"  [{row.get('mode')}: k={row.get('verified_k')}]"
            print(line)
    return EXIT_SAMPLED if sampled_any else EXIT_OK


def _table1_verify(n_cl, k_cl, seed_kind, seed_n, q, k_target, seed):
    spec = gf(q)
    code = mds_from_singleton(n_cl, k_cl, spec)
    if seed_kind == "bell":
        quantum = bell_pair(spec)
    elif seed_kind == "ghz":
        quantum = ghz(seed_n, spec)
    else:
        from .states import state_from_code

        sn, sk = _SEED_CODE[seed_kind]
        quantum = state_from_code(mds_from_singleton(sn, sk, spec))
    state = cl_plus_q(code, quantum, variant="direct")
    n = state.n
    import math

    work = sum(math.comb(n, s) for s in range(1, k_target + 1)) * state.support
    if work <= _EXHAUSTIVE_WORK_CAP and q ** k_target <= 4096:
        rep = uniformity(state, k_max=k_target, policy="exhaustive")
    else:
        rep = uniformity(state, k_max=k_target, policy="sample",
                         sample_count=10, seed=seed if seed is not None else 0)
    return {"verified_k": rep.max_verified_k, "mode": rep.mode,
            "support": state.support}


# --- parser -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="kuni",
                                 description="k-uniform / AME state construction and exact certification")
    sub = ap.add_subparsers(dest="cmd", required=True)

    c = sub.add_parser("construct", help="build a state and write it to a file")
    c.add_argument("mode", choices=["from-code", "clq", "clq-rep", "builtin"])
    c.add_argument("--code", help="code file (CODE header + matrix)")
    c.add_argument("--n", type=int)
    c.add_argument("--k", type=int)
    c.add_argument("--q", type=int)
    c.add_argument("--l", type=int)
    c.add_argument("--m", type=int)
    c.add_argument("--name", help="builtin name")
    c.add_argument("--seed-state", default="bell", help="clq quantum seed: bell | ghz")
    c.add_argument("--variant", default="direct", choices=["direct", "dual"])
    c.add_argument("--g", help="generator matrix file (clq-rep)")
    c.add_argument("--q-matrix", help="Q matrix file (clq-rep)")
    c.add_argument("--emit-g", help="output path for builtin matrices")
    c.add_argument("--emit-q", help="output path for builtin matrices")
    c.add_argument("-o", "--output")
    c.set_defaults(func=cmd_construct)

    v = sub.add_parser("verify", help="uniformity sweep of a state file")
    v.add_argument("state")
    v.add_argument("--k-max", type=int)
    v.add_argument("--sample", type=int, help="sample N subsets per size instead of all")
    v.add_argument("--seed", type=int)
    v.add_argument("--json", action="store_true")
    v.set_defaults(func=cmd_verify)

    ce = sub.add_parser("certify", help="algebraic AME certificate from (G, Q) files")
    ce.add_argument("--g", required=True)
    ce.add_argument("--q-matrix", "--q", dest="q_matrix", required=True)
    ce.add_argument("--json", action="store_true")
    ce.set_defaults(func=cmd_certify)

    d = sub.add_parser("decompose", help="build (G, Q) for GF(q) and certify it")
    d.add_argument("--q", type=int, required=True)
    d.add_argument("--search", action="store_true",
                   help="find Q by search instead of the closed-form assembly")
    d.add_argument("--budget", type=int, default=10 ** 6)
    d.add_argument("--seed", type=int)
    d.add_argument("--emit-g")
    d.add_argument("--emit-q")
    d.add_argument("--json", action="store_true")
    d.set_defaults(func=cmd_decompose)

    co = sub.add_parser("codes", help="MDS code construction and checking")
    cos = co.add_subparsers(dest="codes_mode", required=True)
    com = cos.add_parser("mds")
    com.add_argument("--n", type=int, required=True)
    com.add_argument("--k", type=int, required=True)
    com.add_argument("--q", type=int, required=True)
    com.add_argument("-o", "--output")
    coc = cos.add_parser("check")
    coc.add_argument("file")
    coc.add_argument("--method", default="columns",
                     choices=["distance", "submatrix", "columns"])
    coc.add_argument("--json", action="store_true")
    cod = cos.add_parser("distance")
    cod.add_argument("file")
    cod.add_argument("--method", default="auto", choices=["auto", "brute", "rank"])
    co.set_defaults(func=cmd_codes)

    t = sub.add_parser("table1", help="reproduce the Cl+Q vs MDS dimension comparison")
    t.add_argument("--k", type=int)
    t.add_argument("--n-min", type=int, default=5)
    t.add_argument("--n-max", type=int, default=10)
    t.add_argument("--verify", action="store_true")
    t.add_argument("--seed", type=int)
    t.add_argument("--json", action="store_true")
    t.set_defaults(func=cmd_table1)

    return ap


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    args._command_line = ["kuni"] + argv
    try:
        return args.func(args)
    except KuniError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
