"""Command-line front end.

Exit status: 0 on success, 1 when a verification fails (a code is not normal,
a patched code has violations, a construction hypothesis does not hold),
2 on usage errors and malformed input files.
"""
from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import constructions as cons
from . import density as dens
from . import patching as pat
from .hypercube import (
    INF,
    N_LIMIT_ENV,
    CodeFormatError,
    ExhaustiveLimitError,
    read_code,
    write_code,
)
from .oracle import SearchCache, search_optimal
from .radius_norm import PatchedCode, RadiusMismatchError, check_norm_patched, norm, norm_report, radius
from .serialize import dumps, ext


class VerificationFailed(Exception):
    def __init__(self, payload: dict):
        self.payload = payload


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    modes = p.add_mutually_exclusive_group()
    modes.add_argument("--symmetric", dest="mode", action="store_const", const="symmetric",
                       help="symmetric covering (default)")
    modes.add_argument("--asymmetric", dest="mode", action="store_const", const="asymmetric",
                       help="asymmetric (downward) covering")
    p.set_defaults(mode="symmetric")
    p.add_argument("--format", choices=("json", "table"), default="json", help="report format")
    p.add_argument("--n-limit", type=int, help=f"exhaustive length cap (overrides {N_LIMIT_ENV})")
    p.add_argument("--threads", type=int, default=1, help="worker cap; results do not depend on it")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="covercraft", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", parents=[common], help="radius, norms, normality, patched-code validity")
    what = v.add_mutually_exclusive_group(required=True)
    what.add_argument("--radius", dest="check", action="store_const", const="radius")
    what.add_argument("--norm", dest="check", action="store_const", const="norm")
    what.add_argument("--normal", dest="check", action="store_const", const="normal")
    what.add_argument("--patched", dest="check", action="store_const", const="patched")
    v.add_argument("--file", type=Path, help="code file (S for --patched)")
    v.add_argument("--patch", type=Path, help="patch file T for --patched")
    v.add_argument("--coordinate", type=int, help="coordinate (1-based); default n for --patched")
    v.add_argument("--target-norm", type=int, help="N for --patched")
    v.add_argument("--R", type=int, help="claimed covering radius for --normal")
    v.add_argument("--threshold", type=int, help="acceptability threshold for --norm (default 2R+1)")

    c = sub.add_parser("construct", help="direct sum, ADS and ASDS")
    csub = c.add_subparsers(dest="construction", required=True)
    for name in ("direct-sum", "ads"):
        cp = csub.add_parser(name, parents=[common])
        cp.add_argument("--left", type=Path, required=True)
        cp.add_argument("--right", type=Path, required=True)
        _construct_outputs(cp)
    ap = csub.add_parser("asds", parents=[common])
    ap.add_argument("--S", type=Path, required=True)
    ap.add_argument("--T", type=Path, required=True)
    ap.add_argument("--K1", type=Path, required=True)
    ap.add_argument("--K2", type=Path, required=True)
    ap.add_argument("--target-norm", type=int, required=True, help="N of the patched code")
    _construct_outputs(ap)

    for name in ("sample-patch", "estimate-patch"):
        sp = sub.add_parser(name, parents=[common])
        sp.add_argument("--n", type=int, required=True)
        sp.add_argument("--N", type=int, required=True)
        sp.add_argument("--x", type=float, required=True)
        sp.add_argument("--R", type=int, help="radius for the rare thresholds (asymmetric)")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--saturate", action="store_true", help="cap k at the half-cube size")
        if name == "sample-patch":
            sp.add_argument("--out-S", type=Path)
            sp.add_argument("--out-T", type=Path)
        else:
            sp.add_argument("--trials", type=int, default=200)

    t = sub.add_parser("tau", parents=[common], help="evaluate the patch-size bound")
    t.add_argument("--n", type=int, required=True)
    t.add_argument("--N", type=int, required=True)
    t.add_argument("--x", type=float, required=True)
    t.add_argument("--R", type=int)

    r = sub.add_parser("rare", parents=[common], help="rare-weight thresholds and counts")
    r.add_argument("--n", type=int, required=True)
    r.add_argument("--R", type=int, required=True)
    r.add_argument("--out", type=Path, help="write the rare words as a code file")

    b = sub.add_parser("bound", parents=[common], help="root x0 and the closed-form density bound")
    b.add_argument("--R", type=int, help="single radius")
    b.add_argument("--R-min", type=int, default=2)
    b.add_argument("--R-max", type=int)

    d = sub.add_parser("density", parents=[common])
    d.add_argument("--file", type=Path, required=True)
    d.add_argument("--R", type=int, help="covering radius (default: computed)")

    s = sub.add_parser("search", parents=[common], help="exact small optimal codes")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--R", type=int, required=True)
    s.add_argument("--normal", action="store_true", help="also find the smallest normal code")
    s.add_argument("--budget", type=int, default=2_000_000)
    s.add_argument("--cache", type=Path, help="JSON cache of search results")
    s.add_argument("--out", type=Path, help="write the (normal) witness")

    br = sub.add_parser("build-recursive", parents=[common], help="sampled ASDS construction")
    br.add_argument("--n", type=int, required=True)
    br.add_argument("--R", type=int, required=True)
    br.add_argument("--x", type=float, required=True)
    br.add_argument("--seed", type=int, default=0)
    br.add_argument("--K1", type=Path)
    br.add_argument("--K2", type=Path)
    sat = br.add_mutually_exclusive_group()
    sat.add_argument("--saturate", dest="saturate", action="store_true", default=None)
    sat.add_argument("--no-saturate", dest="saturate", action="store_false")
    br.add_argument("--out", type=Path)
    br.add_argument("--certificate", type=Path)
    return parser


def _construct_outputs(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", type=Path, help="result code file")
    p.add_argument("--certificate", type=Path, help="write the JSON certificate here too")
    p.add_argument("--unchecked", action="store_true", help="skip hypothesis checks")


# --- handlers ---------------------------------------------------------------------------------

def _need(args, name: str):
    value = getattr(args, name)
    if value is None:
        raise ValueError(f"--{name.replace('_', '-')} is required here")
    return value


def _verify(args) -> dict:
    C = read_code(_need(args, "file"))
    mode = args.mode
    if args.check == "radius":
        return {"mode": mode, "n": C.length, "size": len(C), "radius": radius(C, mode)}
    if args.check == "norm":
        if args.coordinate is not None:
            return {"mode": mode, "coordinate": args.coordinate, "norm": norm(C, args.coordinate, mode)}
        rep = norm_report(C, mode, args.threshold)
        return {"radius": radius(C, mode), **rep.as_dict()}
    if args.check == "normal":
        r = radius(C, mode)
        rep = norm_report(C, mode)
        payload = {"mode": mode, "radius": r, **rep.as_dict()}
        if args.R is not None and args.R != r:
            payload.update(normal=False, error=str(RadiusMismatchError(args.R, r, mode)))
            raise VerificationFailed(payload)
        normal = r != INF and rep.min_norm in (2 * r, 2 * r + 1)
        payload["normal"] = normal
        if not normal:
            raise VerificationFailed(payload)
        return payload
    T = read_code(_need(args, "patch"), C.length)
    i = args.coordinate if args.coordinate is not None else C.length
    P = PatchedCode(C, T, i, _need(args, "target_norm"), mode)
    check = check_norm_patched(P)
    payload = {"mode": mode, "coordinate": i, "target_norm": P.target_norm, "valid": check.valid,
               "violation_count": len(check.violations),
               "violations": [str(w) for w in check.violations]}
    if not check.valid:
        raise VerificationFailed(payload)
    return payload


def _construct(args) -> dict:
    mode, strict = args.mode, not args.unchecked
    cert: dict = {"construction": args.construction, "mode": mode, "strict": strict}
    try:
        if args.construction == "direct-sum":
            A, B = read_code(args.left), read_code(args.right)
            C = cons.direct_sum(A, B)
            cert.update(lengths=[A.length, B.length], sizes=[len(A), len(B)])
            if strict:
                ra, rb, rc = radius(A, mode), radius(B, mode), radius(C, mode)
                cert.update(radii=[ra, rb], result_radius=rc, radius_additive=rc <= ra + rb)
        elif args.construction == "ads":
            A, B = read_code(args.left), read_code(args.right)
            C = cons.ads(A, B, mode, strict=strict)
            cert.update(lengths=[A.length, B.length], sizes=[len(A), len(B)],
                        glue_coordinate=A.length, size_formula=cons.ads_size(A, B))
            if strict:
                na, nb = norm(A, A.length, mode), norm(B, 1, mode)
                cert.update(operand_norms=[na, nb], norm_bound=na + nb - 1,
                            result_norm=norm(C, A.length, mode), hypotheses_verified=True)
        else:
            S, T = read_code(args.S), read_code(args.T, None)
            K1, K2 = read_code(args.K1), read_code(args.K2)
            if T.length != S.length:
                raise ValueError("S and T must have the same length")
            P = PatchedCode(S, T, S.length, args.target_norm, mode)
            C = cons.asds(P, K1, K2, strict=strict)
            cert.update(lengths=[S.length, K1.length], sizes={"S": len(S), "T": len(T), "K1": len(K1),
                                                             "K2": len(K2)},
                        glue_coordinate=S.length, size_bound=cons.asds_size_bound(P, K1, K2))
            if strict:
                n1 = norm(K1, 1, mode)
                cert.update(norm_bound=args.target_norm + n1 - 1, result_norm=norm(C, S.length, mode),
                            hypotheses_verified=True)
    except cons.HypothesisError as exc:
        raise VerificationFailed({**cert, "hypotheses_verified": False, "error": str(exc)}) from exc
    cert.update(length=C.length, size=len(C))
    if args.out:
        write_code(C, args.out)
    else:
        cert["words"] = C.strings()
    if args.certificate:
        args.certificate.write_text(dumps(cert) + "\n")
    return cert


def _params(args) -> pat.PatchSampleParams:
    return pat.PatchSampleParams(args.n, args.N, args.x, R=args.R, seed=args.seed, mode=args.mode,
                                 saturate=args.saturate)


def _sample(args) -> dict:
    params = _params(args)
    P = pat.sample_patched(params)
    check = check_norm_patched(P)
    if args.out_S:
        write_code(P.S, args.out_S)
    if args.out_T:
        write_code(P.T, args.out_T)
    payload = {"n": params.n, "N": params.N, "x": params.x, "R": params.R, "mode": params.mode,
               "seed": params.seed, "k": params.k, "S_size": len(P.S), "T_size": len(P.T),
               "tau": params.reference_bound(), "valid": check.valid}
    if not check.valid:
        raise VerificationFailed(payload)
    return payload


def _estimate(args) -> dict:
    return pat.estimate_patch(_params(args), args.trials, workers=args.threads).as_dict()


def _tau(args) -> dict:
    if args.mode == "symmetric":
        value = pat.tau(args.n, args.N, args.x)
    else:
        value = pat.tau_asym(args.n, args.N, _need(args, "R"), args.x)
    return {"n": args.n, "N": args.N, "x": args.x, "R": args.R, "mode": args.mode, "tau": value,
            "large_n_form": pat.tau_limit(args.n, args.N, args.x, args.mode)}


def _rare(args) -> dict:
    spec = pat.rare_spec(args.n, args.R)
    if args.out:
        write_code(pat.rare_set(args.n, args.R), args.out)
    return {"n": args.n, "R": args.R, "hi": spec.hi, "lo": spec.lo,
            "count": pat.rare_count(args.n, args.R), "chernoff_bound": pat.rare_bound(args.n, args.R)}


def _bound(args) -> dict:
    if args.R is not None:
        return dens.theorem_bound(args.R, args.mode).as_dict()
    hi = args.R_max if args.R_max is not None else args.R_min
    return {"mode": args.mode,
            "rows": [dens.theorem_bound(R, args.mode).as_dict() for R in range(args.R_min, hi + 1)]}


def _density(args) -> dict:
    C = read_code(args.file)
    R = args.R if args.R is not None else radius(C, args.mode)
    try:
        return dens.density(C, R, args.mode).as_dict()
    except RadiusMismatchError as exc:
        raise VerificationFailed({"mode": args.mode, "R": args.R, "radius": exc.computed,
                                  "error": str(exc)}) from exc


def _search(args) -> dict:
    kwargs = {"budget": args.budget}
    if args.cache:
        result = SearchCache(args.cache).search(args.n, args.R, args.mode, args.normal, **kwargs)
    else:
        result = search_optimal(args.n, args.R, args.mode, args.normal, **kwargs)
    if args.out:
        write_code(result.normal_witness if args.normal and result.normal_witness else result.witness,
                   args.out)
    return result.as_dict()


def _build(args) -> dict:
    K1 = read_code(args.K1) if args.K1 else None
    K2 = read_code(args.K2) if args.K2 else None
    try:
        build = dens.recursive_construct(args.n, args.R, args.x, args.mode, args.seed, K1, K2,
                                         saturate=args.saturate)
    except cons.HypothesisError as exc:
        raise VerificationFailed({"error": str(exc)}) from exc
    payload = build.as_dict()
    if args.out:
        write_code(build.code, args.out)
    if args.certificate:
        args.certificate.write_text(dumps(payload) + "\n")
    if not build.normal:
        raise VerificationFailed(payload)
    return payload


HANDLERS = {
    "verify": _verify, "construct": _construct, "sample-patch": _sample,
    "estimate-patch": _estimate, "tau": _tau, "rare": _rare, "bound": _bound,
    "density": _density, "search": _search, "build-recursive": _build,
}


def _table(payload: dict) -> str:
    rows = payload.get("rows")
    if rows:
        keys = list(rows[0])
        lines = ["  ".join(f"{k:>14}" for k in keys)]
        for row in rows:
            lines.append("  ".join(f"{_cell(row[k]):>14}" for k in keys))
        return "\n".join(lines)
    width = max(len(k) for k in payload)
    return "\n".join(f"{k:<{width}}  {_cell(v)}" for k, v in sorted(payload.items()))


def _cell(v) -> str:
    v = ext(v)
    if isinstance(v, float):
        return f"{v:.10g}"
    if isinstance(v, dict):
        return ", ".join(f"{k}={_cell(x)}" for k, x in v.items())
    if isinstance(v, list):
        return " ".join(str(_cell(x)) for x in v) if len(v) <= 16 else f"[{len(v)} items]"
    return str(v)


def _emit(payload: dict, fmt: str, stream) -> None:
    print(dumps(payload) if fmt == "json" else _table(payload), file=stream)


def run(argv: list[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    previous = os.environ.get(N_LIMIT_ENV)
    if args.n_limit is not None:
        os.environ[N_LIMIT_ENV] = str(args.n_limit)
    try:
        payload = HANDLERS[args.command](args)
    except VerificationFailed as exc:
        _emit(exc.payload, args.format, stdout)
        return 1
    except (CodeFormatError, ExhaustiveLimitError, FileNotFoundError, ValueError) as exc:
        print(f"covercraft {args.command}: error: {exc}", file=stderr)
        return 2
    finally:
        # the override applies to this invocation only
        if args.n_limit is not None:
            if previous is None:
                os.environ.pop(N_LIMIT_ENV, None)
            else:
                os.environ[N_LIMIT_ENV] = previous
    _emit(payload, args.format, stdout)
    return 0


def main() -> None:
    sys.exit(run())
