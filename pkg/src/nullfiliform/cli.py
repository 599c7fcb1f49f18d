"""Command-line interface: ``nullfil <verb> [options]``.

Exit status is 0 on success, 1 when the mathematical answer is negative (an
identity fails, no isomorphism exists, a seed is inconsistent, a census has
anomalies) and 2 on usage or domain errors.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path

from . import kernels
from .automorphism import (
    AutoParams,
    IdParams,
    TwelveParams,
    params_from_json,
    transform_12_params,
    transform_id_params,
)
from .canonical import CanonicalForm, normalize, realize
from .derive import TwelveSeed, derive_12_star, id_star, solution_space_dimension, twelve_star
from .errors import InconsistentSeed, NullFiliformError
from .oracle import FLAGGED_STEPS, audit_normalization_steps, brute_force_isomorphism, verify_classification
from .sampling import rand_id_params, rand_twelve_params
from .scalars import QQ, parse_domain, scalar_from_json
from .tensor import BiAlgebra, IdentityKind, StructureTensor, check_identity, make_null_filiform

KINDS = [k.value.replace("_", "-") for k in IdentityKind]


class UsageError(Exception):
    pass


def _load(arg: str | None, what: str):
    if arg is None:
        raise UsageError(f"--{what} is required")
    if arg.lstrip().startswith(("{", "[")):
        text = arg
    elif arg == "-":
        text = sys.stdin.read()
    else:
        try:
            text = Path(arg).read_text()
        except OSError as e:
            raise UsageError(f"cannot read {arg}: {e}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise UsageError(f"invalid JSON for --{what}: {e}") from None


def _domain(args, obj=None):
    if args.domain:
        return parse_domain(args.domain)
    if isinstance(obj, dict) and "domain" in obj:
        return parse_domain(obj["domain"])
    return QQ


def _alg(params, dom) -> BiAlgebra:
    if isinstance(params, IdParams):
        star = id_star(params.alpha, dom)
    else:
        star = twelve_star(params.alpha, params.beta, dom)
    return BiAlgebra(make_null_filiform(star.dim, dom), star)


def cmd_make(args):
    """mu_0^n with a zero second product, a given family member, or a random one."""
    dom = _domain(args)
    if args.params:
        params = params_from_json(_load(args.params, "params"), dom)
    elif args.random is not None:
        if args.n is None:
            raise UsageError("--random needs --n")
        rng = random.Random(args.random)
        kind = IdentityKind.parse(args.kind or "id-matching")
        if kind == IdentityKind.TWELVE_MATCHING:
            params = rand_twelve_params(rng, args.n, dom)
        else:
            params = rand_id_params(rng, args.n, dom)
    else:
        if args.n is None:
            raise UsageError("make needs --n or --params")
        dot = make_null_filiform(args.n, dom)
        return BiAlgebra(dot, StructureTensor(args.n, dom)).to_json(), 0
    out = _alg(params, dom).to_json()
    out["params"] = params.to_json()
    return out, 0


def cmd_check(args):
    obj = _load(args.algebra, "algebra")
    if args.domain:
        obj = dict(obj, domain=args.domain)
    alg = BiAlgebra.from_json(obj)
    kinds = [args.kind] if args.kind else [k.value for k in IdentityKind]
    results = [check_identity(alg, k) for k in kinds]
    out = results[0].to_json() if args.kind else {"results": [r.to_json() for r in results]}
    return out, 0 if all(r.holds for r in results) else 1


def cmd_derive(args):
    obj = _load(args.seed or args.params, "seed")
    dom = _domain(args, obj)
    alpha = [scalar_from_json(a, dom) for a in obj["alpha"]]
    if obj.get("kind", "id") == "id":
        star = id_star(alpha, dom)
        return {"algebra": BiAlgebra(make_null_filiform(star.dim, dom), star).to_json(), "branch": "id"}, 0
    beta = [scalar_from_json(b, dom) for b in obj["beta"]]
    try:
        res = derive_12_star(TwelveSeed(tuple(alpha), tuple(beta)), dom)
    except InconsistentSeed as e:
        return {"error": "InconsistentSeed", "message": str(e)}, 1
    alg = BiAlgebra(make_null_filiform(res.star.dim, dom), res.star)
    return {"algebra": alg.to_json(), "derivation": res.to_json()}, 0


def cmd_transform(args):
    obj = _load(args.params, "params")
    dom = _domain(args, obj)
    params = params_from_json(obj, dom)
    A = AutoParams.from_json(_load(args.auto, "auto"), dom)
    fn = transform_12_params if isinstance(params, TwelveParams) else transform_id_params
    return fn(params, A).to_json(), 0


def cmd_normalize(args):
    obj = _load(args.params, "params")
    dom = _domain(args, obj)
    return normalize(params_from_json(obj, dom), dom).to_json(), 0


def cmd_realize(args):
    dom = _domain(args)
    if args.params:
        obj = _load(args.params, "params")
        obj = obj.get("form", obj)
        if args.n is not None:
            obj = dict(obj, n=args.n)
        form = CanonicalForm.from_json(obj, dom)
    else:
        if not args.tag or args.n is None:
            raise UsageError("realize needs --params or --tag and --n")
        ps = []
        for item in args.param or []:
            k, sep, v = item.partition("=")
            if not sep:
                raise UsageError(f"--param expects name=value, got {item!r}")
            ps.append((k, dom.convert(v)))
        form = CanonicalForm(args.tag, args.n, args.s, args.r, tuple(ps))
    return realize(form, domain=dom).to_json(), 0


def cmd_oracle(args):
    if args.oracle_verb == "dims":
        kinds = [args.kind] if args.kind else ["id-matching", "twelve-matching"]
        out = {k: solution_space_dimension(args.n, k, args.p) for k in kinds}
        return {"n": args.n, "p": args.p, "dimensions": out}, 0
    if args.oracle_verb == "census":
        rep = verify_classification(args.n, args.kind or "id-matching", args.p)
        return rep.to_json(), 0 if not rep.anomalies else 1
    if args.oracle_verb == "iso":
        a = BiAlgebra.from_json(_load(args.algebra, "algebra"))
        b = BiAlgebra.from_json(_load(args.other, "other"))
        A = brute_force_isomorphism(a, b)
        if A is None:
            return {"isomorphic": False}, 1
        return {"isomorphic": True, "witness": A.to_json()}, 0
    if args.oracle_verb == "audit":
        rep = audit_normalization_steps(args.n, args.trials, args.seed or 0)
        out = rep.to_json()
        unexpected = [e.step for e in rep.disagreements if e.step not in FLAGGED_STEPS]
        out["unexpected_disagreements"] = unexpected
        return out, 0 if not unexpected else 1
    raise UsageError("oracle needs a sub-verb: dims, census, iso, audit")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--domain", help="q, fp:<p> or poly:<vars>")
    common.add_argument("--threads", type=int, help="worker threads for the parallel kernels (default: all cores)")
    common.add_argument("--out", default="-", help="output file, or - for stdout")

    ap = argparse.ArgumentParser(prog="nullfil", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("make", parents=[common], help="build a structure from parameters or at random")
    p.add_argument("--n", type=int)
    p.add_argument("--kind", choices=["id-matching", "twelve-matching"])
    p.add_argument("--params", help="family parameters (file, - or inline JSON)")
    p.add_argument("--random", type=int, metavar="RNG_SEED", help="random member of the --kind family")

    p = sub.add_parser("check", parents=[common], help="test an identity on an algebra")
    p.add_argument("--algebra", required=True)
    p.add_argument("--kind", choices=KINDS)

    p = sub.add_parser("derive", parents=[common], help="expand an id or (12) seed")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--seed", help="seed JSON (file, - or inline)")
    g.add_argument("--params", help="same as --seed")

    p = sub.add_parser("transform", parents=[common], help="transport parameters by an automorphism")
    p.add_argument("--params", required=True)
    p.add_argument("--auto", required=True)

    p = sub.add_parser("normalize", parents=[common], help="canonical form and witness chain")
    p.add_argument("--params", required=True)

    p = sub.add_parser("realize", parents=[common], help="structure named by a canonical form")
    p.add_argument("--params")
    p.add_argument("--tag")
    p.add_argument("--n", type=int)
    p.add_argument("--s", type=int)
    p.add_argument("--r", type=int)
    p.add_argument("--param", action="append", metavar="NAME=VALUE")

    p = sub.add_parser("oracle", help="brute-force checks over F_p")
    osub = p.add_subparsers(dest="oracle_verb", required=True)
    q = osub.add_parser("dims", parents=[common])
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--kind", choices=["compatible", "id-matching", "twelve-matching", "interchangeable",
                                      "totally-compatible"])
    q.add_argument("--p", type=int, default=7)
    q = osub.add_parser("census", parents=[common])
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--kind", choices=["id-matching", "twelve-matching"])
    q.add_argument("--p", type=int, default=5)
    q = osub.add_parser("iso", parents=[common])
    q.add_argument("--algebra", required=True)
    q.add_argument("--other", required=True)
    q = osub.add_parser("audit", parents=[common])
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--trials", type=int, default=20)
    q.add_argument("--seed", type=int, default=0)
    return ap


VERBS = {
    "make": cmd_make,
    "check": cmd_check,
    "derive": cmd_derive,
    "transform": cmd_transform,
    "normalize": cmd_normalize,
    "realize": cmd_realize,
    "oracle": cmd_oracle,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "threads", None) is not None:
        if args.threads < 1:
            print("nullfil: --threads must be at least 1", file=sys.stderr)
            return 2
        kernels.set_threads(args.threads)
    try:
        out, code = VERBS[args.verb](args)
    except UsageError as e:
        print(f"nullfil: {e}", file=sys.stderr)
        return 2
    except (NullFiliformError, ValueError, KeyError, TypeError) as e:
        print(f"nullfil: {type(e).__name__}: {e}", file=sys.stderr)
        return 2
    text = json.dumps(out, indent=2)
    if getattr(args, "out", "-") not in (None, "-"):
        Path(args.out).write_text(text + "\n")
    else:
        print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
