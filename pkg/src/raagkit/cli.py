"""raagkit command line.

Exit status: 0 decided true / success, 1 decided false, 2 undecided (a
search budget ran out), 64 usage error, 65 invalid input data, 66 missing
input file.
"""

import argparse
import json
import sys
from dataclasses import replace

from . import bb, conjugacy, hnn, quotient, special
from .config import BudgetExceeded, budget_from_env
from .graph import GraphError, load_graph
from .perm import FiniteGroup
from .word import Word, cyclic_reduce, nth_root

EX_TRUE, EX_FALSE, EX_UNDECIDED = 0, 1, 2
EX_USAGE, EX_DATAERR, EX_NOINPUT = 64, 65, 66


class UsageError(Exception):
    code = EX_USAGE


class DataError(Exception):
    code = EX_DATAERR


class NoInput(Exception):
    code = EX_NOINPUT


class Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _read(path):
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path) as fh:
            return fh.read()
    except FileNotFoundError:
        raise NoInput(f"no such file: {path}")


def _load_json(path):
    text = _read(path)
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise DataError(f"{path}: invalid JSON at line {e.lineno} column {e.colno}: {e.msg}")


class Ctx:
    def __init__(self, args):
        self.args = args
        if not getattr(args, "graph", None):
            raise UsageError("a graph is required (-g FILE)")
        try:
            self.graph = load_graph(_read(args.graph))
        except GraphError as e:
            raise DataError(f"{args.graph}: {e}")
        budget = budget_from_env()
        if args.budget is not None:
            budget = replace(budget, homs=args.budget, race_steps=max(args.budget, 1) * 50)
        if args.seed is not None:
            budget = replace(budget, seed=args.seed)
        self.budget = budget
        self.solver = conjugacy.Solver(self.graph, budget)

    def word(self, text):
        try:
            return Word.parse(self.graph, text)
        except ValueError as e:
            raise DataError(f"word {text!r}: {e}")

    def vset(self, text):
        if text is None:
            return None
        names = [v for v in text.split(",") if v]
        try:
            return self.graph.mask(names)
        except GraphError as e:
            raise DataError(str(e))

    def names(self, m):
        return [v for v in self.graph.vertices if v in self.graph.names(m)]


def _parabolic_json(ctx, p):
    return {"conj": str(p.conj), "sub": ctx.names(p.base)}


# -- commands ---------------------------------------------------------------

def cmd_reduce(ctx, a):
    g = ctx.word(a.word)
    return EX_TRUE, {"value": str(g), "length": len(g), "support": ctx.names(g.support_mask())}


def cmd_cyclic_reduce(ctx, a):
    cf = cyclic_reduce(ctx.word(a.word))
    return EX_TRUE, {"conj": str(cf.conj), "core": str(cf.core)}


def cmd_root(ctx, a):
    if a.n < 1:
        raise UsageError("n must be positive")
    r = nth_root(ctx.word(a.word), a.n)
    if r is None:
        return EX_FALSE, {"root": None}
    return EX_TRUE, {"root": str(r)}


def cmd_member(ctx, a):
    if a.kind == "special":
        g = ctx.word(a.words[0])
        ok = g.in_special(ctx.vset(a.sub or ""))
        return (EX_TRUE if ok else EX_FALSE), {"member": ok}
    if a.kind == "parabolic":
        g = ctx.word(a.words[0])
        p = special.Parabolic(ctx.word(a.conj or ""), ctx.vset(a.sub or ""))
        ok = g in p
        return (EX_TRUE if ok else EX_FALSE), {"member": ok}
    if len(a.words) != 2:
        raise UsageError("member dc needs X and Y")
    x, y = ctx.word(a.words[0]), ctx.word(a.words[1])
    A, B = ctx.vset(a.left or ""), ctx.vset(a.right or "")
    ok, ab = special.dc_member(A, x, B, y, ctx.solver)
    out = {"member": ok, "left": ctx.names(A), "right": ctx.names(B), "x": str(x), "y": str(y)}
    if ok:
        out["certificate"] = {"type": "double_coset", "a": str(ab[0]), "b": str(ab[1])}
    return (EX_TRUE if ok else EX_FALSE), out


def cmd_intersect(ctx, a):
    p = special.Parabolic(ctx.word(a.conj1 or ""), ctx.vset(a.sub1 or ""))
    q = special.Parabolic(ctx.word(a.conj2 or ""), ctx.vset(a.sub2 or ""))
    r = special.intersect_parabolics(p, q)
    return EX_TRUE, {"intersection": _parabolic_json(ctx, r), "text": str(r)}


def cmd_conj(ctx, a):
    g, f = ctx.word(a.g), ctx.word(a.f)
    B = ctx.vset(a.sub)
    if B is None:
        cert = conjugacy.conjugate_g(g, f, ctx.solver)
    else:
        cert = conjugacy.conjugate_sub(B, g, f, ctx.solver)
    out = {"g": str(g), "f": str(f), "conjugate": cert.conjugate, "certificate": cert.to_json()}
    if B is not None:
        out["sub"] = ctx.names(B)
    return (EX_TRUE if cert.conjugate else EX_FALSE), out


def cmd_centralizer(ctx, a):
    g = ctx.word(a.word)
    B = ctx.vset(a.sub)
    C = conjugacy.centralizer_in_special(ctx.graph.full if B is None else B, g, ctx.solver)
    out = {"g": str(g), "generators": [str(w) for w in C.generators], "kind": C.kind}
    if B is not None:
        out["sub"] = ctx.names(B)
    return EX_TRUE, out


def _kernel_arg(ctx, path):
    if path is None:
        raise UsageError("--kernel HOMFILE is required")
    data = _load_json(path)
    try:
        hom = quotient.hom_from_json(ctx.graph, data)
    except (KeyError, ValueError) as e:
        raise DataError(f"{path}: {e}")
    if hom.J != ctx.graph.full:
        raise DataError(f"{path}: the homomorphism must be defined on every vertex")
    return quotient.kernel(hom)


def cmd_witness(ctx, a):
    B = ctx.vset(a.sub)
    if a.kind == "separate":
        if len(a.words) != 2:
            raise UsageError("witness separate needs two words")
        g, f = ctx.word(a.words[0]), ctx.word(a.words[1])
        cert = conjugacy.conjugate_sub(ctx.graph.full if B is None else B, g, f, ctx.solver)
        if cert.conjugate:
            return EX_FALSE, {"g": str(g), "f": str(f), "conjugate": True,
                              "certificate": cert.to_json()}
        w = quotient.separate_conjugacy(g, f, B, ctx.budget, ctx.budget.seed)
        if not quotient.verify_separation(w.hom, g, f, B):
            raise AssertionError("witness failed re-verification")
        out = {"g": str(g), "f": str(f), "certificate": {"type": "finite_quotient", **w.to_json()}}
        if B is not None:
            out["sub"] = ctx.names(B)
        return EX_TRUE, out
    if len(a.words) != 1:
        raise UsageError("witness cc needs one word")
    g = ctx.word(a.words[0])
    K = _kernel_arg(ctx, a.kernel)
    w = quotient.cc_witness(B, g, K, ctx.budget, ctx.budget.seed, ctx.solver)
    out = {"g": str(g), "kernel": K.hom.to_json(),
           "certificate": {"type": "finite_quotient", **w.to_json()}}
    if B is not None:
        out["sub"] = ctx.names(B)
    return EX_TRUE, out


def cmd_refine(ctx, a):
    K = _kernel_arg(ctx, a.kernel)
    retracts = [ctx.vset(r) for r in (a.retract or [])]
    if not retracts:
        raise UsageError("give at least one --retract")
    ref = quotient.invariant_refinement(ctx.graph, retracts, K)
    report = quotient.verify_refinement(ref, words=not a.fast)
    ok = report["ok"] and quotient.check_intersection_preserved(retracts, ref.M)
    M = ref.M.as_kernel()
    return (EX_TRUE if ok else EX_FALSE), {"index": M.index(), "hom": M.hom.to_json(),
                                           "checks": report, "intersections": ok}


# hnn ------------------------------------------------------------------------

def _hnn_group(path):
    data = _load_json(path)
    try:
        Q = FiniteGroup([tuple(p) for p in data["generators"]], data.get("degree"))
        H = FiniteGroup([tuple(p) for p in data.get("hbar_generators", [])], Q.degree)
        return hnn.HnnGroup(Q, H.elements())
    except (KeyError, ValueError, TypeError) as e:
        raise DataError(f"{path}: {e}")


def _hnn_elem(P, text):
    try:
        data = json.loads(text)
        raw = [tuple(data["x0"])] + [(int(e), tuple(x)) for e, x in data.get("syllables", [])]
    except (ValueError, KeyError, TypeError) as e:
        raise DataError(f"element {text!r}: {e}")
    for x in [raw[0]] + [x for _, x in raw[1:]]:
        if x not in P.base:
            raise DataError(f"element {text!r}: {list(x)} is not in the base group")
    return hnn.britton_reduce(P, raw)


def _hnn_json(g):
    return {"x0": list(g.x0), "syllables": [[e, list(x)] for e, x in g.syllables], "text": str(g)}


def cmd_hnn(ctx_args, a):
    P = _hnn_group(a.base)
    els = [_hnn_elem(P, t) for t in a.elements]
    if a.kind == "britton":
        if len(els) != 1:
            raise UsageError("hnn britton takes one element")
        return EX_TRUE, {"reduced": _hnn_json(els[0])}
    if a.kind == "conj":
        if len(els) != 2:
            raise UsageError("hnn conj takes two elements")
        c = hnn.hnn_conjugate(P, els[0], els[1])
        if c is None:
            return EX_FALSE, {"conjugate": False}
        return EX_TRUE, {"conjugate": True, "conjugator": _hnn_json(c)}
    if len(els) != 1:
        raise UsageError("hnn centralizer takes one element")
    g = els[0]
    if g.is_base():
        C, flag = hnn.base_centralizer(P, g.x0)
        return EX_TRUE, {"base_part": [list(q) for q in C], "conjugate_into_hbar": flag}
    c, core = hnn.hnn_cyclic_reduce(P, g)
    C = hnn.hnn_centralizer(P, core)
    gens = [c * w * ~c for w in C.generators]
    return EX_TRUE, {"kind": C.kind, "generators": [_hnn_json(w) for w in gens]}


# bb -------------------------------------------------------------------------

def _psi(ctx, spec):
    if spec is None or spec == "bb":
        return bb.AbelianQuotientMap.bb(ctx.graph)
    data = _load_json(spec)
    try:
        return bb.AbelianQuotientMap.from_json(ctx.graph, data)
    except (KeyError, ValueError, TypeError) as e:
        raise DataError(f"{spec}: {e}")


def cmd_bb(ctx, a):
    psi = _psi(ctx, a.psi)
    if a.kind == "fg":
        if not psi.is_bb():
            raise UsageError("bb fg applies only to the all-ones map")
        ok = bb.bb_is_fg(ctx.graph, psi)
        return (EX_TRUE if ok else EX_FALSE), {"finitely_generated": ok}
    if a.kind == "member":
        if len(a.words) != 1:
            raise UsageError("bb member takes one word")
        g = ctx.word(a.words[0])
        ok = bb.in_kernel(psi, g)
        return (EX_TRUE if ok else EX_FALSE), {"member": ok, "image": list(bb.ab_image(psi, g))}
    if len(a.words) != 2:
        raise UsageError("bb conj takes two words")
    x, y = ctx.word(a.words[0]), ctx.word(a.words[1])
    if not (bb.in_kernel(psi, x) and bb.in_kernel(psi, y)):
        raise DataError("both words must lie in the kernel")
    cert = bb.bb_conjugate(psi, x, y, ctx.solver)
    return (EX_TRUE if cert.conjugate else EX_FALSE), {
        "g": str(x), "f": str(y), "psi": psi.to_json(), "conjugate": cert.conjugate,
        "certificate": cert.to_json()}


# verify ---------------------------------------------------------------------

def cmd_verify(ctx, a):
    doc = _load_json(a.certificate)
    cmd = doc.get("command")
    cert = doc.get("certificate") or {}
    kind = cert.get("type")
    sub = doc.get("sub")
    B = ctx.graph.mask(sub) if sub is not None else None
    checks = {}
    if cmd in ("conj", "bb conj", "witness separate") and kind == "conjugator":
        g, f, c = ctx.word(doc["g"]), ctx.word(doc["f"]), ctx.word(cert["value"])
        checks["equation"] = c * g * ~c == f
        if B is not None:
            checks["in_sub"] = c.in_special(B)
        if cmd == "bb conj":
            psi = bb.AbelianQuotientMap.from_json(ctx.graph, doc["psi"])
            checks["in_kernel"] = bb.in_kernel(psi, c)
    elif cmd in ("conj", "witness separate") and kind == "finite_quotient":
        g, f = ctx.word(doc["g"]), ctx.word(doc["f"])
        hom = quotient.hom_from_json(ctx.graph, cert)
        checks["separates"] = quotient.verify_separation(hom, g, f, B)
    elif cmd == "witness cc":
        g = ctx.word(doc["g"])
        K = quotient.kernel(quotient.hom_from_json(ctx.graph, doc["kernel"]))
        psi = quotient.hom_from_json(ctx.graph, cert)
        C = conjugacy.centralizer_in_special(ctx.graph.full if B is None else B, g, ctx.solver)
        checks["centralizer_condition"] = quotient.verify_cc(
            psi, K, ctx.graph.full if B is None else B, g, C.generators)
    elif cmd == "member" and kind == "double_coset":
        x, y = ctx.word(doc["x"]), ctx.word(doc["y"])
        A, Bm = ctx.graph.mask(doc["left"]), ctx.graph.mask(doc["right"])
        aw, bw = ctx.word(cert["a"]), ctx.word(cert["b"])
        checks["equation"] = aw * x * bw == y
        checks["factors"] = aw.in_special(A) and bw.in_special(Bm)
    elif cmd in ("conj", "bb conj") and kind in ("refusal",):
        # refusals are re-derived by the deterministic procedure
        g, f = ctx.word(doc["g"]), ctx.word(doc["f"])
        if cmd == "bb conj":
            psi = bb.AbelianQuotientMap.from_json(ctx.graph, doc["psi"])
            checks["rederived"] = not bb.bb_conjugate(psi, g, f, ctx.solver).conjugate
        elif cert.get("reason") == "abelianization":
            checks["abelianization"] = g.exponent_sums() != f.exponent_sums()
        else:
            amb = ctx.graph.full if B is None else B
            checks["rederived"] = not conjugacy.conjugate_sub(amb, g, f, ctx.solver).conjugate
    else:
        raise DataError(f"cannot verify a {kind!r} certificate for command {cmd!r}")
    ok = all(checks.values())
    return (EX_TRUE if ok else EX_FALSE), {"verified": ok, "checks": checks}


# -- argument parsing -------------------------------------------------------

def build_parser():
    common = Parser(add_help=False)
    common.add_argument("-g", "--graph", metavar="FILE")
    common.add_argument("--budget", type=int, metavar="N")
    common.add_argument("--seed", type=int, metavar="N")
    common.add_argument("--json", action="store_true")

    p = Parser(prog="raagkit", description="Algorithms for right-angled Artin groups.")
    sub = p.add_subparsers(dest="command", parser_class=Parser)
    sub.required = True

    s = sub.add_parser("reduce", parents=[common], help="canonical reduced form")
    s.add_argument("word")
    s = sub.add_parser("cyclic-reduce", parents=[common], help="cyclic core and conjugator")
    s.add_argument("word")
    s = sub.add_parser("root", parents=[common], help="unique n-th root")
    s.add_argument("word")
    s.add_argument("n", type=int)
    s = sub.add_parser("member", parents=[common], help="special, parabolic or double coset membership")
    s.add_argument("kind", choices=["special", "parabolic", "dc"])
    s.add_argument("words", nargs="+")
    s.add_argument("--sub")
    s.add_argument("--conj")
    s.add_argument("--left")
    s.add_argument("--right")
    s = sub.add_parser("intersect", parents=[common], help="intersect two parabolic subgroups")
    s.add_argument("--conj1", default="")
    s.add_argument("--sub1", required=True)
    s.add_argument("--conj2", default="")
    s.add_argument("--sub2", required=True)
    s = sub.add_parser("conj", parents=[common], help="conjugacy, optionally by a special subgroup")
    s.add_argument("g")
    s.add_argument("f")
    s.add_argument("--sub")
    s = sub.add_parser("centralizer", parents=[common], help="centralizer generators")
    s.add_argument("word")
    s.add_argument("--sub")
    s = sub.add_parser("witness", parents=[common], help="finite-quotient witnesses")
    s.add_argument("kind", choices=["separate", "cc"])
    s.add_argument("words", nargs="+")
    s.add_argument("--sub")
    s.add_argument("--kernel", metavar="HOMFILE")
    s = sub.add_parser("refine", parents=[common], help="normal subgroup invariant under retractions")
    s.add_argument("--kernel", metavar="HOMFILE")
    s.add_argument("--retract", action="append", metavar="v1,v2,...")
    s.add_argument("--fast", action="store_true", help="skip the word-level generator check")
    s = sub.add_parser("hnn", parents=[common], help="special HNN-extensions of finite groups")
    s.add_argument("kind", choices=["britton", "conj", "centralizer"])
    s.add_argument("elements", nargs="+")
    s.add_argument("--base", required=True, metavar="FILE")
    s = sub.add_parser("bb", parents=[common], help="kernels of maps onto Z^k")
    s.add_argument("kind", choices=["fg", "member", "conj"])
    s.add_argument("words", nargs="*")
    s.add_argument("--psi", default="bb")
    s = sub.add_parser("verify", parents=[common], help="re-check a json certificate")
    s.add_argument("certificate", metavar="CERT")
    return p


COMMANDS = {
    "reduce": cmd_reduce, "cyclic-reduce": cmd_cyclic_reduce, "root": cmd_root,
    "member": cmd_member, "intersect": cmd_intersect, "conj": cmd_conj,
    "centralizer": cmd_centralizer, "witness": cmd_witness, "refine": cmd_refine,
    "bb": cmd_bb, "verify": cmd_verify,
}


def _command_name(a):
    extra = getattr(a, "kind", None)
    return f"{a.command} {extra}" if extra and a.command in ("witness", "bb") else a.command


def run(argv, out=sys.stdout, err=sys.stderr):
    as_json = "--json" in argv
    a = None
    try:
        a, extra = build_parser().parse_known_args(argv)
        # positionals given after options (e.g. `bb member --psi bb WORD`)
        if extra and hasattr(a, "words") and not any(x.startswith("-") for x in extra):
            a.words = list(a.words) + extra
        elif extra:
            raise UsageError(f"unrecognized arguments: {' '.join(extra)}")
        if a.command == "hnn":
            code, result = cmd_hnn(None, a)
        else:
            code, result = COMMANDS[a.command](Ctx(a), a)
        result = {"command": _command_name(a), "status": {0: "true", 1: "false"}[code], **result}
    except BudgetExceeded as e:
        code = EX_UNDECIDED
        result = {"status": "undecided", "reason": e.what, "spent": e.spent}
        if a is not None:
            result = {"command": _command_name(a), **result}
    except (UsageError, DataError, NoInput) as e:
        _report_error(e, as_json, err)
        return e.code
    if as_json:
        print(json.dumps(result, sort_keys=True), file=out)
    else:
        _print_human(result, out)
    return code


def _report_error(e, as_json, err):
    kind = {EX_USAGE: "usage", EX_DATAERR: "data", EX_NOINPUT: "noinput"}[e.code]
    if as_json:
        print(json.dumps({"error": {"code": e.code, "kind": kind, "message": str(e)}}), file=err)
    else:
        print(f"raagkit: {kind} error: {e}", file=err)


def _print_human(result, out):
    for k, v in result.items():
        if isinstance(v, (dict, list)):
            v = json.dumps(v, sort_keys=True)
        print(f"{k}: {v}", file=out)


def main(argv=None):
    sys.exit(run(sys.argv[1:] if argv is None else argv))


if __name__ == "__main__":
    main()
