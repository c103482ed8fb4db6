"""Command line interface.

Exit codes: 0 on success, 1 when a verification report says FAIL, 2 on
input errors such as bad syntax or maps that are not homomorphisms.
"""
from __future__ import annotations

import argparse
import json
import re
import sys

import numpy as np

from . import abelian, baumslag, chartab, core, polycyclic, snf
from .abelian import FgAbelianGroup
from .errors import GroupError, ParseError, ValidationError
from .groups import named_group
from .parsing import (build_group, parse_abelian_map, parse_bs_element, parse_finite_map,
                      parse_group_spec, parse_poly_auto, parse_poly_element, parse_value, parse_word)
from .polycyclic import PolyGroup

SCHEMA_PREFIX = "bitwisted."
EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def load_group(text):
    """A group spec, or a short name such as ``S3``, ``D4``, ``Q8``, ``C12``."""
    if re.fullmatch(r"\s*[A-Za-z]\d+\s*", text):
        try:
            return named_group(text)
        except ValueError as exc:
            raise InputError(str(exc)) from exc
    return build_group(parse_group_spec(text))


def _finite(G):
    """A tabulated FiniteGroup for finite-perm/table specs and finite abelian groups."""
    if isinstance(G, core.FiniteGroup):
        return G
    if isinstance(G, FgAbelianGroup) and G.is_finite:
        return abelian.realize(G)
    raise InputError("this command needs a finite group")


def _finite_map(G, FG, text):
    if isinstance(G, FgAbelianGroup):
        return abelian.realize_map(G, parse_abelian_map(G, text), FG)
    return parse_finite_map(FG, text)


def _emit(args, name, payload, text):
    if args.json:
        out = {"schema": f"{SCHEMA_PREFIX}{name}/1"}
        out.update(payload)
        print(json.dumps(out, indent=2, default=_jsonable))
    else:
        print(text)


def _jsonable(x):
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.ndarray):
        return x.tolist()
    if x == float("inf"):
        return "infinite"
    return str(x)


def _count(x):
    return "infinite" if x == abelian.INFINITE else int(x)


# -- subcommands --------------------------------------------------------------------------------

def cmd_classes(args):
    G = load_group(args.group)
    FG = _finite(G)
    phi = _finite_map(G, FG, args.phi)
    psi = _finite_map(G, FG, args.psi)
    part = core.twisted_classes(FG, phi, psi)
    rows = [[FG.label(x) if FG.elements is not None else int(x) for x in cls] for cls in part.classes]
    lines = [f"{len(part)} classes"] + [f"[{i}] size {len(r)}: " + ", ".join(map(str, r)) for i, r in enumerate(rows)]
    _emit(args, "classes", {"count": len(part), "classes": rows}, "\n".join(lines))
    return EXIT_OK


def cmd_reidemeister(args):
    G = load_group(args.group)
    if isinstance(G, FgAbelianGroup):
        R = _count(abelian.reidemeister_abelian(G, parse_abelian_map(G, args.phi), parse_abelian_map(G, args.psi)))
    else:
        FG = _finite(G)
        R = core.reidemeister_number(FG, parse_finite_map(FG, args.phi), parse_finite_map(FG, args.psi))
    _emit(args, "reidemeister", {"reidemeister": R}, str(R))
    return EXIT_OK


def cmd_verify_bf(args):
    G = load_group(args.group)
    if args.counterexample:
        FG = _finite(G)
        rep = chartab.counterexample_report(FG)
        d = rep.to_dict()
        text = (f"{d['group']}: trivial pair gives R = {rep.reidemeister}, #Coin = {rep.coincidences} "
                f"({d['relation']}) {d['status']}")
        _emit(args, "verify-bf", {"mode": "counterexample", **d}, text)
        return EXIT_OK if rep.passed else EXIT_FAIL
    if args.finite:
        FG = _finite(G)
        table = chartab.character_table(FG, seed=args.seed)
        if args.all_pairs:
            autos = core.automorphisms(FG)
            pairs = [(i, j) for i in range(len(autos)) for j in range(len(autos))]
            reports = [chartab.verify_compact_bf(FG, autos[i], autos[j], table) for i, j in pairs]
            failed = [p for p, r in zip(pairs, reports) if not r.passed]
            status = "PASS" if not failed else "FAIL"
            payload = {"mode": "finite", "group": reports[0].group, "pairs": len(pairs),
                       "failed": [list(p) for p in failed], "status": status}
            _emit(args, "verify-bf", payload, f"{len(pairs)} automorphism pairs, {len(failed)} failures: {status}")
            return EXIT_OK if not failed else EXIT_FAIL
        phi, psi = _finite_map(G, FG, args.phi), _finite_map(G, FG, args.psi)
        rep = chartab.verify_compact_bf(FG, phi, psi, table)
        text = f"R = {rep.reidemeister}, #Coin = {rep.coincidences}: {'PASS' if rep.passed else 'FAIL'}"
        _emit(args, "verify-bf", rep.to_dict(), text)
        return EXIT_OK if rep.passed else EXIT_FAIL
    if not isinstance(G, FgAbelianGroup) or not G.is_finite:
        raise InputError("abelian mode needs a finite abelian group; use --finite for other finite groups")
    rep = abelian.verify_bitwisted_bf(G, parse_abelian_map(G, args.phi), parse_abelian_map(G, args.psi))
    text = (f"{rep.brute_force} = {rep.snf_index} = {rep.dual_count} "
            f"(orbits, SNF index, dual coincidences): {'PASS' if rep.passed else 'FAIL'}")
    _emit(args, "verify-bf", rep.to_dict(), text)
    return EXIT_OK if rep.passed else EXIT_FAIL


def _fmt_char(z):
    re_, im = round(float(z.real), 4) + 0.0, round(float(z.imag), 4) + 0.0
    fmt = lambda v: str(int(v)) if v == int(v) else f"{v:.4f}"
    if im == 0:
        return fmt(re_)
    if re_ == 0:
        return f"{fmt(im)}i"
    return f"{fmt(re_)}{'+' if im > 0 else '-'}{fmt(abs(im))}i"


def cmd_chartab(args):
    FG = _finite(load_group(args.group))
    table = chartab.character_table(FG, seed=args.seed)
    cd = table.classes
    cells = [[_fmt_char(v) for v in row] for row in table.values]
    header = ["size"] + [str(s) for s in cd.sizes]
    reps = ["rep"] + [str(FG.label(r)) for r in cd.reps]
    body = [[f"X{i}"] + row for i, row in enumerate(cells)]
    grid = [reps, header] + body
    widths = [max(len(r[j]) for r in grid) for j in range(len(header))]
    text = "\n".join("  ".join(c.rjust(w) for c, w in zip(r, widths)) for r in grid)
    payload = {"order": FG.order, "class_sizes": list(cd.sizes),
               "class_reps": [str(FG.label(r)) for r in cd.reps],
               "degrees": table.degrees,
               "values": [[[round(float(v.real), 10) + 0.0, round(float(v.imag), 10) + 0.0] for v in row]
                          for row in table.values],
               "orthogonality_residual": float(table.orthogonality_residual())}
    _emit(args, "chartab", payload, text)
    return EXIT_OK


def cmd_snf(args):
    A = parse_value(args.matrix)
    if not (isinstance(A, list) and A and all(isinstance(r, list) and all(isinstance(x, int) for x in r) for r in A)):
        raise InputError("matrix must be a list of integer rows")
    if len({len(r) for r in A}) != 1:
        raise InputError("matrix rows have different lengths")
    sf = snf.smith_normal_form(A)
    ok = snf.is_smith_form(A, sf)
    payload = {"U": sf.U, "D": sf.D, "V": sf.V, "diagonal": sf.diagonal, "rank": sf.rank, "verified": ok}
    text = (f"diagonal: {sf.diagonal}\nrank: {sf.rank}\n"
            f"U = {sf.U}\nV = {sf.V}\nU A V = D: {'PASS' if ok else 'FAIL'}")
    _emit(args, "snf", payload, text)
    return EXIT_OK if ok else EXIT_FAIL


def _bs_endo(n, a_text, b_text):
    return baumslag.validate_bs_endo(n, parse_bs_element(n, a_text), parse_bs_element(n, b_text))


def cmd_bs(args):
    n = args.n
    if n < 2:
        raise InputError("n must be at least 2")
    if args.bs_cmd == "eval":
        w = parse_word(args.word, ("a", "b"))
        g = baumslag.embed_word(baumslag.BSWord(w.syllables), n)
        _emit(args, "bs-eval", {"n": n, "word": str(w), "x": str(g.x), "t": g.t}, str(g))
        return EXIT_OK
    if args.bs_cmd == "endo-check":
        e = _bs_endo(n, args.a, args.b)
        deg = baumslag.degree_constraint_check(e)
        payload = {"n": n, "image_a": str(e.image_a), "image_b": str(e.image_b),
                   "induced_degree": baumslag.induced_degree(e), "degree_constraint": deg.value,
                   "injective_admissible": baumslag.is_injective_admissible(e)}
        text = (f"endomorphism {e}\ninduced degree {payload['induced_degree']}, constraint {deg.value}, "
                f"injective-admissible: {payload['injective_admissible']}")
        _emit(args, "bs-endo-check", payload, text)
        return EXIT_OK
    phi = _bs_endo(n, args.phi_a, args.phi_b)
    psi = _bs_endo(n, args.psi_a, args.psi_b)
    cert = baumslag.infinitude_certificate(n, phi, psi, samples=args.samples, seed=args.seed)
    d = cert.to_dict()
    text = (f"phi: {d['phi']}\npsi: {d['psi']}\ndegrees: {cert.degree_phi}, {cert.degree_psi}\n"
            f"invariant: {d['invariant']}\nwitnesses: {', '.join(d['witnesses'])}\n"
            f"checks: {cert.passed_checks}/{cert.samples} (seed {cert.seed})\n{d['conclusion']}: {d['status']}")
    _emit(args, "certify", d, text)
    return EXIT_OK if cert.passed else EXIT_FAIL


def _poly_group(text):
    G = load_group(text)
    if not isinstance(G, PolyGroup):
        raise InputError("this command needs a 'poly' group spec")
    return G


def cmd_decide(args):
    G = _poly_group(args.group)
    phi, psi = parse_poly_auto(G, args.phi), parse_poly_auto(G, args.psi)
    U, V = parse_poly_element(G, args.U), parse_poly_element(G, args.V)
    dec = polycyclic.decide_twisted_conjugacy(G, phi, psi, U, V, shells=args.shells, max_modulus=args.max_modulus)
    ok = polycyclic.verify_decision(G, phi, psi, U, V, dec)
    payload = {"U": str(U), "V": str(V), "phi": phi.describe(), "psi": psi.describe(),
               "budget": {"shells": args.shells, "max_modulus": args.max_modulus},
               **dec.to_dict(), "certificate_verified": ok}
    if dec.verdict == "YES":
        text = f"YES: V = psi(g) U phi(g)^-1 with g = {dec.witness}"
    elif dec.verdict == "NO":
        text = f"NO: separated in the quotient modulo {dec.modulus}"
    else:
        text = "EXHAUSTED: budget consumed without a certificate"
    text += f"\ncertificate verified: {ok}"
    _emit(args, "decide", payload, text)
    return EXIT_OK if ok else EXIT_FAIL


def _moduli(text):
    m = re.fullmatch(r"\s*(\d+)\s*\.\.\s*(\d+)\s*", text)
    if m:
        return list(range(int(m.group(1)), int(m.group(2)) + 1))
    try:
        out = [int(x) for x in text.split(",")]
    except ValueError:
        raise InputError(f"cannot read moduli {text!r}; use 'a..b' or a comma list") from None
    return out


def cmd_quotient_bound(args):
    G = _poly_group(args.group)
    moduli = _moduli(args.moduli)
    if any(m < 2 for m in moduli):
        raise InputError("moduli must be at least 2")
    if args.search:
        probes = polycyclic.probe_finite_reidemeister(G, moduli, eps=args.eps, bound=args.bound, window=args.window)
        stable = [p for p in probes if p.stabilized]
        payload = {"eps": args.eps, "bound": args.bound, "window": args.window, "candidates": len(probes),
                   "stabilized": len(stable), "attains_four": any(p.bound.bound == 4 for p in stable),
                   "probes": [p.to_dict() for p in probes]}
        lines = [f"{len(probes)} compatible automorphisms (eps={args.eps}, |entries| <= {args.bound})"]
        for p in probes:
            lines.append(f"M={[list(r) for r in p.phi.M]}: bound {p.bound.bound}, "
                         f"running max {p.running_max}, "
                         + (f"stable from m={p.stable_from}" if p.stabilized else "not stabilised"))
        lines.append(f"value 4 attained by a stabilised bound: {payload['attains_four']}")
        _emit(args, "quotient-bound", payload, "\n".join(lines))
        return EXIT_OK
    phi, psi = parse_poly_auto(G, args.phi), parse_poly_auto(G, args.psi)
    qb = polycyclic.quotient_class_lower_bound(G, phi, psi, moduli)
    lines = []
    for r in qb.rows:
        if "skipped" in r:
            lines.append(f"m={r['modulus']}: skipped ({r['skipped']})")
        else:
            lines.append(f"m={r['modulus']}: period {r['period']}, order {r['order']}, "
                         f"{r['classes']} classes, running max {r['running_max']}")
    lines.append(f"lower bound: {qb.bound}")
    _emit(args, "quotient-bound", qb.to_dict(), "\n".join(lines))
    return EXIT_OK


# -- argument parsing -------------------------------------------------------------------------

def build_parser():
    p = argparse.ArgumentParser(prog="bitwisted", description="Bitwisted conjugacy classes and dual coincidences.")
    p.add_argument("--json", action="store_true", help="machine-readable output")
    sub = p.add_subparsers(dest="cmd", required=True)

    def common(sp, maps=True):
        sp.add_argument("--json", action="store_true", default=argparse.SUPPRESS)
        sp.add_argument("--group", "-g", required=True, help="group spec or short name (S3, D4, Q8, C12)")
        if maps:
            sp.add_argument("--phi", default="id")
            sp.add_argument("--psi", default="id")

    common(sub.add_parser("classes", help="list (phi, psi)-twisted classes of a finite group"))
    common(sub.add_parser("reidemeister", help="number of twisted classes"))

    sp = sub.add_parser("verify-bf", help="compare class counts with dual coincidence counts")
    common(sp)
    sp.add_argument("--finite", action="store_true", help="character-table mode for automorphisms")
    sp.add_argument("--all-pairs", action="store_true", help="with --finite: every ordered automorphism pair")
    sp.add_argument("--counterexample", action="store_true", help="trivial endomorphism pair")
    sp.add_argument("--seed", type=int, default=0)

    sp = sub.add_parser("chartab", help="character table of a finite group")
    common(sp, maps=False)
    sp.add_argument("--seed", type=int, default=0)

    sp = sub.add_parser("snf", help="Smith normal form of an integer matrix")
    sp.add_argument("--json", action="store_true", default=argparse.SUPPRESS)
    sp.add_argument("matrix", help="e.g. '[[2,4],[6,8]]'")

    bs = sub.add_parser("bs", help="Baumslag-Solitar group B(1, n)")
    bsub = bs.add_subparsers(dest="bs_cmd", required=True)
    for name in ("eval", "endo-check", "certify"):
        sp = bsub.add_parser(name)
        sp.add_argument("--json", action="store_true", default=argparse.SUPPRESS)
        sp.add_argument("-n", type=int, required=True)
        if name == "eval":
            sp.add_argument("word")
        elif name == "endo-check":
            sp.add_argument("--a", required=True, help="image of a: word or (x, t)")
            sp.add_argument("--b", required=True, help="image of b: word or (x, t)")
        else:
            sp.add_argument("--phi-a", default="a")
            sp.add_argument("--phi-b", default="b")
            sp.add_argument("--psi-a", default="a")
            sp.add_argument("--psi-b", default="b")
            sp.add_argument("--samples", type=int, default=1000)
            sp.add_argument("--seed", type=int, default=0)

    sp = sub.add_parser("decide", help="twisted conjugacy in Z^d x|_A Z")
    common(sp)
    sp.add_argument("-U", "--U", dest="U", required=True, help="element ((v...), t)")
    sp.add_argument("-V", "--V", dest="V", required=True)
    sp.add_argument("--shells", type=int, default=5)
    sp.add_argument("--max-modulus", type=int, default=16)

    sp = sub.add_parser("quotient-bound", help="lower bounds for R from congruence quotients")
    common(sp)
    sp.add_argument("--moduli", default="2..16")
    sp.add_argument("--search", action="store_true", help="probe every compatible automorphism with psi = id")
    sp.add_argument("--eps", type=int, default=-1, choices=(-1, 1))
    sp.add_argument("--bound", type=int, default=3)
    sp.add_argument("--window", type=int, default=8)
    return p


COMMANDS = {"classes": cmd_classes, "reidemeister": cmd_reidemeister, "verify-bf": cmd_verify_bf,
            "chartab": cmd_chartab, "snf": cmd_snf, "bs": cmd_bs, "decide": cmd_decide,
            "quotient-bound": cmd_quotient_bound}


def run_command(argv) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    try:
        return COMMANDS[args.cmd](args)
    except (ParseError, ValidationError, InputError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except GroupError as exc:
        print(f"error ({type(exc).__name__}): {exc}", file=sys.stderr)
        return EXIT_INPUT


def main(argv=None):
    sys.exit(run_command(sys.argv[1:] if argv is None else argv))


if __name__ == "__main__":
    main()
