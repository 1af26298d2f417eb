"""Command line interface: ``torfol <command> <file> ...``."""

import argparse
import sys

from . import mori, textformat, verify
from .errors import FanValidationError, TorfolError
from .fan import find_wall
from .foliation import (
    c1_from_filtration,
    canonical_divisor,
    conormal_filtration,
    cotangent_filtration,
    curve_tangent,
    foliation_filtration,
    is_dicritical,
    singular_locus,
)
from .singclass import CANONICAL, NOT_CANONICAL, TERMINAL, classify

CLASSIFY_EXIT = {TERMINAL: 0, CANONICAL: 10, NOT_CANONICAL: 20}


def _vec(v):
    return "(" + ",".join(str(x) for x in v) + ")"


def _cones(cones):
    return "{" + ", ".join("<" + ",".join(str(i) for i in c) + ">" for c in cones) + "}" if cones else "{}"


def _load(path):
    with open(path, encoding="utf-8") as fh:
        return textformat.parse(fh.read())


def _print_report(report, out):
    print(f"singularities: {report.verdict}", file=out)
    w = report.witness
    if w is not None:
        print(f"  witness: {_vec(w.point)} in cone {_cones([w.cone])}, discrepancy {w.discrepancy}", file=out)


def _print_dicritical(d, out, label="dicritical"):
    if d:
        print(f"{label}: yes (singular cone {_cones([d.cone])}, non-invariant ray {_vec(d.ray)})", file=out)
    else:
        print(f"{label}: no", file=out)


def _filtration_cases(steps, full):
    parts = [f"0 for i <= {steps[0][0] - 1}"]
    for k, (i, basis) in enumerate(steps):
        piece = "V" if len(basis) == full else "span{" + ", ".join(_vec(b) for b in basis) + "}"
        last = k == len(steps) - 1
        if last:
            parts.append(f"{piece} for i >= {i}")
        elif steps[k + 1][0] == i + 1:
            parts.append(f"{piece} for i = {i}")
        else:
            parts.append(f"{piece} for {i} <= i <= {steps[k + 1][0] - 1}")
    return "; ".join(parts)


def cmd_analyze(args, out):
    F, V = _load(args.file)
    print(f"fan: {len(F.rays)} rays in Z^{F.n}, {len(F.max_cones)} maximal cones", file=out)
    print(f"foliation: V = span{{{', '.join(_vec(b) for b in V.basis)}}}, rank {V.rank}", file=out)
    print(f"K_F = {canonical_divisor(F, V).pretty(F.rays)}", file=out)
    print(f"K_X = {c1_from_filtration(F, cotangent_filtration(F)).pretty(F.rays)}", file=out)
    print(f"c1(conormal) = {c1_from_filtration(F, conormal_filtration(F, V)).pretty(F.rays)}", file=out)
    print("filtrations of F_V:", file=out)
    filt = foliation_filtration(F, V)
    for k, r in enumerate(F.rays):
        print(f"  ray {k} {_vec(r)}: {_filtration_cases(filt.steps[k], V.rank)}", file=out)
    locus = singular_locus(F, V)
    print(f"singular locus: {_cones(locus.minimal) if not locus.empty else 'empty'}", file=out)
    _print_dicritical(is_dicritical(F, V, locus), out)
    _print_report(classify(F, V), out)
    return 0


def cmd_classify(args, out):
    F, V = _load(args.file)
    report = classify(F, V)
    _print_report(report, out)
    return CLASSIFY_EXIT[report.verdict]


def cmd_extremal(args, out):
    F, V = _load(args.file)
    rays = mori.extremal_rays(F)
    print(f"{len(rays)} extremal rays", file=out)
    for k, R in enumerate(rays):
        value = mori.kf_dot(F, V, R.representative)
        kind = mori.contraction_kind(F, R).kind
        print(f"[{k}] class {_vec(R.direction)}  K_F.C = {value}  type {kind}", file=out)
        for w in R.walls:
            print(f"    wall {_cones([w.rays])} tangent={curve_tangent(F, V, w)}", file=out)
    return 0


def _parse_picks(values):
    picks = []
    for value in values or []:
        if value == "lex":
            continue
        if not value.startswith("wall="):
            raise TorfolError(f"--pick expects 'lex' or 'wall=i,j,...', got {value!r}", kind="BadPick")
        picks.append(_indices(value[5:]))
    return picks or "lex"


def _indices(text):
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise TorfolError(f"cannot read ray indices {text!r}", kind="BadPick") from None


def cmd_mmp(args, out):
    F, V = _load(args.file)
    options = mori.MmpOptions(
        max_flips=args.max_flips,
        pick=_parse_picks(args.pick),
        allow_noncanonical=args.allow_noncanonical,
    )
    trace = mori.run_mmp(F, V, options)
    if trace.noncanonical_override:
        print(f"warning: input is {trace.initial_verdict}; running under override", file=out)
    print("step  wall        kind        K_F.C  picard  dicritical", file=out)
    for s in trace.steps:
        after = "-" if s.dicritical_after is None else str(s.dicritical_after)
        print(
            f"{s.index:<5} {_cones([s.wall]):<11} {s.kind:<11} {str(s.kf_dot):>5}  "
            f"{s.picard_before}->{s.picard_after}    {s.dicritical_before}->{after}",
            file=out,
        )
        if s.contracted_ray is not None:
            print(f"      contracted ray {_vec(s.contracted_ray)}", file=out)
        if s.pullback is not None:
            q = s.pullback.quotient
            print(
                f"      quotient along span{{{', '.join(_vec(b) for b in s.pullback.V_prime)}}}: "
                f"rank {q.lattice_rank}, rays {[_vec(r) for r in q.rays]}, cones {_cones([c for c in q.cones if c])}, "
                f"fan={q.is_fan}, morphism={q.is_morphism}",
                file=out,
            )
    end = "K_F nef" if trace.outcome == "nef" else "fibration"
    print(f"outcome: {end} after {len(trace.steps)} steps ({trace.flips} flips)", file=out)
    final = trace.final_fan
    print(f"final fan: rays {[_vec(r) for r in final.rays]}, cones {_cones(final.max_cones)}", file=out)
    if args.trace:
        with open(args.trace, "w", encoding="utf-8") as fh:
            fh.write(textformat.serialize_trace(trace))
    for v in trace.violations:
        print(f"consistency violation: {v}", file=sys.stderr)
    return 4 if trace.violations else 0


def _relation(rel):
    text = ""
    for i, a in zip(rel.rays, rel.coeffs):
        if a == 0:
            continue
        term = f"v{i}" if abs(a) == 1 else f"{abs(a)}*v{i}"
        if not text:
            text = ("-" if a < 0 else "") + term
        else:
            text += f" {'-' if a < 0 else '+'} {term}"
    return text


def cmd_flip_wall(args, out):
    F, V = _load(args.file)
    wall = find_wall(F, _indices(args.wall))
    rel = mori.wall_relation(F, wall)
    print(f"wall relation: {_relation(rel)} = 0", file=out)
    print(f"K_F.C before = {mori.kf_dot(F, V, wall)}", file=out)
    _print_dicritical(is_dicritical(F, V), out, "dicritical before")
    G = mori.flip_wall(F, wall)
    new_wall = mori.flipped_wall(F, wall)
    print(f"cones before: {_cones(F.max_cones)}", file=out)
    print(f"cones after:  {_cones(G.max_cones)}", file=out)
    print(f"flipped wall: {_cones([new_wall])}", file=out)
    print(f"K_F.C after = {mori.kf_dot(G, V, new_wall)}", file=out)
    _print_dicritical(is_dicritical(G, V), out, "dicritical after")
    locus = singular_locus(G, V)
    print(f"singular locus after: {_cones(locus.minimal) if not locus.empty else 'empty'}", file=out)
    return 0


def cmd_verify(args, out):
    F, V = _load(args.file)
    failed = 0
    for name, ok, detail in verify.run_suite(F, V, seed=args.seed):
        failed += not ok
        print(f"{'PASS' if ok else 'FAIL'}  {name}" + (f"  [{detail}]" if detail else ""), file=out)
    return 4 if failed else 0


def build_parser():
    p = argparse.ArgumentParser(prog="torfol", description="Toric foliations and their MMP, in exact arithmetic.")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="canonical divisor, filtrations, singular locus, singularity class")
    a.add_argument("file")
    a.set_defaults(func=cmd_analyze)

    c = sub.add_parser("classify", help="terminal (exit 0), canonical (10) or not canonical (20)")
    c.add_argument("file")
    c.set_defaults(func=cmd_classify)

    e = sub.add_parser("extremal", help="extremal rays of the cone of curves")
    e.add_argument("file")
    e.set_defaults(func=cmd_extremal)

    m = sub.add_parser("mmp", help="run the foliated MMP")
    m.add_argument("file")
    m.add_argument("--max-flips", type=int, default=1000)
    m.add_argument(
        "--pick",
        action="append",
        metavar="lex|wall=i,j,...",
        help="wall to contract at the next step; repeat once per step (default lex)",
    )
    m.add_argument("--allow-noncanonical", action="store_true")
    m.add_argument("--trace", metavar="OUT", help="write the machine-readable trace here")
    m.set_defaults(func=cmd_mmp)

    f = sub.add_parser("flip-wall", help="flip one named wall")
    f.add_argument("file")
    f.add_argument("--wall", required=True, metavar="i,j,...")
    f.set_defaults(func=cmd_flip_wall)

    v = sub.add_parser("verify", help="run the oracle suite on the input")
    v.add_argument("file")
    v.add_argument("--seed", type=int, default=0)
    v.set_defaults(func=cmd_verify)
    return p


def exit_code(exc):
    if isinstance(exc, FanValidationError) and all(
        v.kind == "NonSimplicialCone" for v in exc.violations
    ):
        return 2
    return exc.exit_code


def main(argv=None, out=None):
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except TorfolError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exit_code(exc)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
