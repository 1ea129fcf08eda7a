"""Command-line front end.

Exit codes: 0 when every check passes, 2 when a verified violation or
witness was found, 1 for usage errors and unsupported inputs.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import geometry, nerve, plane, simplicial, spectra
from .errors import PlaneforgeError

EXIT_OK, EXIT_ERROR, EXIT_WITNESS = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def _dump(report: dict, path):
    if path:
        with open(path, "w") as fh:
            json.dump(report, fh, indent=2)
            fh.write("\n")


def _figdir(args):
    if not args.figures:
        return None
    d = Path(args.figures)
    d.mkdir(parents=True, exist_ok=True)
    return d


def _config(args) -> dict:
    skip = {"func", "json", "figures"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def cmd_plane(args) -> int:
    pl = plane.build_plane(args.q)
    rep = plane.verify_axioms(pl)
    print(f"PG(2,{pl.q}): n={pl.n}, line size {pl.q + 1}")
    for name in ("counts", "axiom_i", "axiom_ii", "axiom_iii", "degree"):
        print(f"  {name:10s} {'ok' if getattr(rep, name if name != 'counts' else 'counts_ok') else 'FAIL'}")
    if args.export:
        plane.write_incidence(pl, args.export)
        print(f"incidence written to {args.export}")
    figs = _figdir(args)
    report = {"config": _config(args), "axioms": rep.to_dict()}
    if figs:
        from . import plotting
        report["figures"] = [str(plotting.plot_incidence(pl, figs / f"incidence_q{pl.q}.png"))]
    _dump(report, args.json)
    return EXIT_OK if rep.ok else EXIT_WITNESS


def cmd_expansion(args) -> int:
    pl = plane.build_plane(args.q)
    cert = spectra.gram_certificate(pl)
    if args.sampled is not None:
        if args.seed is None:
            print("--sampled requires an explicit --seed", file=sys.stderr)
            return EXIT_ERROR
        summary = spectra.expansion_audit(pl, "sampled", args.sampled, args.seed)
    else:
        summary = spectra.expansion_audit(pl, "exhaustive")
    print(f"gram identity MM^T = {pl.q}I + J holds: lambda_1 = {cert.lambda_1}, "
          f"lambda_2..{pl.n} = {cert.lambda_rest}")
    print(f"{summary.mode}: {summary.subsets_checked} subsets, "
          f"{len(summary.violations)} violations, worst slack {summary.worst_slack_numerator}")
    report = {"config": _config(args), "certificate": cert.to_dict(), **summary.to_dict()}
    figs = _figdir(args)
    if figs:
        from . import plotting
        report["figures"] = [str(plotting.plot_expansion(summary, figs / f"expansion_q{pl.q}.png"))]
    _dump(report, args.json)
    return EXIT_WITNESS if summary.violations else EXIT_OK


def cmd_collapse(args) -> int:
    if args.kq is not None:
        pl = plane.build_plane(args.kq)
        K = simplicial.kq_complex(pl)
        steps = simplicial.kq_collapse_sequence(pl)
        label = f"K_{args.kq}"
    else:
        K = simplicial.full_simplex(range(1, args.simplex + 2))
        steps = (simplicial.simplex_collapse_sequence(args.simplex)
                 + simplicial.vertex_removals(range(1, args.simplex + 2)))
        label = f"simplex of dimension {args.simplex}"
    if args.verify_only:
        try:
            with open(args.verify_only) as fh:
                steps = simplicial.steps_from_json(json.load(fh))
        except (OSError, ValueError, KeyError, TypeError) as exc:
            print(f"cannot read steps from {args.verify_only}: {exc}", file=sys.stderr)
            return EXIT_ERROR
    result = simplicial.verify_sequence(K, steps, 2)
    edge_steps = sum(1 for st in steps if len(st.sigma) > 1)
    print(f"{label}: {len(K)} faces, {len(steps)} steps "
          f"({edge_steps} edge collapses, {len(steps) - edge_steps} vertex removals)")
    if result.ok:
        print("sequence verified: complex reduced to empty")
    else:
        print(f"sequence FAILED at step {result.failed_index}: ({result.condition}) {result.reason}")
    if args.steps and not args.verify_only:
        with open(args.steps, "w") as fh:
            json.dump(simplicial.steps_to_json(steps), fh)
            fh.write("\n")
    report = {"config": _config(args), "faces": len(K), "steps": len(steps),
              "verification": result.to_dict()}
    figs = _figdir(args)
    if figs and result.ok:
        from . import plotting
        name = f"collapse_kq{args.kq}.png" if args.kq is not None else f"collapse_simplex{args.simplex}.png"
        report["figures"] = [str(plotting.plot_collapse(result.trace, len(K), figs / name, label))]
    _dump(report, args.json)
    return EXIT_OK if result.ok else EXIT_WITNESS


def cmd_nerve(args) -> int:
    fam = nerve.read_family(args.family)
    K = nerve.nerve(fam)
    fv = K.f_vector()
    print(f"{len(fam.members)} sets over {len(fam.ground)} elements")
    print("f-vector (empty, vertices, edges, ...): " + ", ".join(str(x) for x in fv))
    _dump({"config": _config(args), "f_vector": fv,
           "maximal_faces": [list(f) for f in K.maximal_faces]}, args.json)
    return EXIT_OK


def cmd_audit(args) -> int:
    pl = plane.build_plane(args.q)
    rep = geometry.read_representation(args.representation)
    report = geometry.audit_representation(rep, pl, args.budget, args.force_selection)
    nerve_phase = report.phases["nerve"]
    print(f"nerve check (k <= {nerve_phase['k_max']}): "
          f"{'MATCH' if nerve_phase['match'] else 'MISMATCH'}")
    if nerve_phase["witness"]:
        w = nerve_phase["witness"]
        print(f"  witness lines {w['lines']}: concurrent={w['concurrent_in_plane']}, "
              f"hulls intersect={w['hulls_intersect']}")
    sel = report.phases.get("selection")
    if sel:
        print(f"selection phase: {sel['status']}")
    count = report.phases.get("count")
    if count:
        print(f"sets containing a: {count['count']} (limit q+1 = {count['limit']})")
    print(f"status: {report.status}")
    out = {"config": _config(args), **report.to_dict()}
    figs = _figdir(args)
    if figs and rep.d == 2:
        from . import plotting
        hl = None
        if nerve_phase["witness"] and nerve_phase["witness"]["common_point"]:
            hl = [Fraction(c) for c in nerve_phase["witness"]["common_point"]]
        out["figures"] = [str(plotting.plot_representation(rep, figs / "representation.png", hl))]
    _dump(out, args.json)
    return report.exit_code


def cmd_select(args) -> int:
    rows, cols = (int(v) for v in args.grid.lower().split("x"))
    pts = geometry.perturbed_grid(rows, cols, args.seed)
    result = geometry.selection_search(pts, 2, args.budget)
    print(f"{len(pts)} points, {result.candidates} candidate centres, "
          f"{result.partitions_evaluated} partitions")
    print(f"best hit fraction {result.hit_fraction} ({result.hits}/{result.transversals})")
    report = {"config": _config(args), "points": [[str(c) for c in p] for p in pts],
              **result.to_dict()}
    figs = _figdir(args)
    if figs:
        from . import plotting
        report["figures"] = [str(plotting.plot_selection(dict(enumerate(pts)), result,
                                                         figs / "selection.png"))]
    _dump(report, args.json)
    return EXIT_OK if result.hit_fraction > 0 else EXIT_WITNESS


def cmd_represent(args) -> int:
    pl = plane.build_plane(args.q)
    if args.kind == "simplex":
        rep = geometry.simplex_representation(pl)
    else:
        if args.seed is None:
            print("random representations need an explicit --seed", file=sys.stderr)
            return EXIT_ERROR
        rep = geometry.random_hull_representation(pl, args.d, args.seed)
    geometry.write_representation(rep, args.out)
    print(f"{args.kind} representation of PG(2,{args.q}) in R^{rep.d} written to {args.out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="planeforge", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p):
        p.add_argument("--json", metavar="PATH", help="write the JSON report here")
        p.add_argument("--figures", metavar="DIR", help="render figures into this directory")

    p = sub.add_parser("plane", help="build PG(2,q) and check the axioms")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--export", metavar="PATH", help="write the incidence file")
    common(p)
    p.set_defaults(func=cmd_plane)

    p = sub.add_parser("expansion", help="spectral certificate and expansion audit")
    p.add_argument("--q", type=int, required=True)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--exhaustive", action="store_true", help="all nonempty subsets (default)")
    mode.add_argument("--sampled", type=int, metavar="COUNT", help="seeded random subsets")
    p.add_argument("--seed", type=int)
    common(p)
    p.set_defaults(func=cmd_expansion)

    p = sub.add_parser("collapse", help="generate and verify 2-collapse sequences")
    what = p.add_mutually_exclusive_group(required=True)
    what.add_argument("--kq", type=int, metavar="Q")
    what.add_argument("--simplex", type=int, metavar="D")
    p.add_argument("--verify-only", metavar="STEPS_JSON", help="verify these steps instead")
    p.add_argument("--steps", metavar="PATH", help="write the generated steps as JSON")
    common(p)
    p.set_defaults(func=cmd_collapse)

    p = sub.add_parser("nerve", help="nerve of a set family file")
    p.add_argument("family")
    common(p)
    p.set_defaults(func=cmd_nerve)

    p = sub.add_parser("audit", help="audit a candidate convex representation")
    p.add_argument("representation")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--budget", type=int, default=10_000_000)
    p.add_argument("--force-selection", action="store_true",
                   help="run the selection phases even after a nerve mismatch")
    common(p)
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("select", help="selection search on a seeded perturbed grid")
    p.add_argument("--grid", default="4x3", help="ROWSxCOLS")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--budget", type=int, default=10_000_000)
    common(p)
    p.set_defaults(func=cmd_select)

    p = sub.add_parser("represent", help="write a representation file")
    p.add_argument("kind", choices=["simplex", "random"])
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--d", type=int, default=2, help="dimension for random hulls")
    p.add_argument("--seed", type=int)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_represent, json=None, figures=None)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except PlaneforgeError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
