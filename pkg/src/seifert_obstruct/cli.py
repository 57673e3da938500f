"""Command-line front end.

Exit codes: 0 success (the property holds), 1 the property fails, 2 bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import __version__
from .checker import check_certificate
from .covers import Disconnected, cover_invariants_preserved, double_cover_cut
from .io import (
    ManifoldParseError,
    ManifoldValidationError,
    dump_json,
    parse_manifold,
    read_json,
    serialize_manifold,
    write_json,
)
from .manifold import (
    charge,
    intersection_index,
    is_sdd,
    is_sdd_block,
    reciprocal_index_sum,
    validate,
)
from .obstruction import (
    CertifyOptions,
    NotClosedError,
    NotSDDError,
    ObstructionError,
    certify_no_vertex_faithful,
    fiber_product,
)
from .pingpong import PingPongError
from .repbuilder import (
    extend_along_tree,
    representation_from_json,
    representation_to_json,
    seed_word_distance,
    verify_rep,
)

OK, FAILS, BAD_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _load(path, check=True):
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return parse_manifold(text, check=check), text
    except (ManifoldParseError, ManifoldValidationError) as exc:
        raise InputError(f"{path}: {exc}") from None


def _load_json(path):
    try:
        return read_json(path)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: not valid JSON ({exc})") from None


def _real(s: str):
    try:
        x = Fraction(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a real number: {s!r}") from None
    return int(x) if x.denominator == 1 else x


def _edge(s: str):
    parts = s.split(":")
    if len(parts) != 2 or not all(parts):
        raise argparse.ArgumentTypeError(f"edges are written v:w, got {s!r}")
    return tuple(parts)


# ---------------------------------------------------------------------------


def cmd_validate(args):
    m, _ = _load(args.manifold, check=False)
    report = validate(m)
    if report.ok:
        print(f"ok: {len(m.blocks)} blocks, {len(m.edges)} edges, {'closed' if m.is_closed() else 'with free boundary'}")
        return OK
    for p in report.problems:
        print(p)
    return BAD_INPUT


def invariants_record(m):
    out = []
    for v in m.block_ids():
        b = m.blocks[v]
        rec = {
            "id": v,
            "genus": b.genus,
            "free": b.free_boundaries,
            "neighbors": [{"id": w, "b": intersection_index(m, v, w)} for w in m.neighbors(v)],
            "charge": str(charge(m, v)),
            "reciprocal_sum": str(reciprocal_index_sum(m, v)),
            "sdd": is_sdd_block(m, v),
            "fiber_product": fiber_product(m, v) if m.neighbors(v) else None,
        }
        out.append(rec)
    return {"blocks": out, "sdd": is_sdd(m), "closed": m.is_closed()}


def cmd_invariants(args):
    m, _ = _load(args.manifold)
    data = invariants_record(m)
    for rec in data["blocks"]:
        idx = ", ".join(f"{n['id']}:{n['b']}" for n in rec["neighbors"]) or "-"
        print(
            f"block {rec['id']}: charge {rec['charge']}  indices {idx}  "
            f"|k| > {rec['reciprocal_sum']}: {'yes' if rec['sdd'] else 'no'}  fiber product {rec['fiber_product']}"
        )
    print(f"SDD: {'yes' if data['sdd'] else 'no'}")
    if args.out:
        write_json(args.out, data)
    return OK


def cmd_sdd(args):
    m, _ = _load(args.manifold)
    bad = [v for v in m.block_ids() if not is_sdd_block(m, v)]
    if bad:
        print(f"SDD: no (fails at {', '.join(bad)})")
        return FAILS
    print("SDD: yes")
    return OK


def cmd_cover(args):
    m, _ = _load(args.manifold)
    for v, w in args.cut:
        if not m.has_edge(v, w):
            raise InputError(f"no edge {v}:{w}")
    res = double_cover_cut(m, args.cut)
    cover = res.cover if isinstance(res, Disconnected) else res
    print(f"double cover: {len(cover.total.blocks)} blocks, {len(cover.total.edges)} edges")
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(serialize_manifold(cover.total))
    if isinstance(res, Disconnected):
        print("connected: no (cut is a coboundary)")
        return FAILS
    print("connected: yes")
    print(f"invariants preserved: {'yes' if cover_invariants_preserved(res) else 'no'}")
    return OK


def cmd_certify(args):
    m, text = _load(args.manifold)
    opts = CertifyOptions(
        max_vertices=args.max_vertices, max_cut_edges=args.max_cut_edges, workers=args.workers
    )
    try:
        cert = certify_no_vertex_faithful(m, opts, serialize_manifold(m))
    except NotClosedError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return BAD_INPUT
    except NotSDDError as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return FAILS
    except ObstructionError as exc:
        raise InputError(str(exc)) from None
    data = cert.data
    n_cand = sum(len(v["candidates"]) for v in data["vertices"])
    for vr in data["vertices"]:
        print(f"vertex {vr['vertex']}: {len(vr['candidates'])} candidates, contradiction: {'yes' if vr['contradiction'] else 'no'}")
    print(f"conclusion: {data['conclusion']} ({n_cand} candidates)")
    for g in cert.gaps:
        print(f"gap: {g}")
    if args.out:
        write_json(args.out, data)
    else:
        sys.stdout.write(dump_json(data))
    return OK if cert.complete and data["conclusion"] != "partial" else FAILS


def cmd_check(args):
    cert = _load_json(args.certificate)
    text = None
    if args.manifold:
        _, text = _load(args.manifold)
    report = check_certificate(cert, text)
    for e in report.errors:
        print(e)
    print(f"checked {report.checked_candidates} candidates: {'ok' if report.ok else 'FAILED'}")
    return OK if report.ok else FAILS


def cmd_build_rep(args):
    m, text = _load(args.manifold)
    try:
        rep = extend_along_tree(m, args.root, fiber_central=args.fiber_central, spread=args.spread)
    except PingPongError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return FAILS
    except ValueError as exc:
        raise InputError(str(exc)) from None
    report = verify_rep(m, rep, args.eps)
    print(f"root {rep.root}: ping-pong margin {rep.pingpong.margin:.6g}, spread {rep.params['spread']}")
    _print_report(report)
    if args.out:
        write_json(args.out, representation_to_json(rep, serialize_manifold(m)))
    return OK if report.ok else FAILS


def _print_report(report):
    for r in report.results:
        print(f"{r.name}: {'pass' if r.passed else 'FAIL'}")
        for f in r.failures:
            print(f"  {f}")


def cmd_verify_rep(args):
    data = _load_json(args.representation)
    if args.manifold:
        m, _ = _load(args.manifold)
    elif "manifold" in data:
        try:
            m = parse_manifold(data["manifold"]["text"])
        except (ManifoldParseError, ManifoldValidationError) as exc:
            raise InputError(f"embedded manifold: {exc}") from None
    else:
        raise InputError("no manifold given and none embedded in the representation")
    try:
        rep = representation_from_json(data)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed representation: {exc!r}") from None
    report = verify_rep(m, rep, args.eps)
    _print_report(report)
    if args.words:
        print(f"shortest reduced word distance (length <= {args.words}): {seed_word_distance(rep, args.words):.6g}")
    return OK if report.ok else FAILS


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="seifert-obstruct", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", help="parse and validate a manifold file")
    s.add_argument("manifold")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("invariants", help="charges, intersection indices, dominance, fiber products")
    s.add_argument("manifold")
    s.add_argument("--out")
    s.set_defaults(func=cmd_invariants)

    s = sub.add_parser("sdd", help="exit 0 iff every block is strictly diagonally dominant")
    s.add_argument("manifold")
    s.set_defaults(func=cmd_sdd)

    s = sub.add_parser("cover", help="double cover cut along edges")
    s.add_argument("manifold")
    s.add_argument("--cut", type=_edge, action="append", required=True, help="edge v:w (repeatable)")
    s.add_argument("--out", help="write the cover as a manifold file")
    s.set_defaults(func=cmd_cover)

    s = sub.add_parser("certify", help="certificate that no vertex-faithful representation exists")
    s.add_argument("manifold")
    s.add_argument("--out")
    s.add_argument("--max-vertices", type=int, default=12)
    s.add_argument("--max-cut-edges", type=int, default=12)
    s.add_argument("--workers", type=int)
    s.set_defaults(func=cmd_certify)

    s = sub.add_parser("check", help="replay a certificate independently")
    s.add_argument("certificate")
    s.add_argument("--manifold")
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("build-rep", help="vertex-faithful representation of a tree")
    s.add_argument("manifold")
    s.add_argument("--root", required=True)
    s.add_argument("--fiber-central", type=_real, default=1)
    s.add_argument("--spread", type=_real)
    s.add_argument("--eps", type=float, default=1e-9)
    s.add_argument("--out")
    s.set_defaults(func=cmd_build_rep)

    s = sub.add_parser("verify-rep", help="check a stored representation")
    s.add_argument("representation")
    s.add_argument("--manifold")
    s.add_argument("--eps", type=float, default=1e-9)
    s.add_argument("--words", type=int, default=0, help="also report reduced words up to this length")
    s.set_defaults(func=cmd_verify_rep)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return BAD_INPUT if exc.code else OK
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
