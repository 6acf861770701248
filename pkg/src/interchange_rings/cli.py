"""Command-line front end: ``icr <command> ...`` or ``python -m interchange_rings``.

Exit codes: 0 success, 1 verification failure, 2 unparseable input, 3 size
cap exceeded.  ``ICR_CAP`` in the environment overrides the default cap.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import canonical, verify
from .classify import FILTERS, census_by_order, classify
from .endo import endomorphism_classes, endomorphism_table, format_map, parse_pair
from .errors import CapExceededError, InterchangeError, InterchangeLawError, NotIdealError, SpecParseError
from .groups import format_cayley_table, parse_group_spec, ppc_decompose, resolve_cap
from .interchange import build_from_pair, check_basic_identities, magma_props
from .structures import ideals, matrix_ring, maximal_ideals, quotient

EXIT_OK, EXIT_VERIFY, EXIT_PARSE, EXIT_CAP = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise SpecParseError(message)


def _emit(args, text: str, record: dict) -> None:
    if args.json:
        print(json.dumps(record, sort_keys=True, indent=2))
    else:
        print(text)


def _ring(args):
    group = parse_group_spec(args.group, cap=args.cap)
    pair = parse_pair(args.pair, group)
    return build_from_pair(group, pair)


def cmd_info(args) -> int:
    g = parse_group_spec(args.group, cap=args.cap)
    table = endomorphism_table(g, cap=args.cap)
    rec = {
        "format": 1,
        "group": g.name,
        "order": g.order,
        "abelian": g.abelian,
        "endomorphisms": len(table),
        "automorphisms": int(table.automorphism_mask.sum()),
        "idempotents": int(table.idempotent_mask.sum()),
    }
    lines = [f"group         {g.name}", f"order         {g.order}", f"abelian       {g.abelian}",
             f"|End|         {rec['endomorphisms']}", f"|Aut|         {rec['automorphisms']}",
             f"idempotents   {rec['idempotents']}"]
    if g.abelian:
        b = ppc_decompose(g)
        rec["ppc_basis"] = list(b.basis)
        rec["ppc_orders"] = list(b.orders)
        lines.append(f"ppc-basis     {list(b.basis)} with orders {list(b.orders)} (rank {b.rank})")
    _emit(args, "\n".join(lines), rec)
    return EXIT_OK


def cmd_endos(args) -> int:
    g = parse_group_spec(args.group, cap=args.cap)
    table = endomorphism_table(g, cap=args.cap)
    rows = []
    for i, m in enumerate(table.maps):
        flags = []
        if table.automorphism_mask[i]:
            flags.append("auto")
        if table.idempotent_mask[i]:
            flags.append("idempotent")
        rows.append({"map": format_map(m), "flags": flags})
    classes = [[e.notation for e in cls] for cls in endomorphism_classes(g)]
    text = [f"{len(rows)} endomorphisms of {g.name}"]
    text += [f"  {r['map']}  {' '.join(r['flags'])}".rstrip() for r in rows]
    text.append(f"{len(classes)} similarity classes")
    text += ["  {" + ", ".join(c) + "}" for c in classes]
    _emit(args, "\n".join(text), {"format": 1, "group": g.name, "endomorphisms": rows, "classes": classes})
    return EXIT_OK


def cmd_classify(args) -> int:
    g = parse_group_spec(args.group, cap=args.cap)
    rep = classify(g, args.filter)
    text = [f"{rep.group}: {rep.count} classes ({rep.filter}) from {rep.pair_count} pairs"]
    text.append("counts  " + "  ".join(f"{k}={v}" for k, v in sorted(rep.counts.items())))
    for r in rep.representatives:
        text.append(f"  {r.pair.notation:<28} orbit={r.orbit_size:<4} {r.props.essential_tag.value}"
                    + "".join(f" {k}" for k in ("associative", "commutative", "idempotent") if getattr(r.props, k)))
    _emit(args, "\n".join(text), rep.as_dict())
    return EXIT_OK


def cmd_census(args) -> int:
    c = census_by_order(args.order, args.filter, abelian_only=args.abelian_only)
    text = [f"order {c.order}, filter {c.filter}: {c.total}" + ("" if c.complete else "  (partial: corpus may miss groups)")]
    text += [f"  {name:<14} {count}" for name, count in c.per_group.items()]
    _emit(args, "\n".join(text), c.as_dict())
    return EXIT_OK


def cmd_canonical(args) -> int:
    r = args.r
    triples = canonical.enumerate_canonical_pairs(r)
    rec = {"format": 1, "p": args.p, "n": args.n, "r": r, "formula": canonical.count_formula(r),
           "triples": [[t.s, t.t1, t.t2] for t in triples]}
    text = [f"Z{args.p ** args.n}^{r}: {len(triples)} canonical triples, formula {canonical.count_formula(r)}"]
    text += [f"  {t}" for t in triples]
    status = EXIT_OK
    if args.verify:
        check = canonical.verify_count(args.p, args.n, r, canonical=True)
        rec["verify"] = {"orbits": check.orbits, "distinct_triples": check.triples,
                         "commutative_associative": check.commutative_associative, "passed": check.ok}
        text.append(f"{'PASS' if check.ok else 'FAIL'}  orbits={check.orbits} distinct triples={check.triples} "
                    f"commutative-associative={check.commutative_associative}")
        status = EXIT_OK if check.ok else EXIT_VERIFY
    _emit(args, "\n".join(text), rec)
    return status


def cmd_bounds(args) -> int:
    r = args.r
    rec = {"format": 1, "r": r, "associative_bound": canonical.bound_4r(r), "band_bound": canonical.bound_band(r)}
    text = [f"r={r}: associative <= {rec['associative_bound']}, band <= {rec['band_bound']}"]
    status = EXIT_OK
    try:
        w = canonical.tightness_witness(r, cap=args.cap)
    except CapExceededError as exc:
        text.append(f"witness not built: {exc}")
    else:
        a = classify(w, "associative").counts
        rec["witness"] = {"group": w.name, "associative": a["associative"], "band": a["band"]}
        ok = a["associative"] == rec["associative_bound"] and a["band"] == rec["band_bound"]
        text.append(f"{'PASS' if ok else 'FAIL'}  {w.name}: associative={a['associative']} band={a['band']}")
        status = EXIT_OK if ok else EXIT_VERIFY
    _emit(args, "\n".join(text), rec)
    return status


def cmd_table(args) -> int:
    ring = _ring(args)
    props = magma_props(ring)
    _emit(args, format_cayley_table(ring.product).rstrip("\n"), ring.to_record(props))
    return EXIT_OK


def cmd_ideals(args) -> int:
    ring = _ring(args)
    found = ideals(ring)
    maximal = set(maximal_ideals(ring))
    text = [f"{len(found)} ideals of {ring!r}"]
    rec = {"format": 1, "group": ring.group.name, "pair": ring.pair.notation, "ideals": []}
    for ideal in found:
        q = quotient(ring, ideal)
        entry = {"elements": list(ideal), "maximal": ideal in maximal, "quotient_order": q.ring.order,
                 "quotient_pair": q.ring.pair.notation, "quotient_product": q.ring.product.tolist()}
        rec["ideals"].append(entry)
        text.append(f"  {{{', '.join(map(str, ideal))}}}{'  maximal' if entry['maximal'] else ''}"
                    f"  quotient order {q.ring.order} pair {q.ring.pair.notation}")
    _emit(args, "\n".join(text), rec)
    return EXIT_OK


def cmd_matrix(args) -> int:
    ring = _ring(args)
    m = matrix_ring(ring, args.n, cap=args.cap)
    report = check_basic_identities(m)
    rec = {"format": 1, "base": ring.pair.notation, "n": args.n, "order": m.order,
           "interchange_law": True, "identities": report.passed}
    text = f"M{args.n} over {ring!r}: order {m.order}, interchange law verified, identities {'pass' if report.passed else 'FAIL'}"
    _emit(args, text, rec)
    return EXIT_OK if report.passed else EXIT_VERIFY


def cmd_verify(args) -> int:
    lines = []

    def progress(res):
        if not args.json:
            print(res.line(), flush=True)
        lines.append(res)

    verify.run_suite(max_order=args.max_order, progress=progress)
    failed = [r for r in lines if not r.passed]
    if args.json:
        print(json.dumps({"format": 1, "checks": [
            {"name": r.name, "subject": r.subject, "checked": r.checked, "counterexamples": r.counterexamples}
            for r in lines], "passed": not failed}, sort_keys=True, indent=2))
    else:
        print(f"{len(lines) - len(failed)}/{len(lines)} checks passed")
    return EXIT_VERIFY if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit a JSON record instead of text")
    common.add_argument("--cap", type=int, default=None, help="size cap on group order (default: $ICR_CAP or 256)")

    p = _Parser(prog="icr", description="Construct, classify and count interchange near rings on finite groups.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("info", parents=[common], help="group summary")
    s.add_argument("group")
    s.set_defaults(func=cmd_info)

    s = sub.add_parser("endos", parents=[common], help="list End(G) and its similarity classes")
    s.add_argument("group")
    s.set_defaults(func=cmd_endos)

    s = sub.add_parser("classify", parents=[common], help="isomorphism classes on one group")
    s.add_argument("group")
    s.add_argument("--filter", default="all", choices=FILTERS)
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("census", parents=[common], help="class counts summed over all groups of an order")
    s.add_argument("--order", type=int, required=True)
    s.add_argument("--filter", default="all", choices=FILTERS)
    s.add_argument("--abelian-only", action="store_true")
    s.set_defaults(func=cmd_census)

    s = sub.add_parser("canonical", parents=[common], help="canonical triples on Z_{p^n}^r")
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--r", type=int, required=True)
    s.add_argument("--verify", action="store_true", help="count orbits and canonical forms exhaustively")
    s.set_defaults(func=cmd_canonical)

    s = sub.add_parser("bounds", parents=[common], help="4^r and 2^r bounds with their cyclic witness")
    s.add_argument("--r", type=int, required=True)
    s.set_defaults(func=cmd_bounds)

    for name, func, help_text in (
        ("table", cmd_table, "product table of the ring built from a pair"),
        ("ideals", cmd_ideals, "ideals and quotients of a ring"),
        ("matrix", cmd_matrix, "matrix ring over a ring"),
    ):
        s = sub.add_parser(name, parents=[common], help=help_text)
        s.add_argument("group")
        s.add_argument("pair", help='two maps, e.g. "(0220),(0220)"')
        if name == "matrix":
            s.add_argument("--n", type=int, default=2)
        s.set_defaults(func=func)

    s = sub.add_parser("verify", parents=[common], help="run the full verification suite on the built-in corpus")
    s.add_argument("--max-order", type=int, default=8)
    s.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.cap is not None:
            resolve_cap(args.cap)
        return args.func(args)
    except SpecParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except CapExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (InterchangeLawError, NotIdealError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except InterchangeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
