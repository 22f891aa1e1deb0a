"""Command-line front end: ``k3lat {lat,roots,disc,sat,overlat,resolve,verify}``.

Exit codes: 0 success, 1 a verification check failed, 2 usage or input
error, 3 an enumeration cap was exceeded or an answer is unknown.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from typing import Any, Sequence

from .ambient import Configuration, ConfigurationError, build_M, even_overlattices, saturation, screen_overlattices
from .casebook import CASE_IDS, CaseReport, Check, run_case
from .forms import DEFAULT_CAP, CapExceeded, discriminant_group, fmt
from .isometry import lattices_isomorphic
from .linalg import det_rational
from .lattice import Lattice, LatticeError, ade, lattice_from_json, lattice_from_name, signature
from .resolution import ResolutionError, resolve
from .roots import RootSystemError, classify_root_system, enumerate_roots, longest_element

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3

# names tried when labelling overlattice candidates
KNOWN_LATTICES = ("U(2)+D4", "U(2)+D5", "<-4>+U+D5", "U+D4", "U+D5", "U+A3+A1^3", "<2>+A1^5")


class UsageError(Exception):
    pass


def _emit(payload: Any, fmt_: str, text: str) -> None:
    if fmt_ == "json":
        sys.stdout.write(json.dumps(payload, indent=2) + "\n")
    else:
        sys.stdout.write(text.rstrip("\n") + "\n")


def _read_json(path: str) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"malformed JSON in {path}: {exc}") from None


def _lattice(args) -> Lattice:
    given = [x for x in (args.ade, args.gram, getattr(args, "name", None)) if x]
    if len(given) != 1:
        raise UsageError("give exactly one of --ade, --gram, --name")
    if args.ade:
        return ade(args.ade)
    if args.gram:
        return lattice_from_json(_read_json(args.gram))
    return lattice_from_name(args.name)


def _gram_text(lat: Lattice) -> str:
    width = max((len(str(x)) for row in lat.gram for x in row), default=1)
    return "\n".join("  " + " ".join(str(x).rjust(width) for x in row) for row in lat.gram)


# -- commands -------------------------------------------------------------------------

def cmd_lat(args) -> int:
    lat = _lattice(args)
    p, q = signature(lat)
    payload = {"rank": lat.rank, "det": lat.det, "signature": [p, q], "even": lat.is_even,
               "labels": list(lat.labels), "gram": [list(r) for r in lat.gram]}
    text = (f"rank {lat.rank}, det {lat.det}, signature ({p},{q}), {'even' if lat.is_even else 'odd'}\n"
            f"labels {' '.join(lat.labels)}\n{_gram_text(lat)}")
    _emit(payload, args.format, text)
    return EXIT_OK


def cmd_roots(args) -> int:
    lat = _lattice(args)
    roots = enumerate_roots(lat)
    if len(roots) > args.cap_roots:
        sys.stderr.write(f"{len(roots)} roots exceed the cap {args.cap_roots}\n")
        return EXIT_CAP
    base = classify_root_system(lat, roots)
    iota = longest_element(base) if base.rank else None
    payload = {"count": len(roots), "types": base.types, **base.to_json(),
               "iota_permutation": list(iota.permutation) if iota else []}
    text = (f"{len(roots)} roots, type {' + '.join(base.types) or 'none'}\n"
            + "\n".join(f"  r{i}: {list(r)}" for i, r in enumerate(base.simple_roots))
            + (f"\n-w0 permutes simple roots as {list(iota.permutation)}" if iota else ""))
    _emit(payload, args.format, text)
    return EXIT_OK


def cmd_disc(args) -> int:
    lat = _lattice(args)
    form = discriminant_group(lat)
    payload: dict[str, Any] = {
        "orders": list(form.orders),
        "generators": [[fmt(x) for x in row] for row in form.matrix],
    }
    lines = [f"A = {form.describe()} (order {form.size})"]
    for i, d in enumerate(form.orders):
        lines.append(f"  q(g{i + 1}) = {fmt(form.matrix[i][i])} mod 2   (order {d})")
    if form.size > args.cap_disc:
        _emit(payload, args.format, "\n".join(lines + [f"element table omitted: |A| > {args.cap_disc}"]))
        return EXIT_CAP
    payload["q"] = form.to_json()["q"]
    _emit(payload, args.format, "\n".join(lines))
    return EXIT_OK


def _vectors(text: str) -> list[list[int]]:
    data = _read_json(text) if os.path.exists(text) else _parse_inline(text)
    if not isinstance(data, list) or not all(isinstance(v, list) for v in data):
        raise UsageError("--vectors expects a JSON list of integer vectors")
    return data


def _parse_inline(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"malformed JSON for --vectors: {exc}") from None


def cmd_sat(args) -> int:
    lat = _lattice(args)
    vecs = _vectors(args.vectors)
    if any(len(v) != lat.rank for v in vecs):
        raise UsageError(f"vectors must have {lat.rank} coordinates")
    sat = saturation(lat, vecs)
    coords = [sat.from_ambient(v) for v in vecs]
    index = abs(det_rational(coords)) if coords else Fraction(1)
    payload = {"basis": [[fmt(x) for x in b] for b in sat.basis], "gram": [list(r) for r in sat.gram],
               "index": fmt(index)}
    text = (f"saturation of rank {sat.rank}, index {fmt(index)} over the span\n"
            + "\n".join(f"  {list(b)}" for b in sat.basis) + "\n" + _gram_text(sat))
    _emit(payload, args.format, text)
    return EXIT_OK


def _identify(lat: Lattice, cap: int) -> str | None:
    for name in KNOWN_LATTICES:
        ref = lattice_from_name(name)
        if ref.rank != lat.rank or ref.det != lat.det:
            continue
        try:
            if lattices_isomorphic(lat, ref, cap) == "yes":
                return name
        except CapExceeded:
            return None
    return None


def cmd_overlat(args) -> int:
    if args.file:
        config = Configuration.from_json(_read_json(args.file))
        m = build_M(config)
        base_index = int(1 / abs(det_rational(m.basis)))
        screened = screen_overlattices(config, args.cap_disc)
        reports = []
        for c in screened:
            reports.append({"index": c.glue_order * base_index, "glue": [list(g) for g in c.glue],
                            "iso_class": _identify(c.result, args.cap_disc) if c.passed else None,
                            "filters": {k: v for k, v in c.filters.items() if k != "even"}})
        kept = [r for r, c in zip(reports, screened) if c.passed]
        payload = {"screened": len(screened), "candidates": kept,
                   "rejected": [r for r, c in zip(reports, screened) if not c.passed]}
        text = [f"{len(screened)} even overlattices of M, {len(kept)} candidate(s)"]
        for r in kept:
            text.append(f"  index {r['index']}  glue {r['glue']}  {r['iso_class'] or ''}".rstrip())
        _emit(payload, args.format, "\n".join(text))
        return EXIT_OK
    lat = _lattice(args)
    cands = even_overlattices(lat, args.cap_disc)
    payload = {"candidates": [{"index": c.glue_order, "glue": [list(g) for g in c.glue],
                               "gram": [list(r) for r in c.result.gram]} for c in cands]}
    text = f"{len(cands)} even overlattices\n" + "\n".join(
        f"  index {c.glue_order}  glue {[list(g) for g in c.glue]}" for c in cands)
    _emit(payload, args.format, text)
    return EXIT_OK


def cmd_resolve(args) -> int:
    res = resolve(args.type, args.n)
    if args.format == "dot":
        sys.stdout.write(res.dual_graph.to_dot(f"{res.kind}{res.n}"))
        return EXIT_OK
    g = res.dual_graph
    text = (f"{res.kind}{res.n}: {len(g.self_ints)} curves after {res.steps} blowups, m = {res.m}, "
            f"involution {res.iota}\n"
            + "\n".join(f"  {name}: self-intersection {x}" for name, x in zip(g.names, g.self_ints))
            + "\n  edges: " + ", ".join(f"{g.names[i]}-{g.names[j]}" for i, j, _ in g.edges))
    _emit(res.to_json(), args.format, text)
    return EXIT_OK


def _run_one(case_id: str) -> dict:
    return run_case(case_id).to_json()


def cmd_verify(args) -> int:
    if bool(args.case) == bool(args.all):
        raise UsageError("give exactly one of --case ID or --all")
    ids = list(CASE_IDS) if args.all else [args.case]
    if args.case and args.case not in CASE_IDS:
        raise UsageError(f"unknown case {args.case!r}; choose from {', '.join(CASE_IDS)}")
    threads = _threads()
    if threads > 1 and len(ids) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            raw = list(pool.map(_run_one, ids))
    else:
        raw = [_run_one(i) for i in ids]
    reports = [_report_from_json(r) for r in raw]
    if args.format == "json":
        _emit({"reports": raw}, "json", "")
    else:
        sys.stdout.write("\n".join(r.to_text() for r in reports) + "\n")
        total = sum(len(r.checks) for r in reports)
        failed = sum(c.status == "fail" for r in reports for c in r.checks)
        sys.stdout.write(f"{total} checks, {failed} failed\n")
    if not all(r.ok for r in reports):
        return EXIT_FAIL
    if any(r.has_unknown for r in reports):
        return EXIT_CAP
    return EXIT_OK


def _report_from_json(raw: dict) -> CaseReport:
    rep = CaseReport(raw["case_id"])
    rep.checks = [Check(**c) for c in raw["checks"]]
    return rep


def _threads() -> int:
    value = os.environ.get("K3LAT_THREADS", "1")
    try:
        return max(1, int(value))
    except ValueError:
        raise UsageError(f"K3LAT_THREADS must be an integer, got {value!r}") from None


# -- parser ---------------------------------------------------------------------------

def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value <= 0:
        raise argparse.ArgumentTypeError("caps must be positive")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text", "dot"), default="text")
    common.add_argument("--cap-disc", type=_positive, default=DEFAULT_CAP, help="bound on discriminant group sizes")
    common.add_argument("--cap-roots", type=_positive, default=100_000, help="bound on the number of roots")
    source = argparse.ArgumentParser(add_help=False)
    source.add_argument("--ade", help="ADE type such as E6 (negative definite)")
    source.add_argument("--gram", help='JSON file {"gram": [[...]], "labels": [...]}')
    source.add_argument("--name", help='direct sum such as "U(2)+D4" or "<-2>+U(3)^2+A2^2"')

    parser = argparse.ArgumentParser(prog="k3lat", description="Exact lattice computations for ADE K3 surfaces.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("lat", parents=[common, source], help="rank, determinant, signature and Gram matrix")
    sub.add_parser("roots", parents=[common, source], help="roots, simple roots and root system type")
    sub.add_parser("disc", parents=[common, source], help="discriminant group and quadratic form")
    p = sub.add_parser("sat", parents=[common, source], help="primitive hull of a set of vectors")
    p.add_argument("--vectors", required=True, help="JSON list of vectors, inline or as a file")
    p = sub.add_parser("overlat", parents=[common, source], help="even overlattices (of M for a configuration)")
    p.add_argument("--file", help="configuration JSON; screens the even overlattices of M")
    p = sub.add_parser("resolve", parents=[common], help="canonical resolution of an ADE double point")
    p.add_argument("--type", required=True, help="A, D or E (or a full type such as D7)")
    p.add_argument("--n", type=int)
    p = sub.add_parser("verify", parents=[common], help="run stored reproduction checks")
    p.add_argument("--case", help=f"one of {', '.join(CASE_IDS)}")
    p.add_argument("--all", action="store_true")
    return parser


COMMANDS = {"lat": cmd_lat, "roots": cmd_roots, "disc": cmd_disc, "sat": cmd_sat,
            "overlat": cmd_overlat, "resolve": cmd_resolve, "verify": cmd_verify}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.format == "dot" and args.command != "resolve":
        parser.error("--format dot is only available for resolve")
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        sys.stderr.write(f"k3lat: {exc}\n")
        return EXIT_USAGE
    except CapExceeded as exc:
        sys.stderr.write(f"k3lat: cap exceeded: {exc}\n")
        return EXIT_CAP
    except (LatticeError, ConfigurationError, RootSystemError, ResolutionError, KeyError) as exc:
        sys.stderr.write(f"k3lat: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
