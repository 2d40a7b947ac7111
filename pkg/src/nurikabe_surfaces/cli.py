"""Command-line front end.

Exit codes: 0 success (and full agreement for ``verify``), 1 usage or input
error, 2 formula/oracle disagreement reported by ``verify``.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional, Sequence

from . import bijections, sequences
from .enumeration import DEFAULT_CAP, CapExceeded, Constraint, count_valid, enumerate_valid
from .render import render_ascii, render_svg
from .rules import Clue, Coloring, Rule
from .solver import PuzzleSpec, solve
from .surface import SurfaceError, build_named, parse_surface, serialize_surface

EXIT_OK, EXIT_ERROR, EXIT_DISAGREE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse would exit with 2, which verify reserves
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def _emit(records: List[dict]) -> None:
    for rec in records:
        print(json.dumps(rec, sort_keys=True))


def _load_surface(args):
    if args.spec:
        path = Path(args.spec)
        return parse_surface(path.read_text(), name=f"spec:{path.name}")
    if args.surface:
        return build_named(args.surface)
    raise SurfaceError("give --surface NAME:N[xM] or --spec FILE")


def _parse_constraint(tokens: Sequence[str]) -> Constraint:
    water, land = set(), set()
    for tok in " ".join(tokens).split():
        key, _, vals = tok.partition("=")
        if key not in ("water", "land") or not vals:
            raise ValueError(f"bad constraint {tok!r}; use water=1,7 land=4")
        squares = {int(v) for v in vals.split(",") if v}
        (water if key == "water" else land).update(squares)
    return Constraint.of(water, land)


def _parse_clues(tokens: Sequence[str]) -> List[Clue]:
    clues = []
    for tok in tokens:
        sq, sep, size = tok.partition(":")
        if not sep:
            raise ValueError(f"bad clue {tok!r}; use SQUARE:SIZE")
        clues.append(Clue(int(sq), int(size)))
    return clues


def _parse_coloring(text: Optional[str], n: int) -> Optional[Coloring]:
    if text is None:
        return None
    if set(text) <= set("#. "):
        col = Coloring.from_string(text)
    else:
        col = Coloring.from_water(n, (int(v) for v in text.split(",") if v))
    if col.n != n:
        raise ValueError(f"coloring has {col.n} squares, surface has {n}")
    return col


def _rules(value: str) -> List[Rule]:
    if value == "both":
        return [Rule.SQUARE, Rule.LOOP]
    return [Rule.parse(value)]


def cmd_describe(args) -> int:
    surface = _load_surface(args)
    orbits = surface.orbits
    if args.format == "json-lines":
        _emit([{
            "surface": surface.name,
            "n_squares": surface.n_squares,
            "euler_characteristic": surface.euler_characteristic(),
            "adjacency": sorted(list(e) for e in surface.adjacency_graph.edges),
            "orbits": [
                {"interior": o.interior, "square_degree": o.square_degree,
                 "squares": sorted(o.incident_squares)}
                for o in orbits
            ],
        }])
        return EXIT_OK
    print(f"surface {surface.name}: {surface.n_squares} squares, "
          f"euler characteristic {surface.euler_characteristic()}")
    print(f"vertices {len(orbits)} ({sum(o.interior for o in orbits)} interior)")
    for o in orbits:
        kind = "interior" if o.interior else "boundary"
        print(f"  {kind} degree {o.square_degree} squares {sorted(o.incident_squares)}")
    edges = " ".join(f"{i}-{j}" for i, j in sorted(surface.adjacency_graph.edges))
    print(f"adjacency {edges}")
    print(serialize_surface(surface), end="")
    return EXIT_OK


def cmd_count(args) -> int:
    surface = _load_surface(args)
    constraint = _parse_constraint(args.constraint or [])
    records = []
    for rule in _rules(args.rule):
        res = count_valid(surface, rule, constraint, workers=args.workers, cap=args.cap,
                          cap_override=args.cap_override)
        records.append({"surface": surface.name, "rule": str(rule),
                        "constraint": str(constraint), "count": res.count})
    if args.format == "json-lines":
        _emit(records)
    elif len(records) == 1:
        print(records[0]["count"])
    else:
        for r in records:
            print(f"{r['rule']} {r['count']}")
    return EXIT_OK


def cmd_enumerate(args) -> int:
    surface = _load_surface(args)
    constraint = _parse_constraint(args.constraint or [])
    rule = Rule.parse(args.rule)
    res = enumerate_valid(surface, rule, constraint, workers=args.workers, cap=args.cap,
                          cap_override=args.cap_override, listing_cap=args.listing_cap)
    if args.format == "json-lines":
        _emit([{"surface": surface.name, "rule": str(rule), "mask": c.mask,
                "water": sorted(c.water)} for c in res.colorings])
    else:
        for c in res.colorings:
            print(c)
        print(f"# {res.count} valid colorings", file=sys.stderr)
    return EXIT_OK


def cmd_verify(args) -> int:
    families = sequences.FAMILIES if args.family == "all" else [args.family]
    report = sequences.verify(range(args.min_n, args.max_n + 1), _rules(args.rule), families,
                              workers=args.workers, cap=args.cap)
    if args.format == "json-lines":
        _emit(report.to_records())
    else:
        print(report.to_text(), end="")
    return EXIT_OK if report.all_agree else EXIT_DISAGREE


def cmd_bijection(args) -> int:
    if args.lemma:
        ks = range(args.k, (args.max_k or args.k) + 1)
        reports = [bijections.check_bijection(args.lemma, k, workers=args.workers) for k in ks]
        if args.format == "json-lines":
            _emit([{"lemma": r.lemma, "k": r.k, "domain": r.domain_size, "target": r.target_size,
                    "parts": [list(p) for p in r.target_parts], "passed": r.passed}
                   for r in reports])
        else:
            for r in reports:
                print(r.summary())
        return EXIT_OK if all(r.passed for r in reports) else EXIT_DISAGREE
    if not args.apply or args.coloring is None:
        raise ValueError("give --lemma NAME --k K, or --apply MAP --coloring STRING")
    if args.apply == "red-inverse":
        print(bijections.red_inverse(_rect_from_rows(args.coloring)))
        return EXIT_OK
    col = Coloring.from_string(args.coloring)
    if args.apply == "red":
        print(render_ascii_rect(bijections.red(col)), end="")
    elif args.apply == "contr":
        shorter, central = bijections.contr(col)
        print(f"{shorter} {'water' if central else 'land'}")
    else:
        print(bijections.contr_inverse(col, args.central == "water"))
    return EXIT_OK


def render_ascii_rect(rect: Coloring) -> str:
    k = rect.n // 2
    text = str(rect)
    return f"{text[:k]}\n{text[k:]}\n"


def _rect_from_rows(text: str) -> Coloring:
    rows = text.replace("/", " ").split()
    if len(rows) != 2 or len(rows[0]) != len(rows[1]):
        raise ValueError("rectangle colorings are two equal rows, e.g. '#..' '.#.' or '#../.#.'")
    return Coloring.from_string(rows[0] + rows[1])


def cmd_bfile(args) -> int:
    ns = range(args.min_n, args.max_n + 1)
    if args.formula:
        print(sequences.formula_bfile(args.formula, ns), end="")
    else:
        if not args.family:
            raise ValueError("give --formula ID or --family NAME")
        print(sequences.oracle_bfile(args.family, args.rule, ns, workers=args.workers), end="")
    return EXIT_OK


def cmd_solve(args) -> int:
    surface = _load_surface(args)
    puzzle = PuzzleSpec(surface, tuple(_parse_clues(args.clue or [])), Rule.parse(args.rule))
    sols = solve(puzzle, cap=args.cap, cap_override=args.cap_override)
    if args.format == "json-lines":
        _emit([{"surface": surface.name, "mask": s.mask, "water": sorted(s.water)} for s in sols])
    else:
        for s in sols:
            print(render_ascii(surface, s, puzzle.clues), end="")
            print()
        print(f"# {len(sols)} solution(s)", file=sys.stderr)
    return EXIT_OK


def cmd_render(args) -> int:
    surface = _load_surface(args)
    coloring = _parse_coloring(args.coloring, surface.n_squares)
    clues = _parse_clues(args.clue or [])
    if args.format == "svg":
        print(render_svg(surface, coloring, clues, orbits=args.orbits), end="")
    else:
        print(render_ascii(surface, coloring, clues, orbits=args.orbits), end="")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="nurikabe-surfaces", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def surface_opts(sp):
        g = sp.add_mutually_exclusive_group(required=True)
        g.add_argument("--surface", help="NAME:N or NAME:RxC, e.g. mobius:7, rectangle:2x3")
        g.add_argument("--spec", help="surface-spec file")

    def run_opts(sp):
        sp.add_argument("--workers", type=int, default=1)
        sp.add_argument("--cap", type=int, default=DEFAULT_CAP)
        sp.add_argument("--cap-override", action="store_true")

    sp = sub.add_parser("describe", help="vertex orbits, adjacency, Euler characteristic")
    surface_opts(sp)
    sp.add_argument("--format", choices=("text", "json-lines"), default="text")
    sp.set_defaults(func=cmd_describe)

    sp = sub.add_parser("count", help="count valid colorings")
    surface_opts(sp)
    run_opts(sp)
    sp.add_argument("--rule", choices=("square", "loop", "both"), required=True)
    sp.add_argument("--constraint", nargs="+", help="water=1,7 land=4")
    sp.add_argument("--format", choices=("text", "json-lines"), default="text")
    sp.set_defaults(func=cmd_count)

    sp = sub.add_parser("enumerate", help="list valid colorings in ascending mask order")
    surface_opts(sp)
    run_opts(sp)
    sp.add_argument("--rule", choices=("square", "loop"), required=True)
    sp.add_argument("--constraint", nargs="+")
    sp.add_argument("--listing-cap", type=int, default=100_000)
    sp.add_argument("--format", choices=("text", "json-lines"), default="text")
    sp.set_defaults(func=cmd_enumerate)

    sp = sub.add_parser("verify", help="compare closed forms with the enumeration oracle")
    run_opts(sp)
    sp.add_argument("--family", choices=sequences.FAMILIES + ("all",), required=True)
    sp.add_argument("--rule", choices=("square", "loop", "both"), default="both")
    sp.add_argument("--min-n", type=int, default=1)
    sp.add_argument("--max-n", type=int, required=True)
    sp.add_argument("--format", choices=("text", "json-lines"), default="text")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("bijection", help="apply a cutting map or check a bijection")
    sp.add_argument("--lemma", choices=bijections.LEMMAS)
    sp.add_argument("--k", type=int, default=1)
    sp.add_argument("--max-k", type=int)
    sp.add_argument("--apply", choices=("red", "red-inverse", "contr", "contr-inverse"))
    sp.add_argument("--coloring", help="'#'/'.' string; rectangles as 'ROW1/ROW2'")
    sp.add_argument("--central", choices=("water", "land"), default="land")
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--format", choices=("text", "json-lines"), default="text")
    sp.set_defaults(func=cmd_bijection)

    sp = sub.add_parser("bfile", help="OEIS b-file from a formula or the oracle")
    sp.add_argument("--formula", choices=[f.value for f in sequences.FormulaId])
    sp.add_argument("--family", choices=sequences.FAMILIES)
    sp.add_argument("--rule", choices=("square", "loop"), default="loop")
    sp.add_argument("--min-n", type=int, default=1)
    sp.add_argument("--max-n", type=int, required=True)
    sp.add_argument("--workers", type=int, default=1)
    sp.set_defaults(func=cmd_bfile)

    sp = sub.add_parser("solve", help="solve a clue puzzle")
    surface_opts(sp)
    sp.add_argument("--cap", type=int, default=DEFAULT_CAP)
    sp.add_argument("--cap-override", action="store_true")
    sp.add_argument("--rule", choices=("square", "loop"), required=True)
    sp.add_argument("--clue", action="append", help="SQUARE:SIZE, repeatable")
    sp.add_argument("--format", choices=("text", "json-lines"), default="text")
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("render", help="draw the fundamental domain")
    surface_opts(sp)
    sp.add_argument("--coloring", help="'#'/'.' string or comma-separated water squares")
    sp.add_argument("--clue", action="append")
    sp.add_argument("--orbits", action="store_true", help="mark vertex orbits")
    sp.add_argument("--format", choices=("text", "svg"), default="text")
    sp.set_defaults(func=cmd_render)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except (SurfaceError, CapExceeded, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
