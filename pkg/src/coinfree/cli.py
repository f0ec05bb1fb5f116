"""Command-line front end.

Subcommands: validate, coincidences, remove, certify, nielsen-circle,
degree.  Exit codes: 0 success, 1 semantic failure, 2 parse error,
3 degenerate overlap.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path

from .certify import (
    circle_degree,
    grid_oracle,
    induced_hom,
    maps_homotopic,
    nielsen_circle,
    render_certificate,
)
from .figures import render_window
from .graphs import Graph, validate as validate_graph
from .homotopy import StepKind
from .plmap import DegenerateOverlapError, PLMap, EdgeTrack, coincidences, validate_map
from .removal import CircleObstruction, RemovalError, remove_all
from .textio import (
    ParseError,
    format_point,
    format_track,
    parse_document,
    serialize_map_file,
)

EXIT_OK = 0
EXIT_SEMANTIC = 1
EXIT_PARSE = 2
EXIT_DEGENERATE = 3


class CommandFailure(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    inputs: tuple[str, ...]
    out_f: str | None = None
    out_g: str | None = None
    trace: str | None = None
    figures: str | None = None
    resolution: int = 1024


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise CommandFailure(f"{path}: {exc.strerror or exc}", EXIT_SEMANTIC) from None


def _load_one_map(path: str, known: dict[str, Graph]) -> PLMap:
    try:
        doc = parse_document(_read(path), known)
    except ParseError as exc:
        raise CommandFailure(f"{path}:{exc.line}: {exc.message}", EXIT_PARSE) from None
    known.update(doc.graphs)
    if len(doc.maps) != 1:
        raise CommandFailure(
            f"{path}: expected exactly one map, found {len(doc.maps)}", EXIT_SEMANTIC
        )
    m = next(iter(doc.maps.values()))
    problems = validate_map(m)
    if problems:
        raise CommandFailure(f"{path}: {problems[0]}", EXIT_SEMANTIC)
    return m


def _load_pair(f_path: str, g_path: str) -> tuple[PLMap, PLMap]:
    known: dict[str, Graph] = {}
    f = _load_one_map(f_path, known)
    g = _load_one_map(g_path, known)
    if f.domain != g.domain or f.codomain != g.codomain:
        raise CommandFailure(
            "maps do not share domain and codomain", EXIT_SEMANTIC
        )
    return f, g


def cmd_validate(cfg: RunConfig) -> int:
    known: dict[str, Graph] = {}
    bad = False
    for path in cfg.inputs:
        try:
            doc = parse_document(_read(path), known)
        except ParseError as exc:
            print(f"{path}:{exc.line}: {exc.message}", file=sys.stderr)
            return EXIT_PARSE
        known.update(doc.graphs)
        problems = []
        for gname, g in doc.graphs.items():
            problems += [f"graph {gname}: {p}" for p in validate_graph(g)]
        for mname, m in doc.maps.items():
            problems += [f"map {mname}: {p}" for p in validate_map(m)]
        if problems:
            bad = True
            for p in problems:
                print(f"{path}: {p}")
        else:
            print(f"{path}: ok")
    return EXIT_SEMANTIC if bad else EXIT_OK


def cmd_coincidences(cfg: RunConfig) -> int:
    f, g = _load_pair(*cfg.inputs)
    try:
        found = coincidences(f, g)
    except DegenerateOverlapError as exc:
        e, lo, hi = exc.overlaps[0]
        print(
            f"degenerate overlap on edge {e} over [{lo}, {hi}]: "
            "the maps agree on a whole subsegment; run 'remove' to apply "
            "general position first",
            file=sys.stderr,
        )
        return EXIT_DEGENERATE
    for c in found:
        print(
            f"{format_point(c.location)} -> {format_point(c.value)} "
            f"{c.transversality.value}"
        )
    return EXIT_OK


def _write_trace(path: str, report) -> None:
    cod = report.final_f.codomain
    lines = []
    for n, step in enumerate(report.steps, start=1):
        eid, lo, hi = step.windows[0]
        lines.append(
            f"step {n} {step.kind.value} map={step.maps_changed} "
            f"edge={eid} window={lo},{hi}"
        )
        if step.note:
            lines.append(f"# {step.note}")
        for extra_eid, xlo, xhi in step.windows[1:]:
            lines.append(f"# also edge={extra_eid} window={xlo},{xhi}")
        for title, frags in (("replaced", step.replaced), ("replacement", step.replacement)):
            for frag in frags:
                body = format_track(EdgeTrack(frag.segments), cod)
                lines.append(f"# {title} {frag.map_label} track {frag.edge} : {body}")
    Path(path).write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8")


def _write_figures(dirpath: str, report) -> None:
    out = Path(dirpath)
    out.mkdir(parents=True, exist_ok=True)
    for n, step in enumerate(report.steps, start=1):
        if step.kind is not StepKind.FORK_MANEUVER:
            continue
        for phase in ("before", "after"):
            svg = render_window(step, phase)
            (out / f"step-{n:03d}-{phase}.svg").write_text(svg, encoding="utf-8")


def cmd_remove(cfg: RunConfig) -> int:
    f, g = _load_pair(*cfg.inputs)
    try:
        report = remove_all(f, g)
    except RemovalError as exc:
        raise CommandFailure(str(exc), EXIT_SEMANTIC) from None
    if cfg.out_f:
        Path(cfg.out_f).write_text(serialize_map_file(report.final_f), encoding="utf-8")
    if cfg.out_g:
        Path(cfg.out_g).write_text(serialize_map_file(report.final_g), encoding="utf-8")
    if cfg.trace:
        _write_trace(cfg.trace, report)
    if cfg.figures:
        _write_figures(cfg.figures, report)
    if isinstance(report.outcome, CircleObstruction):
        print(f"circle obstruction: N = {report.outcome.nielsen}")
    else:
        print(f"coincidence-free after {len(report.steps)} steps")
    return EXIT_OK


def cmd_certify(cfg: RunConfig) -> int:
    known: dict[str, Graph] = {}
    before_f = _load_one_map(cfg.inputs[0], known)
    before_g = _load_one_map(cfg.inputs[1], known)
    after_f = _load_one_map(cfg.inputs[2], known)
    after_g = _load_one_map(cfg.inputs[3], known)
    for before, after, label in ((before_f, after_f, "f"), (before_g, after_g, "g")):
        if before.domain != after.domain or before.codomain != after.codomain:
            raise CommandFailure(
                f"before/after pair ({label}) must share domain and codomain",
                EXIT_SEMANTIC,
            )
    if after_f.domain != after_g.domain or after_f.codomain != after_g.codomain:
        raise CommandFailure(
            "the two after-maps must share domain and codomain", EXIT_SEMANTIC
        )

    certificates = []
    for before, after, label in ((before_f, after_f, "f"), (before_g, after_g, "g")):
        ok, conjugator = maps_homotopic(before, after)
        if not ok:
            print(f"homotopy check failed ({label})")
            return EXIT_SEMANTIC
        certificates.append(
            render_certificate(induced_hom(before), induced_hom(after), conjugator)
        )
    try:
        leftover = coincidences(after_f, after_g)
    except DegenerateOverlapError:
        print("coincidence found")
        return EXIT_SEMANTIC
    if leftover:
        print("coincidence found")
        return EXIT_SEMANTIC
    if grid_oracle(after_f, after_g, cfg.resolution):
        print("coincidence found")
        return EXIT_SEMANTIC
    for cert in certificates:
        print(cert)
    print(f"coincidences: none (exact solver and 1/{cfg.resolution} grid)")
    return EXIT_OK


def cmd_nielsen_circle(cfg: RunConfig) -> int:
    f, g = _load_pair(*cfg.inputs)
    try:
        print(nielsen_circle(f, g))
    except ValueError as exc:
        raise CommandFailure(str(exc), EXIT_SEMANTIC) from None
    return EXIT_OK


def cmd_degree(cfg: RunConfig) -> int:
    known: dict[str, Graph] = {}
    m = _load_one_map(cfg.inputs[0], known)
    try:
        print(circle_degree(m))
    except ValueError as exc:
        raise CommandFailure(str(exc), EXIT_SEMANTIC) from None
    return EXIT_OK


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("resolution must be at least 1")
    return value


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="coinfree",
        description="Coincidence detection, removal, and certification "
        "for piecewise-linear maps of graphs.",
    )
    sub = p.add_subparsers(dest="subcommand", required=True)

    v = sub.add_parser("validate", help="check graph/map files")
    v.add_argument("paths", nargs="+")

    c = sub.add_parser("coincidences", help="list the coincidences of a pair")
    c.add_argument("f_path")
    c.add_argument("g_path")

    r = sub.add_parser("remove", help="remove all coincidences by homotopy")
    r.add_argument("f_path")
    r.add_argument("g_path")
    r.add_argument("--out-f", metavar="PATH", help="write the deformed first map")
    r.add_argument("--out-g", metavar="PATH", help="write the deformed second map")
    r.add_argument("--trace", metavar="PATH", help="write the step-by-step log")
    r.add_argument("--figures", metavar="DIR", help="write maneuver window diagrams")

    ce = sub.add_parser("certify", help="check a removal run independently")
    ce.add_argument("before_f")
    ce.add_argument("before_g")
    ce.add_argument("after_f")
    ce.add_argument("after_g")
    ce.add_argument("--resolution", type=_positive_int, default=1024, metavar="N")

    n = sub.add_parser("nielsen-circle", help="|deg f - deg g| for circle self-maps")
    n.add_argument("f_path")
    n.add_argument("g_path")

    d = sub.add_parser("degree", help="degree of a circle-to-circle map")
    d.add_argument("map_path")

    return p


def _config_from(args: argparse.Namespace) -> RunConfig:
    inputs = {
        "validate": lambda: tuple(args.paths),
        "coincidences": lambda: (args.f_path, args.g_path),
        "remove": lambda: (args.f_path, args.g_path),
        "certify": lambda: (args.before_f, args.before_g, args.after_f, args.after_g),
        "nielsen-circle": lambda: (args.f_path, args.g_path),
        "degree": lambda: (args.map_path,),
    }[args.subcommand]()
    return RunConfig(
        subcommand=args.subcommand,
        inputs=inputs,
        out_f=getattr(args, "out_f", None),
        out_g=getattr(args, "out_g", None),
        trace=getattr(args, "trace", None),
        figures=getattr(args, "figures", None),
        resolution=getattr(args, "resolution", 1024),
    )


_COMMANDS = {
    "validate": cmd_validate,
    "coincidences": cmd_coincidences,
    "remove": cmd_remove,
    "certify": cmd_certify,
    "nielsen-circle": cmd_nielsen_circle,
    "degree": cmd_degree,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    cfg = _config_from(args)
    try:
        return _COMMANDS[cfg.subcommand](cfg)
    except CommandFailure as exc:
        print(str(exc), file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
