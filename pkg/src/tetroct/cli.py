"""Command-line interface.

Exit codes: 0 success (or interlocked for ``check``), 3 not interlocked,
2 usage or invalid input, 1 internal error.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .approx import ApproxError, ApproxParams, approximate
from .assembly import (AssemblyError, KINDS, assembly_graph, contact_faces,
                       generate_paper_assembly, search_checkerboard_rules,
                       search_grid_translations)
from .blocks import (FAMILIES, BlockError, boundary_surface, make_block, make_scaled,
                     mesh_volume, surface_stats, volume)
from .formats import (FormatError, cells_document, dumps_canonical, parse_rational,
                      rational_str, read_assembly, _triangles_of, read_stl, to_dot, write_assembly,
                      write_obj, write_stl)
from .interlock import check_interlocking
from .lattice import LatticeError
from .modify import TruncationError, assembly_meshes, truncate_assembly

EXIT_OK, EXIT_INTERNAL, EXIT_USAGE, EXIT_NOT_INTERLOCKED = 0, 1, 2, 3
USER_ERRORS = (FormatError, AssemblyError, BlockError, ApproxError, TruncationError,
               LatticeError, OSError)


class UsageError(Exception):
    pass


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def _block(family: str, params) -> "Block":  # noqa: F821
    if family in ("tetra", "octa"):
        if len(params) != 1:
            raise UsageError(f"{family} takes one scale parameter k")
        return make_scaled(family, params[0])
    return make_block(family, *params)


def _write_mesh(groups, path: str) -> None:
    """groups: list of (name, triangles)."""
    suffix = Path(path).suffix.lower()
    if suffix == ".obj":
        write_obj(groups, path)
    elif suffix == ".stl":
        write_stl([t for _, tris in groups for t in tris], path)
    else:
        raise UsageError(f"mesh output must end in .obj or .stl, got {path!r}")


def _assembly_groups(asm, meshes=None) -> list:
    meshes = meshes if meshes is not None else assembly_meshes(asm)
    frame, free = [], []
    for p, m in zip(asm.placements, meshes):
        (frame if p.is_frame else free).extend(_triangles_of(m))
    return [(name, tris) for name, tris in (("frame", frame), ("free", free)) if tris]


def _parse_slab(text: str) -> tuple:
    parts = text.split(",")
    if len(parts) != 2:
        raise UsageError("--slab expects 'a,c'")
    return tuple(parse_rational(p.strip()) for p in parts)


# ------------------------------------------------------------- commands

def cmd_block(args) -> int:
    b = _block(args.family, args.params)
    mesh = boundary_surface(b)
    if args.out:
        _write_mesh([("block", list(mesh.triangle_points()))], args.out)
    if args.stats:
        stats = surface_stats(mesh).as_dict()
        stats.update({"block": b.label(), "num_tets": b.num_tets, "num_octs": b.num_octs,
                      "volume": rational_str(volume(b)),
                      "mesh_volume": rational_str(mesh_volume(mesh))})
        _emit(stats)
    if args.plot:
        from .plotting import plot_block
        plot_block(mesh, args.plot, b.label())
    return EXIT_OK


def cmd_assembly(args) -> int:
    frame = args.frame
    if frame not in ("perimeter", "none"):
        try:
            frame = [int(x) for x in frame.split(",") if x]
        except ValueError:
            raise UsageError("--frame must be 'perimeter', 'none' or a comma-separated index list")
    asm = generate_paper_assembly(args.kind, *args.params, frame=frame)
    write_assembly(asm, args.out)
    if args.mesh or args.plot:
        meshes = assembly_meshes(asm)
        if args.mesh:
            _write_mesh(_assembly_groups(asm, meshes), args.mesh)
        if args.plot:
            from .plotting import plot_assembly
            plot_assembly(meshes, [p.is_frame for p in asm.placements], args.plot, args.kind)
    _emit({"kind": args.kind, "params": args.params, "placements": len(asm),
           "frame": asm.frame, "out": args.out})
    return EXIT_OK


def cmd_graph(args) -> int:
    import networkx as nx

    asm, _ = read_assembly(args.assembly)
    graph = assembly_graph(asm)
    g = graph.to_networkx()
    if args.dot:
        Path(args.dot).write_text(to_dot(graph, asm.frame))
    if args.plot:
        from .plotting import plot_graph
        pos = {k: (c, -r) for k, (r, c) in enumerate(asm.grid)} if asm.grid else None
        plot_graph(graph, args.plot, asm.frame, pos)
    _emit({"nodes": g.number_of_nodes(), "edges": sorted(map(list, graph.edges)),
           "num_edges": g.number_of_edges(), "connected": nx.is_connected(g) if len(g) else False,
           "is_tree": nx.is_tree(g) if len(g) else False,
           "degrees": [d for _, d in sorted(g.degree())]})
    return EXIT_OK


def _report(args, asm, truncation, verdict, system_contacts) -> dict:
    witness = None
    if verdict.witness is not None:
        witness = {str(k): {"v": [rational_str(x) for x in v], "w": [rational_str(x) for x in w]}
                   for k, (v, w) in sorted(verdict.witness.velocities.items())}
    return {
        "provenance": {"tool": "tetroct", "version": __version__, "command": "check",
                       "parameters": {"assembly": Path(args.assembly).name, "method": args.method,
                                      "vertex_contacts": not args.faces_only,
                                      "truncation": None if truncation is None
                                      else [rational_str(x) for x in truncation]}},
        "verdict": {"interlocked": verdict.interlocked, "certificate": verdict.note,
                    "method": verdict.method,
                    "optima": [{"lp": label, "value": rational_str(v)} for label, v in verdict.optima],
                    "witness": witness},
        "statistics": {"placements": len(asm), "frame": len(asm.frame), "free": len(asm.free),
                       "contacts": system_contacts, "constraint_rows": verdict.num_rows,
                       "variables": verdict.num_vars},
    }


def cmd_check(args) -> int:
    asm, truncation = read_assembly(args.assembly)
    if truncation is not None:
        t = truncate_assembly(asm, *truncation)
        contacts = list(t.contacts) if args.faces_only else t.all_contacts()
        verdict = check_interlocking(asm, args.method, contacts=contacts)
        ncontacts = len(contacts)
    else:
        verdict = check_interlocking(asm, args.method, vertex_contacts=not args.faces_only)
        ncontacts = len(contact_faces(asm))
    report = _report(args, asm, truncation, verdict, ncontacts)
    text = dumps_canonical(report)
    if args.report:
        Path(args.report).write_text(text)
    else:
        sys.stdout.write(text)
    print("interlocked" if verdict.interlocked else "not interlocked", file=sys.stderr)
    return EXIT_OK if verdict.interlocked else EXIT_NOT_INTERLOCKED


def cmd_approx(args) -> int:
    mesh = read_stl(args.model)
    params = ApproxParams(parse_rational(args.scale), args.samples, args.mode)
    result = approximate(mesh, params)
    suffix = Path(args.out).suffix.lower() if args.out else ""
    if suffix == ".json":
        Path(args.out).write_text(dumps_canonical(cells_document(
            result.cells, mode=result.mode, scale=rational_str(params.scale),
            samples_per_triangle=params.samples_per_triangle, note=result.note)))
    elif suffix in (".obj", ".stl"):
        from .blocks import boundary_triangles
        _write_mesh([("cells", boundary_triangles(result.cells))], args.out)
    elif args.out:
        raise UsageError("--out must end in .json, .obj or .stl")
    if args.plot:
        from .plotting import plot_cells
        plot_cells(result.cells, args.plot, f"{result.mode} approximation")
    from .approx import cells_volume
    _emit({"mode": result.mode, "cells": len(result.cells),
           "num_tets": sum(1 for c in result.cells if c.is_tet),
           "num_octs": sum(1 for c in result.cells if not c.is_tet),
           "volume": rational_str(cells_volume(result.cells)), "note": result.note,
           "dropped_degenerate": mesh.dropped_degenerate})
    return EXIT_OK


def cmd_truncate(args) -> int:
    asm, _ = read_assembly(args.assembly)
    a, c = _parse_slab(args.slab)
    t = truncate_assembly(asm, a, c)
    write_assembly(asm, args.out, truncation=(a, c))
    if args.mesh or args.plot:
        meshes = [b.boundary_mesh() for b in t.blocks]
        if args.mesh:
            _write_mesh(_assembly_groups(asm, meshes), args.mesh)
        if args.plot:
            from .plotting import plot_assembly
            plot_assembly(meshes, [p.is_frame for p in asm.placements], args.plot, "truncated")
    _emit({"slab": [rational_str(a), rational_str(c)], "placements": len(asm),
           "contact_pairs": sorted(map(list, t.contact_pairs())),
           "point_contacts": len(t.point_contacts),
           "volumes": [rational_str(b.volume()) for b in t.blocks]})
    return EXIT_OK


def cmd_search(args) -> int:
    b = _block(args.family, args.params)
    if args.checkerboard:
        rules = search_checkerboard_rules(b, args.bound)
        _emit([{"u": list(r.u), "w": list(r.w), "area": r.area,
                "alternate_translation": list(r.alternate.translation),
                "alternate_rotation": [x for row in r.alternate.rotation for x in row]}
               for r in rules])
    else:
        _emit([[list(u), list(w)] for u, w in search_grid_translations(b, args.bound)])
    return EXIT_OK


# --------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tetroct",
                                description="Interlocking assemblies of tetrahedral-octahedral blocks.")
    p.add_argument("--version", action="version", version=f"tetroct {__version__}")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("block", help="build a block and export its surface")
    s.add_argument("family", choices=FAMILIES + ("tetra", "octa"))
    s.add_argument("params", nargs="*", type=int)
    s.add_argument("--out", help="mesh file (.obj or .stl)")
    s.add_argument("--stats", action="store_true", help="print surface statistics as JSON")
    s.add_argument("--plot", help="render the block to an image file")
    s.set_defaults(func=cmd_block)

    s = sub.add_parser("assembly", help="generate one of the standard assemblies")
    s.add_argument("kind", choices=KINDS)
    s.add_argument("params", nargs="*", type=int)
    s.add_argument("--out", required=True, help="assembly JSON file")
    s.add_argument("--mesh", help="OBJ/STL export with 'frame' and 'free' groups")
    s.add_argument("--frame", default="perimeter",
                   help="'perimeter', 'none' or comma-separated placement indices")
    s.add_argument("--plot", help="render the assembly to an image file")
    s.set_defaults(func=cmd_assembly)

    s = sub.add_parser("graph", help="assembly graph of an assembly document")
    s.add_argument("assembly")
    s.add_argument("--dot", help="write the graph in DOT format")
    s.add_argument("--plot", help="render the graph to an image file")
    s.set_defaults(func=cmd_graph)

    s = sub.add_parser("check", help="decide first-order interlocking (exit 0 yes, 3 no)")
    s.add_argument("assembly")
    s.add_argument("--report", help="report JSON file (stdout if omitted)")
    s.add_argument("--method", choices=("cone", "per-variable"), default="cone")
    s.add_argument("--faces-only", action="store_true",
                   help="ignore vertex and edge contacts between blocks")
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("approx", help="approximate an STL model by honeycomb cells")
    s.add_argument("model")
    s.add_argument("--scale", default="1", help="scale factor (rational, e.g. 3/2)")
    s.add_argument("--samples", type=int, default=3, help="samples per triangle edge (shell mode)")
    s.add_argument("--mode", choices=("shell", "solid"), default="shell")
    s.add_argument("--out", help="cells as .json, or boundary mesh as .obj/.stl")
    s.add_argument("--plot", help="render the cells to an image file")
    s.set_defaults(func=cmd_approx)

    s = sub.add_parser("truncate", help="clip an assembly to a slab a <= x <= c")
    s.add_argument("assembly")
    s.add_argument("--slab", default="1/2,3/2", help="'a,c' with 0 <= a < c <= 2")
    s.add_argument("--out", required=True, help="assembly JSON with the truncation recorded")
    s.add_argument("--mesh", help="OBJ/STL export of the truncated blocks")
    s.add_argument("--plot", help="render the truncated assembly to an image file")
    s.set_defaults(func=cmd_truncate)

    s = sub.add_parser("search-translations", help="find planar grid placements of a block")
    s.add_argument("family", choices=FAMILIES + ("tetra", "octa"))
    s.add_argument("params", nargs="*", type=int)
    s.add_argument("--bound", type=int, default=3)
    s.add_argument("--checkerboard", action="store_true",
                   help="alternate quarter-turned copies instead of pure translations")
    s.set_defaults(func=cmd_search)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code) if e.code is not None else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as e:
        parser.print_usage(sys.stderr)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except USER_ERRORS as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as e:  # noqa: BLE001
        print(f"internal error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_INTERNAL


def main_exit() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_exit()
