"""File formats: STL, OBJ, assembly and report JSON, DOT graphs."""
from __future__ import annotations

import json
import re
import struct
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

from .approx import InputMesh
from .assembly import AssemblyModel, Placement, make_assembly
from .blocks import Block, TriangleMesh, make_block, make_scaled
from .lattice import CellKey, HoneycombIsometry, LatticeError, is_signed_permutation

FORMAT_VERSION = 1


class FormatError(ValueError):
    pass


class StlHeaderError(FormatError):
    """Too short for a binary header and not ASCII STL either."""


class StlTruncatedError(FormatError):
    """ASCII STL ending in the middle of a facet or without 'endsolid'."""


class StlCountMismatchError(FormatError):
    """Binary STL whose size disagrees with the triangle count in the header."""


class SchemaError(FormatError):
    pass


class ParityError(FormatError):
    pass


class RotationError(FormatError):
    pass


# -------------------------------------------------------------------- STL

_FLOAT = r"[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?|[-+]?(?:nan|inf)"


def _parse_ascii_stl(text: str) -> InputMesh:
    tokens = text.split()
    if not tokens or tokens[0].lower() != "solid":
        raise StlHeaderError("not an ASCII STL file")
    tris, normals = [], []
    k = 1
    while k < len(tokens) and tokens[k].lower() not in ("facet", "endsolid"):
        k += 1  # solid name
    try:
        while True:
            if k >= len(tokens):
                raise StlTruncatedError("missing 'endsolid'")
            word = tokens[k].lower()
            if word == "endsolid":
                break
            if word != "facet" or tokens[k + 1].lower() != "normal":
                raise StlTruncatedError(f"unexpected token {tokens[k]!r}")
            normal = tuple(float(x) for x in tokens[k + 2:k + 5])
            k += 5
            if tokens[k].lower() != "outer" or tokens[k + 1].lower() != "loop":
                raise StlTruncatedError("expected 'outer loop'")
            k += 2
            verts = []
            for _ in range(3):
                if tokens[k].lower() != "vertex":
                    raise StlTruncatedError("expected 'vertex'")
                verts.append(tuple(float(x) for x in tokens[k + 1:k + 4]))
                if len(verts[-1]) != 3:
                    raise StlTruncatedError("incomplete vertex")
                k += 4
            if tokens[k].lower() != "endloop" or tokens[k + 1].lower() != "endfacet":
                raise StlTruncatedError("expected 'endloop endfacet'")
            k += 2
            tris.append(tuple(verts))
            normals.append(normal)
    except IndexError:
        raise StlTruncatedError("file ends inside a facet") from None
    except ValueError as e:
        if isinstance(e, FormatError):
            raise
        raise StlTruncatedError(f"bad number: {e}") from None
    return InputMesh.from_triangles(tris, normals)


def _parse_binary_stl(data: bytes) -> InputMesh:
    (count,) = struct.unpack_from("<I", data, 80)
    expected = 84 + 50 * count
    if len(data) != expected:
        raise StlCountMismatchError(
            f"header declares {count} triangles ({expected} bytes) but file has {len(data)} bytes")
    tris, normals = [], []
    for k in range(count):
        vals = struct.unpack_from("<12f", data, 84 + 50 * k)
        normals.append(vals[0:3])
        tris.append((vals[3:6], vals[6:9], vals[9:12]))
    return InputMesh.from_triangles(tris, normals)


def read_stl(path) -> InputMesh:
    data = Path(path).read_bytes()
    if len(data) >= 84:
        (count,) = struct.unpack_from("<I", data, 80)
        if len(data) == 84 + 50 * count:
            return _parse_binary_stl(data)
    head = data[:5].lower()
    if head == b"solid":
        try:
            text = data.decode("ascii")
        except UnicodeDecodeError:
            text = None
        if text is not None:
            return _parse_ascii_stl(text)
    if len(data) < 84:
        raise StlHeaderError(f"file has {len(data)} bytes, shorter than a binary STL header")
    return _parse_binary_stl(data)


def _triangles_of(mesh) -> list:
    if isinstance(mesh, TriangleMesh):
        return list(mesh.triangle_points())
    if isinstance(mesh, InputMesh):
        return list(mesh.triangles)
    return [tuple(t) for t in mesh]


def _normal(t):
    a, b, c = ([float(x) for x in p] for p in t)
    u = [b[i] - a[i] for i in range(3)]
    v = [c[i] - a[i] for i in range(3)]
    n = [u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]]
    length = sum(x * x for x in n) ** 0.5 or 1.0
    return [x / length for x in n]


def write_stl(mesh, path, binary: bool = True, name: str = "tetroct") -> None:
    tris = _triangles_of(mesh)
    if binary:
        out = bytearray(name.encode("ascii")[:80].ljust(80, b" "))
        out += struct.pack("<I", len(tris))
        for t in tris:
            vals = _normal(t) + [float(x) for p in t for x in p]
            out += struct.pack("<12fH", *vals, 0)
        Path(path).write_bytes(bytes(out))
        return
    lines = [f"solid {name}"]
    for t in tris:
        n = _normal(t)
        lines.append(f"  facet normal {n[0]!r} {n[1]!r} {n[2]!r}")
        lines.append("    outer loop")
        for p in t:
            lines.append("      vertex " + " ".join(repr(float(x)) for x in p))
        lines.append("    endloop")
        lines.append("  endfacet")
    lines.append(f"endsolid {name}")
    Path(path).write_text("\n".join(lines) + "\n")


def _fmt_coord(x) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return repr(float(x))


def write_obj(groups, path) -> None:
    """Write one mesh, or a list of (group name, triangles) pairs, as OBJ
    with shared (indexed) vertices."""
    if isinstance(groups, (TriangleMesh, InputMesh)) or (
            groups and not isinstance(groups[0][0], str)):
        groups = [("block", _triangles_of(groups))]
    index: dict = {}
    verts: list = []
    body = []
    for name, tris in groups:
        body.append(f"g {name}")
        for t in _triangles_of(tris):
            ids = []
            for p in t:
                key = tuple(Fraction(x) for x in p)
                if key not in index:
                    index[key] = len(verts) + 1
                    verts.append(key)
                ids.append(index[key])
            body.append("f " + " ".join(str(i) for i in ids))
    lines = ["# tetroct OBJ export"]
    lines += ["v " + " ".join(_fmt_coord(x) for x in v) for v in verts]
    lines += body
    Path(path).write_text("\n".join(lines) + "\n")


def read_obj(path) -> tuple[list, list, dict]:
    """Vertices, faces (0-based) and group membership from an OBJ file."""
    verts, faces, groups = [], [], {}
    current = None
    for line in Path(path).read_text().splitlines():
        parts = line.split()
        if not parts or parts[0].startswith("#"):
            continue
        if parts[0] == "v":
            verts.append(tuple(float(x) for x in parts[1:4]))
        elif parts[0] == "f":
            faces.append(tuple(int(x.split("/")[0]) - 1 for x in parts[1:]))
            groups.setdefault(current, []).append(len(faces) - 1)
        elif parts[0] == "g":
            current = " ".join(parts[1:])
    return verts, faces, groups


# -------------------------------------------------------- assembly JSON

def rational_str(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(s) -> Fraction:
    try:
        return Fraction(str(s))
    except (ValueError, ZeroDivisionError):
        raise SchemaError(f"not a rational number: {s!r}") from None


def block_definition(b: Block) -> dict:
    if b.name in ("kitten", "ufo", "cushion", "shuriken", "tetra", "octa"):
        return {"family": b.name, "params": list(b.params)}
    return {"cells": [[c.kind, c.x, c.y, c.z] for c in sorted(b.cells)]}


def assembly_document(a: AssemblyModel, truncation=None) -> dict:
    blocks: dict = {}
    names: dict = {}
    placements = []
    for p in a.placements:
        key = (p.block.name, p.block.params, p.block.cells)
        if key not in names:
            name = p.block.label()
            base, k = name, 2
            while name in blocks:
                name = f"{base}#{k}"
                k += 1
            names[key] = name
            blocks[name] = block_definition(p.block)
        iso = p.isometry
        placements.append({
            "block": names[key],
            "rotation": [x for row in iso.rotation for x in row],
            "translation": list(iso.translation),
            "frame": bool(p.is_frame),
        })
    doc = {"format_version": FORMAT_VERSION, "blocks": blocks, "placements": placements}
    if a.grid is not None:
        doc["grid"] = [list(g) for g in a.grid]
    if truncation is not None:
        doc["truncation"] = {"slab": [rational_str(truncation[0]), rational_str(truncation[1])]}
    return doc


def dumps_canonical(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def write_assembly(a: AssemblyModel, path, truncation=None) -> None:
    Path(path).write_text(dumps_canonical(assembly_document(a, truncation)))


def _block_from_definition(name, d) -> Block:
    if not isinstance(d, dict):
        raise SchemaError(f"block {name!r} must be an object")
    if "family" in d:
        fam = d["family"]
        params = d.get("params", [])
        if not isinstance(params, list) or not all(isinstance(x, int) for x in params):
            raise SchemaError(f"block {name!r}: params must be a list of integers")
        if fam in ("tetra", "octa"):
            if len(params) != 1:
                raise SchemaError(f"block {name!r}: scaled solids take one parameter")
            return make_scaled(fam, params[0])
        try:
            return make_block(fam, *params)
        except (ValueError, TypeError) as e:
            raise SchemaError(f"block {name!r}: {e}") from None
    if "cells" in d:
        cells = []
        for entry in d["cells"]:
            if (not isinstance(entry, list) or len(entry) != 4 or entry[0] not in ("tet", "oct")
                    or not all(isinstance(x, int) for x in entry[1:])):
                raise SchemaError(f"block {name!r}: bad cell entry {entry!r}")
            try:
                cells.append(CellKey(entry[0], *entry[1:]))
            except (LatticeError, ValueError) as e:
                raise SchemaError(f"block {name!r}: {e}") from None
        return Block(frozenset(cells), name, ())
    raise SchemaError(f"block {name!r} needs 'family' or 'cells'")


def assembly_from_document(doc) -> tuple[AssemblyModel, tuple | None]:
    if not isinstance(doc, dict):
        raise SchemaError("document must be a JSON object")
    for key in ("format_version", "blocks", "placements"):
        if key not in doc:
            raise SchemaError(f"missing key {key!r}")
    if doc["format_version"] != FORMAT_VERSION:
        raise SchemaError(f"unsupported format_version {doc['format_version']!r}")
    if not isinstance(doc["blocks"], dict) or not isinstance(doc["placements"], list):
        raise SchemaError("'blocks' must be an object and 'placements' a list")
    blocks = {name: _block_from_definition(name, d) for name, d in doc["blocks"].items()}
    placements = []
    for k, p in enumerate(doc["placements"]):
        if not isinstance(p, dict) or not {"block", "rotation", "translation"} <= set(p):
            raise SchemaError(f"placement {k} needs block, rotation and translation")
        if p["block"] not in blocks:
            raise SchemaError(f"placement {k} refers to unknown block {p['block']!r}")
        rot, tr = p["rotation"], p["translation"]
        if (not isinstance(rot, list) or len(rot) != 9 or not all(isinstance(x, int) for x in rot)):
            raise SchemaError(f"placement {k}: rotation must be 9 integers")
        if (not isinstance(tr, list) or len(tr) != 3 or not all(isinstance(x, int) for x in tr)):
            raise SchemaError(f"placement {k}: translation must be 3 integers")
        matrix = (tuple(rot[0:3]), tuple(rot[3:6]), tuple(rot[6:9]))
        if not is_signed_permutation(matrix):
            raise RotationError(f"placement {k}: rotation is not a signed permutation matrix")
        if sum(tr) % 2:
            raise ParityError(f"placement {k}: translation {tuple(tr)} has odd coordinate sum")
        frame = p.get("frame", False)
        if not isinstance(frame, bool):
            raise SchemaError(f"placement {k}: frame must be true or false")
        placements.append(Placement(blocks[p["block"]], HoneycombIsometry(matrix, tuple(tr)), frame))
    grid = doc.get("grid")
    if grid is not None:
        if not isinstance(grid, list) or len(grid) != len(placements):
            raise SchemaError("grid must list one coordinate pair per placement")
        grid = [tuple(g) for g in grid]
    truncation = None
    if "truncation" in doc:
        t = doc["truncation"]
        if not isinstance(t, dict) or not isinstance(t.get("slab"), list) or len(t["slab"]) != 2:
            raise SchemaError("truncation must be {'slab': [a, c]}")
        truncation = tuple(parse_rational(x) for x in t["slab"])
    return make_assembly(placements, grid), truncation


def read_assembly(path) -> tuple[AssemblyModel, tuple | None]:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as e:
        raise SchemaError(f"invalid JSON: {e}") from None
    return assembly_from_document(doc)


# ------------------------------------------------------------------ DOT

def to_dot(graph, frame: Iterable[int] = (), labels: dict | None = None) -> str:
    frame = set(frame)
    lines = ["graph assembly {"]
    for v in graph.nodes:
        attrs = [f'label="{labels[v]}"'] if labels and v in labels else []
        if v in frame:
            attrs += ["style=filled", "fillcolor=grey"]
        lines.append(f"  {v}" + (f" [{', '.join(attrs)}]" if attrs else "") + ";")
    for i, j in sorted(graph.edges):
        lines.append(f"  {i} -- {j};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def read_dot_edges(text: str) -> set:
    return {tuple(sorted((int(a), int(b)))) for a, b in re.findall(r"(\d+)\s*--\s*(\d+)", text)}


def cells_document(cells, **extra) -> dict:
    doc = {"format_version": FORMAT_VERSION,
           "cells": [[c.kind, c.x, c.y, c.z] for c in sorted(cells)]}
    doc.update(extra)
    return doc
