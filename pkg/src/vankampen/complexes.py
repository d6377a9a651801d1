"""Simplicial 2-complexes with attached polygonal cells, and the builders for
the two-block complex Z, the complexes K(phi) and their named subcomplexes."""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

from .words import Word, exponent_sums

Edge = tuple[int, int]
Triangle = tuple[int, int, int]


class ComplexError(ValueError):
    pass


def _sorted(simplex: Iterable[int]) -> tuple[int, ...]:
    return tuple(sorted(simplex))


@dataclass(frozen=True)
class AttachedCell:
    """A 2-cell glued along a closed edge path of the base complex.

    ``boundary`` lists base-vertex indices along the closed path (the first
    vertex is not repeated at the end).  ``interior_triangles`` use global
    indices: base vertices first, then the interior vertices of each cell in
    cell order.
    """

    boundary: tuple[int, ...]
    interior_vertices: tuple[str, ...]
    interior_triangles: frozenset[Triangle]

    def boundary_edges(self) -> list[Edge]:
        n = len(self.boundary)
        return [(self.boundary[i], self.boundary[(i + 1) % n]) for i in range(n)]


@dataclass(frozen=True)
class LoopPath:
    """Closed directed edge path given by its vertex names."""

    vertices: tuple[str, ...]

    @property
    def edges(self) -> list[tuple[str, str]]:
        v = self.vertices
        return [(v[i], v[(i + 1) % len(v)]) for i in range(len(v))]

    def reversed(self) -> "LoopPath":
        return LoopPath((self.vertices[0],) + tuple(reversed(self.vertices[1:])))


@dataclass(frozen=True)
class Complex2:
    vertices: tuple[str, ...]
    edges: frozenset[Edge]
    triangles: frozenset[Triangle]
    cells: tuple[AttachedCell, ...] = ()
    basepoint: str | None = None
    loops: dict = field(default_factory=dict, compare=False, hash=False)

    # ---- construction helpers -------------------------------------------------

    @classmethod
    def from_simplices(cls, vertices: Sequence[str], triangles: Iterable[Iterable[int]],
                       edges: Iterable[Iterable[int]] = (), **kw) -> "Complex2":
        """Downward closure of the given simplices."""
        tris = {_sorted(t) for t in triangles}
        eds = {_sorted(e) for e in edges}
        for t in tris:
            eds.update(combinations(t, 2))
        return cls(tuple(vertices), frozenset(eds), frozenset(tris), **kw)

    def index(self, name: str) -> int:
        return self.all_vertices().index(name)

    def all_vertices(self) -> tuple[str, ...]:
        names = list(self.vertices)
        for cell in self.cells:
            names.extend(cell.interior_vertices)
        return tuple(names)

    def flatten(self) -> tuple[tuple[str, ...], frozenset[Edge], frozenset[Triangle]]:
        """The underlying simplicial complex with every cell's interior included."""
        edges = set(self.edges)
        tris = set(self.triangles)
        for cell in self.cells:
            for t in cell.interior_triangles:
                tris.add(t)
                edges.update(combinations(t, 2))
        return self.all_vertices(), frozenset(edges), frozenset(tris)

    def face_vector(self) -> tuple[int, int, int]:
        names, edges, tris = self.flatten()
        return len(names), len(edges), len(tris)

    def euler_characteristic(self) -> int:
        v, e, t = self.face_vector()
        return v - e + t

    def resolve(self, label: str) -> int:
        """Base-vertex index for ``label``, also matching ``x6``/``y6`` -> ``o``
        and members of merged names such as ``x1~y1``."""
        for i, name in enumerate(self.vertices):
            if name == label or label in name.split("~"):
                return i
        if self.basepoint is not None and label in ("x6", "y6"):
            return self.resolve(self.basepoint)
        raise KeyError(label)

    # ---- JSON ----------------------------------------------------------------

    def to_dict(self) -> dict:
        out = {
            "vertices": list(self.vertices),
            "edges": sorted([list(e) for e in self.edges]),
            "triangles": sorted([list(t) for t in self.triangles]),
            "cells": [
                {
                    "boundary": list(c.boundary),
                    "interior_vertices": list(c.interior_vertices),
                    "interior_triangles": sorted([list(t) for t in c.interior_triangles]),
                }
                for c in self.cells
            ],
        }
        return out

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, data: dict) -> "Complex2":
        cells = tuple(
            AttachedCell(
                tuple(c["boundary"]),
                tuple(c.get("interior_vertices", ())),
                frozenset(_sorted(t) for t in c.get("interior_triangles", ())),
            )
            for c in data.get("cells", ())
        )
        return cls(
            tuple(data["vertices"]),
            frozenset(_sorted(e) for e in data.get("edges", ())),
            frozenset(_sorted(t) for t in data.get("triangles", ())),
            cells,
        )

    @classmethod
    def from_json(cls, text: str) -> "Complex2":
        return cls.from_dict(json.loads(text))


# ---- validation ----------------------------------------------------------------


def validate(K: Complex2) -> list[str]:
    """Violations of the complex invariants; empty when ``K`` is well formed."""
    problems = []
    n = len(K.vertices)
    names = K.all_vertices()
    if len(set(names)) != len(names):
        problems.append("duplicate vertex names")
    total = len(names)
    for e in sorted(K.edges):
        if len(set(e)) != 2 or not all(0 <= v < n for v in e):
            problems.append(f"bad edge {list(e)}")
    for t in sorted(K.triangles):
        if len(set(t)) != 3 or not all(0 <= v < n for v in t):
            problems.append(f"bad triangle {list(t)}")
            continue
        for e in combinations(t, 2):
            if e not in K.edges:
                problems.append(
                    f"triangle missing face {names[e[0]]}{names[e[1]]} of "
                    f"{''.join(names[v] for v in t)}"
                )
    offset = n
    for ci, cell in enumerate(K.cells):
        m = len(cell.interior_vertices)
        interior = set(range(offset, offset + m))
        offset += m
        if len(cell.boundary) == 2:
            problems.append(f"cell {ci}: boundary path of length 2 is degenerate")
            continue
        for u, v in cell.boundary_edges() if len(cell.boundary) > 1 else ():
            if not (0 <= u < n and 0 <= v < n) or _sorted((u, v)) not in K.edges:
                problems.append(f"cell {ci}: boundary step {u}->{v} is not a stored edge")
        problems.extend(f"cell {ci}: {p}" for p in _disk_problems(cell, interior, n, total))
    return problems


def _disk_problems(cell: AttachedCell, interior: set[int], n_base: int, total: int) -> list[str]:
    problems = []
    counts: dict[Edge, int] = {}
    for t in cell.interior_triangles:
        if len(set(t)) != 3 or not all(0 <= v < total for v in t):
            problems.append(f"bad interior triangle {list(t)}")
            return problems
        if not any(v in interior for v in t):
            problems.append(f"interior triangle {list(t)} has no interior vertex")
        if any(v >= n_base and v not in interior for v in t):
            problems.append(f"interior triangle {list(t)} uses another cell's vertex")
        for e in combinations(t, 2):
            counts[e] = counts.get(e, 0) + 1
    expected: dict[Edge, int] = {}
    for e in cell.boundary_edges() if len(cell.boundary) > 1 else ():
        key = _sorted(e)
        expected[key] = expected.get(key, 0) + 1
    interior_edges = 0
    for e, c in counts.items():
        if e[0] in interior or e[1] in interior:
            interior_edges += 1
            if c != 2:
                problems.append(f"interior edge {list(e)} lies on {c} triangles")
        elif c != expected.get(e, 0):
            problems.append(f"boundary edge {list(e)} covered {c} times, path uses it {expected.get(e, 0)}")
    for e in expected:
        if e not in counts:
            problems.append(f"boundary edge {list(e)} not covered by the disk")
    # boundary positions count as distinct vertices of the abstract disk
    chi = len(interior) - interior_edges + len(cell.interior_triangles)
    if chi != 1:
        problems.append(f"disk Euler characteristic {chi} != 1")
    return problems


# ---- builders ------------------------------------------------------------------


def build_base_block(prefix: str = "x") -> Complex2:
    """All triangles on seven vertices v0..v6 except v4v5v6."""
    names = [f"{prefix}{i}" for i in range(7)]
    tris = [t for t in combinations(range(7), 3) if t != (4, 5, 6)]
    return Complex2.from_simplices(names, tris, combinations(range(7), 2))


def build_Z() -> Complex2:
    """Two base blocks glued at x6 = y6 =: o, with loops a and b at o.

    Vertex order: x0..x5, o, y0..y5.
    """
    names = [f"x{i}" for i in range(6)] + ["o"] + [f"y{i}" for i in range(6)]
    xmap = list(range(7))
    ymap = [7, 8, 9, 10, 11, 12, 6]
    tris, edges = [], []
    for m in (xmap, ymap):
        block = build_base_block()
        tris += [tuple(m[v] for v in t) for t in block.triangles]
        edges += [tuple(m[v] for v in e) for e in block.edges]
    loops = {"a": LoopPath(("o", "x4", "x5")), "b": LoopPath(("o", "y4", "y5"))}
    return Complex2.from_simplices(names, tris, edges, basepoint="o", loops=loops)


def loop_image(Z: Complex2, phi: Word) -> list[str]:
    """Closed vertex path (names, first vertex not repeated) spelling ``phi``."""
    if not Z.loops:
        raise ComplexError("complex has no distinguished loops")
    path: list[str] = []
    for gen, sign in phi.letters:
        loop = Z.loops[gen] if sign > 0 else Z.loops[gen].reversed()
        path.extend(loop.vertices)
    return path


def decode_loop_path(Z: Complex2, path: Sequence[str]) -> Word:
    """Inverse of :func:`loop_image`: read a closed path as a word in a, b."""
    table = {}
    for gen, loop in Z.loops.items():
        table[loop.vertices] = (gen, 1)
        table[loop.reversed().vertices] = (gen, -1)
    size = len(next(iter(table)))
    if len(path) % size:
        raise ComplexError("path length is not a multiple of the loop length")
    letters = []
    for i in range(0, len(path), size):
        chunk = tuple(path[i:i + size])
        if chunk not in table:
            raise ComplexError(f"path segment {chunk} is not a loop")
        letters.append(table[chunk])
    return Word(tuple(letters))


def attach_disk(Z: Complex2, phi: Word, name: str = "D") -> Complex2:
    """Glue a 2-cell along the loop path spelling ``phi``.

    The disk is triangulated with a ring of fresh vertices inside the boundary
    ring and one apex, so repeated boundary vertices never produce duplicate
    triangles.
    """
    base = len(Z.all_vertices())
    if phi.is_identity():
        warnings.warn("phi = 1 excluded by the construction; attaching a sphere at the basepoint")
        o = Z.index(Z.basepoint)
        m = [base, base + 1, base + 2]
        tris = frozenset(_sorted(t) for t in combinations([o] + m, 3))
        cell = AttachedCell((o,), tuple(f"{name}.m{i}" for i in range(3)), tris)
        return Complex2(Z.vertices, Z.edges, Z.triangles, Z.cells + (cell,),
                        basepoint=Z.basepoint, loops=Z.loops)
    if exponent_sums(phi) != (0, 0):
        warnings.warn(f"phi = {phi} is not in the commutator subgroup")
    boundary = [Z.index(v) for v in loop_image(Z, phi)]
    n = len(boundary)
    ring = [base + i for i in range(n)]
    apex = base + n
    interior_names = tuple(f"{name}.m{i}" for i in range(n)) + (f"{name}.c",)
    tris = set()
    for i in range(n):
        j = (i + 1) % n
        tris.add(_sorted((boundary[i], boundary[j], ring[i])))
        tris.add(_sorted((boundary[j], ring[i], ring[j])))
        tris.add(_sorted((ring[i], ring[j], apex)))
    cell = AttachedCell(tuple(boundary), interior_names, frozenset(tris))
    return Complex2(Z.vertices, Z.edges, Z.triangles, Z.cells + (cell,),
                    basepoint=Z.basepoint, loops=Z.loops)


def build_K(phi: Word) -> Complex2:
    return attach_disk(build_Z(), phi)


def full_two_skeleton(n: int = 7) -> Complex2:
    """2-skeleton of the (n-1)-simplex on vertices v0..v{n-1}."""
    return Complex2.from_simplices([f"v{i}" for i in range(n)], combinations(range(n), 3),
                                   combinations(range(n), 2))


# ---- quotient and subcomplexes -------------------------------------------------


def quotient_points(K: Complex2, p: str, q: str) -> Complex2:
    """Identify base vertices ``p`` and ``q``; ``q`` is merged into ``p``."""
    ip, iq = K.resolve(p), K.resolve(q)
    if ip == iq:
        raise ComplexError("cannot identify a vertex with itself")
    names, edges, _ = K.flatten()
    if _sorted((ip, iq)) in edges:
        raise ComplexError(
            f"identification creates degenerate simplex: {names[ip]} and {names[iq]} cobound an edge"
        )

    def relabel(v: int) -> int:
        if v == iq:
            v = ip
        return v - 1 if v > iq else v

    vertices = list(K.vertices)
    vertices[ip] = f"{vertices[ip]}~{vertices[iq]}"
    del vertices[iq]
    cells = tuple(
        AttachedCell(
            tuple(relabel(v) for v in c.boundary),
            c.interior_vertices,
            frozenset(_sorted(relabel(v) for v in t) for t in c.interior_triangles),
        )
        for c in K.cells
    )
    basepoint = K.basepoint
    if basepoint is not None and K.vertices.index(basepoint) in (ip, iq):
        basepoint = vertices[relabel(ip)]
    loops = {
        g: LoopPath(tuple(vertices[relabel(K.vertices.index(v))] for v in lp.vertices))
        for g, lp in K.loops.items()
    }
    return Complex2(
        tuple(vertices),
        frozenset(_sorted(relabel(v) for v in e) for e in K.edges),
        frozenset(_sorted(relabel(v) for v in t) for t in K.triangles),
        cells,
        basepoint=basepoint,
        loops=loops,
    )


def induced(K: Complex2, keep: Iterable[int]) -> Complex2:
    """Full subcomplex of the base complex spanned by the given vertex indices."""
    keep = sorted(set(keep))
    new = {v: i for i, v in enumerate(keep)}
    return Complex2(
        tuple(K.vertices[v] for v in keep),
        frozenset(_sorted(new[v] for v in e) for e in K.edges if all(v in new for v in e)),
        frozenset(_sorted(new[v] for v in t) for t in K.triangles if all(v in new for v in t)),
        basepoint=K.basepoint if K.basepoint is not None and K.vertices.index(K.basepoint) in new else None,
    )


def named_subcomplex(K: Complex2, name: str) -> Complex2:
    """``H``: drop the attached cell and the triangles x1x2x3, y1y2y3.
    ``hatX`` / ``hatY``: full subcomplex of ``H`` on x1..x6 / y1..y6."""
    try:
        cut = [_sorted(K.resolve(f"{s}{i}") for i in (1, 2, 3)) for s in "xy"]
    except KeyError as exc:
        raise ComplexError(f"not a K_phi complex: vertex {exc} missing") from None
    if not all(t in K.triangles for t in cut):
        raise ComplexError("not a K_phi complex: x1x2x3 or y1y2y3 missing")
    H = Complex2(K.vertices, K.edges, K.triangles - frozenset(cut),
                 basepoint=K.basepoint, loops=K.loops)
    if name == "H":
        return H
    if name in ("hatX", "hatY"):
        s = "x" if name == "hatX" else "y"
        return induced(H, [H.resolve(f"{s}{i}") for i in range(1, 7)])
    raise ValueError(f"unknown subcomplex {name!r}")
