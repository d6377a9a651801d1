"""Van Kampen obstruction of a simplicial 2-complex in R^4.

A generic simplexwise-linear map with integer vertex coordinates is sampled,
the intersection numbers of all pairs of vertex-disjoint triangles form a
cochain on the (unordered) deleted product, and the class of that cochain is
decided by solving against the finger-move coboundaries, over Z and over Z/2.

Orientation convention: a simplex is positively oriented by increasing vertex
index.  The sign of a transversal intersection of triangles s, t is the sign
of ``det[s1 - s0, s2 - s0, t1 - t0, t2 - t0]``; in R^4 this is symmetric in
(s, t), so cochains live on unordered pairs.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations
from typing import Mapping, Sequence

from .complexes import Complex2
from .intsolve import SolveResult, SparseMatrix, solve_integer_system

COORD_RANGE = 10**4
RETRY_BUDGET = 64

Simplex = tuple[int, ...]


class GenericityError(RuntimeError):
    pass


class DegenerateConfiguration(ValueError):
    pass


@dataclass(frozen=True, order=True)
class DeletedPair:
    first: Simplex
    second: Simplex

    @property
    def dims(self) -> tuple[int, int]:
        return len(self.first) - 1, len(self.second) - 1


def _disjoint(s: Simplex, t: Simplex) -> bool:
    return not set(s) & set(t)


def _simplices(K: Complex2) -> tuple[list[Simplex], list[Simplex]]:
    _, edges, tris = K.flatten()
    return sorted(tris), sorted(edges)


def deleted_pairs(K: Complex2, dims: tuple[int, int] = (2, 2)) -> list[DeletedPair]:
    """Vertex-disjoint simplex pairs.  (2,2) pairs are unordered with the smaller
    triangle first; (2,1) pairs are (triangle, edge)."""
    tris, edges = _simplices(K)
    if tuple(dims) == (2, 2):
        return [DeletedPair(s, t) for s, t in combinations(tris, 2) if _disjoint(s, t)]
    if tuple(dims) == (2, 1):
        return [DeletedPair(s, e) for s in tris for e in edges if _disjoint(s, e)]
    raise ValueError(f"unsupported dims {dims}")


# ---- exact 4x4 linear algebra -----------------------------------------------------


def det3(a, b, c):
    return (a[0] * (b[1] * c[2] - b[2] * c[1])
            - a[1] * (b[0] * c[2] - b[2] * c[0])
            + a[2] * (b[0] * c[1] - b[1] * c[0]))


def det4(c0, c1, c2, c3):
    """Determinant of the 4x4 matrix with the given columns."""
    total = 0
    cols = (c0, c1, c2, c3)
    for i in range(4):
        minor = [tuple(col[k] for k in range(4) if k != i) for col in cols[1:]]
        term = c0[i] * det3(*minor)
        total += term if i % 2 == 0 else -term
    return total


def _sub(p, q):
    return tuple(a - b for a, b in zip(p, q))


def triangle_hit(P: Sequence, Q: Sequence):
    """Intersect triangles ``P`` and ``Q`` (3 points each in Q^4).

    Returns ``(det, status)`` where ``det`` is the orientation determinant and
    status is ``"miss"``, ``"hit"`` (one interior point of both) or
    ``"degenerate"`` (coplanar-ish system or a hit on a boundary).
    """
    u1, u2 = _sub(P[1], P[0]), _sub(P[2], P[0])
    v1, v2 = _sub(Q[1], Q[0]), _sub(Q[2], Q[0])
    D = det4(u1, u2, v1, v2)
    if D == 0:
        return 0, "degenerate"
    # P0 + s1 u1 + s2 u2 = Q0 + t1 v1 + t2 v2, Cramer on columns [u1, u2, -v1, -v2]
    b = _sub(Q[0], P[0])
    nv1 = tuple(-x for x in v1)
    nv2 = tuple(-x for x in v2)
    cols = [u1, u2, nv1, nv2]
    nums = []
    for k in range(4):
        cc = list(cols)
        cc[k] = b
        nums.append(det4(*cc))
    sgn = 1 if D > 0 else -1
    s1, s2, t1, t2 = (n * sgn for n in nums)
    Dabs = D * sgn
    coords = (s1, s2, Dabs - s1 - s2, t1, t2, Dabs - t1 - t2)
    if any(v < 0 for v in coords):
        return D, "miss"
    if any(v == 0 for v in coords):
        return D, "degenerate"
    return D, "hit"


# ---- maps ----------------------------------------------------------------------------


@dataclass(frozen=True)
class RationalMap:
    """Vertex index -> point of Q^4 (ints or Fractions), extended linearly."""

    coordinates: Mapping[int, tuple]
    seed: int | None = None
    attempts: int = field(default=1, compare=False)

    def points(self, simplex: Simplex) -> list[tuple]:
        return [self.coordinates[v] for v in simplex]


def genericity_violations(f: RationalMap, pairs: Sequence[DeletedPair]) -> list[DeletedPair]:
    bad = []
    for p in pairs:
        _, status = triangle_hit(f.points(p.first), f.points(p.second))
        if status == "degenerate":
            bad.append(p)
    return bad


def sample_generic_map(K: Complex2, seed: int, pairs: Sequence[DeletedPair] | None = None) -> RationalMap:
    """Deterministic generic map: integer coordinates in [-10^4, 10^4].

    Offending vertices are redrawn from the same stream until every (2,2)
    deleted pair is in general position, at most 64 times.
    """
    rng = random.Random(seed)
    n = len(K.all_vertices())
    coords = {v: tuple(rng.randint(-COORD_RANGE, COORD_RANGE) for _ in range(4)) for v in range(n)}
    if pairs is None:
        pairs = deleted_pairs(K, (2, 2))
    for attempt in range(1, RETRY_BUDGET + 2):
        f = RationalMap(coords, seed, attempt)
        bad = genericity_violations(f, pairs)
        if not bad:
            return f
        if attempt > RETRY_BUDGET:
            break
        offending = sorted({v for p in bad for v in p.first + p.second})
        coords = dict(coords)
        for v in offending:
            coords[v] = tuple(rng.randint(-COORD_RANGE, COORD_RANGE) for _ in range(4))
    raise GenericityError(f"genericity not reached after {RETRY_BUDGET} redraws (seed {seed})")


def pair_intersection_number(f: RationalMap, pair: DeletedPair) -> int:
    D, status = triangle_hit(f.points(pair.first), f.points(pair.second))
    if status == "degenerate":
        raise DegenerateConfiguration(f"non-transversal intersection for {pair}")
    if status == "miss":
        return 0
    return 1 if D > 0 else -1


def vk_cocycle(f: RationalMap, K: Complex2, pairs: Sequence[DeletedPair] | None = None) -> dict[DeletedPair, int]:
    """Intersection-number cochain; only nonzero values are stored."""
    if pairs is None:
        pairs = deleted_pairs(K, (2, 2))
    out = {}
    for p in pairs:
        v = pair_intersection_number(f, p)
        if v:
            out[p] = v
    return out


# ---- coboundaries --------------------------------------------------------------------


def incidence(tri: Simplex, edge: Simplex) -> int:
    """``[edge : boundary of tri]`` for sorted simplices."""
    (missing,) = set(tri) - set(edge)
    return -1 if tri.index(missing) == 1 else 1


@dataclass
class Coboundary:
    rows: list[DeletedPair]  # (2,2) pairs
    cols: list[DeletedPair]  # (2,1) pairs (triangle, edge)
    matrix: SparseMatrix


def coboundary_matrix(K: Complex2) -> Coboundary:
    """Finger-move coboundaries: column (s, e) hits every row {s, t} with e a
    face of t, with entry ``[e : boundary of t]``."""
    rows = deleted_pairs(K, (2, 2))
    cols = deleted_pairs(K, (2, 1))
    row_index = {(p.first, p.second): i for i, p in enumerate(rows)}
    tris, _ = _simplices(K)
    cofaces: dict[Simplex, list[Simplex]] = {}
    for t in tris:
        for e in combinations(t, 2):
            cofaces.setdefault(e, []).append(t)
    data: list[dict[int, int]] = [{} for _ in rows]
    for j, col in enumerate(cols):
        s, e = col.first, col.second
        for t in cofaces.get(e, ()):
            if not _disjoint(s, t):
                continue
            i = row_index[(s, t) if s < t else (t, s)]
            data[i][j] = incidence(t, e)
    return Coboundary(rows, cols, SparseMatrix(len(rows), len(cols), data))


# ---- verdict -------------------------------------------------------------------------


@dataclass
class ObstructionVerdict:
    vanishes_over_Z: bool
    vanishes_mod_2: bool
    cocycle: dict[DeletedPair, int]
    map_seed: int
    pairs_22: int
    pairs_21: int
    witness: list[int] | None = None
    refutation_row: int | None = None
    solve_Z: SolveResult | None = None
    solve_2: SolveResult | None = None

    def to_dict(self, include_witness: bool = True) -> dict:
        return {
            "vanishes_Z": self.vanishes_over_Z,
            "vanishes_mod2": self.vanishes_mod_2,
            "pairs_22": self.pairs_22,
            "pairs_21": self.pairs_21,
            "seed": self.map_seed,
            "witness": self.witness if include_witness else None,
            "refutation_row": self.refutation_row,
        }


def cocycle_vector(cob: Coboundary, cocycle: Mapping[DeletedPair, int]) -> list[int]:
    return [cocycle.get(p, 0) for p in cob.rows]


def obstruction_verdict(K: Complex2, seed: int = 0, cob: Coboundary | None = None) -> ObstructionVerdict:
    if cob is None:
        cob = coboundary_matrix(K)
    f = sample_generic_map(K, seed, cob.rows)
    cocycle = vk_cocycle(f, K, cob.rows)
    c = cocycle_vector(cob, cocycle)
    over_z = solve_integer_system(cob.matrix, c, "Z")
    mod2 = solve_integer_system(cob.matrix, c, "Z/2")
    refutation = None
    if not over_z.solvable:
        refutation = over_z.refutation.row
    elif not mod2.solvable:
        refutation = mod2.refutation.row
    return ObstructionVerdict(
        vanishes_over_Z=over_z.solvable,
        vanishes_mod_2=mod2.solvable,
        cocycle=cocycle,
        map_seed=seed,
        pairs_22=len(cob.rows),
        pairs_21=len(cob.cols),
        witness=over_z.witness,
        refutation_row=refutation,
        solve_Z=over_z,
        solve_2=mod2,
    )


def total_mod2(K: Complex2, seed: int = 0) -> int:
    """Sum of all cocycle values mod 2 for the map drawn from ``seed``."""
    pairs = deleted_pairs(K, (2, 2))
    if not pairs:
        return 0
    f = sample_generic_map(K, seed, pairs)
    return sum(vk_cocycle(f, K, pairs).values()) % 2


def cocycles_cohomologous(K: Complex2, seed1: int, seed2: int,
                          cob: Coboundary | None = None) -> SolveResult:
    """Solve for the coboundary linking the cocycles of two sampled maps."""
    if cob is None:
        cob = coboundary_matrix(K)
    c1 = cocycle_vector(cob, vk_cocycle(sample_generic_map(K, seed1, cob.rows), K, cob.rows))
    c2 = cocycle_vector(cob, vk_cocycle(sample_generic_map(K, seed2, cob.rows), K, cob.rows))
    return solve_integer_system(cob.matrix, [a - b for a, b in zip(c1, c2)], "Z")
