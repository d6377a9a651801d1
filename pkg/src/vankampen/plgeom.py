"""Exact rational PL geometry in Q^3 and Q^4.

No floating point is used for any decision: coordinates are ints or
``fractions.Fraction`` and every predicate is an exact sign test.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from .complexes import Complex2, build_Z, named_subcomplex
from .obstruction import det3, det4
from .words import Word

Point = tuple  # of ints / Fractions


def _sub(p, q):
    return tuple(a - b for a, b in zip(p, q))


def _add(p, q):
    return tuple(a + b for a, b in zip(p, q))


def _scale(c, p):
    return tuple(c * a for a in p)


# ---- exact linear algebra -------------------------------------------------------------


def rank(vectors: Sequence[Sequence]) -> int:
    rows = [[Fraction(x) for x in v] for v in vectors]
    r = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        for i in range(r + 1, len(rows)):
            if rows[i][c]:
                f = rows[i][c] / rows[r][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        r += 1
    return r


def _rref(M: list[list[Fraction]]) -> list[list[Fraction]]:
    """Row-reduced echelon form with zero rows removed (last column = rhs)."""
    rows = [list(r) for r in M]
    r = 0
    ncols = len(rows[0]) - 1
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [a * inv for a in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        r += 1
    return [row for row in rows if any(row)]


def _solve_square(M: list[list[Fraction]], b: list[Fraction]) -> list[Fraction] | None:
    n = len(M)
    A = [list(M[i]) + [b[i]] for i in range(n)]
    for c in range(n):
        piv = next((i for i in range(c, n) if A[i][c]), None)
        if piv is None:
            return None
        A[c], A[piv] = A[piv], A[c]
        for i in range(c + 1, n):
            if A[i][c]:
                f = A[i][c] / A[c][c]
                A[i] = [a - f * x for a, x in zip(A[i], A[c])]
    x = [Fraction(0)] * n
    for i in reversed(range(n)):
        x[i] = (A[i][n] - sum(A[i][k] * x[k] for k in range(i + 1, n))) / A[i][i]
    return x


def _boxes_disjoint(P: Sequence[Point], Q: Sequence[Point]) -> bool:
    for k in range(len(P[0])):
        if max(p[k] for p in P) < min(q[k] for q in Q) or max(q[k] for q in Q) < min(p[k] for p in P):
            return True
    return False


def _common_points(P: Sequence[Point], Q: Sequence[Point]) -> list[tuple[tuple, tuple]]:
    """Vertices of the polytope of barycentric pairs (lam, mu) with
    ``sum lam_i P_i = sum mu_j Q_j``, enumerated as basic feasible solutions."""
    if _boxes_disjoint(P, Q):
        return []
    d = len(P[0])
    k, l = len(P), len(Q)
    rows = []
    for c in range(d):
        rows.append([Fraction(p[c]) for p in P] + [Fraction(-q[c]) for q in Q] + [Fraction(0)])
    rows.append([Fraction(1)] * k + [Fraction(0)] * l + [Fraction(1)])
    rows.append([Fraction(0)] * k + [Fraction(1)] * l + [Fraction(1)])
    R = _rref(rows)
    n = k + l
    if any(not any(row[:n]) for row in R):
        return []  # inconsistent
    r = len(R)
    found = []
    for basis in combinations(range(n), r):
        M = [[row[j] for j in basis] for row in R]
        z = _solve_square(M, [row[n] for row in R])
        if z is None or any(v < 0 for v in z):
            continue
        full = [Fraction(0)] * n
        for j, v in zip(basis, z):
            full[j] = v
        sol = (tuple(full[:k]), tuple(full[k:]))
        if sol not in found:
            found.append(sol)
    return found


def _combine(P: Sequence[Point], lam: Sequence) -> Point:
    return tuple(sum(l * p[c] for l, p in zip(lam, P)) for c in range(len(P[0])))


# ---- simplex intersection ---------------------------------------------------------


@dataclass(frozen=True)
class Intersection:
    kind: str  # "empty" | "point" | "degenerate"
    point: Point | None = None
    bary_first: tuple | None = None
    bary_second: tuple | None = None
    sign: int | None = None


def simplex_intersect(s: Sequence[Point], t: Sequence[Point]) -> Intersection:
    """Classify the intersection of two nondegenerate simplices given by their
    vertex coordinates.  ``sign`` is set only for a transversal hit of
    complementary dimensions in both relative interiors."""
    sols = _common_points(s, t)
    if not sols:
        return Intersection("empty")
    if len(sols) > 1:
        return Intersection("degenerate")
    lam, mu = sols[0]
    point = _combine(s, lam)
    sign = None
    d = len(s[0])
    if len(s) + len(t) - 2 == d and all(lam) and all(mu):
        vecs = [_sub(p, s[0]) for p in s[1:]] + [_sub(q, t[0]) for q in t[1:]]
        D = det4(*vecs) if d == 4 else det3(*vecs)
        if D:
            sign = 1 if D > 0 else -1
    return Intersection("point", point, lam, mu, sign)


# ---- geometric complexes and verification ------------------------------------------


@dataclass
class GeometricComplex:
    names: tuple[str, ...]
    simplices: list[tuple[int, ...]]  # maximal simplices, sorted vertex tuples
    placement: dict[int, Point]
    complex: Complex2 | None = None

    @classmethod
    def from_complex(cls, K: Complex2, placement: Mapping[str, Point]) -> "GeometricComplex":
        names, edges, tris = K.flatten()
        simplices = list(sorted(tris))
        covered = {v for t in tris for v in t}
        covered_edges = {e for t in tris for e in combinations(t, 2)}
        simplices += sorted(e for e in edges if e not in covered_edges)
        covered |= {v for e in edges for v in e}
        simplices += [(v,) for v in range(len(names)) if v not in covered]
        return cls(names, simplices, {i: tuple(placement[n]) for i, n in enumerate(names)}, K)

    def points(self, simplex: Iterable[int]) -> list[Point]:
        return [self.placement[v] for v in simplex]

    def faces(self) -> list[tuple[int, ...]]:
        out = set()
        for s in self.simplices:
            for k in range(1, len(s) + 1):
                out.update(combinations(s, k))
        return sorted(out, key=lambda s: (len(s), s))

    @property
    def dimension(self) -> int:
        return len(next(iter(self.placement.values())))


@dataclass
class Violation:
    first: tuple[int, ...]
    second: tuple[int, ...] | None
    kind: str
    witness: Point | None = None

    def describe(self, names: Sequence[str]) -> str:
        a = "".join(names[v] for v in self.first)
        b = "" if self.second is None else " / " + "".join(names[v] for v in self.second)
        w = "" if self.witness is None else " at (" + ", ".join(str(x) for x in self.witness) + ")"
        return f"{self.kind}: {a}{b}{w}"


@dataclass
class VerificationReport:
    mode: str
    ok: bool
    pairs_checked: int
    violations: list[Violation] = field(default_factory=list)

    def to_dict(self, names: Sequence[str]) -> dict:
        return {
            "mode": self.mode,
            "ok": self.ok,
            "pairs_checked": self.pairs_checked,
            "violations": [v.describe(names) for v in self.violations],
        }


def _nondegenerate(G: GeometricComplex, simplex) -> bool:
    pts = G.points(simplex)
    return rank([_sub(p, pts[0]) for p in pts[1:]]) == len(simplex) - 1 if len(simplex) > 1 else True


def verify_embedding(G: GeometricComplex, mode: str = "embedding") -> VerificationReport:
    """Exact check that ``G`` is an embedding (every pair of simplices meets in
    exactly the image of their common face) or an almost-embedding
    (vertex-disjoint simplices have disjoint images)."""
    if mode not in ("embedding", "almost_embedding"):
        raise ValueError(f"unknown mode {mode!r}")
    violations = []
    for s in G.faces():
        if len(s) > 1 and not _nondegenerate(G, s):
            violations.append(Violation(s, None, "degenerate simplex"))
    checked = 0
    if mode == "embedding":
        # pairs of maximal simplices suffice: faces of a simplex meet in faces
        for s, t in combinations(G.simplices, 2):
            checked += 1
            shared = set(s) & set(t)
            for lam, mu in _common_points(G.points(s), G.points(t)):
                if any(l for v, l in zip(s, lam) if v not in shared):
                    violations.append(Violation(s, t, "improper intersection", _combine(G.points(s), lam)))
                    break
    else:
        faces = G.faces()
        for s, t in combinations(faces, 2):
            if set(s) & set(t):
                continue
            checked += 1
            sols = _common_points(G.points(s), G.points(t))
            if sols:
                violations.append(Violation(s, t, "separated simplices meet", _combine(G.points(s), sols[0][0])))
    return VerificationReport(mode, not violations, checked, violations)


# ---- the join of two triangles ---------------------------------------------------------

TRIANGLE_A = ((2, 0), (-1, 1), (-1, -1))  # contains the origin in its interior


@dataclass
class JoinSphere:
    """Join of two triangle boundaries, placed as the boundary of the convex
    hull of two triangles in complementary coordinate planes of Q^4."""

    names: tuple[str, ...]
    edges: list[tuple[int, int]]
    triangles: list[tuple[int, int, int]]
    tetrahedra: list[tuple[int, int, int, int]]
    placement: dict[int, Point]

    def face_vector(self) -> tuple[int, int, int, int]:
        return len(self.names), len(self.edges), len(self.triangles), len(self.tetrahedra)

    def euler_characteristic(self) -> int:
        v, e, t, k = self.face_vector()
        return v - e + t - k

    def geometric(self) -> GeometricComplex:
        return GeometricComplex(self.names, list(self.tetrahedra), dict(self.placement))


def join_sphere(names: Sequence[str] = ("1", "2", "3", "4", "5", "6")) -> JoinSphere:
    """Vertices 0..2 span the first circle (in the e1e2-plane), 3..5 the second
    (in the e3e4-plane)."""
    first, second = (0, 1, 2), (3, 4, 5)
    c1 = list(combinations(first, 2))
    c2 = list(combinations(second, 2))
    edges = c1 + c2 + [(i, j) for i in first for j in second]
    triangles = sorted([e + (j,) for e in c1 for j in second] + [(i,) + e for i in first for e in c2])
    tetrahedra = sorted(a + b for a in c1 for b in c2)
    placement = {}
    for i, (u, v) in zip(first, TRIANGLE_A):
        placement[i] = (u, v, 0, 0)
    # rotated so the last vertex (x6 in the H realization) is (0, 0, 2, 0)
    for i, (u, v) in zip(second, TRIANGLE_A[1:] + TRIANGLE_A[:1]):
        placement[i] = (0, 0, u, v)
    return JoinSphere(tuple(names), sorted(edges), triangles, tetrahedra, placement)


# ---- realization of H ---------------------------------------------------------------

REALIZE_ROUNDS = 16


class RealizationError(RuntimeError):
    pass


def _h_placement(scale: Fraction) -> dict[str, Point]:
    J = join_sphere()
    o = J.placement[5]
    xs = {}
    for i in range(6):
        # shrink towards the shared vertex o = x6
        xs[f"x{i + 1}"] = _add(o, _scale(scale, _sub(J.placement[i], o)))
    xs["x0"] = _add(o, _scale(scale, _sub((0, 0, 0, 0), o)))
    out = {}
    for name, p in xs.items():
        out[name] = p
        # the second copy is the point reflection through o
        out["y" + name[1:]] = _sub(_scale(2, o), p)
    return out


def realize_H(phi: Word) -> GeometricComplex:
    """Embed H in Q^4: a cone on the join-sphere skeleton for each block, the
    second copy reflected through the common vertex x6 = y6.

    The first copy lies in the half-space ``x3 <= 2`` touching it only at
    x6; the reflected copy lies in ``x3 >= 2``.  Cone apexes x0 and y0 sit on
    either side.  The result is verified exactly; a failed check shrinks the
    copies towards the common vertex and retries.
    """
    # H does not depend on phi: the attached cell is removed
    H = named_subcomplex(build_Z(), "H")
    scale = Fraction(1)
    for _ in range(REALIZE_ROUNDS):
        pos = _h_placement(scale)
        placement = {}
        for name in H.vertices:
            key = "x6" if name == H.basepoint else name
            placement[name] = pos[key]
        G = GeometricComplex.from_complex(H, placement)
        if verify_embedding(G, "embedding").ok:
            return G
        scale /= 2
    raise RealizationError("realization failed after retry budget")


# ---- PL curves and linking numbers --------------------------------------------------


@dataclass(frozen=True)
class PLCurve:
    points: tuple[Point, ...]
    embedded: bool = False

    def __post_init__(self):
        pts = self.points
        if len(pts) < 3:
            raise ValueError("a closed polygon needs at least three points")
        for i in range(len(pts)):
            if pts[i] == pts[(i + 1) % len(pts)]:
                raise ValueError(f"consecutive points {i} coincide")

    def segments(self) -> list[tuple[Point, Point]]:
        pts = self.points
        return [(pts[i], pts[(i + 1) % len(pts)]) for i in range(len(pts))]

    def reversed(self) -> "PLCurve":
        return PLCurve(tuple(reversed(self.points)), self.embedded)

    def to_json(self) -> str:
        return json.dumps([[str(Fraction(x)) for x in p] for p in self.points])


class LinkingError(RuntimeError):
    pass


def curves_disjoint(c1: PLCurve, c2: PLCurve) -> bool:
    for s in c1.segments():
        for t in c2.segments():
            if _common_points(s, t):
                return False
    return True


def _cone_crossing(apex, a, b, q0, q1):
    """Sign of segment q0q1 crossing triangle (apex, a, b); 0 for a miss and
    ``None`` when the configuration is not transversal."""
    e1, e2, d = _sub(a, apex), _sub(b, apex), _sub(q1, q0)
    D = det3(e1, e2, d)
    if D == 0:
        if rank([e1, e2]) < 2:
            return None
        # parallel: only a problem if the segment lies in the triangle's plane
        if det3(e1, e2, _sub(q0, apex)) == 0:
            return None
        return 0
    # apex + s e1 + t e2 = q0 + u d, Cramer on columns [e1, e2, -d]
    rhs = _sub(q0, apex)
    nd = _scale(-1, d)
    M = det3(e1, e2, nd)
    s = det3(rhs, e2, nd)
    t = det3(e1, rhs, nd)
    u = det3(e1, e2, rhs)
    if M < 0:
        s, t, u, M = -s, -t, -u, -M
    coords = (s, t, M - s - t, u, M - u)
    if any(v < 0 for v in coords):
        return 0
    if any(v == 0 for v in coords):
        return None
    return 1 if D > 0 else -1


def _apex_candidates(budget: int):
    rng = random.Random(20240917)
    for _ in range(budget):
        yield tuple(Fraction(rng.randint(-10**6, 10**6), rng.randint(1, 97)) for _ in range(3))


def pl_linking_number(c1: PLCurve, c2: PLCurve, budget: int = 200) -> int:
    """Signed count of crossings of ``c2`` through the cone over ``c1`` from a
    generic apex (found by a deterministic search and checked exactly)."""
    if not curves_disjoint(c1, c2):
        raise LinkingError("curves intersect")
    segs1, segs2 = c1.segments(), c2.segments()
    for apex in _apex_candidates(budget):
        total = 0
        for a, b in segs1:
            for q0, q1 in segs2:
                x = _cone_crossing(apex, a, b, q0, q1)
                if x is None:
                    break
                total += x
            else:
                continue
            break
        else:
            return total
    raise LinkingError("no generic apex found")


GAMMA_1_CENTER = (0, 0, 0)
GAMMA_2_CENTER = (10, 0, 0)
_TRIANGLE_3D = ((2, 0, 0), (-1, 2, 0), (-1, -2, 0))


def _triangle_at(center) -> PLCurve:
    return PLCurve(tuple(_add(center, v) for v in _TRIANGLE_3D), embedded=True)


def build_link_curves(phi: Word) -> tuple[PLCurve, PLCurve, PLCurve]:
    """The boundary triangles g1, g2 (in disjoint balls around x = 0 and x = 10
    in the plane z = 0) and a curve g3 reading ``phi``.

    For the k-th letter g3 leaves the basepoint line {x = 5, z = 5}, dives
    through the disk of g1 (for a) or g2 (for b) and comes back at a new
    height y_k, so consecutive loops never overlap.
    """
    g1, g2 = _triangle_at(GAMMA_1_CENTER), _triangle_at(GAMMA_2_CENTER)
    L = len(phi)
    ys = [Fraction(k, L + 1) - Fraction(1, 2) for k in range(L + 1)]
    pts = []
    for k, (gen, sign) in enumerate(phi.letters):
        cx = GAMMA_1_CENTER[0] if gen == "a" else GAMMA_2_CENTER[0]
        away = -5 if gen == "a" else 5
        y = ys[k]
        under = ((cx, y, -1), (cx, y, 1))  # pass upward through the disk
        back = ((cx + away, y, -1),)
        loop = back + under if sign > 0 else tuple(reversed(under)) + back
        pts.append((5, y, 5))
        pts.extend(loop)
    pts.append((5, ys[L], 5))
    pts.append((6, ys[L], 6))
    pts.append((7, ys[0], 6))
    return g1, g2, PLCurve(tuple(pts))


# ---- export ------------------------------------------------------------------------


def to_off(G: GeometricComplex) -> str:
    """OFF text (``4OFF`` for Q^4).  Exact coordinates go in a comment block,
    float approximations in the body; faces are the triangles."""
    names = G.names
    tris = [s for s in G.faces() if len(s) == 3]
    dim = G.dimension
    lines = ["4OFF" if dim == 4 else "OFF", "# exact vertex coordinates"]
    for i, n in enumerate(names):
        lines.append(f"# {n} " + " ".join(str(Fraction(x)) for x in G.placement[i]))
    lines.append(f"{len(names)} {len(tris)} 0")
    for i in range(len(names)):
        lines.append(" ".join(repr(float(x)) for x in G.placement[i]))
    for t in tris:
        lines.append("3 " + " ".join(str(v) for v in t))
    return "\n".join(lines) + "\n"
