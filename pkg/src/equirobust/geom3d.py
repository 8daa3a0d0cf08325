"""3D convex polyhedron kernel.

Polyhedra are stored as a vertex array plus face cycles (counterclockwise
viewed from outside).  Construction validates planarity, convexity, manifold
edge structure and the Euler relation; ``hull3`` builds polyhedra from point
clouds and merges coplanar triangulation facets so face/edge/vertex counts
are combinatorial rather than artifacts of the triangulation.

Mass properties use the divergence theorem over face fans.  ``clip_halfspace3``
intersects with a closed half space, inserting the planar cut face in one
piece.  Generators produce the shapes used elsewhere: regular (platonic)
solids, prisms, capped cylinders and ellipsoid meshes.

Internally each polyhedron caches "slot" arrays — one slot per (face, edge)
incidence, faces concatenated in order — so clipping and equilibrium probes
run as flat numpy passes instead of per-face Python loops.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Optional, Sequence

import numpy as np

from . import tol
from .errors import DegenerateInput, NonConvexInput
from .util import fibonacci_sphere, fmt_g17

Point3 = tuple[float, float, float]

_VOL_REL_FLOOR = 1e-12


class ConvexPolyhedron3:
    """Immutable convex polyhedron (vertex coordinates + oriented face cycles).

    Use :func:`polyhedron_new` or :func:`hull3` to construct one; the class
    itself only performs cheap structural bookkeeping so that clip results can
    be assembled without re-running the full validation.
    """

    __slots__ = ("vertices", "faces", "__dict__")

    def __init__(self, vertices: Sequence[Point3], faces: Sequence[Sequence[int]]):
        self.vertices: tuple[Point3, ...] = tuple((float(x), float(y), float(z)) for x, y, z in vertices)
        self.faces: tuple[tuple[int, ...], ...] = tuple(tuple(int(i) for i in f) for f in faces)

    # -- bookkeeping -------------------------------------------------------

    @cached_property
    def coords(self) -> np.ndarray:
        return np.asarray(self.vertices, dtype=float)

    @cached_property
    def scale(self) -> float:
        """Diagonal of the axis-aligned bounding box; the length scale for tolerances."""
        v = self.coords
        return float(np.linalg.norm(v.max(axis=0) - v.min(axis=0)))

    @property
    def eps(self) -> float:
        return tol.EPS_GEOM * self.scale

    @cached_property
    def slot_arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """(tails, heads, slot_face, face_starts) with one slot per face edge."""
        tails: list[int] = []
        heads: list[int] = []
        slot_face: list[int] = []
        starts = [0]
        for k, face in enumerate(self.faces):
            m = len(face)
            tails.extend(face)
            heads.extend(face[(i + 1) % m] for i in range(m))
            slot_face.extend([k] * m)
            starts.append(starts[-1] + m)
        return (
            np.asarray(tails, dtype=np.intp),
            np.asarray(heads, dtype=np.intp),
            np.asarray(slot_face, dtype=np.intp),
            np.asarray(starts, dtype=np.intp),
        )

    @cached_property
    def plane_normals(self) -> np.ndarray:
        """(F, 3) outward unit normals (Newell's method per face)."""
        tails, heads, _, starts = self.slot_arrays
        v = self.coords
        contrib = np.cross(v[tails], v[heads])
        sums = np.add.reduceat(contrib, starts[:-1], axis=0)
        norms = np.linalg.norm(sums, axis=1)
        if np.any(norms <= 0.0):
            raise DegenerateInput(f"face {int(np.argmin(norms))} has zero area")
        return sums / norms[:, None]

    @cached_property
    def plane_offsets(self) -> np.ndarray:
        """(F,) plane offsets d with n·x = d on face planes."""
        firsts = np.asarray([f[0] for f in self.faces], dtype=np.intp)
        return np.einsum("ij,ij->i", self.plane_normals, self.coords[firsts])

    @cached_property
    def edge_frames(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """Per slot: (anchor point, in-face outward edge normal, edge direction, length)."""
        tails, heads, slot_face, _ = self.slot_arrays
        v = self.coords
        a = v[tails]
        e = v[heads] - a
        lengths = np.linalg.norm(e, axis=1)
        u = e / lengths[:, None]
        nu = np.cross(u, self.plane_normals[slot_face])
        return a, nu, u, lengths

    @cached_property
    def edge_faces(self) -> dict:
        """Map sorted vertex pair -> (face index, face index)."""
        seen: dict = {}
        tails, heads, slot_face, _ = self.slot_arrays
        for t, h, k in zip(tails.tolist(), heads.tolist(), slot_face.tolist()):
            key = (t, h) if t < h else (h, t)
            seen.setdefault(key, []).append(k)
        return {k: tuple(v) for k, v in seen.items()}

    @cached_property
    def edges(self) -> tuple[tuple[int, int], ...]:
        """Undirected edges as sorted index pairs, each shared by two faces."""
        return tuple(sorted(self.edge_faces))

    @cached_property
    def vertex_neighbors(self) -> tuple[tuple[int, ...], ...]:
        nbrs: list[set] = [set() for _ in self.vertices]
        for a, b in self.edges:
            nbrs[a].add(b)
            nbrs[b].add(a)
        return tuple(tuple(sorted(s)) for s in nbrs)

    @cached_property
    def vertex_fan(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Flat neighbor structure: (unit edge dirs, base dots, per-vertex starts)."""
        counts = [len(s) for s in self.vertex_neighbors]
        owner = np.repeat(np.arange(len(self.vertices)), counts)
        flat = np.asarray([j for s in self.vertex_neighbors for j in s], dtype=np.intp)
        v = self.coords
        rel = v[flat] - v[owner]
        rel /= np.linalg.norm(rel, axis=1)[:, None]
        base = np.einsum("ij,ij->i", rel, v[owner])
        starts = np.concatenate([[0], np.cumsum(counts)]).astype(np.intp)
        return rel, base, starts

    @cached_property
    def fan_triangles(self) -> np.ndarray:
        tris = []
        for face in self.faces:
            for i in range(1, len(face) - 1):
                tris.append((face[0], face[i], face[i + 1]))
        return np.asarray(tris, dtype=np.intp)

    @cached_property
    def mass_properties(self) -> tuple[float, Point3, float]:
        """(volume, solid centroid, surface area) via an origin tetrahedron fan."""
        v = self.coords
        t = self.fan_triangles
        a, b, c = v[t[:, 0]], v[t[:, 1]], v[t[:, 2]]
        cr = np.cross(b - a, c - a)
        w = np.einsum("ij,ij->i", cr, a) / 6.0
        vol = float(w.sum())
        surf = float(np.linalg.norm(cr, axis=1).sum() / 2.0)
        if vol <= 0.0:
            return vol, (math.nan, math.nan, math.nan), surf
        cen = (w[:, None] * (a + b + c) / 4.0).sum(axis=0) / vol
        return vol, (float(cen[0]), float(cen[1]), float(cen[2])), surf

    def structural_ok(self) -> bool:
        """Cheap manifold check: directed edges pair up and Euler holds."""
        for face in self.faces:
            if len(face) < 3 or len(set(face)) != len(face):
                return False
        tails, heads, _, _ = self.slot_arrays
        n = len(self.vertices)
        code = tails * n + heads
        if len(np.unique(code)) != len(code):
            return False
        if not np.array_equal(np.sort(code), np.sort(heads * n + tails)):
            return False
        return n - len(code) // 2 + len(self.faces) == 2

    def interior_margin(self, p: Sequence[float]) -> float:
        """Smallest signed distance from ``p`` to the face planes (positive inside)."""
        q = np.asarray(p, dtype=float)
        return float(np.min(self.plane_offsets - self.plane_normals @ q))

    def contains(self, p: Sequence[float]) -> bool:
        return self.interior_margin(p) >= -self.eps

    def support_interval(self, n: Sequence[float]) -> tuple[float, float]:
        proj = self.coords @ np.asarray(n, dtype=float)
        return float(proj.min()), float(proj.max())

    def __repr__(self) -> str:  # pragma: no cover
        return (
            f"ConvexPolyhedron3({len(self.vertices)} vertices, "
            f"{len(self.edges)} edges, {len(self.faces)} faces)"
        )


# -- construction ----------------------------------------------------------


def polyhedron_new(vertices: Iterable[Sequence[float]], faces: Iterable[Sequence[int]]) -> ConvexPolyhedron3:
    """Validated convex polyhedron from vertex coordinates and face cycles.

    Faces whose normals point inward are reversed.  Raises ``DegenerateInput``
    for structural defects (non-planar or repeated faces, unused vertices,
    broken edge pairing, near-zero volume) and ``NonConvexInput`` when some
    vertex lies strictly outside a face plane.
    """
    verts = [(float(x), float(y), float(z)) for x, y, z in vertices]
    if len(verts) < 4:
        raise DegenerateInput("a polyhedron needs at least 4 vertices")
    if not all(math.isfinite(c) for v in verts for c in v):
        raise DegenerateInput("vertex coordinates must be finite")
    face_list = [tuple(int(i) for i in f) for f in faces]
    if len(face_list) < 4:
        raise DegenerateInput("a polyhedron needs at least 4 faces")
    used: set = set()
    for f in face_list:
        if len(f) < 3:
            raise DegenerateInput("every face needs at least 3 vertices")
        if len(set(f)) != len(f):
            raise DegenerateInput("face cycle repeats a vertex")
        for i in f:
            if not 0 <= i < len(verts):
                raise DegenerateInput(f"face index {i} out of range")
        used.update(f)
    if used != set(range(len(verts))):
        raise DegenerateInput("unused vertices in input")

    v = np.asarray(verts)
    scale = float(np.linalg.norm(v.max(axis=0) - v.min(axis=0)))
    if scale <= 0.0:
        raise DegenerateInput("polyhedron has zero extent")
    eps = tol.EPS_GEOM * scale
    inner = v.mean(axis=0)

    oriented: list[tuple[int, ...]] = []
    for k, face in enumerate(face_list):
        n = np.zeros(3)
        for i in range(len(face)):
            n += np.cross(v[face[i]], v[face[(i + 1) % len(face)]])
        norm = np.linalg.norm(n)
        if norm <= eps * scale:
            raise DegenerateInput(f"face {k} is degenerate (near-zero area)")
        n /= norm
        d = float(n @ v[face[0]])
        if np.max(np.abs(v[list(face)] @ n - d)) > eps:
            raise DegenerateInput(f"face {k} is not planar")
        side = float(n @ inner) - d
        if abs(side) <= eps:
            raise DegenerateInput(f"face {k} passes through the interior point")
        if side > 0.0:
            face = tuple(reversed(face))
            n = -n
            d = -d
        oriented.append(tuple(face))
        if np.max(v @ n - d) > eps:
            raise NonConvexInput(f"a vertex lies outside the plane of face {k}")

    P = ConvexPolyhedron3(verts, oriented)
    if not P.structural_ok():
        raise DegenerateInput("face cycles do not tile a closed surface (edge pairing or Euler failure)")
    if volume(P) <= _VOL_REL_FLOOR * scale**3:
        raise DegenerateInput("polyhedron volume is below tolerance")
    return P


def hull3(points: Iterable[Sequence[float]]) -> ConvexPolyhedron3:
    """Convex hull with coplanar triangle facets merged into single faces.

    Facets are merged when their normals agree within 1e-7 radians and their
    plane offsets within tolerance; merged boundaries are re-chained into one
    cycle per face.
    """
    from scipy.spatial import ConvexHull

    pts = np.asarray([[float(c) for c in p] for p in points], dtype=float)
    if len(pts) < 4:
        raise DegenerateInput("hull needs at least 4 points")
    try:
        hull = ConvexHull(pts)
    except Exception as exc:  # qhull reports degeneracy via generic errors
        raise DegenerateInput(f"hull construction failed: {exc}") from None

    scale = float(np.linalg.norm(pts.max(axis=0) - pts.min(axis=0)))
    eps = tol.EPS_GEOM * scale
    normals = hull.equations[:, :3]
    offsets = -hull.equations[:, 3]

    # Orient every simplex counterclockwise around its outward normal.
    simplices = []
    for k, tri in enumerate(hull.simplices):
        a, b, c = (pts[i] for i in tri)
        if np.cross(b - a, c - a) @ normals[k] < 0.0:
            tri = tri[[0, 2, 1]]
        simplices.append(tuple(int(i) for i in tri))

    # Union-find merge of near-parallel adjacent facets.
    parent = list(range(len(simplices)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for k, nbrs in enumerate(hull.neighbors):
        for j in nbrs:
            if j < 0 or j <= k:
                continue
            cosang = float(np.clip(normals[k] @ normals[j], -1.0, 1.0))
            if math.acos(cosang) < 1e-7 and abs(offsets[k] - offsets[j]) <= max(eps, 1e-12):
                a, b = find(k), find(int(j))
                if a != b:
                    parent[a] = b

    groups: dict = {}
    for k in range(len(simplices)):
        groups.setdefault(find(k), []).append(k)

    faces = []
    for members in groups.values():
        directed: set = set()
        for k in members:
            tri = simplices[k]
            for i in range(3):
                directed.add((tri[i], tri[(i + 1) % 3]))
        boundary = {a: b for a, b in directed if (b, a) not in directed}
        if not boundary:
            raise DegenerateInput("coplanar merge produced a face without a boundary")
        start = next(iter(boundary))
        cycle = [start]
        cur = boundary[start]
        while cur != start:
            cycle.append(cur)
            cur = boundary[cur]
            if len(cycle) > len(boundary):
                raise DegenerateInput("coplanar merge produced a non-simple face boundary")
        faces.append(cycle)

    used = sorted({i for f in faces for i in f})
    remap = {old: new for new, old in enumerate(used)}
    return polyhedron_new(pts[used], [[remap[i] for i in f] for f in faces])


# -- mass properties -------------------------------------------------------


def volume(P: ConvexPolyhedron3) -> float:
    """Enclosed volume via signed origin-fan tetrahedra."""
    return P.mass_properties[0]


def centroid3(P: ConvexPolyhedron3) -> Point3:
    """Uniform solid centroid via signed tetrahedron decomposition."""
    vol, cen, _ = P.mass_properties
    if vol <= 0.0:
        raise DegenerateInput("polyhedron volume is not positive")
    return cen


def surface_area(P: ConvexPolyhedron3) -> float:
    return P.mass_properties[2]


# -- bounding boxes --------------------------------------------------------


@dataclass(frozen=True)
class BoundingBox:
    """Circumscribed brick: orthonormal ``frame`` columns are the box axes.

    ``half_extents`` are sorted ascending and the frame columns are permuted
    to match, so ``half_extents[0]`` belongs to ``frame[:, 0]``.
    """

    frame: np.ndarray
    center: Point3
    half_extents: tuple[float, float, float]

    @property
    def extents(self) -> tuple[float, float, float]:
        a, b, c = self.half_extents
        return (2.0 * a, 2.0 * b, 2.0 * c)

    def contains(self, p: Sequence[float], slack: float = 0.0) -> bool:
        q = self.frame.T @ (np.asarray(p, dtype=float) - np.asarray(self.center))
        return bool(np.all(np.abs(q) <= np.asarray(self.half_extents) + slack))


def bounding_box(P: ConvexPolyhedron3, frame: np.ndarray) -> BoundingBox:
    """Tight bounding brick of ``P`` along the axes given by ``frame`` columns."""
    F = np.asarray(frame, dtype=float)
    if F.shape != (3, 3) or not np.allclose(F.T @ F, np.eye(3), atol=1e-9):
        raise ValueError("frame must be an orthonormal 3x3 matrix")
    proj = P.coords @ F
    lo = proj.min(axis=0)
    hi = proj.max(axis=0)
    half = (hi - lo) / 2.0
    center = F @ ((hi + lo) / 2.0)
    order = np.argsort(half, kind="stable")
    F = F[:, order]
    half = half[order]
    return BoundingBox(
        frame=F,
        center=(float(center[0]), float(center[1]), float(center[2])),
        half_extents=(float(half[0]), float(half[1]), float(half[2])),
    )


def aabb(P: ConvexPolyhedron3) -> BoundingBox:
    return bounding_box(P, np.eye(3))


# -- half-space clipping ---------------------------------------------------


def clip_halfspace3(
    P: ConvexPolyhedron3, normal: Sequence[float], offset: float
) -> Optional[ConvexPolyhedron3]:
    """Intersect ``P`` with the closed half space ``normal · x <= offset``.

    Returns ``P`` itself when the plane misses it, ``None`` when nothing (or
    only a sliver below tolerance) remains.  The cut cross-section is inserted
    as a single planar face.
    """
    n = np.asarray(normal, dtype=float)
    norm = float(np.linalg.norm(n))
    if norm <= 0.0:
        raise ValueError("plane normal must be nonzero")
    n = n / norm
    d = float(offset) / norm
    v = P.coords
    eps = P.eps
    s = v @ n - d
    if np.all(s <= eps):
        return P
    if np.all(s >= -eps):
        return None

    tails, heads, _, starts = P.slot_arrays
    nv = len(v)
    below = s <= eps  # kept, including on-plane vertices
    st, sh = s[tails], s[heads]
    crossing = ((st > eps) & (sh < -eps)) | ((st < -eps) & (sh > eps))

    # One crossing point per undirected edge, shared by both incident faces.
    edge_code = np.where(tails < heads, tails * nv + heads, heads * nv + tails)
    cross_codes = np.unique(edge_code[crossing])
    code_tail = cross_codes // nv
    code_head = cross_codes % nv
    t = s[code_tail] / (s[code_tail] - s[code_head])
    new_pts = v[code_tail] + t[:, None] * (v[code_head] - v[code_tail])
    cross_index = np.full(len(edge_code), -1, dtype=np.intp)
    rank = {int(c): i for i, c in enumerate(cross_codes)}
    cross_index[crossing] = [rank[int(c)] for c in edge_code[crossing]]

    # Emit, per slot and in cycle order: the tail vertex if kept, then the
    # crossing point if the edge is cut.
    emit_tail = below[tails]
    counts = emit_tail.astype(np.intp) + crossing.astype(np.intp)
    pos = np.cumsum(counts) - counts
    out = np.empty(int(counts.sum()), dtype=np.intp)
    out[pos[emit_tail]] = tails[emit_tail]
    out[(pos + emit_tail)[crossing]] = nv + cross_index[crossing]

    face_counts = np.add.reduceat(counts, starts[:-1]) if len(starts) > 1 else np.array([], dtype=np.intp)
    bounds = np.concatenate([[0], np.cumsum(face_counts)])
    new_faces = [
        out[bounds[k] : bounds[k + 1]].tolist()
        for k in range(len(P.faces))
        if face_counts[k] >= 3
    ]

    all_pts = np.vstack([v, new_pts]) if len(new_pts) else v

    # The cut cross-section ring: crossing points plus kept on-plane vertices.
    rim = set(range(nv, nv + len(new_pts)))
    rim.update(np.nonzero(below & (np.abs(s) <= eps))[0].tolist())
    rim_idx = sorted(rim)
    if len(rim_idx) >= 3:
        pts2 = all_pts[rim_idx]
        center = pts2.mean(axis=0)
        spread = pts2 - center
        ref = spread[int(np.argmax(np.linalg.norm(spread, axis=1)))]
        ref = ref - (ref @ n) * n
        rn = np.linalg.norm(ref)
        if rn > 0.0:
            ref /= rn
            other = np.cross(n, ref)
            ang = np.arctan2(spread @ other, spread @ ref)
            order = np.argsort(ang, kind="stable")
            # Counterclockwise around n makes n the outward normal of the cut
            # face, matching the kept side n·x <= d.
            new_faces.append([rim_idx[i] for i in order])

    if not new_faces:
        return None

    # Merge points that collapse together (cuts passing close to vertices).
    merge_tol = max(eps, 1e-13 * P.scale)
    used = sorted({i for f in new_faces for i in f})
    alias = {i: i for i in used}
    upts = all_pts[used]
    if len(used) > 1:
        diff = upts[:, None, :] - upts[None, :, :]
        d2 = np.einsum("ijk,ijk->ij", diff, diff)
        ii, jj = np.nonzero(d2 <= merge_tol * merge_tol)
        pairs = [(used[a], used[b]) for a, b in zip(ii.tolist(), jj.tolist()) if a < b]
        for a, b in pairs:
            ra, rb = alias[a], alias[b]
            while alias[ra] != ra:
                ra = alias[ra]
            while alias[rb] != rb:
                rb = alias[rb]
            if ra != rb:
                alias[max(ra, rb)] = min(ra, rb)

        def resolve(i: int) -> int:
            while alias[i] != i:
                i = alias[i]
            return i

    else:

        def resolve(i: int) -> int:
            return i

    cleaned: list[list[int]] = []
    for f in new_faces:
        cyc: list[int] = []
        for i in f:
            j = resolve(i)
            if not cyc or (cyc[-1] != j and cyc[0] != j):
                cyc.append(j)
        if len(cyc) >= 3:
            cleaned.append(cyc)
    if len(cleaned) < 4:
        return None

    final_used = sorted({i for f in cleaned for i in f})
    remap = {old: new for new, old in enumerate(final_used)}
    piece = ConvexPolyhedron3(
        [tuple(all_pts[i]) for i in final_used], [[remap[i] for i in f] for f in cleaned]
    )
    if not piece.structural_ok():
        return None
    if volume(piece) <= _VOL_REL_FLOOR * P.scale**3:
        return None
    return piece


# -- generators ------------------------------------------------------------

_PHI = (1.0 + math.sqrt(5.0)) / 2.0

_PLATONIC_POINTS = {
    "tetra": [(1, 1, 1), (1, -1, -1), (-1, 1, -1), (-1, -1, 1)],
    "cube": [(x, y, z) for x in (-1, 1) for y in (-1, 1) for z in (-1, 1)],
    "octa": [(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)],
    "dodeca": (
        [(x, y, z) for x in (-1, 1) for y in (-1, 1) for z in (-1, 1)]
        + [(0, y / _PHI, z * _PHI) for y in (-1, 1) for z in (-1, 1)]
        + [(x / _PHI, y * _PHI, 0) for x in (-1, 1) for y in (-1, 1)]
        + [(x * _PHI, 0, z / _PHI) for x in (-1, 1) for z in (-1, 1)]
    ),
    "icosa": (
        [(0, y, z * _PHI) for y in (-1, 1) for z in (-1, 1)]
        + [(x, y * _PHI, 0) for x in (-1, 1) for y in (-1, 1)]
        + [(x * _PHI, 0, z) for x in (-1, 1) for z in (-1, 1)]
    ),
}


def platonic(name: str, edge: Optional[float] = None) -> ConvexPolyhedron3:
    """Regular polyhedron centered at the origin.

    With ``edge=None`` the solid is scaled to unit surface area; otherwise to
    the requested edge length.
    """
    if name not in _PLATONIC_POINTS:
        raise ValueError(f"unknown solid {name!r}; choose from {sorted(_PLATONIC_POINTS)}")
    base = hull3(_PLATONIC_POINTS[name])
    if edge is None:
        factor = 1.0 / math.sqrt(surface_area(base))
    else:
        if not edge > 0.0:
            raise ValueError("edge length must be positive")
        a, b = base.edges[0]
        e0 = math.dist(base.vertices[a], base.vertices[b])
        factor = float(edge) / e0
    return ConvexPolyhedron3([(x * factor, y * factor, z * factor) for x, y, z in base.vertices], base.faces)


def generator_prism(ngon: int, height: float) -> ConvexPolyhedron3:
    """Right prism over a regular ``ngon`` (circumradius 1) along the z axis."""
    if ngon < 3:
        raise ValueError("prism base needs at least 3 vertices")
    if not height > 0.0:
        raise ValueError("height must be positive")
    h = height / 2.0
    bottom = [(math.cos(2 * math.pi * k / ngon), math.sin(2 * math.pi * k / ngon), -h) for k in range(ngon)]
    top = [(x, y, h) for x, y, _ in bottom]
    faces = [list(range(ngon - 1, -1, -1)), list(range(ngon, 2 * ngon))]
    for k in range(ngon):
        nk = (k + 1) % ngon
        faces.append([k, nk, ngon + nk, ngon + k])
    return polyhedron_new(bottom + top, faces)


def generator_truncated_cylinder(r: float, d: float, facets: int = 32) -> ConvexPolyhedron3:
    """Capped cylinder: radius ``r``, straight length ``d``, spheroidal end caps.

    Each cap is an inscribed half spheroid with semi-axes (r, r, 2r), so the
    axis-aligned bounding box is exactly 2r x 2r x (d + 4r) whenever the
    angular division count hits the four axis directions — hence ``facets``
    must be a multiple of 4 (and at least 32 for a rounded enough cap).
    """
    if not (r > 0.0 and d > 0.0):
        raise ValueError("radius and length must be positive")
    if facets < 32:
        raise ValueError("facets must be at least 32")
    if facets % 4 != 0:
        raise ValueError("facets must be a multiple of 4")
    m = facets
    angles = [2 * math.pi * k / m for k in range(m)]
    cos_a = [math.cos(a) for a in angles]
    sin_a = [math.sin(a) for a in angles]

    rings: list[tuple[float, float]] = []  # (radius, z) from bottom apex to top apex
    cap_profile = [(r * math.cos(phi), 2 * r * math.sin(phi)) for phi in (math.pi / 6, math.pi / 3)]
    z0 = d / 2.0
    rings.append((cap_profile[1][0], -(z0 + cap_profile[1][1])))
    rings.append((cap_profile[0][0], -(z0 + cap_profile[0][1])))
    rings.append((r, -z0))
    rings.append((r, z0))
    rings.append((cap_profile[0][0], z0 + cap_profile[0][1]))
    rings.append((cap_profile[1][0], z0 + cap_profile[1][1]))

    verts: list[Point3] = [(0.0, 0.0, -(z0 + 2 * r))]
    for rad, z in rings:
        verts.extend((rad * cos_a[k], rad * sin_a[k], z) for k in range(m))
    verts.append((0.0, 0.0, z0 + 2 * r))
    bottom_apex = 0
    top_apex = len(verts) - 1

    def ring(i: int, k: int) -> int:
        return 1 + i * m + (k % m)

    faces: list[list[int]] = []
    for k in range(m):
        faces.append([bottom_apex, ring(0, k + 1), ring(0, k)])
    for i in range(len(rings) - 1):
        for k in range(m):
            faces.append([ring(i, k), ring(i, k + 1), ring(i + 1, k + 1), ring(i + 1, k)])
    for k in range(m):
        faces.append([top_apex, ring(5, k), ring(5, k + 1)])
    return polyhedron_new(verts, faces)


def generator_ellipsoid_mesh(a: float, b: float, c: float, facets: int = 512) -> ConvexPolyhedron3:
    """Inscribed polyhedral approximation of the ellipsoid with semi-axes a, b, c.

    Built as the hull of a Fibonacci point set mapped onto the ellipsoid; for
    mass properties and bounding boxes only — the facet structure does not
    reflect the smooth body's equilibria.
    """
    if not (a > 0.0 and b > 0.0 and c > 0.0):
        raise ValueError("semi-axes must be positive")
    if facets < 32:
        raise ValueError("facets must be at least 32")
    pts = fibonacci_sphere(max(facets // 2 + 2, 8))
    pts = pts * np.array([a, b, c])
    return hull3(pts)


# -- OFF serialization -----------------------------------------------------


def off_dumps(P: ConvexPolyhedron3) -> str:
    """OFF text with 17-significant-digit decimal coordinates."""
    lines = ["OFF", f"{len(P.vertices)} {len(P.faces)} {len(P.edges)}"]
    for x, y, z in P.vertices:
        lines.append(f"{fmt_g17(x)} {fmt_g17(y)} {fmt_g17(z)}")
    for face in P.faces:
        lines.append(" ".join([str(len(face))] + [str(i) for i in face]))
    return "\n".join(lines) + "\n"


def off_loads(text: str) -> ConvexPolyhedron3:
    """Parse OFF text and re-validate the polyhedron."""
    tokens: list[str] = []
    for line in text.splitlines():
        body = line.split("#", 1)[0].strip()
        if body:
            tokens.extend(body.split())
    if not tokens or tokens[0] != "OFF":
        raise DegenerateInput("not an OFF file (missing header)")
    try:
        nv, nf = int(tokens[1]), int(tokens[2])
        pos = 4  # header + vertex/face/edge counts
        verts = []
        for _ in range(nv):
            verts.append((float(tokens[pos]), float(tokens[pos + 1]), float(tokens[pos + 2])))
            pos += 3
        faces = []
        for _ in range(nf):
            k = int(tokens[pos])
            faces.append([int(t) for t in tokens[pos + 1 : pos + 1 + k]])
            pos += 1 + k
    except (IndexError, ValueError) as exc:
        raise DegenerateInput(f"malformed OFF data: {exc}") from None
    return polyhedron_new(verts, faces)


def write_off(P: ConvexPolyhedron3, path: str) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(off_dumps(P))


def read_off(path: str) -> ConvexPolyhedron3:
    with open(path, "r", encoding="ascii") as fh:
        return off_loads(fh.read())
