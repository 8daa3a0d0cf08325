"""Equilibrium points of a convex polygon with respect to an interior reference point.

A stable point is the perpendicular foot of the reference on an edge when the
foot lies in the edge's relative interior; an unstable point is a vertex whose
two incident edge directions both make a strictly acute angle with the
direction back to the reference.  Feet or angles within tolerance of the
transition are reported with ``degenerate=True``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import DegenerateConfiguration, ReferenceOutside
from .geom2d import ConvexPolygon2, Point2
from .util import fmt_g17


@dataclass(frozen=True)
class EquilibriumPoint2:
    kind: str  # "stable" | "unstable"
    location: Point2
    carrier: int  # edge index for stable, vertex index for unstable
    degenerate: bool
    param: float  # position along the boundary: carrier + edge fraction


@dataclass(frozen=True)
class EquilibriumSet2:
    reference: Point2
    points: tuple[EquilibriumPoint2, ...]

    @property
    def S(self) -> int:
        return sum(1 for p in self.points if p.kind == "stable")

    @property
    def U(self) -> int:
        return sum(1 for p in self.points if p.kind == "unstable")

    @property
    def any_degenerate(self) -> bool:
        return any(p.degenerate for p in self.points)

    def as_dict(self) -> dict:
        return {
            "S": self.S,
            "U": self.U,
            "points": [
                {
                    "kind": p.kind,
                    "x": p.location[0],
                    "y": p.location[1],
                    "carrier": p.carrier,
                    "degenerate": p.degenerate,
                }
                for p in self.points
            ],
        }

    def to_json(self) -> str:
        rows = ", ".join(
            '{"kind": "%s", "x": %s, "y": %s, "carrier": %d, "degenerate": %s}'
            % (p.kind, fmt_g17(p.location[0]), fmt_g17(p.location[1]), p.carrier, "true" if p.degenerate else "false")
            for p in self.points
        )
        return '{"S": %d, "U": %d, "points": [%s]}' % (self.S, self.U, rows)


def require_interior(P: ConvexPolygon2, p: Sequence[float]) -> None:
    """Raise ``ReferenceOutside`` unless ``p`` is strictly inside beyond tolerance."""
    if P.interior_margin(p) <= P.eps:
        raise ReferenceOutside("reference point must be strictly interior to the polygon")


def stable_points(P: ConvexPolygon2, p: Sequence[float]) -> list[EquilibriumPoint2]:
    """Perpendicular feet of ``p`` on edges, in boundary order."""
    require_interior(P, p)
    px, py = float(p[0]), float(p[1])
    eps = P.eps
    out: list[EquilibriumPoint2] = []
    pts = P.vertices
    n = len(pts)
    for i in range(n):
        ax, ay = pts[i]
        bx, by = pts[(i + 1) % n]
        ex, ey = bx - ax, by - ay
        length = math.hypot(ex, ey)
        s = ((px - ax) * ex + (py - ay) * ey) / length  # arc position of the foot
        if s < -eps or s > length + eps:
            continue
        degenerate = s <= eps or s >= length - eps
        t = min(max(s / length, 0.0), 1.0)
        foot = (ax + t * ex, ay + t * ey)
        out.append(EquilibriumPoint2("stable", foot, i, degenerate, i + t))
    return out


def unstable_points(P: ConvexPolygon2, p: Sequence[float]) -> list[EquilibriumPoint2]:
    """Vertices that are local maxima of the boundary distance to ``p``."""
    require_interior(P, p)
    px, py = float(p[0]), float(p[1])
    eps = P.eps
    out: list[EquilibriumPoint2] = []
    pts = P.vertices
    n = len(pts)
    for i in range(n):
        vx, vy = pts[i]
        ux, uy = pts[(i - 1) % n]
        wx, wy = pts[(i + 1) % n]
        # Projections of p - v on the unit edge directions away from v.
        d1 = ((px - vx) * (ux - vx) + (py - vy) * (uy - vy)) / math.hypot(ux - vx, uy - vy)
        d2 = ((px - vx) * (wx - vx) + (py - vy) * (wy - vy)) / math.hypot(wx - vx, wy - vy)
        if d1 > eps and d2 > eps:
            out.append(EquilibriumPoint2("unstable", (vx, vy), i, False, float(i)))
        elif d1 >= -eps and d2 >= -eps and (abs(d1) <= eps or abs(d2) <= eps):
            out.append(EquilibriumPoint2("unstable", (vx, vy), i, True, float(i)))
    return out


def equilibria(P: ConvexPolygon2, p: Sequence[float]) -> EquilibriumSet2:
    """All equilibrium points in boundary order, with the alternation check."""
    merged = sorted(stable_points(P, p) + unstable_points(P, p), key=lambda e: e.param)
    eq = EquilibriumSet2((float(p[0]), float(p[1])), tuple(merged))
    if not eq.any_degenerate:
        if eq.S != eq.U:
            raise DegenerateConfiguration(f"stable/unstable counts differ: S={eq.S} U={eq.U}")
        n = len(merged)
        for i in range(n):
            if merged[i].kind == merged[(i + 1) % n].kind:
                raise DegenerateConfiguration("stable and unstable points do not alternate")
    return eq


def stable_count(P: ConvexPolygon2, q: Sequence[float]) -> int:
    """Number of local minima of the boundary distance to an arbitrary point ``q``.

    Relaxed variant used by sampling oracles: ``q`` may be anywhere in the
    plane.  Every edge whose perpendicular foot falls strictly inside the edge
    carries one minimum; for exterior ``q`` a vertex is a minimum when the
    distance increases along both incident edges.
    """
    qx, qy = float(q[0]), float(q[1])
    pts = P.vertices
    n = len(pts)
    count = 0
    for i in range(n):
        ax, ay = pts[i]
        bx, by = pts[(i + 1) % n]
        ex, ey = bx - ax, by - ay
        t = ((qx - ax) * ex + (qy - ay) * ey) / (ex * ex + ey * ey)
        if 0.0 < t < 1.0:
            count += 1
        # Vertex minimum at a: distance grows toward b and toward the previous vertex.
        ux, uy = pts[(i - 1) % n]
        d_next = (qx - ax) * ex + (qy - ay) * ey
        d_prev = (qx - ax) * (ux - ax) + (qy - ay) * (uy - ay)
        if d_next < 0.0 and d_prev < 0.0:
            count += 1
    return count


def stable_count_batch(P: ConvexPolygon2, qs: np.ndarray) -> np.ndarray:
    """Vectorized ``stable_count`` over an (m, 2) array of query points."""
    qs = np.asarray(qs, dtype=float)
    pts = np.asarray(P.vertices)
    n = len(pts)
    counts = np.zeros(len(qs), dtype=int)
    for i in range(n):
        a = pts[i]
        b = pts[(i + 1) % n]
        u = pts[(i - 1) % n]
        e = b - a
        rel = qs - a
        t = (rel @ e) / float(e @ e)
        counts += (t > 0.0) & (t < 1.0)
        d_next = rel @ e
        d_prev = rel @ (u - a)
        counts += (d_next < 0.0) & (d_prev < 0.0)
    return counts
