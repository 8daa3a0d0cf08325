"""Robustness measures for convex polygons.

Internal robustness: normalized distance from the reference point to the
nearest caustic line (perpendicular to an edge through one of its endpoints),
i.e. how far the reference can move before the stable count changes.

External robustness: normalized area of the smallest truncation, keeping the
reference fixed, that removes a stable point: partition the polygon into
sectors between consecutive stable feet and measure the part of each sector
farther from the reference than both bounding feet.

Full robustness: smallest relative area a single straight cut must remove so
that the remainder, weighed at its own centroid, has fewer stable points.
Monte Carlo truncation sweeps and the n-cut average-robustness estimator use
the motion-invariant line measure (uniform angle, uniform offset across the
support interval).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import tol
from .equilib2d import equilibria, stable_count_batch
from .errors import DegenerateConfiguration, TooFewStable
from .geom2d import (
    ConvexPolygon2,
    Line2,
    Ray2,
    area_outside_disk,
    clip_halfplane_nd,
    dist_point_to_ray,
)
from .reports import RobustnessReport
from .util import fmt_g17

log = logging.getLogger(__name__)


# -- closed forms -----------------------------------------------------------


def rho_regular_closed(S: int, kind: str) -> float:
    """Closed-form robustness of the regular ``S``-gon about its center.

    ``internal``: 1/(2S) at unit perimeter.  ``external``:
    ``(tan(pi/S) - pi/S) / (S tan(pi/S))``.
    """
    if S < 3:
        raise ValueError("S must be at least 3")
    if kind == "internal":
        return 1.0 / (2.0 * S)
    if kind == "external":
        t = math.tan(math.pi / S)
        return (t - math.pi / S) / (S * t)
    raise ValueError(f"unknown kind {kind!r}")


def dowker_area(n: int) -> float:
    """Area of the regular ``n``-gon circumscribed about the unit circle."""
    if n < 3:
        raise ValueError("n must be at least 3")
    return n * math.tan(math.pi / n)


def dowker_convexity_check(n: int, k: int) -> bool:
    """Strict convexity of the circumscribed-area sequence: a(n-k)+a(n+k) > 2a(n)."""
    if n < 3:
        raise ValueError("n must be at least 3")
    if not (0 < k < n - 2):
        raise ValueError("k must satisfy 0 < k < n-2")
    return dowker_area(n - k) + dowker_area(n + k) > 2.0 * dowker_area(n)


# -- internal robustness ----------------------------------------------------


def rho_in_exact(P: ConvexPolygon2, p: Sequence[float], rays_only: bool = False) -> RobustnessReport:
    """Exact internal robustness: nearest caustic line over perimeter.

    Candidates are, for every vertex, the lines through it perpendicular to
    each incident edge.  With ``rays_only=True`` only the half lines pointing
    into the polygon (the inward edge normals) are considered.
    """
    eq = equilibria(P, p)
    if eq.any_degenerate:
        raise DegenerateConfiguration("reference point gives a degenerate configuration")
    px, py = float(p[0]), float(p[1])
    pts = P.vertices
    n = len(pts)
    best = math.inf
    best_witness: Optional[dict] = None
    for i in range(n):
        vx, vy = pts[i]
        # Incident edges: edge i starts at vertex i, edge i-1 ends at it.
        for j in (i, (i - 1) % n):
            ax, ay = pts[j]
            bx, by = pts[(j + 1) % n]
            ex, ey = bx - ax, by - ay
            length = math.hypot(ex, ey)
            dx, dy = ex / length, ey / length
            if rays_only:
                inward = (-dy, dx)  # left normal of a counterclockwise edge
                dist = dist_point_to_ray((px, py), Ray2((vx, vy), inward))
            else:
                # Distance to the line through v along the edge normal equals the
                # component of p - v along the edge direction.
                dist = abs((px - vx) * dx + (py - vy) * dy)
            if dist < best:
                best = dist
                best_witness = {
                    "type": "caustic_ray" if rays_only else "caustic_line",
                    "vertex": i,
                    "edge": j,
                    "distance": dist,
                }
    return RobustnessReport(
        kind="internal",
        value=best / P.perimeter,
        method="exact",
        witness=best_witness,
        details={"S": eq.S, "perimeter": P.perimeter, "rays_only": rays_only},
    )


def rho_in_sampled(P: ConvexPolygon2, p: Sequence[float], directions: int = 720, tol_step: float = 1e-6) -> RobustnessReport:
    """Sampled internal robustness, independent of the caustic construction.

    Walks evenly spaced directions from ``p`` and bisects the first step at
    which the stable count (relaxed variant, valid for exterior points)
    changes; the smallest such distance over all directions, normalized by the
    perimeter, estimates the internal robustness from above.
    """
    from .util import first_exit_distances

    eq = equilibria(P, p)
    if eq.any_degenerate:
        raise DegenerateConfiguration("reference point gives a degenerate configuration")
    origin = np.array([float(p[0]), float(p[1])])
    angles = np.arange(directions) * (2.0 * math.pi / directions)
    dirs = np.column_stack([np.cos(angles), np.sin(angles)])
    verts = np.asarray(P.vertices)
    far = float(np.hypot(verts[:, 0] - origin[0], verts[:, 1] - origin[1]).max())
    s_max = 2.0 * (far + P.diameter)

    def counts(qs: np.ndarray) -> np.ndarray:
        return stable_count_batch(P, qs)

    exits = first_exit_distances(counts, origin, dirs, eq.S, s_max, tol_step)
    k = int(np.argmin(exits))
    return RobustnessReport(
        kind="internal",
        value=float(exits[k]) / P.perimeter,
        method="sampled",
        witness={"type": "direction", "angle": float(angles[k]), "distance": float(exits[k])},
        details={"S": eq.S, "directions": directions, "tol": tol_step},
    )


# -- external robustness ----------------------------------------------------


def rho_ex_exact(P: ConvexPolygon2, p: Sequence[float]) -> RobustnessReport:
    """Exact external robustness about a fixed interior reference point.

    With stable feet ``s_1..s_S`` in boundary order, the plane is split at
    ``p`` into angular sectors between consecutive feet.  In each sector the
    area farther from ``p`` than both bounding feet is what a truncation must
    remove to kill the stable points there; the minimum over sectors, divided
    by the polygon area, is the result.
    """
    eq = equilibria(P, p)
    if eq.any_degenerate:
        raise DegenerateConfiguration("reference point gives a degenerate configuration")
    feet = [e for e in eq.points if e.kind == "stable"]
    S = len(feet)
    if S < 3:
        raise TooFewStable(f"external robustness needs S >= 3, got S={S}")
    px, py = float(p[0]), float(p[1])
    total = P.area
    cross_tol = tol.EPS_GEOM * P.diameter * P.diameter
    best = math.inf
    best_idx = -1
    sector_areas = []
    for i in range(S):
        ax, ay = feet[i].location
        bx, by = feet[(i + 1) % S].location
        u1 = (ax - px, ay - py)
        u2 = (bx - px, by - py)
        r = max(math.hypot(*u1), math.hypot(*u2))
        cr = u1[0] * u2[1] - u1[1] * u2[0]
        dot = u1[0] * u2[0] + u1[1] * u2[1]
        # Half planes through p: left of the ray toward foot i, right of the
        # ray toward foot i+1.
        def clip_left(Q, ux, uy):
            if Q is None:
                return None
            return clip_halfplane_nd(Q, uy, -ux, uy * px - ux * py)

        def clip_right(Q, ux, uy):
            if Q is None:
                return None
            return clip_halfplane_nd(Q, -uy, ux, -uy * px + ux * py)

        if cr > cross_tol or (abs(cr) <= cross_tol and dot > 0.0):
            sector = clip_right(clip_left(P, *u1), *u2)
            area_i = sector.area if sector is not None else 0.0
            x_i = area_outside_disk(sector, (px, py), r) if sector is not None else 0.0
        else:
            # Reflex sector (angle >= pi): the wedge is the union of the two
            # half planes; use inclusion-exclusion over convex clips.
            log.debug("reflex sector %d at reference %r", i, (px, py))
            h1 = clip_left(P, *u1)
            h2 = clip_right(P, *u2)
            h12 = clip_right(h1, *u2)
            area_i = (
                (h1.area if h1 is not None else 0.0)
                + (h2.area if h2 is not None else 0.0)
                - (h12.area if h12 is not None else 0.0)
            )
            x_i = (
                (area_outside_disk(h1, (px, py), r) if h1 is not None else 0.0)
                + (area_outside_disk(h2, (px, py), r) if h2 is not None else 0.0)
                - (area_outside_disk(h12, (px, py), r) if h12 is not None else 0.0)
            )
        sector_areas.append(area_i)
        if x_i < best:
            best = x_i
            best_idx = i
    return RobustnessReport(
        kind="external",
        value=best / total,
        method="exact",
        witness={
            "type": "sector",
            "index": best_idx,
            "foot_a": list(feet[best_idx].location),
            "foot_b": list(feet[(best_idx + 1) % S].location),
            "area": best,
        },
        details={"S": S, "area": total, "sector_areas": sector_areas},
    )


# -- full robustness: straight-cut search -----------------------------------


def _piece_stable(P: ConvexPolygon2, piece: Optional[ConvexPolygon2]) -> Optional[int]:
    """Stable count of a piece at its own centroid; ``None`` when unusable."""
    if piece is None or piece is P:
        return None
    try:
        eq = equilibria(piece, piece.centroid)
    except DegenerateConfiguration:
        return None
    if eq.any_degenerate:
        return None
    return eq.S


def full_robustness_line_bound(
    P: ConvexPolygon2,
    grid_theta: int = 180,
    grid_offset: int = 48,
    refine_tol: Optional[float] = 1e-6,
) -> RobustnessReport:
    """Upper bound for the full robustness from a straight-cut grid search.

    Scans cutting lines over a ``grid_theta`` x ``grid_offset`` grid (angle
    uniform over [0, pi), offsets across the support interval), keeps pieces
    whose stable count at their own centroid drops below the original count,
    and refines the best offset per direction and side by bisection down to
    ``refine_tol`` (in offset units; ``None`` skips refinement).  Returns the
    minimal relative area removed, which bounds the full robustness from
    above, or ``status="no_reduction_found"``.
    """
    eq0 = equilibria(P, P.centroid)
    if eq0.any_degenerate:
        raise DegenerateConfiguration("polygon is degenerate at its centroid")
    S0 = eq0.S
    total = P.area

    best_val = math.inf
    best_witness: Optional[dict] = None

    for j in range(grid_theta):
        theta = j * math.pi / grid_theta
        nx, ny = math.cos(theta), math.sin(theta)
        lo, hi = P.support_interval(nx, ny)
        offsets = np.linspace(lo, hi, grid_offset + 2)[1:-1]
        for side in (+1, -1):

            def removed_rel(d: float) -> tuple[float, Optional[int]]:
                piece = clip_halfplane_nd(P, side * nx, side * ny, side * d)
                s = _piece_stable(P, piece)
                if piece is None:
                    kept = 0.0
                elif piece is P:
                    kept = 1.0
                else:
                    kept = piece.area / total
                return 1.0 - kept, s

            # For side +1 the kept part grows with d, so the cheapest reducing
            # cut sits at the largest reducing offset (smallest for side -1).
            reducing = []
            for d in offsets:
                rel, s = removed_rel(d)
                if s is not None and s < S0:
                    reducing.append((d, rel))
            if not reducing:
                continue
            if side == +1:
                d_red, rel_red = max(reducing, key=lambda t: t[0])
                step = offsets[1] - offsets[0] if len(offsets) > 1 else (hi - lo)
                d_ok = min(d_red + step, hi)
            else:
                d_red, rel_red = min(reducing, key=lambda t: t[0])
                step = offsets[1] - offsets[0] if len(offsets) > 1 else (hi - lo)
                d_ok = max(d_red - step, lo)
            if refine_tol is not None:
                a, b = d_red, d_ok
                while abs(b - a) > refine_tol:
                    mid = 0.5 * (a + b)
                    rel, s = removed_rel(mid)
                    if s is not None and s < S0:
                        a = mid
                        rel_red, d_red = rel, mid
                    else:
                        b = mid
            if rel_red < best_val:
                best_val = rel_red
                best_witness = {
                    "type": "line",
                    "theta": theta,
                    "offset": d_red,
                    "side": side,
                    "relative_area_removed": rel_red,
                }

    if best_witness is None:
        return RobustnessReport(
            kind="full_line_bound",
            value=None,
            method="search",
            status="no_reduction_found",
            details={"S": S0, "grid_theta": grid_theta, "grid_offset": grid_offset, "refine_tol": refine_tol, "upper_bound": True},
        )
    return RobustnessReport(
        kind="full_line_bound",
        value=best_val,
        method="search",
        witness=best_witness,
        details={"S": S0, "grid_theta": grid_theta, "grid_offset": grid_offset, "refine_tol": refine_tol, "upper_bound": True},
    )


# -- truncation sweep -------------------------------------------------------


@dataclass(frozen=True)
class TruncationSample:
    theta: float
    offset: float
    side: int  # +1 keeps n.z <= d, -1 the other side
    relative_area: float
    piece_S: Optional[int]
    delta_S: Optional[int]
    degenerate: bool


@dataclass
class SweepSummary:
    bin_edges: np.ndarray
    counts: dict  # category -> array of per-bin counts; categories: int dS and "degenerate"
    totals: np.ndarray

    def fractions(self, category) -> np.ndarray:
        with np.errstate(invalid="ignore", divide="ignore"):
            frac = np.where(self.totals > 0, self.counts.get(category, np.zeros_like(self.totals)) / np.maximum(self.totals, 1), 0.0)
        return frac

    @property
    def categories(self) -> list:
        return sorted((c for c in self.counts if c != "degenerate"), key=int) + (
            ["degenerate"] if "degenerate" in self.counts else []
        )


def _draw_sweep_lines(P: ConvexPolygon2, samples: int, seed: int) -> tuple[np.ndarray, np.ndarray]:
    """Pre-draw (theta, offset) pairs from the motion-invariant line measure.

    All randomness comes from a counter-based generator keyed by the seed and
    is drawn up front in index order, so sample evaluation can be distributed
    and reduced in fixed order with identical results.
    """
    rng = np.random.Generator(np.random.Philox(key=seed))
    u = rng.random((samples, 2))
    thetas = u[:, 0] * math.pi
    verts = np.asarray(P.vertices)
    normals = np.column_stack([np.cos(thetas), np.sin(thetas)])
    projs = verts @ normals.T  # (n, samples)
    lo = projs.min(axis=0)
    hi = projs.max(axis=0)
    offsets = lo + u[:, 1] * (hi - lo)
    return thetas, offsets


def truncation_sweep(P: ConvexPolygon2, samples: int, seed: int, bins: int = 20) -> tuple[list[TruncationSample], SweepSummary]:
    """Monte Carlo truncation sweep recording both pieces of each random line.

    Lines are sampled from the kinematic measure restricted to lines meeting
    ``P``.  Every sample records the piece's relative area and the change of
    the stable count measured at the piece's own centroid; pieces that
    collapse below tolerance or classify degenerately land in a separate
    ``degenerate`` category.
    """
    if samples < 1:
        raise ValueError("samples must be positive")
    eq0 = equilibria(P, P.centroid)
    S0 = eq0.S
    total = P.area
    thetas, offsets = _draw_sweep_lines(P, samples, seed)
    rows: list[TruncationSample] = []
    for theta, d in zip(thetas, offsets):
        nx, ny = math.cos(theta), math.sin(theta)
        for side in (+1, -1):
            piece = clip_halfplane_nd(P, side * nx, side * ny, side * d)
            if piece is None or piece is P:
                rel = 0.0 if piece is None else 1.0
                rows.append(TruncationSample(float(theta), float(d), side, rel, None, None, True))
                continue
            rel = piece.area / total
            s = _piece_stable(P, piece)
            if s is None:
                rows.append(TruncationSample(float(theta), float(d), side, rel, None, None, True))
            else:
                rows.append(TruncationSample(float(theta), float(d), side, rel, s, s - S0, False))
    return rows, summarize_sweep(rows, bins)


def summarize_sweep(rows: Sequence[TruncationSample], bins: int = 20) -> SweepSummary:
    """Bin sweep samples by relative area and count per-bin outcome categories."""
    if bins < 1:
        raise ValueError("bins must be positive")
    edges = np.linspace(0.0, 1.0, bins + 1)
    totals = np.zeros(bins, dtype=int)
    counts: dict = {}
    for row in rows:
        b = min(int(row.relative_area * bins), bins - 1)
        totals[b] += 1
        key = "degenerate" if row.degenerate else int(row.delta_S)
        if key not in counts:
            counts[key] = np.zeros(bins, dtype=int)
        counts[key][b] += 1
    return SweepSummary(bin_edges=edges, counts=counts, totals=totals)


def average_robustness(P: ConvexPolygon2, n: int, samples: int, seed: int) -> float:
    """Fraction of ``n``-cut random truncation sequences that keep the stable count.

    Each trial applies ``n`` successive random cuts: line from the invariant
    measure of the current piece, retained side by fair coin.  A trial is
    neutral when the final piece, at its own centroid, has the same stable
    count as ``P``; collapsed or degenerate outcomes count as non-neutral.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if samples < 1:
        raise ValueError("samples must be positive")
    eq0 = equilibria(P, P.centroid)
    S0 = eq0.S
    rng = np.random.Generator(np.random.Philox(key=seed))
    u = rng.random((samples, n, 3))
    neutral = 0
    for i in range(samples):
        piece: Optional[ConvexPolygon2] = P
        ok = True
        for j in range(n):
            theta = u[i, j, 0] * math.pi
            nx, ny = math.cos(theta), math.sin(theta)
            lo, hi = piece.support_interval(nx, ny)
            d = lo + u[i, j, 1] * (hi - lo)
            side = +1 if u[i, j, 2] < 0.5 else -1
            nxt = clip_halfplane_nd(piece, side * nx, side * ny, side * d)
            if nxt is None:
                ok = False
                break
            piece = nxt
        if not ok:
            continue
        if piece is P:
            s: Optional[int] = S0
        else:
            s = _piece_stable(P, piece)
        if s is not None and s == S0:
            neutral += 1
    return neutral / samples


# -- CSV / SVG emission -----------------------------------------------------

SWEEP_CSV_HEADER = "theta,offset,side,relative_area,piece_S,delta_S,degenerate"
SUMMARY_CSV_HEADER = "bin_lo,bin_hi,frac_dS_-2,frac_dS_-1,frac_dS_0,frac_dS_+1,frac_degenerate"
_SUMMARY_CATEGORIES = (-2, -1, 0, 1)


def sweep_csv(rows: Sequence[TruncationSample]) -> str:
    """Sample CSV, one line per recorded piece, floats at 17 significant digits."""
    out = [SWEEP_CSV_HEADER]
    for r in rows:
        out.append(
            ",".join(
                [
                    fmt_g17(r.theta),
                    fmt_g17(r.offset),
                    str(r.side),
                    fmt_g17(r.relative_area),
                    "" if r.piece_S is None else str(r.piece_S),
                    "" if r.delta_S is None else str(r.delta_S),
                    "1" if r.degenerate else "0",
                ]
            )
        )
    return "\n".join(out) + "\n"


def summary_csv(summary: SweepSummary) -> str:
    """Binned summary CSV with fixed delta-S columns -2..+1 plus degenerate."""
    for cat in summary.counts:
        if cat != "degenerate" and cat not in _SUMMARY_CATEGORIES:
            raise ValueError(f"delta_S={cat} does not fit the summary schema")
    out = [SUMMARY_CSV_HEADER]
    edges = summary.bin_edges
    fracs = {c: summary.fractions(c) for c in _SUMMARY_CATEGORIES}
    fdeg = summary.fractions("degenerate")
    for b in range(len(edges) - 1):
        out.append(
            ",".join(
                [fmt_g17(edges[b]), fmt_g17(edges[b + 1])]
                + [fmt_g17(fracs[c][b]) for c in _SUMMARY_CATEGORIES]
                + [fmt_g17(fdeg[b])]
            )
        )
    return "\n".join(out) + "\n"


_SVG_COLORS = {
    -2: "#7b3294",
    -1: "#c2a5cf",
    0: "#a6dba0",
    1: "#008837",
    "degenerate": "#bbbbbb",
}


def summary_svg(summary: SweepSummary, title: str = "Truncation sweep") -> str:
    """800x600 stacked-area chart of per-bin outcome fractions vs relative area."""
    width, height = 800, 600
    ml, mr, mt, mb = 70, 160, 50, 60
    plot_w = width - ml - mr
    plot_h = height - mt - mb
    edges = summary.bin_edges
    bins = len(edges) - 1
    centers = 0.5 * (edges[:-1] + edges[1:])
    cats = [c for c in (-2, -1, 0, 1, "degenerate") if c in summary.counts]
    stacked = np.zeros(bins)
    parts = []

    def x_px(x: float) -> float:
        return ml + x * plot_w

    def y_px(y: float) -> float:
        return mt + (1.0 - y) * plot_h

    for cat in cats:
        frac = summary.fractions(cat)
        lower = stacked.copy()
        upper = stacked + frac
        pts = [(x_px(c), y_px(u)) for c, u in zip(centers, upper)]
        pts += [(x_px(c), y_px(l)) for c, l in reversed(list(zip(centers, lower)))]
        path = " ".join(f"{x:.2f},{y:.2f}" for x, y in pts)
        label = f"dS={cat:+d}" if isinstance(cat, int) else "degenerate"
        parts.append(f'<polygon points="{path}" fill="{_SVG_COLORS[cat]}" stroke="none"><title>{label}</title></polygon>')
        stacked = upper

    legend = []
    for i, cat in enumerate(cats):
        label = f"dS={cat:+d}" if isinstance(cat, int) else "degenerate"
        y = mt + 20 + i * 22
        legend.append(f'<rect x="{width - mr + 20}" y="{y}" width="14" height="14" fill="{_SVG_COLORS[cat]}"/>')
        legend.append(f'<text x="{width - mr + 40}" y="{y + 12}" font-size="13">{label}</text>')

    axis = [
        f'<line x1="{ml}" y1="{y_px(0)}" x2="{width - mr}" y2="{y_px(0)}" stroke="black"/>',
        f'<line x1="{ml}" y1="{y_px(0)}" x2="{ml}" y2="{mt}" stroke="black"/>',
        f'<text x="{ml + plot_w / 2}" y="{height - 15}" font-size="14" text-anchor="middle">relative area of piece</text>',
        f'<text x="20" y="{mt + plot_h / 2}" font-size="14" transform="rotate(-90 20 {mt + plot_h / 2})" text-anchor="middle">fraction of samples</text>',
        f'<text x="{width / 2}" y="28" font-size="16" text-anchor="middle">{title}</text>',
    ]
    for frac_label in (0.0, 0.25, 0.5, 0.75, 1.0):
        axis.append(
            f'<text x="{x_px(frac_label):.1f}" y="{y_px(0) + 18:.1f}" font-size="12" text-anchor="middle">{frac_label:g}</text>'
        )
        axis.append(
            f'<text x="{ml - 8}" y="{y_px(frac_label) + 4:.1f}" font-size="12" text-anchor="end">{frac_label:g}</text>'
        )

    body = "\n".join(parts + axis + legend)
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">\n<rect width="{width}" height="{height}" fill="white"/>\n'
        f"{body}\n</svg>\n"
    )
