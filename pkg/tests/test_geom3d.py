import math

import numpy as np
import pytest

from equirobust.errors import DegenerateInput, NonConvexInput
from equirobust.geom3d import (
    aabb,
    bounding_box,
    centroid3,
    clip_halfspace3,
    generator_ellipsoid_mesh,
    generator_prism,
    generator_truncated_cylinder,
    hull3,
    off_dumps,
    off_loads,
    platonic,
    polyhedron_new,
    read_off,
    surface_area,
    volume,
    write_off,
)

from conftest import random_hull3


def unit_box():
    return hull3([(x, y, z) for x in (0, 1) for y in (0, 1) for z in (0, 1)])


class TestConstruction:
    def test_cube_counts_and_measures(self):
        c = platonic("cube", edge=1.0)
        assert (len(c.vertices), len(c.edges), len(c.faces)) == (8, 12, 6)
        assert volume(c) == pytest.approx(1.0, abs=1e-14)
        assert surface_area(c) == pytest.approx(6.0, abs=1e-13)
        assert centroid3(c) == pytest.approx((0.0, 0.0, 0.0), abs=1e-14)

    def test_tetra_closed_forms(self):
        t = platonic("tetra", edge=1.0)
        assert volume(t) == pytest.approx(1.0 / (6.0 * math.sqrt(2.0)), abs=1e-15)
        assert surface_area(t) == pytest.approx(math.sqrt(3.0), abs=1e-14)

    def test_orientation_fixed_automatically(self):
        # One face given clockwise: polyhedron_new flips it.
        verts = [(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)]
        faces = [[0, 2, 1], [0, 1, 3], [1, 2, 3], [0, 3, 2]]
        P = polyhedron_new(verts, faces)
        assert volume(P) == pytest.approx(1.0 / 6.0, abs=1e-15)
        flipped = polyhedron_new(verts, [list(reversed(f)) for f in faces])
        assert volume(flipped) == pytest.approx(1.0 / 6.0, abs=1e-15)

    def test_too_few_vertices(self):
        with pytest.raises(DegenerateInput):
            polyhedron_new([(0, 0, 0), (1, 0, 0), (0, 1, 0)], [[0, 1, 2]])

    def test_nonplanar_face_rejected(self):
        verts = [(0, 0, 0), (1, 0, 0), (1, 1, 0.3), (0, 1, 0), (0.5, 0.5, 1)]
        faces = [[0, 3, 2, 1], [0, 1, 4], [1, 2, 4], [2, 3, 4], [3, 0, 4]]
        with pytest.raises(DegenerateInput):
            polyhedron_new(verts, faces)

    def test_nonconvex_rejected(self):
        # Push one octahedron apex past the equator plane: faces stay planar
        # triangles but the opposite apex lies outside the dented face planes.
        octa = platonic("octa", edge=1.0)
        verts = list(octa.vertices)
        idx = int(np.argmax([v[2] for v in verts]))
        x, y, z = verts[idx]
        verts[idx] = (x, y, -0.35 * z)
        with pytest.raises(NonConvexInput):
            polyhedron_new(verts, octa.faces)

    def test_unused_vertex_rejected(self):
        verts = [(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1), (9, 9, 9)]
        faces = [[0, 2, 1], [0, 1, 3], [1, 2, 3], [0, 3, 2]]
        with pytest.raises(DegenerateInput):
            polyhedron_new(verts, faces)

    def test_broken_edge_pairing_rejected(self):
        verts = [(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)]
        faces = [[0, 2, 1], [0, 1, 3], [1, 2, 3], [1, 2, 3]]
        with pytest.raises(DegenerateInput):
            polyhedron_new(verts, faces)

    def test_repeated_vertex_in_face_rejected(self):
        verts = [(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)]
        faces = [[0, 2, 1, 2], [0, 1, 3], [1, 2, 3], [0, 3, 2]]
        with pytest.raises(DegenerateInput):
            polyhedron_new(verts, faces)


class TestHull:
    def test_interior_point_discarded(self):
        pts = [(x, y, z) for x in (0, 1) for y in (0, 1) for z in (0, 1)] + [(0.5, 0.5, 0.5)]
        h = hull3(pts)
        assert (len(h.vertices), len(h.edges), len(h.faces)) == (8, 12, 6)
        assert volume(h) == pytest.approx(1.0, abs=1e-14)

    def test_coplanar_facets_merged(self):
        # Cube faces must come out as 6 quads, not 12 triangles.
        h = unit_box()
        assert sorted(len(f) for f in h.faces) == [4] * 6
        # Rebuilding from its own vertices reproduces the face lattice.
        again = hull3(h.vertices)
        assert {frozenset(f) for f in again.faces} == {frozenset(f) for f in h.faces}

    def test_random_hulls_euler(self, rng):
        for _ in range(25):
            h = random_hull3(rng, 50)
            v, e, f = len(h.vertices), len(h.edges), len(h.faces)
            assert v - e + f == 2
            assert h.structural_ok()
            g = np.asarray(centroid3(h))
            assert h.interior_margin(g) > 0

    def test_degenerate_cloud_rejected(self):
        with pytest.raises(DegenerateInput):
            hull3([(0, 0, 0), (1, 0, 0), (0, 1, 0), (1, 1, 0)])  # all coplanar


class TestClip:
    def test_corner_cut_combinatorics(self):
        box = unit_box()
        piece = clip_halfspace3(box, (1, 1, 1), 2.5)
        assert (len(piece.vertices), len(piece.edges), len(piece.faces)) == (10, 15, 7)
        assert 1.0 - volume(piece) == pytest.approx(0.5**3 / 6.0, abs=1e-12)

    def test_small_corner_cut(self):
        box = unit_box()
        piece = clip_halfspace3(box, (1, 1, 1), 2.9)
        assert (len(piece.vertices), len(piece.edges), len(piece.faces)) == (10, 15, 7)
        assert 1.0 - volume(piece) == pytest.approx(0.1**3 / 6.0, rel=1e-9)

    def test_tangent_plane_returns_same_object(self):
        box = unit_box()
        assert clip_halfspace3(box, (1, 1, 1), 3.0) is box
        assert clip_halfspace3(box, (1, 1, 1), 3.1) is box

    def test_everything_removed(self):
        box = unit_box()
        assert clip_halfspace3(box, (0, 0, 1), -0.5) is None
        assert clip_halfspace3(box, (0, 0, 1), 0.0) is None  # only the bottom facet survives

    def test_half_cube_is_brick(self):
        box = unit_box()
        piece = clip_halfspace3(box, (0, 0, 1), 0.5)
        assert (len(piece.vertices), len(piece.faces)) == (8, 6)
        assert volume(piece) == pytest.approx(0.5, abs=1e-14)
        lo = piece.coords.min(axis=0)
        hi = piece.coords.max(axis=0)
        assert np.allclose(lo, [0, 0, 0]) and np.allclose(hi, [1, 1, 0.5])

    def test_unnormalized_plane_equivalent(self):
        box = unit_box()
        a = clip_halfspace3(box, (0, 0, 2), 1.0)
        b = clip_halfspace3(box, (0, 0, 1), 0.5)
        assert volume(a) == pytest.approx(volume(b), abs=1e-14)

    def test_zero_normal_rejected(self):
        with pytest.raises(ValueError):
            clip_halfspace3(unit_box(), (0, 0, 0), 0.5)

    def test_volume_additivity_random(self, rng):
        for _ in range(20):
            h = random_hull3(rng, 30)
            n = rng.standard_normal(3)
            n /= np.linalg.norm(n)
            lo, hi = h.support_interval(n)
            d = float(rng.uniform(lo + 0.2 * (hi - lo), hi - 0.2 * (hi - lo)))
            below = clip_halfspace3(h, n, d)
            above = clip_halfspace3(h, -n, -d)
            assert below is not None and above is not None
            assert below.structural_ok() and above.structural_ok()
            total = volume(below) + volume(above)
            assert total == pytest.approx(volume(h), rel=1e-10)

    def test_cut_through_vertex(self):
        # Plane through two opposite cube vertices and two edge midpoints.
        box = unit_box()
        piece = clip_halfspace3(box, (1, 1, 0), 1.0)
        assert piece is not None
        assert piece.structural_ok()
        assert volume(piece) == pytest.approx(0.5, abs=1e-12)


class TestBoundingBox:
    def test_aabb_extents_sorted(self):
        brick = hull3([(x, y, z) for x in (0, 1) for y in (0, 2) for z in (0, 7)])
        bb = aabb(brick)
        assert bb.extents == pytest.approx((1.0, 2.0, 7.0), abs=1e-14)
        assert bb.center == pytest.approx((0.5, 1.0, 3.5), abs=1e-14)
        assert bb.contains((0.5, 1.0, 3.5))
        assert not bb.contains((0.5, 1.0, 7.2))

    def test_frame_columns_follow_sorting(self):
        brick = hull3([(x, y, z) for x in (0, 7) for y in (0, 1) for z in (0, 2)])
        bb = aabb(brick)
        # Shortest extent is along y, so the first frame column is the y axis.
        assert abs(bb.frame[:, 0] @ np.array([0, 1, 0])) == pytest.approx(1.0)
        assert abs(bb.frame[:, 2] @ np.array([1, 0, 0])) == pytest.approx(1.0)

    def test_rotated_frame_never_tighter_than_volume(self, rng):
        h = random_hull3(rng, 30)
        vol = volume(h)
        for _ in range(10):
            q, _ = np.linalg.qr(rng.standard_normal((3, 3)))
            bb = bounding_box(h, q)
            a, b, c = bb.extents
            assert a * b * c >= vol - 1e-12

    def test_bad_frame_rejected(self):
        with pytest.raises(ValueError):
            bounding_box(unit_box(), np.array([[1, 0, 0], [0, 2, 0], [0, 0, 1.0]]))


class TestPlatonic:
    COUNTS = {
        "tetra": (4, 6, 4),
        "cube": (8, 12, 6),
        "octa": (6, 12, 8),
        "dodeca": (20, 30, 12),
        "icosa": (12, 30, 20),
    }

    @pytest.mark.parametrize("name", sorted(COUNTS))
    def test_counts_surface_center(self, name):
        P = platonic(name)
        assert (len(P.vertices), len(P.edges), len(P.faces)) == self.COUNTS[name]
        assert surface_area(P) == pytest.approx(1.0, abs=1e-12)
        assert max(abs(c) for c in centroid3(P)) < 1e-12

    def test_unit_surface_cube_edge(self):
        c = platonic("cube")
        a, b = c.edges[0]
        edge = math.dist(c.vertices[a], c.vertices[b])
        assert edge == pytest.approx(1.0 / math.sqrt(6.0), abs=1e-15)

    def test_requested_edge_length(self):
        d = platonic("dodeca", edge=2.0)
        lengths = [math.dist(d.vertices[a], d.vertices[b]) for a, b in d.edges]
        assert min(lengths) == pytest.approx(2.0, abs=1e-12)
        assert max(lengths) == pytest.approx(2.0, abs=1e-12)

    def test_unknown_name(self):
        with pytest.raises(ValueError):
            platonic("teapot")


class TestGenerators:
    def test_prism_counts(self):
        P = generator_prism(6, 10.0)
        assert (len(P.vertices), len(P.edges), len(P.faces)) == (12, 18, 8)
        assert volume(P) == pytest.approx(10.0 * 6 * math.sin(math.pi / 3) * math.cos(math.pi / 3), rel=1e-12)

    def test_prism_validation(self):
        with pytest.raises(ValueError):
            generator_prism(2, 1.0)
        with pytest.raises(ValueError):
            generator_prism(5, 0.0)

    def test_cylinder_counts_and_box(self):
        cyl = generator_truncated_cylinder(1.0, 20.0, 32)
        assert (len(cyl.vertices), len(cyl.edges), len(cyl.faces)) == (194, 416, 224)
        bb = aabb(cyl)
        # Caps are inscribed half spheroids of height 2r: box is exact.
        assert bb.extents == pytest.approx((2.0, 2.0, 24.0), abs=1e-12)
        assert centroid3(cyl) == pytest.approx((0.0, 0.0, 0.0), abs=1e-12)

    def test_cylinder_facet_validation(self):
        with pytest.raises(ValueError):
            generator_truncated_cylinder(1.0, 10.0, 16)
        with pytest.raises(ValueError):
            generator_truncated_cylinder(1.0, 10.0, 34)
        with pytest.raises(ValueError):
            generator_truncated_cylinder(0.0, 10.0, 32)

    def test_ellipsoid_mesh_volume(self):
        E = generator_ellipsoid_mesh(1.0, 4.0, 16.0, facets=2000)
        assert len(E.faces) == 2000
        exact = 4.0 / 3.0 * math.pi * 1.0 * 4.0 * 16.0
        assert volume(E) == pytest.approx(exact, rel=1e-2)
        bb = aabb(E)
        assert bb.extents[2] <= 32.0 + 1e-9  # inscribed


class TestOff:
    def test_round_trip_bit_faithful(self, rng):
        h = random_hull3(rng, 25)
        text = off_dumps(h)
        back = off_loads(text)
        assert back.vertices == h.vertices
        assert {frozenset(f) for f in back.faces} == {frozenset(f) for f in h.faces}
        assert off_dumps(back) == text

    def test_file_round_trip(self, tmp_path):
        c = platonic("cube")
        path = str(tmp_path / "cube.off")
        write_off(c, path)
        back = read_off(path)
        assert back.vertices == c.vertices

    def test_comments_ignored(self):
        t = platonic("tetra", edge=1.0)
        text = "# made by hand\n" + off_dumps(t).replace("OFF\n", "OFF\n# counts follow\n")
        assert off_loads(text).vertices == t.vertices

    def test_malformed_rejected(self):
        with pytest.raises(DegenerateInput):
            off_loads("not an off file")
        with pytest.raises(DegenerateInput):
            off_loads("OFF\n4 4 6\n0 0 0\n")  # truncated
        # Valid syntax but degenerate geometry is also rejected.
        with pytest.raises(DegenerateInput):
            off_loads("OFF\n3 1 3\n0 0 0\n1 0 0\n0 1 0\n3 0 1 2\n")
