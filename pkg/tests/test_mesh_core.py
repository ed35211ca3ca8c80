import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import random_rotation
from vaselab import capacity as cap
from vaselab.errors import (
    AllBinsEmpty,
    Degenerate,
    EmptyMesh,
    IndexOutOfRange,
    MeshParseError,
    NotClosed,
)
from vaselab.mesh import generate as G
from vaselab.mesh.axis import Axis, estimate_axis
from vaselab.mesh.core import TriangleMesh, mesh_volume, signed_volume_mm3, validate_mesh
from vaselab.mesh.io import load_mesh, save_obj
from vaselab.mesh.profile import extract_profile


# ---- loading ------------------------------------------------------------------

def test_load_minimal_obj(tmp_path):
    p = tmp_path / "tri.obj"
    p.write_text("v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 3\n")
    mesh = load_mesh(p)
    assert mesh.n_vertices == 3
    assert mesh.n_triangles == 1


def test_load_obj_quads_fan_split(tmp_path):
    cube = """v -1 -1 -1\nv 1 -1 -1\nv 1 1 -1\nv -1 1 -1
v -1 -1 1\nv 1 -1 1\nv 1 1 1\nv -1 1 1
f 1 4 3 2\nf 5 6 7 8\nf 1 2 6 5\nf 2 3 7 6\nf 3 4 8 7\nf 4 1 5 8\n"""
    p = tmp_path / "cube.obj"
    p.write_text(cube)
    mesh = load_mesh(p)
    assert mesh.n_vertices == 8
    assert mesh.n_triangles == 12
    rep = validate_mesh(mesh)
    assert rep.is_closed and rep.is_manifold


def test_load_obj_bad_index(tmp_path):
    p = tmp_path / "bad.obj"
    p.write_text("v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 99\n")
    with pytest.raises(IndexOutOfRange):
        load_mesh(p)


def test_load_obj_empty(tmp_path):
    p = tmp_path / "empty.obj"
    p.write_text("# nothing\n")
    with pytest.raises(EmptyMesh):
        load_mesh(p)


def test_load_obj_vertex_colors_roundtrip(tmp_path, cm_cube):
    colored = TriangleMesh(
        cm_cube.vertices, cm_cube.triangles, G.striped_colors(cm_cube)
    )
    p = tmp_path / "colored.obj"
    save_obj(colored, p)
    back = load_mesh(p)
    assert back.colors is not None
    np.testing.assert_allclose(back.vertices, colored.vertices, atol=1e-6)
    np.testing.assert_allclose(back.colors, colored.colors, atol=1e-5)


def test_load_ply_binary(tmp_path, cm_cube):
    import struct

    p = tmp_path / "cube.ply"
    header = (
        "ply\nformat binary_little_endian 1.0\n"
        f"element vertex {cm_cube.n_vertices}\n"
        "property float x\nproperty float y\nproperty float z\n"
        f"element face {cm_cube.n_triangles}\n"
        "property list uchar int vertex_indices\nend_header\n"
    )
    blob = bytearray(header.encode("ascii"))
    for v in cm_cube.vertices:
        blob += struct.pack("<3f", *v)
    for t in cm_cube.triangles:
        blob += struct.pack("<B3i", 3, *t)
    p.write_bytes(bytes(blob))
    mesh = load_mesh(p)
    assert mesh.n_triangles == 12
    assert mesh_volume(mesh) == pytest.approx(1.0, rel=1e-9)


def test_load_ply_rejects_ascii(tmp_path):
    p = tmp_path / "a.ply"
    p.write_text("ply\nformat ascii 1.0\nelement vertex 0\nend_header\n")
    with pytest.raises(MeshParseError):
        load_mesh(p)


def test_load_ply_rejects_double_layout(tmp_path):
    p = tmp_path / "d.ply"
    p.write_text(
        "ply\nformat binary_little_endian 1.0\nelement vertex 1\n"
        "property double x\nproperty double y\nproperty double z\n"
        "element face 0\nproperty list uchar int vertex_indices\nend_header\n"
    )
    with pytest.raises(MeshParseError):
        load_mesh(p)


# ---- validation -----------------------------------------------------------------

def test_validate_cube(cm_cube):
    rep = validate_mesh(cm_cube)
    assert rep.is_closed and rep.is_manifold
    assert rep.boundary_edge_count == 0
    assert rep.connected_component_count == 1


def test_validate_cube_missing_face(cm_cube):
    rep = validate_mesh(TriangleMesh(cm_cube.vertices, cm_cube.triangles[:-1]))
    assert not rep.is_closed
    assert rep.boundary_edge_count == 3


def test_validate_two_disjoint_cubes():
    a = G.cube_mesh(10.0)
    b = G.cube_mesh(10.0, center=(30.0, 0.0, 0.0))
    merged = TriangleMesh(
        np.vstack([a.vertices, b.vertices]),
        np.vstack([a.triangles, b.triangles + a.n_vertices]),
    )
    assert validate_mesh(merged).connected_component_count == 2


def test_euler_characteristic_genus_zero(cm_cube, icosphere_r10):
    for mesh in (cm_cube, icosphere_r10):
        v = len(np.unique(mesh.triangles))
        e = len(np.unique(np.sort(np.concatenate([
            mesh.triangles[:, [0, 1]], mesh.triangles[:, [1, 2]], mesh.triangles[:, [2, 0]],
        ]), axis=1), axis=0))
        f = mesh.n_triangles
        assert v - e + f == 2


# ---- volume --------------------------------------------------------------------

def test_cube_volume(cm_cube):
    assert mesh_volume(cm_cube) == pytest.approx(1.0, rel=1e-12)


def test_icosphere_volume_within_1pct(icosphere_r10):
    analytic = 4.0 / 3.0 * np.pi * 1000.0 / 1000.0  # 4.18879 ml
    assert mesh_volume(icosphere_r10) == pytest.approx(analytic, rel=0.01)


def test_reversed_winding_warns(cm_cube):
    flipped = TriangleMesh(cm_cube.vertices, cm_cube.triangles[:, ::-1])
    with pytest.warns(UserWarning):
        assert mesh_volume(flipped) == pytest.approx(1.0, rel=1e-12)


def test_volume_open_mesh_raises(cm_cube):
    with pytest.raises(NotClosed):
        mesh_volume(TriangleMesh(cm_cube.vertices, cm_cube.triangles[:-1]))


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(0, 10_000), scale=st.floats(0.25, 4.0))
def test_volume_rigid_invariance_and_cubic_scaling(seed, scale):
    rng = np.random.default_rng(seed)
    base = G.cube_mesh(10.0)
    v0 = signed_volume_mm3(base)
    rot = random_rotation(rng)
    moved = base.transformed(rotation=rot, translation=rng.uniform(-100, 100, 3))
    assert signed_volume_mm3(moved) == pytest.approx(v0, rel=1e-9)
    scaled = base.transformed(scale=scale)
    assert signed_volume_mm3(scaled) == pytest.approx(v0 * scale**3, rel=1e-9)


# ---- axis -------------------------------------------------------------------------

def test_axis_cylinder_direction():
    cyl = G.cylinder_mesh(20.0, 50.0, n_theta=96, n_z=20)
    axis = estimate_axis(cyl)
    assert abs(abs(axis.direction @ np.array([0, 0, 1.0])) - 1) < 1e-6
    assert np.arccos(np.clip(abs(axis.direction[2]), -1, 1)) < 1e-3
    assert not axis.direction_ambiguous
    assert axis.fit_rms < 1e-9


def test_axis_rotated_vessel(rng):
    base = G.revolution_mesh(G.vessel_profile(n=80), n_theta=64)
    rot = random_rotation(rng)
    true_dir = rot @ np.array([0, 0, 1.0])
    moved = base.transformed(rotation=rot, translation=(5.0, -3.0, 11.0))
    axis = estimate_axis(moved)
    angle = np.arccos(np.clip(abs(axis.direction @ true_dir), -1, 1))
    assert angle < 1e-3


def test_axis_sphere_ambiguous(icosphere_r10):
    axis = estimate_axis(icosphere_r10)
    assert axis.direction_ambiguous
    assert np.linalg.norm(axis.point) < 1e-3 * 10.0  # center recovered


def test_axis_flat_grid_degenerate():
    with pytest.raises(Degenerate):
        estimate_axis(G.grid_mesh())


# ---- profile ----------------------------------------------------------------------

def test_profile_cylinder(z_axis):
    cyl = G.cylinder_mesh(20.0, 50.0, n_theta=96, n_z=30)
    profile = extract_profile(cyl, z_axis, 10)
    assert len(profile.z) == 10
    np.testing.assert_allclose(profile.r, 20.0, rtol=5e-3)


def test_profile_cone_decreasing(z_axis):
    cone = G.cone_mesh(30.0, 60.0, n_theta=96, n_z=50)
    profile = extract_profile(cone, z_axis, 12)
    expected = 30.0 * (1.0 - profile.z / 60.0)
    np.testing.assert_allclose(profile.r, expected, rtol=0.02, atol=0.4)
    assert np.all(np.diff(profile.r) < 0)


def test_profile_needs_two_bins(z_axis, cm_cube):
    with pytest.raises(ValueError):
        extract_profile(cm_cube, z_axis, 1)


def test_profile_degenerate_along_axis(z_axis):
    flat = G.grid_mesh(5, 5, size=10.0)
    with pytest.raises(AllBinsEmpty):
        extract_profile(flat, z_axis, 4)


def test_profile_roundtrip_volume(z_axis):
    """Profile -> revolution mesh -> enclosed volume matches the revolve rule."""
    samples = G.vessel_profile(n=150)
    mesh = G.revolution_mesh(samples, n_theta=128, close_caps=True)
    axis = Axis(point=(0, 0, 0), direction=(0, 0, 1), fit_rms=0.0)
    profile = extract_profile(mesh, axis, 120)
    v_revolve = cap.volume_of_revolution(profile).volume_ml
    v_mesh = mesh_volume(mesh)
    assert v_revolve == pytest.approx(v_mesh, rel=0.005)
