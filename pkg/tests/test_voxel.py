import numpy as np
import pytest

from vaselab.errors import NoCavity
from vaselab.voxel import (
    BinaryGrid,
    VoxelGrid,
    binarize,
    cavity_capacity,
    label_components,
    load_voxel_grid,
    porosity_stats,
    save_voxel_grid,
)


def hollow_sphere_grid(n=96, r_out=38.0, r_in=34.0, spacing=1.0, mouth_radius=None):
    """Shell of material; optional cylindrical mouth bored at the top."""
    c = (n - 1) / 2.0
    x = np.arange(n)
    X, Y, Z = np.meshgrid(x, x, x, indexing="ij")
    r = np.sqrt((X - c) ** 2 + (Y - c) ** 2 + (Z - c) ** 2)
    vals = np.where((r <= r_out) & (r >= r_in), 100.0, 0.0).astype(np.float32)
    if mouth_radius:
        hole = (np.sqrt((X - c) ** 2 + (Y - c) ** 2) < mouth_radius) & (Z > c)
        vals[hole] = 0.0
    return VoxelGrid(vals, (spacing, spacing, spacing))


# ---- binarize -------------------------------------------------------------------

def test_binarize_all_material():
    g = VoxelGrid(np.full((4, 4, 4), 100.0), (1, 1, 1))
    assert binarize(g, 50.0).bits.all()


def test_binarize_all_air():
    g = VoxelGrid(np.zeros((4, 4, 4)), (1, 1, 1))
    assert not binarize(g, 50.0).bits.any()


def test_binarize_checkerboard():
    idx = np.indices((6, 6, 6)).sum(axis=0)
    vals = np.where(idx % 2 == 0, 100.0, 0.0)
    bits = binarize(VoxelGrid(vals, (1, 1, 1)), 50.0).bits
    np.testing.assert_array_equal(bits, idx % 2 == 0)


# ---- labeling --------------------------------------------------------------------

def test_label_solid_block():
    g = BinaryGrid(np.ones((5, 5, 5), bool), (1, 1, 1))
    labels, comps = label_components(g, "material", 6)
    assert len(comps) == 1
    assert comps[0]["voxel_count"] == 125
    assert (labels == 1).all()


def test_label_diagonal_connectivity():
    bits = np.zeros((4, 4, 4), bool)
    bits[1, 1, 1] = True
    bits[2, 2, 2] = True  # diagonal neighbor
    g = BinaryGrid(bits, (1, 1, 1))
    _, c26 = label_components(g, "material", 26)
    _, c6 = label_components(g, "material", 6)
    assert len(c26) == 1
    assert len(c6) == 2


def test_label_empty():
    g = BinaryGrid(np.zeros((3, 3, 3), bool), (1, 1, 1))
    labels, comps = label_components(g, "material", 6)
    assert comps == []
    assert (labels == 0).all()


def test_label_scan_order_deterministic():
    bits = np.zeros((6, 6, 6), bool)
    bits[4, 4, 4] = True  # later in scan order
    bits[0, 0, 0] = True  # x-fastest scan finds this first
    g = BinaryGrid(bits, (1, 1, 1))
    labels, comps = label_components(g, "material", 6)
    assert labels[0, 0, 0] == 1
    assert labels[4, 4, 4] == 2
    assert [c["label"] for c in comps] == [1, 2]


def test_label_counts_cover_grid():
    rng = np.random.default_rng(5)
    bits = rng.random((12, 12, 12)) > 0.5
    g = BinaryGrid(bits, (1, 1, 1))
    _, mat = label_components(g, "material", 6)
    _, air = label_components(g, "air", 26)
    total = sum(c["voxel_count"] for c in mat) + sum(c["voxel_count"] for c in air)
    assert total == bits.size


def test_label_translation_invariant():
    """Shifting the content inside a larger grid renumbers labels
    consistently: the partition structure is unchanged."""
    rng = np.random.default_rng(6)
    core = rng.random((6, 6, 6)) > 0.6
    for shift in ((0, 0, 0), (3, 1, 2)):
        bits = np.zeros((14, 14, 14), bool)
        x, y, z = shift
        bits[x : x + 6, y : y + 6, z : z + 6] = core
        labels, comps = label_components(BinaryGrid(bits, (1, 1, 1)), "material", 26)
        sub = labels[x : x + 6, y : y + 6, z : z + 6]
        if shift == (0, 0, 0):
            reference = sub.copy()
            ref_sizes = sorted(c["voxel_count"] for c in comps)
        else:
            np.testing.assert_array_equal(sub, reference)
            assert sorted(c["voxel_count"] for c in comps) == ref_sizes


# ---- porosity ----------------------------------------------------------------------

def test_porosity_counting():
    vals = np.full((10, 10, 10), 100.0)
    vals[3:5, 4, 4] = 0.0
    vals[7, 7, 7] = 0.0
    rep = porosity_stats(VoxelGrid(vals, (1, 1, 1)), 50.0)
    assert rep.void_voxels == 3
    assert rep.envelope_voxels == 1000
    assert rep.porosity_fraction == pytest.approx(0.003)
    assert len(rep.components) == 2


def test_porosity_planted_needle_elongation():
    vals = np.full((20, 9, 9), 100.0)
    vals[5:15, 4, 4] = 0.0  # 10x1x1 along x
    rep = porosity_stats(VoxelGrid(vals, (1, 1, 1)), 50.0)
    assert len(rep.components) == 1
    void = rep.components[0]
    # coordinate covariance with per-voxel cube moment: eigenvalues
    # (99+1)/12 and 1/12 -> ratio 100, dominant axis x
    assert void.elongation == pytest.approx(100.0, rel=1e-9)
    assert abs(void.principal_axes[0] @ np.array([1.0, 0, 0])) > 0.999
    assert void.voxel_count == 10


def test_porosity_no_voids():
    rep = porosity_stats(VoxelGrid(np.full((6, 6, 6), 9.0), 5 * np.ones(3)), 1.0)
    assert rep.porosity_fraction == 0.0
    assert rep.components == ()


def test_porosity_open_pore_not_a_void():
    vals = np.full((8, 8, 8), 100.0)
    vals[0:4, 4, 4] = 0.0  # channel reaching the boundary
    rep = porosity_stats(VoxelGrid(vals, (1, 1, 1)), 50.0)
    assert rep.void_voxels == 0


def test_porosity_invariant_under_value_rescale():
    rng = np.random.default_rng(11)
    vals = rng.uniform(0, 200, (16, 16, 16))
    a = porosity_stats(VoxelGrid(vals, (1, 1, 1)), 80.0)
    b = porosity_stats(VoxelGrid(vals * 3.5, (1, 1, 1)), 80.0 * 3.5)
    assert a.porosity_fraction == b.porosity_fraction
    assert len(a.components) == len(b.components)


# ---- cavity ------------------------------------------------------------------------

def test_cavity_sealed_sphere_analytic():
    g = hollow_sphere_grid(n=128, r_out=50.0, r_in=45.0)
    res = cavity_capacity(g, 50.0)
    analytic = 4 / 3 * np.pi * 45.0**3 / 1000.0
    assert res.volume_ml == pytest.approx(analytic, rel=0.02)


def test_cavity_open_mouth_no_cavity():
    g = hollow_sphere_grid(n=96, mouth_radius=6.0)
    with pytest.raises(NoCavity):
        cavity_capacity(g, 50.0)


def test_cavity_capped_matches_sealed():
    sealed = hollow_sphere_grid(n=96)
    res_sealed = cavity_capacity(sealed, 50.0)
    open_g = hollow_sphere_grid(n=96, mouth_radius=6.0)
    c = (96 - 1) / 2.0
    z_rim = c + np.sqrt(34.0**2 - 6.0**2)
    res_capped = cavity_capacity(open_g, 50.0, cap_plane=(0, 0, 1, -z_rim))
    assert res_capped.volume_ml == pytest.approx(res_sealed.volume_ml, rel=0.005)


def test_cavity_monotone_with_threshold():
    """Higher threshold thins the material so the cavity can only grow."""
    c = (96 - 1) / 2.0
    x = np.arange(96)
    X, Y, Z = np.meshgrid(x, x, x, indexing="ij")
    r = np.sqrt((X - c) ** 2 + (Y - c) ** 2 + (Z - c) ** 2)
    # density ramps down away from the mid-shell surface
    vals = np.where(
        (r <= 40) & (r >= 30), 200.0 - 20.0 * np.abs(r - 35.0), 0.0
    ).astype(np.float32)
    g = VoxelGrid(vals, (1.0, 1.0, 1.0))
    volumes = []
    for thr in (60.0, 100.0, 140.0):
        volumes.append(cavity_capacity(g, thr).volume_ml)
    assert volumes[0] <= volumes[1] <= volumes[2]


# ---- IO -----------------------------------------------------------------------------

@pytest.mark.parametrize("dtype", [np.uint8, np.uint16, np.float32])
def test_voxel_io_roundtrip(tmp_path, dtype):
    rng = np.random.default_rng(3)
    vals = rng.integers(0, 200, size=(5, 7, 3)).astype(dtype)
    g = VoxelGrid(vals, (0.5, 0.5, 1.25))
    header = save_voxel_grid(g, tmp_path / "grid")
    back = load_voxel_grid(header)
    np.testing.assert_array_equal(back.values, vals)
    assert back.spacing == (0.5, 0.5, 1.25)


def test_voxel_io_x_fastest_order(tmp_path):
    vals = np.arange(24, dtype=np.float32).reshape(2, 3, 4, order="F")  # v[x,y,z] = x + 2y + 6z
    g = VoxelGrid(vals, (1, 1, 1))
    header = save_voxel_grid(g, tmp_path / "order")
    blob = np.frombuffer((tmp_path / "order.raw").read_bytes(), dtype="<f4")
    np.testing.assert_array_equal(blob, np.arange(24, dtype=np.float32))


def test_voxel_io_size_mismatch(tmp_path):
    g = VoxelGrid(np.zeros((4, 4, 4), np.float32), (1, 1, 1))
    header = save_voxel_grid(g, tmp_path / "bad")
    (tmp_path / "bad.raw").write_bytes(b"\x00" * 12)
    with pytest.raises(ValueError):
        load_voxel_grid(header)
