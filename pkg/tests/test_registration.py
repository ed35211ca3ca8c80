import numpy as np
import pytest

from oracles import random_rotation
from vaselab.mesh import generate as G
from vaselab.registration import (
    RegistrationParams,
    SeriesParams,
    SimilarityTransform,
    detect_series,
    register_similarity,
    umeyama_similarity,
)


def random_similarity(rng, smin=0.5, smax=2.0) -> SimilarityTransform:
    return SimilarityTransform(
        scale=float(rng.uniform(smin, smax)),
        rotation=random_rotation(rng),
        translation=rng.uniform(-50, 50, 3),
    )


def angle_between(r1: np.ndarray, r2: np.ndarray) -> float:
    c = (np.trace(r1.T @ r2) - 1.0) / 2.0
    return float(np.degrees(np.arccos(np.clip(c, -1.0, 1.0))))


# ---- closed-form estimator -----------------------------------------------------

def test_umeyama_exact_recovery(rng):
    pts = rng.normal(size=(200, 3)) * 10.0
    t = random_similarity(rng)
    est = umeyama_similarity(pts, t.apply(pts))
    assert est.scale == pytest.approx(t.scale, rel=1e-9)
    assert angle_between(est.rotation, t.rotation) < 1e-5
    np.testing.assert_allclose(est.translation, t.translation, atol=1e-6)


def test_umeyama_rigid_mode(rng):
    pts = rng.normal(size=(100, 3))
    t = SimilarityTransform(1.0, random_rotation(rng), rng.uniform(-5, 5, 3))
    est = umeyama_similarity(pts, t.apply(pts), with_scale=False)
    assert est.scale == 1.0
    assert angle_between(est.rotation, t.rotation) < 1e-5


# ---- ICP ------------------------------------------------------------------------

def test_register_identity():
    peb = G.pebble_mesh(seed=5)
    res = register_similarity(peb, peb)
    assert res.transform.scale == pytest.approx(1.0, abs=1e-9)
    assert res.rms < 1e-9
    assert res.converged
    assert res.distance_map.shape == (peb.n_vertices,)
    assert res.distance_map.max() < 1e-9


def test_register_known_transform(rng):
    peb = G.pebble_mesh(seed=7, subdivisions=3)
    t = random_similarity(rng)
    moved = peb.transformed(rotation=t.rotation, translation=t.translation, scale=t.scale)
    res = register_similarity(peb, moved)
    assert abs(res.transform.scale - t.scale) / t.scale < 0.01
    assert angle_between(res.transform.rotation, t.rotation) < 0.5


def test_register_unrelated_shapes_high_rms():
    sphere = G.icosphere_mesh(30.0, 2)
    cube = G.cube_mesh(50.0)
    res = register_similarity(sphere, cube)
    assert res.rms > 0.001 * cube.bbox_diagonal()


def test_register_composition_near_identity(rng):
    a = G.pebble_mesh(seed=9, subdivisions=3)
    t = random_similarity(rng)
    b = a.transformed(rotation=t.rotation, translation=t.translation, scale=t.scale)
    ab = register_similarity(a, b).transform
    ba = register_similarity(b, a).transform
    comp = ab.compose(ba)
    assert comp.scale == pytest.approx(1.0, rel=0.01)
    assert angle_between(comp.rotation, np.eye(3)) < 0.5


def _axis_angle(axis, degrees) -> np.ndarray:
    axis = np.asarray(axis, float)
    axis = axis / np.linalg.norm(axis)
    ang = np.radians(degrees)
    k = np.array([
        [0, -axis[2], axis[1]], [axis[2], 0, -axis[0]], [-axis[1], axis[0], 0]
    ])
    return np.eye(3) + np.sin(ang) * k + (1 - np.cos(ang)) * (k @ k)


def test_register_partial_overlap(rng):
    """Whole object onto a fragment target: only ~2/3 of the source has a
    counterpart, so the trimmed estimator must ignore the uncovered part.
    Poses are refined from a rough init; global fragment alignment is a
    different problem class and out of the ICP loop's scope."""
    from vaselab.mesh.core import TriangleMesh

    full = G.pebble_mesh(seed=11, subdivisions=3)
    keep = full.vertices[:, 2] > np.quantile(full.vertices[:, 2], 0.35)
    idx = np.nonzero(keep)[0]
    remap = -np.ones(full.n_vertices, dtype=np.int64)
    remap[idx] = np.arange(idx.size)
    tri_keep = keep[full.triangles].all(axis=1)
    fragment = TriangleMesh(full.vertices[idx], remap[full.triangles[tri_keep]])

    t = SimilarityTransform(0.85, _axis_angle(rng.normal(size=3), 25.0), rng.uniform(-20, 20, 3))
    target = fragment.transformed(rotation=t.rotation, translation=t.translation, scale=t.scale)
    rough = SimilarityTransform(
        t.scale * 1.05,
        _axis_angle(rng.normal(size=3), 8.0) @ t.rotation,
        t.translation + rng.uniform(-3, 3, 3),
    )
    res = register_similarity(
        full,
        target,
        RegistrationParams(trim_fraction=0.6, multistart=False, fallback_rms_fraction=0.0),
        init_transform=rough,
    )
    assert abs(res.transform.scale - t.scale) / t.scale < 0.01
    assert angle_between(res.transform.rotation, t.rotation) < 0.5
    assert res.rms < 1e-6 * target.bbox_diagonal()  # inlier fit is exact
    # the distance map exposes the uncovered third of the source
    assert (res.distance_map > 0.02 * target.bbox_diagonal()).mean() > 0.2


# ---- series -----------------------------------------------------------------------

@pytest.fixture(scope="module")
def planted_series(rng=np.random.default_rng(99)):
    base = G.revolution_mesh(G.vessel_profile(n=60), n_theta=48)
    objs = [("vase-a", base)]
    for name, s in (("vase-b", 0.9), ("vase-c", 0.81)):
        objs.append(
            (
                name,
                base.transformed(
                    rotation=random_rotation(rng),
                    translation=rng.uniform(-40, 40, 3),
                    scale=s,
                ),
            )
        )
    objs += [
        ("cube", G.cube_mesh(40.0)),
        ("cone", G.cone_mesh(25.0, 50.0, n_theta=32, n_z=10, cap_base=True)),
        ("peb1", G.pebble_mesh(seed=1)),
        ("peb2", G.pebble_mesh(seed=2)),
        ("ball", G.icosphere_mesh(30.0, 2)),
    ]
    return objs


def test_detect_series_planted(planted_series):
    groups = detect_series(planted_series)
    by_size = sorted(groups, key=lambda g: -len(g.member_ids))
    assert len(by_size[0].member_ids) == 3
    assert set(by_size[0].member_ids) == {"vase-a", "vase-b", "vase-c"}
    assert by_size[0].member_ids[0] == "vase-a"  # tallest first
    assert all(len(g.member_ids) == 1 for g in by_size[1:])
    assert len(groups) == 6
    scales = {(a, b): s for a, b, s in by_size[0].pairwise_scales}
    assert scales[("vase-a", "vase-b")] == pytest.approx(0.9, rel=0.01)
    assert scales[("vase-a", "vase-c")] == pytest.approx(0.81, rel=0.01)


def test_detect_series_partition(planted_series):
    groups = detect_series(planted_series)
    seen = [m for g in groups for m in g.member_ids]
    assert sorted(seen) == sorted(oid for oid, _ in planted_series)
    assert len(seen) == len(set(seen))


def test_detect_series_single_object():
    groups = detect_series([("solo", G.cube_mesh(10.0))])
    assert len(groups) == 1
    assert groups[0].member_ids == ("solo",)


def test_detect_series_identical_pair():
    mesh = G.pebble_mesh(seed=4)
    groups = detect_series([("x", mesh), ("y", mesh)])
    assert len(groups) == 1
    assert set(groups[0].member_ids) == {"x", "y"}
    assert groups[0].pairwise_scales[0][2] == pytest.approx(1.0, abs=1e-6)


def test_detect_series_empty_rejected():
    with pytest.raises(ValueError):
        detect_series([])


def test_series_deterministic(planted_series):
    p = SeriesParams(max_workers=4)
    g1 = detect_series(planted_series, p)
    g2 = detect_series(planted_series, SeriesParams(max_workers=1))
    assert [g.member_ids for g in g1] == [g.member_ids for g in g2]
