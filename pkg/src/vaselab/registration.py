"""Pairwise similarity registration (trimmed ICP) and mould-series detection.

Re-molded copies shrink uniformly, so the recovered scale between two
matching vessels is the series signal: groups of mutually well-registered
objects, ordered by height, expose chains of progressively smaller copies.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree

from .mesh.axis import estimate_axis
from .mesh.core import TriangleMesh


@dataclass(frozen=True)
class SimilarityTransform:
    """x -> scale * rotation @ x + translation"""

    scale: float
    rotation: np.ndarray  # (3, 3) orthonormal, det +1
    translation: np.ndarray  # (3,)

    def __post_init__(self):
        r = np.asarray(self.rotation, dtype=np.float64).reshape(3, 3)
        t = np.asarray(self.translation, dtype=np.float64).reshape(3)
        if self.scale <= 0:
            raise ValueError("scale must be positive")
        if abs(np.linalg.det(r) - 1.0) > 1e-6:
            raise ValueError("rotation must have det +1")
        object.__setattr__(self, "rotation", r)
        object.__setattr__(self, "translation", t)

    def apply(self, points: np.ndarray) -> np.ndarray:
        return self.scale * points @ self.rotation.T + self.translation

    def compose(self, other: "SimilarityTransform") -> "SimilarityTransform":
        """self after other: x -> self(other(x))."""
        return SimilarityTransform(
            scale=self.scale * other.scale,
            rotation=self.rotation @ other.rotation,
            translation=self.scale * self.rotation @ other.translation
            + self.translation,
        )

    @staticmethod
    def identity() -> "SimilarityTransform":
        return SimilarityTransform(1.0, np.eye(3), np.zeros(3))

    def rotation_angle_deg(self) -> float:
        c = (np.trace(self.rotation) - 1.0) / 2.0
        return float(np.degrees(np.arccos(np.clip(c, -1.0, 1.0))))


@dataclass(frozen=True)
class RegistrationParams:
    max_iterations: int = 60
    tolerance: float = 1e-9  # stop when relative rms change drops below this
    trim_fraction: float = 0.8  # correspondences kept per iteration
    max_points: int = 1500  # deterministic subsample of source vertices
    with_scale: bool = True
    multistart: bool = True  # PCA-axis sign combinations as initial rotations
    # fragments break the PCA alignment; when the best PCA-started fit stays
    # above this fraction of the target bbox diagonal, retry from the 24
    # octahedral rotations (set to 0 to disable the fallback)
    fallback_rms_fraction: float = 0.005


@dataclass(frozen=True)
class RegistrationResult:
    transform: SimilarityTransform
    rms: float
    inlier_fraction: float
    converged: bool
    distance_map: np.ndarray  # per-source-vertex distance to target (mm)

    def __post_init__(self):
        if self.rms < 0:
            raise ValueError("rms cannot be negative")


def umeyama_similarity(
    source: np.ndarray, target: np.ndarray, with_scale: bool = True
) -> SimilarityTransform:
    """Closed-form least-squares similarity aligning paired point sets."""
    mu_s = source.mean(axis=0)
    mu_t = target.mean(axis=0)
    xs = source - mu_s
    xt = target - mu_t
    cov = xt.T @ xs / len(source)
    u, dvals, vt = np.linalg.svd(cov)
    s = np.eye(3)
    if np.linalg.det(u) * np.linalg.det(vt) < 0:
        s[2, 2] = -1.0
    rotation = u @ s @ vt
    if with_scale:
        var_s = float(np.mean(np.sum(xs**2, axis=1)))
        scale = float(np.trace(np.diag(dvals) @ s) / max(var_s, 1e-300))
    else:
        scale = 1.0
    translation = mu_t - scale * rotation @ mu_s
    return SimilarityTransform(scale=scale, rotation=rotation, translation=translation)


def _subsample(points: np.ndarray, max_points: int) -> np.ndarray:
    if len(points) <= max_points:
        return points
    stride_idx = np.linspace(0, len(points) - 1, max_points).astype(np.int64)
    return points[stride_idx]


def _pca_frames(points: np.ndarray) -> list[np.ndarray]:
    """Right-handed principal frames (4 sign combinations)."""
    centered = points - points.mean(axis=0)
    _, _, vt = np.linalg.svd(centered, full_matrices=False)
    frames = []
    for sx, sy in ((1, 1), (1, -1), (-1, 1), (-1, -1)):
        f = np.stack([sx * vt[0], sy * vt[1], np.cross(sx * vt[0], sy * vt[1])])
        frames.append(f)
    return frames


def _octahedral_rotations() -> list[np.ndarray]:
    """The 24 axis-aligned rotations (signed permutations with det +1)."""
    from itertools import permutations, product

    out = []
    for perm in permutations(range(3)):
        for signs in product((1, -1), repeat=3):
            rot = np.zeros((3, 3))
            for row, (col, s) in enumerate(zip(perm, signs)):
                rot[row, col] = s
            if np.linalg.det(rot) > 0:
                out.append(rot)
    return out


def _icp_once(
    src: np.ndarray,
    tree: cKDTree,
    tgt: np.ndarray,
    init: SimilarityTransform,
    params: RegistrationParams,
):
    transform = init
    rms = np.inf
    converged = False
    n_keep = max(int(np.ceil(params.trim_fraction * len(src))), 3)
    for _ in range(params.max_iterations):
        moved = transform.apply(src)
        dist, idx = tree.query(moved, k=1)
        order = np.argsort(dist, kind="stable")
        keep = order[:n_keep]
        est = umeyama_similarity(src[keep], tgt[idx[keep]], params.with_scale)
        new_rms = float(np.sqrt(np.mean(
            np.sum((est.apply(src[keep]) - tgt[idx[keep]]) ** 2, axis=1)
        )))
        transform = est
        if abs(rms - new_rms) <= params.tolerance * max(new_rms, 1e-300) + 1e-15:
            rms, converged = new_rms, True
            break
        rms = new_rms
    return transform, rms, converged


def register_similarity(
    source: TriangleMesh,
    target: TriangleMesh,
    params: RegistrationParams = RegistrationParams(),
    init_transform: SimilarityTransform | None = None,
) -> RegistrationResult:
    """Trimmed ICP with closed-form similarity estimation per iteration.

    Initial alignments: centroid + rms-radius scaling, plus the four
    right-handed principal-frame alignments when multistart is enabled (an
    explicit init_transform joins the candidate set); the best final trimmed
    rms wins. NoConvergence is reported via converged=False, never raised.
    """
    if source.n_vertices == 0 or target.n_vertices == 0:
        raise ValueError("registration needs non-empty meshes")
    src = _subsample(source.vertices, params.max_points)
    tgt = _subsample(target.vertices, params.max_points)
    tree = cKDTree(tgt)

    mu_s, mu_t = src.mean(axis=0), tgt.mean(axis=0)
    r_s = float(np.sqrt(np.mean(np.sum((src - mu_s) ** 2, axis=1))))
    r_t = float(np.sqrt(np.mean(np.sum((tgt - mu_t) ** 2, axis=1))))
    s0 = r_t / max(r_s, 1e-300) if params.with_scale else 1.0

    inits = [SimilarityTransform(s0, np.eye(3), mu_t - s0 * mu_s)]
    if init_transform is not None:
        inits.insert(0, init_transform)
    if params.multistart:
        frames_s = _pca_frames(src)
        frame_t = _pca_frames(tgt)[0]
        for fs in frames_s:
            rot = frame_t.T @ fs
            if np.linalg.det(rot) < 0:  # pragma: no cover - frames are right-handed
                continue
            inits.append(
                SimilarityTransform(s0, rot, mu_t - s0 * rot @ mu_s)
            )

    best = None
    for init in inits:
        candidate = _icp_once(src, tree, tgt, init, params)
        if best is None or candidate[1] < best[1]:
            best = candidate

    diag = float(np.linalg.norm(tgt.max(axis=0) - tgt.min(axis=0)))
    if (
        params.fallback_rms_fraction > 0
        and best[1] > params.fallback_rms_fraction * diag
    ):
        for rot in _octahedral_rotations():
            init = SimilarityTransform(s0, rot, mu_t - s0 * rot @ mu_s)
            candidate = _icp_once(src, tree, tgt, init, params)
            if candidate[1] < best[1]:
                best = candidate
    transform, rms, converged = best

    full_dist, _ = tree.query(transform.apply(source.vertices), k=1)
    return RegistrationResult(
        transform=transform,
        rms=rms,
        inlier_fraction=params.trim_fraction,
        converged=converged,
        distance_map=full_dist,
    )


@dataclass(frozen=True)
class SeriesGroup:
    """Objects linked by successful registrations, tallest first."""

    member_ids: tuple
    pairwise_scales: tuple = field(default_factory=tuple)  # (id_a, id_b, scale<=1)


@dataclass(frozen=True)
class SeriesParams:
    # complete copies align via the PCA starts; the octahedral fallback would
    # only burn time on the (many) non-matching pairs, so it stays off here
    registration: RegistrationParams = field(
        default_factory=lambda: RegistrationParams(
            max_iterations=40, max_points=800, fallback_rms_fraction=0.0
        )
    )
    # link when trimmed rms < this fraction of the target bbox diagonal
    shape_threshold: float = 0.01
    max_workers: int = 4


def _object_height(mesh: TriangleMesh) -> float:
    """Extent along the estimated axis; rms-diameter fallback for
    non-revolution shapes (ordering only needs consistency within a group).
    """
    try:
        axis = estimate_axis(mesh)
        z = axis.heights(mesh.vertices)
        return float(z.max() - z.min())
    except Exception:
        mu = mesh.vertices.mean(axis=0)
        return 2.0 * float(
            np.sqrt(np.mean(np.sum((mesh.vertices - mu) ** 2, axis=1)))
        )


def detect_series(
    objects: list[tuple[str, TriangleMesh]],
    params: SeriesParams = SeriesParams(),
) -> list[SeriesGroup]:
    """Register all pairs, link matches, and return connected components as
    series (singletons included), members ordered by descending height.
    """
    if not objects:
        raise ValueError("detect_series needs at least one object")
    ids = [oid for oid, _ in objects]
    meshes = {oid: m for oid, m in objects}
    order = sorted(ids)
    pairs = [
        (order[i], order[j])
        for i in range(len(order))
        for j in range(i + 1, len(order))
    ]

    def run_pair(pair):
        a, b = pair
        res = register_similarity(meshes[a], meshes[b], params.registration)
        return a, b, res

    if params.max_workers > 1 and len(pairs) > 1:
        with ThreadPoolExecutor(max_workers=params.max_workers) as pool:
            results = list(pool.map(run_pair, pairs))
    else:
        results = [run_pair(p) for p in pairs]
    results.sort(key=lambda r: (r[0], r[1]))  # deterministic aggregation

    links = {}
    parent = {oid: oid for oid in order}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b, res in results:
        threshold = params.shape_threshold * meshes[b].bbox_diagonal()
        if res.rms < threshold:
            links[(a, b)] = res.transform.scale
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[rb] = ra

    groups: dict[str, list[str]] = {}
    for oid in order:
        groups.setdefault(find(oid), []).append(oid)

    heights = {oid: _object_height(meshes[oid]) for oid in order}
    out = []
    for members in groups.values():
        members_sorted = sorted(members, key=lambda o: (-heights[o], o))
        scales = []
        for i in range(len(members_sorted)):
            for j in range(i + 1, len(members_sorted)):
                a, b = members_sorted[i], members_sorted[j]
                key = (a, b) if (a, b) in links else (b, a)
                if key in links:
                    s = links[key]
                    if key != (a, b):
                        s = 1.0 / s
                    scales.append((a, b, min(float(s), 1.0)))
        out.append(SeriesGroup(member_ids=tuple(members_sorted), pairwise_scales=tuple(scales)))
    out.sort(key=lambda g: g.member_ids[0])
    return out
