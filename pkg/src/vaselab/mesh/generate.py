"""Synthetic mesh generators for tests, demos and pipeline checks.

All generators produce consistently outward-wound, z-up meshes in mm.
"""

from __future__ import annotations

import numpy as np

from .core import TriangleMesh


def cube_mesh(size: float = 1.0, center=(0.0, 0.0, 0.0)) -> TriangleMesh:
    """Axis-aligned cube of edge `size`, 8 vertices / 12 triangles, outward wound."""
    h = size / 2.0
    c = np.asarray(center, dtype=np.float64)
    corners = np.array(
        [
            [-h, -h, -h],
            [+h, -h, -h],
            [+h, +h, -h],
            [-h, +h, -h],
            [-h, -h, +h],
            [+h, -h, +h],
            [+h, +h, +h],
            [-h, +h, +h],
        ]
    ) + c
    quads = [
        (0, 3, 2, 1),  # bottom (-z)
        (4, 5, 6, 7),  # top (+z)
        (0, 1, 5, 4),  # -y
        (1, 2, 6, 5),  # +x
        (2, 3, 7, 6),  # +y
        (3, 0, 4, 7),  # -x
    ]
    tris = []
    for a, b, cc, d in quads:
        tris.append((a, b, cc))
        tris.append((a, cc, d))
    return TriangleMesh(corners, np.asarray(tris, dtype=np.int64))


def grid_mesh(nx: int = 10, ny: int = 10, size: float = 10.0) -> TriangleMesh:
    """Flat rectangular grid in the z=0 plane (degenerate for axis fitting)."""
    xs = np.linspace(0, size, nx)
    ys = np.linspace(0, size, ny)
    gx, gy = np.meshgrid(xs, ys, indexing="ij")
    v = np.stack([gx.ravel(), gy.ravel(), np.zeros(nx * ny)], axis=1)
    tris = []
    for i in range(nx - 1):
        for j in range(ny - 1):
            a = i * ny + j
            b = a + ny
            tris.append((a, b, b + 1))
            tris.append((a, b + 1, a + 1))
    return TriangleMesh(v, np.asarray(tris, dtype=np.int64))


def revolution_mesh(
    samples,
    n_theta: int = 64,
    close_caps: bool = True,
    apex_tol: float = 1e-9,
) -> TriangleMesh:
    """Sweep a (z, r) profile around the z axis.

    samples: (k, 2) array of ascending z with r >= 0. Samples with r below
    apex_tol collapse to a single on-axis vertex. With close_caps, open ends
    with positive radius receive a center-fan disc.
    """
    s = np.asarray(samples, dtype=np.float64)
    if s.ndim != 2 or s.shape[1] != 2 or s.shape[0] < 2:
        raise ValueError("samples must be (k >= 2, 2)")
    if not np.all(np.diff(s[:, 0]) > 0):
        raise ValueError("profile z must be strictly increasing")
    theta = np.linspace(0.0, 2 * np.pi, n_theta, endpoint=False)
    cos_t, sin_t = np.cos(theta), np.sin(theta)

    vertices = []
    ring_start = []  # index of first vertex of ring k, or -1 for apex rows
    apex_index = []
    for z, r in s:
        if r < apex_tol:
            apex_index.append(len(vertices))
            ring_start.append(-1)
            vertices.append((0.0, 0.0, z))
        else:
            apex_index.append(-1)
            ring_start.append(len(vertices))
            for c, sn in zip(cos_t, sin_t):
                vertices.append((r * c, r * sn, z))

    tris = []

    def ring(k, j):
        return ring_start[k] + (j % n_theta)

    for k in range(len(s) - 1):
        lo_apex, hi_apex = ring_start[k] < 0, ring_start[k + 1] < 0
        if lo_apex and hi_apex:
            continue
        if lo_apex:
            a = apex_index[k]
            for j in range(n_theta):
                tris.append((a, ring(k + 1, j), ring(k + 1, j + 1)))
        elif hi_apex:
            a = apex_index[k + 1]
            for j in range(n_theta):
                tris.append((ring(k, j), ring(k, j + 1), a))
        else:
            for j in range(n_theta):
                a, b = ring(k, j), ring(k, j + 1)
                c, d = ring(k + 1, j + 1), ring(k + 1, j)
                tris.append((a, b, c))
                tris.append((a, c, d))

    if close_caps:
        if ring_start[0] >= 0:
            center = len(vertices)
            vertices.append((0.0, 0.0, s[0, 0]))
            for j in range(n_theta):
                tris.append((center, ring(0, j + 1), ring(0, j)))
        if ring_start[-1] >= 0:
            center = len(vertices)
            vertices.append((0.0, 0.0, s[-1, 0]))
            k = len(s) - 1
            for j in range(n_theta):
                tris.append((center, ring(k, j), ring(k, j + 1)))

    return TriangleMesh(
        np.asarray(vertices, dtype=np.float64), np.asarray(tris, dtype=np.int64)
    )


def cylinder_mesh(
    radius: float = 20.0,
    height: float = 50.0,
    n_theta: int = 64,
    n_z: int = 16,
    caps: bool = False,
) -> TriangleMesh:
    z = np.linspace(0.0, height, n_z)
    samples = np.stack([z, np.full(n_z, float(radius))], axis=1)
    return revolution_mesh(samples, n_theta=n_theta, close_caps=caps)


def cone_mesh(
    base_radius: float = 30.0,
    height: float = 60.0,
    n_theta: int = 64,
    n_z: int = 16,
    cap_base: bool = False,
) -> TriangleMesh:
    """Cone with apex up at z=height, base ring at z=0."""
    z = np.linspace(0.0, height, n_z)
    r = base_radius * (1.0 - z / height)
    samples = np.stack([z, r], axis=1)
    return revolution_mesh(samples, n_theta=n_theta, close_caps=cap_base)


def uv_sphere_mesh(radius: float = 10.0, n_theta: int = 48, n_lat: int = 24) -> TriangleMesh:
    """Latitude/longitude sphere with pole apexes."""
    lat = np.linspace(-np.pi / 2, np.pi / 2, n_lat + 1)
    samples = np.stack([radius * np.sin(lat), radius * np.cos(lat)], axis=1)
    return revolution_mesh(samples, n_theta=n_theta, close_caps=False)


def hemisphere_mesh(radius: float = 50.0, n_theta: int = 48, n_lat: int = 24) -> TriangleMesh:
    """Upper hemisphere, open at the equator, apex at the top pole."""
    lat = np.linspace(0.0, np.pi / 2, n_lat + 1)
    samples = np.stack([radius * np.sin(lat), radius * np.cos(lat)], axis=1)
    return revolution_mesh(samples, n_theta=n_theta, close_caps=False)


def icosphere_mesh(radius: float = 10.0, subdivisions: int = 3) -> TriangleMesh:
    """Subdivided icosahedron projected to the sphere (closed, manifold)."""
    t = (1.0 + np.sqrt(5.0)) / 2.0
    verts = np.array(
        [
            [-1, t, 0], [1, t, 0], [-1, -t, 0], [1, -t, 0],
            [0, -1, t], [0, 1, t], [0, -1, -t], [0, 1, -t],
            [t, 0, -1], [t, 0, 1], [-t, 0, -1], [-t, 0, 1],
        ],
        dtype=np.float64,
    )
    faces = [
        (0, 11, 5), (0, 5, 1), (0, 1, 7), (0, 7, 10), (0, 10, 11),
        (1, 5, 9), (5, 11, 4), (11, 10, 2), (10, 7, 6), (7, 1, 8),
        (3, 9, 4), (3, 4, 2), (3, 2, 6), (3, 6, 8), (3, 8, 9),
        (4, 9, 5), (2, 4, 11), (6, 2, 10), (8, 6, 7), (9, 8, 1),
    ]
    verts = [v / np.linalg.norm(v) for v in verts]

    for _ in range(subdivisions):
        midpoint = {}
        new_faces = []

        def mid(i, j):
            key = (min(i, j), max(i, j))
            if key not in midpoint:
                m = verts[i] + verts[j]
                m /= np.linalg.norm(m)
                midpoint[key] = len(verts)
                verts.append(m)
            return midpoint[key]

        for a, b, c in faces:
            ab, bc, ca = mid(a, b), mid(b, c), mid(c, a)
            new_faces += [(a, ab, ca), (b, bc, ab), (c, ca, bc), (ab, bc, ca)]
        faces = new_faces

    v = np.asarray(verts) * radius
    return TriangleMesh(v, np.asarray(faces, dtype=np.int64))


def pebble_mesh(seed: int = 0, radius: float = 25.0, subdivisions: int = 2, bump: float = 0.25) -> TriangleMesh:
    """Asymmetric blob: icosphere with a smooth random radial modulation.

    Distinct principal moments make these good registration subjects.
    """
    base = icosphere_mesh(radius=1.0, subdivisions=subdivisions)
    rng = np.random.default_rng(seed)
    coef = rng.uniform(-1.0, 1.0, size=9)
    x, y, z = base.vertices[:, 0], base.vertices[:, 1], base.vertices[:, 2]
    f = (
        coef[0] * x * y + coef[1] * y * z + coef[2] * z * x
        + coef[3] * (x * x - y * y) + coef[4] * (3 * z * z - 1) / 2
        + coef[5] * x + coef[6] * y + coef[7] * z
        + coef[8] * x * y * z
    )
    f = f / max(np.abs(f).max(), 1e-12)
    r = radius * (1.0 + bump * f)
    return TriangleMesh(base.vertices * r[:, None], base.triangles)


def vessel_profile(
    height: float = 120.0,
    max_radius: float = 45.0,
    neck_radius: float = 15.0,
    n: int = 120,
) -> np.ndarray:
    """Smooth amphora-like (z, r) profile, closed at the base (r(0) = 0)."""
    z = np.linspace(0.0, height, n)
    u = z / height
    body = np.sin(np.pi * np.clip(u / 0.85, 0.0, 1.0)) ** 0.8
    neck = np.clip((u - 0.85) / 0.15, 0.0, 1.0)
    r = max_radius * body * (1.0 - neck) + neck_radius * neck
    r[0] = 0.0
    return np.stack([z, r], axis=1)


def striped_colors(mesh: TriangleMesh, period_mm: float = 10.0, axis: int = 2) -> np.ndarray:
    """Banded vertex colors for rollout/render demos."""
    z = mesh.vertices[:, axis]
    phase = np.sin(2 * np.pi * z / period_mm)
    c1 = np.array([0.75, 0.33, 0.14])  # terracotta
    c2 = np.array([0.12, 0.10, 0.09])  # slip black
    w = (phase > 0).astype(np.float64)[:, None]
    return c1 * w + c2 * (1 - w)
