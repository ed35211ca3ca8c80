"""Least-squares fitting of simple revolution proxies (cylinder, cone, sphere).

The proxy shares the vessel's axis; only the shape parameters are fitted.
Residuals are geometric point-to-surface distances in mm.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import Degenerate, FitDiverged
from ..mesh.axis import Axis
from ..mesh.core import TriangleMesh

KINDS = ("cylinder", "cone", "sphere")


@dataclass(frozen=True)
class ProxyFit:
    """Fitted proxy of one kind.

    cylinder: radius
    cone:     apex (3D point on axis), half_angle (rad)
    sphere:   center (3D point on axis), radius
    """

    kind: str
    axis: Axis
    rms: float
    radius: float | None = None
    apex: np.ndarray | None = None
    half_angle: float | None = None
    center: np.ndarray | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown proxy kind '{self.kind}'")
        if self.kind in ("cylinder", "sphere") and not (self.radius and self.radius > 0):
            raise ValueError(f"{self.kind} proxy needs a positive radius")
        if self.kind == "cone":
            if self.half_angle is None or not 0 < self.half_angle < np.pi / 2:
                raise ValueError("cone half_angle must lie in (0, pi/2)")


def _cylinder_fit(z, r, axis):
    radius = float(np.mean(r))
    if radius <= 0:
        raise Degenerate("all vertices on the axis; cylinder radius undefined")
    rms = float(np.sqrt(np.mean((r - radius) ** 2)))
    return ProxyFit(kind="cylinder", axis=axis, rms=rms, radius=radius)


def _cone_fit(z, r, axis, min_slope=1e-6):
    # linear regression r = c0 + c1 z; apex where r = 0
    A = np.stack([np.ones_like(z), z], axis=1)
    (c0, c1), *_ = np.linalg.lstsq(A, r, rcond=None)
    if abs(c1) < min_slope:
        raise FitDiverged(
            "cone apex diverges (profile slope ~ 0); surface is cylindrical"
        )
    z_apex = -c0 / c1
    half_angle = float(np.arctan(abs(c1)))
    apex = axis.point + z_apex * axis.direction
    # point-to-cone distance ~ profile residual projected onto the cone normal
    resid = (r - (c0 + c1 * z)) * np.cos(half_angle)
    rms = float(np.sqrt(np.mean(resid**2)))
    return ProxyFit(kind="cone", axis=axis, rms=rms, apex=apex, half_angle=half_angle)


def _sphere_fit(z, r, axis):
    # center constrained to the axis at offset t: |p - c|^2 = r^2 + (z - t)^2
    # algebraic least squares in (t, s) with s = R^2 - t^2
    u = r**2 + z**2
    A = np.stack([2 * z, np.ones_like(z)], axis=1)
    (t, s), *_ = np.linalg.lstsq(A, u, rcond=None)
    r2 = s + t**2
    if r2 <= 0:
        raise FitDiverged("sphere fit produced non-positive radius")
    radius = float(np.sqrt(r2))
    center = axis.point + t * axis.direction
    dist = np.sqrt(r**2 + (z - t) ** 2)
    rms = float(np.sqrt(np.mean((dist - radius) ** 2)))
    return ProxyFit(kind="sphere", axis=axis, rms=rms, radius=radius, center=center)


def fit_proxy(mesh: TriangleMesh, axis: Axis, kind: str | None = None) -> ProxyFit:
    """Fit the requested proxy kind, or all three and keep the lowest rms."""
    z = axis.heights(mesh.vertices)
    r = axis.radii(mesh.vertices)
    if np.ptp(z) <= 0 and np.ptp(r) <= 0:
        raise Degenerate("mesh collapses to a point in axis coordinates")

    fitters = {"cylinder": _cylinder_fit, "cone": _cone_fit, "sphere": _sphere_fit}
    if kind is not None:
        if kind not in fitters:
            raise ValueError(f"unknown proxy kind '{kind}'")
        return fitters[kind](z, r, axis)

    best = None
    for name in KINDS:
        try:
            fit = fitters[name](z, r, axis)
        except (FitDiverged, Degenerate):
            continue
        if best is None or fit.rms < best.rms:
            best = fit
    if best is None:
        raise FitDiverged("no proxy kind produced a finite fit")
    return best
