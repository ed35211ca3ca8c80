from .core import TriangleMesh, MeshReport, validate_mesh, mesh_volume, mesh_area
from .io import load_mesh, save_obj
from .axis import Axis, estimate_axis
from .profile import Profile, extract_profile

__all__ = [
    "TriangleMesh",
    "MeshReport",
    "validate_mesh",
    "mesh_volume",
    "mesh_area",
    "load_mesh",
    "save_obj",
    "Axis",
    "estimate_axis",
    "Profile",
    "extract_profile",
]
