from .grid import VoxelGrid, BinaryGrid, binarize, load_voxel_grid, save_voxel_grid
from .analysis import (
    VoidComponent,
    PorosityReport,
    label_components,
    porosity_stats,
    cavity_capacity,
)

__all__ = [
    "VoxelGrid",
    "BinaryGrid",
    "binarize",
    "load_voxel_grid",
    "save_voxel_grid",
    "VoidComponent",
    "PorosityReport",
    "label_components",
    "porosity_stats",
    "cavity_capacity",
]
