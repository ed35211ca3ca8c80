"""vaselab: digital analysis workbench for surface-of-revolution pottery.

Subpackages:
  mesh        triangle meshes, IO, validation, axis/profile extraction
  flatten     proxy fitting, rollouts, elastic relaxation, rendering
  capacity    filling-volume computation (revolve / inner / offset / mass)
  registration similarity ICP and mould-series detection
  voxel       CT-style grids, porosity, cavity capacity
  image       segmentation, contours, descriptors (HOG / SCD / shape context)
  retrieval   descriptor index, ranked queries, ranking evaluation
  catalog     records, similarity graph, linked selection
  service     HTTP JSON API for the exploration client
"""

__version__ = "0.1.0"
