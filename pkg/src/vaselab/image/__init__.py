from .core import Image, load_image, save_image, to_canonical
from .segment import LabelMap, egbis_segment, morph_segment, otsu_threshold
from .contour import Contour, extract_outlines, silhouette, resample_closed
from .hog import HogDescriptor, HogParams, hog
from .scd import SilhouetteDescriptor, scd, scd_distance
from .shape_context import ShapeContextSet, shape_context, shape_context_cost

__all__ = [
    "Image",
    "load_image",
    "save_image",
    "to_canonical",
    "LabelMap",
    "egbis_segment",
    "morph_segment",
    "otsu_threshold",
    "Contour",
    "extract_outlines",
    "silhouette",
    "resample_closed",
    "HogDescriptor",
    "HogParams",
    "hog",
    "SilhouetteDescriptor",
    "scd",
    "scd_distance",
    "ShapeContextSet",
    "shape_context",
    "shape_context_cost",
]
