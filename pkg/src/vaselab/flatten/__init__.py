from .proxy import ProxyFit, fit_proxy
from .unwrap import FlatMap2D, DistortionSample, unwrap_on_proxy
from .elastic import ElasticParams, elastic_flatten
from .render import render_flatmap, export_flatmap_obj, save_render_png

__all__ = [
    "ProxyFit",
    "fit_proxy",
    "FlatMap2D",
    "DistortionSample",
    "unwrap_on_proxy",
    "ElasticParams",
    "elastic_flatten",
    "render_flatmap",
    "export_flatmap_obj",
    "save_render_png",
]
