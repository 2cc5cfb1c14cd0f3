"""Network embedding from a path-sampled sparse PPR matrix."""
from .config import ConfigError, PsneConfig
from .graph import Graph, GraphFormatError, load_edge_list, read_edge_list
from .pipeline import EmbeddingResult, psne_embed

__all__ = ["ConfigError", "EmbeddingResult", "Graph", "GraphFormatError", "PsneConfig",
           "load_edge_list", "psne_embed", "read_edge_list"]
__version__ = "0.1.0"
