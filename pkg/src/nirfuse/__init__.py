"""NIR image coloring with a contrast-preserving local linear mapping."""
from .baselines import gradient_reg_fuse, naive_colorize, statistical_fuse, wavelet_fuse
from .chroma import ChromaParams, chroma_map, transfer_colors
from .color import OpponentImage, backward_opponent, forward_opponent, luminance_of
from .detail import DetailSolveParams, gradient, transfer_detail
from .image import clamp_plane, load_image, save_image
from .mapping import MappingField, apply_mapping, contrast_prior, solve_mapping, validate_linearity
from .metrics import QualityReport, colorfulness, contrast_measure, entropy, spatial_frequency
from .pipeline import PipelineConfig, colorize, denoise, fuse, run_metrics, validate
from .smoothing import LayerPair, NlmParams, base_layer, nlm_filter

__version__ = "0.1.0"
