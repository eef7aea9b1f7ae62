"""Facial action unit sequences: sparse token coding, prompt records,
resampling, 2D face drawings, context embeddings, guidance arithmetic and
evaluation metrics."""

__version__ = "0.1.0"

from .core import (
    CREMA6, MEAD8, N_UNITS, AuDescriptor, AuSequence, EmotionTaxonomy, SparseAuFrame,
    au_metadata, default_taxonomy, emotion_label, validate_dense,
)
from .codec import (
    CodecConfig, CompressionStats, compression_stats, densify, densify_sequence,
    deserialize_tokens, serialize_tokens, sparsify, sparsify_sequence,
)
from .resample import ResampleConfig, downsample, resample_to_length, upsample_linear
from .prompt import (
    ParseReport, PromptRecord, PromptTemplateConfig, build_inference_prompt,
    build_training_record, parse_response,
)
from .geometry import (
    DisplacementBasis, RasterImage, apply_aus, canonical_template, default_basis,
    map_sequence, rasterize,
)
from .embedding import ConvKernel, EmbeddingConfig, context_window, embed_sequence, random_kernel
from .guidance import GuidanceInputs, cfg_combine, disentangled_combine
from .metrics import (
    AuMetricReport, au_detection_metrics, emotion_accuracy, landmark_distance, psnr, ssim, ssim_frames,
)

__all__ = [
    "__version__", "CREMA6", "MEAD8", "N_UNITS", "AuDescriptor", "AuSequence", "EmotionTaxonomy",
    "SparseAuFrame", "au_metadata", "default_taxonomy", "emotion_label", "validate_dense",
    "CodecConfig", "CompressionStats", "compression_stats", "densify", "densify_sequence",
    "deserialize_tokens", "serialize_tokens", "sparsify", "sparsify_sequence", "ResampleConfig",
    "downsample", "resample_to_length", "upsample_linear", "ParseReport", "PromptRecord",
    "PromptTemplateConfig", "build_inference_prompt", "build_training_record", "parse_response",
    "DisplacementBasis", "RasterImage", "apply_aus", "canonical_template", "default_basis",
    "map_sequence", "rasterize", "ConvKernel", "EmbeddingConfig", "context_window",
    "embed_sequence", "random_kernel", "GuidanceInputs", "cfg_combine", "disentangled_combine",
    "AuMetricReport", "au_detection_metrics", "emotion_accuracy", "landmark_distance", "psnr", "ssim",
    "ssim_frames",
]
