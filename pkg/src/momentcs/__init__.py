"""Moment-transform dictionaries and OMP sparse coding for image denoising."""

from momentcs.basis import BasisKind, BasisMatrix, dct_basis, krawtchouk_basis, make_basis, tchebichef_basis
from momentcs.dictionary import Dictionary, build_dictionary, mutual_coherence, render_atlas
from momentcs.errors import ImageFormatError, InvalidArgument, MomentCSError
from momentcs.imageio import load_image, save_image
from momentcs.metrics import SsimConfig, psnr, sparsity_summary, ssim
from momentcs.noise import NoiseSpec, add_gaussian_noise
from momentcs.omp import SparseCode, StoppingRule, omp_encode, reconstruct
from momentcs.pipeline import DenoiseStats, PipelineConfig, aggregate_patches, center_patch, denoise_image, extract_patches

__version__ = "0.1.0"

__all__ = [
    "BasisKind",
    "BasisMatrix",
    "DenoiseStats",
    "Dictionary",
    "ImageFormatError",
    "InvalidArgument",
    "MomentCSError",
    "NoiseSpec",
    "PipelineConfig",
    "SparseCode",
    "SsimConfig",
    "StoppingRule",
    "add_gaussian_noise",
    "aggregate_patches",
    "build_dictionary",
    "center_patch",
    "dct_basis",
    "denoise_image",
    "extract_patches",
    "krawtchouk_basis",
    "load_image",
    "make_basis",
    "mutual_coherence",
    "omp_encode",
    "psnr",
    "reconstruct",
    "render_atlas",
    "save_image",
    "sparsity_summary",
    "ssim",
    "tchebichef_basis",
]
