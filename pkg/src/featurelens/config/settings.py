"""Configuration settings model."""

from __future__ import annotations

import json
from pathlib import Path
from typing import List

from pydantic import BaseModel, Field


class Config(BaseModel):
    """Tunable constants for extraction, training and evaluation."""

    # Image canonicalization
    canonical_size: int = Field(
        default=256, ge=8, le=4096, description="Square working resolution of the extractor"
    )

    # Frequency features
    low_band_radius: float = Field(
        default=0.125, gt=0.0, lt=1.0, description="Normalized radius bounding the low band"
    )
    high_band_radius: float = Field(
        default=0.5, gt=0.0, lt=1.0, description="Normalized radius above which the high band starts"
    )

    # Spatial features
    grad_magnitude_bins: int = Field(
        default=64, ge=2, description="Histogram bins for GradEntropy"
    )
    gabor_wavelengths: List[float] = Field(
        default_factory=lambda: [4.0, 8.0], description="Gabor wavelengths in pixels"
    )
    gabor_orientations: List[float] = Field(
        default_factory=lambda: [0.0, 45.0, 90.0, 135.0], description="Gabor orientations in degrees"
    )

    # MMD reference
    mmd_reference_size: int = Field(
        default=500, ge=2, description="Maximum clean rows kept in the MMD reference"
    )

    # Reproducibility / parallelism
    seed: int = Field(default=42, ge=0, description="Root seed for every generator")
    jobs: int = Field(default=0, ge=0, description="Extraction threads (0 = logical cores)")

    # SVM
    svm_c: float = Field(default=1.0, gt=0.0, description="SVM box constraint C")
    svm_gamma: float | None = Field(
        default=None, gt=0.0, description="RBF width; None means 1/d"
    )
    svm_tol: float = Field(default=1e-3, gt=0.0, description="KKT tolerance")
    svm_max_passes: int = Field(default=200, ge=1, description="Maximum full SMO passes")

    # MLP
    mlp_hidden: List[int] = Field(
        default_factory=lambda: [64, 32], description="Hidden layer widths"
    )
    mlp_learning_rate: float = Field(default=1e-3, gt=0.0, description="Adam step size")
    mlp_batch_size: int = Field(default=32, ge=1, description="Minibatch size")
    mlp_max_epochs: int = Field(default=200, ge=1, description="Epoch cap with validation data")
    mlp_fixed_epochs: int = Field(default=100, ge=1, description="Epochs without validation data")
    mlp_patience: int = Field(default=20, ge=1, description="Early-stopping patience")

    # GBT
    gbt_trees: int = Field(default=100, ge=1, description="Boosting rounds")
    gbt_max_depth: int = Field(default=6, ge=1, le=16, description="Maximum tree depth")
    gbt_learning_rate: float = Field(default=0.1, gt=0.0, le=1.0, description="Shrinkage")
    gbt_reg_lambda: float = Field(default=1.0, ge=0.0, description="L2 penalty on leaf weights")
    gbt_min_child_hessian: float = Field(
        default=1.0, ge=0.0, description="Minimum hessian mass per child"
    )

    # Synthesis / analysis
    attack_epsilon: float = Field(
        default=8.0 / 255.0, gt=0.0, le=0.5, description="Default per-pixel perturbation budget"
    )
    reduced_dims: int = Field(default=37, ge=0, le=51, description="Size of the reduced mask")
    permutation_repeats: int = Field(
        default=10, ge=1, description="Shuffles per feature for permutation importance"
    )

    @classmethod
    def create_default(cls) -> Config:
        """Create a default configuration instance."""
        return cls()

    @classmethod
    def from_file(cls, path: Path) -> Config:
        """
        Load configuration from a JSON file.

        Args:
            path: Path to the config JSON file

        Returns:
            Config instance

        Raises:
            FileNotFoundError: If file doesn't exist
            ValueError: If JSON is invalid or validation fails
        """
        if not path.exists():
            raise FileNotFoundError(f"Config file not found: {path}")

        try:
            with open(path, "r", encoding="utf-8") as f:
                data = json.load(f)
        except json.JSONDecodeError as e:
            raise ValueError(f"Invalid JSON in config file: {e}") from e

        try:
            return cls.model_validate(data)
        except Exception as e:
            raise ValueError(f"Config validation failed: {e}") from e

    def save_to_file(self, path: Path) -> None:
        """Save configuration to a JSON file, creating parent directories."""
        path.parent.mkdir(parents=True, exist_ok=True)

        with open(path, "w", encoding="utf-8") as f:
            json.dump(self.model_dump(), f, indent=2)

    def __repr__(self) -> str:
        return (
            f"Config(size={self.canonical_size}, seed={self.seed}, "
            f"gbt={self.gbt_trees}x{self.gbt_max_depth})"
        )
