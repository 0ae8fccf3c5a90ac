"""Frozen feature dictionary: names, order and groups of the 51 dimensions."""

from __future__ import annotations

from typing import Dict, List, Tuple

FREQUENCY_NAMES: Tuple[str, ...] = (
    "LowFreqRatio",
    "MidFreqRatio",
    "HighFreqRatio",
    "HighFreqConcentration",
    "HighFreqMeanMag",
    "FreqEntropy",
    "FreqSkewness",
    "FreqKurtosis",
    "FreqContrast",
)

GRADIENT_NAMES: Tuple[str, ...] = ("GradMean", "GradStd", "GradEntropy") + tuple(
    f"GradHist_{i}" for i in range(36)
)

EDGE_TEXTURE_NAMES: Tuple[str, ...] = ("EdgeDensity", "TextureResponseMean")

MMD_NAMES: Tuple[str, ...] = ("MMDScore",)

FEATURE_NAMES: Tuple[str, ...] = FREQUENCY_NAMES + GRADIENT_NAMES + EDGE_TEXTURE_NAMES + MMD_NAMES

N_FEATURES = len(FEATURE_NAMES)  # 51
N_STRUCTURAL = N_FEATURES - 1  # 50, everything before the MMD score
MMD_INDEX = N_FEATURES - 1

# Symbols used by the separability results
HIGH_FREQ_RATIO_INDEX = FEATURE_NAMES.index("HighFreqRatio")  # 2
GRAD_ENTROPY_INDEX = FEATURE_NAMES.index("GradEntropy")  # 11

GROUPS: Dict[str, Tuple[int, int]] = {
    "frequency": (0, 9),
    "gradient": (9, 48),
    "edge_texture": (48, 50),
    "mmd": (50, 51),
}

assert N_FEATURES == 51


def column_names() -> List[str]:
    """CSV column labels: ``f00_LowFreqRatio`` … ``f50_MMDScore``."""
    return [f"f{i:02d}_{name}" for i, name in enumerate(FEATURE_NAMES)]


def group_of(index: int) -> str:
    """Return the group a feature index belongs to."""
    for group, (start, stop) in GROUPS.items():
        if start <= index < stop:
            return group
    raise IndexError(f"feature index out of range: {index}")
