"""Balanced clean/adversarial benchmarks written to disk with a manifest."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import List, Literal, Sequence, Tuple, Union

import numpy as np
import pandas as pd
from pydantic import BaseModel, Field, field_validator

from featurelens.core.errors import UnreadableFile
from featurelens.core.image import CANONICAL_SIZE, GrayImage, save_raw
from featurelens.core.tables import read_table, write_table
from featurelens.core.verbosity import VerbosityLevel, emit
from featurelens.features.pipeline import resolve_jobs
from featurelens.synth.attacks import ATTACKS, perturb
from featurelens.synth.generators import CLEAN_KINDS, gen_clean

MANIFEST_HEADER = ("path", "label", "attack", "epsilon", "split")
SPLITS: Tuple[str, ...] = ("train", "valid", "test")
SPLIT_FRACTIONS = (0.6, 0.2, 0.2)
MIXED = "mixed"
IMAGE_SUFFIX = ".flgray"


class SynthSpec(BaseModel):
    """What to generate: size, clean kind, attack family, budget and seed."""

    n: int = Field(ge=2, description="Total images, half clean and half perturbed")
    kind: Literal["smooth", "blobs", "sinusoid", "blurred_noise", "mixed"] = "mixed"
    attack: Literal["sign", "iterative", "bandpass"] = "sign"
    epsilon: float = Field(default=8.0 / 255.0, gt=0.0, le=0.5)
    seed: int = Field(default=42, ge=0)
    size: int = Field(default=CANONICAL_SIZE, ge=8, description="Side of the generated images")

    @field_validator("n")
    @classmethod
    def _even(cls, v: int) -> int:
        if v % 2:
            raise ValueError(f"n must be even for a balanced benchmark, got {v}")
        return v

    def entropy(self) -> List[int]:
        """Root seed material: the seed and the attack, so each attack gets its own images."""
        return [self.seed, ATTACKS.index(self.attack)]

    def kind_for(self, index: int) -> str:
        """Clean kind of image ``index``; ``mixed`` cycles through every kind."""
        if self.kind == MIXED:
            return CLEAN_KINDS[index % len(CLEAN_KINDS)]
        return self.kind


class ManifestRow(BaseModel):
    path: str
    label: int = Field(ge=0, le=1)
    attack: str
    epsilon: float
    split: Literal["train", "valid", "test"]


def split_counts(k: int) -> Tuple[int, int, int]:
    """Per-class train/valid/test sizes for ``k`` images of one class."""
    n_train = int(round(SPLIT_FRACTIONS[0] * k))
    n_valid = int(round(SPLIT_FRACTIONS[1] * k))
    return n_train, n_valid, k - n_train - n_valid


def assign_splits(labels: Sequence[int], seed: Union[int, Sequence[int]]) -> List[str]:
    """Stratified 60/20/20 assignment by a seeded shuffle within each class."""
    labels = np.asarray(labels)
    rng = np.random.default_rng(seed)
    out = [""] * labels.size
    for cls in (0, 1):
        members = np.flatnonzero(labels == cls)
        order = rng.permutation(members)
        n_train, n_valid, _ = split_counts(members.size)
        for rank, idx in enumerate(order):
            if rank < n_train:
                out[idx] = "train"
            elif rank < n_train + n_valid:
                out[idx] = "valid"
            else:
                out[idx] = "test"
    return out


def image_seeds(seed: Union[int, Sequence[int]], n: int) -> np.ndarray:
    """(n, 2) per-image seeds: column 0 drives the clean generator, column 1 the attack."""
    return np.random.SeedSequence(seed).generate_state(2 * n).reshape(n, 2)


def synthesize(spec: SynthSpec, index: int, seeds: np.ndarray) -> Tuple[GrayImage, int]:
    """Image ``index`` of the benchmark and its label; the second half is perturbed."""
    clean_seed, attack_seed = (int(s) for s in seeds[index])
    image = gen_clean(spec.kind_for(index), clean_seed, spec.size)
    if index < spec.n // 2:
        return image, 0
    return perturb(image, spec.attack, spec.epsilon, attack_seed), 1


def make_benchmark(
    spec: SynthSpec,
    out_dir: Union[str, Path],
    jobs: int = 0,
    verbose: Union[bool, int] = False,
) -> List[ManifestRow]:
    """
    Generate ``spec.n`` images, write them in the raw format and a manifest.

    Adversarial images are perturbations of freshly generated clean images,
    never of the clean half that is kept. Manifest paths are relative to
    ``out_dir``.
    """
    out_dir = Path(out_dir)
    image_dir = out_dir / "images"
    image_dir.mkdir(parents=True, exist_ok=True)
    seeds = image_seeds(spec.entropy(), spec.n)

    def one(index: int) -> Tuple[str, int]:
        image, label = synthesize(spec, index, seeds)
        rel = f"images/{index:05d}{IMAGE_SUFFIX}"
        save_raw(image, out_dir / rel)
        return rel, label

    emit(
        verbose,
        VerbosityLevel.BASIC,
        f"Generating {spec.n} images ({spec.kind}, {spec.attack}, ε={spec.epsilon:.4g})",
    )
    with ThreadPoolExecutor(max_workers=resolve_jobs(jobs)) as pool:
        results = list(pool.map(one, range(spec.n)))

    labels = [label for _, label in results]
    splits = assign_splits(labels, spec.entropy())
    rows = [
        ManifestRow(
            path=rel,
            label=label,
            attack=spec.attack if label == 1 else "none",
            epsilon=spec.epsilon if label == 1 else 0.0,
            split=split,
        )
        for (rel, label), split in zip(results, splits)
    ]
    write_manifest(rows, out_dir / "manifest.csv")
    (out_dir / "synth.json").write_text(spec.model_dump_json(indent=2) + "\n", encoding="utf-8")
    emit(verbose, VerbosityLevel.DETAIL, f"   wrote {out_dir / 'manifest.csv'}")
    return rows


def write_manifest(rows: Sequence[ManifestRow], path: Union[str, Path]) -> None:
    frame = pd.DataFrame([r.model_dump() for r in rows], columns=list(MANIFEST_HEADER))
    write_table(frame.astype({"label": "int64", "epsilon": "float64"}), path)


def read_manifest(path: Union[str, Path]) -> List[ManifestRow]:
    """
    Parse a manifest CSV.

    Raises:
        UnreadableFile: missing file, wrong header or malformed row
    """
    frame = read_table(path, "manifest", header=MANIFEST_HEADER, dtype=str)
    try:
        return [ManifestRow.model_validate(r) for r in frame.to_dict("records")]
    except ValueError as e:
        raise UnreadableFile(f"{path}: malformed manifest row: {e}") from e


def resolve_paths(rows: Sequence[ManifestRow], manifest_path: Union[str, Path]) -> List[Path]:
    """Absolute image paths; relative entries resolve against the manifest's directory."""
    base = Path(manifest_path).parent
    return [Path(r.path) if Path(r.path).is_absolute() else base / r.path for r in rows]
