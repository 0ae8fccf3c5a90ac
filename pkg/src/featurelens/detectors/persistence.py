"""Versioned JSON model files."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Union

from pydantic import ValidationError

from featurelens.core.errors import CorruptModel, UnreadableFile, VersionMismatch
from featurelens.detectors.base import FORMAT_VERSION, DetectorModel


def dumps_model(model: DetectorModel) -> str:
    """Canonical text form: declaration order, 2-space indent, shortest round-trip floats."""
    return json.dumps(model.model_dump(), indent=2, allow_nan=False) + "\n"


def save_model(model: DetectorModel, path: Union[str, Path]) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps_model(model), encoding="utf-8")


def loads_model(text: str, source: str = "<string>") -> DetectorModel:
    """
    Parse and validate a model file body.

    Raises:
        CorruptModel: not JSON, or JSON that fails validation
        VersionMismatch: ``format_version`` is not the one this build writes
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise CorruptModel(f"{source}: not valid JSON ({e})") from e
    if not isinstance(data, dict):
        raise CorruptModel(f"{source}: top-level value must be an object")

    version = data.get("format_version")
    if version is None:
        raise CorruptModel(f"{source}: missing format_version")
    if version != FORMAT_VERSION:
        raise VersionMismatch(
            f"{source}: format_version {version!r} is not supported (expected {FORMAT_VERSION})"
        )

    try:
        return DetectorModel.model_validate(data)
    except ValidationError as e:
        raise CorruptModel(f"{source}: invalid model structure: {e}") from e


def load_model(path: Union[str, Path]) -> DetectorModel:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as e:
        raise UnreadableFile(f"could not read model file {path}: {e}") from e
    return loads_model(text, str(path))
