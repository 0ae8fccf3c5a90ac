"""CSV artifacts through pandas: 17-digit floats, empty cells for NaN."""

from __future__ import annotations

import math
from pathlib import Path
from typing import Mapping, Optional, Sequence, Type, Union

import pandas as pd

from featurelens.core.errors import FeatureLensError, UnreadableFile

FLOAT_FORMAT = "%.17g"


def write_table(frame: pd.DataFrame, path: Union[str, Path], na_rep: str = "") -> None:
    """Write without the index; floats keep every bit, NaN becomes ``na_rep``."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(
        path, index=False, float_format=FLOAT_FORMAT, na_rep=na_rep, lineterminator="\n"
    )


def read_table(
    path: Union[str, Path],
    what: str,
    header: Optional[Sequence[str]] = None,
    dtype: Optional[Union[type, Mapping[str, type]]] = None,
    header_error: Type[FeatureLensError] = UnreadableFile,
) -> pd.DataFrame:
    """
    Read a CSV written by ``write_table``; only empty cells are missing.

    Args:
        path: CSV file
        what: Artifact name used in error messages
        header: Exact column names to require, in order
        dtype: Passed to ``pandas.read_csv``
        header_error: Raised when the header differs from ``header``

    Raises:
        UnreadableFile: missing, undecodable or malformed file
    """
    path = Path(path)
    try:
        frame = pd.read_csv(
            path,
            dtype=dtype,
            keep_default_na=False,
            na_values=[""],
            float_precision="round_trip",
        )
    except (OSError, UnicodeDecodeError, pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise UnreadableFile(f"could not read {what} {path}: {e}") from e
    except ValueError as e:
        raise UnreadableFile(f"{path}: malformed {what}: {e}") from e

    if header is not None and tuple(frame.columns) != tuple(header):
        raise header_error(f"{path}: {what} header must be {','.join(header)}")
    return frame


def format_cell(value: float) -> str:
    """A float as ``write_table`` renders it; NaN is the empty cell."""
    return "" if math.isnan(value) else FLOAT_FORMAT % value
