"""Serialize sweep datasets as CSV or JSON."""

import json
import math
from typing import List, Optional, TextIO

import pandas as pd

FLOAT_FORMAT = "%.17g"


def to_csv(df: pd.DataFrame) -> str:
    """CSV with 17 significant digits and empty fields for missing values."""
    return df.to_csv(
        index=False,
        float_format=FLOAT_FORMAT,
        na_rep="",
        lineterminator="\n",
    )


def _clean(value):
    if isinstance(value, float) and math.isnan(value):
        return None
    if hasattr(value, "item"):  # numpy scalar
        return _clean(value.item())
    return value


def to_records(df: pd.DataFrame) -> List[dict]:
    """Rows as plain dicts, NaN and None both mapped to None."""
    columns = list(df.columns)
    return [
        {column: _clean(value) for column, value in zip(columns, row)}
        for row in df.itertuples(index=False, name=None)
    ]


def to_json(df: pd.DataFrame) -> str:
    return json.dumps(to_records(df), indent=2) + "\n"


def render(df: pd.DataFrame, output_format: str) -> str:
    if output_format == "csv":
        return to_csv(df)
    if output_format == "json":
        return to_json(df)
    raise ValueError(f"Invalid output format: {output_format}")


def write_dataset(
    df: pd.DataFrame,
    output_format: str,
    out: Optional[str] = None,
    stream: Optional[TextIO] = None,
) -> None:
    """Write to the file ``out``, or to ``stream`` when no path is given."""
    text = render(df, output_format)
    if out is None:
        stream.write(text)
        return
    with open(out, "w", newline="") as f:
        f.write(text)
