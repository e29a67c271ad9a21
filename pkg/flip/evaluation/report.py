from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np
import pandas as pd
import typer
from wasabi import msg, table

from flip.utils import FLOAT_FORMAT, write_csv


def _cell(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "pass" if value else "fail"
    if isinstance(value, (float, np.floating)):
        return "nan" if np.isnan(value) else f"{value:.6g}"
    return str(value)


def render_table(frame: pd.DataFrame, title: Optional[str] = None) -> str:
    data = [[_cell(v) for v in row] for row in frame.itertuples(index=False)]
    rendered = table(data, header=list(frame.columns), divider=True)
    if title is not None:
        rendered = f"\n{title}\n{rendered}"
    return rendered


def emit_report(
    frame: pd.DataFrame,
    fmt: str = "csv",
    path: Optional[Union[str, Path]] = None,
    title: Optional[str] = None,
):
    """CSV to `path` (or stdout), or a wasabi table on stdout."""
    if fmt == "table":
        typer.echo(render_table(frame, title))
        if path is not None:
            write_csv(path, frame)
        return
    if path is not None:
        write_csv(path, frame)
        msg.good(f"{title or 'report'} written to {path}")
    else:
        if title is not None:
            typer.echo(f"# {title}")
        typer.echo(frame.to_csv(index=False, float_format=FLOAT_FORMAT), nl=False)


def rows_frame(rows: Sequence[dict]) -> pd.DataFrame:
    return pd.DataFrame(list(rows))
