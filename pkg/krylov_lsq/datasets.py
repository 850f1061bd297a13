"""
Dataset CSV files: one row per node with its weight, derivative order and data.

Format:
    z_re,z_im,w,s,f0,f1,...,fS

f0 is the function value and fi the i-th derivative; columns beyond a row's
s stay empty. Internally the data vector uses the block layout of the
fitting modules, highest derivative first within each node.
"""

import csv
import logging
from pathlib import Path
from typing import List, Tuple, Union

import numpy as np

from .errors import DatasetError, InputError
from .nodes import NodeSet

logger = logging.getLogger(__name__)

BASE_COLUMNS = ['z_re', 'z_im', 'w', 's']


def _number(text: str, column: str, line: int) -> complex:
    try:
        value = complex(text.strip())
    except ValueError:
        raise DatasetError(f"column {column!r}: cannot parse {text!r} as a number", line) from None
    if not np.isfinite(value):
        raise DatasetError(f"column {column!r}: non-finite value {text!r}", line)
    return value


def _real(text: str, column: str, line: int) -> float:
    value = _number(text, column, line)
    if value.imag != 0:
        raise DatasetError(f"column {column!r} must be real, got {text!r}", line)
    return value.real


def _derivative_columns(header: List[str]) -> int:
    missing = [c for c in BASE_COLUMNS if c not in header]
    if missing:
        raise DatasetError(f"header is missing column(s): {', '.join(missing)}", 1)
    value_columns = [c for c in header if c not in BASE_COLUMNS]
    expected = [f'f{i}' for i in range(len(value_columns))]
    if not value_columns or set(value_columns) != set(expected):
        raise DatasetError(f"value columns must be f0..fS, got {', '.join(value_columns) or 'none'}", 1)
    return len(value_columns)


def load_dataset(path: Union[str, Path]) -> Tuple[NodeSet, np.ndarray]:
    """
    Read a dataset CSV.

    Returns:
        Tuple of (nodes, f) with f in block order.

    Raises:
        DatasetError: Malformed rows, ragged derivative columns or non-finite values.
        DuplicateNodes: Two rows share the same node.
    """
    path = Path(path)
    try:
        handle = path.open(newline='', encoding='utf-8-sig')
    except OSError as exc:
        raise DatasetError(f"cannot open {path}: {exc}") from exc

    z, w, orders, blocks = [], [], [], []
    reader = None
    try:
        with handle:
            reader = csv.DictReader(handle)
            if reader.fieldnames is None:
                raise DatasetError("file is empty", 1)
            width = _derivative_columns([c.strip() for c in reader.fieldnames])
            reader.fieldnames = [c.strip() for c in reader.fieldnames]

            for row in reader:
                line = reader.line_num
                if None in row:
                    raise DatasetError("row has more fields than the header", line)
                if any(v is None for v in row.values()):
                    raise DatasetError("row has fewer fields than the header", line)
                s_value = _real(row['s'], 's', line)
                if s_value != int(s_value) or s_value < 0:
                    raise DatasetError(f"derivative order must be a non-negative integer, got {row['s']!r}", line)
                s = int(s_value)
                if s >= width:
                    raise DatasetError(f"order {s} needs columns up to f{s}", line)

                values = []
                for i in range(width):
                    text = row[f'f{i}'].strip()
                    if i <= s and not text:
                        raise DatasetError(f"ragged row: f{i} is empty but s = {s}", line)
                    if i > s and text:
                        raise DatasetError(f"ragged row: f{i} is set but s = {s}", line)
                    if i <= s:
                        values.append(_number(text, f'f{i}', line))

                z.append(complex(_real(row['z_re'], 'z_re', line), _real(row['z_im'], 'z_im', line)))
                w.append(_number(row['w'], 'w', line))
                orders.append(s)
                blocks.append(values[::-1])
    except (UnicodeDecodeError, csv.Error) as exc:
        line = reader.line_num if reader is not None and reader.line_num else None
        raise DatasetError(f"cannot read {path}: {exc}", line) from exc

    if not z:
        raise DatasetError("dataset has no rows")
    nodes = NodeSet(np.array(z), np.array(w), np.array(orders))
    f = np.array([value for block in blocks for value in block], dtype=np.complex128)
    logger.info("loaded %d nodes (%d data entries) from %s", nodes.size, nodes.dim, path)
    return nodes, f


def _format(value: complex) -> str:
    if value.imag == 0:
        return repr(float(value.real))
    return repr(complex(value))


def save_dataset(path: Union[str, Path], nodes: NodeSet, f) -> Path:
    """Write ``nodes`` and block-ordered ``f`` in the dataset CSV format."""
    f = np.asarray(f, dtype=np.complex128).reshape(-1)
    if f.shape[0] != nodes.dim:
        raise InputError(f"f has length {f.shape[0]} but the node set provides {nodes.dim} data entries")
    width = nodes.max_order + 1
    path = Path(path)
    with path.open('w', newline='', encoding='utf-8') as handle:
        writer = csv.writer(handle, lineterminator='\n')
        writer.writerow(BASE_COLUMNS + [f'f{i}' for i in range(width)])
        pos = 0
        for zj, wj, s in zip(nodes.z, nodes.w, nodes.orders):
            block = f[pos:pos + s + 1][::-1]
            pos += s + 1
            cells = [repr(float(zj.real)), repr(float(zj.imag)), _format(wj), str(int(s))]
            cells += [_format(v) for v in block] + [''] * (width - s - 1)
            writer.writerow(cells)
    return path


def load_poles(path: Union[str, Path]) -> np.ndarray:
    """
    Read one pole per line ('inf' for infinity, Python complex syntax otherwise).

    Blank lines and lines starting with '#' are skipped.
    """
    path = Path(path)
    try:
        lines = path.read_text(encoding='utf-8-sig').splitlines()
    except (OSError, UnicodeDecodeError) as exc:
        raise DatasetError(f"cannot read {path}: {exc}") from exc

    poles = []
    for line_number, text in enumerate(lines, start=1):
        text = text.strip()
        if not text or text.startswith('#'):
            continue
        try:
            value = complex(text)
        except ValueError:
            raise DatasetError(f"cannot parse {text!r} as a pole", line_number) from None
        if np.isnan(value):
            raise DatasetError(f"pole {text!r} is NaN", line_number)
        poles.append(value)
    if not poles:
        raise DatasetError(f"{path} lists no poles")
    return np.array(poles, dtype=np.complex128)
