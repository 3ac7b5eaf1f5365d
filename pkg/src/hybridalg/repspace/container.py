"""Export of vectors and matrices with their tensor-factor dims.

Text form::

    dims: 32 32 2
    1.0,0.0
    ...

one ``re,im`` pair per line in column-major order, floats written with
``repr`` so reading back is exact.  A file holds a vector when it has
``prod(dims)`` lines and a matrix when it has ``prod(dims)**2``.  The binary
form is an ``.npz`` archive carrying ``dims``, ``shape`` and the same
column-major ``data``.
"""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np

from .hybrid import HybridDensity, HybridOperator, HybridVector

__all__ = ["save_text", "load_text", "save_binary", "load_binary"]


def _unpack(obj, dims):
    if isinstance(obj, HybridVector):
        return obj.dims, obj.amplitudes
    if isinstance(obj, (HybridOperator, HybridDensity)):
        return obj.dims, obj.matrix
    arr = np.asarray(obj)
    if dims is None:
        dims = (arr.shape[0],)
    return tuple(int(d) for d in dims), arr


def save_text(path, obj, dims=None) -> None:
    dims, arr = _unpack(obj, dims)
    data = np.asarray(arr, dtype=complex).reshape(-1, order="F")
    lines = ["dims: " + " ".join(str(d) for d in dims)]
    lines.extend(f"{float(z.real)!r},{float(z.imag)!r}" for z in data)
    Path(path).write_text("\n".join(lines) + "\n")


def load_text(path) -> tuple[tuple[int, ...], np.ndarray]:
    """Return ``(dims, array)``; the array is 1-D or square."""
    lines = [ln.strip() for ln in Path(path).read_text().splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("dims:"):
        raise ValueError(f"{path}: missing 'dims:' header")
    dims = tuple(int(x) for x in lines[0][5:].split())
    values = []
    for lineno, ln in enumerate(lines[1:], start=2):
        try:
            re_, im_ = ln.split(",")
            values.append(complex(float(re_), float(im_)))
        except ValueError as exc:
            raise ValueError(f"{path}:{lineno}: bad entry {ln!r}") from exc
    data = np.array(values, dtype=complex)
    return dims, _shape(data, dims, path)


def _shape(data: np.ndarray, dims, path) -> np.ndarray:
    d = math.prod(dims)
    if data.size == d:
        return data
    if data.size == d * d:
        return data.reshape((d, d), order="F")
    raise ValueError(f"{path}: {data.size} entries fit neither a vector nor a matrix over dims {dims}")


def save_binary(path, obj, dims=None) -> None:
    dims, arr = _unpack(obj, dims)
    arr = np.asarray(arr, dtype=complex)
    with open(path, "wb") as fh:
        np.savez(fh, dims=np.array(dims, dtype=np.int64), shape=np.array(arr.shape, dtype=np.int64),
                 data=arr.reshape(-1, order="F"))


def load_binary(path) -> tuple[tuple[int, ...], np.ndarray]:
    with np.load(path) as z:
        dims = tuple(int(d) for d in z["dims"])
        shape = tuple(int(s) for s in z["shape"])
        data = z["data"].reshape(shape, order="F")
    return dims, data
