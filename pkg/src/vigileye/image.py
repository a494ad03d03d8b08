"""Grayscale image container conventions and 8-bit file I/O.

Internally an image is a row-major 2-D float64 array.  Pixel values are in
[0, 1] at every I/O boundary; intermediate products of the pipeline (band-pass
residuals, accumulation maps) are allowed to leave that range and are only
brought back to [0, 1] where an operation's contract says so.

Coordinates follow the screen convention used throughout the package:
``x`` is the column index growing rightward, ``y`` the row index growing
downward.
"""

import io
from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError

from .errors import ImageFormatError, InvalidParameter

GrayImage = np.ndarray


def as_image(data) -> np.ndarray:
    """Coerce to a 2-D float64 array, rejecting anything else."""
    a = np.asarray(data, dtype=np.float64)
    if a.ndim != 2 or a.size == 0:
        raise InvalidParameter(f"expected a non-empty 2-D image, got shape {a.shape}")
    return a


def validate_unit(img) -> np.ndarray:
    """Check the unit-range invariant that holds on I/O boundaries."""
    a = as_image(img)
    if not np.all(np.isfinite(a)):
        raise InvalidParameter("image contains non-finite pixels")
    if a.min() < 0.0 or a.max() > 1.0:
        raise InvalidParameter("image pixels fall outside [0, 1]")
    return a


def to_u8(img) -> np.ndarray:
    a = np.clip(as_image(img), 0.0, 1.0)
    return np.rint(a * 255.0).astype(np.uint8)


def from_u8(raw) -> np.ndarray:
    return np.asarray(raw, dtype=np.float64) / 255.0


def _next_token(data: bytes, pos: int):
    n = len(data)
    while pos < n:
        ch = data[pos:pos + 1]
        if ch == b"#":
            while pos < n and data[pos:pos + 1] not in (b"\n", b"\r"):
                pos += 1
        elif ch.isspace():
            pos += 1
        else:
            break
    start = pos
    while pos < n and not data[pos:pos + 1].isspace():
        pos += 1
    if start == pos:
        raise ImageFormatError("truncated PGM header")
    return data[start:pos], pos


def read_pgm(path) -> np.ndarray:
    """Read a binary (P5) 8-bit PGM file into a unit-range image."""
    data = Path(path).read_bytes()
    magic, pos = _next_token(data, 0)
    if magic != b"P5":
        raise ImageFormatError(f"not a binary PGM file: magic {magic!r}")
    fields = []
    for _ in range(3):
        tok, pos = _next_token(data, pos)
        try:
            fields.append(int(tok))
        except ValueError:
            raise ImageFormatError(f"bad PGM header token {tok!r}") from None
    cols, rows, maxval = fields
    if cols < 1 or rows < 1:
        raise ImageFormatError("non-positive PGM dimensions")
    if not 0 < maxval < 256:
        raise ImageFormatError(f"unsupported PGM maxval {maxval}, expected 8-bit")
    pos += 1  # single whitespace byte separates header from raster
    raster = data[pos:pos + rows * cols]
    if len(raster) < rows * cols:
        raise ImageFormatError("PGM raster shorter than header promises")
    pixels = np.frombuffer(raster, dtype=np.uint8).reshape(rows, cols)
    return np.asarray(pixels, dtype=np.float64) / maxval


def write_pgm(path, img) -> None:
    u8 = to_u8(img)
    rows, cols = u8.shape
    header = f"P5\n{cols} {rows}\n255\n".encode("ascii")
    Path(path).write_bytes(header + u8.tobytes())


def _read_png(path) -> np.ndarray:
    try:
        with Image.open(io.BytesIO(Path(path).read_bytes())) as im:
            gray = im.convert("L")
            return from_u8(np.asarray(gray, dtype=np.uint8))
    except (UnidentifiedImageError, OSError, ValueError) as exc:
        raise ImageFormatError(f"cannot decode image {path}: {exc}") from exc


def load_image(path) -> np.ndarray:
    """Load a PGM (P5) or PNG grayscale image; anything else is rejected."""
    p = Path(path)
    try:
        head = p.open("rb").read(8)
    except OSError as exc:
        raise ImageFormatError(f"cannot read {path}: {exc}") from exc
    if head.startswith(b"P5"):
        return read_pgm(p)
    if head.startswith(b"\x89PNG"):
        return _read_png(p)
    raise ImageFormatError(f"{path}: unsupported format (want PGM P5 or PNG)")
