"""
PBM (P1/P4) and PGM (P2/P5) reading and writing.

Binary images are boolean arrays with True for PBM ink ("1"); grey images
are uint8 arrays.  Written files use this exact layout:

* header ``P4\\n<w> <h>\\n`` (PBM) or ``P5\\n<w> <h>\\n255\\n`` (PGM);
* P4 rows are packed MSB-first, each row padded to a whole byte with 0 bits;
* P5 is one byte per pixel, row-major;
* the text variants P1/P2 put one image row per line, values separated by
  single spaces.
"""
from __future__ import annotations

import os
import re

import numpy as np

from grainstat.exceptions import PNMParseError

_WS = b" \t\n\r\v\f"
_FORMATS = ("P1", "P2", "P4", "P5")


class _Header:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def _skip(self):
        data = self.data
        while self.pos < len(data):
            ch = data[self.pos:self.pos + 1]
            if ch == b"#":
                end = data.find(b"\n", self.pos)
                self.pos = len(data) if end < 0 else end + 1
            elif ch and ch in _WS:
                self.pos += 1
            else:
                break

    def integer(self, what: str) -> int:
        self._skip()
        m = re.compile(rb"\d+").match(self.data, self.pos)
        if not m:
            if self.pos >= len(self.data):
                raise PNMParseError(f"truncated header: missing {what}", self.pos)
            raise PNMParseError(f"expected {what}", self.pos)
        self.pos = m.end()
        return int(m.group())


def parse_pnm(data: bytes) -> np.ndarray:
    """Decode PBM/PGM bytes into a bool (PBM) or uint8 (PGM) array."""
    magic = data[:2].decode("latin-1")
    if magic not in _FORMATS:
        raise PNMParseError(f"unsupported or missing magic number {magic!r}", 0)
    head = _Header(data)
    head.pos = 2
    width = head.integer("width")
    height = head.integer("height")
    if width < 1 or height < 1:
        raise PNMParseError(f"image dimensions must be positive, got {width}x{height}", head.pos)
    if magic in ("P2", "P5"):
        head._skip()
        maxval_at = head.pos
        maxval = head.integer("maxval")
        if maxval != 255:
            raise PNMParseError(f"unsupported maxval {maxval} (only 255)", maxval_at)

    if magic in ("P4", "P5"):
        if head.pos >= len(data) or data[head.pos] not in _WS:
            raise PNMParseError("expected one whitespace byte before the raster", head.pos)
        start = head.pos + 1
        if magic == "P4":
            row_bytes = (width + 7) // 8
            need = row_bytes * height
            raw = data[start:start + need]
            if len(raw) < need:
                raise PNMParseError(f"truncated raster: need {need} bytes, got {len(raw)}", start + len(raw))
            bits = np.unpackbits(np.frombuffer(raw, np.uint8).reshape(height, row_bytes), axis=1)
            return bits[:, :width].astype(bool)
        need = width * height
        raw = data[start:start + need]
        if len(raw) < need:
            raise PNMParseError(f"truncated raster: need {need} bytes, got {len(raw)}", start + len(raw))
        return np.frombuffer(raw, np.uint8).reshape(height, width).copy()

    if magic == "P1":
        values = []
        pos = head.pos
        need = width * height
        while len(values) < need:
            while pos < len(data) and (data[pos] in _WS or data[pos] == ord("#")):
                if data[pos] == ord("#"):
                    end = data.find(b"\n", pos)
                    pos = len(data) if end < 0 else end
                pos += 1
            if pos >= len(data):
                raise PNMParseError(f"truncated raster: got {len(values)} of {need} pixels", pos)
            ch = data[pos]
            if ch not in (ord("0"), ord("1")):
                raise PNMParseError(f"bad PBM pixel {chr(ch)!r}", pos)
            values.append(ch == ord("1"))
            pos += 1
        return np.array(values, dtype=bool).reshape(height, width)

    values = []
    for _ in range(width * height):
        head._skip()
        at = head.pos
        try:
            v = head.integer("pixel value")
        except PNMParseError as exc:
            raise PNMParseError(
                f"truncated raster: got {len(values)} of {width * height} pixels", exc.offset
            ) from None
        if v > 255:
            raise PNMParseError(f"pixel value {v} exceeds maxval 255", at)
        values.append(v)
    return np.array(values, dtype=np.uint8).reshape(height, width)


def read_image(path: str | os.PathLike) -> np.ndarray:
    """Read a PBM or PGM file (plain or raw)."""
    with open(path, "rb") as fh:
        data = fh.read()
    try:
        return parse_pnm(data)
    except PNMParseError as exc:
        raise PNMParseError(f"{os.fspath(path)}: {exc}") from None


def encode_pnm(image, fmt: str | None = None) -> bytes:
    """Encode a bool image as PBM or a uint8 image as PGM."""
    image = np.asarray(image)
    if image.ndim != 2 or 0 in image.shape:
        raise ValueError(f"expected a non-empty 2-D image, got shape {image.shape}")
    binary = image.dtype == bool
    fmt = fmt or ("P4" if binary else "P5")
    if fmt not in _FORMATS:
        raise ValueError(f"unknown format {fmt!r}; expected one of {_FORMATS}")
    if binary != (fmt in ("P1", "P4")):
        kind = "binary" if binary else "grey"
        raise TypeError(f"cannot write a {kind} image as {fmt}")
    h, w = image.shape
    if fmt == "P4":
        return f"P4\n{w} {h}\n".encode() + np.packbits(image, axis=1).tobytes()
    if fmt == "P1":
        rows = (" ".join("1" if v else "0" for v in row) for row in image)
        return (f"P1\n{w} {h}\n" + "\n".join(rows) + "\n").encode()
    if not np.issubdtype(image.dtype, np.integer) or image.min() < 0 or image.max() > 255:
        raise ValueError("grey images must hold integer levels in [0, 255]")
    image = image.astype(np.uint8)
    if fmt == "P5":
        return f"P5\n{w} {h}\n255\n".encode() + image.tobytes()
    rows = (" ".join(str(int(v)) for v in row) for row in image)
    return (f"P2\n{w} {h}\n255\n" + "\n".join(rows) + "\n").encode()


def write_image(image, path: str | os.PathLike, fmt: str | None = None) -> None:
    """Write ``image`` to ``path``; raw variants (P4/P5) unless ``fmt`` says otherwise."""
    payload = encode_pnm(image, fmt)
    try:
        with open(path, "wb") as fh:
            fh.write(payload)
    except OSError as exc:
        raise OSError(f"cannot write image to {os.fspath(path)}: {exc.strerror}") from exc
