"""File formats: 8-bit PGM/PNG images and lossless float64 dumps.

Quantized image output clamps to [0, 255] and rounds half away from zero,
so a float dump written next to an image is the authoritative record of a
solver result.
"""

import hashlib
import struct

import numpy as np
from PIL import Image

from .raster import as_raster

FLOAT_MAGIC = b"NLTVF1"
FLOAT_SUFFIX = ".nltvf"


def quantize(img):
    """Clamp to [0, 255] and round half away from zero to uint8."""
    img = as_raster(img)
    return np.floor(np.clip(img, 0.0, 255.0) + 0.5).astype(np.uint8)


def _read_pgm(path):
    with open(path, "rb") as fh:
        data = fh.read()
    if not data.startswith(b"P5"):
        raise ValueError(f"{path}: not a binary PGM (P5) file")
    # Header tokens may be separated by arbitrary whitespace and # comments.
    pos = 2
    fields = []
    while len(fields) < 3:
        while pos < len(data) and data[pos : pos + 1].isspace():
            pos += 1
        if pos < len(data) and data[pos : pos + 1] == b"#":
            while pos < len(data) and data[pos : pos + 1] != b"\n":
                pos += 1
            continue
        start = pos
        while pos < len(data) and not data[pos : pos + 1].isspace():
            pos += 1
        if start == pos:
            raise ValueError(f"{path}: truncated PGM header")
        fields.append(int(data[start:pos]))
    pos += 1  # single whitespace byte after maxval
    cols, rows, maxval = fields
    if maxval != 255:
        raise ValueError(f"{path}: only 8-bit PGM supported, maxval={maxval}")
    payload = data[pos : pos + rows * cols]
    if len(payload) != rows * cols:
        raise ValueError(f"{path}: payload is {len(payload)} bytes, expected {rows * cols}")
    return np.frombuffer(payload, dtype=np.uint8).reshape(rows, cols).astype(np.float64)


def _write_pgm(path, img8):
    rows, cols = img8.shape
    with open(path, "wb") as fh:
        fh.write(b"P5\n%d %d\n255\n" % (cols, rows))
        fh.write(img8.tobytes())


def read_image(path):
    """Read an 8-bit grayscale image as float64, byte values kept exactly."""
    path = str(path)
    if path.endswith(".pgm"):
        return _read_pgm(path)
    with Image.open(path) as im:
        if im.mode != "L":
            raise ValueError(f"{path}: expected 8-bit grayscale, got mode {im.mode!r}")
        return np.asarray(im, dtype=np.uint8).astype(np.float64)


def write_image(path, img):
    """Quantize and write as PGM or PNG depending on the suffix."""
    path = str(path)
    img8 = quantize(img)
    if path.endswith(".pgm"):
        _write_pgm(path, img8)
    else:
        Image.fromarray(img8, mode="L").save(path)


def write_floats(path, arr):
    """Dump a float64 raster losslessly (magic, u32 dims, little-endian payload)."""
    arr = as_raster(arr)
    rows, cols = arr.shape
    with open(path, "wb") as fh:
        fh.write(FLOAT_MAGIC)
        fh.write(struct.pack("<II", rows, cols))
        fh.write(arr.astype("<f8", copy=False).tobytes(order="C"))


def read_floats(path):
    with open(path, "rb") as fh:
        data = fh.read()
    if data[: len(FLOAT_MAGIC)] != FLOAT_MAGIC:
        raise ValueError(f"{path}: bad magic, not a {FLOAT_MAGIC.decode()} dump")
    rows, cols = struct.unpack_from("<II", data, len(FLOAT_MAGIC))
    start = len(FLOAT_MAGIC) + 8
    expected = rows * cols * 8
    payload = data[start : start + expected]
    if len(payload) != expected:
        raise ValueError(f"{path}: payload is {len(payload)} bytes, expected {expected}")
    return np.frombuffer(payload, dtype="<f8").reshape(rows, cols).astype(np.float64)


def write_spectrum(stem, spectrum):
    """Store a complex spectrum as two float dumps: <stem>.real/.imag + suffix."""
    spectrum = np.asarray(spectrum)
    real_path = f"{stem}.real{FLOAT_SUFFIX}"
    imag_path = f"{stem}.imag{FLOAT_SUFFIX}"
    write_floats(real_path, np.ascontiguousarray(spectrum.real))
    write_floats(imag_path, np.ascontiguousarray(spectrum.imag))
    return real_path, imag_path


def read_spectrum(stem):
    real = read_floats(f"{stem}.real{FLOAT_SUFFIX}")
    imag = read_floats(f"{stem}.imag{FLOAT_SUFFIX}")
    return real + 1j * imag


def read_field(path):
    """Read either an 8-bit image or a float dump, based on the suffix."""
    path = str(path)
    if path.endswith(FLOAT_SUFFIX):
        return read_floats(path)
    return read_image(path)


def sha256_of(path):
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()
