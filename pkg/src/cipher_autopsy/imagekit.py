"""Image container, bit-exact PGM I/O, the block codec both ciphers share,
and deterministic generators for the demonstration images.

The canonical block order is defined once, here: the raster is flattened
row-major and cut into consecutive, non-overlapping groups of 4 pixels.
Every cipher and attack in this package uses this codec, so a plaintext
block index means the same thing everywhere.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class PgmError(ValueError):
    """Base class for PGM codec failures."""


class MalformedHeaderError(PgmError):
    pass


class UnsupportedMaxvalError(PgmError):
    pass


class TruncatedDataError(PgmError):
    pass


class BadDimensionsError(ValueError):
    """Pixel count not blockable (or dimensions outside a cipher's domain)."""


class BadCellSizeError(ValueError):
    """Checkerboard cell must be a positive multiple of 4 dividing both sides."""


@dataclass(frozen=True, eq=False)
class GrayImage:
    """8-bit grayscale raster; pixels shape (height, width), read-only."""

    pixels: np.ndarray

    def __post_init__(self):
        arr = np.ascontiguousarray(self.pixels, dtype=np.uint8)
        if arr.ndim != 2:
            raise ValueError("pixels must be a 2-D array")
        arr.flags.writeable = False
        object.__setattr__(self, "pixels", arr)

    @classmethod
    def from_bytes(cls, data: bytes, width: int, height: int) -> "GrayImage":
        if len(data) != width * height:
            raise ValueError("pixel payload does not match dimensions")
        return cls(np.frombuffer(data, dtype=np.uint8).reshape(height, width))

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def size(self) -> int:
        return self.pixels.size

    def tobytes(self) -> bytes:
        return self.pixels.tobytes()

    def __eq__(self, other):
        if not isinstance(other, GrayImage):
            return NotImplemented
        return self.pixels.shape == other.pixels.shape and bool(
            np.array_equal(self.pixels, other.pixels)
        )

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self):
        return f"GrayImage({self.width}x{self.height})"


def blocks_of(img: GrayImage) -> np.ndarray:
    """Split into the canonical block sequence: (n, 4) uint8 array."""
    if img.size % 4 != 0:
        raise BadDimensionsError(
            f"pixel count {img.size} is not a multiple of 4"
        )
    return img.pixels.reshape(-1, 4)


def unblocks(blocks: np.ndarray, width: int, height: int) -> GrayImage:
    """Inverse of blocks_of: reassemble the raster in order."""
    flat = np.ascontiguousarray(blocks, dtype=np.uint8).reshape(-1)
    if flat.size != width * height:
        raise BadDimensionsError("block payload does not match dimensions")
    return GrayImage(flat.reshape(height, width))


# ---------------------------------------------------------------------------
# PGM codec: binary P5 and ASCII P2, maxval 255 only, comments tolerated.
# ---------------------------------------------------------------------------

_WHITESPACE = b" \t\n\r\x0b\x0c"


def _header_tokens(data: bytes, count: int) -> tuple[list[bytes], int]:
    """Read `count` whitespace-separated tokens, skipping '#' comments.

    Returns the tokens and the offset one byte past the whitespace byte
    that terminated the last token.
    """
    tokens: list[bytes] = []
    pos = 0
    while len(tokens) < count:
        while pos < len(data) and data[pos : pos + 1] in _WHITESPACE:
            pos += 1
        if pos < len(data) and data[pos : pos + 1] == b"#":
            end = data.find(b"\n", pos)
            if end < 0:
                raise MalformedHeaderError("unterminated comment")
            pos = end + 1
            continue
        start = pos
        while pos < len(data) and data[pos : pos + 1] not in _WHITESPACE:
            pos += 1
        if start == pos:
            raise MalformedHeaderError("truncated header")
        tokens.append(data[start:pos])
        pos += 1  # consume the single whitespace byte ending the token
    return tokens, pos


def read_pgm(data: bytes) -> GrayImage:
    """Parse a P5 (binary) or P2 (ASCII) PGM with maxval 255."""
    magic, _ = _header_tokens(data, 1)
    if magic[0] not in (b"P5", b"P2"):
        raise MalformedHeaderError(f"not a PGM: magic {magic[0]!r}")
    tokens, offset = _header_tokens(data, 4)
    try:
        width, height, maxval = (int(t) for t in tokens[1:4])
    except ValueError as exc:
        raise MalformedHeaderError("non-numeric header field") from exc
    if width <= 0 or height <= 0:
        raise MalformedHeaderError("non-positive dimensions")
    if maxval != 255:
        raise UnsupportedMaxvalError(f"maxval {maxval} unsupported, need 255")
    n = width * height
    if tokens[0] == b"P5":
        raw = data[offset : offset + n]
        if len(raw) < n:
            raise TruncatedDataError(f"expected {n} pixels, got {len(raw)}")
        return GrayImage.from_bytes(raw, width, height)
    body = data[offset:]
    # ASCII samples; comment lines may appear between values too.
    clean = b"\n".join(
        line.split(b"#", 1)[0] for line in body.splitlines()
    )
    fields = clean.split()
    if len(fields) < n:
        raise TruncatedDataError(f"expected {n} samples, got {len(fields)}")
    try:
        values = [int(f) for f in fields[:n]]
    except ValueError as exc:
        raise MalformedHeaderError("non-numeric sample") from exc
    if any(v < 0 or v > 255 for v in values):
        raise MalformedHeaderError("sample out of range for maxval 255")
    return GrayImage.from_bytes(bytes(values), width, height)


def write_pgm(img: GrayImage) -> bytes:
    """Emit canonical binary P5: single separators, no comments."""
    header = f"P5\n{img.width} {img.height}\n255\n".encode("ascii")
    return header + img.tobytes()


def load_pgm(path) -> GrayImage:
    with open(path, "rb") as fh:
        return read_pgm(fh.read())


def save_pgm(img: GrayImage, path) -> None:
    with open(path, "wb") as fh:
        fh.write(write_pgm(img))


# ---------------------------------------------------------------------------
# Deterministic generators.
# ---------------------------------------------------------------------------


def gen_checkerboard(cell: int = 32, width: int = 256, height: int = 256) -> GrayImage:
    """Alternating 0/255 cells, top-left black.

    The cell width must be a multiple of 4 so every canonical block falls
    inside one cell; that is what makes the board invariant under the
    Hill-cipher layer.
    """
    if cell <= 0 or cell % 4 != 0 or width % cell != 0 or height % cell != 0:
        raise BadCellSizeError(
            f"cell {cell} must be a positive multiple of 4 dividing {width}x{height}"
        )
    y, x = np.mgrid[:height, :width]
    board = (((x // cell) + (y // cell)) % 2) * np.uint8(255)
    return GrayImage(board.astype(np.uint8))


def gen_constant(value: int, width: int = 256, height: int = 256) -> GrayImage:
    """Single-color fill."""
    if not 0 <= value <= 255:
        raise ValueError("pixel value out of range")
    return GrayImage(np.full((height, width), value, dtype=np.uint8))


def gen_noise(seed: int, width: int = 256, height: int = 256) -> GrayImage:
    """Seeded uniform bytes."""
    rng = np.random.default_rng(seed)
    return GrayImage(rng.integers(0, 256, size=(height, width), dtype=np.uint8))


_INK = (0, 96, 176)  # three ink levels on a white background


def gen_drawing(seed: int = 0, width: int = 256, height: int = 256) -> GrayImage:
    """Synthetic line drawing: white background, a few filled shapes and
    1-pixel strokes in at most three gray levels.

    Mimics the uniform-color-area images that defeat codebook-style
    encryption; the background dominates (well over 90% of pixels).
    """
    rng = np.random.default_rng(seed)
    canvas = np.full((height, width), 255, dtype=np.uint8)

    # two filled rectangles
    for _ in range(2):
        w = int(rng.integers(width // 10, width // 5))
        h = int(rng.integers(height // 12, height // 6))
        x0 = int(rng.integers(0, width - w))
        y0 = int(rng.integers(0, height - h))
        canvas[y0 : y0 + h, x0 : x0 + w] = _INK[int(rng.integers(len(_INK)))]

    # one filled ellipse
    cx = int(rng.integers(width // 4, 3 * width // 4))
    cy = int(rng.integers(height // 4, 3 * height // 4))
    rx = int(rng.integers(width // 16, width // 9))
    ry = int(rng.integers(height // 16, height // 9))
    yy, xx = np.mgrid[:height, :width]
    mask = ((xx - cx) / rx) ** 2 + ((yy - cy) / ry) ** 2 <= 1.0
    canvas[mask] = _INK[int(rng.integers(len(_INK)))]

    # a handful of 1-pixel strokes
    for _ in range(6):
        ink = _INK[int(rng.integers(len(_INK)))]
        if rng.integers(2):
            r = int(rng.integers(height))
            x0, x1 = sorted(rng.integers(0, width, size=2))
            canvas[r, x0:x1] = ink
        else:
            c = int(rng.integers(width))
            y0, y1 = sorted(rng.integers(0, height, size=2))
            canvas[y0:y1, c] = ink

    return GrayImage(canvas)


def gen_photo(seed: int = 0, width: int = 256, height: int = 256) -> GrayImage:
    """Seeded stand-in for a photograph: smooth low-frequency shading plus
    mild pixel noise, values spread around mid-gray.

    Used wherever a test needs photograph-like redundancy without shipping
    copyrighted test images.
    """
    rng = np.random.default_rng(seed)
    yy, xx = np.mgrid[:height, :width].astype(np.float64)
    phase_x = rng.uniform(0, 2 * np.pi)
    phase_y = rng.uniform(0, 2 * np.pi)
    # Amplitudes picked so the value spread around mid-gray lands in the
    # same UACI-against-noise regime as the usual photographic test images
    # (about 28%), while neighboring pixels stay within a few gray levels.
    base = (
        128.0
        + 85.0
        * np.sin(2 * np.pi * xx / width + phase_x)
        * np.cos(2 * np.pi * yy / height + phase_y)
        + 44.0 * (xx / width - 0.5)
        + 30.0 * (yy / height - 0.5)
    )
    noise = rng.normal(0.0, 9.0, size=(height, width))
    return GrayImage(np.clip(base + noise, 0, 255).astype(np.uint8))
