"""The deliberately weak cipher: a fixed keyless core transform behind a
one-byte key.

Per block the cipher computes  C_i = CT(P_i ^ i ^ ((k ^ lsb(i)) << 24))
with the block counter i starting at 1.  A block (p0, p1, p2, p3) maps to
a 32-bit word with p0 as the most significant byte, so the key only ever
touches byte 0 of each block; bytes 1..3 are masked by the public counter
alone.  CT substitutes bytes 0, 1 and 3 through the 8-bit S-box (byte 2
passes through) and multiplies by a fixed circulant matrix over GF(2^8).
Both pieces are the standard byte-substitution and column-mix primitives;
neither depends on the key, so anyone can invert CT.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import Block, gf_inv, gf_mul
from .imagekit import BadDimensionsError, GrayImage, blocks_of, unblocks

MIX_ROWS = ((2, 3, 1, 1), (1, 2, 3, 1), (1, 1, 2, 3), (3, 1, 1, 2))
MIX_INV_ROWS = (
    (0x0E, 0x0B, 0x0D, 0x09),
    (0x09, 0x0E, 0x0B, 0x0D),
    (0x0D, 0x09, 0x0E, 0x0B),
    (0x0B, 0x0D, 0x09, 0x0E),
)


@dataclass(frozen=True)
class SBox:
    forward: tuple[int, ...]
    inverse: tuple[int, ...]


@dataclass(frozen=True)
class ColumnMatrix:
    m: tuple[tuple[int, ...], ...]
    m_inv: tuple[tuple[int, ...], ...]


def _rotl8(x: int, n: int) -> int:
    return ((x << n) | (x >> (8 - n))) & 0xFF


def build_sbox() -> SBox:
    """Field inversion (0 mapped to 0) followed by the affine bit mix."""
    forward = []
    for x in range(256):
        b = gf_inv(x) if x else 0
        forward.append(
            b ^ _rotl8(b, 1) ^ _rotl8(b, 2) ^ _rotl8(b, 3) ^ _rotl8(b, 4) ^ 0x63
        )
    inverse = [0] * 256
    for x, s in enumerate(forward):
        inverse[s] = x
    return SBox(forward=tuple(forward), inverse=tuple(inverse))


def column_matrix() -> ColumnMatrix:
    return ColumnMatrix(m=MIX_ROWS, m_inv=MIX_INV_ROWS)


_SBOX = build_sbox()
_SB = np.array(_SBOX.forward, dtype=np.uint8)
_SB_INV = np.array(_SBOX.inverse, dtype=np.uint8)

# One 256-entry product table per distinct matrix coefficient.
_GFTAB = {
    c: np.array([gf_mul(c, x) for x in range(256)], dtype=np.uint8)
    for c in (1, 2, 3, 0x09, 0x0B, 0x0D, 0x0E)
}


def ct(p: Block) -> Block:
    """Core transform of one block: S-box on bytes 0, 1, 3, then the
    circulant multiply over GF(2^8)."""
    s = _SBOX.forward
    v = (s[p[0]], s[p[1]], p[2], s[p[3]])
    out = []
    for row in MIX_ROWS:
        acc = 0
        for coef, x in zip(row, v):
            acc ^= gf_mul(coef, x)
        out.append(acc)
    return (out[0], out[1], out[2], out[3])


def ct_inv(c: Block) -> Block:
    """Inverse core transform: inverse matrix, then three inverse lookups."""
    w = []
    for row in MIX_INV_ROWS:
        acc = 0
        for coef, x in zip(row, c):
            acc ^= gf_mul(coef, x)
        w.append(acc)
    si = _SBOX.inverse
    return (si[w[0]], si[w[1]], w[2], si[w[3]])


def core_transform_blocks(blocks: np.ndarray) -> np.ndarray:
    """Vectorized ct over an (n, 4) uint8 array."""
    a0 = _SB[blocks[:, 0]]
    a1 = _SB[blocks[:, 1]]
    a2 = blocks[:, 2]
    a3 = _SB[blocks[:, 3]]
    t2, t3 = _GFTAB[2], _GFTAB[3]
    return np.stack(
        [
            t2[a0] ^ t3[a1] ^ a2 ^ a3,
            a0 ^ t2[a1] ^ t3[a2] ^ a3,
            a0 ^ a1 ^ t2[a2] ^ t3[a3],
            t3[a0] ^ a1 ^ a2 ^ t2[a3],
        ],
        axis=1,
    )


def core_inverse_blocks(blocks: np.ndarray) -> np.ndarray:
    """Vectorized ct_inv over an (n, 4) uint8 array."""
    c0, c1, c2, c3 = (blocks[:, j] for j in range(4))
    te, tb, td, t9 = _GFTAB[0x0E], _GFTAB[0x0B], _GFTAB[0x0D], _GFTAB[0x09]
    w0 = te[c0] ^ tb[c1] ^ td[c2] ^ t9[c3]
    w1 = t9[c0] ^ te[c1] ^ tb[c2] ^ td[c3]
    w2 = td[c0] ^ t9[c1] ^ te[c2] ^ tb[c3]
    w3 = tb[c0] ^ td[c1] ^ t9[c2] ^ te[c3]
    return np.stack([_SB_INV[w0], _SB_INV[w1], w2, _SB_INV[w3]], axis=1)


def counter_masks(n: int, key: int) -> np.ndarray:
    """Per-block 32-bit masks i ^ ((key ^ lsb(i)) << 24) as (n, 4) bytes,
    byte 0 most significant, i = 1..n.

    Block counts stay below 2^24 for any image this package handles, so
    byte 0 of the mask is exactly key ^ lsb(i) and bytes 1..3 are the low
    three bytes of i.
    """
    if not 0 <= key <= 255:
        raise ValueError("key must be a single byte")
    i = np.arange(1, n + 1, dtype=np.uint32)
    if n >= 1 << 24:
        raise BadDimensionsError("block counter would collide with the key byte")
    lsb = (i & 0xFF).astype(np.uint8)
    return np.stack(
        [
            np.uint8(key) ^ lsb,
            ((i >> 16) & 0xFF).astype(np.uint8),
            ((i >> 8) & 0xFF).astype(np.uint8),
            lsb,
        ],
        axis=1,
    )


def _require_blockable(img: GrayImage) -> None:
    if img.size % 4 != 0:
        raise BadDimensionsError(
            f"pixel count {img.size} is not a multiple of 4"
        )


def dwc_encrypt(img: GrayImage, key: int) -> GrayImage:
    """Counter-mask each block, then apply the core transform."""
    _require_blockable(img)
    blocks = blocks_of(img)
    masked = blocks ^ counter_masks(len(blocks), key)
    return unblocks(core_transform_blocks(masked), img.width, img.height)


def dwc_decrypt(img: GrayImage, key: int) -> GrayImage:
    """Invert the core transform, then strip the counter mask."""
    _require_blockable(img)
    blocks = blocks_of(img)
    unmasked = core_inverse_blocks(blocks) ^ counter_masks(len(blocks), key)
    return unblocks(unmasked, img.width, img.height)
