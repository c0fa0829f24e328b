"""Hill-cipher layer: a 2x2 byte matrix expands into a self-invertible 4x4
block matrix that encrypts and decrypts images in ECB fashion.

Self-invertibility makes encryption and decryption the same multiply, but
it also forces structure: every block of the form (p, p, p, p) is a fixed
point for every key, and for every plaintext/ciphertext block pair
c2 - c0 = p0 - p2 and c3 - c1 = p1 - p3 (mod 256) regardless of the key.
The attack module leans on both facts.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import Block, Mat2, Mat4, mat4_vec_mod256
from .imagekit import BadDimensionsError, GrayImage, blocks_of, unblocks


@dataclass(frozen=True)
class HillKey:
    """The 2x2 matrix k and its expanded self-invertible 4x4 matrix km."""

    k: Mat2
    km: Mat4

    @property
    def key_hex(self) -> str:
        """Canonical 4-byte encoding k11 k12 k21 k22 as 8 hex digits."""
        (k11, k12), (k21, k22) = self.k
        return f"{k11:02x}{k12:02x}{k21:02x}{k22:02x}"

    @classmethod
    def from_hex(cls, text: str) -> "HillKey":
        text = text.strip().lower()
        if len(text) != 8:
            raise ValueError("hill key must be 8 hex digits (k11 k12 k21 k22)")
        vals = [int(text[i : i + 2], 16) for i in range(0, 8, 2)]
        return expand_key(((vals[0], vals[1]), (vals[2], vals[3])))


def expand_key(k: Mat2) -> HillKey:
    """Assemble the block matrix [[K, I-K], [I+K, -K]] mod 256.

    The expansion squares to the identity for every K, so one matrix both
    encrypts and decrypts (and the effective key is just the 4 bytes of K).
    """
    (k11, k12), (k21, k22) = ((v % 256 for v in row) for row in k)
    key = ((k11, k12), (k21, k22))
    km = (
        (k11, k12, (1 - k11) % 256, (-k12) % 256),
        (k21, k22, (-k21) % 256, (1 - k22) % 256),
        ((1 + k11) % 256, k12, (-k11) % 256, (-k12) % 256),
        (k21, (1 + k22) % 256, (-k21) % 256, (-k22) % 256),
    )
    return HillKey(k=key, km=km)


def encrypt_block(key: HillKey, block: Block) -> Block:
    """Single-block transform; scalar path used by the attack tooling."""
    return mat4_vec_mod256(key.km, block)


def _require_even_dims(img: GrayImage) -> None:
    if img.width % 2 or img.height % 2:
        raise BadDimensionsError(
            f"{img.width}x{img.height}: both dimensions must be even"
        )


def ecchc_encrypt(img: GrayImage, key: HillKey) -> GrayImage:
    """ECB encryption: every canonical block is multiplied by km mod 256."""
    _require_even_dims(img)
    blocks = blocks_of(img).astype(np.int64)
    km = np.array(key.km, dtype=np.int64)
    out = (blocks @ km.T) % 256
    return unblocks(out.astype(np.uint8), img.width, img.height)


def ecchc_decrypt(img: GrayImage, key: HillKey) -> GrayImage:
    """Identical multiply: km is its own inverse mod 256."""
    return ecchc_encrypt(img, key)
