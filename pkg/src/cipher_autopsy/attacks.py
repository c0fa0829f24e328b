"""Executable form of every weakness in the two ciphers: known-plaintext
key recovery and brute force against the Hill layer, exhaustive key search
and keyless partial recovery against the weak counter cipher, plus the
fixed-point census and the duplicate-block (codebook leak) detector.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from enum import Enum
from itertools import product
from typing import Callable, Sequence

import numpy as np

from .algebra import (
    Block,
    InconsistentError,
    UnderdeterminedError,
    solve_k_rows_mod256,
)
from .dwc import core_inverse_blocks, counter_masks, dwc_decrypt
from .ecchc import HillKey, encrypt_block, expand_key
from .imagekit import GrayImage, blocks_of, unblocks
from .metrics import DimensionMismatchError


class KeyNotFoundError(ValueError):
    """Exhaustive search finished with no matching key."""

    def __init__(self, message: str, candidates_tested: int = 0):
        super().__init__(message)
        self.candidates_tested = candidates_tested


class AttackStatus(str, Enum):
    UNIQUE = "unique"
    AMBIGUOUS = "ambiguous"
    INCONSISTENT = "inconsistent"


@dataclass(frozen=True)
class KpaSample:
    plaintext: Block
    ciphertext: Block


@dataclass(frozen=True)
class AttackOutcome:
    status: AttackStatus
    recovered_key: str | None  # canonical hex, present only when unique
    candidates_tested: int
    elapsed_s: float

    def __post_init__(self):
        assert (self.recovered_key is not None) == (
            self.status is AttackStatus.UNIQUE
        )

    def to_json_dict(self) -> dict:
        return {
            "status": self.status.value,
            "key": self.recovered_key,
            "candidates_tested": self.candidates_tested,
            "elapsed_ms": round(self.elapsed_s * 1000.0, 3),
        }


@dataclass(frozen=True)
class KeyMask:
    """Per-byte known/unknown pattern over (k11, k12, k21, k22).

    Text form is 8 hex digits with '??' marking an unknown byte, e.g.
    'ab??cd??'.
    """

    values: tuple[int | None, int | None, int | None, int | None]

    @classmethod
    def parse(cls, text: str) -> "KeyMask":
        text = text.strip().lower()
        if len(text) != 8:
            raise ValueError("mask must be 8 characters (4 byte slots)")
        slots = []
        for i in range(0, 8, 2):
            chunk = text[i : i + 2]
            slots.append(None if chunk == "??" else int(chunk, 16))
        return cls(values=(slots[0], slots[1], slots[2], slots[3]))

    @classmethod
    def all_unknown(cls) -> "KeyMask":
        return cls(values=(None, None, None, None))

    def format(self) -> str:
        return "".join("??" if v is None else f"{v:02x}" for v in self.values)

    @property
    def unknown_positions(self) -> tuple[int, ...]:
        return tuple(i for i, v in enumerate(self.values) if v is None)

    @property
    def candidate_count(self) -> int:
        return 256 ** len(self.unknown_positions)


# ---------------------------------------------------------------------------
# Known-plaintext attack on the Hill layer.
# ---------------------------------------------------------------------------


def kpa_recover_hill_key(samples: Sequence[KpaSample]) -> AttackOutcome:
    """Recover the 2x2 key from plaintext/ciphertext block pairs.

    Each block pair gives two usable equations: with a = p0 - p2 and
    b = p1 - p3 (mod 256), the top two rows of the expanded matrix say
    k11*a + k12*b = c0 - p2 and k21*a + k22*b = c1 - p3.  Rows three and
    four repeat the same left-hand sides, so one block can never pin all
    four unknowns; at least two blocks with an odd pair determinant are
    needed.  The recovered key is verified against every sample.
    """
    start = time.perf_counter()
    if not samples:
        raise ValueError("need at least one sample")
    eqs_top, eqs_bot = [], []
    for s in samples:
        p, c = s.plaintext, s.ciphertext
        a = (p[0] - p[2]) % 256
        b = (p[1] - p[3]) % 256
        eqs_top.append((a, b, (c[0] - p[2]) % 256))
        eqs_bot.append((a, b, (c[1] - p[3]) % 256))

    def outcome(status, key_hex=None, tested=0):
        return AttackOutcome(
            status=status,
            recovered_key=key_hex,
            candidates_tested=tested,
            elapsed_s=time.perf_counter() - start,
        )

    if len(samples) < 2:
        return outcome(AttackStatus.AMBIGUOUS)
    try:
        k11, k12 = solve_k_rows_mod256(eqs_top)
        k21, k22 = solve_k_rows_mod256(eqs_bot)
    except UnderdeterminedError:
        return outcome(AttackStatus.AMBIGUOUS)
    except InconsistentError:
        return outcome(AttackStatus.INCONSISTENT)
    key = expand_key(((k11, k12), (k21, k22)))
    for s in samples:
        if encrypt_block(key, s.plaintext) != tuple(s.ciphertext):
            # The solved rows fit, but rows three/four of some sample do
            # not: the pairs cannot come from any single key.
            return outcome(AttackStatus.INCONSISTENT, tested=1)
    return outcome(AttackStatus.UNIQUE, key_hex=key.key_hex, tested=1)


# ---------------------------------------------------------------------------
# Brute force against the Hill layer.
# ---------------------------------------------------------------------------


def _hill_filter_data(pblocks: np.ndarray, cblocks: np.ndarray, limit: int = 4):
    """Pick up to `limit` informative blocks (difference pair nonzero) and
    return their filter coefficients a, b and targets t0, t1."""
    a_all = pblocks[:, 0] - pblocks[:, 2]
    b_all = pblocks[:, 1] - pblocks[:, 3]
    t0_all = cblocks[:, 0] - pblocks[:, 2]
    t1_all = cblocks[:, 1] - pblocks[:, 3]
    informative = np.flatnonzero((a_all != 0) | (b_all != 0))
    if informative.size > limit:
        step = informative.size // limit
        informative = informative[::step][:limit]
    return [
        (a_all[i], b_all[i], t0_all[i], t1_all[i]) for i in informative
    ]


def _verify_hill_key(
    cand: tuple[int, int, int, int], pblocks64: np.ndarray, cblocks: np.ndarray
) -> bool:
    key = expand_key(((cand[0], cand[1]), (cand[2], cand[3])))
    km = np.array(key.km, dtype=np.int64)
    out = (pblocks64 @ km.T) % 256
    return bool(np.array_equal(out.astype(np.uint8), cblocks))


def brute_force_hill(
    plain: GrayImage,
    cipher: GrayImage,
    mask: KeyMask | None = None,
    *,
    verify_unique: bool = True,
    allow_full_search: bool = False,
) -> AttackOutcome:
    """Enumerate every key consistent with the mask and test it against
    the image pair.

    Candidates are scanned in ascending (k11, k12, k21, k22) order, pass
    through a cheap per-block filter built from a few informative blocks,
    and survivors are verified against the whole image.  With
    verify_unique the scan keeps going after a hit and downgrades the
    result to ambiguous as soon as a second key matches (a plaintext made
    of fixed points matches every key, for example).  The unmasked
    4-unknown search walks all 2^32 candidates and is refused unless
    allow_full_search is set; expect minutes, not hours, but never run it
    in a test suite.

    Raises KeyNotFoundError when no candidate matches.
    """
    start = time.perf_counter()
    if plain.pixels.shape != cipher.pixels.shape:
        raise DimensionMismatchError("plaintext/ciphertext size mismatch")
    mask = mask or KeyMask.all_unknown()
    if len(mask.unknown_positions) == 4 and not allow_full_search:
        raise ValueError(
            "full 2^32 search refused; pass allow_full_search=True"
        )
    pblocks = blocks_of(plain)
    cblocks = blocks_of(cipher)
    pblocks64 = pblocks.astype(np.int64)
    filters = _hill_filter_data(pblocks, cblocks)

    unknown = mask.unknown_positions
    inner = unknown[-2:]
    outer = unknown[:-2]
    if len(inner) == 2:
        hi, lo = np.meshgrid(
            np.arange(256, dtype=np.uint8),
            np.arange(256, dtype=np.uint8),
            indexing="ij",
        )
        inner_grids = {inner[0]: hi.ravel(), inner[1]: lo.ravel()}
        chunk = 65536
    elif len(inner) == 1:
        inner_grids = {inner[0]: np.arange(256, dtype=np.uint8)}
        chunk = 256
    else:
        inner_grids = {}
        chunk = 1

    matches: list[tuple[int, int, int, int]] = []
    tested = 0

    for outer_vals in product(range(256), repeat=len(outer)):
        assignment: list = [None] * 4
        for pos, val in zip(outer, outer_vals):
            assignment[pos] = val
        for pos, val in enumerate(mask.values):
            if val is not None:
                assignment[pos] = val
        for pos, grid in inner_grids.items():
            assignment[pos] = grid
        # fixed slots become broadcast views so the arithmetic below stays
        # uint8 array arithmetic (wrapping mod 256) throughout
        assignment = [
            v if isinstance(v, np.ndarray) else np.broadcast_to(np.uint8(v), (chunk,))
            for v in assignment
        ]
        k11, k12, k21, k22 = assignment

        keep = np.ones(chunk, dtype=bool)
        for a, b, t0, t1 in filters:
            keep &= (k11 * a + k12 * b == t0) & (k21 * a + k22 * b == t1)
        survivors = np.flatnonzero(keep)
        hit_in_chunk = False
        for idx in survivors:
            cand = tuple(
                int(v[idx]) if isinstance(v, np.ndarray) else int(v)
                for v in assignment
            )
            if _verify_hill_key(cand, pblocks64, cblocks):
                matches.append(cand)
                if len(matches) == 2:
                    tested += int(idx) + 1
                    hit_in_chunk = True
                    break
                if not verify_unique:
                    tested += int(idx) + 1
                    hit_in_chunk = True
                    break
        if hit_in_chunk:
            break
        tested += chunk

    elapsed = time.perf_counter() - start
    if not matches:
        raise KeyNotFoundError("no key matches the image pair", tested)
    if len(matches) >= 2:
        return AttackOutcome(
            status=AttackStatus.AMBIGUOUS,
            recovered_key=None,
            candidates_tested=tested,
            elapsed_s=elapsed,
        )
    key = expand_key(((matches[0][0], matches[0][1]), (matches[0][2], matches[0][3])))
    return AttackOutcome(
        status=AttackStatus.UNIQUE,
        recovered_key=key.key_hex,
        candidates_tested=tested,
        elapsed_s=elapsed,
    )


# ---------------------------------------------------------------------------
# Attacks on the weak counter cipher.
# ---------------------------------------------------------------------------


def dwc_partial_recover(cipher: GrayImage) -> tuple[GrayImage, np.ndarray]:
    """Keyless recovery: invert the public core transform and strip the
    counter.  Bytes 1..3 of every block come back as exact plaintext (75%
    of the image); byte 0 comes back as plaintext XOR the unknown key, one
    global constant.

    Returns the recovered image and a boolean mask of exactly-recovered
    pixels.
    """
    blocks = blocks_of(cipher)
    partial = core_inverse_blocks(blocks) ^ counter_masks(len(blocks), 0)
    recovered = unblocks(partial, cipher.width, cipher.height)
    mask = np.zeros(blocks.shape, dtype=bool)
    mask[:, 1:] = True
    return recovered, mask.reshape(cipher.height, cipher.width)


def rle_mask(mask: np.ndarray) -> str:
    """Run-length encode a boolean mask (row-major) as 'value:length' runs."""
    flat = np.asarray(mask, dtype=np.uint8).ravel()
    if flat.size == 0:
        return ""
    boundaries = np.flatnonzero(np.diff(flat)) + 1
    starts = np.concatenate(([0], boundaries))
    ends = np.concatenate((boundaries, [flat.size]))
    return ",".join(
        f"{int(flat[s])}:{int(e - s)}" for s, e in zip(starts, ends)
    )


def smoothness_scores(
    cipher: GrayImage, tolerance: int = 16
) -> list[tuple[int, int, int]]:
    """Per-key smoothness diagnostics for the candidate plaintexts.

    The keyless core inversion is shared across candidates (that sharing
    is the cipher's flaw); candidate k then differs only in byte 0 of each
    block.  For each key, measure how byte 0 sits against the median of
    bytes 1..3 of the same block: the number of blocks within `tolerance`
    and the summed absolute deviation.  Returns (key, count, total_dev).
    """
    blocks = blocks_of(cipher)
    partial = core_inverse_blocks(blocks) ^ counter_masks(len(blocks), 0)
    b0 = partial[:, 0]
    med = np.median(partial[:, 1:4], axis=1).astype(np.int32)
    rows = []
    for k in range(256):
        cand = (b0 ^ np.uint8(k)).astype(np.int32)
        dev = np.abs(cand - med)
        rows.append((k, int(np.count_nonzero(dev <= tolerance)), int(dev.sum())))
    return rows


def brute_force_dwc(
    cipher: GrayImage,
    predicate: Callable[[GrayImage], float] | None = None,
) -> list[tuple[int, float]]:
    """Decrypt under all 256 keys and rank them by plaintext plausibility.

    The default scorer is the negated total smoothness deviation from
    smoothness_scores (ties broken by smaller key byte).  The deviation is
    preferred over the within-tolerance count because a key differing from
    the truth only in low bits shifts byte 0 by one or two levels: that
    barely moves a threshold count on a smooth image, but it strictly
    inflates the summed distance to the local median.  A custom predicate
    receives each candidate plaintext image and must return a score where
    higher means more plausible.
    """
    if predicate is None:
        rows = smoothness_scores(cipher)
        rows.sort(key=lambda r: (r[2], r[0]))
        return [(k, float(-dev)) for k, _, dev in rows]
    scored = [
        (k, float(predicate(dwc_decrypt(cipher, k)))) for k in range(256)
    ]
    scored.sort(key=lambda r: (-r[1], r[0]))
    return scored


# ---------------------------------------------------------------------------
# Structural diagnostics.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FixedPointCensus:
    diagonal_fixed: int  # of the 256 blocks (p, p, p, p)
    sampled_tested: int
    sampled_fixed: list[Block] = field(default_factory=list)


def fixed_point_census(
    key: HillKey, sample_count: int = 4096, seed: int = 0
) -> FixedPointCensus:
    """Verify the 256 structurally guaranteed fixed points (p, p, p, p)
    and probe a random sample of blocks for additional ones."""
    km = np.array(key.km, dtype=np.int64)
    diag = np.repeat(np.arange(256, dtype=np.int64)[:, None], 4, axis=1)
    diag_fixed = int(
        np.count_nonzero(np.all((diag @ km.T) % 256 == diag, axis=1))
    )
    rng = np.random.default_rng(seed)
    sample = rng.integers(0, 256, size=(sample_count, 4)).astype(np.int64)
    fixed_rows = np.all((sample @ km.T) % 256 == sample, axis=1)
    found = [tuple(int(v) for v in row) for row in sample[fixed_rows]]
    return FixedPointCensus(
        diagonal_fixed=diag_fixed,
        sampled_tested=sample_count,
        sampled_fixed=found,
    )


@dataclass(frozen=True)
class BlockHistogram:
    total_blocks: int
    distinct_blocks: int
    largest_class_size: int
    largest_class_block: Block

    def to_json_dict(self) -> dict:
        return {
            "total_blocks": self.total_blocks,
            "distinct_blocks": self.distinct_blocks,
            "largest_class_size": self.largest_class_size,
            "largest_class_block": list(self.largest_class_block),
        }


def ecb_repeat_detector(cipher: GrayImage) -> BlockHistogram:
    """Histogram of duplicate blocks: codebook encryption copies plaintext
    block equality straight into the ciphertext."""
    blocks = blocks_of(cipher)
    words = np.ascontiguousarray(blocks).view("<u4").ravel()
    values, counts = np.unique(words, return_counts=True)
    top = int(np.argmax(counts))
    v = int(values[top])
    block = (v & 0xFF, (v >> 8) & 0xFF, (v >> 16) & 0xFF, (v >> 24) & 0xFF)
    return BlockHistogram(
        total_blocks=int(words.size),
        distinct_blocks=int(values.size),
        largest_class_size=int(counts[top]),
        largest_class_block=block,
    )
