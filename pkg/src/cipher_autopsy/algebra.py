"""Byte-level algebra shared by both ciphers.

Two structures live here and must not be confused:

* GF(2^8), the field with 256 elements under the reduction polynomial
  x^8 + x^4 + x^3 + x + 1 (0x11B).  Addition is XOR.  The weak cipher's
  core transform (S-box construction, column-matrix multiply) runs here.
* Z/256, the ring of bytes under ordinary + and * mod 256.  Not a field:
  exactly the odd bytes are units.  The Hill-cipher layer and the
  known-plaintext solver run here.
"""

from __future__ import annotations

from itertools import combinations
from typing import Sequence

GF_POLY = 0x11B

# Type aliases: bytes are plain ints in [0, 255]; matrices are row-major
# tuples so keys stay hashable and immutable.
Mat2 = tuple[tuple[int, int], tuple[int, int]]
Mat4 = tuple[tuple[int, int, int, int], ...]
Block = tuple[int, int, int, int]


class ZeroInverseError(ValueError):
    """Zero has no multiplicative inverse in GF(2^8)."""


class UnderdeterminedError(ValueError):
    """No equation pair pins down the unknowns (all pair determinants even)."""


class InconsistentError(ValueError):
    """The equations admit no common solution."""


def gf_add(a: int, b: int) -> int:
    """Field addition: bitwise XOR."""
    return a ^ b


def gf_mul(a: int, b: int) -> int:
    """Carry-less multiply reduced by x^8 + x^4 + x^3 + x + 1."""
    p = 0
    while b:
        if b & 1:
            p ^= a
        b >>= 1
        a <<= 1
        if a & 0x100:
            a ^= GF_POLY
    return p


def gf_inv(a: int) -> int:
    """Multiplicative inverse of a nonzero field element (a^254)."""
    if a == 0:
        raise ZeroInverseError("0 has no inverse in GF(2^8)")
    result, power, e = 1, a, 254
    while e:
        if e & 1:
            result = gf_mul(result, power)
        power = gf_mul(power, power)
        e >>= 1
    return result


def mod256_inv(a: int) -> int:
    """Inverse of a unit in Z/256; only odd bytes qualify."""
    if a % 2 == 0:
        raise ZeroInverseError("even bytes are zero divisors mod 256")
    return pow(a, -1, 256)


MAT4_IDENTITY: Mat4 = tuple(
    tuple(1 if i == j else 0 for j in range(4)) for i in range(4)
)


def mat4_vec_mod256(m: Mat4, v: Block) -> Block:
    """Matrix-vector product over Z/256, reduced after every accumulate."""
    out = []
    for row in m:
        acc = 0
        for coef, x in zip(row, v):
            acc = (acc + coef * x) % 256
        out.append(acc)
    return (out[0], out[1], out[2], out[3])


def mat4_mul_mod256(x: Mat4, y: Mat4) -> Mat4:
    """4x4 matrix product over Z/256."""
    return tuple(
        tuple(sum(x[i][t] * y[t][j] for t in range(4)) % 256 for j in range(4))
        for i in range(4)
    )


def solve_k_rows_mod256(
    equations: Sequence[tuple[int, int, int]],
) -> tuple[int, int]:
    """Solve k*a + l*b = rhs  (mod 256) for the unknown pair (k, l).

    Each equation is an (a, b, rhs) triple.  The system is solved by
    locating an equation pair whose determinant a1*b2 - a2*b1 is odd
    (hence a unit mod 256) and applying the adjugate formula; the
    remaining equations are then checked against the candidate.

    Raises UnderdeterminedError when no pair has an odd determinant and
    InconsistentError when the equations conflict.
    """
    if len(equations) < 2:
        raise ValueError("need at least two equations")
    for i, j in combinations(range(len(equations)), 2):
        a1, b1, r1 = equations[i]
        a2, b2, r2 = equations[j]
        det = (a1 * b2 - a2 * b1) % 256
        if det % 2 == 0:
            continue
        inv_det = mod256_inv(det)
        k = (inv_det * (b2 * r1 - b1 * r2)) % 256
        l = (inv_det * (a1 * r2 - a2 * r1)) % 256
        for a, b, rhs in equations:
            if (a * k + b * l) % 256 != rhs % 256:
                raise InconsistentError(
                    "equations admit no common solution mod 256"
                )
        return k, l
    raise UnderdeterminedError("no equation pair has an odd determinant")
