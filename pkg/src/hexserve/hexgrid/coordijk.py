"""Integer arithmetic on hexagonal IJK grid coordinates.

Cells on each icosahedron face live on a triangular lattice addressed by
non-negative (i, j, k) triples with at least one zero component.  All
operations here are exact integer math; geometry happens in projection.py.
"""

from __future__ import annotations

import math

SQRT3_2 = math.sqrt(3.0) / 2.0

# Digit values addressing the 7 aperture-7 sub-cells (center + 6 axes).
CENTER_DIGIT = 0
K_AXES_DIGIT = 1
J_AXES_DIGIT = 2
JK_AXES_DIGIT = 3
I_AXES_DIGIT = 4
IK_AXES_DIGIT = 5
IJ_AXES_DIGIT = 6
INVALID_DIGIT = 7

UNIT_VECS = (
    (0, 0, 0),  # center
    (0, 0, 1),  # k
    (0, 1, 0),  # j
    (0, 1, 1),  # jk
    (1, 0, 0),  # i
    (1, 0, 1),  # ik
    (1, 1, 0),  # ij
)

_CCW_ROT = {1: 5, 5: 4, 4: 6, 6: 2, 2: 3, 3: 1}
_CW_ROT = {1: 3, 3: 2, 2: 6, 6: 4, 4: 5, 5: 1}


def normalize(i: int, j: int, k: int) -> tuple[int, int, int]:
    """Canonical form: all components non-negative, min component zero."""
    if i < 0:
        j -= i
        k -= i
        i = 0
    if j < 0:
        i -= j
        k -= j
        j = 0
    if k < 0:
        i -= k
        j -= k
        k = 0
    m = min(i, j, k)
    if m > 0:
        i -= m
        j -= m
        k -= m
    return i, j, k


def add(a: tuple[int, int, int], b: tuple[int, int, int]) -> tuple[int, int, int]:
    return normalize(a[0] + b[0], a[1] + b[1], a[2] + b[2])


def scale(a: tuple[int, int, int], f: int) -> tuple[int, int, int]:
    return (a[0] * f, a[1] * f, a[2] * f)


def sub(a: tuple[int, int, int], b: tuple[int, int, int]) -> tuple[int, int, int]:
    return normalize(a[0] - b[0], a[1] - b[1], a[2] - b[2])


def unit_ijk_to_digit(ijk: tuple[int, int, int]) -> int:
    c = normalize(*ijk)
    try:
        return UNIT_VECS.index(c)
    except ValueError:
        return INVALID_DIGIT


def rotate_digit_60ccw(digit: int) -> int:
    return _CCW_ROT.get(digit, digit)


def rotate_digit_60cw(digit: int) -> int:
    return _CW_ROT.get(digit, digit)


def _linear_combo(ijk, ivec, jvec, kvec):
    i, j, k = ijk
    return normalize(
        i * ivec[0] + j * jvec[0] + k * kvec[0],
        i * ivec[1] + j * jvec[1] + k * kvec[1],
        i * ivec[2] + j * jvec[2] + k * kvec[2],
    )


def rotate_60ccw(ijk: tuple[int, int, int]) -> tuple[int, int, int]:
    return _linear_combo(ijk, (1, 1, 0), (0, 1, 1), (1, 0, 1))


def rotate_60cw(ijk: tuple[int, int, int]) -> tuple[int, int, int]:
    return _linear_combo(ijk, (1, 0, 1), (1, 1, 0), (0, 1, 1))


def down_ap7(ijk: tuple[int, int, int]) -> tuple[int, int, int]:
    """Find this cell's center in the next finer aperture-7 grid (ccw)."""
    return _linear_combo(ijk, (3, 0, 1), (1, 3, 0), (0, 1, 3))


def down_ap7r(ijk: tuple[int, int, int]) -> tuple[int, int, int]:
    """Find this cell's center in the next finer aperture-7 grid (cw)."""
    return _linear_combo(ijk, (3, 1, 0), (0, 3, 1), (1, 0, 3))


def up_ap7(ijk: tuple[int, int, int]) -> tuple[int, int, int]:
    """Find the containing cell in the next coarser aperture-7 grid (ccw)."""
    i = ijk[0] - ijk[2]
    j = ijk[1] - ijk[2]
    return normalize(round((3 * i - j) / 7.0), round((i + 2 * j) / 7.0), 0)


def up_ap7r(ijk: tuple[int, int, int]) -> tuple[int, int, int]:
    """Find the containing cell in the next coarser aperture-7 grid (cw)."""
    i = ijk[0] - ijk[2]
    j = ijk[1] - ijk[2]
    return normalize(round((2 * i + j) / 7.0), round((3 * j - i) / 7.0), 0)


def down_ap3(ijk: tuple[int, int, int]) -> tuple[int, int, int]:
    """Center of this cell in an aperture-3 ccw substrate refinement."""
    return _linear_combo(ijk, (2, 0, 1), (1, 2, 0), (0, 1, 2))


def down_ap3r(ijk: tuple[int, int, int]) -> tuple[int, int, int]:
    """Center of this cell in an aperture-3 cw substrate refinement."""
    return _linear_combo(ijk, (2, 1, 0), (0, 2, 1), (1, 0, 2))


def neighbor(ijk: tuple[int, int, int], digit: int) -> tuple[int, int, int]:
    if CENTER_DIGIT < digit < INVALID_DIGIT:
        return add(ijk, UNIT_VECS[digit])
    return ijk


def to_hex2d(ijk: tuple[int, int, int]) -> tuple[float, float]:
    """Project IJK to orthogonal 2D plane coordinates (i-axis along +x)."""
    i = ijk[0] - ijk[2]
    j = ijk[1] - ijk[2]
    return (i - 0.5 * j, j * SQRT3_2)


def from_hex2d(x: float, y: float) -> tuple[int, int, int]:
    """Quantize plane coordinates to the containing unit hexagon's IJK."""
    a1 = abs(x)
    a2 = abs(y)

    x2 = a2 / SQRT3_2
    x1 = a1 + x2 / 2.0

    m1 = int(x1)
    m2 = int(x2)

    r1 = x1 - m1
    r2 = x2 - m2

    if r1 < 0.5:
        if r1 < 1.0 / 3.0:
            i = m1
            j = m2 if r2 < (1.0 + r1) / 2.0 else m2 + 1
        else:
            j = m2 if r2 < (1.0 - r1) else m2 + 1
            i = m1 + 1 if (1.0 - r1) <= r2 < (2.0 * r1) else m1
    else:
        if r1 < 2.0 / 3.0:
            j = m2 if r2 < (1.0 - r1) else m2 + 1
            i = m1 if (2.0 * r1 - 1.0) < r2 < (1.0 - r1) else m1 + 1
        else:
            i = m1 + 1
            j = m2 if r2 < (r1 / 2.0) else m2 + 1

    # fold across the axes if necessary
    if x < 0.0:
        if j % 2 == 0:
            axisi = j // 2
            diff = i - axisi
            i = i - 2 * diff
        else:
            axisi = (j + 1) // 2
            diff = i - axisi
            i = i - (2 * diff + 1)

    if y < 0.0:
        i = i - (2 * j + 1) // 2
        j = -j

    return normalize(i, j, 0)
