"""64-bit cell identifier packing.

Layout (high to low): 1 reserved bit, 4 mode bits (cells use mode 1),
3 reserved bits, 4 resolution bits, 7 base-cell bits, then fifteen 3-bit
indexing digits; digits past the cell's resolution hold 7.  Valid cell ids
render as exactly 15 lowercase hex characters.
"""

from __future__ import annotations

MAX_RES = 15
CELL_MODE = 1

_MODE_OFFSET = 59
_RES_OFFSET = 52
_BASE_CELL_OFFSET = 45
_DIGIT_BITS = 3

# all fifteen digits set to 7, everything else zero
_INIT = (1 << 45) - 1


def _digit_offset(res: int) -> int:
    return (MAX_RES - res) * _DIGIT_BITS


def build(res: int, base_cell: int, digits) -> int:
    h = _INIT | (CELL_MODE << _MODE_OFFSET)
    h = set_resolution(h, res)
    h = set_base_cell(h, base_cell)
    for r, d in enumerate(digits, start=1):
        h = set_digit(h, r, d)
    return h


def get_mode(h: int) -> int:
    return (h >> _MODE_OFFSET) & 0xF


def get_resolution(h: int) -> int:
    return (h >> _RES_OFFSET) & 0xF


def set_resolution(h: int, res: int) -> int:
    return (h & ~(0xF << _RES_OFFSET)) | (res << _RES_OFFSET)


def get_base_cell(h: int) -> int:
    return (h >> _BASE_CELL_OFFSET) & 0x7F


def set_base_cell(h: int, bc: int) -> int:
    return (h & ~(0x7F << _BASE_CELL_OFFSET)) | (bc << _BASE_CELL_OFFSET)


def get_digit(h: int, res: int) -> int:
    return (h >> _digit_offset(res)) & 0x7


def set_digit(h: int, res: int, digit: int) -> int:
    off = _digit_offset(res)
    return (h & ~(0x7 << off)) | (digit << off)


def leading_nonzero_digit(h: int) -> int:
    for r in range(1, get_resolution(h) + 1):
        d = get_digit(h, r)
        if d != 0:
            return d
    return 0


def to_string(h: int) -> str:
    return f"{h:x}"


def from_string(s: str) -> int:
    return int(s, 16)


def is_valid_cell(h: int, num_base_cells: int, pentagons: frozenset[int]) -> bool:
    if h < 0 or h >> 63:
        return False
    if get_mode(h) != CELL_MODE:
        return False
    if (h >> 56) & 0x7:  # reserved bits
        return False
    res = get_resolution(h)
    bc = get_base_cell(h)
    if bc >= num_base_cells:
        return False
    found_nonzero = False
    for r in range(1, res + 1):
        d = get_digit(h, r)
        if d == 7:
            return False
        if not found_nonzero and d != 0:
            found_nonzero = True
            if bc in pentagons and d == 1:
                return False  # the k subsequence is deleted under a pentagon
    for r in range(res + 1, MAX_RES + 1):
        if get_digit(h, r) != 7:
            return False
    return True
