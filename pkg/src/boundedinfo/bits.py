"""Bit-string helpers shared by the machine, the probability files and the CLI.

Bit strings are plain ``str`` objects over the alphabet ``{"0", "1"}``; the
empty string is the empty bit string.
"""

from __future__ import annotations

import numpy as np

FIELD_SEP = 0x1F
MATRIX_SEP = 0x1E


def check_bits(s: str) -> str:
    if any(c not in "01" for c in s):
        raise ValueError(f"not a bit string: {s!r}")
    return s


def self_delimit(x: str) -> str:
    """Return ``1^len(x) 0 x``."""
    return "1" * len(x) + "0" + x


def pair(x: str, y: str) -> str:
    """Encode the ordered pair ``(x, y)`` as ``self_delimit(x) + y``."""
    return self_delimit(x) + y


def unpair(s: str) -> tuple[str, str]:
    n = s.index("0")
    return s[n + 1:2 * n + 1], s[2 * n + 1:]


def binary(n: int) -> str:
    if n < 0:
        raise ValueError("negative integer")
    return format(n, "b")


def label(index: int, outcomes: int) -> str:
    """Fixed-width binary label of an outcome index; width is ceil(log2 outcomes)."""
    width = (outcomes - 1).bit_length()
    return format(index, "b").zfill(width) if width else ""


def to_hex(bits: str) -> str:
    """Length-preserving hex: hex digits of the integer with binary ``1 + bits``."""
    return format(int("1" + check_bits(bits), 2), "x")


def from_hex(h: str) -> str:
    value = int(h, 16)
    if value < 1:
        raise ValueError(f"hex bit string must carry its marker bit: {h!r}")
    return format(value, "b")[1:]


def bytes_to_bits(data: bytes) -> str:
    return "".join(format(b, "08b") for b in data)


def bits_to_bytes(bits: str) -> bytes:
    if len(bits) % 8:
        raise ValueError("bit length is not a multiple of 8")
    return bytes(int(bits[i:i + 8], 2) for i in range(0, len(bits), 8))


# Canonical matrix serialization.  Entries are row-major, real and imaginary
# parts are written with repr() (shortest round-trip decimal), every field is
# separated by 0x1F and consecutive matrices by 0x1E.

def _fmt(v: float) -> bytes:
    v = float(v)
    if v == 0.0:
        v = 0.0  # drop the sign of -0.0
    return repr(v).encode("ascii")


def serialize_matrices(matrices) -> bytes:
    chunks = []
    for mat in matrices:
        mat = np.asarray(mat, dtype=complex)
        fields = []
        for z in mat.ravel():
            fields.append(_fmt(z.real))
            fields.append(_fmt(z.imag))
        chunks.append(bytes([FIELD_SEP]).join(fields))
    return bytes([MATRIX_SEP]).join(chunks)


def deserialize_matrices(data: bytes) -> list[np.ndarray]:
    out = []
    for chunk in data.split(bytes([MATRIX_SEP])):
        vals = [float(f) for f in chunk.split(bytes([FIELD_SEP]))]
        if len(vals) % 2:
            raise ValueError("odd number of real fields in matrix")
        z = np.array(vals[0::2]) + 1j * np.array(vals[1::2])
        d = int(round(np.sqrt(z.size)))
        if d * d != z.size:
            raise ValueError(f"matrix with {z.size} entries is not square")
        out.append(z.reshape(d, d))
    return out


def aux_for_integer(n: int) -> str:
    """Auxiliary tape contents conditioning on an integer ``n``."""
    return self_delimit(binary(n))


def aux_for_matrices(matrices) -> str:
    """Auxiliary tape contents conditioning on a list of matrices (e.g. a POVM)."""
    return self_delimit(bytes_to_bits(serialize_matrices(matrices)))
