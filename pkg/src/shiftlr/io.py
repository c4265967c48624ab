"""Matrix and decomposition file formats.

Matrix files
    ``csv``  one matrix row per line, entries ``a``, ``a+bi`` or ``a-bi``.
    ``bin``  ``b"SR1M"``, little-endian ``u32`` M and N, then ``M*N``
             interleaved ``(re, im)`` float64 pairs in column-major order.
    ``pgm``  binary P5 grayscale; height maps to M, width to N, values are
             scaled into ``[0, 1]`` by maxval.

Decomposition files are JSON documents (see :func:`decomposition_to_dict`).
Floats are written in shortest round-trip form, so load(save(D)) == D.
"""

import json
import re
import struct

import numpy as np

from .decompose import Component, Decomposition
from .errors import ParseError

MAGIC = b"SR1M"
FORMATS = ("csv", "bin", "pgm")
DECOMPOSITION_VERSION = 1
_EXT = {".csv": "csv", ".txt": "csv", ".bin": "bin", ".sr1m": "bin", ".pgm": "pgm"}


def infer_format(path, fmt=None):
    if fmt:
        if fmt not in FORMATS:
            raise ParseError(f"unknown matrix format {fmt!r}")
        return fmt
    for ext, f in _EXT.items():
        if str(path).lower().endswith(ext):
            return f
    raise ParseError(f"cannot infer matrix format of {path!r}; pass a format")


# csv ---------------------------------------------------------------------------

_NUM = r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_REAL = re.compile(rf"^[+-]?{_NUM}$")
_CPLX = re.compile(rf"^([+-]?{_NUM})([+-])({_NUM})?i$")
_IMAG = re.compile(rf"^([+-]?)({_NUM})?i$")


def parse_complex(token):
    """Parse ``a``, ``a+bi``, ``a-bi`` (and the pure-imaginary ``bi``)."""
    t = token.strip()
    if _REAL.match(t):
        return complex(float(t), 0.0)
    m = _CPLX.match(t)
    if m:
        re_, sign, im = m.groups()
        imag = float(im) if im is not None else 1.0
        return complex(float(re_), -imag if sign == "-" else imag)
    m = _IMAG.match(t)
    if m:
        sign, im = m.groups()
        imag = float(im) if im is not None else 1.0
        return complex(0.0, -imag if sign == "-" else imag)
    raise ParseError(f"bad complex entry {token!r}")


def format_complex(z):
    z = complex(z)
    if z.imag == 0:
        return repr(z.real)
    sign = "-" if np.signbit(z.imag) else "+"
    return f"{z.real!r}{sign}{abs(z.imag)!r}i"


def read_csv(path):
    rows = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            rows.append([parse_complex(tok) for tok in line.split(",")])
    if not rows:
        raise ParseError(f"{path}: empty matrix")
    if len({len(r) for r in rows}) != 1:
        raise ParseError(f"{path}: ragged rows")
    return np.array(rows, dtype=np.complex128)


def write_csv(path, A):
    A = np.atleast_2d(np.asarray(A))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for row in A:
            fh.write(",".join(format_complex(z) for z in row) + "\n")


# raw binary --------------------------------------------------------------------


def read_bin(path):
    with open(path, "rb") as fh:
        data = fh.read()
    if len(data) < 12 or data[:4] != MAGIC:
        raise ParseError(f"{path}: missing SR1M header")
    M, N = struct.unpack("<II", data[4:12])
    body = data[12:]
    if M < 1 or N < 1 or len(body) != 16 * M * N:
        raise ParseError(f"{path}: expected {16 * M * N} payload bytes for {M}x{N}, got {len(body)}")
    flat = np.frombuffer(body, dtype="<f8").astype(np.float64).view(np.complex128)
    return flat.reshape((M, N), order="F")


def write_bin(path, A):
    A = np.atleast_2d(np.asarray(A, dtype=np.complex128))
    M, N = A.shape
    payload = np.ascontiguousarray(A.ravel(order="F")).view(np.float64).astype("<f8").tobytes()
    with open(path, "wb") as fh:
        fh.write(MAGIC + struct.pack("<II", M, N) + payload)


# pgm ---------------------------------------------------------------------------


def read_pgm(path):
    with open(path, "rb") as fh:
        data = fh.read()
    tokens, pos = [], 0
    while len(tokens) < 4:
        while pos < len(data) and data[pos:pos + 1].isspace():
            pos += 1
        if pos < len(data) and data[pos:pos + 1] == b"#":
            while pos < len(data) and data[pos:pos + 1] not in (b"\n", b"\r"):
                pos += 1
            continue
        start = pos
        while pos < len(data) and not data[pos:pos + 1].isspace():
            pos += 1
        if start == pos:
            raise ParseError(f"{path}: truncated PGM header")
        tokens.append(data[start:pos])
    pos += 1  # single whitespace after maxval
    if tokens[0] != b"P5":
        raise ParseError(f"{path}: not a binary PGM (P5) file")
    try:
        width, height, maxval = (int(t) for t in tokens[1:])
    except ValueError as exc:
        raise ParseError(f"{path}: bad PGM header") from exc
    if width < 1 or height < 1 or not 0 < maxval < 65536:
        raise ParseError(f"{path}: bad PGM dimensions or maxval")
    dtype = np.uint8 if maxval < 256 else np.dtype(">u2")
    count = width * height
    raw = np.frombuffer(data, dtype=dtype, count=count, offset=pos) if len(data) - pos >= count * np.dtype(dtype).itemsize else None
    if raw is None:
        raise ParseError(f"{path}: truncated PGM pixel data")
    return raw.reshape(height, width).astype(np.float64) / maxval


def write_pgm(path, A, maxval=255):
    A = np.real(np.asarray(A, dtype=np.complex128))
    if A.ndim != 2:
        raise ValueError("PGM needs a 2-D matrix")
    q = np.clip(np.round(A * maxval), 0, maxval)
    dtype = np.uint8 if maxval < 256 else np.dtype(">u2")
    with open(path, "wb") as fh:
        fh.write(f"P5\n{A.shape[1]} {A.shape[0]}\n{maxval}\n".encode("ascii"))
        fh.write(q.astype(dtype).tobytes())


def read_matrix(path, fmt=None):
    fmt = infer_format(path, fmt)
    try:
        if fmt == "csv":
            return read_csv(path)
        if fmt == "bin":
            return read_bin(path)
        return read_pgm(path)
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    except UnicodeDecodeError as exc:
        raise ParseError(f"{path}: not a text file") from exc


def write_matrix(path, A, fmt=None):
    fmt = infer_format(path, fmt)
    {"csv": write_csv, "bin": write_bin, "pgm": write_pgm}[fmt](path, A)


def read_vector(path, fmt=None):
    """Vectors are matrices with one column (one row is accepted too)."""
    A = read_matrix(path, fmt)
    if A.shape[1] != 1 and A.shape[0] != 1:
        raise ParseError(f"{path}: expected a single row or column, got {A.shape}")
    return A.reshape(-1)


def write_vector(path, x, fmt=None):
    write_matrix(path, np.asarray(x).reshape(-1, 1), fmt)


# decompositions ----------------------------------------------------------------


def _pairs(x):
    x = np.asarray(x, dtype=np.complex128)
    return [[float(z.real), float(z.imag)] for z in x]


def _unpairs(pairs, n, what):
    arr = np.asarray(pairs, dtype=np.float64)
    if arr.shape != (n, 2):
        raise ParseError(f"{what} must be {n} [re, im] pairs")
    return arr[:, 0] + 1j * arr[:, 1]


def decomposition_to_dict(D):
    doc = {
        "version": DECOMPOSITION_VERSION,
        "M": D.M,
        "N": D.N,
        "components": [
            {
                "sigma": float(c.sigma),
                "u": _pairs(c.u),
                "v": _pairs(c.v),
                "lambda": [int(s) for s in c.shifts],
            }
            for c in D.components
        ],
        "residualHistory": [float(r) for r in D.residual_history],
    }
    if D.max_imag is not None:
        doc["maxImag"] = float(D.max_imag)
    return doc


def decomposition_from_dict(doc):
    try:
        if doc.get("version") != DECOMPOSITION_VERSION:
            raise ParseError(f"unsupported decomposition version {doc.get('version')!r}")
        M, N = int(doc["M"]), int(doc["N"])
        if M < 1 or N < 1:
            raise ParseError("M and N must be positive")
        comps = []
        for i, c in enumerate(doc["components"]):
            lam = np.asarray(c["lambda"], dtype=np.int64)
            if lam.shape != (N,) or np.any(lam < 0) or np.any(lam >= M):
                raise ParseError(f"component {i}: lambda must hold {N} integers in [0, {M})")
            comps.append(Component(float(c["sigma"]), _unpairs(c["u"], M, f"component {i} u"), _unpairs(c["v"], N, f"component {i} v"), lam))
        hist = [float(r) for r in doc["residualHistory"]]
        max_imag = doc.get("maxImag")
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(f"malformed decomposition: {exc}") from exc
    return Decomposition(M, N, comps, hist, None if max_imag is None else float(max_imag))


def save_decomposition(path, D):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(decomposition_to_dict(D), fh, indent=1)
        fh.write("\n")


def load_decomposition(path):
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read decomposition {path}: {exc}") from exc
    if not isinstance(doc, dict):
        raise ParseError(f"{path}: top level must be an object")
    return decomposition_from_dict(doc)
