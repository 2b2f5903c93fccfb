"""Reading input texts: raw bytes, whitespace-separated integers, FASTA."""
from __future__ import annotations

from pathlib import Path

import numpy as np

from .codec import symbol_dtype

FORMATS = ("bytes", "ints", "fasta")
DNA = b"ACGT"


def read_bytes(path) -> tuple[np.ndarray, int]:
    return np.frombuffer(Path(path).read_bytes(), dtype=np.uint8).copy(), 256


def read_ints(path, sigma: int) -> tuple[np.ndarray, int]:
    raw = Path(path).read_text().split()
    try:
        values = np.array([int(tok) for tok in raw], dtype=np.int64)
    except ValueError as exc:
        raise ValueError(f"{path}: not an integer file ({exc})") from None
    if values.size and (values.min() < 0 or values.max() >= sigma):
        raise ValueError(f"{path}: symbol outside [0, {sigma})")
    return values.astype(symbol_dtype(sigma)), sigma


def read_fasta(path) -> tuple[np.ndarray, int, int]:
    """Concatenated A/C/G/T of all records as 0..3; returns (symbols, 4, dropped)."""
    lut = np.full(256, 255, dtype=np.uint8)
    for code, ch in enumerate(DNA):
        lut[ch] = code
        lut[ch + 32] = code
    chunks = []
    for line in Path(path).read_bytes().splitlines():
        if line.startswith(b">") or line.startswith(b";"):
            continue
        chunks.append(lut[np.frombuffer(line.strip(), dtype=np.uint8)])
    seq = np.concatenate(chunks) if chunks else np.zeros(0, dtype=np.uint8)
    keep = seq != 255
    return seq[keep], 4, int(seq.size - keep.sum())


def read_text(path, fmt: str = "bytes", sigma: int | None = None) -> tuple[np.ndarray, int]:
    if fmt == "bytes":
        return read_bytes(path)
    if fmt == "ints":
        if sigma is None:
            raise ValueError("--sigma is required for integer input")
        return read_ints(path, sigma)
    if fmt == "fasta":
        symbols, sig, _ = read_fasta(path)
        return symbols, sig
    raise ValueError(f"unknown format {fmt!r}")
