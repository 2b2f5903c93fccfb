"""Command-line front end.

Exit codes: 0 success, 1 bad arguments or out-of-range query, 2 the index
failed verification (or could not be loaded by ``verify``), 3 I/O error.
"""
from __future__ import annotations

import argparse
import sys
import time

import numpy as np

from .bench import BenchConfig, run_bench
from .codec import encode_text
from .general_index import GeneralLceIndex
from .mersenne import MersennePrime
from .mersenne_index import MersenneLceIndex
from .oracle import PlainText, naive_lce_many
from .serialize import IndexFormatError, load_index, save_index
from .textio import FORMATS, read_text

EXIT_OK, EXIT_USAGE, EXIT_VERIFY, EXIT_IO = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _load(path, code_on_bad=EXIT_USAGE):
    try:
        return load_index(path)
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror or exc}", EXIT_IO) from None
    except IndexFormatError as exc:
        raise CliError(f"{path}: {exc}", code_on_bad) from None


def _read_source(path, fmt, sigma):
    try:
        return read_text(path, fmt, sigma)
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror or exc}", EXIT_IO) from None


def build_index(symbols, sigma, variant="mersenne", tau=None, seed=None):
    if variant == "mersenne":
        tau = 61 if tau is None else tau
        mp = MersennePrime(tau)
        return MersenneLceIndex.build(encode_text(symbols, sigma, tau), mp)
    tau = 63 if tau is None else tau
    return GeneralLceIndex.build(encode_text(symbols, sigma, tau), seed=seed)


def _format_symbols(sym: np.ndarray, sigma: int) -> str:
    if sigma == 256:
        return sym.astype(np.uint8).tobytes().decode("latin-1")
    return " ".join(map(str, sym.tolist()))


# -- commands -----------------------------------------------------------------


def cmd_build(args) -> int:
    symbols, sigma = _read_source(args.input, args.format, args.sigma)
    if args.sigma is not None and args.format == "bytes" and args.sigma != 256:
        raise CliError("byte input always has sigma 256", EXIT_USAGE)
    if args.seed is not None and args.variant == "mersenne":
        raise CliError("--seed only applies to the general variant", EXIT_USAGE)
    t0 = time.perf_counter()
    ix = build_index(symbols, sigma, args.variant, args.tau, args.seed)
    elapsed = time.perf_counter() - t0
    try:
        size = save_index(ix, args.output)
    except OSError as exc:
        raise CliError(f"cannot write {args.output}: {exc.strerror or exc}", EXIT_IO) from None
    print(f"variant      {args.variant}")
    print(f"symbols      {ix.n_symbols} (sigma {ix.sigma}, {ix.b} bits each)")
    print(f"tau, q       {ix.tau}, {ix.q}")
    print(f"payload bits {ix.space_report()}")
    print(f"text bits    {ix.n_symbols * ix.b} (+{ix.pad_bits} pad)")
    print(f"file bytes   {size}")
    print(f"build time   {elapsed:.3f} s")
    return EXIT_OK


def cmd_lce(args) -> int:
    ix = _load(args.index)
    print(ix.lce(args.i, args.j, verify=args.check))
    return EXIT_OK


def cmd_extract(args) -> int:
    ix = _load(args.index)
    print(_format_symbols(ix.extract(args.i, args.m), ix.sigma))
    return EXIT_OK


def verify_index(ix, symbols: np.ndarray, queries: int, seed: int | None = None,
                 max_extract: int = 64) -> list[str]:
    """Problems found when comparing ``ix`` with the source text (empty list: none)."""
    if ix.n_symbols != symbols.size:
        return [f"length mismatch: index has {ix.n_symbols} symbols, source has {symbols.size}"]
    if symbols.size and int(symbols.max()) >= ix.sigma:
        return [f"source symbol outside [0, {ix.sigma})"]
    full = ix.extract(0, ix.n_symbols).astype(np.int64)
    if symbols.size and full.max() >= ix.sigma:
        return ["index decodes to a symbol outside the alphabet"]
    bad = np.flatnonzero(full != symbols)
    if bad.size:
        return [f"full extract differs from the source at {bad.size} positions (first {int(bad[0])})"]
    problems = []
    n = ix.n_symbols
    if queries <= 0 or n == 0:
        return problems
    rng = np.random.default_rng(seed)
    I = rng.integers(0, n, queries)
    J = rng.integers(0, n, queries)
    got, _ = ix.lce_many(I, J)
    want = naive_lce_many(PlainText(symbols, ix.sigma), I, J)
    n_lce = int((got != want).sum())
    if n_lce:
        problems.append(f"{n_lce} LCE mismatches out of {queries}")
    n_ext = 0
    starts = rng.integers(0, n, queries)
    lengths = rng.integers(0, max_extract + 1, queries)
    lengths = np.minimum(lengths, n - starts)
    for i, m in zip(starts.tolist(), lengths.tolist()):
        if not np.array_equal(ix.extract(i, m), symbols[i : i + m]):
            n_ext += 1
    if n_ext:
        problems.append(f"{n_ext} extract mismatches out of {queries}")
    return problems


def cmd_verify(args) -> int:
    ix = _load(args.index, code_on_bad=EXIT_VERIFY)
    sigma = args.sigma if args.sigma is not None else (ix.sigma if args.format == "ints" else None)
    symbols, src_sigma = _read_source(args.source, args.format, sigma)
    if src_sigma != ix.sigma:
        print(f"FAIL index alphabet {ix.sigma} differs from the source alphabet {src_sigma}")
        return EXIT_VERIFY
    symbols = symbols.astype(np.int64)
    t0 = time.perf_counter()
    problems = verify_index(ix, symbols, args.queries, args.seed)
    elapsed = time.perf_counter() - t0
    if problems:
        for msg in problems:
            print(f"FAIL {msg}")
        return EXIT_VERIFY
    print(f"OK   {ix.n_symbols} symbols match; {max(args.queries, 0)} LCE and extract queries, "
          f"0 mismatches ({elapsed:.2f} s)")
    return EXIT_OK


def cmd_bench(args) -> int:
    ix = _load(args.index)
    report = run_bench(ix, BenchConfig(queries=args.queries, pattern=args.pattern, seed=args.seed))
    print(report.format())
    return EXIT_OK


# -- entry point --------------------------------------------------------------


def make_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="fplce", description="Compressed-space LCE indexes over packed text.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    b = sub.add_parser("build", help="build an index file from a text")
    b.add_argument("input")
    b.add_argument("-o", "--output", required=True)
    b.add_argument("--variant", choices=("mersenne", "general"), default="mersenne")
    b.add_argument("--format", choices=FORMATS, default="bytes")
    b.add_argument("--sigma", type=int)
    b.add_argument("--tau", type=int, help="Mersenne exponent or prime bit length (defaults 61 / 63)")
    b.add_argument("--seed", type=int, help="seed for the random prime (general variant)")
    b.set_defaults(func=cmd_build)

    q = sub.add_parser("lce", help="longest common extension of two suffixes")
    q.add_argument("index")
    q.add_argument("i", type=int)
    q.add_argument("j", type=int)
    q.add_argument("--check", action="store_true", help="confirm the answer against decoded text")
    q.set_defaults(func=cmd_lce)

    e = sub.add_parser("extract", help="print m symbols starting at i")
    e.add_argument("index")
    e.add_argument("i", type=int)
    e.add_argument("m", type=int)
    e.set_defaults(func=cmd_extract)

    v = sub.add_parser("verify", help="compare an index with its source text")
    v.add_argument("index")
    v.add_argument("source")
    v.add_argument("--queries", type=int, default=10_000)
    v.add_argument("--seed", type=int)
    v.add_argument("--format", choices=FORMATS, default="bytes")
    v.add_argument("--sigma", type=int)
    v.set_defaults(func=cmd_verify)

    k = sub.add_parser("bench", help="query latency against plain array access")
    k.add_argument("index")
    k.add_argument("--queries", type=int, default=100_000)
    k.add_argument("--pattern", choices=("random", "worst"), default="random")
    k.add_argument("--seed", type=int, default=0)
    k.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"fplce: {exc}", file=sys.stderr)
        return exc.code
    except (ValueError, IndexError) as exc:
        print(f"fplce: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"fplce: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
