"""LCE queries on packed text in the space of the text itself."""
from .codec import PackedText, bits_per_symbol, decode_text, encode_text
from .general_index import GeneralLceIndex
from .mersenne import MersennePrime
from .mersenne_index import MersenneLceIndex
from .serialize import IndexFormatError, load_index, save_index

__all__ = [
    "GeneralLceIndex",
    "IndexFormatError",
    "MersenneLceIndex",
    "MersennePrime",
    "PackedText",
    "bits_per_symbol",
    "decode_text",
    "encode_text",
    "load_index",
    "save_index",
]
