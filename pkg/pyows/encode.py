"""Wire formats for pyows

Bit strings travel as bytes, most-significant bit first and left-aligned:
the first bit of the string is the top bit of the first byte and the unused
tail of the last byte is zero. Hex is the lower-case hex of those bytes.

This module holds the byte, hex, JSON-lines and test-vector codecs shared by
the sequence, learner and command-line layers."""

import json

from .errors import DecodeError
from .sequence import Example, LabeledExample, SeedKey

__all__ = ['pack_bits', 'unpack_bits', 'bits_to_hex', 'hex_to_bits',
           'seed_to_hex', 'seed_from_hex', 'item_bytes', 'example_to_dict',
           'example_from_dict', 'dump_dataset', 'load_dataset',
           'format_vector_line', 'parse_vector_line', 'format_prg_line',
           'parse_prg_line']


def _byte_length(nbits):
    return (nbits + 7) // 8


def pack_bits(value, nbits):
    """Returns ``value`` as an ``nbits``-bit string packed into bytes"""
    size = _byte_length(nbits)
    return (value << (8 * size - nbits)).to_bytes(size, "big")


def unpack_bits(data, nbits):
    """Inverse of pack_bits; rejects wrong lengths and nonzero padding"""
    size = _byte_length(nbits)
    if len(data) != size:
        raise DecodeError("expected %d bytes for %d bits, got %d" % (size, nbits, len(data)))
    padding = 8 * size - nbits
    value = int.from_bytes(data, "big")
    if value & ((1 << padding) - 1):
        raise DecodeError("nonzero padding bits")
    return value >> padding


def bits_to_hex(value, nbits):
    return pack_bits(value, nbits).hex()


def hex_to_bits(text, nbits):
    try:
        data = bytes.fromhex(text)
    except (TypeError, ValueError) as e:
        raise DecodeError("bad hex %r: %s" % (text, e))
    return unpack_bits(data, nbits)


def seed_to_hex(seed):
    return bits_to_hex(seed.value, seed.k)


def seed_from_hex(text, params):
    return SeedKey(hex_to_bits(text, params.k), params.k)


def item_bytes(params, sigma, bit):
    """The opaque item for a <sigma, bit> pair: sigma followed by the bit"""
    return pack_bits((sigma << 1) | bit, params.sigma_bits + 1)


def example_to_dict(params, labeled):
    return {'i': labeled.example.i,
            'sigma': bits_to_hex(labeled.example.sigma, params.sigma_bits),
            'label': labeled.label}


def example_from_dict(params, record):
    try:
        i = record['i']
        sigma = hex_to_bits(record['sigma'], params.sigma_bits)
        label = record['label']
    except (KeyError, TypeError) as e:
        raise DecodeError("bad example record %r: %s" % (record, e))
    if not isinstance(i, int) or not 0 <= i < params.index_count:
        raise DecodeError("index %r out of range for k=%d" % (i, params.k))
    if label not in (0, 1):
        raise DecodeError("label %r is not a bit" % (label,))
    return LabeledExample(Example(i, sigma), label)


def dump_dataset(params, examples, fp):
    """Writes one JSON object per line"""
    for labeled in examples:
        fp.write(json.dumps(example_to_dict(params, labeled), sort_keys=True))
        fp.write("\n")


def load_dataset(params, fp):
    examples = []
    for number, line in enumerate(fp, 1):
        line = line.strip()
        if not line:
            continue
        try:
            record = json.loads(line)
        except ValueError:
            raise DecodeError("line %d is not JSON" % number)
        examples.append(example_from_dict(params, record))
    return examples


def format_vector_line(k, seed_value, i, sigma, fbit, sigma_bits):
    """``k s_hex i sigma_hex fbit``"""
    return "%d %s %d %s %d" % (k, bits_to_hex(seed_value, k), i,
                               bits_to_hex(sigma, sigma_bits), fbit)


def parse_vector_line(line, sigma_bits_for_k):
    """
    Parses a test-vector line. ``sigma_bits_for_k`` maps k to the sigma
    length the vector was generated with.

    :return: (k, seed_value, i, sigma, fbit)
    """
    fields = line.split()
    if len(fields) != 5:
        raise DecodeError("expected 5 fields, got %r" % line)
    k = int(fields[0])
    return (k, hex_to_bits(fields[1], k), int(fields[2]),
            hex_to_bits(fields[3], sigma_bits_for_k(k)), int(fields[4]))


def format_prg_line(k, seed_value, left, right):
    """``k seed_hex left_hex right_hex``"""
    return "%d %s %s %s" % (k, bits_to_hex(seed_value, k), bits_to_hex(left, k),
                            bits_to_hex(right, k))


def parse_prg_line(line):
    fields = line.split()
    if len(fields) != 4:
        raise DecodeError("expected 4 fields, got %r" % line)
    k = int(fields[0])
    return (k, hex_to_bits(fields[1], k), hex_to_bits(fields[2], k),
            hex_to_bits(fields[3], k))
