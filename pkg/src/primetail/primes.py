"""Bit-packed segmented sieve and counting passes over it.

The table stores one bit per integer, 64 per little-endian word, so the
full range to 10^8 fits in ~12 MB and popcounts come straight off the
words. Window and tuple counts stream the table in chunks; nothing here
ever materialises more than a few million unpacked flags at once.
"""

import math
import struct
from dataclasses import dataclass

import numpy as np

from .errors import CoverageError

_MAGIC = b"PKT1"
DEFAULT_SEGMENT_BITS = 1 << 20
_CHUNK = 1 << 22


def _simple_sieve(limit):
    """Boolean primality flags for 0..limit, one-shot Eratosthenes."""
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            flags[p * p :: p] = False
    return flags


class PrimalityTable:
    """Primality of every integer in [base, limit].

    Bit j of word w flags base + 64*w + j; bits for n < 2 are always 0.
    Words are litte-endian uint64 so the on-disk and in-memory layouts
    agree byte for byte.
    """

    def __init__(self, base, limit, words):
        if base < 0 or limit < base:
            raise ValueError(f"invalid range [{base}, {limit}]")
        n_words = ((limit - base + 1) + 63) // 64
        if len(words) != n_words:
            raise ValueError(f"expected {n_words} words, got {len(words)}")
        self.base = base
        self.limit = limit
        self.words = np.ascontiguousarray(words, dtype="<u8")

    # -- construction ---------------------------------------------------

    @classmethod
    def sieve(cls, base, limit, segment_bits=DEFAULT_SEGMENT_BITS):
        if base < 0 or limit < base:
            raise ValueError(f"invalid range [{base}, {limit}]")
        segment_bits = max(64, (segment_bits // 64) * 64)
        n_bits = limit - base + 1
        words = np.zeros((n_bits + 63) // 64, dtype="<u8")
        base_flags = _simple_sieve(max(math.isqrt(limit), 2))
        base_primes = [int(p) for p in np.flatnonzero(base_flags)]
        for seg_lo in range(base, limit + 1, segment_bits):
            seg_hi = min(seg_lo + segment_bits - 1, limit)
            n = seg_hi - seg_lo + 1
            seg = np.ones(n, dtype=bool)
            if seg_lo < 2:
                seg[: min(2 - seg_lo, n)] = False
            for p in base_primes:
                start = max(p * p, (seg_lo + p - 1) // p * p)
                if start > seg_hi:
                    continue
                seg[start - seg_lo :: p] = False
            packed = np.packbits(seg, bitorder="little")
            buf = np.zeros(((n + 63) // 64) * 8, dtype=np.uint8)
            buf[: len(packed)] = packed
            w0 = (seg_lo - base) >> 6
            words[w0 : w0 + len(buf) // 8] = buf.view("<u8")
        return cls(base, limit, words)

    # -- persistence ----------------------------------------------------
    # file layout: magic "PKT1", base and limit as 8-byte LE, then words

    def save(self, path):
        with open(path, "wb") as f:
            f.write(_MAGIC)
            f.write(struct.pack("<QQ", self.base, self.limit))
            f.write(self.words.tobytes())

    @classmethod
    def load(cls, path):
        with open(path, "rb") as f:
            magic = f.read(4)
            if magic != _MAGIC:
                raise ValueError(f"not a primality table file (magic {magic!r})")
            base, limit = struct.unpack("<QQ", f.read(16))
            words = np.frombuffer(f.read(), dtype="<u8").copy()
        return cls(base, limit, words)

    # -- queries ----------------------------------------------------------

    def require_cover(self, lo, hi):
        if lo < self.base or hi > self.limit:
            raise CoverageError(lo, hi, self.base, self.limit)

    def is_prime(self, n):
        self.require_cover(n, n)
        i = n - self.base
        return bool((int(self.words[i >> 6]) >> (i & 63)) & 1)

    def bools(self, lo, hi):
        """Primality flags for lo..hi inclusive as a bool array."""
        if hi < lo:
            return np.zeros(0, dtype=bool)
        self.require_cover(lo, hi)
        i0 = lo - self.base
        i1 = hi - self.base
        w0, w1 = i0 >> 6, i1 >> 6
        raw = self.words[w0 : w1 + 1].view(np.uint8)
        bits = np.unpackbits(raw, bitorder="little")
        off = i0 - (w0 << 6)
        return bits[off : off + (i1 - i0 + 1)].view(np.bool_)

    def count(self, lo=None, hi=None):
        """Number of primes in [lo, hi], popcounted off the packed words."""
        lo = self.base if lo is None else lo
        hi = self.limit if hi is None else hi
        if hi < lo:
            return 0
        self.require_cover(lo, hi)
        i0 = lo - self.base
        i1 = hi - self.base
        w0, w1 = i0 >> 6, i1 >> 6
        ws = self.words[w0 : w1 + 1].astype(np.uint64)
        ws[0] &= np.uint64(~((1 << (i0 & 63)) - 1) & 0xFFFFFFFFFFFFFFFF)
        if (i1 & 63) != 63:
            ws[-1] &= np.uint64((1 << ((i1 & 63) + 1)) - 1)
        return int(np.bitwise_count(ws).sum())

    def primes(self, lo=None, hi=None):
        """All primes in [lo, hi] as an int64 array."""
        lo = self.base if lo is None else lo
        hi = self.limit if hi is None else hi
        if hi < lo:
            return np.zeros(0, dtype=np.int64)
        return np.flatnonzero(self.bools(lo, hi)).astype(np.int64) + lo


def sieve_range(base, limit, segment_bits=DEFAULT_SEGMENT_BITS):
    """Sieve [base, limit] into a packed PrimalityTable."""
    return PrimalityTable.sieve(base, limit, segment_bits)


@dataclass(frozen=True)
class WindowHistogram:
    """How many of the windows (n, n+h], 1 <= n <= x, hold exactly c primes."""

    x: int
    h: float
    counts: dict


def window_counts(table, x, h, chunk=_CHUNK):
    """Histogram of c(n) = #{primes in (n, n+h]} over n = 1..x.

    Windows are half-open at the left, so for integer n they hold the
    integers n+1 .. n+floor(h). Requires the table to cover
    [1, x + ceil(h)].
    """
    if x < 1:
        raise ValueError("x must be >= 1")
    if not (h > 0) or not math.isfinite(h):
        raise ValueError("h must be positive and finite")
    table.require_cover(1, x + math.ceil(h))
    m = int(h)
    if m == 0:
        return WindowHistogram(x, h, {0: x})
    acc = np.zeros(m + 2, dtype=np.int64)
    for a in range(1, x + 1, chunk):
        b = min(a + chunk - 1, x)
        flags = table.bools(a + 1, b + m)
        cs = np.zeros(len(flags) + 1, dtype=np.int64)
        np.cumsum(flags, out=cs[1:])
        c = cs[m : m + (b - a + 1)] - cs[: b - a + 1]
        acc += np.bincount(c, minlength=m + 2)
    counts = {int(c): int(n) for c, n in enumerate(acc) if n}
    return WindowHistogram(x, float(h), counts)


def count_tuple_hits(table, offsets, x, chunk=_CHUNK):
    """#{1 <= n <= x : n + t is prime for every offset t}.

    Offsets may come in any order and with repeats; the count only
    depends on the underlying set. Empty offsets count everything.
    """
    if x < 1:
        raise ValueError("x must be >= 1")
    offs = sorted({int(t) for t in offsets})
    if not offs:
        return x
    if offs[0] < 0:
        raise ValueError("offsets must be non-negative")
    table.require_cover(1 + offs[0], x + offs[-1])
    total = 0
    for a in range(1, x + 1, chunk):
        b = min(a + chunk - 1, x)
        acc = table.bools(a + offs[0], b + offs[0]).copy()
        for t in offs[1:]:
            acc &= table.bools(a + t, b + t)
        total += int(np.count_nonzero(acc))
    return total
