"""Small numpy helpers shared across modules."""

import numpy as np

I64 = np.int64


def exclusive_prefix_sum(counts):
    """Return offsets of length len(counts)+1 with offsets[0] = 0."""
    out = np.zeros(len(counts) + 1, dtype=I64)
    np.cumsum(counts, out=out[1:])
    return out


def segment_indices(starts, lengths):
    """Flat indices covering [starts[i], starts[i]+lengths[i]) for each i.

    Also returns the segment id of every produced index. Zero-length
    segments are allowed.
    """
    starts = np.asarray(starts, dtype=I64)
    lengths = np.asarray(lengths, dtype=I64)
    total = int(lengths.sum())
    seg = np.repeat(np.arange(len(lengths), dtype=I64), lengths)
    if total == 0:
        return np.zeros(0, dtype=I64), seg
    local = np.arange(total, dtype=I64) - np.repeat(
        exclusive_prefix_sum(lengths)[:-1], lengths
    )
    return np.repeat(starts, lengths) + local, seg


def group_sums(codes, values, minlength=0):
    """Sum `values` per distinct code. Returns (unique_codes, sums).

    Exact integer arithmetic; codes may be in any order.
    """
    order = np.argsort(codes, kind="stable")
    sc = codes[order]
    sv = values[order]
    if len(sc) == 0:
        return sc, sv
    boundaries = np.flatnonzero(np.concatenate(([True], sc[1:] != sc[:-1])))
    sums = np.add.reduceat(sv, boundaries)
    return sc[boundaries], sums


def segment_max(values, offsets, empty=-1):
    """Per-segment maximum for segments [offsets[i], offsets[i+1]).

    Zero-length segments yield `empty`.
    """
    n = len(offsets) - 1
    out = np.full(n, empty, dtype=values.dtype)
    nonempty = np.diff(offsets) > 0
    if nonempty.any():
        out[nonempty] = np.maximum.reduceat(values, offsets[:-1][nonempty])
    return out


def segment_sum(values, offsets):
    """Per-segment sum for segments [offsets[i], offsets[i+1])."""
    n = len(offsets) - 1
    out = np.zeros(n, dtype=values.dtype)
    nonempty = np.diff(offsets) > 0
    if nonempty.any():
        out[nonempty] = np.add.reduceat(values, offsets[:-1][nonempty])
    return out
