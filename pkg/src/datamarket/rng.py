"""Seed-path substreams for reproducible simulations.

Every random choice in a run draws from its own stream, derived from the
run seed plus a label path such as ``("assign", t, buyer_id, dataset_id)``.
Streams never share state, so adding a player or a dataset leaves every
other draw in the run untouched.
"""

from __future__ import annotations

import hashlib
import random
from typing import Union

Label = Union[int, str]


def substream_seed(root: int, *path: Label) -> int:
    """Derive a 64-bit seed from a root seed and a label path."""
    material = ":".join([str(int(root)), *(str(p) for p in path)])
    digest = hashlib.sha256(material.encode("ascii")).digest()
    return int.from_bytes(digest[:8], "big")


def substream(root: int, *path: Label) -> random.Random:
    """A private PRNG for one purpose, keyed by `root` and `path`."""
    return random.Random(substream_seed(root, *path))
