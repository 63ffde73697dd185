"""Named random substreams derived from one root seed."""

import hashlib

import numpy as np


def substream(root: int, name: str) -> int:
    digest = hashlib.sha256(f"{int(root)}/{name}".encode()).digest()
    return int.from_bytes(digest[:8], "little")


def rng_for(root: int, name: str) -> np.random.Generator:
    return np.random.default_rng(substream(root, name))
