# -*- coding: utf-8 -*-

"""Utilities for procaug."""

import hashlib
import os
import tempfile
from typing import Union

import numpy as np

from .constants import AUGMENTED_SUFFIX, VERSION

__all__ = [
    'get_version',
    'derive_seed',
    'make_rng',
    'provenance',
    'atomic_write',
]


def get_version() -> str:
    """Return the software version of procaug."""
    return VERSION


def derive_seed(*parts: Union[str, int]) -> int:
    """Derive a 63-bit seed from the given parts, independent of the Python hash seed."""
    digest = hashlib.sha256('\x1f'.join(str(part) for part in parts).encode('utf-8')).digest()
    return int.from_bytes(digest[:8], 'big') >> 1


def make_rng(*parts: Union[str, int]) -> np.random.Generator:
    """Build a seeded generator from the given parts."""
    return np.random.default_rng(derive_seed(*parts))


def provenance(document_id: str) -> str:
    """Return the id of the original document a (possibly synthetic) document was derived from.

    >>> provenance('doc-3-aug1')
    'doc-3'
    >>> provenance('doc-3')
    'doc-3'
    """
    head, sep, tail = document_id.rpartition(AUGMENTED_SUFFIX)
    if sep and head and tail.isdigit():
        return head
    return document_id


def atomic_write(path: str, data: Union[str, bytes]) -> None:
    """Write the data to the path such that either the full content or nothing is written."""
    if isinstance(data, str):
        data = data.encode('utf-8')
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp_path = tempfile.mkstemp(dir=directory, prefix='.tmp-')
    try:
        with os.fdopen(fd, 'wb') as file:
            file.write(data)
        os.replace(tmp_path, path)
    except BaseException:
        if os.path.exists(tmp_path):
            os.remove(tmp_path)
        raise
