"""Weighted simplicial complexes, their random walks, and contraction bounds."""

import json as _json

from ._core import *  # noqa: F401,F403
from ._core import HdxError, analyze as _analyze


def analyze(complex, checks="all", seed=42, functions=1000, restarts=64, timing=True):
    """Run the verification suites and return the report as a dict."""
    return _json.loads(_analyze(complex, checks, seed, functions, restarts, timing))


__all__ = [name for name in dir() if not name.startswith("_")]
