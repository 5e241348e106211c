from __future__ import annotations

from importlib.metadata import PackageNotFoundError
from importlib.metadata import version as _v


def get_version() -> str:
    try:
        return _v("fglab")
    except PackageNotFoundError:
        return "unknown"
