"""Kernel backend selection.

The compiled extension is preferred when present; the numpy implementation is
the fallback. ``LOADCAST_KERNELS`` overrides: ``auto`` (default), ``cython``
(fail loudly if the extension is missing), or ``python``.
"""

from __future__ import annotations

import os

from . import kernels_py

ENV_VAR = "LOADCAST_KERNELS"
_CHOICES = ("auto", "cython", "python")


def _load_extension():
    from . import _kernels  # noqa: PLC0415
    return _kernels


def select_backend(choice: str | None = None):
    """Return ``(kernel_module, backend_name)`` for the requested choice."""
    if choice is None:
        choice = os.environ.get(ENV_VAR, "auto")
    choice = choice.strip().lower()
    if choice not in _CHOICES:
        raise ValueError(f"{ENV_VAR} must be one of {_CHOICES}, got {choice!r}")
    if choice == "python":
        return kernels_py, "python"
    try:
        return _load_extension(), "cython"
    except ImportError:
        if choice == "cython":
            raise
        return kernels_py, "python"


def available_backends() -> dict[str, object]:
    """Every importable kernel backend, keyed by name."""
    backends: dict[str, object] = {"python": kernels_py}
    try:
        backends["cython"] = _load_extension()
    except ImportError:
        pass
    return backends


kernels, KERNEL_BACKEND = select_backend()
