"""Kernel selector: compiled extension if built, pure Python otherwise.

Set ``COXKIT_PURE_PY=1`` to force the fallback (used by the benchmark and
the parity tests).
"""

from __future__ import annotations

import os

if os.environ.get("COXKIT_PURE_PY"):
    from coxkit import _wordops_py as _impl
else:
    try:
        from coxkit import _wordops_c as _impl  # type: ignore[attr-defined]
    except ImportError:
        from coxkit import _wordops_py as _impl

IMPL = _impl.IMPL
braid_closure = _impl.braid_closure
collect_seq = _impl.collect_seq
collect_mul = _impl.collect_mul
collect_inv = _impl.collect_inv

from coxkit._wordops_py import CollectionOrderError  # noqa: E402  (shared error type)
