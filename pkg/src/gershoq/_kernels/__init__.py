"""Kernel backend selection.

The compiled Cython kernel is used when importable; otherwise the pure
numpy backend. ``GQ_KERNEL=pure`` or ``GQ_KERNEL=compiled`` forces one.
"""

import os

_forced = os.environ.get("GQ_KERNEL", "").strip().lower()

if _forced in ("pure", "python"):
    from . import _pure as impl
elif _forced in ("compiled", "cython", "speed"):
    from . import _speed as impl  # type: ignore[attr-defined]
elif _forced in ("", "auto"):
    try:
        from . import _speed as impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _pure as impl
else:
    raise ImportError(f"GQ_KERNEL={_forced!r}: expected 'pure', 'compiled' or 'auto'")

BACKEND = impl.BACKEND

OK = impl.OK
TOO_LARGE = impl.TOO_LARGE
NO_CONV = impl.NO_CONV

pdf_one = impl.pdf_one
pm = impl.pm
hpow = impl.hpow
mom2 = impl.mom2
momr = impl.momr
cellmom = impl.cellmom
extend = impl.extend
sweep = impl.sweep
split2 = impl.split2
