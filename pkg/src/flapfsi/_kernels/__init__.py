"""Kernel backend selection: compiled extension with numpy fallback.

The compiled kernels are an optional build product; if the extension is
missing (or FLAPFSI_KERNELS=numpy is set) the pure-numpy implementations are
used. Both expose the same functions and are cross-checked in the test suite
and the ``bench kernels`` report.
"""

import os

from . import numpy_backend

_requested = os.environ.get("FLAPFSI_KERNELS", "auto").lower()

if _requested == "numpy":
    impl = numpy_backend
elif _requested in ("auto", "cython"):
    try:
        from . import _cykernels as impl  # type: ignore[no-redef]
    except ImportError:
        if _requested == "cython":
            raise ImportError(
                "FLAPFSI_KERNELS=cython but the compiled extension is not "
                "available; rebuild the package or unset the variable")
        impl = numpy_backend
else:
    raise ValueError(f"unknown FLAPFSI_KERNELS value {_requested!r}")

advdiff = impl.advdiff
divergence = impl.divergence
ib_interp = impl.ib_interp
ib_spread = impl.ib_spread
PAD = numpy_backend.PAD


def backend_name() -> str:
    return impl.NAME


def available_backends():
    names = ["numpy"]
    try:
        from . import _cykernels  # noqa: F401
        names.append("cython")
    except ImportError:
        pass
    return names


def get_backend(name: str):
    if name == "numpy":
        return numpy_backend
    if name == "cython":
        from . import _cykernels
        return _cykernels
    raise ValueError(f"unknown backend {name!r}")
