"""Kernel backend selection.

The compiled extension is used when it imports cleanly; otherwise the
pure-numpy twin takes over. `UQDBENCH_BACKEND=python|compiled` forces a
choice (forcing `compiled` raises if the extension is unavailable).
"""

import os

from uqdbench import _kernels_py

_FUNCS = ("philox_blocks", "philox_many", "u64_to_unit", "det_log",
          "gauss_from_unit", "fk_xy", "neg_joint_variance", "seq_mean_var")


def _select():
    choice = os.environ.get("UQDBENCH_BACKEND", "auto").lower()
    if choice not in ("auto", "python", "compiled"):
        raise ValueError(f"UQDBENCH_BACKEND must be auto|python|compiled, got {choice!r}")
    if choice == "python":
        return "python", _kernels_py
    try:
        from uqdbench import _kernels
    except ImportError:
        if choice == "compiled":
            raise ImportError("UQDBENCH_BACKEND=compiled but uqdbench._kernels "
                              "is not built; reinstall with a C toolchain")
        return "python", _kernels_py
    return "compiled", _kernels


BACKEND, _impl = _select()

philox_blocks = _impl.philox_blocks
philox_many = _impl.philox_many
u64_to_unit = _impl.u64_to_unit
det_log = _impl.det_log
gauss_from_unit = _impl.gauss_from_unit
fk_xy = _impl.fk_xy
neg_joint_variance = _impl.neg_joint_variance
seq_mean_var = _impl.seq_mean_var
