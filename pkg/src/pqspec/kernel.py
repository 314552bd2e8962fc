"""Backend selection for the integrator and dense-output evaluation.

The compiled ``_kernel`` extension is used when it imports; otherwise the
pure-Python twin ``_pykernel``. Set ``PQSPEC_PURE_PYTHON=1`` to force the
fallback.
"""
from __future__ import annotations

import os

import numpy as np

from . import _pykernel
from .config import PURE_PYTHON_ENV

_compiled = None
if os.environ.get(PURE_PYTHON_ENV, "") not in ("1", "true", "yes"):
    try:
        from . import _kernel as _compiled
    except ImportError:  # extension not built
        _compiled = None

BACKENDS = {"python": _pykernel}
if _compiled is not None:
    BACKENDS["cython"] = _compiled

_active = _compiled if _compiled is not None else _pykernel
BACKEND = _active.BACKEND

STATUS_END = 0
STATUS_ZEROS = 1
STATUS_UNDERFLOW = -1
STATUS_BUDGET = -2


def integrate(nm1, p, q, mu, x0, y0, x_end, max_zeros, rtol, atol, h0, max_steps, backend=None):
    """Run the Dormand-Prince kernel; ``y0 = (u, w, Q)``. Returns a :class:`DenseSolution`."""
    mod = _active if backend is None else BACKENDS[backend]
    xs, ys, dense, nzeros, status = mod.integrate(
        int(nm1), float(p), float(q), float(mu), float(x0),
        float(y0[0]), float(y0[1]), float(y0[2]), float(x_end),
        int(max_zeros), float(rtol), float(atol), float(h0), int(max_steps),
    )
    return DenseSolution(xs, ys, dense, nzeros, status)


class DenseSolution:
    """Accepted steps plus the continuous quartic interpolant between them."""

    def __init__(self, xs, ys, dense, nzeros, status):
        self.xs = xs
        self.ys = ys
        self.dense = dense
        self.nzeros = nzeros
        self.status = status

    @property
    def x_last(self) -> float:
        return float(self.xs[-1])

    def __call__(self, x, component=None):
        """Evaluate the interpolant at ``x`` (scalar or array) inside ``[xs[0], xs[-1]]``."""
        x = np.asarray(x, dtype=float)
        idx = np.searchsorted(self.xs, x, side="right") - 1
        idx = np.clip(idx, 0, len(self.dense) - 1)
        x0 = self.xs[idx]
        h = self.xs[idx + 1] - x0
        theta = (x - x0) / h
        r = self.dense[idx]  # (..., 5, 3)
        t = theta[..., None]
        t1 = 1.0 - t
        y = r[..., 0, :] + t * (r[..., 1, :] + t1 * (r[..., 2, :] + t * (r[..., 3, :] + t1 * r[..., 4, :])))
        if component is None:
            return y
        return y[..., component]

    def sign_change_brackets(self):
        """Index pairs ``(i, j)`` of accepted points with u of opposite sign and u = 0 between."""
        u = self.ys[:, 0]
        out = []
        prev = None
        for i, val in enumerate(u):
            if val == 0.0:
                continue
            if prev is not None and np.sign(val) != np.sign(u[prev]):
                out.append((prev, i))
            prev = i
        return out
