"""Backend selection for the candidate-checking kernels.

The compiled extension is used when it imports; otherwise the pure-Python
module with the same functions is used.  Set ``CHROMEM_PURE_PYTHON=1`` to
force the fallback.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

from . import _kernels_py

try:
    if os.environ.get("CHROMEM_PURE_PYTHON"):
        raise ImportError("pure Python requested")
    from . import _kernels as _compiled
except ImportError:
    _compiled = None

BACKENDS = {"python": _kernels_py}
if _compiled is not None:
    BACKENDS["compiled"] = _compiled

DEFAULT_BACKEND = "compiled" if _compiled is not None else "python"


def get_backend(name: str | None = None):
    name = name or DEFAULT_BACKEND
    try:
        return BACKENDS[name]
    except KeyError:
        raise ValueError(f"kernel backend {name!r} is not available; have {sorted(BACKENDS)}") from None


@dataclass(frozen=True)
class FlatArena:
    """Integer arrays describing an arena, in the layout the kernels expect."""

    n: int
    C: int
    owner: list
    out_ptr: list
    out_edges: list
    e_tgt: list
    e_col: list

    @classmethod
    def of(cls, arena) -> "FlatArena":
        out_ptr = [0]
        out_edges = []
        for v in range(arena.n):
            out_edges.extend(arena.out[v])
            out_ptr.append(len(out_edges))
        return cls(arena.n, len(arena.colors), list(arena.owner), out_ptr, out_edges,
                   list(arena.edge_target), list(arena.edge_color))

    def args(self):
        return (self.n, self.owner, self.out_ptr, self.out_edges, self.e_tgt, self.e_col, self.C)
