"""Weight scaling that bounds all weights by n**ell while losing only an
additive 1/(4*n**(ell-2)) of approximation ratio.

The map is w -> ceil(n**ell * w / w_max), computed in exact arithmetic, so
the scaled instance has integer weights in [0, n**ell] with the maximum
attained exactly.  ratio_transfer() gives the guarantee that carries back
to the original weights when the scaled instance is solved with ratio rho.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import MkvcError
from .graph import BipartiteInstance


@dataclass(frozen=True)
class ReductionReceipt:
    ell: int
    w_max: object
    n: int
    scale_note: str

    def __post_init__(self):
        if self.ell < 3:
            raise MkvcError("ell must be >= 3")


def scale_weights(inst: BipartiteInstance, ell: int) -> tuple:
    """Return (scaled instance, receipt) with weights ceil(n**ell * w / w_max).

    Topology and budget are unchanged.  Requires at least one positive
    weight; raises "degenerate instance" when w_max == 0.
    """
    if ell < 3:
        raise MkvcError("ell must be >= 3")
    if inst.m == 0:
        raise MkvcError("degenerate instance: no edges to scale")
    w_max = max(w for _, _, w in inst.edges)
    if w_max <= 0:
        raise MkvcError("degenerate instance: all weights are zero")
    n = inst.n
    n_pow = n ** ell
    scaled = []
    for l, r, w in inst.edges:
        scaled.append((l, r, math.ceil(Fraction(n_pow) * Fraction(w) / Fraction(w_max))))
    out = BipartiteInstance(inst.n_left, inst.n_right, scaled, inst.k)
    receipt = ReductionReceipt(
        ell=ell, w_max=w_max, n=n,
        scale_note=f"w -> ceil({n}^{ell} * w / {w_max})",
    )
    assert all(w <= n_pow for _, _, w in out.edges)
    return out, receipt


def ratio_transfer(rho, n: int, ell: int) -> Fraction:
    """Guaranteed ratio on the original instance when the scaled one is
    solved with ratio rho: rho - 1/(4*n**(ell-2))."""
    if n < 2:
        raise MkvcError("n must be >= 2")
    if ell < 3:
        raise MkvcError("ell must be >= 3")
    return Fraction(rho) - Fraction(1, 4 * n ** (ell - 2))
