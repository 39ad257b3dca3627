"""Mode bookkeeping and the surface-current source model.

The source is a tangential electric current sheet on a sphere with finite
vector-harmonic content: J_s = sum over modes of a * Vtilde (TE) or
a * Utilde (TM) on |x| = radius.  Sheet sources keep every mode decoupled,
and any radiating source outside the structure is representable in this
class for exterior observation.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, NamedTuple

TE = "TE"
TM = "TM"


class ModeId(NamedTuple):
    n: int
    m: int
    pol: str


def mode(n: int, m: int, pol: str) -> ModeId:
    if n < 1:
        raise ValueError("Maxwell modes need n >= 1")
    if abs(m) > n:
        raise ValueError("|m| > n")
    if pol not in (TE, TM):
        raise ValueError(f"polarization must be {TE!r} or {TM!r}")
    return ModeId(n, m, pol)


@dataclass(frozen=True)
class SurfaceCurrentSource:
    radius: float
    amplitudes: Dict[ModeId, complex]

    def __post_init__(self):
        if self.radius <= 0:
            raise ValueError("source radius must be positive")
        if not self.amplitudes:
            raise ValueError("source needs at least one mode entry")
        normalized = {mode(*key): complex(val)
                      for key, val in self.amplitudes.items()}
        object.__setattr__(self, "amplitudes", normalized)

    @property
    def n_max(self) -> int:
        return max(k.n for k in self.amplitudes)

    def radial_keys(self):
        """The distinct (n, pol) pairs, which is what the radial solve needs."""
        return sorted({(k.n, k.pol) for k in self.amplitudes})

    def l2_norm_sq(self) -> float:
        """Squared sheet L2 norm, the artifact's realization of ||J||^2."""
        return self.radius ** 2 * sum(abs(a) ** 2 for a in self.amplitudes.values())


def h_jump_factor(pol: str) -> complex:
    """Tangential-H jump produced by a unit sheet amplitude.

    nu x [H] = J_s gives Delta H_U = +a for a TE sheet (a Vtilde) and
    Delta H_V = -a for a TM sheet (a Utilde).
    """
    return 1.0 + 0.0j if pol == TE else -1.0 + 0.0j
