"""Midpoint staircasing of graded layers into piecewise-constant stacks."""
from __future__ import annotations

from ..media.radial import Layer, LayerCoeff, RadialMedium


def staircase(medium: RadialMedium, layer_count: int) -> RadialMedium:
    """Replace each graded layer by `layer_count` constant sublayers.

    Coefficients are sampled at sublayer midpoints; constant layers pass
    through untouched.  Refinement metadata is kept in the provenance so a
    run can be reproduced or Richardson-refined.
    """
    if layer_count < 1:
        raise ValueError("layer_count must be >= 1")
    out = []
    for layer in medium.layers:
        if layer.is_constant:
            out.append(layer)
            continue
        width = (layer.r_hi - layer.r_lo) / layer_count
        for j in range(layer_count):
            lo = layer.r_lo + j * width
            hi = layer.r_lo + (j + 1) * width if j < layer_count - 1 else layer.r_hi
            mid = 0.5 * (lo + hi)
            er, et = layer.eps.at(mid)
            mr, mt = layer.mu.at(mid)
            out.append(Layer(lo, hi, LayerCoeff(rad=er, tan=et),
                             LayerCoeff(rad=mr, tan=mt)))
    prov = dict(medium.provenance)
    prov["staircase"] = {"layer_count": layer_count}
    return RadialMedium(layers=tuple(out), provenance=prov)


def graded_midpoints(medium: RadialMedium, r_lo: float, r_hi: float) -> list[float]:
    """Midpoint radii of the constant layers contained in (r_lo, r_hi).

    On a staircased medium these are the sampling radii of the former graded
    shell, where the piecewise-constant medium agrees with the profile.
    """
    mids = []
    for layer in medium.layers:
        if layer.r_lo >= r_lo - 1e-12 and layer.r_hi <= r_hi + 1e-12:
            mids.append(0.5 * (layer.r_lo + layer.r_hi))
    return mids
