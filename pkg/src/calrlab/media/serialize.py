"""JSON round-trip for radial media (schema documented in docs/schemas.md)."""
from __future__ import annotations

import json
import math

from .radial import Layer, LayerCoeff, RadialMedium, make_cm_cloak, make_dcm_example, make_superlens, vacuum_medium


def _coeff_json(c: LayerCoeff):
    if not c.is_constant:
        return {"kind": "graded"}
    rad, tan = complex(c.rad), complex(c.tan)
    return {"kind": "constant",
            "rad": [rad.real, rad.imag], "tan": [tan.real, tan.imag]}


def medium_to_json(medium: RadialMedium) -> str:
    layers = []
    for layer in medium.layers:
        layers.append({
            "r_lo": layer.r_lo,
            "r_hi": None if math.isinf(layer.r_hi) else layer.r_hi,
            "eps": _coeff_json(layer.eps),
            "mu": _coeff_json(layer.mu),
        })
    return json.dumps({"schema": "calrlab.radial_medium/1",
                       "breakpoints": medium.breakpoints,
                       "layers": layers,
                       "provenance": medium.provenance}, indent=2)


def _coeff_from_json(d) -> LayerCoeff:
    if d["kind"] != "constant":
        raise ValueError("graded layers require constructor provenance to rebuild")
    return LayerCoeff(rad=complex(*d["rad"]), tan=complex(*d["tan"]))


def medium_from_json(text: str) -> RadialMedium:
    data = json.loads(text)
    if data.get("schema") != "calrlab.radial_medium/1":
        raise ValueError("unknown medium schema")
    prov = data.get("provenance", {})
    ctor = prov.get("constructor")
    if ctor == "dcm_example":
        return make_dcm_example(prov["r1"], prov["r2"], prov["p"], prov["delta"])
    if ctor == "superlens":
        o = prov["object"]
        return make_superlens(prov["r0"], prov["m"],
                              (complex(o[0], o[1]), complex(o[2], o[3])),
                              prov["delta"], r1=prov["r1"])[0]
    if ctor == "cm_cloak":
        return make_cm_cloak(prov["r2"], prov["r3"], None, prov["delta"])
    if ctor == "vacuum":
        return vacuum_medium()
    layers = []
    for entry in data["layers"]:
        r_hi = math.inf if entry["r_hi"] is None else entry["r_hi"]
        layers.append(Layer(entry["r_lo"], r_hi,
                            _coeff_from_json(entry["eps"]),
                            _coeff_from_json(entry["mu"])))
    return RadialMedium(layers=tuple(layers), provenance=prov)
