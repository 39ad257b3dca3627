"""Scaled complex arithmetic: values carried as mantissa * 10**exp10.

High-order radial functions overflow or underflow double precision long
before the quantities built from them do (products, ratios, Wronskians).
Everything order-sensitive in this package is therefore computed on
(mantissa, decimal exponent) pairs and collapsed to a plain complex only
at the end.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

_LOG10 = math.log(10.0)


def _split(values):
    """Normalize an ndarray of complex values into (mantissa, exp10)."""
    values = np.asarray(values, dtype=complex)
    mag = np.abs(values)
    e = np.zeros(values.shape, dtype=np.int64)
    nz = mag > 0.0
    e[nz] = np.floor(np.log10(mag[nz])).astype(np.int64)
    m = np.where(nz, values / (10.0 ** e.astype(float)), 0.0 + 0.0j)
    return m, e


class ScaledArray:
    """Elementwise mantissa * 10**exp10 representation of a complex array."""

    __slots__ = ("m", "e")

    def __init__(self, m, e, normalize: bool = True):
        self.m = np.asarray(m, dtype=complex)
        self.e = np.asarray(e, dtype=np.int64)
        if self.e.shape != self.m.shape:
            self.e = np.broadcast_to(self.e, self.m.shape).copy()
        if normalize:
            self._renormalize()

    def _renormalize(self):
        mag = np.abs(self.m)
        nz = mag > 0.0
        shift = np.zeros(self.m.shape, dtype=np.int64)
        shift[nz] = np.floor(np.log10(mag[nz])).astype(np.int64)
        self.m = np.where(nz, self.m / (10.0 ** shift.astype(float)), 0.0 + 0.0j)
        self.e = np.where(nz, self.e + shift, 0)

    @classmethod
    def from_complex(cls, values):
        m, e = _split(values)
        return cls(m, e, normalize=False)

    @classmethod
    def zeros(cls, shape):
        return cls(np.zeros(shape, dtype=complex), np.zeros(shape, dtype=np.int64),
                   normalize=False)

    @property
    def shape(self):
        return self.m.shape

    def copy(self):
        return ScaledArray(self.m.copy(), self.e.copy(), normalize=False)

    def __getitem__(self, idx):
        return ScaledArray(self.m[idx], self.e[idx], normalize=False)

    def __mul__(self, other):
        if isinstance(other, ScaledArray):
            return ScaledArray(self.m * other.m, self.e + other.e)
        om, oe = _split(other)
        return ScaledArray(self.m * om, self.e + oe)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, ScaledArray):
            with np.errstate(divide="ignore", invalid="ignore"):
                m = np.where(other.m != 0, self.m / other.m, np.inf + 0j)
            return ScaledArray(m, self.e - other.e)
        om, oe = _split(other)
        with np.errstate(divide="ignore", invalid="ignore"):
            m = np.where(om != 0, self.m / om, np.inf + 0j)
        return ScaledArray(m, self.e - oe)

    def __rtruediv__(self, other):
        return ScaledArray.from_complex(other) / self

    def __add__(self, other):
        if not isinstance(other, ScaledArray):
            other = ScaledArray.from_complex(other)
        # align to the larger exponent; the smaller term may flush to zero
        e = np.maximum(self.e, other.e)
        da = np.clip(self.e - e, -400, 0).astype(float)
        db = np.clip(other.e - e, -400, 0).astype(float)
        m = self.m * 10.0 ** da + other.m * 10.0 ** db
        return ScaledArray(m, e)

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, ScaledArray):
            other = ScaledArray.from_complex(other)
        return self + ScaledArray(-other.m, other.e, normalize=False)

    def __rsub__(self, other):
        return ScaledArray.from_complex(other) - self

    def __neg__(self):
        return ScaledArray(-self.m, self.e, normalize=False)

    def conj(self):
        return ScaledArray(np.conj(self.m), self.e, normalize=False)

    def scale10(self, log10_factor):
        """Multiply by 10**log10_factor (real, possibly fractional)."""
        log10_factor = np.asarray(log10_factor, dtype=float)
        ip = np.floor(log10_factor)
        frac = log10_factor - ip
        return ScaledArray(self.m * 10.0 ** frac, self.e + ip.astype(np.int64))

    def abs(self):
        return ScaledArray(np.abs(self.m).astype(complex), self.e, normalize=False)

    def log10_abs(self):
        """log10 of magnitude; -inf where zero."""
        mag = np.abs(self.m)
        out = np.full(self.m.shape, -np.inf)
        nz = mag > 0
        out[nz] = np.log10(mag[nz]) + self.e[nz]
        return out

    def to_complex(self, strict: bool = False):
        """Collapse to plain complex; overflow becomes inf, underflow 0.

        With strict=True an overflow raises instead.
        """
        if strict and np.any((self.e > 300) & (self.m != 0)):
            raise OverflowError("scaled value exceeds double range")
        ef = np.clip(self.e.astype(float), -330, 330)
        with np.errstate(over="ignore", under="ignore"):
            out = self.m * 10.0 ** ef
        return out if out.shape else complex(out)

    def item(self):
        m = self.m.reshape(-1)
        e = self.e.reshape(-1)
        if m.size != 1:
            raise ValueError("item() needs a single-element array")
        return ScaledComplex(complex(m[0]), int(e[0]))

    def __repr__(self):
        return f"ScaledArray(m={self.m!r}, e={self.e!r})"


@dataclass(frozen=True)
class ScaledComplex:
    """Scalar mantissa * 10**exp10 pair (the overflow-guard return type)."""

    mantissa: complex
    exp10: int

    def to_complex(self):
        return ScaledArray.from_complex(self.mantissa).scale10(self.exp10).to_complex()

    def as_array(self):
        return ScaledArray(np.asarray(self.mantissa), np.asarray(self.exp10))

    def __abs__(self):
        return abs(self.mantissa) * 10.0 ** min(self.exp10, 308)


def collapse(value):
    """Plain complex from a ScaledArray/ScaledComplex/number."""
    if isinstance(value, ScaledArray):
        return value.to_complex()
    if isinstance(value, ScaledComplex):
        return value.to_complex()
    return value
