"""Truncated power series with real coefficients.

A :class:`PowerSeries` of order ``M`` stores ``c_0 .. c_M``; everything
above ``M`` is unknown rather than zero, so every operation takes the
truncation order explicitly and never reads past it.
"""
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class PowerSeries:
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=float)
        if c.ndim != 1 or c.size == 0:
            raise ValueError("coefficients must be a non-empty 1-d sequence")
        c.flags.writeable = False
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def from_coeffs(cls, coeffs, order):
        """Pad with zeros or cut so that the result has exactly ``order``."""
        c = np.zeros(order + 1)
        src = np.asarray(coeffs, dtype=float)[: order + 1]
        c[: src.size] = src
        return cls(c)

    @property
    def order(self):
        return self.coeffs.size - 1

    def __len__(self):
        return self.coeffs.size

    def __getitem__(self, n):
        return self.coeffs[n]

    def __call__(self, z):
        """Horner evaluation at scalar or array ``z`` (real or complex)."""
        z = np.asarray(z)
        acc = np.full(z.shape, self.coeffs[-1], dtype=np.result_type(z, float))
        for c in self.coeffs[-2::-1]:
            acc = acc * z + c
        return acc[()] if acc.ndim == 0 else acc

    def remainder_bound(self, radius):
        """Size of the last retained term at ``radius``; used as a tail proxy."""
        return abs(self.coeffs[-1]) * radius ** self.order


def multiply(a, b, order):
    """Cauchy product truncated at ``order``."""
    a = np.asarray(getattr(a, "coeffs", a), dtype=float)[: order + 1]
    b = np.asarray(getattr(b, "coeffs", b), dtype=float)[: order + 1]
    return PowerSeries.from_coeffs(np.convolve(a, b)[: order + 1], order)


def compose_poly(p, s, order):
    """``p(s(z))`` truncated at ``order``, by Horner over ``p``'s coefficients."""
    p = np.asarray(getattr(p, "coeffs", p), dtype=float)
    s = np.asarray(getattr(s, "coeffs", s), dtype=float)[: order + 1]
    acc = np.zeros(order + 1)
    acc[0] = p[-1]
    for c in p[-2::-1]:
        acc = np.convolve(acc, s)[: order + 1]
        if acc.size < order + 1:
            acc = np.pad(acc, (0, order + 1 - acc.size))
        acc[0] += c
    return PowerSeries(acc)
