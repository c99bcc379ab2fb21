"""Exact and floating-point primitives on ±1 and quaternary sequences."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np


class GaussInt(NamedTuple):
    re: int
    im: int

    def __add__(self, other):  # type: ignore[override]
        return GaussInt(self.re + other.re, self.im + other.im)

    def __neg__(self):
        return GaussInt(-self.re, -self.im)

    def __mul__(self, other):  # type: ignore[override]
        return GaussInt(self.re * other.re - self.im * other.im,
                        self.re * other.im + self.im * other.re)

    def conj(self) -> "GaussInt":
        return GaussInt(self.re, -self.im)

    def norm(self) -> int:
        return self.re * self.re + self.im * self.im

    def __complex__(self) -> complex:
        return complex(self.re, self.im)


ONE = GaussInt(1, 0)
I = GaussInt(0, 1)
MINUS_ONE = GaussInt(-1, 0)
MINUS_I = GaussInt(0, -1)
# i**k for k = 0..3
UNITS = (ONE, I, MINUS_ONE, MINUS_I)
ZERO = GaussInt(0, 0)


@dataclass(frozen=True)
class PM1Sequence:
    entries: tuple[int, ...]

    def __post_init__(self):
        if len(self.entries) < 1:
            raise ValueError("sequence must be nonempty")
        for a in self.entries:
            if a not in (1, -1):
                raise ValueError(f"entry {a!r} is not +1 or -1")

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, j):
        return self.entries[j]


@dataclass(frozen=True)
class QuaternarySequence:
    entries: tuple[GaussInt, ...]

    def __post_init__(self):
        if len(self.entries) < 1:
            raise ValueError("sequence must be nonempty")
        for a in self.entries:
            if a not in UNITS:
                raise ValueError(f"entry {a!r} is not one of 1, -1, i, -i")

    @classmethod
    def from_values(cls, values: Iterable) -> "QuaternarySequence":
        return cls(tuple(_to_gauss(v) for v in values))

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, j):
        return self.entries[j]


@dataclass(frozen=True)
class Spectrum:
    values: tuple[float, ...]

    @property
    def order(self) -> int:
        return len(self.values)


def _to_gauss(v) -> GaussInt:
    if isinstance(v, GaussInt):
        return v
    if isinstance(v, tuple) and len(v) == 2:
        return GaussInt(int(v[0]), int(v[1]))
    c = complex(v)
    if c.real != int(c.real) or c.imag != int(c.imag):
        raise ValueError(f"{v!r} is not a Gaussian integer")
    return GaussInt(int(c.real), int(c.imag))


def as_pm1(seq) -> PM1Sequence:
    return seq if isinstance(seq, PM1Sequence) else PM1Sequence(tuple(int(a) for a in seq))


def as_quaternary(seq) -> QuaternarySequence:
    return seq if isinstance(seq, QuaternarySequence) else QuaternarySequence.from_values(seq)


def _check_shift(shift: int, n: int) -> None:
    if not 0 <= shift < n:
        raise IndexError(f"shift {shift} outside [0, {n})")


def paf(seq, shift: int) -> int:
    """Periodic autocorrelation of a ±1 sequence at ``shift``."""
    a = as_pm1(seq).entries
    n = len(a)
    _check_shift(shift, n)
    return sum(a[j] * a[(j + shift) % n] for j in range(n))


def paf_all(seq) -> tuple[int, ...]:
    a = as_pm1(seq).entries
    n = len(a)
    return tuple(sum(a[j] * a[(j + s) % n] for j in range(n)) for s in range(n))


def npaf(seq, shift: int) -> GaussInt:
    """Nonperiodic autocorrelation sum_j a_j * conj(a_{j+shift}), exactly."""
    a = as_quaternary(seq).entries
    n = len(a)
    _check_shift(shift, n)
    re = im = 0
    for j in range(n - shift):
        x, y = a[j], a[j + shift]
        # x * conj(y)
        re += x.re * y.re + x.im * y.im
        im += x.im * y.re - x.re * y.im
    return GaussInt(re, im)


def npaf_all(seq) -> tuple[GaussInt, ...]:
    q = as_quaternary(seq)
    return tuple(npaf(q, s) for s in range(len(q)))


def psd(seq, k: int) -> float:
    """|sum_j a_j exp(2 pi i j k / n)|^2 by direct summation."""
    a = as_pm1(seq).entries
    n = len(a)
    _check_shift(k, n)
    re = im = 0.0
    for j, x in enumerate(a):
        t = 2.0 * math.pi * ((j * k) % n) / n
        re += x * math.cos(t)
        im += x * math.sin(t)
    return re * re + im * im


def psd_all(seq) -> Spectrum:
    a = np.asarray(as_pm1(seq).entries, dtype=float)
    vals = np.abs(np.fft.fft(a)) ** 2
    return Spectrum(tuple(float(v) for v in vals))


def psd_array(rows: np.ndarray) -> np.ndarray:
    """Vectorised PSD of each row of a 2-D ±1 array."""
    return np.abs(np.fft.fft(np.asarray(rows, dtype=float), axis=-1)) ** 2


def unit_circle_values(seq, samples: int) -> tuple[np.ndarray, np.ndarray]:
    """Angles and |f(e^{i theta})|^2 at ``samples`` equispaced points."""
    q = as_quaternary(seq)
    coeffs = np.array([complex(a) for a in q.entries])
    # polynomial evaluated via FFT of the zero-padded coefficients
    m = max(samples, len(coeffs))
    vals = np.abs(np.fft.ifft(coeffs, n=m) * m) ** 2
    theta = 2.0 * np.pi * np.arange(m) / m
    return theta, vals


def lipschitz_margin(seq, samples: int) -> float:
    nf = npaf_all(seq)
    lip = 2.0 * sum(s * math.sqrt(v.norm()) for s, v in enumerate(nf) if s >= 1)
    return lip * math.pi / samples


def unit_circle_max(seq, samples: int) -> float:
    """Certified upper bound on max |f(z)|^2 over the unit circle.

    The sampled maximum on an equispaced grid is lifted by L*pi/samples where
    L = 2*sum_s s*|N_f(s)| bounds d|f|^2/dtheta.
    """
    q = as_quaternary(seq)
    n = len(q)
    if samples < 4 * n:
        raise ValueError(f"samples must be at least 4n = {4 * n}")
    _, vals = unit_circle_values(q, samples)
    return float(vals.max()) + lipschitz_margin(q, samples)


def argmax_angle(seq, samples: int) -> float:
    theta, vals = unit_circle_values(seq, samples)
    return float(theta[int(np.argmax(vals))])


def poly_abs2(seq, z: complex | np.ndarray):
    q = as_quaternary(seq)
    coeffs = np.array([complex(a) for a in q.entries])
    return np.abs(np.polyval(coeffs[::-1], z)) ** 2
