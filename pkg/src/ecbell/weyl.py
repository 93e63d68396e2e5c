"""Phase bookkeeping for products of single-mode displacement operators.

A :class:`DisplacementLabel` stands for the operator ``exp(i*phase) D(amplitude)``.
Products of labels follow the Weyl composition law

    D(z) D(z') = exp((z z'^* - z^* z') / 2) D(z + z')

whose exponent is purely imaginary, ``i * Im(z z'^*)``, so only a real
angle needs to be carried around. No matrices are involved here; see
:mod:`ecbell.fock` for the matrix realization.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class ComplexAmplitude:
    """Complex displacement parameter ``re + i*im``."""

    re: float
    im: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.re) and math.isfinite(self.im)):
            raise ValueError(f"amplitude must be finite, got ({self.re}, {self.im})")
        # normalise ints and numpy scalars to plain floats
        object.__setattr__(self, "re", float(self.re))
        object.__setattr__(self, "im", float(self.im))

    @classmethod
    def from_complex(cls, z: complex) -> ComplexAmplitude:
        z = complex(z)
        return cls(z.real, z.imag)

    def __complex__(self) -> complex:
        return complex(self.re, self.im)

    def __add__(self, other):
        other = as_amplitude(other)
        return ComplexAmplitude(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return ComplexAmplitude(-self.re, -self.im)

    def __sub__(self, other):
        return self + (-as_amplitude(other))

    def conj(self) -> ComplexAmplitude:
        return ComplexAmplitude(self.re, -self.im)

    def abs2(self) -> float:
        return self.re * self.re + self.im * self.im

    def __abs__(self) -> float:
        return math.hypot(self.re, self.im)


def as_amplitude(z) -> ComplexAmplitude:
    """Coerce a number, ``complex`` or ``(re, im)`` pair to :class:`ComplexAmplitude`."""
    if isinstance(z, ComplexAmplitude):
        return z
    if isinstance(z, (tuple, list)):
        re, im = z
        return ComplexAmplitude(re, im)
    return ComplexAmplitude.from_complex(z)


def wrap_phase(phi: float) -> float:
    """Reduce an angle to the half-open interval (-pi, pi]."""
    r = math.remainder(phi, TWO_PI)
    if r <= -math.pi:
        r += TWO_PI
    return r


@dataclass(frozen=True)
class DisplacementLabel:
    amplitude: ComplexAmplitude
    phase: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "amplitude", as_amplitude(self.amplitude))
        if not math.isfinite(self.phase):
            raise ValueError("phase must be finite")
        object.__setattr__(self, "phase", wrap_phase(float(self.phase)))

    def inverse(self) -> DisplacementLabel:
        # (e^{i phi} D(z))^{-1} = e^{-i phi} D(-z)
        return DisplacementLabel(-self.amplitude, -self.phase)

    def factor(self) -> complex:
        """The scalar prefactor ``exp(i*phase)``."""
        return complex(math.cos(self.phase), math.sin(self.phase))


def label(z, phase: float = 0.0) -> DisplacementLabel:
    return DisplacementLabel(as_amplitude(z), phase)


def weyl_phase(z, zp) -> float:
    """Angle of the Weyl cocycle, ``Im(z * conj(zp))``."""
    z, zp = as_amplitude(z), as_amplitude(zp)
    return z.im * zp.re - z.re * zp.im


def compose(left: DisplacementLabel, right: DisplacementLabel) -> DisplacementLabel:
    """Label of the operator product ``left @ right``."""
    phase = left.phase + right.phase + weyl_phase(left.amplitude, right.amplitude)
    return DisplacementLabel(left.amplitude + right.amplitude, phase)


class Sandwich(str, Enum):
    """Which conjugation by ``D(i*eta)`` to apply.

    ``DAG_POS`` is ``D(i eta)^dag D(z) D(i eta)``, ``POS_NEG`` is
    ``D(i eta) D(z) D(-i eta)`` and ``POS_POS`` is ``D(i eta) D(z) D(i eta)``.
    """

    DAG_POS = "dag_pos"
    POS_NEG = "pos_neg"
    POS_POS = "pos_pos"


def conjugate_sandwich(z, eta: float, sign_pattern) -> DisplacementLabel:
    """Sandwich ``D(z)`` between displacements along the imaginary axis.

    The three patterns give ``exp(-2i eta Re z) D(z)``, ``exp(2i eta Re z) D(z)``
    and ``D(z + 2i eta)`` respectively; each is computed as two
    :func:`compose` calls.
    """
    if not math.isfinite(eta):
        raise ValueError("eta must be finite")
    pattern = Sandwich(sign_pattern)
    left_sign, right_sign = {
        Sandwich.DAG_POS: (-1.0, 1.0),  # D(i eta)^dag = D(-i eta)
        Sandwich.POS_NEG: (1.0, -1.0),
        Sandwich.POS_POS: (1.0, 1.0),
    }[pattern]
    left = label(ComplexAmplitude(0.0, left_sign * eta))
    right = label(ComplexAmplitude(0.0, right_sign * eta))
    return compose(compose(left, label(z)), right)


def vacuum_overlap(z) -> float:
    """``<0|D(z)|0> = exp(-|z|^2 / 2)``."""
    return math.exp(-0.5 * as_amplitude(z).abs2())
