"""Conformal map between the square (-1,1)^2 and the unit disk, plus the
disk automorphisms (Mobius transformations and rotations) used for
augmentation and their compositions.

All point operations accept scalars or numpy arrays of complex values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .elliptic import (
    complete_K,
    incomplete_F_complex,
    jacobi_sn_dn_complex,
)
from .errors import DomainError

_SQRT2 = math.sqrt(2.0)
_PHASE = complex(math.cos(math.pi / 4.0), math.sin(math.pi / 4.0))  # e^{i pi/4}

# Tolerance for "inside the closed square" membership checks; absorbs
# roundoff from upstream arithmetic, inputs are then clipped to the square.
_SQUARE_TOL = 1e-12


@dataclass(frozen=True)
class MapConstants:
    """Constants of the square-to-disk map: r = 1/sqrt(2), m = r^2,
    L = K(m)/2 * e^{i pi/4}."""

    r: float
    m: float
    L: complex

    @classmethod
    def compute(cls) -> "MapConstants":
        r = 1.0 / _SQRT2
        m = 0.5
        L = 0.5 * complete_K(m) * _PHASE
        return cls(r=r, m=m, L=L)


@lru_cache(maxsize=1)
def default_constants() -> MapConstants:
    return MapConstants.compute()


@dataclass(frozen=True)
class MapParams:
    """One augmentation: Mobius center alpha (|alpha| < 1) and rotation
    angle k, normalized into [0, 2*pi)."""

    alpha: complex
    k: float

    def __post_init__(self):
        if not abs(self.alpha) < 1.0:
            raise DomainError(f"Mobius center must satisfy |alpha| < 1, got {self.alpha}")
        object.__setattr__(self, "alpha", complex(self.alpha))
        object.__setattr__(self, "k", float(self.k) % (2.0 * math.pi))


def _check_square(z) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    if np.any(np.abs(z.real) > 1.0 + _SQUARE_TOL) or np.any(
        np.abs(z.imag) > 1.0 + _SQUARE_TOL
    ):
        raise DomainError("point outside the closed square [-1,1]^2")
    return np.clip(z.real, -1.0, 1.0) + 1j * np.clip(z.imag, -1.0, 1.0)


def square_to_disk(z, constants: MapConstants | None = None):
    """Conformal map f from the closed square onto the closed unit disk,
    f(z) = sn(sqrt(2) L z, m) / (sqrt(2) e^{i pi/4} dn(sqrt(2) L z, m))."""
    c = constants or default_constants()
    z = _check_square(z)
    zh = _SQRT2 * c.L * z
    sn, dn = jacobi_sn_dn_complex(zh, c.m)
    return sn / (_SQRT2 * _PHASE * dn)


def disk_to_square(w, constants: MapConstants | None = None):
    """Inverse conformal map from the open unit disk onto the square,
    f^{-1}(w) = F(sqrt(2) e^{i pi/4} w / sqrt(1 + i w^2), m) / (sqrt(2) L)."""
    c = constants or default_constants()
    w = np.asarray(w, dtype=complex)
    if np.any(np.abs(w) >= 1.0):
        raise DomainError("disk_to_square requires |w| < 1")
    zh = _SQRT2 * _PHASE * w / np.sqrt(1.0 + 1j * w * w)
    zt = np.arcsin(zh)  # principal branch; Re(1 + i w^2) > 0 keeps us off the cuts
    return incomplete_F_complex(zt, c.m) / (_SQRT2 * c.L)


def _check_alpha(alpha: complex) -> complex:
    alpha = complex(alpha)
    if not abs(alpha) < 1.0:
        raise DomainError(f"Mobius center must satisfy |alpha| < 1, got {alpha}")
    return alpha


def mobius(w, alpha: complex):
    """Disk-preserving Mobius transformation g(w) = (w - alpha)/(1 - conj(alpha) w)."""
    alpha = _check_alpha(alpha)
    w = np.asarray(w, dtype=complex)
    return (w - alpha) / (1.0 - np.conjugate(alpha) * w)


def mobius_inverse(w, alpha: complex):
    """Inverse of :func:`mobius`: (w + alpha)/(1 + conj(alpha) w)."""
    alpha = _check_alpha(alpha)
    w = np.asarray(w, dtype=complex)
    return (w + alpha) / (1.0 + np.conjugate(alpha) * w)


def rotate(w, k: float):
    """Rotation about the origin by angle k."""
    return np.asarray(w, dtype=complex) * complex(math.cos(k), math.sin(k))


def forward_augment_point(z, params: MapParams, constants: MapConstants | None = None):
    """Where a square point lands under the augmentation
    f^{-1} . rot_k . mobius_alpha . f."""
    w = square_to_disk(z, constants)
    w = mobius(w, params.alpha)
    w = rotate(w, params.k)
    return disk_to_square(w, constants)


def pullback_augment_point(z, params: MapParams, constants: MapConstants | None = None):
    """Inverse of :func:`forward_augment_point`:
    f^{-1} . mobius_alpha^{-1} . rot_{-k} . f.  This is the map the image
    warper samples the source image with."""
    w = square_to_disk(z, constants)
    w = rotate(w, -params.k)
    w = mobius_inverse(w, params.alpha)
    return disk_to_square(w, constants)
