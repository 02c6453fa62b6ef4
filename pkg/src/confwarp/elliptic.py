"""Elliptic integrals of the first kind and Jacobi elliptic functions.

Real-argument primitives are computed in-repo (arithmetic-geometric mean
for the complete integral and the Jacobi functions, Carlson's duplication
algorithm for the incomplete integral).  Complex arguments are reduced to
real-argument evaluations through the classical addition/decomposition
identities, so no complex-valued integration is ever needed.

All argument-valued operations accept scalars or numpy arrays and
broadcast elementwise; the parameter ``m`` is always a scalar.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from .errors import DomainError, PoleError

# Shift applied to arguments that would otherwise sit on a cotangent
# singularity inside the complex-F decomposition.  Every real argument
# within this distance of a multiple of pi is nudged off the singularity,
# so the shift itself perturbs F by O(COT_EPSILON).
COT_EPSILON = 1e-12

_AGM_TOL = 1e-17
_RF_TOL = 1e-7


class JacobiTriple(NamedTuple):
    """The values (sn, cn, dn) at a common argument and parameter."""

    sn: np.ndarray
    cn: np.ndarray
    dn: np.ndarray


def _check_parameter(m: float) -> None:
    if not (0.0 <= m < 1.0):
        raise DomainError(f"parameter m must satisfy 0 <= m < 1, got {m}")


def complete_K(m: float) -> float:
    """Complete elliptic integral of the first kind, parameter convention."""
    _check_parameter(m)
    a, b = 1.0, math.sqrt(1.0 - m)
    for _ in range(40):
        if abs(a - b) <= 4.0 * np.finfo(float).eps * a:
            break
        a, b = 0.5 * (a + b), math.sqrt(a * b)
    return math.pi / (2.0 * a)


def _carlson_rf(x, y, z):
    # Carlson symmetric integral R_F via the duplication theorem; inputs
    # are nonnegative with at most one zero.
    x = np.asarray(x, dtype=float).copy()
    y = np.asarray(y, dtype=float).copy()
    z = np.broadcast_to(np.asarray(z, dtype=float), x.shape).copy()
    for _ in range(80):
        sx, sy, sz = np.sqrt(x), np.sqrt(y), np.sqrt(z)
        lam = sx * sy + sy * sz + sz * sx
        x = 0.25 * (x + lam)
        y = 0.25 * (y + lam)
        z = 0.25 * (z + lam)
        mu = (x + y + z) / 3.0
        dx = (mu - x) / mu
        dy = (mu - y) / mu
        dz = (mu - z) / mu
        if max(np.max(np.abs(dx)), np.max(np.abs(dy)), np.max(np.abs(dz))) < _RF_TOL:
            break
    e2 = dx * dy - dz * dz
    e3 = dx * dy * dz
    return (1.0 + (e2 / 24.0 - 0.1 - 3.0 * e3 / 44.0) * e2 + e3 / 14.0) / np.sqrt(mu)


def incomplete_F_real(phi, m: float):
    """Incomplete elliptic integral F(phi, m) for real amplitude phi.

    Quasi-periodic continuation F(phi + pi, m) = F(phi, m) + 2K(m) is
    applied so arbitrary real amplitudes are accepted.
    """
    _check_parameter(m)
    phi = np.asarray(phi, dtype=float)
    n = np.round(phi / math.pi)
    r = phi - n * math.pi  # in [-pi/2, pi/2]
    s = np.sin(r)
    c = np.cos(r)
    val = s * _carlson_rf(c * c, 1.0 - m * s * s, 1.0)
    if np.any(n != 0):
        val = val + 2.0 * n * complete_K(m)
    return val


def jacobi_real(u, m: float) -> JacobiTriple:
    """Jacobi elliptic functions sn, cn, dn for real argument u."""
    _check_parameter(m)
    u = np.asarray(u, dtype=float)
    if m == 0.0:
        return JacobiTriple(np.sin(u), np.cos(u), np.ones_like(u))
    a, b = 1.0, math.sqrt(1.0 - m)
    a_seq = [a]
    c_seq = [math.sqrt(m)]
    while c_seq[-1] > _AGM_TOL and len(a_seq) < 60:
        a, b, c = 0.5 * (a + b), math.sqrt(a * b), 0.5 * (a - b)
        a_seq.append(a)
        c_seq.append(c)
    n_last = len(a_seq) - 1
    phi = (2.0**n_last) * a_seq[-1] * u
    for n in range(n_last, 0, -1):
        t = np.clip(c_seq[n] / a_seq[n] * np.sin(phi), -1.0, 1.0)
        phi = 0.5 * (phi + np.arcsin(t))
    sn = np.sin(phi)
    cn = np.cos(phi)
    dn = np.sqrt(1.0 - m * sn * sn)
    return JacobiTriple(sn, cn, dn)


def jacobi_sn_dn_complex(z, m: float):
    """sn and dn for complex argument, assembled from real evaluations.

    Uses the real/imaginary decomposition with s0, c0, d0 at (Re z, m)
    and s1, c1, d1 at (Im z, 1 - m).
    """
    _check_parameter(m)
    z = np.asarray(z, dtype=complex)
    if m == 0.0:
        return np.sin(z), np.ones_like(z)
    x = z.real
    y = z.imag
    s0, c0, d0 = jacobi_real(x, m)
    s1, c1, d1 = jacobi_real(y, 1.0 - m)
    delta = c1 * c1 + m * s0 * s0 * s1 * s1
    if np.any(delta == 0.0):
        bad = np.asarray(z)[np.nonzero(np.atleast_1d(delta == 0.0))]
        raise PoleError(f"sn/dn pole encountered at z = {bad.ravel()[0]}")
    sn = (s0 * d1 + 1j * c0 * d0 * s1 * c1) / delta
    dn = (d0 * c1 * d1 - 1j * m * s0 * c0 * s1) / delta
    return sn, dn


def incomplete_F_complex(z, m: float, eps: float = COT_EPSILON):
    """F(z, m) for complex z via the real decomposition F(x1,m) + i F(y1,1-m).

    cot^2(x1) is the positive root of the quadratic
    X^2 - (cot^2 x + m sinh^2 y csc^2 x - (1-m)) X - (1-m) cot^2 x = 0,
    evaluated in the stable form -b/2 + sqrt(b^2/4 - c); sign and period
    corrections keep the result on the branch continuous in x.
    """
    if not (0.0 < m < 1.0):
        raise DomainError(f"complex F requires 0 < m < 1, got {m}")
    m1 = 1.0 - m
    z = np.asarray(z, dtype=complex)
    x = z.real.copy()
    y = z.imag
    # keep cot(x) finite near multiples of pi
    kpi = np.round(x / math.pi) * math.pi
    near = np.abs(x - kpi) < eps
    x = np.where(near, kpi + np.where(x >= kpi, eps, -eps), x)
    sin_x = np.sin(x)
    cos_x = np.cos(x)
    with np.errstate(divide="ignore", invalid="ignore"):
        return _assemble_F(x, y, sin_x, cos_x, m, m1, eps)


def _assemble_F(x, y, sin_x, cos_x, m, m1, eps):
    cot = cos_x / sin_x
    sinh_y = np.sinh(y)
    b = -(cot * cot + m * sinh_y**2 / (sin_x * sin_x) - m1)
    c = -m1 * cot * cot
    root = np.sqrt(0.25 * b * b - c)
    # same positive root either way; the product form avoids cancellation
    # when b > 0 (which happens for x near an odd multiple of pi/2)
    X1 = np.where(b > 0.0, -c / (root + 0.5 * b), -0.5 * b + root)
    x1 = np.arctan(1.0 / np.sqrt(X1))
    # tan^2(y1) = (X1 tan^2 x - 1)/m, rewritten without the cancellation
    # that formula suffers for small y: with u = (1 + m sinh^2 y / cos^2 x
    # - m1 tan^2 x)/2, the same root gives
    #   X1 tan^2 x - 1 = m sinh^2 y / cos^2 x / (sqrt(u^2 + m1 tan^2 x) + 1 - u)
    # whose denominator is always >= 1.
    tan2_x = (sin_x / cos_x) ** 2
    u = 0.5 * (1.0 + m * sinh_y**2 / (cos_x * cos_x) - m1 * tan2_x)
    denom = np.sqrt(u * u + m1 * tan2_x) + 1.0 - u
    tan2_y1 = sinh_y**2 / (cos_x * cos_x) / denom
    y1 = np.arctan(np.sqrt(tan2_y1))
    x1 = (-1.0) ** np.floor(2.0 * x / math.pi) * x1 + math.pi * np.ceil(
        x / math.pi - 0.5 + eps
    )
    y1 = np.sign(y) * y1
    return incomplete_F_real(x1, m) + 1j * incomplete_F_real(y1, m1)
