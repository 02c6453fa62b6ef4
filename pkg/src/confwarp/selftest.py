"""Built-in diagnostic suites: residual checks for the elliptic core,
the conformal map, and the image warper.

Each check returns its worst residual and the threshold it must stay
under, so the CLI can print one line per check and fail loudly on the
first regression.  The map constants are injectable so a corrupted
build (or a deliberate negative control) is detected rather than
silently accepted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad
from scipy.special import gamma

from . import confmap, elliptic
from .confmap import MapConstants, MapParams
from .warp import (
    DISK_TO_SQUARE,
    SQUARE_TO_DISK,
    Augment,
    ImageGrid,
    warp_image,
    warp_with_map,
)


@dataclass(frozen=True)
class CheckResult:
    name: str
    residual: float
    threshold: float

    @property
    def passed(self) -> bool:
        return self.residual < self.threshold

    def line(self) -> str:
        status = "ok  " if self.passed else "FAIL"
        return f"[{status}] {self.name}: residual {self.residual:.3e} (< {self.threshold:.0e})"


def quadrature_K(m: float) -> float:
    """Independent quadrature oracle for the complete integral
    (trigonometric form of the defining integrand)."""
    val, _ = quad(lambda t: 1.0 / math.sqrt(1.0 - m * math.sin(t) ** 2),
                  0.0, math.pi / 2.0, epsabs=1e-13, epsrel=1e-13)
    return val


def quadrature_F_complex(z: complex, m: float) -> complex:
    """Straight-path quadrature oracle for F(z, m) from 0 to z."""

    def integrand(t: float) -> complex:
        zt = t * z
        return z / np.sqrt(1.0 - m * np.sin(zt) ** 2)

    re, _ = quad(lambda t: integrand(t).real, 0.0, 1.0, epsabs=1e-12, epsrel=1e-12)
    im, _ = quad(lambda t: integrand(t).imag, 0.0, 1.0, epsabs=1e-12, epsrel=1e-12)
    return complex(re, im)


def gamma_quarter_values() -> tuple[float, float]:
    """The two closed forms Gamma(1/4)^2/(4 sqrt(pi)) and Gamma(1/4)^2/(4 pi);
    only the first one equals K(1/2) numerically."""
    g2 = gamma(0.25) ** 2
    return g2 / (4.0 * math.sqrt(math.pi)), g2 / (4.0 * math.pi)


def elliptic_checks(seed: int = 0) -> list[CheckResult]:
    rng = np.random.default_rng(seed)
    out = []

    res = max(abs(elliptic.complete_K(m) - quadrature_K(m)) for m in (0.1, 0.3, 0.5, 0.7, 0.9))
    out.append(CheckResult("elliptic.K_vs_quadrature", res, 1e-11))

    m = rng.uniform(0.05, 0.95, 1000)
    worst_id1 = worst_id2 = 0.0
    for mi in np.unique(np.round(m, 3)):
        K = elliptic.complete_K(mi)
        u = rng.uniform(-2 * K, 2 * K, 8)
        sn, cn, dn = elliptic.jacobi_real(u, mi)
        worst_id1 = max(worst_id1, float(np.max(np.abs(sn**2 + cn**2 - 1.0))))
        worst_id2 = max(worst_id2, float(np.max(np.abs(dn**2 + mi * sn**2 - 1.0))))
    out.append(CheckResult("elliptic.sn2_cn2_identity", worst_id1, 1e-12))
    out.append(CheckResult("elliptic.dn2_msn2_identity", worst_id2, 1e-12))

    worst = 0.0
    for mi in (0.1, 0.5, 0.9):
        x = rng.uniform(-3.0, 3.0, 400)
        sn_c, dn_c = elliptic.jacobi_sn_dn_complex(x.astype(complex), mi)
        sn_r, _, dn_r = elliptic.jacobi_real(x, mi)
        worst = max(worst, float(np.max(np.abs(sn_c - sn_r))),
                    float(np.max(np.abs(dn_c - dn_r))))
    out.append(CheckResult("elliptic.complex_real_agreement", worst, 1e-13))

    phi = rng.uniform(0.0, 4.0, 500)
    res = float(np.max(np.abs(elliptic.incomplete_F_real(-phi, 0.5)
                              + elliptic.incomplete_F_real(phi, 0.5))))
    out.append(CheckResult("elliptic.F_oddness", res, 1e-12))
    return out


def _guarded(name: str, fn, threshold: float) -> CheckResult:
    # a corrupted build may push intermediates out of domain; report that
    # as a failed check instead of aborting the whole report
    try:
        residual = float(fn())
    except Exception:
        residual = math.inf
    return CheckResult(name, residual, threshold)


def confmap_checks(constants: MapConstants | None = None, seed: int = 1) -> list[CheckResult]:
    rng = np.random.default_rng(seed)
    out = []

    z = rng.uniform(-0.99, 0.99, 10_000) + 1j * rng.uniform(-0.99, 0.99, 10_000)
    w = confmap.square_to_disk(z, constants)
    out.append(CheckResult("confmap.disk_preservation",
                           float(np.max(np.abs(w))), 1.0))
    out.append(_guarded(
        "confmap.roundtrip_interior",
        lambda: np.max(np.abs(confmap.disk_to_square(
            np.where(np.abs(w) < 1.0, w, 0.0), constants) - z)),
        1e-8))

    edge = rng.uniform(0.99, 0.9999, 2000)
    other = rng.uniform(-0.9999, 0.9999, 2000)
    sgn = rng.choice([-1.0, 1.0], 2000)
    zb = np.where(rng.random(2000) < 0.5, sgn * edge + 1j * other, other + 1j * sgn * edge)

    def band_residual() -> float:
        wb = confmap.square_to_disk(zb, constants)
        return float(np.max(np.abs(confmap.disk_to_square(wb, constants) - zb)))

    out.append(_guarded("confmap.roundtrip_boundary_band", band_residual, 1e-6))

    # a conformal bijection onto the disk must carry the square boundary
    # to the unit circle
    t = rng.uniform(-1.0, 1.0, 400)
    boundary = np.concatenate([t + 1j, t - 1j, 1 + 1j * t, -1 + 1j * t])
    wb = confmap.square_to_disk(boundary, constants)
    out.append(CheckResult("confmap.conformality_boundary_to_circle",
                           float(np.max(np.abs(np.abs(wb) - 1.0))), 1e-9))

    zc = rng.uniform(-0.95, 0.95, 100) + 1j * rng.uniform(-0.95, 0.95, 100)
    step = 1e-6
    fx = (confmap.square_to_disk(zc + step, constants)
          - confmap.square_to_disk(zc - step, constants)) / (2 * step)
    fy = (confmap.square_to_disk(zc + 1j * step, constants)
          - confmap.square_to_disk(zc - 1j * step, constants)) / (2 * step)
    worst_ratio = 0.0
    min_det = math.inf
    for a, b in zip(fx, fy):
        J = np.array([[a.real, b.real], [a.imag, b.imag]])
        s = np.linalg.svd(J, compute_uv=False)
        worst_ratio = max(worst_ratio, abs(s[0] / s[1] - 1.0))
        min_det = min(min_det, np.linalg.det(J))
    out.append(CheckResult("confmap.conformality_jacobian_isotropy", worst_ratio, 1e-4))
    out.append(CheckResult("confmap.conformality_orientation",
                           0.0 if min_det > 0 else 1.0, 0.5))

    alphas = 0.95 * rng.random(100) * np.exp(1j * rng.uniform(0, 2 * math.pi, 100))
    circle = np.exp(1j * rng.uniform(0, 2 * math.pi, 200))
    iso = max(float(np.max(np.abs(np.abs(confmap.mobius(circle, a)) - 1.0)))
              for a in alphas[:20])
    out.append(CheckResult("confmap.mobius_circle_isometry", iso, 1e-13))
    ident = max(max(abs(complex(confmap.mobius(a, a))),
                    abs(complex(confmap.mobius(0.0, a)) + a)) for a in alphas)
    out.append(CheckResult("confmap.mobius_identities", ident, 1e-15))

    zr = rng.uniform(-0.9, 0.9, 200) + 1j * rng.uniform(-0.9, 0.9, 200)
    k1, k2 = 0.7, 2.1

    def group_residual() -> float:
        two = confmap.forward_augment_point(
            confmap.forward_augment_point(zr, MapParams(0, k1), constants),
            MapParams(0, k2), constants)
        one = confmap.forward_augment_point(zr, MapParams(0, k1 + k2), constants)
        return float(np.max(np.abs(two - one)))

    out.append(_guarded("confmap.rotation_group_structure", group_residual, 1e-7))

    # continuity along paths whose argument crosses multiples of pi/2
    path = np.linspace(-0.999, 0.999, 1000) + 0.37j
    fw = confmap.square_to_disk(path, constants)
    jump = float(np.max(np.abs(np.diff(fw))))
    out.append(CheckResult("confmap.continuity_forward", jump, 0.02))
    wpath = 0.95 * np.exp(1j * np.linspace(0, 2 * math.pi, 1000, endpoint=False))
    bw = confmap.disk_to_square(wpath, constants)
    out.append(CheckResult("confmap.continuity_inverse",
                           float(np.max(np.abs(np.diff(bw)))), 0.05))
    return out


def _gradient_image(h: int = 128) -> ImageGrid:
    c = np.linspace(0.0, 1.0, h)
    return ImageGrid(0.5 * (c[:, np.newaxis] + c[np.newaxis, :]))


def warp_checks(seed: int = 2) -> list[CheckResult]:
    out = []
    img = _gradient_image(128)
    z = img.grid()
    inside = np.abs(z) < 1.0

    ident = warp_image(img, Augment(MapParams(0, 0)))
    diff = (ident.pixels - img.pixels)[inside]
    psnr = -10.0 * math.log10(max(float(np.mean(diff**2)), 1e-30))
    out.append(CheckResult("warp.identity_psnr_margin", 40.0 - psnr, 0.0 + 1e-12))

    p = MapParams(0.2 + 0.1j, 1.0)
    aug = warp_image(img, Augment(p))
    ones = warp_image(ImageGrid(np.ones((64, 64))), Augment(p))
    out.append(CheckResult("warp.augment_full_support",
                           float(np.max(np.abs(ones.pixels - 1.0))), 1e-15))
    out.append(CheckResult("warp.output_range",
                           max(float(-np.min(aug.pixels)), float(np.max(aug.pixels) - 1.0)),
                           1e-15))

    stage1 = warp_image(img, SQUARE_TO_DISK)
    stage2 = warp_with_map(
        stage1,
        lambda zz: confmap.mobius_inverse(confmap.rotate(zz, -p.k), p.alpha),
        disk_only=True,
    )
    multi = warp_image(stage2, DISK_TO_SQUARE)
    # compare on the disk region, where the single-pass Augment has support
    mask = inside[..., np.newaxis]
    mad = float(np.mean(np.abs(multi.pixels - aug.pixels)[np.broadcast_to(mask, aug.pixels.shape)]))
    out.append(CheckResult("warp.composition_consistency", mad, 4.0 / 255.0))
    return out


def run_all(constants: MapConstants | None = None) -> tuple[list[CheckResult], bool]:
    results = elliptic_checks() + confmap_checks(constants) + warp_checks()
    return results, all(r.passed for r in results)
