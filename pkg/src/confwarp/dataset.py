"""Synthetic disk-counting dataset: white disks on black background,
with conformal or rotation-based augmented training variants.

Generation is deterministic: every image draws from its own Philox
(counter-based) substream keyed by (seed, image index), so images can be
produced in any order or in parallel with identical results.
"""

from __future__ import annotations

import csv
import math
import os
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy import ndimage

from .confmap import MapParams
from .errors import DomainError, GenerationError
from .imageio import save_image
from .warp import Augment, ImageGrid, bilinear_sample, warp_image

CENTER_RANGE = 0.7
RADIUS_MIN = 0.1
RADIUS_MAX = 0.17
MIN_CENTER_DISTANCE = 0.4
RETRY_BUDGET = 100_000

# The three (alpha, k) pairs used for the conformally augmented training set.
DEFAULT_AUGMENT_PARAMS = (
    MapParams(0.1 + 0.1j, math.pi / 3.0),
    MapParams(0.1 + 0.3j, math.pi),
    MapParams(0.3 + 0.3j, 3.0 * math.pi / 2.0),
)


@dataclass(frozen=True)
class Conformal:
    """Conformal augmentation: one warped copy per parameter pair."""

    params: tuple[MapParams, ...] = DEFAULT_AUGMENT_PARAMS


@dataclass(frozen=True)
class Rotation:
    """Baseline augmentation: plain rotations with angles drawn uniformly
    from (low_deg, high_deg), background filled with 0."""

    low_deg: float = -15.0
    high_deg: float = 15.0
    copies: int = 3


@dataclass(frozen=True)
class DiskScene:
    """Disk centers and radii for one image; all counts and ranges validated."""

    centers: tuple[complex, ...]
    radii: tuple[float, ...]

    def __post_init__(self):
        if len(self.centers) != len(self.radii) or not 1 <= len(self.centers) <= 10:
            raise DomainError("scene needs 1..10 matching centers and radii")
        for c in self.centers:
            if abs(c.real) > CENTER_RANGE or abs(c.imag) > CENTER_RANGE:
                raise DomainError(f"center {c} outside [-{CENTER_RANGE},{CENTER_RANGE}]^2")
        for r in self.radii:
            if not RADIUS_MIN <= r <= RADIUS_MAX:
                raise DomainError(f"radius {r} outside [{RADIUS_MIN},{RADIUS_MAX}]")
        for i in range(len(self.centers)):
            for j in range(i + 1, len(self.centers)):
                if abs(self.centers[i] - self.centers[j]) <= MIN_CENTER_DISTANCE:
                    raise DomainError("centers closer than the minimum separation")

    @property
    def n(self) -> int:
        return len(self.centers)


@dataclass(frozen=True)
class DatasetSpec:
    """Parameters of one dataset build."""

    render_size: int = 300
    final_size: int = 128
    train_count: int = 10
    test_count: int = 160
    seed: int = 0
    augmentation: Conformal | Rotation | None = field(default_factory=Conformal)


def image_rng(seed: int, index: int) -> np.random.Generator:
    """Per-image substream of the counter-based generator."""
    key = np.array([seed, index], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def sample_scene(n: int, rng: np.random.Generator) -> DiskScene:
    """Draw a scene with n disks by dart-throwing on the separation constraint."""
    if not 1 <= n <= 10:
        raise DomainError(f"disk count must be 1..10, got {n}")
    draws = 0
    while draws < RETRY_BUDGET:
        centers: list[complex] = []
        for _ in range(n):
            placed = False
            for _ in range(200):  # tries per point before restarting the scene
                c = complex(*rng.uniform(-CENTER_RANGE, CENTER_RANGE, size=2))
                draws += 1
                if all(abs(c - prev) > MIN_CENTER_DISTANCE for prev in centers):
                    centers.append(c)
                    placed = True
                    break
            if not placed:
                break
        if len(centers) == n:
            radii = tuple(rng.uniform(RADIUS_MIN, RADIUS_MAX, size=n))
            return DiskScene(tuple(centers), radii)
    raise GenerationError(f"could not place {n} disks within {RETRY_BUDGET} draws")


def render_scene(scene: DiskScene, size: int) -> ImageGrid:
    """Rasterize a scene: pixel at grid point z is 1 iff z lies inside a disk."""
    if size < 2:
        raise DomainError("render size must be >= 2")
    c = np.linspace(-1.0, 1.0, size)
    z = c[:, np.newaxis] + 1j * c[np.newaxis, :]
    inside = np.zeros((size, size), dtype=bool)
    for center, radius in zip(scene.centers, scene.radii):
        inside |= np.abs(z - center) < radius
    return ImageGrid(inside.astype(float))


def _box_weights(n_in: int, n_out: int) -> np.ndarray:
    # exact area-overlap box filter between uniform input and output bins
    s = n_in / n_out
    w = np.zeros((n_out, n_in))
    for i in range(n_out):
        lo, hi = i * s, (i + 1) * s
        for j in range(int(math.floor(lo)), min(int(math.ceil(hi)), n_in)):
            w[i, j] = min(hi, j + 1.0) - max(lo, float(j))
    return w / s


def downscale(img: ImageGrid, final_size: int) -> ImageGrid:
    """Box-filter average resampling down to final_size (mass preserving)."""
    if final_size > img.h:
        raise DomainError("downscale cannot upscale")
    if final_size == img.h:
        return img
    w = _box_weights(img.h, final_size)
    rows = np.einsum("ij,jkc->ikc", w, img.pixels)
    out = np.einsum("lk,ikc->ilc", w, rows)
    return ImageGrid(np.clip(out, 0.0, 1.0))


def rotate_image(img: ImageGrid, degrees: float) -> ImageGrid:
    """Rotate about the image center by the given angle, bilinear sampling
    with 0 fill where the preimage leaves the square."""
    theta = math.radians(degrees)
    z = img.grid()
    src = z * complex(math.cos(-theta), math.sin(-theta))
    mask = (np.abs(src.real) <= 1.0) & (np.abs(src.imag) <= 1.0)
    out = np.zeros_like(img.pixels)
    out[mask] = bilinear_sample(img, src[mask])
    return ImageGrid(np.clip(out, 0.0, 1.0))


def count_components(img: ImageGrid, threshold: float = 0.5) -> int:
    """Number of 4-connected components above threshold (channel 0)."""
    _, num = ndimage.label(img.pixels[:, :, 0] > threshold)
    return num


def _augment_tag(p: MapParams) -> str:
    return f"a{p.alpha.real:.2f}_{p.alpha.imag:.2f}__k{p.k:.6f}"


def build_dataset(spec: DatasetSpec, out_dir: str | os.PathLike) -> list[dict]:
    """Generate the dataset under out_dir and return the manifest rows.

    Layout: train/, test/, train_augmented/ plus manifest.csv with columns
    filename,n,split,augmentation.  Disk counts cycle 1..10 over the
    train+test sequence, so the default 10-image training set holds one
    image per count.
    """
    out = Path(out_dir)
    for sub in ("train", "test", "train_augmented"):
        (out / sub).mkdir(parents=True, exist_ok=True)
    rows: list[dict] = []

    def emit(grid: ImageGrid, sub: str, name: str, n: int, aug: str) -> None:
        save_image(grid, out / sub / name)
        rows.append({"filename": f"{sub}/{name}", "n": n, "split": sub, "augmentation": aug})

    total = spec.train_count + spec.test_count
    for i in range(total):
        n = (i % 10) + 1
        rng = image_rng(spec.seed, i)
        scene = sample_scene(n, rng)
        base = render_scene(scene, spec.render_size)
        stem = f"img{i:03d}_n{n:02d}"
        is_train = i < spec.train_count
        emit(downscale(base, spec.final_size), "train" if is_train else "test", f"{stem}.png", n, "none")
        if not is_train or spec.augmentation is None:
            continue
        if isinstance(spec.augmentation, Conformal):
            for p in spec.augmentation.params:
                warped = warp_image(base, Augment(p), use_cache=True)
                tag = _augment_tag(p)
                emit(downscale(warped, spec.final_size), "train_augmented",
                     f"{stem}__{tag}.png", n, tag)
        elif isinstance(spec.augmentation, Rotation):
            angles = rng.uniform(spec.augmentation.low_deg, spec.augmentation.high_deg,
                                 size=spec.augmentation.copies)
            for angle in angles:
                tag = f"rot{angle:+.2f}"
                emit(downscale(rotate_image(base, angle), spec.final_size),
                     "train_augmented", f"{stem}__{tag}.png", n, tag)
        else:
            raise TypeError(f"unknown augmentation: {spec.augmentation!r}")

    with open(out / "manifest.csv", "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=["filename", "n", "split", "augmentation"])
        writer.writeheader()
        writer.writerows(rows)
    return rows
