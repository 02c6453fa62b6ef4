"""Command-line interface.

    confwarp augment  --config cfg.yaml --out dir image.png [more.png ...]
    confwarp generate --config cfg.yaml --out dir [--seed N]
    confwarp preview  --config cfg.yaml --out dir image.png
    confwarp selftest [suite] [--out dir]

The config file is YAML; augmentation angles may be given in radians or
as multiples of pi with a "pi:" prefix ("pi:1/3" is pi/3).  The default
config path can be set with the CONFWARP_CONFIG environment variable.
"""

from __future__ import annotations

import argparse
import csv
import math
import os
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np
import yaml

from . import confmap, selftest
from .confmap import MapParams
from .dataset import (
    DEFAULT_AUGMENT_PARAMS,
    Conformal,
    DatasetSpec,
    Rotation,
    build_dataset,
)
from .errors import DomainError
from .imageio import load_image, save_image
from .warp import SQUARE_TO_DISK, Augment, warp_image, warp_with_map

CONFIG_ENV_VAR = "CONFWARP_CONFIG"

DEFAULT_PREVIEW_PARAMS = MapParams(0.3 + 0.3j, math.pi / 3.0)


def parse_angle(value) -> float:
    """An angle in radians, or a multiple of pi written as "pi:<number>"
    or "pi:<a/b>"."""
    if isinstance(value, (int, float)):
        return float(value)
    text = str(value).strip()
    if text.startswith("pi:"):
        return float(Fraction(text[3:])) * math.pi
    return float(text)


def _load_config(path: str | None) -> dict:
    path = path or os.environ.get(CONFIG_ENV_VAR)
    if path is None:
        return {}
    with open(path) as fh:
        cfg = yaml.safe_load(fh) or {}
    if not isinstance(cfg, dict):
        raise DomainError(f"config root must be a mapping, got {type(cfg).__name__}")
    return cfg


def _params_entry(entry: dict) -> MapParams:
    alpha = complex(float(entry.get("alpha_re", 0.0)), float(entry.get("alpha_im", 0.0)))
    return MapParams(alpha, parse_angle(entry.get("k", 0.0)))


def augment_params(cfg: dict) -> list[MapParams]:
    entries = cfg.get("augmentations")
    if entries is None:
        return list(DEFAULT_AUGMENT_PARAMS)
    return [_params_entry(e) for e in entries]


def dataset_spec(cfg: dict, seed: int | None) -> DatasetSpec:
    d = cfg.get("dataset", {})
    kind = str(d.get("augmentation", "conformal")).lower()
    if kind == "conformal":
        augmentation = Conformal(tuple(augment_params(cfg)))
    elif kind == "rotation":
        r = d.get("rotation", {})
        augmentation = Rotation(
            low_deg=float(r.get("low_deg", -15.0)),
            high_deg=float(r.get("high_deg", 15.0)),
            copies=int(r.get("copies", 3)),
        )
    elif kind == "none":
        augmentation = None
    else:
        raise DomainError(f"unknown dataset augmentation {kind!r}")
    return DatasetSpec(
        render_size=int(d.get("render_size", 300)),
        final_size=int(d.get("final_size", 128)),
        train_count=int(d.get("train_count", 10)),
        test_count=int(d.get("test_count", 160)),
        seed=int(seed if seed is not None else d.get("seed", 0)),
        augmentation=augmentation,
    )


def output_name(stem: str, params: MapParams, ext: str) -> str:
    a = params.alpha
    return f"{stem}__a{a.real:.2f}_{a.imag:.2f}__k{params.k:.6f}{ext}"


def cmd_augment(args) -> int:
    cfg = _load_config(args.config)
    params = augment_params(cfg)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    if not params:
        print("warning: empty augmentation list, nothing to do")
        return 0
    failures = 0
    for path in args.inputs:
        path = Path(path)
        try:
            img = load_image(path)
        except Exception as exc:
            print(f"{path}: ERROR: {exc}", file=sys.stderr)
            failures += 1
            continue
        for p in params:
            warped = warp_image(img, Augment(p), threads=args.threads, use_cache=True)
            name = output_name(path.stem, p, path.suffix)
            save_image(warped, out_dir / name)
            print(f"{path} -> {out_dir / name}")
    return 1 if failures else 0


def cmd_generate(args) -> int:
    cfg = _load_config(args.config)
    spec = dataset_spec(cfg, args.seed)
    rows = build_dataset(spec, args.out)
    by_split: dict[str, int] = {}
    for row in rows:
        by_split[row["split"]] = by_split.get(row["split"], 0) + 1
    for split in ("train", "test", "train_augmented"):
        print(f"{split}: {by_split.get(split, 0)} images")
    print(f"manifest: {Path(args.out) / 'manifest.csv'}")
    return 0


def _preview_stages(img, params: MapParams):
    pull_mobius = lambda z: confmap.disk_to_square(confmap.mobius_inverse(z, params.alpha))
    pull_rot_mobius = lambda z: confmap.disk_to_square(
        confmap.mobius_inverse(confmap.rotate(z, -params.k), params.alpha))
    return [
        ("original", img),
        ("f", warp_image(img, SQUARE_TO_DISK)),
        ("g_f", warp_with_map(img, pull_mobius, disk_only=True)),
        ("rot_g_f", warp_with_map(img, pull_rot_mobius, disk_only=True)),
        ("augmented", warp_image(img, Augment(params))),
    ]


def cmd_preview(args) -> int:
    cfg = _load_config(args.config)
    p = cfg.get("preview")
    params = _params_entry(p) if p else DEFAULT_PREVIEW_PARAMS
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    try:
        img = load_image(args.input)
    except Exception as exc:
        print(f"{args.input}: ERROR: {exc}", file=sys.stderr)
        return 1
    stages = _preview_stages(img, params)
    stem = Path(args.input).stem
    stats = []
    prev = None
    for i, (label, grid) in enumerate(stages, start=1):
        name = f"{stem}__stage{i}_{label}.png"
        save_image(grid, out_dir / name)
        print(f"stage {i} ({label}) -> {out_dir / name}")
        if prev is not None:
            stats.append({
                "stage": i,
                "label": label,
                "mean_abs_diff_vs_previous": float(np.mean(np.abs(grid.pixels - prev.pixels))),
            })
        prev = grid

    with open(out_dir / f"{stem}__preview_stats.csv", "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=["stage", "label", "mean_abs_diff_vs_previous"])
        writer.writeheader()
        writer.writerows(stats)

    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, axes = plt.subplots(2, 3, figsize=(10.5, 7))
    for ax, (label, grid) in zip(axes.ravel(), stages):
        arr = grid.pixels[:, :, 0] if grid.channels == 1 else grid.pixels
        ax.imshow(arr, cmap="gray" if grid.channels == 1 else None, vmin=0, vmax=1)
        ax.set_title(label)
        ax.axis("off")
    axes.ravel()[-1].axis("off")
    fig.tight_layout()
    panel = out_dir / f"{stem}__preview_panels.png"
    fig.savefig(panel, dpi=150)
    plt.close(fig)
    print(f"panel figure -> {panel}")
    return 0


def _selftest_suites(name: str, constants):
    if name == "elliptic":
        return selftest.elliptic_checks()
    if name == "confmap":
        return selftest.confmap_checks(constants)
    if name == "warp":
        return selftest.warp_checks()
    return selftest.run_all(constants)[0]


def cmd_selftest(args) -> int:
    constants = getattr(args, "_constants_override", None)
    results = _selftest_suites(args.suite, constants)
    for r in results:
        print(r.line())
    sqrt_form, pi_form = selftest.gamma_quarter_values()
    k_half = selftest.quadrature_K(0.5)
    print(f"K(1/2) quadrature          = {k_half:.15f}")
    print(f"Gamma(1/4)^2/(4 sqrt(pi))  = {sqrt_form:.15f}  (matches)")
    print(f"Gamma(1/4)^2/(4 pi)        = {pi_form:.15f}  (does not)")

    if args.out:
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        report = out_dir / "selftest_report.csv"
        with open(report, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["check", "residual", "threshold", "passed"])
            for r in results:
                writer.writerow([r.name, f"{r.residual:.6e}", f"{r.threshold:.0e}", r.passed])
        print(f"report -> {report}")

        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt

        rng = np.random.default_rng(0)
        z = rng.uniform(-0.99, 0.99, 5000) + 1j * rng.uniform(-0.99, 0.99, 5000)
        resid = np.abs(confmap.disk_to_square(confmap.square_to_disk(z, constants), constants) - z)
        fig, ax = plt.subplots(figsize=(6, 4))
        ax.hist(np.log10(np.maximum(resid, 1e-18)), bins=50, color="steelblue")
        ax.set_xlabel("log10 |f^-1(f(z)) - z|")
        ax.set_ylabel("count")
        ax.set_title("square-disk round-trip residuals")
        fig.tight_layout()
        fig_path = out_dir / "selftest_roundtrip_hist.png"
        fig.savefig(fig_path, dpi=150)
        plt.close(fig)
        print(f"figure -> {fig_path}")

    failed = [r for r in results if not r.passed]
    if failed:
        print("FAILED: " + ", ".join(r.name for r in failed), file=sys.stderr)
        return 1
    print("all checks passed")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="confwarp",
        description="Conformal image augmentation: square -> disk -> Mobius/rotation -> square.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help=f"YAML config (default: ${CONFIG_ENV_VAR})")
        p.add_argument("--out", default="out", help="output directory")
        p.add_argument("--seed", type=int, default=None, help="RNG seed override")
        p.add_argument("--threads", type=int, default=os.cpu_count() or 1,
                       help="row-partitioned warp threads")

    p = sub.add_parser("augment", help="apply conformal augmentations to images")
    common(p)
    p.add_argument("inputs", nargs="+", help="square input images (PNG/PGM/PPM)")
    p.set_defaults(func=cmd_augment)

    p = sub.add_parser("generate", help="generate the synthetic disk-counting dataset")
    common(p)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("preview", help="emit the five-stage mapping pipeline for one image")
    common(p)
    p.add_argument("input", help="square input image")
    p.set_defaults(func=cmd_preview)

    p = sub.add_parser("selftest", help="run the built-in diagnostic suites")
    common(p)
    p.add_argument("suite", nargs="?", default="all",
                   choices=["all", "elliptic", "confmap", "warp"])
    p.set_defaults(func=cmd_selftest, out=None)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
