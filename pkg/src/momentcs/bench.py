"""Benchmark grid runner: images x noise ratios x seeds x bases.

Each ``(image, ratio, seed)`` cell draws one noisy image which every basis
then denoises, so bases are compared on identical inputs. Rows are written
in grid order whatever order the worker threads finish in.
"""

from __future__ import annotations

import csv
import logging
import os
from collections import defaultdict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional

import numpy as np

from momentcs.errors import InvalidArgument, MomentCSError
from momentcs.imageio import load_image, save_image, to_uint8
from momentcs.metrics import psnr, ssim
from momentcs.noise import NoiseSpec, add_gaussian_noise
from momentcs.pipeline import PipelineConfig, denoise_image, prepare_image

log = logging.getLogger(__name__)

STANDARD_RATIOS = (0.1, 0.2, 0.3, 0.4, 0.5)
STANDARD_BASES = ("tchebichef", "krawtchouk", "dct")
CSV_HEADER = ["image", "basis", "noise_ratio", "seed", "psnr_db", "ssim", "mean_selected", "wall_time_ms"]
THREADS_ENV = "MOMENT_CS_THREADS"


class BenchError(MomentCSError):
    pass


@dataclass
class BenchRow:
    image_name: str
    basis: str
    noise_ratio: float
    psnr_db: float
    ssim: float
    mean_selected: float
    seed: int
    wall_time_ms: float

    def csv_fields(self, timing=True):
        return [
            self.image_name,
            self.basis,
            f"{self.noise_ratio:g}",
            str(self.seed),
            f"{self.psnr_db:.6f}",
            f"{self.ssim:.6f}",
            f"{self.mean_selected:.6f}",
            f"{self.wall_time_ms:.3f}" if timing else "0",
        ]


@dataclass
class RunConfig:
    pipeline: PipelineConfig = field(default_factory=PipelineConfig)
    inputs: list = field(default_factory=list)
    # name -> array, used in addition to ``inputs`` (e.g. the synthetic set)
    images: dict = field(default_factory=dict)
    out_dir: Optional[str] = "bench_out"
    seeds: tuple = (0,)
    bases: tuple = STANDARD_BASES
    ratios: tuple = STANDARD_RATIOS
    timing: bool = True
    clamp_noise: bool = True
    threads: Optional[int] = None

    def validate(self):
        if not (self.inputs or self.images):
            raise InvalidArgument("benchmark needs at least one input image")
        if not self.bases:
            raise InvalidArgument("benchmark needs at least one basis")
        if not self.ratios:
            raise InvalidArgument("benchmark needs at least one noise ratio")
        if not self.seeds:
            raise InvalidArgument("benchmark needs at least one seed")
        for b in self.bases:
            replace(self.pipeline, basis=b)
        for r in self.ratios:
            NoiseSpec(r)


def worker_count(requested=None):
    if requested is None:
        raw = os.environ.get(THREADS_ENV, "0").strip() or "0"
        try:
            requested = int(raw)
        except ValueError:
            raise InvalidArgument(f"{THREADS_ENV} must be an integer, got {raw!r}") from None
    if requested < 0:
        raise InvalidArgument("thread count must be >= 0")
    return requested or (os.cpu_count() or 1)


def _load_inputs(cfg):
    images = {}
    for path in cfg.inputs:
        name = Path(path).stem
        if name in images:
            raise InvalidArgument(f"duplicate image name {name!r}")
        images[name] = load_image(path)
    for name, img in cfg.images.items():
        if name in images:
            raise InvalidArgument(f"duplicate image name {name!r}")
        images[name] = np.asarray(img, dtype=np.float64)
    # references are 8-bit, exactly as they would be read back from disk
    return {name: to_uint8(prepare_image(img, cfg.pipeline)).astype(np.float64) for name, img in images.items()}


def _ratio_tag(ratio):
    return f"{ratio:.2f}".replace(".", "p")


def _run_cell(name, clean, ratio, seed, cfg, dictionaries):
    noisy = add_gaussian_noise(clean, NoiseSpec(ratio, seed, clamp=cfg.clamp_noise))
    if cfg.clamp_noise:
        # denoise exactly what gets written to <image>_noisy_*.pgm
        noisy = to_uint8(noisy).astype(np.float64)
    results = []
    for basis in cfg.bases:
        try:
            pcfg = replace(cfg.pipeline, basis=basis)
            out, stats = denoise_image(noisy, pcfg, ratio * 255.0, dictionary=dictionaries[basis])
            den = to_uint8(out)
            row = BenchRow(name, basis, ratio, psnr(clean, den), ssim(clean, den), stats.mean_selected, seed, stats.wall_time_ms)
        except Exception as exc:
            raise BenchError(f"benchmark cell failed (image={name}, basis={basis}, ratio={ratio:g}, seed={seed}): {exc}") from exc
        results.append((row, den))
    return noisy, results


def run_benchmark(cfg):
    """Run the full grid and write results; returns the list of :class:`BenchRow`.

    With ``cfg.out_dir`` set, writes ``results.csv``, per-image plot-data files
    ``<image>_selected.dat`` / ``<image>_ssim.dat`` (one column per basis, mean
    over seeds), and every noisy and denoised image as PGM.
    """
    cfg.validate()
    images = _load_inputs(cfg)
    ratios = sorted(cfg.ratios)
    dictionaries = {b: replace(cfg.pipeline, basis=b).dictionary() for b in cfg.bases}
    cells = [(name, r, s) for name in images for r in ratios for s in cfg.seeds]
    n_workers = min(worker_count(cfg.threads), len(cells))
    log.info("running %d cells x %d bases on %d workers", len(cells), len(cfg.bases), n_workers)

    def task(cell):
        name, r, s = cell
        return _run_cell(name, images[name], r, s, cfg, dictionaries)

    if n_workers <= 1:
        outcomes = [task(c) for c in cells]
    else:
        with ThreadPoolExecutor(max_workers=n_workers) as pool:
            outcomes = list(pool.map(task, cells))

    rows = [row for _, results in outcomes for row, _ in results]
    if cfg.out_dir is not None:
        out = Path(cfg.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        for (name, r, s), (noisy, results) in zip(cells, outcomes):
            save_image(noisy, out / f"{name}_noisy_r{_ratio_tag(r)}_s{s}.pgm")
            for row, den in results:
                save_image(den, out / f"{name}_{row.basis}_r{_ratio_tag(r)}_s{s}.pgm")
        write_csv(rows, out / "results.csv", timing=cfg.timing)
        write_plot_data(rows, out, cfg.bases)
    return rows


def write_csv(rows, path, timing=True):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for row in rows:
            writer.writerow(row.csv_fields(timing))


def plot_series(rows, attr, bases):
    """``{image: [(ratio, [mean value per basis]), ...]}`` with ratios ascending."""
    acc = defaultdict(list)
    for row in rows:
        acc[(row.image_name, row.noise_ratio, row.basis)].append(getattr(row, attr))
    series = {}
    for image in dict.fromkeys(r.image_name for r in rows):
        ratios = sorted({r.noise_ratio for r in rows if r.image_name == image})
        series[image] = [(ratio, [float(np.mean(acc[(image, ratio, b)])) for b in bases]) for ratio in ratios]
    return series


def write_plot_data(rows, out_dir, bases):
    out_dir = Path(out_dir)
    for attr, suffix in (("mean_selected", "selected"), ("ssim", "ssim")):
        for image, points in plot_series(rows, attr, bases).items():
            with open(out_dir / f"{image}_{suffix}.dat", "w") as fh:
                fh.write("# noise_ratio " + " ".join(bases) + "\n")
                for ratio, values in points:
                    fh.write(f"{ratio:g} " + " ".join(f"{v:.6f}" for v in values) + "\n")
