"""Command-line interface: ``momentcs {dict,noise,denoise,metrics,bench}``.

Settings are resolved as built-in defaults, then ``--config FILE``
(``key = value`` lines), then explicit command-line flags.
"""

from __future__ import annotations

import argparse
import logging
import sys

from momentcs import bench
from momentcs.config import parse_bool, parse_list, read_config
from momentcs.dictionary import build_dictionary, mutual_coherence, render_atlas
from momentcs.errors import InvalidArgument
from momentcs.imageio import load_image, save_image, to_uint8
from momentcs.metrics import psnr, ssim
from momentcs.noise import NoiseSpec, add_gaussian_noise
from momentcs.pipeline import PipelineConfig, denoise_image, prepare_image
from momentcs.synthetic import synthetic_images

DEFAULTS = {
    "basis": "tchebichef",
    "patch_size": "12",
    "stride": "1",
    "ratio": "0.1",
    "seed": "0",
    "p1": "0.5",
    "p2": "0.5",
    "stop_gain": "1.15",
    "max_atoms": "36",
    "no_resize": "false",
    "clamp": "true",
    "gap": "1",
}
BENCH_DEFAULTS = {
    "basis": ",".join(bench.STANDARD_BASES),
    "ratio": ",".join(f"{r:g}" for r in bench.STANDARD_RATIOS),
    "out": "bench_out",
    "timing": "true",
    "synthetic": "false",
}


def _common(p):
    p.add_argument("--config", metavar="FILE", help="key = value settings file; flags override it")
    p.add_argument("--basis", help="tchebichef, krawtchouk or dct (comma list for bench)")
    p.add_argument("--patch-size", dest="patch_size", help="patch side length (default 12)")
    p.add_argument("--p1", help="Krawtchouk parameter along patch rows (default 0.5)")
    p.add_argument("--p2", help="Krawtchouk parameter along patch columns (default 0.5)")
    p.add_argument("--out", help="output path")


def _pipeline_flags(p):
    p.add_argument("--stride", help="patch stride (default 1)")
    p.add_argument("--stop-gain", dest="stop_gain", help="residual threshold gain g in g*sigma*patch_size (default 1.15)")
    p.add_argument("--max-atoms", dest="max_atoms", help="cap on atoms per patch (default 36)")
    p.add_argument("--no-resize", dest="no_resize", action="store_const", const="true", help="skip the 144x144 resize")


def _noise_flags(p, plural=False):
    suffix = " (comma list)" if plural else ""
    p.add_argument("--ratio", help="noise ratio, sigma = ratio * 255" + suffix)
    p.add_argument("--seed", help="noise seed" + suffix)
    p.add_argument("--no-clamp", dest="clamp", action="store_const", const="false", help="do not clamp noisy pixels to [0, 255]")


def build_parser():
    parser = argparse.ArgumentParser(prog="momentcs", description="Moment-transform sparse coding for image denoising.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", required=True)

    p = sub.add_parser("dict", help="build a dictionary, render its atlas and report coherence")
    _common(p)
    p.add_argument("--gap", help="separator width between atlas tiles (default 1)")
    p.add_argument("--csv", help="also dump the atoms as CSV, one atom per line")

    p = sub.add_parser("noise", help="add seeded Gaussian noise to an image")
    p.add_argument("input")
    _common(p)
    _noise_flags(p)
    p.add_argument("--no-resize", dest="no_resize", action="store_const", const="true", help="skip the 144x144 resize")

    p = sub.add_parser("denoise", help="noise and denoise one image, reporting PSNR/SSIM")
    p.add_argument("input")
    _common(p)
    _pipeline_flags(p)
    _noise_flags(p)
    p.add_argument("--noisy", action="store_const", const="true", help="input is already noisy; --ratio only sets the stopping rule")

    p = sub.add_parser("metrics", help="PSNR and SSIM between two images")
    p.add_argument("reference")
    p.add_argument("test")

    p = sub.add_parser("bench", help="run the image x ratio x seed x basis grid")
    p.add_argument("inputs", nargs="*")
    _common(p)
    _pipeline_flags(p)
    _noise_flags(p, plural=True)
    p.add_argument("--synthetic", action="store_const", const="true", help="add the built-in synthetic image set")
    p.add_argument("--no-timing", dest="timing", action="store_const", const="false", help="write 0 in the timing column")
    return parser


def resolve(args, extra_defaults=None):
    settings = dict(DEFAULTS)
    settings.update(extra_defaults or {})
    if getattr(args, "config", None):
        settings.update(read_config(args.config))
    for key, value in vars(args).items():
        if value is not None and value != [] and key not in ("config", "command", "verbose"):
            settings[key] = value
    return settings


def pipeline_config(s, basis=None):
    return PipelineConfig(
        patch_size=int(s["patch_size"]),
        stride=int(s["stride"]),
        resize_to=None if parse_bool(s["no_resize"]) else (144, 144),
        stop_gain=float(s["stop_gain"]),
        max_atoms=int(s["max_atoms"]),
        basis=basis or s["basis"],
        p1=float(s["p1"]),
        p2=float(s["p2"]),
    )


def _require_out(s):
    if not s.get("out"):
        raise InvalidArgument("--out is required")
    return s["out"]


def cmd_dict(s):
    D = build_dictionary(s["basis"], int(s["patch_size"]), float(s["p1"]), float(s["p2"]))
    if s.get("out"):
        atlas = render_atlas(D, int(s["gap"]))
        save_image(atlas, s["out"])
        print(f"atlas: {s['out']} ({atlas.shape[1]}x{atlas.shape[0]})")
    if s.get("csv"):
        D.to_csv(s["csv"])
    print(f"atoms: {D.n_atoms} x {D.atom_dim}")
    print(f"coherence: {mutual_coherence(D):.6f}")


def cmd_noise(s):
    out = _require_out(s)
    img = load_image(s["input"])
    if not parse_bool(s["no_resize"]):
        img = prepare_image(img, PipelineConfig())
    spec = NoiseSpec(float(s["ratio"]), int(s["seed"]), clamp=parse_bool(s["clamp"]))
    save_image(add_gaussian_noise(img, spec), out)
    print(f"sigma: {spec.sigma:.4f}")


def cmd_denoise(s):
    cfg = pipeline_config(s)
    img = prepare_image(load_image(s["input"]), cfg)
    ratio = float(s["ratio"])
    spec = NoiseSpec(ratio, int(s["seed"]), clamp=parse_bool(s["clamp"]))
    if parse_bool(s.get("noisy", "false")):
        clean, noisy = None, img
    else:
        clean = to_uint8(img).astype(float)
        noisy = add_gaussian_noise(clean, spec)
        if spec.clamp:
            noisy = to_uint8(noisy).astype(float)
    out, stats = denoise_image(noisy, cfg, spec.sigma)
    if s.get("out"):
        save_image(out, s["out"])
    print(f"patches: {stats.patches_total}")
    print(f"mean selected: {stats.mean_selected:.4f}")
    if clean is not None:
        den = to_uint8(out)
        print(f"noisy PSNR: {psnr(clean, noisy):.4f}  SSIM: {ssim(clean, noisy):.4f}")
        print(f"denoised PSNR: {psnr(clean, den):.4f}  SSIM: {ssim(clean, den):.4f}")
    print(f"time: {stats.wall_time_ms:.1f} ms")


def cmd_metrics(s):
    a = load_image(s["reference"])
    b = load_image(s["test"])
    value = psnr(a, b)
    print("PSNR: inf" if value == float("inf") else f"PSNR: {value:.4f}")
    print(f"SSIM: {ssim(a, b):.4f}")


def cmd_bench(s):
    inputs = parse_list(s.get("inputs", ""))
    images = synthetic_images() if parse_bool(s["synthetic"]) else {}
    cfg = bench.RunConfig(
        pipeline=pipeline_config(s, basis=parse_list(s["basis"])[0]),
        inputs=inputs,
        images=images,
        out_dir=s["out"],
        seeds=tuple(parse_list(s["seed"], int)),
        bases=tuple(parse_list(s["basis"])),
        ratios=tuple(parse_list(s["ratio"], float)),
        timing=parse_bool(s["timing"]),
        clamp_noise=parse_bool(s["clamp"]),
    )
    rows = bench.run_benchmark(cfg)
    print(f"rows: {len(rows)}")
    print(f"results: {cfg.out_dir}/results.csv")


COMMANDS = {
    "dict": (cmd_dict, None),
    "noise": (cmd_noise, None),
    "denoise": (cmd_denoise, None),
    "metrics": (cmd_metrics, None),
    "bench": (cmd_bench, BENCH_DEFAULTS),
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    func, extra = COMMANDS[args.command]
    try:
        settings = resolve(args, extra)
        func(settings)
    except (OSError, ValueError, KeyError) as exc:
        print(f"momentcs {args.command}: error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # one-line diagnostic instead of a traceback
        print(f"momentcs {args.command}: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
