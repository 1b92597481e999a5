"""Exit criteria for the package, one test per criterion.

Each test records a PASS/FAIL line that is printed in the "acceptance
criteria" section of the pytest summary.
"""

import csv
import time

import numpy as np
import pytest

from momentcs.basis import dct_basis, krawtchouk_basis, tchebichef_basis
from momentcs.bench import RunConfig, run_benchmark
from momentcs.cli import main
from momentcs.dictionary import build_dictionary
from momentcs.metrics import psnr, ssim
from momentcs.omp import StoppingRule, omp_encode, reconstruct
from momentcs.pipeline import PipelineConfig
from momentcs.synthetic import synthetic_images
from oracles import first_omp_step, tchebichef_direct

BASES = ("tchebichef", "krawtchouk", "dct")
SWEEP = (0.1, 0.2, 0.3, 0.4, 0.5)


def test_c01_orthonormality(criterion):
    with criterion(1, "orthonormal bases, sizes 4..64, max|BB^T - I| < 1e-10, < 1 s") as c:
        t0 = time.perf_counter()
        worst = 0.0
        for N in (4, 8, 12, 32, 64):
            mats = [tchebichef_basis(N), dct_basis(N)] + [krawtchouk_basis(N, p) for p in (0.3, 0.5, 0.7)]
            for B in mats:
                worst = max(worst, np.abs(B.rows @ B.rows.T - np.eye(N)).max())
        elapsed = time.perf_counter() - t0
        c.note(f"worst {worst:.1e}, {elapsed:.3f} s")
        assert worst < 1e-10
        assert elapsed < 1.0


def test_c02_tchebichef_oracle(criterion):
    with criterion(2, "Tchebichef rows match the explicit sum for N <= 12 within 1e-9") as c:
        worst = max(np.abs(tchebichef_basis(N).rows - tchebichef_direct(N)).max() for N in range(1, 13))
        c.note(f"worst {worst:.1e}")
        assert worst < 1e-9


def test_c03_dictionary_gram(criterion):
    with criterion(3, "s=12 dictionaries: max off-diagonal |Gram| < 1e-9") as c:
        worst = 0.0
        for kind in BASES:
            A = build_dictionary(kind, 12).atoms
            G = np.abs(A.T @ A)
            np.fill_diagonal(G, 0.0)
            worst = max(worst, G.max())
        c.note(f"worst {worst:.1e}")
        assert worst < 1e-9


def test_c04_omp_exact_recovery(criterion):
    with criterion(4, "OMP exact recovery of 200 k-sparse targets (k <= 5, d = 144), monotone residual, < 5 s") as c:
        rng = np.random.default_rng(4)
        dicts = [build_dictionary(kind, 12) for kind in BASES]
        t0 = time.perf_counter()
        worst_coef = 0.0
        for trial in range(200):
            D = dicts[trial % 3]
            k = int(rng.integers(1, 6))
            support = rng.choice(np.arange(1, 144), size=k, replace=False)
            coef = rng.uniform(0.5, 20.0, size=k) * rng.choice([-1.0, 1.0], size=k)
            code = omp_encode(D, D.atoms[:, support] @ coef, StoppingRule(0.0, k))
            got = dict(code.entries)
            assert set(got) == set(support.tolist()), f"trial {trial}: support mismatch"
            worst_coef = max(worst_coef, max(abs(got[j] - v) for j, v in zip(support, coef)))
            assert np.all(np.diff(code.residual_history) <= 0.0)
        elapsed = time.perf_counter() - t0
        c.note(f"max coefficient error {worst_coef:.1e}, {elapsed:.2f} s")
        assert worst_coef < 1e-8
        assert elapsed < 5.0


def test_c05_omp_brute_force(criterion):
    with criterion(5, "first OMP step matches exhaustive scan on 100 random 8x16 dictionaries") as c:
        rng = np.random.default_rng(5)
        worst = 0.0
        for _ in range(100):
            A = rng.standard_normal((8, 16))
            A /= np.linalg.norm(A, axis=0)
            y = rng.standard_normal(8)
            j, coef = first_omp_step(A, y)
            code = omp_encode(A, y, StoppingRule(0.0, 1))
            assert code.indices == [j]
            worst = max(worst, abs(code.entries[0][1] - coef))
            assert np.linalg.norm(y - reconstruct(A, code)) == pytest.approx(code.residual_norm, abs=1e-12)
        c.note(f"max coefficient error {worst:.1e}")
        assert worst < 1e-12


@pytest.fixture(scope="module")
def lena_sweep(lena_like):
    cfg = RunConfig(pipeline=PipelineConfig(), images={"astronaut": lena_like}, out_dir=None, ratios=SWEEP, seeds=(0,))
    return {(r.basis, r.noise_ratio): r for r in run_benchmark(cfg)}


def test_c06_denoising_gain_and_trend(criterion, lena_like, lena_sweep):
    with criterion(6, "ratio 0.1 gain >= 2 dB per basis; PSNR/SSIM non-increasing over 0.1..0.5; stride-4 cell < 60 s") as c:
        from momentcs.noise import NoiseSpec, add_gaussian_noise

        noisy = np.floor(add_gaussian_noise(lena_like, NoiseSpec(0.1, 0)) + 0.5)
        base = psnr(lena_like, noisy)
        gains = {b: lena_sweep[(b, 0.1)].psnr_db - base for b in BASES}
        c.note("gain " + ", ".join(f"{b[:3]} {g:+.2f} dB" for b, g in gains.items()))
        assert all(g >= 2.0 for g in gains.values())
        for b in BASES:
            p = [lena_sweep[(b, r)].psnr_db for r in SWEEP]
            s = [lena_sweep[(b, r)].ssim for r in SWEEP]
            assert all(x >= y for x, y in zip(p, p[1:])), f"{b} PSNR not monotone: {p}"
            assert all(x >= y for x, y in zip(s, s[1:])), f"{b} SSIM not monotone: {s}"
        slowest = 0.0
        for b in BASES:
            t0 = time.perf_counter()
            run_benchmark(RunConfig(pipeline=PipelineConfig(stride=4), images={"a": lena_like}, out_dir=None, ratios=(0.1,), bases=(b,), threads=1))
            slowest = max(slowest, time.perf_counter() - t0)
        c.note(f"slowest stride-4 cell {slowest:.2f} s")
        assert slowest < 60.0


def test_c07_parity_band(criterion, lena_sweep):
    with criterion(7, "Lena-class image at ratio 0.1: |PSNR(TM) - PSNR(DCT)| <= 2 dB, |SSIM diff| <= 0.05") as c:
        tm, dct = lena_sweep[("tchebichef", 0.1)], lena_sweep[("dct", 0.1)]
        dp, ds = abs(tm.psnr_db - dct.psnr_db), abs(tm.ssim - dct.ssim)
        c.note(f"TM {tm.psnr_db:.2f} dB / {tm.ssim:.3f}, DCT {dct.psnr_db:.2f} dB / {dct.ssim:.3f}")
        assert dp <= 2.0
        assert ds <= 0.05


def _sparsity_table(images):
    cfg = RunConfig(pipeline=PipelineConfig(), images=images, out_dir=None, ratios=(0.2, 0.3, 0.4, 0.5), seeds=(0,))
    table = {}
    for row in run_benchmark(cfg):
        table.setdefault(row.image_name, {})[(row.basis, row.noise_ratio)] = row.mean_selected
    return table


def _ordering_holds(sel):
    return all(sel[("krawtchouk", r)] <= sel[("dct", r)] and sel[("tchebichef", r)] <= sel[("dct", r)] for r in (0.2, 0.3, 0.4, 0.5))


def test_c08_sparsity_ordering(criterion, natural_images):
    with criterion(8, "ratios >= 0.2: mean_selected KM <= DCT and TM <= DCT on >= 4 of 5 images") as c:
        table = _sparsity_table(natural_images)
        passing = [name for name, sel in table.items() if _ordering_holds(sel)]
        for name, sel in table.items():
            gap_tm = 100.0 * (1 - sel[("tchebichef", 0.2)] / sel[("dct", 0.2)]) if sel[("dct", 0.2)] else 0.0
            gap_km = 100.0 * (1 - sel[("krawtchouk", 0.2)] / sel[("dct", 0.2)]) if sel[("dct", 0.2)] else 0.0
            c.note(f"{name} @0.2 TM {sel[('tchebichef', 0.2)]:.3f} KM {sel[('krawtchouk', 0.2)]:.3f} DCT {sel[('dct', 0.2)]:.3f} (sparser than DCT by TM {gap_tm:+.0f}%, KM {gap_km:+.0f}%)")
        synth = _sparsity_table(synthetic_images())
        c.note(f"synthetic set: ordering holds on {sum(_ordering_holds(s) for s in synth.values())}/{len(synth)}")
        c.note(f"natural set: ordering holds on {len(passing)}/{len(table)} {passing}")
        assert len(passing) >= 4


def test_c09_metric_identities(criterion):
    with criterion(9, "PSNR closed forms within 1e-6 dB; SSIM(a,a) = 1 within 1e-12; constant-vs-constant SSIM = 0.9281 within 1e-4") as c:
        a = np.full((16, 16), 100.0)
        assert abs(psnr(a, a + 1) - 48.13080360867909) < 1e-6
        assert abs(psnr(np.zeros((16, 16)), np.full((16, 16), 255.0))) < 1e-6
        img = np.random.default_rng(9).uniform(0, 255, (32, 32))
        assert abs(ssim(img, img) - 1.0) < 1e-12
        value = ssim(np.full((16, 16), 100.0), np.full((16, 16), 150.0))
        c.note(f"constant-vs-constant SSIM = {value:.6f}")
        assert abs(value - 0.9281) < 1e-4


def test_c10_determinism(criterion, tmp_path):
    with criterion(10, "two identical bench runs give byte-identical CSV (timing suppressed) and images") as c:
        outs = []
        for name in ("run1", "run2"):
            out = tmp_path / name
            argv = ["bench", "--synthetic", "--ratio", "0.1,0.3", "--seed", "3,4", "--stride", "2", "--no-timing", "--out", str(out)]
            assert main(argv) == 0
            outs.append(out)
        files = sorted(p.name for p in outs[0].iterdir())
        assert files == sorted(p.name for p in outs[1].iterdir())
        differing = [f for f in files if (outs[0] / f).read_bytes() != (outs[1] / f).read_bytes()]
        with open(outs[0] / "results.csv") as fh:
            n_rows = len(list(csv.DictReader(fh)))
        c.note(f"{len(files)} files compared, {n_rows} CSV rows, {len(differing)} differ")
        assert not differing
