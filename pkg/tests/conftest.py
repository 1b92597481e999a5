import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from momentcs.pipeline import PipelineConfig, prepare_image  # noqa: E402

# grayscale stand-ins for the five standard benchmark photographs
NATURAL = ("astronaut", "camera", "chelsea", "coffee", "rocket")


def _natural(name):
    data = pytest.importorskip("skimage.data")
    from skimage.color import rgb2gray

    img = getattr(data, name)()
    if img.ndim == 3:
        img = rgb2gray(img[..., :3]) * 255.0
    img = prepare_image(np.asarray(img, dtype=np.float64), PipelineConfig())
    return np.clip(np.floor(img + 0.5), 0, 255)


@pytest.fixture(scope="session")
def natural_images():
    return {name: _natural(name) for name in NATURAL}


@pytest.fixture(scope="session")
def lena_like(natural_images):
    # portrait with skin, hair and fabric texture
    return natural_images["astronaut"]


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


_ACCEPTANCE = []


class _Criterion:
    def __init__(self, number, title):
        self.number = number
        self.title = title
        self.notes = []

    def note(self, text):
        self.notes.append(text)

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        status = "PASS" if exc_type is None else "FAIL"
        detail = "; ".join(self.notes)
        _ACCEPTANCE.append(f"[{status}] criterion {self.number:>2}: {self.title}" + (f" -- {detail}" if detail else ""))
        return False


@pytest.fixture
def criterion():
    return _Criterion


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(_ACCEPTANCE, key=lambda s: int(s.split("criterion")[1].split(":")[0])):
        terminalreporter.write_line(line)
