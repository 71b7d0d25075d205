import numpy as np
import pytest
from PIL import Image

from histembed.image_io import ImageTensor, load_image, save_image
from imagedata import CORPUS_NAMES, skimage_data_dir, worked_example_uint8


@pytest.fixture
def rng():
    return np.random.default_rng(20251016)


@pytest.fixture
def worked_png(tmp_path):
    path = tmp_path / "worked.png"
    Image.fromarray(worked_example_uint8()).save(path)
    return path


@pytest.fixture(scope="session")
def corpus(tmp_path_factory):
    """Natural test photographs, re-encoded with the package's PNG writer."""
    root = skimage_data_dir()
    if root is None:
        pytest.skip("scikit-image not installed; no test-image corpus")
    out = tmp_path_factory.mktemp("corpus")
    paths = []
    for name in CORPUS_NAMES:
        img = load_image(f"{root}/{name}.png")
        dest = out / f"{name}.png"
        save_image(img, dest)
        paths.append(dest)
    return paths


@pytest.fixture
def random_image(rng):
    def make(h, w, c=3):
        return ImageTensor(rng.random((h, w, c)))

    return make


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(results, key=lambda s: int(s[1:s.index("]")])):
        terminalreporter.write_line(line)
