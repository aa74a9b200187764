"""Regenerates the photo fixtures and FSIM reference values under testdata/.

Source photos are the scikit-image sample data set. FSIM reference values
come from the `piq` package evaluated in float64 on single-channel inputs.
"""
import io
import json
import os

import numpy as np
from PIL import Image, ImageFilter
from skimage import data as skdata

HERE = os.path.dirname(os.path.abspath(__file__))
SRC = os.path.dirname(skdata.__file__)
MAX_SIDE = 384

PRISTINE = ["brick.png", "camera.png", "chelsea.png", "coins.png", "grass.png",
            "gravel.png", "ihc.png", "moon.png", "motorcycle_left.png", "rocket.jpg"]
CLEAN = ["astronaut.png", "coffee.png", "motorcycle_right.png"]
# Natural photos bundled with other installed packages.
EXTRA_CLEAN = [
    ("matplotlib", "mpl-data/sample_data/grace_hopper.jpg"),
    ("sklearn", "datasets/images/china.jpg"),
]


def shrink(im):
    w, h = im.size
    s = MAX_SIDE / max(w, h)
    if s < 1:
        im = im.resize((round(w * s), round(h * s)), Image.LANCZOS)
    return im


def export(names, sub):
    out = os.path.join(HERE, "photos", sub)
    os.makedirs(out, exist_ok=True)
    for n in names:
        if isinstance(n, tuple):
            pkg, rel = n
            n = os.path.join(os.path.dirname(__import__(pkg).__file__), rel)
        im = Image.open(os.path.join(SRC, n))
        im = im.convert("RGB") if im.mode not in ("L", "RGB") else im
        im = shrink(im)
        name = os.path.splitext(os.path.basename(n))[0]
        im.save(os.path.join(out, name + ".png"), optimize=True)


def fsim_pairs():
    rng = np.random.default_rng(20240601)
    out = os.path.join(HERE, "fsim")
    os.makedirs(out, exist_ok=True)
    pairs = []

    cam = Image.open(os.path.join(SRC, "camera.png")).convert("L")
    a = np.asarray(cam, dtype=np.float64)
    noisy = np.clip(np.round(a + rng.normal(0, 10, a.shape)), 0, 255).astype(np.uint8)
    cam.save(os.path.join(out, "camera_ref.png"))
    Image.fromarray(noisy).save(os.path.join(out, "camera_noise.png"))
    pairs.append(("camera_ref.png", "camera_noise.png"))

    coins = Image.open(os.path.join(SRC, "coins.png")).convert("L")
    coins.save(os.path.join(out, "coins_ref.png"))
    coins.filter(ImageFilter.GaussianBlur(1.5)).save(os.path.join(out, "coins_blur.png"))
    pairs.append(("coins_ref.png", "coins_blur.png"))

    moon = Image.open(os.path.join(SRC, "moon.png")).convert("L").crop((128, 128, 384, 384))
    moon.save(os.path.join(out, "moon_ref.png"))
    buf = io.BytesIO()
    moon.save(buf, format="JPEG", quality=15)
    Image.open(buf).convert("L").save(os.path.join(out, "moon_jpeg.png"))
    pairs.append(("moon_ref.png", "moon_jpeg.png"))

    astro = Image.open(os.path.join(SRC, "astronaut.png")).convert("L").resize((240, 200), Image.LANCZOS)
    astro.save(os.path.join(out, "astro_ref.png"))
    b = np.asarray(astro, dtype=np.float64) / 255.0
    dark = np.round(255 * 0.3 * b ** 1.8).astype(np.uint8)
    Image.fromarray(dark).save(os.path.join(out, "astro_dark.png"))
    pairs.append(("astro_ref.png", "astro_dark.png"))
    return pairs


def reference_fsim(pairs):
    import torch
    import piq
    rows = []
    for r, t in pairs:
        load = lambda n: torch.from_numpy(
            np.asarray(Image.open(os.path.join(HERE, "fsim", n)), dtype=np.float64) / 255.0)[None, None]
        x, y = load(r), load(t)
        v = piq.fsim(x, y, data_range=1.0, chromatic=False).item()
        rows.append({"reference": r, "test": t, "fsim": v})
    with open(os.path.join(HERE, "fsim", "reference.json"), "w") as f:
        json.dump(rows, f, indent=2)
    return rows


def reference_niqe():
    """Scores the clean photos with pyiqa's NIQE against the model in
    niqe/pristine_model.json (written by the Rust test-suite model fit)."""
    import torch
    from pyiqa.archs.niqe_arch import niqe
    model_path = os.path.join(HERE, "niqe", "pristine_model.json")
    if not os.path.exists(model_path):
        return []
    with open(model_path) as f:
        model = json.load(f)
    mu = torch.tensor(model["feature_mean"], dtype=torch.float64)[None]
    cov = torch.tensor(model["feature_cov"], dtype=torch.float64)[None]
    clean = os.path.join(HERE, "photos", "clean")
    rows = []
    for name in sorted(os.listdir(clean)):
        rgb = np.asarray(Image.open(os.path.join(clean, name)), dtype=np.float64)
        gray = rgb if rgb.ndim == 2 else rgb @ np.array([0.2126, 0.7152, 0.0722])
        score = niqe(torch.from_numpy(gray)[None, None], mu, cov).item()
        rows.append({"image": name, "niqe": score})
    with open(os.path.join(HERE, "niqe", "reference.json"), "w") as f:
        json.dump(rows, f, indent=2)
    return rows


if __name__ == "__main__":
    export(PRISTINE, "pristine")
    export(CLEAN + EXTRA_CLEAN, "clean")
    for row in reference_fsim(fsim_pairs()):
        print(row)
    for row in reference_niqe():
        print(row)
