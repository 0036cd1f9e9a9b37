#!/usr/bin/env python3
"""Regenerates tests/fixtures/photos/ from the scikit-image sample photographs.

Each fixture is a 264x200 crop of a sample photo, resampled with Lanczos and
saved as lossless PNG. Grayscale sources stay single-channel.
"""
import argparse
import os

import numpy as np
import skimage.data
from PIL import Image

WIDTH, HEIGHT = 264, 200

# (source file, crop box as fractions of source: left, top, right, bottom)
SOURCES = [
    ("astronaut.png", (0.0, 0.0, 0.75, 0.75)),
    ("astronaut.png", (0.25, 0.25, 1.0, 1.0)),
    ("camera.png", (0.0, 0.0, 0.8, 0.8)),
    ("camera.png", (0.2, 0.2, 1.0, 1.0)),
    ("coffee.png", (0.0, 0.0, 0.6, 0.7)),
    ("coffee.png", (0.4, 0.3, 1.0, 1.0)),
    ("chelsea.png", (0.0, 0.0, 1.0, 1.0)),
    ("rocket.jpg", (0.0, 0.0, 0.6, 0.7)),
    ("rocket.jpg", (0.4, 0.3, 1.0, 1.0)),
    ("motorcycle_left.png", (0.0, 0.0, 0.6, 0.7)),
    ("motorcycle_left.png", (0.4, 0.3, 1.0, 1.0)),
    ("motorcycle_right.png", (0.2, 0.1, 0.8, 0.9)),
    ("hubble_deep_field.jpg", (0.0, 0.0, 0.5, 0.5)),
    ("hubble_deep_field.jpg", (0.5, 0.5, 1.0, 1.0)),
    ("brick.png", (0.0, 0.0, 1.0, 1.0)),
    ("grass.png", (0.0, 0.0, 1.0, 1.0)),
    ("gravel.png", (0.0, 0.0, 1.0, 1.0)),
    ("moon.png", (0.0, 0.0, 0.7, 0.7)),
    ("moon.png", (0.3, 0.3, 1.0, 1.0)),
    ("coins.png", (0.0, 0.0, 1.0, 1.0)),
    ("clock_motion.png", (0.0, 0.0, 1.0, 1.0)),
    ("retina.jpg", (0.15, 0.15, 0.55, 0.55)),
    ("retina.jpg", (0.45, 0.45, 0.85, 0.85)),
    ("ihc.png", (0.0, 0.0, 1.0, 1.0)),
    ("cell.png", (0.0, 0.0, 1.0, 0.8)),
]


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--out", default=os.path.join(
        os.path.dirname(__file__), "..", "tests", "fixtures", "photos"))
    args = parser.parse_args()
    os.makedirs(args.out, exist_ok=True)

    data_dir = os.path.dirname(skimage.data.__file__)
    for i, (name, (l, t, r, b)) in enumerate(SOURCES):
        img = Image.open(os.path.join(data_dir, name))
        if img.mode not in ("L", "RGB"):
            img = img.convert("RGB")
        w, h = img.size
        box = (int(l * w), int(t * h), int(r * w), int(b * h))
        out = img.crop(box).resize((WIDTH, HEIGHT), Image.LANCZOS)
        stem = os.path.splitext(name)[0]
        path = os.path.join(args.out, f"photo_{i:02d}_{stem}.png")
        out.save(path, optimize=True)
        print(path, out.mode, np.asarray(out).std().round(1))


if __name__ == "__main__":
    main()
