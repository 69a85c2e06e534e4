"""Gaussian blur versus pixelation on a synthetic portrait.

Paints a toy face on a gradient background, then anonymizes the same region
both ways. Pixels outside the (inflated) box are untouched, bit for bit.

Run:  python3 demos/06_anonymize_images.py
"""

from pathlib import Path

import numpy as np

from headbox import AnonymizeConfig, AnonymizeMethod, BBox, Detection, Source, anonymize_frame
from headbox.anonymize import save_image

OUT = Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)


def toy_portrait(h=160, w=240):
    img = np.zeros((h, w, 3), dtype=np.uint8)
    img[:, :, 0] = np.linspace(40, 90, w, dtype=np.uint8)[None, :]
    img[:, :, 1] = np.linspace(90, 140, h, dtype=np.uint8)[:, None]
    img[:, :, 2] = 110
    yy, xx = np.mgrid[0:h, 0:w]
    face = ((xx - 120) / 28) ** 2 + ((yy - 70) / 36) ** 2 <= 1.0
    img[face] = (224, 188, 160)
    for ex in (108, 132):
        eye = (xx - ex) ** 2 + (yy - 60) ** 2 <= 9
        img[eye] = (30, 30, 30)
    mouth = (np.abs(yy - 88) <= 2) & (np.abs(xx - 120) <= 10)
    img[mouth] = (150, 60, 60)
    return img


def main():
    img = toy_portrait()
    save_image(img, OUT / "06_original.png")
    region = [Detection(BBox(88, 30, 152, 110), 0.9, Source.HEAD)]

    for method, name in [(AnonymizeMethod.GAUSSIAN_BLUR, "blurred"),
                         (AnonymizeMethod.PIXELATE, "pixelated")]:
        cfg = AnonymizeConfig(method=method, margin_ratio=0.1)
        out = anonymize_frame(img, region, cfg)
        changed = (out != img).any(axis=2).mean()
        print(f"{name}: {changed:.1%} of pixels changed "
              f"(method={method.value})")
        save_image(out, OUT / f"06_{name}.png")
    print(f"images saved under {OUT}")


if __name__ == "__main__":
    main()
