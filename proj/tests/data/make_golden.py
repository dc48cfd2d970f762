#!/usr/bin/env python3
"""Regenerates the golden fixtures under tests/data with pycocotools.

    pip install pycocotools numpy
    python3 tests/data/make_golden.py

Outputs (committed; regenerate only when changing the fixtures):
  rle_golden.jsonl   50 masks: dense bits, reference compressed counts,
                     reference bbox and area
  coco_fixture.json  10-image COCO dataset mixing polygon and RLE segmentations
  lvis_fixture.json  small LVIS-style dataset with frequency bands
"""

import json
import os

import numpy as np
from pycocotools import mask as mask_util

HERE = os.path.dirname(os.path.abspath(__file__))


def random_mask(rng, h, w, kind):
    if kind == "empty":
        return np.zeros((h, w), np.uint8)
    if kind == "full":
        return np.ones((h, w), np.uint8)
    if kind == "noise":
        return (rng.random((h, w)) < rng.uniform(0.05, 0.95)).astype(np.uint8)
    if kind == "blobs":
        m = np.zeros((h, w), np.uint8)
        for _ in range(rng.integers(1, 6)):
            cy, cx = rng.uniform(0, h), rng.uniform(0, w)
            ry, rx = rng.uniform(1, h / 2 + 1), rng.uniform(1, w / 2 + 1)
            yy, xx = np.mgrid[0:h, 0:w]
            m |= ((((yy + 0.5 - cy) / ry) ** 2 + ((xx + 0.5 - cx) / rx) ** 2) <= 1).astype(np.uint8)
        return m
    if kind == "stripes":
        m = np.zeros((h, w), np.uint8)
        period = int(rng.integers(2, 9))
        if rng.random() < 0.5:
            m[:, ::period] = 1
        else:
            m[::period, :] = 1
        return m
    raise ValueError(kind)


def encode(m):
    rle = mask_util.encode(np.asfortranarray(m))
    return rle


def make_rle_golden(rng):
    kinds = ["empty", "full", "noise", "blobs", "stripes"]
    rows = []
    for i in range(50):
        kind = kinds[i % len(kinds)]
        if i < 40:
            h, w = int(rng.integers(1, 65)), int(rng.integers(1, 65))
        else:
            h, w = int(rng.integers(65, 129)), int(rng.integers(65, 129))
        m = random_mask(rng, h, w, kind)
        rle = encode(m)
        bbox = [int(v) for v in mask_util.toBbox(rle)]
        rows.append({
            "h": h,
            "w": w,
            "kind": kind,
            "bits": "".join("1" if v else "0" for v in m.reshape(-1)),
            "counts": rle["counts"].decode("ascii"),
            "bbox": bbox,
            "area": int(mask_util.area(rle)),
        })
    with open(os.path.join(HERE, "rle_golden.jsonl"), "w") as f:
        for r in rows:
            f.write(json.dumps(r) + "\n")


def make_coco_fixture(rng, n_images, with_frequency, name):
    images, annotations = [], []
    categories = []
    bands = ["r", "c", "f"]
    for c in range(1, 5):
        cat = {"id": c, "name": f"thing_{c}", "supercategory": "object"}
        if with_frequency:
            cat["frequency"] = bands[(c - 1) % 3]
        categories.append(cat)
    ann_id = 1
    for i in range(1, n_images + 1):
        w, h = int(rng.integers(20, 61)), int(rng.integers(20, 61))
        images.append({"id": i, "width": w, "height": h, "file_name": f"img_{i:03d}.jpg"})
        for k in range(int(rng.integers(0, 4))):
            cat = int(rng.integers(1, 5))
            if k % 2 == 0:
                x0, y0 = rng.uniform(0, w / 2), rng.uniform(0, h / 2)
                x1, y1 = rng.uniform(x0 + 3, w), rng.uniform(y0 + 3, h)
                poly = [x0, y0, x1, y0 + 1.5, x1 - 1, y1, x0 + 0.5, y1 - 2]
                seg = [[round(v, 2) for v in poly]]
                annotations.append({"id": ann_id, "image_id": i, "category_id": cat,
                                    "segmentation": seg, "iscrowd": 0})
            else:
                m = random_mask(rng, h, w, "blobs")
                if m.sum() == 0:
                    continue
                rle = encode(m)
                annotations.append({
                    "id": ann_id, "image_id": i, "category_id": cat,
                    "segmentation": {"size": [h, w], "counts": rle["counts"].decode("ascii")},
                    "area": int(mask_util.area(rle)),
                    "bbox": [int(v) for v in mask_util.toBbox(rle)],
                    "iscrowd": 0,
                })
            ann_id += 1
    doc = {"info": {"description": "pastekit test fixture"}, "images": images,
           "annotations": annotations, "categories": categories}
    with open(os.path.join(HERE, name), "w") as f:
        json.dump(doc, f, indent=1)


def main():
    rng = np.random.default_rng(20260315)
    make_rle_golden(rng)
    make_coco_fixture(rng, 10, False, "coco_fixture.json")
    make_coco_fixture(rng, 12, True, "lvis_fixture.json")


if __name__ == "__main__":
    main()
