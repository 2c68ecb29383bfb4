#!/usr/bin/env python3
"""Prepare the Stanford Background dataset and run 5-fold cross-validation.

The dataset (iccv09Data) ships as images/*.jpg plus labels/*.regions.txt
(space-separated integer matrices, -1 = unlabeled). This script converts
both to the PNG manifest layout the engine reads (255 = void), writes fold
manifests, and optionally runs train/eval per fold with the `wsg` CLI.

Usage:
  python3 scripts/stanford_background.py --data iccv09Data --out sb_prepared
  python3 scripts/stanford_background.py --data iccv09Data --out sb_prepared \
      --run --wsg build/wsg --gamma 10 --lambda 1e-5

Accuracy is reported per fold and averaged; no threshold is enforced.
"""

import argparse
import os
import re
import subprocess
import sys

import numpy as np
from PIL import Image

CLASSES = "sky,tree,road,grass,water,building,mountain,foreground"


def convert(data_dir, out_dir):
    os.makedirs(out_dir, exist_ok=True)
    names = []
    label_dir = os.path.join(data_dir, "labels")
    for fn in sorted(os.listdir(label_dir)):
        if not fn.endswith(".regions.txt"):
            continue
        stem = fn[: -len(".regions.txt")]
        img_path = os.path.join(data_dir, "images", stem + ".jpg")
        if not os.path.exists(img_path):
            continue
        labels = np.loadtxt(os.path.join(label_dir, fn), dtype=np.int16)
        labels = np.where(labels < 0, 255, labels).astype(np.uint8)
        Image.open(img_path).convert("RGB").save(
            os.path.join(out_dir, stem + ".png"))
        Image.fromarray(labels, mode="L").save(
            os.path.join(out_dir, stem + "_labels.png"))
        names.append(stem)
    return names


def write_manifest(path, names):
    with open(path, "w") as f:
        f.write("#classes: %s\n" % CLASSES)
        for stem in names:
            f.write("%s.png\t%s_labels.png\n" % (stem, stem))


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--data", required=True, help="iccv09Data directory")
    ap.add_argument("--out", required=True, help="output directory")
    ap.add_argument("--folds", type=int, default=5)
    ap.add_argument("--run", action="store_true", help="train/eval per fold")
    ap.add_argument("--wsg", default="build/wsg", help="path to the wsg CLI")
    ap.add_argument("--gamma", default="10")
    ap.add_argument("--lambda", dest="lam", default="1e-5")
    ap.add_argument("--seed", default="1")
    args = ap.parse_args()

    names = convert(args.data, args.out)
    if not names:
        sys.exit("no image/label pairs found under %s" % args.data)
    print("converted %d images" % len(names))

    rng = np.random.default_rng(int(args.seed))
    order = rng.permutation(len(names))
    folds = [sorted(order[k::args.folds].tolist()) for k in range(args.folds)]

    accs = []
    for k, held_out in enumerate(folds):
        test = [names[i] for i in held_out]
        train = [n for n in names if n not in set(test)]
        train_m = os.path.join(args.out, "fold%d_train.txt" % k)
        test_m = os.path.join(args.out, "fold%d_test.txt" % k)
        write_manifest(train_m, train)
        write_manifest(test_m, test)
        if not args.run:
            continue
        model = os.path.join(args.out, "fold%d_model.bin" % k)
        subprocess.check_call([
            args.wsg, "train", "--manifest", train_m, "--out", model,
            "--gamma", args.gamma, "--lambda", args.lam, "--seed", args.seed,
        ])
        out = subprocess.check_output([
            args.wsg, "eval", "--model", model, "--manifest", test_m,
            "--boundary-radius", "3",
        ]).decode()
        print("fold %d:" % k, out.strip().replace("\n", ", "))
        m = re.search(r"pixel_accuracy = ([0-9.]+)", out)
        accs.append(float(m.group(1)))

    if accs:
        print("mean pixel accuracy over %d folds: %.4f" % (len(accs), sum(accs) / len(accs)))
    else:
        print("fold manifests written; rerun with --run to train and evaluate")


if __name__ == "__main__":
    main()
