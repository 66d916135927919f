#!/usr/bin/env python3
"""Rebuild the benchmark CSVs under data/ from pip-distributed copies.

Sources:
  keel_ds  (wheel)  iris, segment, vehicle, and the binarized ecoli variants
  mvlearn  (wheel)  mfeat-fourier
  synthetic control is regenerated from its published generating process
  (Alcock & Manolopoulos, 1999) with a fixed seed.

Usage: pip download --no-deps keel_ds mvlearn -d wheels/
       python3 scripts/build_datasets.py wheels/ data/
"""
import csv
import glob
import math
import os
import random
import sys
import zipfile


def keel_rows(text):
    rows = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("@"):
            continue
        rows.append([c.strip() for c in line.split(",")])
    return rows


def write_csv(path, header, rows):
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(header)
        w.writerows(rows)


def ecoli_key(feats):
    # Some KEEL ecoli views drop the constant "chg" column and scale by 100.
    vals = [float(c) for c in feats]
    if len(vals) == 7:
        vals = vals[:3] + vals[4:]
    if max(vals) <= 1.0:
        vals = [v * 100 for v in vals]
    return tuple(int(round(v)) for v in vals)


def ecoli_from_binaries(files):
    # KEEL's ecoli1 view keeps the UCI row order, which is sorted by class.
    blocks = [("cp", 143), ("im", 77), ("imS", 2), ("imL", 2), ("imU", 35),
              ("om", 20), ("omL", 5), ("pp", 52)]
    labels = [name for name, count in blocks for _ in range(count)]
    rows = keel_rows(files["ecoli1"])
    assert len(rows) == len(labels)
    # Cross-check the one-vs-rest views that share this ordering or row set.
    for stem, cls in [("ecoli1", "im"), ("ecoli2", "pp"), ("ecoli4", "om")]:
        view = keel_rows(files[stem])
        assert [r[-1] == "positive" for r in view] == [l == cls for l in labels], stem
    imu = {ecoli_key(r[:-1]) for r in keel_rows(files["ecoli3"]) if r[-1] == "positive"}
    assert {ecoli_key(r[:-1]) for r, l in zip(rows, labels) if l == "imU"} == imu
    return [r[:-1] + [l] for r, l in zip(rows, labels)]


def synthetic_control(seed=1999, per_class=100, length=60):
    rng = random.Random(seed)
    m, s = 30.0, 2.0
    rows = []
    kinds = ["normal", "cyclic", "increasing", "decreasing", "upward", "downward"]
    for kind in kinds:
        for _ in range(per_class):
            a = rng.uniform(10, 15)
            period = rng.uniform(10, 15)
            g = rng.uniform(0.2, 0.5)
            x = rng.uniform(7.5, 20)
            t3 = rng.uniform(length / 3, 2 * length / 3)
            series = []
            for t in range(1, length + 1):
                y = m + rng.uniform(-3, 3) * s
                if kind == "cyclic":
                    y += a * math.sin(2 * math.pi * t / period)
                elif kind == "increasing":
                    y += g * t
                elif kind == "decreasing":
                    y -= g * t
                elif kind == "upward":
                    y += x if t >= t3 else 0.0
                elif kind == "downward":
                    y -= x if t >= t3 else 0.0
                series.append(f"{y:.4f}")
            rows.append(series + [kind])
    return rows


def main():
    wheels, out = sys.argv[1], sys.argv[2]
    os.makedirs(out, exist_ok=True)
    keel = zipfile.ZipFile(glob.glob(os.path.join(wheels, "keel_ds-*.whl"))[0])
    dats = {}
    for n in keel.namelist():
        if n.endswith(".dat"):
            dats[os.path.basename(n)[:-4]] = keel.read(n).decode()

    for name in ["iris", "segment", "vehicle"]:
        rows = keel_rows(dats[name])
        m = len(rows[0]) - 1
        write_csv(os.path.join(out, f"{name}.csv"), [f"f{i}" for i in range(m)] + ["class"], rows)

    ecoli = ecoli_from_binaries(dats)
    write_csv(os.path.join(out, "ecoli.csv"), [f"f{i}" for i in range(7)] + ["class"], ecoli)

    mv = zipfile.ZipFile(glob.glob(os.path.join(wheels, "mvlearn-*.whl"))[0])
    text = mv.read("mvlearn/datasets/UCImultifeature/mfeat-fou.csv").decode().splitlines()
    rows = [line.split(",") for line in text[1:] if line.strip()]
    rows = [r[:-1] + [str(int(float(r[-1])))] for r in rows]
    write_csv(os.path.join(out, "mfeat-fourier.csv"), [f"f{i}" for i in range(76)] + ["class"], rows)

    sc = synthetic_control()
    write_csv(os.path.join(out, "synthetic-control.csv"), [f"t{i}" for i in range(60)] + ["class"], sc)


if __name__ == "__main__":
    main()
