"""Regenerate the sample inputs under data/.

Runtimes are seconds per 100-request batch. Exit distributions move from
shallow to deep exits as conf_thres rises.
"""

import json
import random
from pathlib import Path

OUT = Path(__file__).resolve().parent.parent / "data"

LARGE = [1.0, 0.9, 0.8, 0.7, 0.6, 3.0, 3.3]
XLARGE = [0.5, 0.45, 0.4, 0.35, 0.3, 1.7, 1.8]
FAAS = [0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 1.0]

SHALLOW = [0.55, 0.25, 0.08, 0.05, 0.04, 0.02, 0.01]
MIDDLE = [0.05, 0.10, 0.25, 0.30, 0.20, 0.07, 0.03]
DEEP = [0.01, 0.02, 0.02, 0.05, 0.10, 0.30, 0.50]


def blend(a, b, w):
    return [round((1 - w) * x + w * y, 6) for x, y in zip(a, b)]


def normalized(f):
    f = list(f)
    f[-1] = round(1.0 - sum(f[:-1]), 6)
    return f


def family():
    members = []
    for i in range(14):
        conf = round(0.30 + 0.05 * i, 2)
        if conf <= 0.625:
            f = blend(SHALLOW, MIDDLE, (conf - 0.30) / 0.325)
        else:
            f = blend(MIDDLE, DEEP, (conf - 0.625) / 0.325)
        members.append({"conf_thres": conf, "fractions": normalized(f)})
    return members


def write_json(name, doc):
    (OUT / name).write_text(json.dumps(doc, indent=2) + "\n")


def main():
    OUT.mkdir(exist_ok=True)
    write_json("vgg16_ic_profile.json", {
        "name": "vgg16-ic",
        "slo_seconds": 6.0,
        "batch_size": 100,
        "partitions": [
            {"pid": i + 1, "ends_in_classifier": True,
             "runtimes": {"c6i.large": LARGE[i], "c6i.xlarge": XLARGE[i], "faas-8845": FAAS[i]}}
            for i in range(7)
        ],
    })
    write_json("pricing_default.json", {
        "currency": "USD",
        "offload_transmission_s": 0.0,
        "configs": [
            {"id": "c6i.large", "kind": "vm", "vcpus": 2, "memory_mb": 4096, "price_per_hour": 0.085, "r_max": 100},
            {"id": "c6i.xlarge", "kind": "vm", "vcpus": 4, "memory_mb": 8192, "price_per_hour": 0.17, "r_max": 100},
            {"id": "faas-8845", "kind": "serverless", "memory_mb": 8845, "price_per_gb_s": 0.0000166667},
        ],
    })
    write_json("dist_conf_0.5.json", {"conf_thres": 0.5, "fractions": SHALLOW})
    write_json("dist_conf_0.7.json", {"conf_thres": 0.7, "fractions": MIDDLE})
    write_json("dist_conf_0.85.json", {"conf_thres": 0.85, "fractions": DEEP})
    write_json("dist_family.json", {"family": family()})

    rng = random.Random(7)
    rows = ["epoch,requests"]
    for epoch in range(400):
        base = 150 + 40 * ((epoch // 50) % 2)
        burst = 180 if 120 <= epoch < 135 or 300 <= epoch < 310 else 0
        rows.append(f"{epoch},{max(0, int(rng.gauss(base + burst, 25)))}")
    (OUT / "trace_bursty.csv").write_text("\n".join(rows) + "\n")


if __name__ == "__main__":
    main()
