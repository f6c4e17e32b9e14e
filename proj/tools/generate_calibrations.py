# Copyright 2026 The heabench Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Writes the synthetic device calibrations shipped in data/calibrations.

The numbers are invented, device-flavoured values (T1/T2 in microseconds,
gate durations in nanoseconds). Each device gets its own CX/CZ cost balance
and seeded per-qubit / per-edge variation.
"""

import argparse
import os

import numpy as np

EDGES = [(0, 1), (1, 2), (2, 3), (0, 3)]

# name: (t1, t2, err_1q, err_cx, err_cz, dur_cx, dur_cz, readout)
# err_cz None: no native CZ; it is compiled as H(target) CX H(target), so its
# error is the edge's CX error plus two single-qubit errors on the target.
DEVICES = {
    "ibmqx2-like": (55.0, 40.0, 2.5e-3, 5.0e-2, None, 380.0, None, 0.035),
    "melbourne-like": (50.0, 60.0, 2.0e-3, 3.5e-2, 3.0e-2, 900.0, 800.0, 0.060),
    "vigo-like": (100.0, 80.0, 4.0e-4, 8.0e-3, 1.8e-2, 400.0, 520.0, 0.025),
    "valencia-like": (90.0, 70.0, 5.0e-4, 1.4e-2, 6.0e-3, 450.0, 300.0, 0.030),
    "armonk-like": (150.0, 220.0, 3.0e-4, 1.5e-2, 1.5e-2, 500.0, 500.0, 0.040),
    "athens-like": (80.0, 100.0, 3.0e-4, 6.0e-3, 1.3e-2, 350.0, 450.0, 0.015),
    "santiago-like": (110.0, 120.0, 2.5e-4, 1.1e-2, 4.0e-3, 420.0, 260.0, 0.020),
}


def device_lines(name, spec, seed):
    t1, t2, e1, ecx, ecz, dcx, dcz, ro = spec
    rng = np.random.default_rng(seed)
    jitter = lambda: float(rng.uniform(0.8, 1.25))
    lines = [f"# synthetic calibration, not measured hardware data", f"device {name}"]
    for q in range(4):
        qt1 = t1 * jitter()
        qt2 = min(t2 * jitter(), 2.0 * qt1)
        lines.append(
            f"qubit {q} t1 {qt1:.2f} t2 {qt2:.2f} "
            f"ro01 {ro * jitter():.4f} ro10 {1.5 * ro * jitter():.4f}"
        )
    err_1q = []
    for q in range(4):
        e = e1 * jitter()
        err_1q.append(e)
        for kind in ("h", "x", "rx", "ry"):
            lines.append(f"gate {kind} {q} error {e:.6f} duration 35.5")
        lines.append(f"gate rz {q} error 0 duration 0")
    for a, b in EDGES:
        e_cx = ecx * jitter()
        lines.append(f"gate cx {a} {b} error {e_cx:.6f} duration {dcx:.1f}")
        if ecz is None:
            e_cz, d_cz = e_cx + 2.0 * err_1q[b], dcx + 2.0 * 35.5
        else:
            e_cz, d_cz = ecz * jitter(), dcz
        lines.append(f"gate cz {a} {b} error {e_cz:.6f} duration {d_cz:.1f}")
    return lines


def zero_lines():
    lines = ["# noiseless calibration", "device zero"]
    for q in range(4):
        lines.append(f"qubit {q} t1 inf t2 inf ro01 0 ro10 0")
    for q in range(4):
        for kind in ("h", "x", "rx", "ry", "rz"):
            lines.append(f"gate {kind} {q} error 0 duration 0")
    for a, b in EDGES:
        lines.append(f"gate cx {a} {b} error 0 duration 0")
        lines.append(f"gate cz {a} {b} error 0 duration 0")
    return lines


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="data/calibrations")
    args = ap.parse_args()
    os.makedirs(args.out, exist_ok=True)
    for i, (name, spec) in enumerate(DEVICES.items()):
        with open(os.path.join(args.out, f"{name}.cal"), "w") as f:
            f.write("\n".join(device_lines(name, spec, 1000 + i)) + "\n")
    with open(os.path.join(args.out, "zero.cal"), "w") as f:
        f.write("\n".join(zero_lines()) + "\n")


if __name__ == "__main__":
    main()
