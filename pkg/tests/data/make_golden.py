"""Regenerate golden_de_q2.csv from the SLD oracle (not from the package)."""

import csv
import math
import os
import sys

import numpy as np

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
import oracles  # noqa: E402


def main(path):
    theta, phi = math.pi / 2, 0.0
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["kind", "D", "mu", "theta", "phi", "qubits", "f_theta", "f_phi", "method", "residual"])
        for D in np.linspace(0, 1, 11):
            for mu in np.linspace(0, 1, 11):
                ft, fp = oracles.teleported_qfi("de", float(D), float(mu), (1, 1, -1), theta, phi, qubits=2)
                row = [D, mu, theta, phi]
                w.writerow(["de", *(format(float(x), ".16e") for x in row), "2",
                            format(ft, ".16e"), format(fp, ".16e"), "spectral", ""])


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else os.path.join(os.path.dirname(__file__), "golden_de_q2.csv"))
