#!/usr/bin/env python3
"""Build data/bcancer.csv from the Breast Cancer Wisconsin (Diagnostic) data.

Recipe of the unsupervised anomaly detection benchmark: keep all 357 benign
samples as normal data and only the first 10 malignant samples (in file
order) as anomalies, preserving the original row order. 367 rows, 30
features, label 1 = malignant.

The copy of the UCI WDBC file shipped with scikit-learn is used as source.
"""
import argparse
import csv

from sklearn.datasets import load_breast_cancer


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="data/bcancer.csv")
    parser.add_argument("--n-anomalies", type=int, default=10)
    args = parser.parse_args()

    wdbc = load_breast_cancer()
    names = [n.replace(" ", "_") for n in wdbc.feature_names]
    kept_malignant = 0
    with open(args.out, "w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(names + ["label"])
        for row, target in zip(wdbc.data, wdbc.target):
            malignant = target == 0  # scikit-learn encodes malignant as 0
            if malignant:
                if kept_malignant == args.n_anomalies:
                    continue
                kept_malignant += 1
            writer.writerow([repr(float(v)) for v in row] + [1 if malignant else 0])


if __name__ == "__main__":
    main()
