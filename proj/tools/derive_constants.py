#!/usr/bin/env python3
"""Re-derive the Harnack constant record in exact rational arithmetic.

Writes (or with --check, compares against) a JSON oracle that the C++ tests
read. Only the standard library is used so the derivation stays independent
of the C++ pipeline.
"""

import argparse
import json
import sys
from fractions import Fraction


def derive(c, cD, c0, cJ, p, alpha0):
    """Constants for g(r) = A r^-p with comparison constant c."""
    c, cD, c0, cJ, alpha0 = map(Fraction, (c, cD, c0, cJ, alpha0))
    eta = 1 / (2 * c**3 * cD**2)
    # Largest alpha = alpha0^m < 1/4 with g(r) <= c/cD * eta * g(alpha r),
    # i.e. alpha^p <= c eta / cD for a power law.
    m = 1
    while not (alpha0**m < Fraction(1, 4) and (alpha0**m) ** p <= c * eta / cD):
        m += 1
    alpha = alpha0**m
    beta = eta / (6 * c0)
    gamma = min(Fraction(1, 6), beta / cJ)
    kappa = 3 * beta * gamma
    j0 = 1
    while (1 + beta) ** j0 <= cD:
        j0 += 1
    m0 = 0
    while 2**m0 <= 2 * j0:
        m0 += 1
    m1 = 0
    while 2**m1 * alpha**2 <= 1:
        m1 += 1
    K = cD ** (m0 + m1) / kappa
    return {
        "eta": eta, "alpha": alpha, "alpha_exponent": m, "beta": beta, "gamma": gamma,
        "kappa": kappa, "j0": j0, "m0": m0, "m1": m1, "K": K,
    }


def encode(record):
    out = {}
    for key, v in record.items():
        if isinstance(v, Fraction):
            out[key] = {"exact": f"{v.numerator}/{v.denominator}", "hex": float(v).hex(),
                        "value": float(v)}
        else:
            out[key] = v
    return out


CASES = [
    # name, c, cD, c0, cJ, p (= d - alpha), alpha0
    ("reference", 1, 4, 3, 16, 2, Fraction(1, 2)),
    ("stable_d2_a1", 1, 2, 2, 1, 1, Fraction(1, 2)),
]


def build():
    doc = {"generator": "tools/derive_constants.py", "cases": {}}
    for name, c, cD, c0, cJ, p, alpha0 in CASES:
        k = derive(c, cD, c0, cJ, p, alpha0)
        entry = {"inputs": {"c": c, "cD": cD, "c0": c0, "cJ": cJ, "p": p,
                            "alpha0": str(alpha0)},
                 "constants": encode(k)}
        if p == 2 and cD == 4:
            # r_j = alpha^4 R 2^-m0 (1 + beta)^(-(j-1)/2); the full series.
            b = k["beta"]
            q = (1 + float(b)) ** -0.5
            entry["sum_rj_series_ratio"] = 2.0 ** -k["m0"] / (1 - q)
            entry["r1_ratio_hex"] = (2.0 ** -k["m0"]).hex()
        doc["cases"][name] = entry
    return doc


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("path", help="oracle JSON file")
    ap.add_argument("--check", action="store_true", help="fail if the file is stale")
    args = ap.parse_args()
    text = json.dumps(build(), indent=2, sort_keys=True) + "\n"
    if args.check:
        try:
            with open(args.path, encoding="utf-8") as f:
                current = f.read()
        except OSError as e:
            print(f"cannot read {args.path}: {e}", file=sys.stderr)
            return 1
        if current != text:
            print(f"{args.path} is stale; rerun tools/derive_constants.py", file=sys.stderr)
            return 1
        print(f"{args.path} is up to date")
        return 0
    with open(args.path, "w", encoding="utf-8") as f:
        f.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
