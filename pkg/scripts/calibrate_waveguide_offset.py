"""Fit the extraordinary mode-index offset of the effective LiNbO3 waveguide record.

The offset is the one free parameter of the waveguide model: a constant added
to the bulk extraordinary index so that the 1545 nm ordinary input and the
854 nm extraordinary pump of the fabricated 190 C device have equal group
velocities. Prints the value to paste into data/sellmeier.txt.
"""
import argparse
import dataclasses

from scipy.optimize import brentq

from qpgsim.dispersion import get_material, group_index


def mismatch(offset, lam_in, lam_pump, temperature):
    bulk_e = get_material("lithium-niobate-bulk", "e")
    coeffs = bulk_e.coefficients[:-1] + (offset,)
    wg_e = dataclasses.replace(bulk_e, coefficients=coeffs)
    bulk_o = get_material("lithium-niobate-bulk", "o")
    return group_index(bulk_o, lam_in, temperature) - group_index(wg_e, lam_pump, temperature)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--lambda-in", type=float, default=1545.0)
    ap.add_argument("--lambda-pump", type=float, default=854.0)
    ap.add_argument("--temperature", type=float, default=190.0)
    args = ap.parse_args()
    dn = brentq(mismatch, -0.05, 0.05, args=(args.lambda_in, args.lambda_pump, args.temperature), xtol=1e-14)
    print(f"extraordinary offset dn = {dn:.10f}")


if __name__ == "__main__":
    main()
