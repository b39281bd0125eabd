"""Group-velocity-matched points for the converter materials.

Prints every zero-GVM root along the energy-conservation curve, the selected
point and the temperature trend of the pump wavelength.
"""
import argparse

import numpy as np

from qpgsim import presets
from qpgsim.processfinder import find_gvm_point, find_gvm_points, pump_trend, sweep_temperature

CASES = (
    ("LiNbO3 effective waveguide", lambda: presets.ln_materials(), 190.0, 550.0),
    ("LiNbO3 effective waveguide", lambda: presets.ln_materials(), 300.0, 574.0),
    ("LiNbO3 bulk", lambda: presets.ln_materials("lithium-niobate-bulk"), 190.0, 550.0),
    ("LiNbO3 bulk", lambda: presets.ln_materials("lithium-niobate-bulk"), 300.0, 574.0),
    ("LiTaO3 bulk, o input", lambda: presets.lt_materials(), 190.0, 738.0),
    ("LiTaO3 bulk, e input", lambda: presets.lt_materials(swap=True), 190.0, 738.0),
)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sweep", type=int, default=12, help="temperature samples between 190 and 300 C")
    args = ap.parse_args()
    for label, mats, T, out in CASES:
        m = mats()
        roots, _ = find_gvm_points(m, T, out)
        p = find_gvm_point(m, T, out)
        print(f"{label:28s} {T:5.0f} C -> {out:5.0f} nm: roots {np.round(roots, 1).tolist()} "
              f"selected ({p.lambda_in:.1f}, {p.lambda_pump:.1f}) nm")
    temps = np.linspace(190.0, 300.0, args.sweep)
    samples = sweep_temperature(presets.ln_materials(), temps, lambda T: 550.0 + (T - 190.0) * 24.0 / 110.0)
    for s in samples:
        print(f"  T {s.temperature:6.1f} C  out {s.lambda_out:6.1f}  in {s.point.lambda_in:7.1f}  "
              f"pump {s.point.lambda_pump:6.1f}")
    print("pump trend:", pump_trend(samples))


if __name__ == "__main__":
    main()
