#!/usr/bin/env python3
"""Regenerates data/copper_enthalpy.csv and data/winding_heat_capacity.csv.

Both tables come from the NIST cryogenic material property fits
(https://trc.nist.gov/cryogenics/materials/materialproperties.htm):

  log10(cp) = sum_i a_i * log10(T)^i      cp in J/(kg K), valid 4-300 K

OFHC copper supplies the copper enthalpy. The winding heat capacity is a
volume-weighted mix of copper and a Hastelloy substrate; NIST publishes no
Hastelloy fit, so the 304 stainless fit stands in for it with Hastelloy
density.
"""

import math
import pathlib

COPPER = [-1.91844, -0.15973, 8.61013, -18.996, 21.9661, -12.7328, 3.54322, -0.3797]
SS304 = [22.0061, -127.5528, 303.647, -381.0098, 274.0328, -112.9212, 24.7593, -2.239153]

RHO_CU = 8960.0
RHO_SUBSTRATE = 8890.0
# Copper stabiliser and substrate share of the tape cross-section.
FRACTION_CU = 0.42
FRACTION_SUBSTRATE = 0.58


def cp(coeffs, t):
    x = math.log10(t)
    return 10.0 ** sum(a * x**i for i, a in enumerate(coeffs))


def grid():
    temps = [4.0 + 0.5 * i for i in range(73)]  # 4 .. 40 K
    temps += [42.0 + 2.0 * i for i in range(29)]  # 42 .. 98 K
    temps += [100.0 + 5.0 * i for i in range(41)]  # 100 .. 300 K
    return temps


def enthalpy(temps, coeffs, sub=200):
    # Composite Simpson per interval, zero at the first node.
    h, out = 0.0, [0.0]
    for a, b in zip(temps, temps[1:]):
        n = sub
        step = (b - a) / n
        s = cp(coeffs, a) + cp(coeffs, b)
        for k in range(1, n):
            s += (4 if k % 2 else 2) * cp(coeffs, a + k * step)
        h += s * step / 3.0
        out.append(h)
    return out


def main():
    root = pathlib.Path(__file__).resolve().parent.parent / "data"
    temps = grid()

    h = enthalpy(temps, COPPER)
    with open(root / "copper_enthalpy.csv", "w", newline="\n") as f:
        f.write("# OFHC copper specific enthalpy relative to 4 K\n")
        f.write("# source: NIST cryogenic material properties, OFHC copper cp fit (4-300 K), integrated\n")
        f.write("# generator: scripts/gen_property_tables.py\n")
        f.write("# version: 1\n")
        f.write("T_K,h_J_per_kg\n")
        for t, v in zip(temps, h):
            f.write(f"{t:g},{v:.6g}\n")

    with open(root / "winding_heat_capacity.csv", "w", newline="\n") as f:
        f.write("# REBCO winding volumetric heat capacity\n")
        f.write(f"# mix: {FRACTION_CU} copper (rho {RHO_CU:g}) + {FRACTION_SUBSTRATE} substrate"
                f" (rho {RHO_SUBSTRATE:g}, 304 stainless cp as proxy)\n")
        f.write("# source: NIST cryogenic material properties, OFHC copper and 304 stainless cp fits\n")
        f.write("# generator: scripts/gen_property_tables.py\n")
        f.write("# version: 1\n")
        f.write("T_K,C_J_per_m3K\n")
        for t in temps:
            c = FRACTION_CU * RHO_CU * cp(COPPER, t) + FRACTION_SUBSTRATE * RHO_SUBSTRATE * cp(SS304, t)
            f.write(f"{t:g},{c:.6g}\n")

    h20 = h[temps.index(20.0)]
    print(f"copper h(300) - h(20) = {h[-1] - h20:.1f} J/kg")


if __name__ == "__main__":
    main()
