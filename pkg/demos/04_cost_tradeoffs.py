#!/usr/bin/env python3
# Explore the cost model: bespoke-MUX vs crossbar-ROM storage, the sequential
# design against a fully parallel baseline, and the power-density calibration
# behind the default technology coefficients.

import numpy as np

from seqsvm.archsim import ArchConfig
from seqsvm.cost import TechConfig, calibrate_power, compare_parallel, compare_storage, estimate, format_report_table
from seqsvm.ddag import build_ddag
from seqsvm.fxp import U4_4
from seqsvm.quant import QuantizedModel, QuantVector, profile_accumulator

# benchmark-sized models with random 8-bit parameters; only the shape matters
SHAPES = {"cardio": (3, 21), "dermatology": (6, 33), "pendigits": (10, 17),
          "redwine": (6, 11), "whitewine": (7, 11)}


def shaped(n, m, bits=8, seed=0):
    rng = np.random.default_rng([seed, n, m])
    top = (1 << (bits - 1)) - 1
    vecs = [QuantVector(a, b, [int(v) for v in rng.integers(-top, top + 1, m)],
                        int(rng.integers(-top, top + 1)))
            for a in range(n) for b in range(a + 1, n)]
    qm = QuantizedModel(n, m, U4_4, bits, vecs, [1.0] * len(vecs))
    profile_accumulator(qm, rng.integers(0, 16, (200, m)))
    return qm


tech = TechConfig()
print(f"technology: {tech.nand_equiv_area} cm^2/GE, DFF = {tech.dff_nand_equiv} GE, "
      f"{tech.power_per_area} mW/cm^2, {tech.f_clk} Hz\n")

for name, (n, m) in SHAPES.items():
    qm = shaped(n, m)
    dag = build_ddag(n)
    both = compare_storage(qm, dag, tech)
    par = compare_parallel(qm, tech)
    print(f"--- {name} (n={n}, m={m}, acc={qm.acc_width} bits) ---")
    print(format_report_table([("seq-mux", both["mux"]), ("seq-rom", both["rom"]),
                               ("parallel", par)]), end="")
    print(f"parallel/sequential area: {par.area_cm2 / both['mux'].area_cm2:.1f}x, "
          f"rom saves {(1 - both['rom'].area_cm2 / both['mux'].area_cm2):.0%} of area\n")

# ROM pays a fixed ADC floor: tiny models prefer the bespoke MUX
tiny = shaped(2, 1, bits=4)
both = compare_storage(tiny, build_ddag(2), tech)
print(f"n=2, m=1: mux {both['mux'].area_cm2:.3f} cm^2 vs rom {both['rom'].area_cm2:.3f} cm^2 "
      "(ADC floor dominates)\n")

# power density: least-squares slope through the origin over five published
# (area, power) measurements of printed sequential SVM designs
points = [(3.1, 3.6), (4.9, 5.3), (7.8, 8.7), (3.1, 3.5), (3.4, 3.9)]
slope = calibrate_power(points)
print(f"calibrated power density {slope:.3f} mW/cm^2 (shipped default {tech.power_per_area})")
for area, power in points:
    print(f"  area {area:4.1f} -> predicted {tech.power_per_area * area:4.2f} mW "
          f"(published {power} mW)")
