"""Write the bundled Sobol' direction-number table from scipy's copy.

Run once at development time; the output ships in ``src/hodnet/data``.
scipy stores, per dimension, the primitive polynomial as an integer and
the initial direction numbers m_1..m_s.  Dimension 1 (the van der Corput
sequence) is implicit in the text format and therefore skipped.
"""
import os
import sys

import numpy as np
import scipy

MAX_DIM = 1111


def main(out_path):
    src = os.path.join(os.path.dirname(scipy.__file__), "stats", "_sobol_direction_numbers.npz")
    z = np.load(src)
    poly, vinit = z["poly"], z["vinit"]
    with open(out_path, "w") as fh:
        fh.write("d       s       a       m_i\n")
        for i in range(1, MAX_DIM):
            pv = int(poly[i])
            s = pv.bit_length() - 1
            a = (pv >> 1) & ((1 << (s - 1)) - 1)
            ms = " ".join(str(int(v)) for v in vinit[i, :s])
            fh.write(f"{i + 1}       {s}       {a}       {ms}\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "src/hodnet/data/joe_kuo_d1111.txt")
