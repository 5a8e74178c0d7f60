"""How much of a subcarrier's power leaks to its neighbours under Doppler.

At 300 km/h and 2 GHz the largest normalized Doppler offset is about 0.28
subcarrier spacings. The script prints the ICI power profile around the target
subcarrier for a few offsets and checks that each profile sums to one.
"""

import numpy as np

from hst_cellfree import SystemConfig, max_normalized_dfo
from hst_cellfree.ici import ici_row

cfg = SystemConfig()
w = max_normalized_dfo(cfg)
M, s = cfg.num_subcarriers, 32
print(f"max normalized DFO at {cfg.train_speed_mps * 3.6:.0f} km/h: w = {w:.4f}")

for eps in (0.0, 0.1, w, 0.5):
    row = ici_row(eps, s, M)
    p = np.abs(row.coeffs) ** 2
    window = p[s - 4:s + 3]
    print(f"eps={eps:.3f}  own {p[s - 1]:.4f}  leaked {1 - p[s - 1]:.4f}  "
          f"m=s-3..s+3: " + " ".join(f"{v:.3f}" for v in window)
          + f"  total {row.power_sum():.12f}")
