"""Largest and smallest SE over the moving range, with the drop percentage.

Equispaced APs give one table. Passing a layout count averages the position
profiles over that many random AP placements first.
"""

import sys

from hst_cellfree import SystemConfig, table1

layouts = int(sys.argv[1]) if len(sys.argv) > 1 else 1
rows = table1(SystemConfig(seed=0), num_layouts=layouts)

print(f"{'scheme':12s} {'L':>3s} {'d_ve':>5s} {'largest':>8s} {'smallest':>9s} {'drop':>7s}")
for r in rows:
    print(f"{r.system:12s} {r.num_aps:3d} {r.vertical_distance_m:5.0f} "
          f"{r.largest_se:8.3f} {r.smallest_se:9.3f} {100 * r.drop:6.1f}%")
