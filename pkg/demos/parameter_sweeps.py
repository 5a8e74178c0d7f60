"""Average LSFD spectral efficiency against speed, AP height and AP count.

Faster trains mean larger Doppler offsets and more ICI. Moving the APs away
from the track first helps, because the TAs become easier to separate
spatially, and then hurts through path loss. More APs add macro diversity.
"""

from hst_cellfree import SweepSpec, SystemConfig, run_sweep

base = SystemConfig(num_aps=10)

for variable, values in (("speed", [0, 100, 200, 300, 400, 500]),
                         ("vertical_distance", [10, 25, 50, 100, 200, 400])):
    res = run_sweep(SweepSpec(variable, values, ["cf_lsfd"], base))
    v, se = res.series("cf_lsfd")
    print(f"{variable:18s} " + "  ".join(f"{a:g}:{b:.2f}" for a, b in zip(v, se)))

res = run_sweep(SweepSpec("num_aps", [10, 20, 30], ["cf_mf", "cf_lsfd", "small_cell"],
                          SystemConfig()))
for system in ("cf_mf", "cf_lsfd", "small_cell"):
    v, se = res.series(system)
    print(f"num_aps {system:10s} " + "  ".join(f"{int(a)}:{b:.2f}" for a, b in zip(v, se)))
