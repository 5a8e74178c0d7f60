"""SE along the train's moving range for the four receiver architectures.

Cell-free APs line the track, so their SE barely moves as the train passes.
The single colocated base station sits at the track's centre and loses most of
its SE when the train is far away.
"""

from hst_cellfree import SYSTEMS, SystemConfig, drop_percentage, position_profile

cfg = SystemConfig()
print(f"L={cfg.num_aps} APs x N={cfg.antennas_per_ap}, K={cfg.num_tas} TAs, "
      f"M={cfg.num_subcarriers}, d_ve={cfg.vertical_distance_m:.0f} m")

profiles = {system: position_profile(cfg, system) for system in SYSTEMS}
x = profiles["cf_mf"][0]
print("position_m " + " ".join(f"{s:>10s}" for s in SYSTEMS))
for j in range(0, len(x), 6):
    print(f"{x[j]:10.0f} " + " ".join(f"{profiles[s][1][j]:10.3f}" for s in SYSTEMS))

for system, (_, se) in profiles.items():
    print(f"{system:10s} mean {se.mean():.3f}  drop {100 * drop_percentage(se):5.1f}%")
