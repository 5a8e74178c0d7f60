"""Uplink spectral efficiency of high-speed-train OFDM links under Doppler ICI.

Closed-form SE for cell-free (MF and LSFD combining), small-cell and colocated
cellular massive MIMO, a brute-force oracle, and experiment sweeps.
"""

from .config import ConfigError, SystemConfig, load_config, max_normalized_dfo, parse_config
from .experiments import (SYSTEMS, SweepSpec, drop_percentage, position_profile, run_sweep,
                          se_at_position, table1)

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "SystemConfig",
    "load_config",
    "parse_config",
    "max_normalized_dfo",
    "SYSTEMS",
    "SweepSpec",
    "run_sweep",
    "se_at_position",
    "position_profile",
    "drop_percentage",
    "table1",
]
