"""
Display and formatting functions for tiertrace.
"""

from display.tables import (
    display_advice,
    display_cache_curves,
    display_concentration,
    display_config,
    display_stats,
    display_synth,
    display_temporal,
    display_tiering,
)

__all__ = [
    "display_advice",
    "display_cache_curves",
    "display_concentration",
    "display_config",
    "display_stats",
    "display_synth",
    "display_temporal",
    "display_tiering",
]
