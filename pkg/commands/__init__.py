"""
Command handlers for tiertrace.
"""

from commands.stats import cmd_stats
from commands.temporal import cmd_temporal
from commands.cachesim import cmd_cachesim
from commands.concentration import cmd_concentration
from commands.tiersim import cmd_tiersim
from commands.synth import cmd_synth
from commands.advise import cmd_advise
from commands.setup import cmd_setup

__all__ = [
    "cmd_stats",
    "cmd_temporal",
    "cmd_cachesim",
    "cmd_concentration",
    "cmd_tiersim",
    "cmd_synth",
    "cmd_advise",
    "cmd_setup",
]
