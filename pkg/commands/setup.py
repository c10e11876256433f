"""
Setup command: show or change the saved output directory, trace schema and run options.
"""

from rich.console import Console

import config
from display import display_config
from sources.schema import TraceSchema

console = Console()


def _flag_updates(args) -> dict:
    return {key: getattr(args, key) for key in config.CONFIG_KEYS if getattr(args, key, None) is not None}


def cmd_setup(args):
    """Print the configuration, save values given as flags, or run the wizard."""
    if args.show:
        display_config(config.load_config(), config.CONFIG_FILE, config.is_configured())
        return

    updates = _flag_updates(args)
    if not updates:
        config.setup_config()
        return

    if "schema" in updates:
        TraceSchema.load(updates["schema"])

    saved = config.load_config()
    saved.update(updates)
    config.save_config(saved)
    console.print(f"[green]✓ Saved {', '.join(sorted(updates))} to {config.CONFIG_FILE}[/green]")
