"""
Configuration management for tiertrace.
Handles the default output directory, trace schema and run options.
"""

import json
import os
from pathlib import Path
from typing import Optional

from rich.console import Console
from rich.prompt import Prompt, Confirm, IntPrompt

from errors import SchemaError
from sources.schema import TraceSchema

console = Console()

CONFIG_DIR = Path(os.environ.get("TIERTRACE_HOME", Path.home() / ".tiertrace"))
CONFIG_FILE = CONFIG_DIR / "config.json"
OUTPUT_ENV = "TIERTRACE_OUTPUT_DIR"
DEFAULT_OUTPUT_DIR = Path("tiertrace-out")

CONFIG_KEYS = ("output_dir", "schema", "jobs", "strict")


def ensure_config_dir():
    """Ensure the config directory exists."""
    CONFIG_DIR.mkdir(parents=True, exist_ok=True)
    os.chmod(CONFIG_DIR, 0o700)


def load_config() -> dict:
    """Load configuration from file."""
    if not CONFIG_FILE.exists():
        return {}

    with open(CONFIG_FILE, "r") as f:
        return json.load(f)


def save_config(config: dict):
    """Save configuration to file."""
    ensure_config_dir()
    with open(CONFIG_FILE, "w") as f:
        json.dump({k: v for k, v in config.items() if k in CONFIG_KEYS}, f, indent=2)
    os.chmod(CONFIG_FILE, 0o600)


def is_configured() -> bool:
    """Check if the tool has a saved configuration."""
    return CONFIG_FILE.exists() and bool(load_config())


def resolve_output_dir(flag: Optional[str], config: Optional[dict] = None) -> Path:
    """--output flag, then $TIERTRACE_OUTPUT_DIR, then config.json, then ./tiertrace-out."""
    if flag:
        return Path(flag)
    if os.environ.get(OUTPUT_ENV):
        return Path(os.environ[OUTPUT_ENV])
    config = load_config() if config is None else config
    if config.get("output_dir"):
        return Path(config["output_dir"]).expanduser()
    return DEFAULT_OUTPUT_DIR


def resolve_schema_path(flag: Optional[str], config: Optional[dict] = None) -> Optional[Path]:
    """--schema flag, then config.json; None means the default schema."""
    if flag:
        return Path(flag)
    config = load_config() if config is None else config
    if config.get("schema"):
        return Path(config["schema"]).expanduser()
    return None


def _ask_schema(default: str) -> str:
    """Prompt until the answer is empty or a schema file that parses."""
    while True:
        schema = Prompt.ask("   Schema file", default=default)
        if not schema:
            return ""
        try:
            parsed = TraceSchema.load(Path(schema).expanduser())
        except SchemaError as e:
            console.print(f"   [red]{e}[/red]")
            default = ""
            continue
        console.print(f"   [dim]Columns: {parsed.columns}[/dim]")
        return schema


def setup_config():
    """Interactive setup wizard."""
    console.print()
    console.print("[bold cyan]tiertrace Setup Wizard[/bold cyan]")
    console.print("=" * 40)
    console.print()

    config = load_config()
    if is_configured():
        console.print(f"[dim]Editing {CONFIG_FILE}; press Enter to keep a value.[/dim]")
        console.print()

    console.print("[bold]1. Output directory[/bold]")
    console.print(f"   Each command writes into <output_dir>/<command>/. ${OUTPUT_ENV} overrides this.")
    console.print()
    output_dir = Prompt.ask("   Output directory", default=config.get("output_dir", str(DEFAULT_OUTPUT_DIR)))
    if output_dir:
        config["output_dir"] = output_dir

    console.print()

    console.print("[bold]2. Trace schema[/bold]")
    console.print("   A key=value file mapping trace columns (see schemas/ for examples).")
    console.print("   Leave empty for the built-in comma-separated default.")
    console.print()
    schema = _ask_schema(config.get("schema", ""))
    if schema:
        config["schema"] = schema
    else:
        config.pop("schema", None)

    console.print()

    console.print("[bold]3. Run options[/bold]")
    jobs = IntPrompt.ask("   Worker processes for per-workload analyses", default=config.get("jobs", 1))
    while jobs < 1:
        console.print("   [red]Need at least one worker[/red]")
        jobs = IntPrompt.ask("   Worker processes for per-workload analyses", default=1)
    config["jobs"] = jobs
    config["strict"] = Confirm.ask("   Stop at the first malformed trace line?", default=config.get("strict", False))

    console.print()

    save_config(config)
    console.print(f"[green]✓ Configuration saved to {CONFIG_FILE}[/green]")
    console.print()
