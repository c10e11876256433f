"""
Synth command: write a deterministic synthetic trace from a JSON spec.
"""

from rich.console import Console

from commands.common import finish_outputs, load_schema, start_outputs
from config import load_config
from display import display_synth
from sources import SynthSpec, generate
from sources.trace import records_to_text

console = Console()


def cmd_synth(args):
    """Generate the trace described by the spec file (CLI flags override its seed)."""
    config = load_config()
    spec = SynthSpec.load(args.spec)
    if args.seed is not None:
        spec = SynthSpec.from_dict({**spec.to_dict(), "seed": args.seed})
    schema = load_schema(args, config)

    with console.status("[bold green]Generating requests..."):
        workload = generate(spec)
        text = records_to_text(workload.records, schema)

    outputs = start_outputs(args, "synth", config, schema, [args.spec])
    name = args.name or f"{spec.volume_id}.trace"
    path = outputs.text(name, text)
    outputs.json("spec.json", spec.to_dict())
    finish_outputs(outputs)

    display_synth(spec, len(workload), path)
