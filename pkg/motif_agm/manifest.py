import json
import sys
from dataclasses import asdict, dataclass, field
from typing import Dict, List

from motif_agm import __version__
from motif_agm.utils import atomic_write, file_sha256


def _plain(value):
    # numpy scalars and arrays
    if hasattr(value, "tolist"):
        return value.tolist()
    raise TypeError("%r is not JSON serializable" % (value,))


@dataclass
class RunManifest:
    """Everything needed to replay a command: its argv, the resolved
    configuration and where each value came from, input digests, output
    paths, timing and the headline metrics.
    """
    command: str
    argv: List[str] = field(default_factory=lambda: list(sys.argv[1:]))
    config: Dict[str, object] = field(default_factory=dict)
    config_sources: Dict[str, str] = field(default_factory=dict)
    seed: int = 0
    inputs: Dict[str, str] = field(default_factory=dict)
    outputs: List[str] = field(default_factory=list)
    wall_clock: float = 0.0
    metrics: Dict[str, object] = field(default_factory=dict)
    history: Dict[str, object] = field(default_factory=dict)
    version: str = __version__

    def add_input(self, path):
        self.inputs[path] = file_sha256(path)

    def add_output(self, path):
        self.outputs.append(path)

    def json(self):
        return json.dumps(asdict(self), sort_keys=True, indent=4,
                          default=_plain)

    def write(self, path):
        atomic_write(path, self.json() + "\n")


def write_run_metadata(path, state):
    """Plain-text checkpoint metadata: final iteration and the
    validation objective after each iteration (0 = initialisation).
    """
    lines = ["iteration=%d" % state.iteration,
             "converged=%s" % str(state.converged).lower()]
    for i, value in enumerate(state.history):
        lines.append("objective.%d=%.10g" % (i, value))
    atomic_write(path, "\n".join(lines) + "\n")
