from lna_fim.resources import ModelResource
from dataclasses import dataclass, field, asdict
from typing import Dict, List, Optional
import json
import os


@dataclass
class RunManifest(object):
    """Provenance written next to every output file of the command line
    tool: what was run, on which inputs and with which settings

    Public Attributes:

    tool_version: str
        the version of lna_fim that produced the outputs
    command: str
        the subcommand that was run
    inputs: Dict[str, str]
        the sha256 digest of every input file by its path
    parameters: Dict[str, float]
        the natural-scale parameter point
    scale: str
        the reporting scale of information and bounds
    solver: dict
        the solver configuration of every ODE solve
    regime: str
        the data regime of the design, when there is a single one
    seed: int
        the root seed of Monte Carlo computations, when any were run
    wall_clock_seconds: float
        the elapsed time of the run
    warnings: List[str]
        every warning raised during the run, in order of first occurrence

    """

    tool_version: str
    command: str
    inputs: Dict[str, str] = field(default_factory=dict)
    parameters: Dict[str, float] = field(default_factory=dict)
    scale: str = "log"
    solver: dict = field(default_factory=dict)
    regime: Optional[str] = None
    seed: Optional[int] = None
    wall_clock_seconds: float = 0.0
    warnings: List[str] = field(default_factory=list)

    def add_input(self, path):
        """Record the digest of an input file given by path or bundled
        name, ignoring names that do not resolve to a file

        """

        if not isinstance(path, str):
            return
        resource = ModelResource.locate(path)
        if resource.is_available:
            self.inputs[resource.path] = resource.digest

    def add_warning(self, message):
        if message not in self.warnings:
            self.warnings.append(message)

    def to_dict(self):
        return asdict(self)

    def write(self, output_path):
        """Write the manifest as <stem>.manifest.json next to an output"""

        stem = os.path.splitext(output_path)[0]
        path = f"{stem}.manifest.json"
        with open(path, "w") as f:
            json.dump(self.to_dict(), f, indent=2)
        return path
