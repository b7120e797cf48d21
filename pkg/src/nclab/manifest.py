"""Run manifests: the audit record attached to every emitted data file.

A manifest captures what a command did (resolved arguments, physical
parameters, gauge, derived constants), what it measured (named constants
and pass/fail checks with values), and what it wrote (file names with
content hashes).  Two runs with the same inputs produce identical
manifests up to the timestamp field, which comparison tooling drops.
"""
from __future__ import annotations

import dataclasses
import datetime
import hashlib
import json
import os
from dataclasses import dataclass, field

from .algebra import DerivedConstants, GaugeChoice, PhysicalParams

__all__ = ["TOOL_VERSION", "RunManifest", "file_sha256"]

TOOL_VERSION = "0.1.0"


def file_sha256(path) -> str:
    """Hex SHA-256 of a file's content, streamed in 64 KiB chunks."""
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            digest.update(chunk)
    return digest.hexdigest()


@dataclass
class RunManifest:
    """Mutable record built up while a command runs, then serialised once.

    ``arguments`` holds the fully resolved settings (defaults, config file
    and flags already merged) so the manifest alone reproduces the run.
    Output paths are recorded by basename: manifests must not depend on
    where the output directory happened to live.
    """

    command: str
    arguments: dict
    params: PhysicalParams | None = None
    gauge: GaugeChoice | None = None
    derived: DerivedConstants | None = None
    tool_version: str = TOOL_VERSION
    measured_constants: dict = field(default_factory=dict)
    checks: list = field(default_factory=list)
    outputs: list = field(default_factory=list)

    def add_check(self, name: str, passed: bool, value: float) -> bool:
        """Record one named check; returns ``passed`` for chaining."""
        self.checks.append(
            {"name": name, "passed": bool(passed), "value": float(value)}
        )
        return passed

    def add_measured(self, name: str, value: float) -> None:
        self.measured_constants[name] = float(value)

    def add_output(self, path) -> None:
        """Hash an already-written data file into the outputs list."""
        self.outputs.append(
            {"path": os.path.basename(str(path)), "sha256": file_sha256(path)}
        )

    def all_passed(self) -> bool:
        return all(c["passed"] for c in self.checks)

    def to_dict(self) -> dict:
        def maybe(obj):
            return None if obj is None else dataclasses.asdict(obj)

        return {
            "command": self.command,
            "arguments": self.arguments,
            "tool_version": self.tool_version,
            "params": maybe(self.params),
            "gauge": maybe(self.gauge),
            "derived_constants": maybe(self.derived),
            "measured_constants": self.measured_constants,
            "checks": self.checks,
            "outputs": self.outputs,
            "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(),
        }

    def write(self, path) -> None:
        with open(path, "w") as fh:
            fh.write(json.dumps(self.to_dict(), indent=2, sort_keys=True))
            fh.write("\n")
