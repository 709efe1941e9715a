"""Python front end for the pcurv scenario runner."""

import json

from ._pcurv import PcurvError, SCHEMA, __version__, command_catalog, symbol_tables
from ._pcurv import run_scenario as _run_scenario

__all__ = ["PcurvError", "SCHEMA", "__version__", "command_catalog", "symbol_tables", "run"]


def run(scenario, precision=None, seed=None, commands=None):
    """Run a scenario (dict or JSON text). Returns (report dict, ok)."""
    text = scenario if isinstance(scenario, str) else json.dumps(scenario)
    report, ok = _run_scenario(text, precision, seed, commands)
    return json.loads(report), ok
