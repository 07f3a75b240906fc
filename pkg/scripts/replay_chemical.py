"""Replay the bundled chemical-scheduling answer script and show the result.

Usage: python3 scripts/replay_chemical.py
Prints the emitted LP text followed by its classification table.
"""

import json
from importlib import resources

from milpkit.lpformat import write_lp
from milpkit.omt import load_tree, replay
from milpkit.reporting import classification_payload, classification_table

script = json.loads(
    resources.files("milpkit.data").joinpath("chemical_session.json").read_text()
)["transcript"]
model = replay(load_tree(), script, "chemical")
print(write_lp(model))
print(classification_table(classification_payload(model)))
