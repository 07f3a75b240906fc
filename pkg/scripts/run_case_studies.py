"""Classify the four bundled case-study fixtures and print the tables.

Usage: python3 scripts/run_case_studies.py
"""

from milpkit.fixtures import ALL_FIXTURES
from milpkit.reporting import classification_payload, classification_table

for name, build in ALL_FIXTURES.items():
    payload = classification_payload(build())
    print(f"=== {name} ===")
    print(classification_table(payload))
