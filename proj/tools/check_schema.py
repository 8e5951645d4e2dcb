#!/usr/bin/env python3
"""Run each nefcone subcommand and validate its JSON against docs/cli.schema.json."""
import json
import subprocess
import sys
from pathlib import Path

import jsonschema

CASES = [
    ("orbits", ["orbits"]),
    ("dual", ["dual", "--generator", "x1^2", "--generator", "e"]),
    ("dual", ["dual", "--cone", "pi1_3"]),
    ("project_check", ["project-check", "--cone", "pi2_3", "--axis", "1"]),
    ("dicing", ["dicing", "--cone", "pi2_4"]),
    ("walls", ["walls", "--which", "sigma0"]),
    ("walls_divisor", ["walls", "--which", "sigma1", "--divisor", "E"]),
    ("integrate", ["integrate", "--n", "9"]),
    ("certify", ["certify", "--a", "5", "--b", "1", "--level", "3", "--space", "igusa"]),
    ("certify", ["certify", "--a", "5", "--b", "1", "--c", "1", "--space", "voronoi"]),
    ("nef", ["nef", "--basis", "vor-d4", "--a", "24", "--b", "2", "--c", "1"]),
    ("audit", ["audit", "--identity", "S3"]),
    ("audit", ["audit", "--identity", "Smu", "--controls"]),
    ("report_all", ["report-all", "--n", "9"]),
]


def main():
    if len(sys.argv) != 3:
        print("usage: check_schema.py NEFCONE_BINARY SCHEMA", file=sys.stderr)
        return 2
    binary, schema_path = sys.argv[1], Path(sys.argv[2])
    schema = json.loads(schema_path.read_text())
    jsonschema.Draft202012Validator.check_schema(schema)
    failures = 0
    for name, args in CASES:
        proc = subprocess.run([binary, *args], capture_output=True, text=True)
        sub = dict(schema)
        sub.pop("anyOf")
        sub["$ref"] = f"#/$defs/{name}"
        try:
            jsonschema.validate(json.loads(proc.stdout), sub, cls=jsonschema.Draft202012Validator)
            status = "ok"
        except (json.JSONDecodeError, jsonschema.ValidationError) as e:
            failures += 1
            status = f"FAILED: {str(e).splitlines()[0]}"
        print(f"{' '.join(args)}: {status}")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
