"""Runs the command-line tool on the fixtures and validates every output against its schema."""

import json
import subprocess
import sys
from pathlib import Path

import jsonschema

cli, schemas, fixtures = sys.argv[1], Path(sys.argv[2]), Path(sys.argv[3])
walk = str(fixtures / "walk2d.csv")
line = str(fixtures / "line1d.csv")
area = str(fixtures / "form_area.json")
square = str(fixtures / "function_square.json")

# (arguments, expected exit code, schema name checked against stdout or stderr)
cases = [
    (["signature", walk], 0, "signature"),
    (["signature", walk, "--system", "butcher", "--depth", "3", "--full"], 0, "signature"),
    (["pvar", walk, "--p", "2.5"], 0, "pvar"),
    (["extend", walk, "--p", "2.5", "--to-level", "4", "--full"], 0, "extend"),
    (["extend", walk, "--p", "2.5", "--to-level", "3", "--system", "butcher", "--schedule", "dyadic"], 0, "extend"),
    (["integrate", walk, "--p", "2.5", "--form", area, "--full"], 0, "integrate"),
    (["integrate", walk, "--p", "1.5", "--form", area, "--system", "butcher"], 0, "integrate"),
    (["iterate", walk, "--p", "2.5", "--full"], 0, "iterate"),
    (["iterate", walk, "--p", "2.5", "--form", area], 0, "iterate"),
    (["product", walk, "--p", "2.5"], 0, "product"),
    (["compose", walk, "--p", "2.5", "--function", square, "--depth", "3"], 0, "compose"),
    (["enhance", walk, "--p", "2.5", "--full"], 0, "enhance"),
    (["certify", walk, "--p", "2.5", "--form", area], 0, "certify"),
    (["certify", walk, "--p", "2.5", "--form", str(fixtures / "form_rough.json")], 3, "certify"),
    (["signature", str(fixtures / "bad_times.csv")], 2, "error"),
    (["iterate", walk, "--p", "3.5", "--system", "butcher"], 2, "error"),
    (["pvar", line], 2, "error"),
    (["signature", "/nonexistent.csv"], 2, "error"),
]

failures = 0
for args, code, name in cases:
    schema = json.loads((schemas / f"{name}.schema.json").read_text())
    run = subprocess.run([cli, *args], capture_output=True, text=True)
    text = run.stdout if code == 0 else run.stderr
    label = " ".join(args[:1] + [a for a in args[1:] if a.startswith("--")])
    try:
        if run.returncode != code:
            raise AssertionError(f"exit {run.returncode}, expected {code}: {run.stderr.strip()}")
        jsonschema.validate(json.loads(text), schema)
        print(f"ok   {label} -> {name}")
    except (AssertionError, json.JSONDecodeError, jsonschema.ValidationError) as e:
        failures += 1
        print(f"FAIL {label} -> {name}: {str(e).splitlines()[0]}")

for path in sorted(schemas.glob("*.schema.json")):
    jsonschema.Draft202012Validator.check_schema(json.loads(path.read_text()))

sys.exit(1 if failures else 0)
