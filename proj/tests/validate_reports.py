#!/usr/bin/env python3
"""Validate CLI reports against schemas/report.schema.json.

usage: validate_reports.py <cli> <source dir> <scratch dir>
"""
import copy
import json
import os
import subprocess
import sys

import jsonschema


def main():
    cli, src, out = sys.argv[1:4]
    os.makedirs(out, exist_ok=True)
    with open(os.path.join(src, "schemas", "report.schema.json")) as fh:
        schema = json.load(fh)
    jsonschema.Draft7Validator.check_schema(schema)
    validator = jsonschema.Draft7Validator(schema)

    runs = [
        ("parabola", ["analyze", "--function", "PARABOLA_TRAP", "--checks", "Thm1,Thm1-Dini"], 0),
        ("sqnorm_all", ["analyze", "--function", "SQNORM", "--checks", "all", "--directions", "fibonacci:16"], 0),
        ("half1d", ["analyze", "--function", "HALF1D", "--checks", "all",
                    "--kinds", "dini1,hadamard1,hadamard2,ginchev2,growth2"], 0),
        ("abs_sum_file", ["analyze", "--function", os.path.join(src, "data", "functions", "abs_sum.fn"),
                          "--checks", "Thm1,Subdiff0", "--directions", "axes"], 0),
        ("vecopt", ["vecopt", "--problem", os.path.join(src, "data", "vecopt", "quadratic_biobjective.json"),
                    "--directions", "fibonacci:16"], 0),
        ("vecopt_infeasible", ["vecopt", "--problem",
                               os.path.join(src, "data", "vecopt", "infeasible_candidate.json")], 3),
    ]
    failures = 0
    for name, args, want in runs:
        path = os.path.join(out, name + ".json")
        proc = subprocess.run([cli] + args + ["--report", path], capture_output=True, text=True)
        if proc.returncode != want:
            print(f"{name}: exit {proc.returncode}, expected {want}\n{proc.stderr}")
            failures += 1
            continue
        with open(path) as fh:
            text = fh.read()
        report = json.loads(text)
        errors = sorted(validator.iter_errors(report), key=lambda e: list(e.path))
        for e in errors[:5]:
            print(f"{name}: {'/'.join(map(str, e.path))}: {e.message}")
        failures += bool(errors)
        # Lossless: re-serialising the parsed document changes nothing.
        if json.loads(json.dumps(report)) != report:
            print(f"{name}: report does not survive a JSON round trip")
            failures += 1
        print(f"{name}: {'ok' if not errors else 'INVALID'} ({len(text)} bytes)")

    # The schema has teeth: corrupted reports are rejected.
    with open(os.path.join(out, "parabola.json")) as fh:
        good = json.load(fh)
    bad_outcome = copy.deepcopy(good)
    bad_outcome["verdicts"][0]["outcome"] = "MAYBE"
    missing = copy.deepcopy(good)
    del missing["schedule"]
    nan_value = copy.deepcopy(good)
    nan_value["estimates"][0]["estimate"]["value"] = "nan"
    for label, doc in [("bad outcome", bad_outcome), ("missing schedule", missing), ("nan value", nan_value)]:
        if validator.is_valid(doc):
            print(f"schema accepted a corrupted report ({label})")
            failures += 1

    print("FAILED" if failures else "all reports valid")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
