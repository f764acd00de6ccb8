"""Run every scenario file in scripts/scenarios through the CLI and summarize exit codes.

    python scripts/run_scenarios.py [--skip-3d]
"""
import argparse
import json
from pathlib import Path

from rcqm.cli import main as cli_main

HERE = Path(__file__).resolve().parent


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--skip-3d", action="store_true")
    args = ap.parse_args()
    codes = {}
    for path in sorted((HERE / "scenarios").glob("*.json")):
        if args.skip_3d and json.loads(path.read_text())["lattice"]["dim"] == 3:
            continue
        print(f"== {path.name}")
        codes[path.name] = cli_main(["run", "--config", str(path)])
    print("\n".join(f"{name:24s} exit {code}" for name, code in codes.items()))
    raise SystemExit(max(codes.values(), default=0))


if __name__ == "__main__":
    main()
