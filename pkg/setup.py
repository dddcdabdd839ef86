#!/usr/bin/env python3
"""
GeoLIP - Setup Script
Installs dependencies, writes the network corpus and checks the 2-2-1 example end to end
"""

import argparse
import subprocess
import sys

from config import DATA_DIR, DATA_PATHS, REPORT_DIR


def install_dependencies():
    subprocess.run([sys.executable, "-m", "pip", "install", "-r", "requirements.txt"], check=True)


def generate_corpus():
    from data_generator import write_corpus

    for directory in (DATA_DIR, REPORT_DIR):
        directory.mkdir(parents=True, exist_ok=True)
    manifest, n_matrices = write_corpus()
    print(f"Wrote {len(manifest)} networks and {n_matrices} sign matrices to {DATA_DIR}")


def verify_example() -> bool:
    """Run the full verification suite on the 2-2-1 example and keep its report"""
    from engine import EstimationRunner
    from network.io import read_network

    result = EstimationRunner().verify(read_network(DATA_PATHS["example"]))
    report_path = REPORT_DIR / "example_221.json"
    report_path.write_text(result.model_dump_json(indent=2))
    print(f"{result.summary}: report written to {report_path}")
    return result.passed


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description="Bootstrap the GeoLIP corpus")
    parser.add_argument("--skip-install", action="store_true", help="assume requirements.txt is installed")
    args = parser.parse_args(argv)

    if sys.version_info < (3, 9):
        print("Python 3.9 or higher is required")
        return 1
    if not args.skip_install:
        install_dependencies()
    generate_corpus()
    if not verify_example():
        return 1

    print("Next: python -m cli estimate --net", DATA_PATHS["example"], "--norm linf --method ngeolip")
    return 0


if __name__ == "__main__":
    sys.exit(main())
