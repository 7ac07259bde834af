#!/usr/bin/env python3
"""
Build the package, check its metadata and smoke-test the installed `samble` command.
"""

import os
import shutil
import subprocess
import sys
import tempfile
from pathlib import Path


def run_command(cmd, description):
    """Run a command and handle errors."""
    print(f"\n{description}...")
    try:
        result = subprocess.run(cmd, shell=True, check=True, capture_output=True, text=True)
        print(f"{description} completed")
        if result.stdout:
            print(result.stdout)
        return True
    except subprocess.CalledProcessError as e:
        print(f"{description} failed")
        print(f"Error: {e.stderr}")
        return False


def clean_build_artifacts():
    """Clean up build artifacts."""
    print("\nCleaning build artifacts...")
    for artifact in ("build", "dist", "*.egg-info"):
        for path in Path(".").glob(artifact):
            if path.is_dir():
                shutil.rmtree(path)
            else:
                path.unlink()
            print(f"Removed: {path}")


def smoke_test():
    """Generate a shape and sample it through the console script."""
    with tempfile.TemporaryDirectory() as tmp:
        cloud = os.path.join(tmp, "grid.xyz")
        sample = os.path.join(tmp, "sample.txt")
        return run_command(f"samble -o {cloud} gen grid2d", "Generating a grid") and run_command(
            f"samble -k 8 -o {sample} sample {cloud} -m 16", "Sampling the grid"
        )


def main():
    """Main function to build and test package."""
    print("Building and testing samble-sampler")

    # Change to project root
    os.chdir(Path(__file__).parent.parent)

    clean_build_artifacts()

    if not run_command("python3 -m build", "Building package"):
        return 1
    if not run_command("twine check dist/*", "Checking package"):
        return 1
    if not run_command("pip3 install --force-reinstall dist/samble_sampler-*.whl", "Installing wheel"):
        return 1
    if not smoke_test():
        return 1

    print("\nBuilt packages:")
    for file in Path("dist").iterdir():
        print(f"  - {file.name}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
