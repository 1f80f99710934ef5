"""Shared fixtures: real input files from the primary CLI, acceptance log."""

import subprocess
import sys

import pytest

acceptance_lines: list[str] = []


@pytest.fixture
def acceptance():
    def report(tag: str, ok: bool, detail: str = "") -> None:
        line = f"{tag} {'PASS' if ok else 'FAIL'} {detail}".rstrip()
        acceptance_lines.append(line)
        print(line)
        assert ok, line

    return report


def pytest_terminal_summary(terminalreporter):
    if not acceptance_lines:
        return
    terminalreporter.section("acceptance report")
    for line in acceptance_lines:
        terminalreporter.write_line(line)


def primary_cli(args, cwd):
    return subprocess.run([sys.executable, "-m", "mertens_spectra", *args],
                          capture_output=True, text=True, cwd=cwd)


@pytest.fixture(scope="session")
def data_dir(tmp_path_factory):
    """Sweeps, overlay, and eigenvector sidecar produced by the real CLI."""
    root = tmp_path_factory.mktemp("inputs")
    jobs = (
        ["sweep", "--k-min", "2", "--k-max", "60", "--matrix", "M",
         "--out", "sweep-m.csv"],
        ["sweep", "--k-min", "2", "--k-max", "60", "--matrix", "Kinv",
         "--out", "sweep-kinv.csv"],
        ["fit-curve", "--n-min", "16", "--n-max", "3600", "--points", "40",
         "--out", "overlay.csv"],
        ["spectrum", "--n", "400", "--matrix", "M", "--eigvecs",
         "--eigvecs-out", "eigvecs.txt"],
    )
    for job in jobs:
        done = primary_cli(job, cwd=root)
        assert done.returncode == 0, done.stderr
    return root
