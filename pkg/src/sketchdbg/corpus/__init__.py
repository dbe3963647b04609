"""Bundled task programs used as the canonical debugging corpus."""

from importlib import resources

PROGRAMS = ("variation1", "variation2")


def load(name: str) -> str:
    """Return the source text of a bundled corpus program by name."""
    if name not in PROGRAMS:
        raise KeyError(f"unknown corpus program: {name!r}")
    return resources.files(__package__).joinpath(f"{name}.py").read_text()
