"""The three worked examples as ``.quiv`` sources."""

from __future__ import annotations

from importlib import resources

NAMES = ("A", "B", "C")


def path(name: str):
    return resources.files(__name__).joinpath(f"{name}.quiv")


def text(name: str) -> str:
    return path(name).read_text(encoding="utf-8")


def load(name: str):
    from ..presentation import parse

    return parse(text(name))
