"""Bundled example systems, loaded by file stem (``load("ts21")``)."""

from __future__ import annotations

from importlib import resources

from .formats import parse_lts, parse_pn


def names() -> list[str]:
    return sorted(p.name for p in resources.files(__package__).joinpath("data").iterdir()
                  if p.name.endswith((".lts", ".pn")))


def text(filename: str) -> str:
    return resources.files(__package__).joinpath("data", filename).read_text(encoding="utf-8")


def load(stem: str):
    """Parse ``data/<stem>.lts`` or, failing that, ``data/<stem>.pn``."""
    for ext, parser in ((".lts", parse_lts), (".pn", parse_pn)):
        try:
            return parser(text(stem + ext))
        except FileNotFoundError:
            continue
    raise KeyError(stem)
