"""Committed piece geometries (JSON files in ``leafy/data``)."""

from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources

from leafy.polyform import Polyform


@lru_cache(maxsize=None)
def _raw(name: str) -> dict:
    text = resources.files("leafy").joinpath("data", f"{name}.json").read_text()
    return json.loads(text)


def load_polyform(name: str) -> Polyform:
    d = _raw(name)
    return Polyform(d["lattice"], (tuple(c) for c in d["cells"]))


def load_rooted(name: str):
    from leafy.graft import RootedPolycube
    d = _raw(name)
    return RootedPolycube(Polyform(d["lattice"], (tuple(c) for c in d["cells"])),
                          tuple(d["root"]), tuple(d["dir"]))


def metadata(name: str) -> dict:
    return {k: v for k, v in _raw(name).items() if k not in ("cells",)}
