"""Fixture files: location logic and canonical JSON serialization.

Fixtures ship inside the package under bisetforge/fixtures/.  The directory
can be overridden by the BISETFORGE_FIXTURES environment variable or a CLI
flag; precedence is explicit argument > environment > packaged default.

Serialization is canonical (sorted keys, two-space indent, trailing newline)
so that regenerated files are byte-identical when the content agrees.
"""

from __future__ import annotations

import json
import os
from pathlib import Path

__all__ = [
    "fixture_dir",
    "load_json",
    "save_json",
    "canonical_dumps",
    "load_peirce",
    "load_delta_matrix",
    "load_presentation",
    "load_errata",
    "PRESENTATION_NAMES",
]

DEFAULT_DIR = Path(__file__).with_name("fixtures")
ENV_VAR = "BISETFORGE_FIXTURES"

PRESENTATION_NAMES = ("q_corner", "z2_corner", "z3_corner")


def fixture_dir(override=None):
    if override is not None:
        return Path(override)
    env = os.environ.get(ENV_VAR)
    if env:
        return Path(env)
    return DEFAULT_DIR


def load_json(name, override=None):
    path = fixture_dir(override) / name
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def canonical_dumps(data):
    return json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def save_json(name, data, override=None):
    path = fixture_dir(override) / name
    path.parent.mkdir(parents=True, exist_ok=True)
    text = canonical_dumps(data)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
    return path


def load_peirce(override=None):
    return load_json("peirce.json", override)


def load_delta_matrix(override=None):
    return load_json("delta_matrix.json", override)


def load_presentation(name, override=None):
    if name not in PRESENTATION_NAMES:
        raise ValueError("unknown presentation %r" % (name,))
    return load_json("presentations/%s.json" % name, override)


def load_errata(override=None):
    try:
        return load_json("errata.json", override)
    except FileNotFoundError:
        return []
