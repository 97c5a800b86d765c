"""Shipped instance files."""
from __future__ import annotations

from importlib import resources

NAMES = ("fx_triv", "fx_x2", "fx_mat2", "fx_c2", "fx_taft", "fx_t2dual", "fx_weak2")


def path(name: str):
    return resources.files(__name__) / f"{name}.json"


def load(name: str, field_override=None):
    from ..instance import load_json_text, parse_document

    return parse_document(load_json_text(path(name).read_text()), field_override, f"{name}.json")
