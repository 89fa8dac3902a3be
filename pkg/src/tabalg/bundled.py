"""Bundled verified datasets and data-file lookup.

Four fully verified algebras ship with the package: C7, D17, B22 and B32.
Five small group class algebras (Z2, Z3, Z4, Z6, S3) and one partial table
(PSL27-partial) are included as auxiliary data.  ``bundled:`` URIs resolve
against these without filesystem access; the environment variable
TABALG_DATA_DIR optionally points at a directory searched first, so user
corpora can shadow or extend the bundled set.
"""

from __future__ import annotations

import os
from importlib import resources

from .core import TableAlgebra
from .fileformat import parse, parse_partial

__all__ = [
    "BUNDLED",
    "AUXILIARY",
    "PARTIAL",
    "NAMED_SUBSETS",
    "data_text",
    "load",
    "bundled",
    "resolve",
]

BUNDLED = ("C7", "D17", "B22", "B32")
AUXILIARY = ("Z2", "Z3", "Z4", "Z6", "S3")
PARTIAL = ("PSL27-partial",)

# conventional names for the closed subsets of the bundled algebras
NAMED_SUBSETS = {
    "B32": {
        "C": ("1", "b8", "x10", "b5", "c5", "c8", "x9"),
        "D": (
            "1", "b8", "x10", "b5", "c5", "c8", "x9",
            "c3", "c3bar", "d3", "d3bar", "c9", "c9bar", "b6", "b6bar", "y15", "y15bar",
        ),
        "E": ("1", "b8", "x10", "b5", "c5", "c8", "x9", "r3", "s6", "t15", "d9", "y3"),
    },
    "B22": {
        "C": ("1", "b8", "x10", "b5", "c5", "c8", "x9"),
        "E": ("1", "b8", "x10", "b5", "c5", "c8", "x9", "r3", "s6", "t15", "d9", "y3"),
    },
}

_cache: dict[str, TableAlgebra] = {}


def data_text(name: str) -> str:
    """Raw text of a data file, honouring TABALG_DATA_DIR."""
    fname = f"{name}.alg"
    override = os.environ.get("TABALG_DATA_DIR")
    if override:
        path = os.path.join(override, fname)
        if os.path.exists(path):
            with open(path, encoding="utf-8") as fh:
                return fh.read()
    ref = resources.files("tabalg").joinpath("data").joinpath(fname)
    if not ref.is_file():
        raise FileNotFoundError(f"no bundled data file {fname}")
    return ref.read_text(encoding="utf-8")


def load(name: str) -> TableAlgebra:
    """Parse a bundled or data-dir algebra by name (cached per process)."""
    if os.environ.get("TABALG_DATA_DIR"):
        return parse(data_text(name))
    if name not in _cache:
        _cache[name] = parse(data_text(name))
    return _cache[name]


def bundled() -> list[TableAlgebra]:
    """The four verified algebras, re-verified once per process."""
    out = []
    for name in BUNDLED:
        algebra = load(name)
        report = algebra.verified()
        if not report.ok:
            raise RuntimeError(f"bundled algebra {name} failed verification: {report.summary()}")
        out.append(algebra)
    return out


def resolve(uri: str) -> TableAlgebra:
    """``bundled:NAME`` or a filesystem path to an algebra file."""
    if uri.startswith("bundled:"):
        return load(uri[len("bundled:"):])
    with open(uri, encoding="utf-8") as fh:
        return parse(fh.read())


def resolve_partial(uri: str):
    """Like resolve but without the completeness requirement; returns
    (name, basis, products)."""
    if uri.startswith("bundled:"):
        return parse_partial(data_text(uri[len("bundled:"):]))
    with open(uri, encoding="utf-8") as fh:
        return parse_partial(fh.read())
