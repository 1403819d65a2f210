"""
Matrix sources for the command line.

    source := term ('*' term)*
    term   := identity | grover:ij | warp:Wk | cnot12 | cnot21 | swap | <path>

Terms multiply left to right as matrices, so "warp:W4*grover:10" is W4.U10.
A path names a text file of 4 lines with 4 complex entries each ("a+bi");
'#' starts a comment.
"""

import os
import re

import numpy as np

from src.core.errors import MatrixParseError
from src.core.grover import TargetFile, grover_gate
from src.core.su4 import CNOT12, CNOT21, I4, SWAP
from src.services.warp_service import catalog_gate

_FIXED = {
    "identity": I4,
    "cnot12": CNOT12,
    "cnot21": CNOT21,
    "swap": SWAP,
}
_GROVER = re.compile(r"^grover:([01]{2})$")
_WARP = re.compile(r"^warp:(W\d+)$")


def parse_complex(token: str) -> complex:
    text = token.strip().replace("i", "j").replace("I", "j")
    if text.endswith("j") and text[:-1] in ("", "+", "-"):
        text = text[:-1] + "1j"
    try:
        value = complex(text)
    except ValueError as exc:
        raise MatrixParseError(f"cannot read {token!r} as a complex number") from exc
    if not np.isfinite(value):
        raise MatrixParseError(f"matrix entry {token!r} is not finite")
    return value


def parse_matrix_text(text: str, origin: str = "<text>") -> np.ndarray:
    rows = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        entries = line.replace(",", " ").split()
        if len(entries) != 4:
            raise MatrixParseError(f"{origin}:{line_no}: expected 4 entries, found {len(entries)}")
        rows.append([parse_complex(e) for e in entries])
    if len(rows) != 4:
        raise MatrixParseError(f"{origin}: expected 4 rows, found {len(rows)}")
    return np.array(rows, dtype=complex)


def load_matrix_file(path: str) -> np.ndarray:
    try:
        with open(path, "r") as f:
            text = f.read()
    except OSError as exc:
        raise MatrixParseError(f"cannot read matrix file {path}: {exc}") from exc
    return parse_matrix_text(text, path)


def resolve_term(term: str) -> np.ndarray:
    key = term.strip()
    if key.lower() in _FIXED:
        return _FIXED[key.lower()].copy()
    match = _GROVER.match(key)
    if match:
        return grover_gate(TargetFile.parse(match.group(1)))
    match = _WARP.match(key)
    if match:
        try:
            return catalog_gate(match.group(1)).matrix.copy()
        except KeyError as exc:
            raise MatrixParseError(f"unknown warp gate in {key!r}") from exc
    if os.path.isfile(key):
        return load_matrix_file(key)
    raise MatrixParseError(f"unknown matrix source term {key!r}")


def resolve_source(source: str) -> np.ndarray:
    terms = source.split("*")
    if not source.strip() or any(not t.strip() for t in terms):
        raise MatrixParseError(f"empty term in matrix source {source!r}")
    result = I4.copy()
    for term in terms:
        result = result @ resolve_term(term)
    return result
