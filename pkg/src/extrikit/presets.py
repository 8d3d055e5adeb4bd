"""Built-in quiver specifications used by the tests and handy for the CLI."""

from __future__ import annotations

from .spec_io import QUIVER_FORMAT


def ka3_line() -> dict:
    """A3 with orientation 1 <- 2 <- 3, no relations (hereditary)."""
    return {
        "format": QUIVER_FORMAT,
        "prime": 101,
        "vertices": ["1", "2", "3"],
        "arrows": [
            {"name": "a21", "from": "2", "to": "1"},
            {"name": "a32", "from": "3", "to": "2"},
        ],
        "relations": [],
    }


def ka3_rad2() -> dict:
    """A3 with orientation 1 -> 2 -> 3 bound by the square of the radical."""
    return {
        "format": QUIVER_FORMAT,
        "prime": 101,
        "vertices": ["1", "2", "3"],
        "arrows": [
            {"name": "a12", "from": "1", "to": "2"},
            {"name": "a23", "from": "2", "to": "3"},
        ],
        "relations": [[{"coeff": 1, "path": ["a12", "a23"]}]],
    }


def blossom() -> dict:
    """The eleven-vertex algebra with horizontal/vertical arrows and the
    relations killing every h-then-v and v-then-h composite."""
    horizontals = [("a", "1"), ("1", "2"), ("2", "g"), ("d", "3"), ("3", "h")]
    verticals = [("b", "1"), ("1", "c"), ("e", "2"), ("2", "3"), ("3", "f")]
    arrows = []
    kind = {}
    for s, t in horizontals:
        name = f"h_{s}{t}"
        arrows.append({"name": name, "from": s, "to": t})
        kind[name] = "h"
    for s, t in verticals:
        name = f"v_{s}{t}"
        arrows.append({"name": name, "from": s, "to": t})
        kind[name] = "v"
    by_name = {a["name"]: a for a in arrows}
    relations = []
    for n1 in sorted(by_name):
        for n2 in sorted(by_name):
            if by_name[n1]["to"] == by_name[n2]["from"] and kind[n1] != kind[n2]:
                relations.append([{"coeff": 1, "path": [n1, n2]}])
    return {
        "format": QUIVER_FORMAT,
        "prime": 101,
        "vertices": ["1", "2", "3", "a", "b", "c", "d", "e", "f", "g", "h"],
        "arrows": arrows,
        "relations": relations,
    }


PRESETS = {"ka3-line": ka3_line, "ka3-rad2": ka3_rad2, "blossom": blossom}
