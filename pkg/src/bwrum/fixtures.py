"""Built-in worked examples, emitted as JSON files for tests and demos.

Each fixture is a small, fully determined object: a pattern with its
complete ranking list, a counting identity with literal values, or a
concrete probability system.  The ranking lists are frozen here rather
than generated, so the files double as an independent record that the
enumeration code can be checked against.
"""

from __future__ import annotations

import math
from fractions import Fraction
from pathlib import Path
from typing import Callable

from .core import choice_subsets, new_system, ordered_pairs, uniform_system
from .errors import OutOfRange, UnknownFixture
from .io import dump_json, system_to_payload

LABELS5 = ("p", "q", "r", "u", "v")

# The ten rankings with u before v that sandwich r between p and q,
# listed in the same order as the positional table they come from.
TABLE1_ROWS = (
    "uvprq",
    "upvrq",
    "uprvq",
    "uprqv",
    "puvrq",
    "purvq",
    "purqv",
    "pruvq",
    "pruqv",
    "prquv",
)

# Partition of the 20 rankings that sandwich r between u and v, indexed
# by which of {p, q} sit outside the sandwich and on which side.
TABLE2_COMPONENTS = (
    {
        "outside": (),
        "prefix": ("u",),
        "suffix": ("v",),
        "rankings": ("upqrv", "uprqv", "uqprv", "uqrpv", "urpqv", "urqpv"),
    },
    {
        "outside": ("p",),
        "prefix": ("p", "u"),
        "suffix": ("v",),
        "rankings": ("puqrv", "purqv"),
    },
    {
        "outside": ("p",),
        "prefix": ("u",),
        "suffix": ("v", "p"),
        "rankings": ("uqrvp", "urqvp"),
    },
    {
        "outside": ("q",),
        "prefix": ("q", "u"),
        "suffix": ("v",),
        "rankings": ("quprv", "qurpv"),
    },
    {
        "outside": ("q",),
        "prefix": ("u",),
        "suffix": ("v", "q"),
        "rankings": ("uprvq", "urpvq"),
    },
    {
        "outside": ("p", "q"),
        "prefix": ("p", "q", "u"),
        "suffix": ("v",),
        "rankings": ("pqurv",),
    },
    {
        "outside": ("p", "q"),
        "prefix": ("p", "u"),
        "suffix": ("v", "q"),
        "rankings": ("purvq",),
    },
    {
        "outside": ("p", "q"),
        "prefix": ("u",),
        "suffix": ("v", "p", "q"),
        "rankings": ("urvpq",),
    },
    {
        "outside": ("p", "q"),
        "prefix": ("q", "p", "u"),
        "suffix": ("v",),
        "rankings": ("qpurv",),
    },
    {
        "outside": ("p", "q"),
        "prefix": ("q", "u"),
        "suffix": ("v", "p"),
        "rankings": ("qurvp",),
    },
    {
        "outside": ("p", "q"),
        "prefix": ("u",),
        "suffix": ("v", "q", "p"),
        "rankings": ("urvqp",),
    },
)


def _mirror_uv(word: str) -> str:
    return word.translate(str.maketrans("uv", "vu"))


def _ranking_labels(word: str) -> list[str]:
    return list(word)


def _example1_payload() -> dict:
    mirrors = tuple(_mirror_uv(word) for word in TABLE1_ROWS)
    return {
        "n": 5,
        "labels": list(LABELS5),
        "pattern": {"prefix": ["p"], "ground": ["p", "q", "r"], "suffix": ["q"]},
        "equivalent_patterns": [
            {"prefix": ["p", "r"], "ground": ["p", "q", "r"], "suffix": ["q"]},
            {"prefix": ["p"], "ground": ["p", "q", "r"], "suffix": ["r", "q"]},
        ],
        "table_rows": [_ranking_labels(word) for word in TABLE1_ROWS],
        "mirror_rows": [_ranking_labels(word) for word in mirrors],
        "count": 20,
    }


def _example2_payload() -> dict:
    return {
        "n": 5,
        "labels": list(LABELS5),
        "pattern": {"prefix": ["p"], "ground": ["p", "q"], "suffix": ["q"]},
        "count": 60,
    }


def _example3_payload() -> dict:
    # One alternative is pulled out of the sandwich; conditioning on
    # where it lands splits the pattern into three disjoint pieces whose
    # sizes must add back up: n*(n-3)! = (n-3)! + (n-3)! + (n-2)!.
    rows = []
    for n in range(5, 9):
        lhs = math.factorial(n - 3) * n
        parts = [math.factorial(n - 3), math.factorial(n - 3), math.factorial(n - 2)]
        rows.append({"n": n, "total": lhs, "parts": parts})
    return {
        "top": 0,
        "bottom": 1,
        "moved": 2,
        "identity": rows,
        "components": [
            {"prefix": [2, 0], "suffix": [1], "ground": "all"},
            {"prefix": [0], "suffix": [1, 2], "ground": "all"},
            {"prefix": [0], "suffix": [1], "ground": "all"},
        ],
    }


def _table2_payload() -> dict:
    components = []
    for entry in TABLE2_COMPONENTS:
        components.append(
            {
                "outside": list(entry["outside"]),
                "prefix": list(entry["prefix"]),
                "suffix": list(entry["suffix"]),
                "rankings": [_ranking_labels(word) for word in entry["rankings"]],
            }
        )
    return {
        "n": 5,
        "labels": list(LABELS5),
        "parent": {"prefix": ["u"], "ground": ["r", "u", "v"], "suffix": ["v"]},
        "components": components,
        "sizes": [len(entry["rankings"]) for entry in TABLE2_COMPONENTS],
        "total": 20,
    }


def _uniform_payload(n: int) -> dict:
    return system_to_payload(uniform_system(n))


def _negk3_payload() -> dict:
    # Uniform except that the pair {0,1} always picks 1 as best.  The
    # triple's cell stays at 1/6, so subtracting it from the zero pair
    # cell drives one polynomial to -1/6.
    probs: dict[tuple[int, int, int], Fraction] = {}
    for mask in choice_subsets(3):
        pairs = list(ordered_pairs(mask))
        for a, b in pairs:
            probs[(mask, a, b)] = Fraction(1, len(pairs))
    pair01 = (1 << 0) | (1 << 1)
    probs[(pair01, 0, 1)] = Fraction(0)
    probs[(pair01, 1, 0)] = Fraction(1)
    system = new_system(3, [(m, (a, b), p) for (m, a, b), p in probs.items()])
    return system_to_payload(system, labels=["1", "2", "3"])


FIXTURE_NAMES = ("example1", "example2", "example3", "table2", "uniform_n", "negk3")


def emit_fixture(name: str, out_dir: str | Path = ".", n: int | None = None) -> list[Path]:
    """Write the named fixture into out_dir and return the paths written.

    uniform_n takes the optional size argument (default 4) and writes
    uniform{n}.json; every other fixture has fixed content and ignores n.
    """
    out = Path(out_dir)
    builders: dict[str, Callable[[], tuple[str, dict]]] = {
        "example1": lambda: ("example1.json", _example1_payload()),
        "example2": lambda: ("example2.json", _example2_payload()),
        "example3": lambda: ("example3.json", _example3_payload()),
        "table2": lambda: ("table2.json", _table2_payload()),
        "negk3": lambda: ("negk3.json", _negk3_payload()),
    }
    if name == "uniform_n":
        size = 4 if n is None else n
        if size < 2:
            raise OutOfRange(f"uniform fixture needs n >= 2, got {size}")
        filename, payload = f"uniform{size}.json", _uniform_payload(size)
    elif name in builders:
        if n is not None:
            raise OutOfRange(f"fixture {name!r} does not take a size argument")
        filename, payload = builders[name]()
    else:
        raise UnknownFixture(
            f"unknown fixture {name!r}; choose from {', '.join(FIXTURE_NAMES)}"
        )
    out.mkdir(parents=True, exist_ok=True)
    path = out / filename
    dump_json(payload, path)
    return [path]
