"""CSV/JSON writers with a versioned schema and run metadata.

CSV columns are fixed-order with 17-significant-digit decimal floats so that
reruns diff cleanly and downstream plotting stays language-neutral.
"""

import json
import os
import time
from typing import Dict, Iterable, List, Optional, Sequence

from .zerofinder import ZeroPoint

SCHEMA_VERSION = "1"

SCAN_COLUMNS = ["L", "re_h", "im_h", "sector", "re_E_even", "im_E_even",
                "re_E_odd", "im_E_odd", "fidelity", "status"]
ZEROS_COLUMNS = ["L", "re_h", "im_h", "bracket_width", "source", "degenerate_flag"]
CIRCLE_COLUMNS = ["L", "g", "theta", "re_h", "im_h", "bracket_width"]


def fmt(x) -> str:
    if isinstance(x, float):
        return format(x, ".17g")
    return str(x)


def write_csv(path, columns: Sequence[str], rows: Iterable[Sequence]) -> int:
    n = 0
    with open(path, "w") as f:
        f.write(",".join(columns) + "\n")
        for row in rows:
            f.write(",".join(fmt(v) for v in row) + "\n")
            n += 1
    return n


def zeros_rows(L: int, zeros: Sequence[ZeroPoint]) -> List[list]:
    return [[L, z.h.real, z.h.imag, z.bracket_width, z.source, int(z.degenerate)]
            for z in zeros]


def circle_rows(L: int, g: float, zeros: Sequence[ZeroPoint]) -> List[list]:
    return [[L, g, z.theta, z.h.real, z.h.imag, z.bracket_width] for z in zeros]


class RunWriter:
    """Owns one output directory: data files plus the meta.json envelope."""

    def __init__(self, out_dir, command: str, config: Dict, tool_version: str):
        self.out_dir = out_dir
        os.makedirs(out_dir, exist_ok=True)
        self._meta = {
            "schema_version": SCHEMA_VERSION,
            "tool_version": tool_version,
            "command": command,
            "config": config,
            "timings": {},
            "summary": {},
        }
        self._t0 = time.perf_counter()

    def path(self, name: str) -> str:
        return os.path.join(self.out_dir, name)

    def time(self, key: str, t_start: float) -> None:
        self._meta["timings"][key] = time.perf_counter() - t_start

    def summarize(self, **kv) -> None:
        self._meta["summary"].update(kv)

    def write_json(self, name: str, payload) -> str:
        p = self.path(name)
        with open(p, "w") as f:
            json.dump(payload, f, indent=2, sort_keys=True)
            f.write("\n")
        return p

    def finish(self) -> str:
        self._meta["timings"]["total"] = time.perf_counter() - self._t0
        return self.write_json("meta.json", self._meta)
