"""Per-run metrics records, serialized as one JSON object per line."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field

# counters reported for each algorithm, in column order
COUNTERS = {
    "sort": ("height",),
    "delaunay": ("incircle_count", "replace_boundary_calls", "triangles_created"),
    "lp": ("special_steps",),
    "closest-pair": ("rebuilds", "special_steps"),
    "seb": ("update1_calls", "update2_calls"),
    "le-lists": ("visits", "max_list_length"),
    "scc": ("visits", "components"),
}


@dataclass
class MetricsReport:
    algo: str
    n: int
    m: int
    seed: int
    mode: str
    threads: int
    rounds: int
    depth: int | None = None
    counters: dict = field(default_factory=dict)
    wall_ms: float = 0.0
    validated: bool | None = None

    def __post_init__(self):
        allowed = COUNTERS.get(self.algo)
        if allowed is not None and set(self.counters) != set(allowed):
            raise ValueError(f"counters for {self.algo} must be {allowed}, got {sorted(self.counters)}")

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json(cls, line: str) -> "MetricsReport":
        return cls(**json.loads(line))

    def flat(self) -> dict:
        row = {k: v for k, v in asdict(self).items() if k != "counters"}
        for name in COUNTERS.get(self.algo, sorted(self.counters)):
            row[name] = self.counters.get(name)
        return row


def append_report(path: str, report: MetricsReport) -> None:
    with open(path, "a") as fh:
        fh.write(report.to_json() + "\n")
