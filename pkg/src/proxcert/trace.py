"""Per-iteration traces with pinned CSV formats, plus stopping rules."""

import time
from dataclasses import dataclass, field

import numpy as np

__all__ = ["Trace", "read_trace_csv", "MaxIters", "StagnationStop", "MetricStop"]


def _fmt(v):
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return repr(float(v))


@dataclass
class Trace:
    """Iteration log of one solver run.

    ``columns`` is the pinned CSV header. ``extras`` holds in-memory
    diagnostic series that are not part of the CSV contract, and ``final``
    the terminal vectors a caller may want (aggregated iterates, duals).
    """
    columns: tuple
    rows: list = field(default_factory=list)
    extras: dict = field(default_factory=dict)
    final: dict = field(default_factory=dict)
    meta: dict = field(default_factory=dict)

    def append(self, **values):
        row = {c: values.get(c, float("nan")) for c in self.columns}
        self.rows.append(row)

    def add_extra(self, name, value):
        self.extras.setdefault(name, []).append(value)

    def column(self, name):
        return np.array([row[name] for row in self.rows], dtype=np.float64)

    def write_csv(self, path, wall_times=False):
        """Write the pinned-header CSV.

        By default the elapsed_s column is zeroed so reruns with the same
        seed are byte-identical; pass wall_times=True to keep measurements.
        """
        with open(path, "w") as fh:
            fh.write(",".join(self.columns) + "\n")
            for row in self.rows:
                vals = []
                for c in self.columns:
                    v = row[c]
                    if c == "elapsed_s" and not wall_times:
                        v = 0.0
                    vals.append(_fmt(v))
                fh.write(",".join(vals) + "\n")


def read_trace_csv(path):
    with open(path) as fh:
        header = fh.readline().strip().split(",")
        rows = []
        for line in fh:
            line = line.strip()
            if not line:
                continue
            parts = line.split(",")
            if len(parts) != len(header):
                raise ValueError(f"{path}: malformed row {line!r}")
            rows.append({h: float(p) for h, p in zip(header, parts)})
    return header, rows


class MaxIters:
    """Stop after a fixed number of steps (always also acts as a cap)."""

    def __init__(self, n):
        self.n = int(n)

    def should_stop(self, k, objectives, state):
        return k >= self.n


class StagnationStop:
    """Stop when |F_k - F_{k-window}| <= eps * max(1, |F_k|)."""

    def __init__(self, eps, window=10):
        self.eps = float(eps)
        self.window = int(window)

    def should_stop(self, k, objectives, state):
        if len(objectives) <= self.window:
            return False
        cur = objectives[-1]
        return abs(cur - objectives[-1 - self.window]) <= self.eps * max(1.0, abs(cur))


class MetricStop:
    """Stop when a caller-supplied metric of the aggregated iterate drops
    below eps (used for the logistic duality-gap criterion)."""

    def __init__(self, eps, metric):
        self.eps = float(eps)
        self.metric = metric

    def should_stop(self, k, objectives, state):
        return self.metric(state.x_ag) <= self.eps


class Timer:
    def __init__(self):
        self.start = time.perf_counter()

    def elapsed(self):
        return time.perf_counter() - self.start
