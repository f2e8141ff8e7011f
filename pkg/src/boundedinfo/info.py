"""Information between finitely supported probabilities and its behaviour
under stochastic channels."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .bits import check_bits, from_hex, to_hex
from .machine import ComplexityTable

EPS_NORM = 1e-9


class ChannelDomainError(ValueError):
    pass


@dataclass(frozen=True)
class FiniteProbability:
    """Nonnegative mass on finitely many bit strings with total in (0, 1]."""

    mass: dict

    def __post_init__(self):
        cleaned = {}
        for x in sorted(self.mass, key=lambda s: (len(s), s)):
            v = float(self.mass[x])
            if not v >= 0.0 or math.isinf(v):
                raise ValueError(f"mass of {x!r} must be a finite nonnegative number, got {v}")
            cleaned[check_bits(x)] = v
        object.__setattr__(self, "mass", cleaned)
        t = self.total
        if not 0.0 < t <= 1.0 + EPS_NORM:
            raise ValueError(f"total mass {t!r} outside (0, 1]")

    @property
    def total(self) -> float:
        return math.fsum(self.mass.values())

    @property
    def support(self) -> list[str]:
        return list(self.mass)

    def __getitem__(self, x: str) -> float:
        return self.mass.get(x, 0.0)

    @classmethod
    def point(cls, x: str) -> "FiniteProbability":
        return cls({x: 1.0})

    @classmethod
    def uniform(cls, strings) -> "FiniteProbability":
        strings = list(strings)
        return cls({x: 1.0 / len(strings) for x in strings})

    def mix(self, other: "FiniteProbability", weight: float) -> "FiniteProbability":
        """``weight * self + (1 - weight) * other``."""
        keys = set(self.mass) | set(other.mass)
        return FiniteProbability({x: weight * self[x] + (1.0 - weight) * other[x] for x in keys})

    def to_json(self) -> dict:
        return {"support": [to_hex(x) for x in self.mass], "mass": list(self.mass.values())}

    @classmethod
    def from_json(cls, obj: dict) -> "FiniteProbability":
        if len(obj["support"]) != len(obj["mass"]):
            raise ValueError("support and mass have different lengths")
        return cls({from_hex(h): float(v) for h, v in zip(obj["support"], obj["mass"])})


@dataclass(frozen=True)
class Channel:
    """Stochastic kernel ``f(x|y)``; ``columns[y]`` is the probability ``f(.|y)``."""

    columns: dict

    def __post_init__(self):
        cols = {}
        for y in sorted(self.columns, key=lambda s: (len(s), s)):
            col = {check_bits(x): float(v) for x, v in self.columns[y].items()}
            if any(not v >= 0.0 for v in col.values()):
                raise ValueError(f"negative kernel entry in column {y!r}")
            s = math.fsum(col.values())
            if abs(s - 1.0) > EPS_NORM:
                raise ValueError(f"column {y!r} sums to {s!r}, not 1")
            cols[check_bits(y)] = col
        object.__setattr__(self, "columns", cols)

    @property
    def input_support(self) -> list[str]:
        return list(self.columns)

    @property
    def outputs(self) -> list[str]:
        keys = {x for col in self.columns.values() for x in col}
        return sorted(keys, key=lambda s: (len(s), s))

    def kernel(self, x: str, y: str) -> float:
        return self.columns[y].get(x, 0.0)

    @classmethod
    def identity(cls, strings) -> "Channel":
        return cls({y: {y: 1.0} for y in strings})

    @classmethod
    def constant(cls, inputs, target: str) -> "Channel":
        return cls({y: {target: 1.0} for y in inputs})

    def to_json(self) -> dict:
        # kernel[i][j] = f(outputs[i] | inputs[j]); columns sum to one
        outs = self.outputs
        return {"inputs": [to_hex(y) for y in self.columns],
                "outputs": [to_hex(x) for x in outs],
                "kernel": [[self.kernel(x, y) for y in self.columns] for x in outs]}

    @classmethod
    def from_json(cls, obj: dict) -> "Channel":
        ins = [from_hex(h) for h in obj["inputs"]]
        outs = [from_hex(h) for h in obj["outputs"]]
        k = obj["kernel"]
        if len(k) != len(outs) or any(len(row) != len(ins) for row in k):
            raise ValueError("kernel must have one row per output and one column per input")
        return cls({y: {x: float(k[i][j]) for i, x in enumerate(outs)} for j, y in enumerate(ins)})


def load_json(path):
    with open(path) as fh:
        return json.load(fh)


def info_matrix(xs, ys, table: ComplexityTable) -> np.ndarray:
    """Integer matrix of string information ``i(x:y)`` over two label lists."""
    return np.array([[table.info(x, y) for y in ys] for x in xs], dtype=np.int64)


def prob_info(p: FiniteProbability, q: FiniteProbability, table: ComplexityTable) -> float:
    """``log2 sum_{x,y} 2^{i(x:y)} p(x) q(y)`` in bits.

    Every supported pair must have finite complexities at the table's budget;
    otherwise :class:`~boundedinfo.machine.UndefinedInformation` is raised.
    """
    exps = []
    for x, px in p.mass.items():
        for y, qy in q.mass.items():
            i = table.info(x, y)
            if px > 0.0 and qy > 0.0:
                exps.append(i + math.log2(px) + math.log2(qy))
    top = max(exps)
    return top + math.log2(math.fsum(2.0 ** (e - top) for e in exps))


def transform(f: Channel, p: FiniteProbability) -> FiniteProbability:
    """Push ``p`` through the channel: ``fp(x) = sum_y f(x|y) p(y)``."""
    missing = [y for y in p.support if y not in f.columns]
    if missing:
        raise ChannelDomainError(f"channel has no column for input(s) {missing}")
    out = {}
    for x in f.outputs:
        out[x] = math.fsum(f.kernel(x, y) * py for y, py in p.mass.items())
    return FiniteProbability(out)


def conservation_slack(f: Channel, p: FiniteProbability, q: FiniteProbability,
                       table: ComplexityTable) -> float:
    """``i(fp:q) - i(p:q)``; values at or below zero mean information did not grow."""
    return prob_info(transform(f, p), q, table) - prob_info(p, q, table)


def random_channel(inputs, outputs, rng_seed) -> Channel:
    """Channel whose columns are drawn uniformly from the simplex over ``outputs``."""
    rng = np.random.default_rng(rng_seed)
    outputs = list(outputs)
    cols = {}
    for y in sorted(inputs, key=lambda s: (len(s), s)):
        e = rng.exponential(size=len(outputs))
        w = e / e.sum()
        cols[y] = dict(zip(outputs, w.tolist()))
    return Channel(cols)
