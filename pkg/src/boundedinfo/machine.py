"""A small self-delimiting universal prefix machine and resource-bounded
Kolmogorov complexity, algorithmic probability and string information.

Programs are read three bits at a time:

====  ==========  ===================================================
code  name        effect
====  ==========  ===================================================
000   HALT        stop; the program is exactly the bits read so far
001   OUT0        append ``0`` to the output
010   OUT1        append ``1`` to the output
011   READAUX     append the next auxiliary bit (diverge if none left)
100   DUP         append a copy of the current output
101   OUTAUXALL   append every remaining auxiliary bit
110   (diverge)
111   (diverge)
====  ==========  ===================================================

Writing more than ``max_output_bits`` bits diverges.  Because a program is
the exact prefix consumed up to HALT, the set of halting programs for a fixed
auxiliary tape is prefix free.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterator

from .bits import check_bits, pair

HALT, OUT0, OUT1, READAUX, DUP, OUTAUXALL = "000", "001", "010", "011", "100", "101"
OPCODE_BITS = 3
# Opcodes that can be followed by more instructions, in lexicographic order.
CONTINUING = (OUT0, OUT1, READAUX, DUP, OUTAUXALL)

ENUMERATION_CAP = 2 ** 26
TABLE_STATE_CAP = 5_000_000

INFINITE = math.inf


class BudgetError(Exception):
    """A bounded quantity could not be evaluated within the machine budget."""


class UndefinedInformation(BudgetError):
    """Some complexity needed for an information value is infinite at the budget."""

    def __init__(self, strings, budget):
        self.strings = tuple(strings)
        self.budget = budget
        shown = ", ".join(repr(s) for s in self.strings)
        super().__init__(
            f"complexity infinite for {shown} at L={budget.max_program_bits}, "
            f"T={budget.max_steps}, M={budget.max_output_bits}; enlarge the budget")


class EnumerationLimitError(BudgetError):
    pass


@dataclass(frozen=True)
class MachineBudget:
    max_program_bits: int = 18
    max_steps: int = 10_000
    max_output_bits: int = 64

    def __post_init__(self):
        if self.max_program_bits < OPCODE_BITS:
            raise ValueError("max_program_bits must be at least 3")
        if self.max_steps < 1 or self.max_output_bits < 1:
            raise ValueError("max_steps and max_output_bits must be positive")

    def replace(self, **kw) -> "MachineBudget":
        d = self.to_dict()
        d.update(kw)
        return MachineBudget(**d)

    def to_dict(self) -> dict:
        return {"max_program_bits": self.max_program_bits,
                "max_steps": self.max_steps,
                "max_output_bits": self.max_output_bits}

    @classmethod
    def parse(cls, text: str, base: "MachineBudget | None" = None) -> "MachineBudget":
        """Parse ``"L=18,T=10000,M=64"``; missing keys come from ``base``."""
        keys = {"L": "max_program_bits", "T": "max_steps", "M": "max_output_bits"}
        kw = {}
        for item in filter(None, (s.strip() for s in text.split(","))):
            k, _, v = item.partition("=")
            if k not in keys or not v:
                raise ValueError(f"bad budget item {item!r}; expected L=, T= or M=")
            kw[keys[k]] = int(float(v))
        return (base or cls()).replace(**kw)


DEFAULT_BUDGET = MachineBudget()


@dataclass(frozen=True)
class HaltingRecord:
    program: str
    output: str
    aux_consumed: int
    steps: int

    def dump_line(self) -> str:
        from .bits import to_hex
        return f"{to_hex(self.program)},{to_hex(self.output)},{self.steps},{self.aux_consumed}"


@dataclass(frozen=True)
class NonHalting:
    reason: str
    bits_read: int
    steps: int


def run(program: str, aux: str = "", budget: MachineBudget = DEFAULT_BUDGET) -> HaltingRecord | NonHalting:
    """Run ``program`` with auxiliary tape ``aux``.

    Returns a :class:`HaltingRecord` whose ``program`` is the consumed prefix,
    or :class:`NonHalting` naming why the run did not halt within budget.
    """
    check_bits(program)
    check_bits(aux)
    out = ""
    pos = 0
    aux_pos = 0
    steps = 0
    limit = min(len(program), budget.max_program_bits)
    while True:
        if steps >= budget.max_steps:
            return NonHalting("step budget exhausted", pos, steps)
        if pos + OPCODE_BITS > limit:
            reason = ("program bits exhausted" if limit == len(program)
                      else "program length budget exhausted")
            return NonHalting(reason, pos, steps)
        op = program[pos:pos + OPCODE_BITS]
        pos += OPCODE_BITS
        steps += 1
        if op == HALT:
            return HaltingRecord(program[:pos], out, aux_pos, steps)
        elif op == OUT0:
            out += "0"
        elif op == OUT1:
            out += "1"
        elif op == READAUX:
            if aux_pos >= len(aux):
                return NonHalting("auxiliary tape exhausted", pos, steps)
            out += aux[aux_pos]
            aux_pos += 1
        elif op == DUP:
            out += out
        elif op == OUTAUXALL:
            out += aux[aux_pos:]
            aux_pos = len(aux)
        else:
            return NonHalting(f"diverging opcode {op}", pos, steps)
        if len(out) > budget.max_output_bits:
            return NonHalting("output overflow", pos, steps)


def _step(op: str, out: str, aux_pos: int, aux: str, max_out: int):
    """Apply one continuing opcode; None means the branch diverges."""
    if op == OUT0:
        out += "0"
    elif op == OUT1:
        out += "1"
    elif op == READAUX:
        if aux_pos >= len(aux):
            return None
        out += aux[aux_pos]
        aux_pos += 1
    elif op == DUP:
        out += out
    else:
        out += aux[aux_pos:]
        aux_pos = len(aux)
    if len(out) > max_out:
        return None
    return out, aux_pos


def _max_instructions(budget: MachineBudget) -> int:
    # number of instructions of the longest admissible halting program
    return min(budget.max_program_bits // OPCODE_BITS, budget.max_steps)


def iter_halting(aux: str = "", budget: MachineBudget = DEFAULT_BUDGET) -> Iterator[HaltingRecord]:
    """Yield every halting program of length <= L in lexicographic order."""
    check_bits(aux)
    depth = _max_instructions(budget)
    max_out = budget.max_output_bits

    def walk(prefix, out, aux_pos, d):
        # d instructions executed so far; HALT is the smallest opcode so it comes first
        yield HaltingRecord(prefix + HALT, out, aux_pos, d + 1)
        if d + 2 > depth:
            return
        for op in CONTINUING:
            nxt = _step(op, out, aux_pos, aux, max_out)
            if nxt is not None:
                yield from walk(prefix + op, nxt[0], nxt[1], d + 1)

    if depth >= 1:
        yield from walk("", "", 0, 0)


def enumerate_programs(aux: str = "", budget: MachineBudget = DEFAULT_BUDGET,
                       cap: int = ENUMERATION_CAP) -> list[HaltingRecord]:
    if 2 ** (budget.max_program_bits + 1) > cap:
        raise EnumerationLimitError(
            f"2^(L+1) = 2^{budget.max_program_bits + 1} candidate programs exceeds the cap {cap}")
    return list(iter_halting(aux, budget))


def dump_enumeration(records, path) -> None:
    with open(path, "w") as fh:
        for r in records:
            fh.write(r.dump_line() + "\n")


@dataclass(frozen=True)
class ComplexityTable:
    """Bounded complexity ``k_of`` and algorithmic probability ``m_of`` of every
    output produced by some halting program within ``budget``, given ``aux``."""

    budget: MachineBudget
    aux: str
    k_of: dict = field(repr=False)
    m_of: dict = field(repr=False)

    def k(self, x: str) -> float | int:
        if len(x) > self.budget.max_output_bits:
            raise ValueError(f"string of {len(x)} bits exceeds M={self.budget.max_output_bits}")
        return self.k_of.get(x, INFINITE)

    def m(self, x: str) -> Fraction:
        if len(x) > self.budget.max_output_bits:
            raise ValueError(f"string of {len(x)} bits exceeds M={self.budget.max_output_bits}")
        return self.m_of.get(x, Fraction(0))

    def joint_k(self, x: str, y: str) -> float | int:
        return self.k(pair(x, y))

    def info(self, x: str, y: str) -> int:
        """``K(x) + K(y) - K(x, y)``; raises UndefinedInformation if any term is infinite."""
        kx, ky, kxy = self.k(x), self.k(y), self.joint_k(x, y)
        if INFINITE in (kx, ky, kxy):
            missing = [s for s, v in ((x, kx), (y, ky), (pair(x, y), kxy)) if v == INFINITE]
            raise UndefinedInformation(missing, self.budget)
        return kx + ky - kxy

    def kraft_sum(self) -> Fraction:
        return sum(self.m_of.values(), Fraction(0))

    @classmethod
    def from_records(cls, records, aux: str, budget: MachineBudget) -> "ComplexityTable":
        k_of, m_of = {}, {}
        for r in records:
            n = len(r.program)
            if n < k_of.get(r.output, INFINITE):
                k_of[r.output] = n
            m_of[r.output] = m_of.get(r.output, Fraction(0)) + Fraction(1, 2 ** n)
        return cls(budget, aux, k_of, m_of)


def build_table(aux: str = "", budget: MachineBudget = DEFAULT_BUDGET,
                state_cap: int = TABLE_STATE_CAP) -> ComplexityTable:
    """Build a complexity table without listing programs one by one.

    Programs with the same number of instructions that reach the same
    (output, auxiliary position) state have identical futures, so states are
    merged and carry a multiplicity.  This gives exactly the table that
    :func:`enumerate_programs` would produce, at much larger L.
    """
    check_bits(aux)
    depth = _max_instructions(budget)
    max_out = budget.max_output_bits
    k_of = {}
    num = defaultdict(int)
    states = {("", 0): 1}
    for d in range(depth):
        # halting here gives a program of 3(d+1) bits
        shift = OPCODE_BITS * (depth - 1 - d)
        for (out, _), count in states.items():
            if out not in k_of:
                k_of[out] = OPCODE_BITS * (d + 1)
            num[out] += count << shift
        if d + 1 == depth:
            break
        nxt = defaultdict(int)
        for (out, aux_pos), count in states.items():
            for op in CONTINUING:
                s = _step(op, out, aux_pos, aux, max_out)
                if s is not None:
                    nxt[s] += count
        if len(nxt) > state_cap:
            raise BudgetError(f"{len(nxt)} machine states at depth {d + 1} exceed the cap {state_cap}")
        states = nxt
    denom = 2 ** (OPCODE_BITS * depth)
    m_of = {x: Fraction(v, denom) for x, v in num.items()}
    return ComplexityTable(budget, aux, k_of, m_of)


@lru_cache(maxsize=32)
def complexity_table(aux: str = "", budget: MachineBudget = DEFAULT_BUDGET) -> ComplexityTable:
    return build_table(aux, budget)


def complexity(x: str, aux: str = "", budget: MachineBudget = DEFAULT_BUDGET):
    """Bounded prefix complexity of ``x`` given ``aux``; ``INFINITE`` if no program within budget."""
    return complexity_table(aux, budget).k(check_bits(x))


def algorithmic_probability(x: str, aux: str = "", budget: MachineBudget = DEFAULT_BUDGET) -> Fraction:
    return complexity_table(aux, budget).m(check_bits(x))


def joint_complexity(x: str, y: str, aux: str = "", budget: MachineBudget = DEFAULT_BUDGET):
    return complexity(pair(check_bits(x), check_bits(y)), aux, budget)


def string_info(x: str, y: str, aux: str = "", budget: MachineBudget = DEFAULT_BUDGET) -> int:
    return complexity_table(aux, budget).info(check_bits(x), check_bits(y))


def kraft_sum(aux: str = "", budget: MachineBudget = DEFAULT_BUDGET) -> Fraction:
    return complexity_table(aux, budget).kraft_sum()
