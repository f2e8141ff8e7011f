"""Independent reference interpreter for the 3-bit opcode machine.

Tries every bit string up to a length bound, which is slow but shares no
code with the package.
"""

from fractions import Fraction
from itertools import product


def interpret(bits, aux="", max_len=None, max_steps=10_000, max_out=64):
    """Return (bits consumed, output) if ``bits`` halts, else None."""
    tape = [int(b) for b in bits]
    aux = [int(b) for b in aux]
    if max_len is not None:
        tape = tape[:max_len]
    out = []
    head = 0
    cursor = 0
    for _ in range(max_steps):
        if head + 3 > len(tape):
            return None
        code = tape[head] * 4 + tape[head + 1] * 2 + tape[head + 2]
        head += 3
        if code == 0:
            return head, "".join(map(str, out))
        if code == 1 or code == 2:
            out.append(code - 1)
        elif code == 3:
            if cursor == len(aux):
                return None
            out.append(aux[cursor])
            cursor += 1
        elif code == 4:
            out = out * 2
        elif code == 5:
            out.extend(aux[cursor:])
            cursor = len(aux)
        else:
            return None
        if len(out) > max_out:
            return None
    return None


def halting_set(L, aux="", max_steps=10_000, max_out=64):
    """{program: output} over all strings of length <= L that halt using every bit."""
    found = {}
    for n in range(L + 1):
        for t in product("01", repeat=n):
            s = "".join(t)
            r = interpret(s, aux, max_steps=max_steps, max_out=max_out)
            if r is not None and r[0] == n:
                found[s] = r[1]
    return found


def k_and_m(L, aux="", **kw):
    k, m = {}, {}
    for prog, out in halting_set(L, aux, **kw).items():
        k[out] = min(k.get(out, 10 ** 9), len(prog))
        m[out] = m.get(out, Fraction(0)) + Fraction(1, 2 ** len(prog))
    return k, m
