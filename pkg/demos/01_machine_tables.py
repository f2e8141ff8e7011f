"""Bounded complexity on the 3-bit opcode machine.

Run with ``python demos/01_machine_tables.py``.
"""

from boundedinfo import MachineBudget, build_table, enumerate_programs, run
from boundedinfo.bits import pair

if __name__ == "__main__":
    # A program is the prefix read up to HALT; trailing bits are ignored.
    print(run("001100100000"))          # OUT0 DUP DUP HALT -> "0000"
    print(run("0001111"))               # HALT, rest unread

    # The halting set for L = 6 and an empty auxiliary tape.
    for rec in enumerate_programs("", MachineBudget(6)):
        print(rec.program, repr(rec.output))

    # Complexity, algorithmic probability and the Kraft sum grow with the budget.
    for L in (12, 18, 24):
        t = build_table("", MachineBudget(L))
        print(f"L={L}: K(0000)={t.k('0000')}  m(0)={t.m('0')}  kraft={float(t.kraft_sum()):.4f}")

    # String information i(x:y) = K(x) + K(y) - K(<x>y) over short strings.
    t = build_table("", MachineBudget(24))
    strings = ["", "0", "1", "00", "11"]
    print("     " + " ".join(f"{y!r:>5}" for y in strings))
    for x in strings:
        print(f"{x!r:>5}" + " ".join(f"{t.info(x, y):>5}" for y in strings))

    # Pairs of longer strings need much larger budgets.
    print(build_table("", MachineBudget(39)).k(pair("0000", "0000")))
