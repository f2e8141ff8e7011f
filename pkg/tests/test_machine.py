from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from boundedinfo.bits import pair
from boundedinfo.machine import (
    INFINITE,
    ComplexityTable,
    EnumerationLimitError,
    HaltingRecord,
    MachineBudget,
    NonHalting,
    UndefinedInformation,
    algorithmic_probability,
    build_table,
    complexity,
    enumerate_programs,
    joint_complexity,
    kraft_sum,
    run,
    string_info,
)

import bruteforce

B = MachineBudget


def all_strings(max_len):
    return ["".join(t) for n in range(max_len + 1) for t in product("01", repeat=n)]


class TestRun:
    def test_halt_only(self):
        r = run("000", "", B(3, 10, 8))
        assert r == HaltingRecord("000", "", 0, 1)

    def test_out0_halt(self):
        assert run("001000").output == "0"

    def test_dup(self):
        r = run("001100100000")
        assert r.output == "0000"
        assert r.program == "001100100000"
        assert bruteforce.interpret("001100100000") == (12, "0000")

    def test_trailing_bits_not_part_of_program(self):
        r = run("0001011")
        assert r.program == "000"

    def test_readaux_and_outauxall(self):
        assert run("011011000", "10").output == "10"
        r = run("011101000", "1101")
        assert r.output == "1101" and r.aux_consumed == 4

    @pytest.mark.parametrize("program, reason", [
        ("011000", "auxiliary tape exhausted"),
        ("110000", "diverging opcode 110"),
        ("111", "diverging opcode 111"),
        ("001001", "program bits exhausted"),
        ("00", "program bits exhausted"),
    ])
    def test_non_halting(self, program, reason):
        r = run(program)
        assert isinstance(r, NonHalting)
        assert r.reason == reason

    def test_step_budget(self):
        assert isinstance(run("001001000", "", B(18, 2, 8)), NonHalting)
        assert run("001001000", "", B(18, 3, 8)).output == "00"

    def test_output_overflow(self):
        assert isinstance(run("010100100000", "", B(18, 100, 3)), NonHalting)
        assert run("010100100000", "", B(18, 100, 4)).output == "1111"

    def test_program_length_budget(self):
        r = run("001001000", "", B(6))
        assert r.reason == "program length budget exhausted"

    def test_budget_validation(self):
        with pytest.raises(ValueError):
            B(2)
        with pytest.raises(ValueError):
            B(18, 0)

    def test_budget_parse(self):
        assert B.parse("L=12") == B(12, 10_000, 64)
        assert B.parse("L=12,T=5,M=9") == B(12, 5, 9)
        with pytest.raises(ValueError):
            B.parse("X=3")


class TestEnumerate:
    def test_l3(self):
        assert enumerate_programs("", B(3)) == [HaltingRecord("000", "", 0, 1)]

    def test_l5_same_as_l3(self):
        assert [r.program for r in enumerate_programs("", B(5))] == ["000"]

    def test_l6_matches_oracle(self):
        recs = enumerate_programs("", B(6))
        assert {r.program: r.output for r in recs} == bruteforce.halting_set(6)
        assert [r.program for r in recs] == ["000", "001000", "010000", "100000", "101000"]

    @pytest.mark.parametrize("aux", ["", "1", "0110"])
    def test_l12_matches_oracle(self, aux):
        recs = enumerate_programs(aux, B(12))
        assert {r.program: r.output for r in recs} == bruteforce.halting_set(12, aux)
        progs = [r.program for r in recs]
        assert progs == sorted(progs)
        assert len(set(progs)) == len(progs)

    def test_every_record_reruns(self):
        for r in enumerate_programs("101", B(15)):
            assert run(r.program, "101", B(15)) == r

    def test_cap(self):
        with pytest.raises(EnumerationLimitError):
            enumerate_programs("", B(30))

    def test_dump_line(self):
        r = run("001000")
        # marker-bit hex: 1001000 -> 0x48, 10 -> 0x2
        assert r.dump_line() == "48,2,2,0"


class TestComplexity:
    def test_values(self):
        assert complexity("", "", B(3)) == 3
        assert complexity("0", "", B(6)) == 6
        assert complexity("0", "", B(3)) == INFINITE
        assert complexity("0000", "", B(12)) == 12
        assert complexity("0000", "", B(9)) == INFINITE

    def test_too_long(self):
        with pytest.raises(ValueError):
            complexity("0" * 9, "", B(18, 100, 8))

    def test_algorithmic_probability(self):
        assert algorithmic_probability("", "", B(3)) == Fraction(1, 8)
        assert algorithmic_probability("", "", B(12)) >= Fraction(1, 8)
        # oracle enumeration over all strings of length <= 12
        assert algorithmic_probability("0", "", B(12)) == Fraction(95, 4096)
        assert algorithmic_probability("0110", "", B(12)) == 0

    def test_kraft(self):
        assert kraft_sum("", B(3)) == Fraction(1, 8)
        assert kraft_sum("", B(12)) == Fraction(15, 64)
        assert kraft_sum("", B(18)) == Fraction(63, 256)

    def test_joint(self):
        assert joint_complexity("", "", "", B(6)) == complexity("0", "", B(6)) == 6
        assert joint_complexity("01", "", "", B(18)) == complexity("11001", "", B(18))
        t = build_table("", B(24))
        asym = [(x, y) for x in all_strings(2) for y in all_strings(2)
                if t.joint_k(x, y) != t.joint_k(y, x)]
        assert asym

    def test_string_info(self):
        assert string_info("", "", "", B(6)) == 0
        with pytest.raises(UndefinedInformation):
            string_info("0000", "0000", "", B(18))
        # <0000>0000 first has a program at L=39: OUT1 DUP DUP OUT0, eight OUT0, HALT
        prog = "010" + "100" * 2 + "001" * 9 + "000"
        assert bruteforce.interpret(prog) == (39, pair("0000", "0000"))
        assert complexity(pair("0000", "0000"), "", B(36)) == INFINITE
        assert string_info("0000", "0000", "", B(39)) == 12 + 12 - 39

    def test_undefined_names_strings(self):
        with pytest.raises(UndefinedInformation) as err:
            string_info("0000", "0000", "", B(18))
        assert err.value.strings == (pair("0000", "0000"),)


class TestTable:
    @pytest.mark.parametrize("aux", ["", "101", "11011"])
    @pytest.mark.parametrize("L", [9, 15, 21])
    def test_aggregated_table_equals_enumeration(self, aux, L):
        b = B(L)
        fast = build_table(aux, b)
        slow = ComplexityTable.from_records(enumerate_programs(aux, b), aux, b)
        assert fast.k_of == slow.k_of
        assert fast.m_of == slow.m_of

    def test_small_step_budget(self):
        b = B(18, 3, 64)
        fast = build_table("", b)
        slow = ComplexityTable.from_records(enumerate_programs("", b), "", b)
        assert fast.k_of == slow.k_of and fast.m_of == slow.m_of
        assert max(fast.k_of.values()) == 9

    def test_table_invariants(self):
        t = build_table("101", B(18))
        for x, k in t.k_of.items():
            assert t.m_of[x] >= Fraction(1, 2 ** k)
        assert t.kraft_sum() <= 1

    def test_monotone_in_budget(self):
        small = build_table("", B(12, 10, 8))
        for b in (B(15, 10, 8), B(12, 20, 8), B(12, 10, 16), B(18)):
            big = build_table("", b)
            for x in small.k_of:
                assert big.k(x) <= small.k(x)
                assert big.m(x) >= small.m(x)


@settings(max_examples=200, deadline=None)
@given(program=st.text("01", max_size=24), aux=st.text("01", max_size=6))
def test_run_matches_oracle(program, aux):
    r = run(program, aux, B(24))
    o = bruteforce.interpret(program, aux, max_len=24)
    if o is None:
        assert isinstance(r, NonHalting)
    else:
        assert (len(r.program), r.output) == o


@settings(max_examples=100, deadline=None)
@given(prefix=st.text("01", max_size=15), suffix=st.text("01", min_size=1, max_size=9))
def test_no_halting_program_extends_another(prefix, suffix):
    r = run(prefix)
    if isinstance(r, HaltingRecord) and r.program == prefix:
        longer = run(prefix + suffix, "", B(24))
        assert longer.program == prefix


def _levin_slacks(table, strings):
    slacks, undefined = [], 0
    for x in strings:
        for y in strings:
            for z in strings:
                try:
                    slacks.append(table.info(x, y) - table.info(pair(x, z), y))
                except UndefinedInformation:
                    undefined += 1
    return slacks, undefined


def test_levin_monotonicity_regression():
    # i(x:y) <= i(<x>z : y) + c; c is observed and pinned, undefined triples are skipped
    slacks, undefined = _levin_slacks(build_table("", B(18)), all_strings(4))
    assert (len(slacks), undefined) == (13, 29778)
    assert max(slacks) == 6

    slacks, undefined = _levin_slacks(build_table("", B(33)), all_strings(2))
    assert (len(slacks), undefined) == (103, 240)
    assert (min(slacks), max(slacks)) == (3, 12)
