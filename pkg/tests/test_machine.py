from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import sign
from scitower import machine as mc
from scitower.errors import BranchExplosion

SGN = mc.sgn_program()
rationals = st.fractions(min_value=-4, max_value=4, max_denominator=200)


def stair_program():
    return mc.parse_program(mc.staircase("r0", "r1", "r2", "r3", "st") + "\n        HALT r1")


def test_sgn_exact_examples():
    assert mc.run_exact(SGN, inputs=[-3]) == mc.Halted((Fraction(-1),))
    assert mc.run_exact(SGN, inputs=[0]) == mc.Halted((Fraction(0),))
    assert mc.run_exact(SGN, inputs=[Fraction(1, 9)]) == mc.Halted((Fraction(1),))


def test_sgn_fram_far_input_single_valued():
    for k in (0, 1, 3, 7, 100):
        assert mc.run_fram(SGN, inputs=[-3], k=k) == {mc.Halted((Fraction(-1),))}


def test_sgn_fram_band_input_forks():
    k = 3
    out = mc.run_fram(SGN, inputs=[Fraction(1, 2 * (k + 1))], k=k)
    assert {o.output[0] for o in out} == {0, 1}


def test_undefined_query():
    prog = mc.parse_program("""
        LOAD1 r0
        LOAD1 r1
        ADD r1 r1 r0   ; 2
        DIV r0 r0 r1   ; 1/2
        ADD r0 r0 r1   ; 5/2
        QUERY r0 r4 r5
        HALT r4 r5
    """)
    out = mc.run_exact(prog, oracle={2: (1, 0)})
    assert out == mc.UndefinedQuery(5)


def test_query_reads_oracle():
    prog = mc.parse_program("LOAD1 r0\nADD r0 r0 r0\nQUERY r0 r1 r2\nHALT r1 r2")
    oracle = mc.load_oracle_csv("index,re,im\n2,3/4,-1/5\n")
    assert mc.run_exact(prog, oracle) == mc.Halted((Fraction(3, 4), Fraction(-1, 5)))
    with pytest.raises(LookupError):
        mc.run_exact(prog, {0: (0, 0)})


def test_division_by_zero_diverges():
    prog = mc.parse_program("LOAD1 r0\nLOAD0 r1\nDIV r2 r0 r1\nHALT r2")
    out = mc.run_exact(prog)
    assert isinstance(out, mc.Diverged) and "division" in out.reason


def test_fuel_exhaustion():
    prog = mc.parse_program("top: JUMP top")
    assert mc.run_exact(prog, fuel=50) == mc.Diverged("fuel exhausted")
    with pytest.raises(ValueError):
        mc.run_exact(prog, fuel=0)


def test_natural_registers_and_monus():
    prog = mc.parse_program("LOAD1 n0\nLOAD0 n1\nSUB n2 n1 n0\nHALT n2")
    assert mc.run_exact(prog) == mc.Halted((0,))
    assert mc.run_fram(prog, k=0) == {mc.Halted((0,))}


@pytest.mark.parametrize("text", [
    "FOO r0", "LOAD0 x1", "ADD r0 n1 r2", "DIV n0 n1 n2", "JLT r0 n0 0",
    "JUMP 7", "JUMP nowhere", "HALT r3 r1", "QUERY n0 r1 r2", "LOAD0 r0 r1",
])
def test_parse_errors(text):
    with pytest.raises(mc.ProgramError):
        mc.parse_program(text)


def test_staircase_exact_and_fram():
    prog = stair_program()
    assert mc.run_exact(prog, inputs=[Fraction(7, 2)]) == mc.Halted((Fraction(3),))
    out = mc.run_fram(prog, inputs=[Fraction(59, 20)], k=9)
    assert {o.output[0] for o in out} == {2, 3}


@given(st.fractions(min_value=0, max_value=20, max_denominator=50))
def test_staircase_is_floor(x):
    import math
    assert mc.run_exact(stair_program(), inputs=[x]).output[0] == math.floor(x)


@given(rationals)
def test_sgn_exact_matches_sign(x):
    assert mc.run_exact(SGN, inputs=[x]).output[0] == sign(x)


@given(rationals, st.integers(0, 10))
def test_fram_contains_exact(x, k):
    for prog in (SGN, stair_program()):
        assert mc.run_exact(prog, inputs=[abs(x)]) in mc.run_fram(prog, inputs=[abs(x)], k=k)


@given(rationals, st.integers(0, 10))
def test_fram_equals_exact_when_margins_exceed_precision(x, k):
    for prog, inp in ((SGN, [x]), (stair_program(), [abs(x)])):
        audit = []
        exact = mc.run_exact(prog, inputs=inp, audit=audit)
        if all(m > Fraction(1, k + 1) for m in audit):
            assert mc.run_fram(prog, inputs=inp, k=k) == {exact}


@settings(max_examples=50)
@given(st.fractions(min_value=0, max_value=6, max_denominator=20), st.integers(1, 200))
def test_fuel_monotone(x, fuel):
    prog = stair_program()
    out = mc.run_exact(prog, inputs=[x], fuel=fuel)
    if isinstance(out, mc.Halted):
        assert mc.run_exact(prog, inputs=[x], fuel=fuel + 37) == out


def test_branch_explosion_guard():
    body = "\n".join(f"JLT r0 r1 {i + 1}" for i in range(12))
    prog = mc.parse_program(body + "\nHALT r0")
    with pytest.raises(BranchExplosion):
        mc.run_fram(prog, inputs=[0, Fraction(1, 2)], k=0, max_paths=100)
    assert len(mc.run_fram(prog, inputs=[0, Fraction(1, 2)], k=0)) == 1


def test_fram_rejects_negative_precision():
    with pytest.raises(ValueError):
        mc.run_fram(SGN, inputs=[0], k=-1)
