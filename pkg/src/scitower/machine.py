"""Parameter-free oracle register machines over exact rationals.

Programs are lists of :class:`Instr` over real registers ``r0, r1, ...``
(holding :class:`~fractions.Fraction`) and natural registers ``n0, n1, ...``.
The only constants are 0 and 1.  Two semantics share one interpreter:

* exact: comparisons of real registers are decided exactly, so a run is
  deterministic;
* FRAM at precision ``k``: ``x <_k y`` may answer TRUE iff ``x < y`` and
  FALSE iff ``x > y - 1/(k+1)``.  Where both answers are allowed the run
  forks and the result is the set of outcomes over all paths.

Comparisons of natural registers are exact under both semantics.
"""
from __future__ import annotations

import csv
import io
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence, Union

from .errors import BranchExplosion

MAX_PATHS = 2 ** 20

ARITH = {"ADD", "SUB", "MUL", "DIV"}
BRANCH = {"JLT", "JEQ"}
OPCODES = {"LOAD0", "LOAD1", "JUMP", "QUERY", "HALT"} | ARITH | BRANCH

_REG = re.compile(r"^([rn])(\d+)$")

__all__ = [
    "Instr", "MachineProgram", "Halted", "Diverged", "UndefinedQuery", "RunOutcome",
    "parse_program", "run_exact", "run_fram", "load_oracle_csv", "staircase",
    "SGN_ASM", "sgn_program", "ProgramError",
]


class ProgramError(ValueError):
    """Malformed program text or instruction operands."""


@dataclass(frozen=True)
class Instr:
    op: str
    args: tuple
    line: int = 0


@dataclass(frozen=True)
class MachineProgram:
    instructions: tuple
    labels: dict = field(default_factory=dict, compare=False)

    def __len__(self) -> int:
        return len(self.instructions)


@dataclass(frozen=True)
class Halted:
    output: tuple


@dataclass(frozen=True)
class Diverged:
    reason: str


@dataclass(frozen=True)
class UndefinedQuery:
    step: int


RunOutcome = Union[Halted, Diverged, UndefinedQuery]


def _reg(tok: str, line: int) -> tuple:
    m = _REG.match(tok)
    if not m:
        raise ProgramError(f"line {line}: expected a register, got {tok!r}")
    return (m.group(1), int(m.group(2)))


def parse_program(text: str) -> MachineProgram:
    """Parse assembly: one instruction per line, ``;`` comments, ``label:`` prefixes.

    Jump targets are labels or absolute instruction indices.
    """
    raw, labels = [], {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split(";", 1)[0].strip()
        while ":" in line:
            lab, line = line.split(":", 1)
            lab, line = lab.strip(), line.strip()
            if not lab.isidentifier():
                raise ProgramError(f"line {lineno}: bad label {lab!r}")
            if lab in labels:
                raise ProgramError(f"line {lineno}: duplicate label {lab!r}")
            labels[lab] = len(raw)
        if line:
            raw.append((lineno, line.replace(",", " ").split()))
    instrs = []
    for lineno, toks in raw:
        op, ops = toks[0].upper(), toks[1:]
        instrs.append(_build(op, ops, lineno, labels))
    prog = MachineProgram(tuple(instrs), dict(labels))
    for ins in prog.instructions:
        if ins.op in BRANCH | {"JUMP"}:
            tgt = ins.args[-1]
            if not 0 <= tgt < len(prog):
                raise ProgramError(f"line {ins.line}: jump target {tgt} out of range")
    return prog


def _target(tok: str, labels: dict, line: int) -> int:
    if tok in labels:
        return labels[tok]
    try:
        return int(tok)
    except ValueError:
        raise ProgramError(f"line {line}: unknown label {tok!r}") from None


def _build(op: str, ops: list, line: int, labels: dict) -> Instr:
    def arity(k):
        if len(ops) != k:
            raise ProgramError(f"line {line}: {op} takes {k} operands, got {len(ops)}")

    if op not in OPCODES:
        raise ProgramError(f"line {line}: unknown instruction {op!r}")
    if op in ("LOAD0", "LOAD1"):
        arity(1)
        return Instr(op, (_reg(ops[0], line),), line)
    if op in ARITH:
        arity(3)
        regs = tuple(_reg(t, line) for t in ops)
        if len({r[0] for r in regs}) != 1:
            raise ProgramError(f"line {line}: {op} mixes real and natural registers")
        if op == "DIV" and regs[0][0] == "n":
            raise ProgramError(f"line {line}: DIV is only defined on real registers")
        return Instr(op, regs, line)
    if op in BRANCH:
        arity(3)
        a, b = _reg(ops[0], line), _reg(ops[1], line)
        if a[0] != b[0]:
            raise ProgramError(f"line {line}: {op} compares registers of different kinds")
        return Instr(op, (a, b, _target(ops[2], labels, line)), line)
    if op == "JUMP":
        arity(1)
        return Instr(op, (_target(ops[0], labels, line),), line)
    if op == "QUERY":
        arity(3)
        regs = tuple(_reg(t, line) for t in ops)
        if any(r[0] != "r" for r in regs):
            raise ProgramError(f"line {line}: QUERY uses real registers")
        return Instr(op, regs, line)
    # HALT first [last]
    if len(ops) not in (1, 2):
        raise ProgramError(f"line {line}: HALT takes one register or a span")
    a = _reg(ops[0], line)
    b = _reg(ops[-1], line)
    if a[0] != b[0] or b[1] < a[1]:
        raise ProgramError(f"line {line}: bad HALT span {ops}")
    return Instr(op, (a, b), line)


# comparison oracles: return the tuple of branch decisions allowed

def _exact_cmp(op, kind, x, y):
    return ((x < y),) if op == "JLT" else ((x == y),)


def _fram_cmp(k: int):
    delta = Fraction(1, k + 1)

    def cmp(op, kind, x, y):
        if kind == "n":
            return _exact_cmp(op, kind, x, y)
        if op == "JLT":
            allowed = []
            if x < y:
                allowed.append(True)
            if x > y - delta:
                allowed.append(False)
        else:
            allowed = []
            if abs(x - y) < delta:
                allowed.append(True)
            if x != y:
                allowed.append(False)
        return tuple(allowed)

    return cmp


@dataclass
class _State:
    pc: int
    regs: dict
    steps: int = 0

    def fork(self) -> "_State":
        return _State(self.pc, dict(self.regs), self.steps)


def _get(regs: dict, r: tuple):
    return regs.get(r, Fraction(0) if r[0] == "r" else 0)


def _explore(prog: MachineProgram, oracle, inputs: Sequence, fuel: int,
             cmp: Callable, audit: Optional[list] = None,
             max_paths: int = MAX_PATHS) -> set:
    if fuel < 1:
        raise ValueError("fuel must be at least 1")
    regs = {("r", i): Fraction(v) for i, v in enumerate(inputs)}
    stack = [_State(0, regs)]
    outcomes, paths = set(), 0
    while stack:
        st = stack.pop()
        out = None
        while out is None:
            if st.steps >= fuel:
                out = Diverged("fuel exhausted")
                break
            if not 0 <= st.pc < len(prog):
                out = Diverged("ran past the last instruction")
                break
            ins = prog.instructions[st.pc]
            st.steps += 1
            op, a = ins.op, ins.args
            if op == "LOAD0":
                st.regs[a[0]] = Fraction(0) if a[0][0] == "r" else 0
            elif op == "LOAD1":
                st.regs[a[0]] = Fraction(1) if a[0][0] == "r" else 1
            elif op in ARITH:
                x, y = _get(st.regs, a[1]), _get(st.regs, a[2])
                if op == "ADD":
                    v = x + y
                elif op == "SUB":
                    v = x - y if a[0][0] == "r" else max(0, x - y)
                elif op == "MUL":
                    v = x * y
                else:
                    if y == 0:
                        out = Diverged("division by zero")
                        break
                    v = x / y
                st.regs[a[0]] = v
            elif op in BRANCH:
                x, y = _get(st.regs, a[0]), _get(st.regs, a[1])
                if audit is not None and a[0][0] == "r":
                    audit.append(abs(x - y))
                choices = cmp(op, a[0][0], x, y)
                if len(choices) == 2:
                    other = st.fork()
                    other.pc = a[2] if choices[1] else st.pc + 1
                    stack.append(other)
                st.pc = a[2] if choices[0] else st.pc + 1
                continue
            elif op == "JUMP":
                st.pc = a[0]
                continue
            elif op == "QUERY":
                idx = _get(st.regs, a[0])
                if idx.denominator != 1 or idx < 0:
                    out = UndefinedQuery(st.pc)
                    break
                try:
                    re_, im_ = oracle[int(idx)]
                except (KeyError, IndexError):
                    raise LookupError(f"oracle has no entry for index {int(idx)}") from None
                st.regs[a[1]] = Fraction(re_)
                st.regs[a[2]] = Fraction(im_)
            else:  # HALT
                lo, hi = a
                out = Halted(tuple(_get(st.regs, (lo[0], i)) for i in range(lo[1], hi[1] + 1)))
                break
            st.pc += 1
        outcomes.add(out)
        paths += 1
        if paths > max_paths:
            raise BranchExplosion(f"more than {max_paths} computation paths")
    return outcomes


def run_exact(prog: MachineProgram, oracle=None, inputs: Sequence = (), fuel: int = 10_000,
              audit: Optional[list] = None) -> RunOutcome:
    """Deterministic run; ``audit`` collects ``|x - y|`` for each real comparison."""
    (out,) = _explore(prog, oracle or {}, inputs, fuel, _exact_cmp, audit)
    return out


def run_fram(prog: MachineProgram, oracle=None, inputs: Sequence = (), k: int = 0,
             fuel: int = 10_000, max_paths: int = MAX_PATHS) -> set:
    """All outcomes reachable under the precision-``k`` comparison relation."""
    if k < 0:
        raise ValueError("precision k must be nonnegative")
    return _explore(prog, oracle or {}, inputs, fuel, _fram_cmp(k), None, max_paths)


def load_oracle_csv(text: str) -> dict:
    """Rows ``index,re,im`` with rationals written as ``num/den``."""
    table = {}
    for r in csv.reader(io.StringIO(text)):
        if not r or r[0].strip().startswith("#"):
            continue
        try:
            idx = int(r[0])
        except ValueError:
            if not table:  # header
                continue
            raise
        table[idx] = (Fraction(r[1].strip()), Fraction(r[2].strip()))
    return table


def staircase(src: str, dst: str, one: str, nxt: str, label: str) -> str:
    """Assembly for ``dst := #{j >= 1 : not (src < j)}``, i.e. ``floor(src)`` for ``src >= 0``.

    Under the FRAM semantics each test ``src <_k j`` may go either way near
    integers, which gives the multi-valued staircase.
    """
    return "\n".join([
        f"        LOAD0 {dst}",
        f"        LOAD1 {one}",
        f"{label}_loop: ADD {nxt} {dst} {one}",
        f"        JLT {src} {nxt} {label}_done",
        f"        LOAD0 {dst}",
        f"        ADD {dst} {nxt} {dst}",
        f"        JUMP {label}_loop",
        f"{label}_done: LOAD0 {nxt}",
    ])


SGN_ASM = """\
; sign of the input in r0
        LOAD0 r1
        JLT r0 r1 neg     ; x < 0
        JLT r1 r0 pos     ; 0 < x
        HALT r1           ; neither: x = 0
neg:    LOAD1 r2
        SUB r2 r1 r2
        HALT r2
pos:    LOAD1 r2
        HALT r2
"""


def sgn_program() -> MachineProgram:
    return parse_program(SGN_ASM)
