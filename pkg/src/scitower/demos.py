"""Report-producing scenarios behind ``scitower demo``."""
from __future__ import annotations

from fractions import Fraction
from typing import Optional

import numpy as np

from . import baire, machine
from .framework import weak_hansen as wh


def sgn_band_witness(k: int, prog=None, resolution: int = 8) -> Optional[Fraction]:
    """First input in ``(-1/(k+1), 1/(k+1))`` where FRAM sgn is multi-valued."""
    prog = prog or machine.sgn_program()
    band = resolution * (k + 1)
    # scan outward from the band edge towards 0
    for j in range(resolution - 1, 0, -1):
        for x in (Fraction(j, band), Fraction(-j, band)):
            if len(machine.run_fram(prog, inputs=[x], k=k)) >= 2:
                return x
    return None


def sgn_gap_rows(ks=(0, 1, 3, 7), resolution: int = 8) -> list[dict]:
    """Scan ``[-2/(k+1), 2/(k+1)]`` and compare exact with FRAM outcome sets."""
    prog = machine.sgn_program()
    rows = []
    for k in ks:
        delta = Fraction(1, k + 1)
        for j in range(-2 * resolution, 2 * resolution + 1):
            x = j * delta / resolution
            exact = machine.run_exact(prog, inputs=[x])
            fram = machine.run_fram(prog, inputs=[x], k=k)
            rows.append({
                "k": k, "input": x, "in_band": abs(x) < delta,
                "exact": _fmt_outcome(exact), "fram_outcomes": len(fram),
                "fram": sorted(_fmt_outcome(o) for o in fram),
            })
    return rows


def sgn_gap_summary(ks=(0, 1, 3, 7)) -> list[dict]:
    prog = machine.sgn_program()
    out = []
    for k in ks:
        x = sgn_band_witness(k, prog)
        out.append({
            "k": k, "witness": str(x),
            "exact": _fmt_outcome(machine.run_exact(prog, inputs=[x])),
            "fram_outcomes": len(machine.run_fram(prog, inputs=[x], k=k)),
        })
    return out


def _fmt_outcome(o) -> str:
    if isinstance(o, machine.Halted):
        return "halted(" + ",".join(str(v) for v in o.output) + ")"
    if isinstance(o, machine.Diverged):
        return f"diverged({o.reason})"
    return f"undefined-query(pc={o.step})"


def weak_hansen_report(max_row: int = 8, max_q: int = 12, max_m: int = 8,
                       pairs: int = 200, seed: int = 0) -> list[dict]:
    rng = np.random.default_rng(seed)
    prefix = wh.random_prefix(rng, 64)
    rows = []
    for n in range(1, max_row + 1):
        inter, _ = wh.weak_hansen_instance(n, 1, prefix)
        base = wh.random_bit_matrix(rng, max_row + 1, max_q + 4)
        refuted = total = 0
        for q in range(max_q + 1):
            found = wh.violation_finder(inter, q, base)
            total += len(found)
            refuted += sum(v is not None for v in found.values())
        deep_pass = 0
        for m in range(1, max_m + 1):
            _, deep = wh.weak_hansen_instance(n, m, prefix)
            ps = wh.random_pairs(rng, deep, pairs, rows=max_row + 1, cols=max_q + 4)
            deep_pass += wh.check_deep_estimator(deep, ps).valid
        rows.append({"n": n, "candidate_sets": total, "refuted": refuted,
                     "deep_levels": max_m, "deep_levels_passing": deep_pass})
    return rows


FAMILIES = ("step", "alternating", "constant", "sign")


def lim_stage_trace(family: str = "step", coordinate: int = 5, budget: int = 40,
                    value: str = "1/1024") -> tuple[list, object]:
    """Stage trace and verdict for one coordinate of a named family."""
    if family == "sign":
        run = baire.fmc_run(baire.sign_stage, baire.cauchy_name(Fraction(value)), budget)
        return run.trace, run
    gens = {
        "step": lambda n, k: 1 if n >= k else 0,
        "alternating": lambda n, k: n % 2,
        "constant": lambda n, k: 42,
    }
    if family not in gens:
        raise ValueError(f"unknown family {family!r}; choose from {', '.join(FAMILIES)}")
    p = baire.StageFamily(gens[family])
    trace = [p(n, coordinate) for n in range(budget + 1)]
    return trace, baire.lim_at(p, coordinate, budget)
