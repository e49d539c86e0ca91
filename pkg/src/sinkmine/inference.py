"""Constraint generation and score inference over mined flow triples.

For every (sanitizer, sink) representation pair observed in a project's
triples, the score of the pair is bounded by the scores of the source
representations flowing into it plus a softness constant:

    n_san + n_snk <= sum_i n_src_i + C + eps

with two analogous families summing over sinks for (src, san) pairs and
over sanitizers for (src, snk) pairs. Known representations are pinned
hard (1 for their kind, 0 for the others). Minimizing the eps total plus a
small lambda-weighted sum of all scores yields per-project scores, which
are then averaged over the projects where each representation appears.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import lp
from .lp import Infeasible, NumericFailure
from .propagation import FlowTriple

DEFAULT_C = 0.75
DEFAULT_LAMBDA = 0.1
FEASIBILITY_TOL = 1e-6

KINDS = ("src", "san", "snk")

Var = tuple[str, str]  # (representation, kind)


class ConflictingKnownLabels(ValueError):
    """A representation is seeded as two different kinds at once."""


@dataclass(frozen=True)
class Constraint:
    """lhs[0] + lhs[1] <= sum(rhs) + C + eps"""
    lhs: tuple[Var, Var]
    rhs: tuple[Var, ...]


@dataclass
class ConstraintSystem:
    variables: list[Var]
    constraints: list[Constraint]
    pins: dict[Var, float]
    c_param: float = DEFAULT_C
    lam: float = DEFAULT_LAMBDA


@dataclass
class SolveResult:
    scores: dict[Var, float]
    eps: list[float]
    objective: float


def seed_pins(seed_specs: list[dict]) -> dict[str, str]:
    """Map rep -> known kind, rejecting contradictory seeds."""
    known: dict[str, str] = {}
    for spec in seed_specs:
        rep, kind = spec["rep"], spec["kind"]
        if kind not in KINDS:
            raise ValueError(f"unknown spec kind {kind!r}")
        if known.get(rep, kind) != kind:
            raise ConflictingKnownLabels(
                f"{rep!r} seeded as both {known[rep]!r} and {kind!r}")
        known[rep] = kind
    return known


def build_constraints(triples: list[FlowTriple], rep_of: dict[str, str],
                      seed_specs: list[dict] | None = None,
                      c_param: float = DEFAULT_C,
                      lam: float = DEFAULT_LAMBDA) -> ConstraintSystem:
    """Synthesize the three constraint families from one project's triples.

    Variables exist for every (rep, kind) slot occurring in a triple role;
    pins only apply to slots that exist.
    """
    variables: set[Var] = set()
    by_san_snk: dict[tuple[str, str], set[str]] = {}
    by_src_san: dict[tuple[str, str], set[str]] = {}
    by_src_snk: dict[tuple[str, str], set[str]] = {}
    for t in triples:
        src, san, snk = rep_of[t.src], rep_of[t.san], rep_of[t.snk]
        variables.update(((src, "src"), (san, "san"), (snk, "snk")))
        by_san_snk.setdefault((san, snk), set()).add(src)
        by_src_san.setdefault((src, san), set()).add(snk)
        by_src_snk.setdefault((src, snk), set()).add(san)

    constraints: list[Constraint] = []
    for (san, snk), srcs in sorted(by_san_snk.items()):
        constraints.append(Constraint(
            lhs=((san, "san"), (snk, "snk")),
            rhs=tuple((s, "src") for s in sorted(srcs))))
    for (src, san), snks in sorted(by_src_san.items()):
        constraints.append(Constraint(
            lhs=((src, "src"), (san, "san")),
            rhs=tuple((k, "snk") for k in sorted(snks))))
    for (src, snk), sans in sorted(by_src_snk.items()):
        constraints.append(Constraint(
            lhs=((src, "src"), (snk, "snk")),
            rhs=tuple((a, "san") for a in sorted(sans))))

    pins: dict[Var, float] = {}
    if seed_specs:
        known = seed_pins(seed_specs)
        for rep, kind in known.items():
            for k in KINDS:
                var = (rep, k)
                if var in variables:
                    pins[var] = 1.0 if k == kind else 0.0

    return ConstraintSystem(variables=sorted(variables), constraints=constraints,
                            pins=pins, c_param=c_param, lam=lam)


def solve_system(system: ConstraintSystem) -> SolveResult:
    """Solve one project's LP and return all variable values.

    The objective is sum(eps) + lambda * sum(free variable scores); pinned
    variables are constants and do not contribute to the reported value.
    """
    free = [v for v in system.variables if v not in system.pins]
    index = {v: i for i, v in enumerate(free)}
    n_free = len(free)
    n_eps = len(system.constraints)
    ncols = n_free + n_eps

    rows: list[np.ndarray] = []
    rhs: list[float] = []
    for ci, con in enumerate(system.constraints):
        row = np.zeros(ncols)
        bound = system.c_param
        for var in con.lhs:
            if var in index:
                row[index[var]] += 1.0
            else:
                bound -= system.pins.get(var, 0.0)
        for var in con.rhs:
            if var in index:
                row[index[var]] -= 1.0
            else:
                bound += system.pins.get(var, 0.0)
        row[n_free + ci] = -1.0
        rows.append(row)
        rhs.append(bound)
    for i in range(n_free):  # scores live in [0, 1]
        row = np.zeros(ncols)
        row[i] = 1.0
        rows.append(row)
        rhs.append(1.0)

    cost = np.zeros(ncols)
    cost[:n_free] = system.lam
    cost[n_free:] = 1.0

    if rows:
        x, objective = lp.solve(cost, np.vstack(rows), np.array(rhs))
    else:
        x, objective = np.zeros(ncols), 0.0

    scores = dict(system.pins)
    for v, i in index.items():
        scores[v] = float(x[i])
    eps = [float(x[n_free + ci]) for ci in range(n_eps)]
    _check_feasible(system, scores, eps)
    return SolveResult(scores=scores, eps=eps, objective=objective)


def _check_feasible(system: ConstraintSystem, scores: dict[Var, float],
                    eps: list[float]) -> None:
    for ci, con in enumerate(system.constraints):
        lhs = sum(scores[v] for v in con.lhs)
        rhs = sum(scores[v] for v in con.rhs) + system.c_param + eps[ci]
        if lhs > rhs + FEASIBILITY_TOL:
            raise NumericFailure(
                f"constraint {ci} violated by {lhs - rhs:.3g} after solve")


def infer_project(triples: list[FlowTriple], rep_of: dict[str, str],
                  seed_specs: list[dict] | None = None,
                  c_param: float = DEFAULT_C,
                  lam: float = DEFAULT_LAMBDA) -> dict[str, dict[str, float]]:
    """Per-project scores: rep -> kind -> value."""
    system = build_constraints(triples, rep_of, seed_specs, c_param, lam)
    result = solve_system(system)
    out: dict[str, dict[str, float]] = {}
    for (rep, kind), value in result.scores.items():
        out.setdefault(rep, {})[kind] = value
    return out


def average_specs(per_project: list[dict[str, dict[str, float]]]) -> list[dict]:
    """Arithmetic mean per (rep, kind) over the projects where it appears."""
    sums: dict[Var, float] = {}
    counts: dict[Var, int] = {}
    for scores in per_project:
        for rep, kinds in scores.items():
            for kind, value in kinds.items():
                sums[(rep, kind)] = sums.get((rep, kind), 0.0) + value
                counts[(rep, kind)] = counts.get((rep, kind), 0) + 1
    out = []
    for (rep, kind) in sorted(sums):
        out.append({"rep": rep, "kind": kind,
                    "score": sums[(rep, kind)] / counts[(rep, kind)]})
    return out


def dump_lp(system: ConstraintSystem) -> str:
    """Plain-text rendering of the LP, for debugging solver issues."""
    lines = ["# variables"]
    for rep, kind in system.variables:
        pin = system.pins.get((rep, kind))
        bound = f"= {pin}" if pin is not None else "in [0, 1]"
        lines.append(f"var n[{rep}][{kind}] {bound}")
    lines.append("# constraints: lhs <= rhs + C + eps_i, C = %g" % system.c_param)
    for i, con in enumerate(system.constraints):
        lhs = " + ".join(f"n[{r}][{k}]" for r, k in con.lhs)
        rhs = " + ".join(f"n[{r}][{k}]" for r, k in con.rhs) or "0"
        lines.append(f"c{i}: {lhs} <= {rhs} + C + eps_{i}")
    lines.append(f"# objective: min sum(eps) + {system.lam} * sum(free scores)")
    return "\n".join(lines) + "\n"
