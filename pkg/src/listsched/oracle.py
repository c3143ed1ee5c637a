"""Exact optimal makespan for scheduling on identical machines.

Minimizing makespan on identical machines is NP-hard, so the exact solver
is branch and bound over job-to-machine assignments, jobs largest first,
seeded with the LPT schedule as incumbent. Two shortcuts keep common cases
instant: a schedule matching max(total/m, largest job) is provably optimal,
and the structured families have closed-form optima.
"""
from __future__ import annotations

from dataclasses import dataclass

from .model import ArrivalOrder, Instance, Schedule, Time
from .online import Lsa, run_online

__all__ = [
    "OPT_EXACT",
    "OPT_CERTIFIED",
    "OPT_ANALYTIC",
    "OPT_LOWER_BOUND_ONLY",
    "OptResult",
    "lower_bound",
    "lpt_order",
    "lpt_makespan",
    "opt_exact",
    "opt_structured",
]

OPT_EXACT = "exact"
OPT_CERTIFIED = "certified-by-bound"
OPT_ANALYTIC = "analytic-class"
OPT_LOWER_BOUND_ONLY = "lower-bound-only"

DEFAULT_NODE_BUDGET = 10_000_000


@dataclass(frozen=True)
class OptResult:
    """Optimal makespan (or best known bound) with its provenance.

    kind is one of: 'exact' (search completed), 'certified-by-bound' (a
    schedule met the load lower bound, optimal by certificate),
    'analytic-class' (closed form for a structured family), or
    'lower-bound-only' (search aborted; value is only a lower bound and
    ratios against it overestimate the truth).
    """

    value: Time
    kind: str
    nodes_explored: int

    @property
    def is_exact(self) -> bool:
        return self.kind in (OPT_EXACT, OPT_CERTIFIED, OPT_ANALYTIC)


def lower_bound(instance: Instance) -> Time:
    """max(total load / m, largest job size): no schedule finishes sooner."""
    total = Time(0)
    largest = instance.jobs[0].size
    for job in instance.jobs:
        total = total + job.size
        if largest < job.size:
            largest = job.size
    average = total / instance.machines
    return average if largest < average else largest


def lpt_order(instance: Instance) -> ArrivalOrder:
    """Jobs sorted by non-increasing size, ties by ascending id."""
    ascending = sorted(instance.jobs, key=lambda job: job.id)
    # sorted() is stable, so equal sizes keep their ascending-id order
    descending = sorted(ascending, key=lambda job: job.size, reverse=True)
    return ArrivalOrder(tuple(job.id for job in descending))


def lpt_makespan(instance: Instance) -> tuple[Time, Schedule]:
    """Greedy least-loaded assignment over the LPT order."""
    schedule, _ = run_online(instance, lpt_order(instance), Lsa())
    return schedule.makespan, schedule


def opt_exact(
    instance: Instance,
    node_budget: int = DEFAULT_NODE_BUDGET,
    symmetry_breaking: bool = True,
) -> OptResult:
    """Exact optimal makespan via branch and bound.

    Nodes are placement attempts. If the budget runs out the result
    degrades honestly to kind='lower-bound-only' with the load lower
    bound as value. symmetry_breaking=False disables the machine-symmetry
    and equal-load prunes; it exists so tests can confirm the prunes never
    change the value.
    """
    if node_budget < 0:
        raise ValueError("node_budget must be non-negative")
    lb = lower_bound(instance)
    incumbent, _ = lpt_makespan(instance)
    if incumbent == lb:
        return OptResult(incumbent, OPT_CERTIFIED, 0)

    m = instance.machines
    sizes = sorted((job.size for job in instance.jobs), reverse=True)
    n = len(sizes)
    state = {"best": incumbent, "nodes": 0, "aborted": False}
    loads = [Time(0)] * m

    def dfs(i: int, used: int) -> None:
        if state["aborted"] or state["best"] == lb:
            return
        if i == n:
            # every placement along this branch stayed below the incumbent
            state["best"] = max(loads)
            return
        size = sizes[i]
        tried: list[Time] = []
        # a job may open at most one fresh machine; the rest are symmetric
        limit = m
        if symmetry_breaking and used < m:
            limit = used + 1
        for k in range(limit):
            load = loads[k]
            if symmetry_breaking:
                duplicate = False
                for t in tried:
                    if t == load:
                        duplicate = True
                        break
                if duplicate:
                    continue
                tried.append(load)
            new = load + size
            if not new < state["best"]:
                continue
            state["nodes"] += 1
            if state["nodes"] > node_budget:
                state["aborted"] = True
                return
            loads[k] = new
            dfs(i + 1, used + 1 if k == used else used)
            loads[k] = load
            if state["aborted"] or state["best"] == lb:
                return

    dfs(0, 0)
    if state["aborted"]:
        return OptResult(lb, OPT_LOWER_BOUND_ONLY, state["nodes"])
    kind = OPT_CERTIFIED if state["best"] == lb else OPT_EXACT
    return OptResult(state["best"], kind, state["nodes"])


def opt_structured(family: str, m: int) -> Time:
    """Closed-form optimum for the two structured worst-case families.

    class1 ((m-1)^2 unit jobs plus one size-m job) packs to exactly m;
    class2 (m(m-1) unit jobs plus one size-m^2 job) packs to exactly m^2.
    """
    if m < 2:
        raise ValueError("m must be at least 2")
    if family == "class1":
        return Time(m)
    if family == "class2":
        return Time(m * m)
    raise ValueError(f"no closed-form optimum for family {family!r}")
