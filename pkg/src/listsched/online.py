"""Online list scheduling: place each arriving job immediately and forever.

A policy sees only the current machine loads and the arriving job; it never
sees the future of the sequence. The reference policy is greedy least-loaded
assignment, which is what all ratio guarantees here are stated for.
"""
from __future__ import annotations

import heapq
import json
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Optional, Sequence

from .model import ArrivalOrder, Instance, Job, Schedule, Time, format_time

__all__ = [
    "OnlinePolicy",
    "Lsa",
    "lsa_step",
    "TraceStep",
    "run_online",
    "trace_jsonl",
]


class OnlinePolicy(ABC):
    """Decision surface for an online scheduler.

    Implementations get the current loads and the arriving job, nothing
    else, and return the 1-based index of the machine that receives it.
    """

    name: str = "policy"

    @abstractmethod
    def choose(self, loads: Sequence[Time], job: Job) -> int:
        raise NotImplementedError


def lsa_step(loads: Sequence[Time], job: Optional[Job] = None) -> int:
    """Least-loaded machine, lowest index on ties (1-based).

    The job argument is accepted for signature compatibility with policies
    but does not influence the greedy choice.
    """
    if len(loads) < 2:
        raise ValueError("need at least two machines")
    best = 0
    for k in range(1, len(loads)):
        if loads[k] < loads[best]:
            best = k
    return best + 1


class Lsa(OnlinePolicy):
    """Greedy least-loaded assignment.

    tie_break selects the machine among equal minimum loads: 'low' takes
    the lowest index, 'high' the highest. Makespans of the structured
    worst-case sequences are identical either way; the variant exists to
    demonstrate that.
    """

    def __init__(self, tie_break: str = "low"):
        if tie_break not in ("low", "high"):
            raise ValueError(f"tie_break must be 'low' or 'high', not {tie_break!r}")
        self.tie_break = tie_break
        self.name = "LSA" if tie_break == "low" else "LSA-high"

    def choose(self, loads: Sequence[Time], job: Optional[Job] = None) -> int:
        if self.tie_break == "low":
            return lsa_step(loads, job)
        if len(loads) < 2:
            raise ValueError("need at least two machines")
        best = 0
        for k in range(1, len(loads)):
            if not loads[best] < loads[k]:
                best = k
        return best + 1


@dataclass(frozen=True)
class TraceStep:
    """One placement: the job, the machine chosen, loads before and after."""

    job_id: int
    machine: int
    loads_before: tuple[Time, ...]
    loads_after: tuple[Time, ...]


def run_online(
    instance: Instance,
    order: ArrivalOrder,
    policy: Optional[OnlinePolicy] = None,
) -> tuple[Schedule, list[TraceStep]]:
    """Feed the jobs to the policy in arrival order and record every step.

    The order must be a permutation of the instance's job ids; that is
    checked before any placement happens. The returned trace always has one
    step per job, in arrival order.
    """
    if policy is None:
        policy = Lsa()
    if not order.covers(instance):
        raise ValueError("arrival order is not a permutation of the instance's jobs")
    if isinstance(policy, Lsa):
        return _run_greedy(instance, order, policy.tie_break == "high")
    return _run_generic(instance, order, policy)


def _run_generic(
    instance: Instance, order: ArrivalOrder, policy: OnlinePolicy
) -> tuple[Schedule, list[TraceStep]]:
    m = instance.machines
    loads = [Time(0)] * m
    assignment: dict[int, int] = {}
    trace: list[TraceStep] = []
    before = tuple(loads)
    for job_id in order.permutation:
        job = instance.job(job_id)
        machine = policy.choose(before, job)
        if not isinstance(machine, int) or not 1 <= machine <= m:
            raise RuntimeError(
                f"policy {policy.name} chose invalid machine {machine!r}"
            )
        loads[machine - 1] = loads[machine - 1] + job.size
        after = tuple(loads)
        trace.append(TraceStep(job_id, machine, before, after))
        assignment[job_id] = machine
        before = after
    return Schedule(assignment, before, max(before)), trace


def _run_greedy(
    instance: Instance, order: ArrivalOrder, high: bool
) -> tuple[Schedule, list[TraceStep]]:
    # Heap of (load, key) where key encodes the tie-break direction; this
    # replaces the O(m) scan per job and keeps long sweeps fast.
    m = instance.machines
    zero = Time(0)
    heap = [(zero, -k if high else k) for k in range(m)]
    heapq.heapify(heap)
    heapreplace = heapq.heapreplace
    job_of = instance.job
    loads = [zero] * m
    assignment: dict[int, int] = {}
    trace: list[TraceStep] = []
    append = trace.append
    before = tuple(loads)
    for job_id in order.permutation:
        load, key = heap[0]
        k = -key if high else key
        new_load = load + job_of(job_id).size
        heapreplace(heap, (new_load, key))
        loads[k] = new_load
        after = tuple(loads)
        append(TraceStep(job_id, k + 1, before, after))
        assignment[job_id] = k + 1
        before = after
    return Schedule(assignment, before, max(before)), trace


def trace_jsonl(trace: Sequence[TraceStep]) -> str:
    """Serialize a trace as JSON Lines, one placement per line."""
    lines = []
    for step in trace:
        lines.append(
            json.dumps(
                {
                    "job": step.job_id,
                    "machine": step.machine,
                    "loads_before": [format_time(t) for t in step.loads_before],
                    "loads_after": [format_time(t) for t in step.loads_after],
                },
                separators=(",", ":"),
            )
        )
    return "\n".join(lines) + "\n" if lines else ""
