"""Shared helpers for the test suite."""
from __future__ import annotations

import random

from listsched.model import ArrivalOrder, Instance, Time


def naive_opt(instance: Instance) -> Time:
    """Optimal makespan by trying every machine assignment.

    Independent of the branch-and-bound oracle on purpose: plain depth
    first search over all m^n placements, no symmetry breaking, no
    incumbent pruning. Only usable for tiny instances. Integer sizes run
    on machine integers for speed; anything else runs on exact values.
    """
    m = instance.machines
    if all(job.size.is_integer for job in instance.jobs):
        sizes = [job.size.rational_part.numerator for job in instance.jobs]
        zero = 0
    else:
        sizes = [job.size for job in instance.jobs]
        zero = Time(0)
    best = [None]
    loads = [zero] * m

    def walk(i: int) -> None:
        if i == len(sizes):
            top = max(loads)
            if best[0] is None or top < best[0]:
                best[0] = top
            return
        size = sizes[i]
        for k in range(m):
            saved = loads[k]
            loads[k] = saved + size
            walk(i + 1)
            loads[k] = saved

    walk(0)
    value = best[0]
    return value if isinstance(value, Time) else Time(value)


def random_instance(
    rng: random.Random,
    max_n: int = 10,
    max_m: int = 3,
    size_lo: int = 1,
    size_hi: int = 9,
) -> Instance:
    n = rng.randint(1, max_n)
    m = rng.randint(2, max_m)
    sizes = [rng.randint(size_lo, size_hi) for _ in range(n)]
    return Instance.from_sizes(sizes, m)


def random_order(rng: random.Random, instance: Instance) -> ArrivalOrder:
    ids = list(instance.job_ids)
    rng.shuffle(ids)
    return ArrivalOrder(tuple(ids))
