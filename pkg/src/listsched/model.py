"""Exact domain model for makespan scheduling on identical machines.

Every quantity of work is a value a + b*sqrt(2) with rational a and b.
That field is closed under the arithmetic the schedulers need, so loads,
makespans and competitive ratios are compared exactly; floats appear only
in presentation helpers, never in decisions.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt
from pathlib import Path
from typing import Iterator, Mapping, Optional, Sequence, Union

RationalLike = Union[int, Fraction]
TimeLike = Union["Time", int, Fraction, str]

__all__ = [
    "Time",
    "SQRT2",
    "sqrt2_sign",
    "as_time",
    "parse_time",
    "format_time",
    "Job",
    "Instance",
    "ArrivalOrder",
    "Schedule",
    "build_schedule",
    "makespan",
    "total_load",
    "validate_schedule",
    "InstanceParseError",
    "parse_instance",
    "format_instance",
    "load_instance",
    "save_instance",
]


def _sign_pair(p: int, q: int) -> int:
    """Exact sign of p + q*sqrt(2) for integers p and q."""
    if q == 0:
        return (p > 0) - (p < 0)
    if p == 0:
        return (q > 0) - (q < 0)
    if p > 0:
        if q > 0:
            return 1
        # p > 0 > q: compare p against |q|*sqrt(2) via squares.
        # p*p == 2*q*q is impossible for nonzero integers, so no zero case.
        return 1 if p * p > 2 * q * q else -1
    if q < 0:
        return -1
    return -1 if p * p > 2 * q * q else 1


def sqrt2_sign(a: RationalLike, b: RationalLike) -> int:
    """Exact sign (-1, 0, or +1) of a + b*sqrt(2) for rational a, b."""
    fa = Fraction(a)
    fb = Fraction(b)
    return _sign_pair(fa.numerator * fb.denominator, fb.numerator * fa.denominator)


def _floor_pair(a: int, b: int, d: int) -> int:
    """Exact floor of (a + b*sqrt(2)) / d for integers a, b and d >= 1."""
    s = isqrt(2 * b * b)  # floor(|b| * sqrt(2))
    n = (a + (s if b >= 0 else -s - 1)) // d
    while _sign_pair(a - (n + 1) * d, b) >= 0:
        n += 1
    while _sign_pair(a - n * d, b) < 0:
        n -= 1
    return n


def _normalize(a: int, b: int, d: int) -> tuple[int, int, int]:
    if d < 0:
        a, b, d = -a, -b, -d
    g = gcd(gcd(a, b), d)
    if g > 1:
        a //= g
        b //= g
        d //= g
    return a, b, d


class Time:
    """Exact non-negative quantity a + b*sqrt(2) with rational a and b.

    Stored internally as an integer triple (a + b*sqrt(2)) / d with d >= 1
    and gcd(a, b, d) == 1, so comparisons reduce to integer arithmetic.
    Construction rejects negative values; subtraction that would go below
    zero raises ValueError.
    """

    __slots__ = ("_a", "_b", "_d")

    def __init__(self, value: TimeLike = 0, sqrt2_coeff: RationalLike = 0):
        if isinstance(value, str):
            if sqrt2_coeff:
                raise TypeError("string literal and sqrt2_coeff cannot be combined")
            other = parse_time(value)
            self._a, self._b, self._d = other._a, other._b, other._d
            return
        if isinstance(value, Time):
            ra = Fraction(value._a, value._d)
            rb = Fraction(value._b, value._d)
        else:
            ra = Fraction(value)
            rb = Fraction(0)
        rb += Fraction(sqrt2_coeff)
        d = ra.denominator * rb.denominator // gcd(ra.denominator, rb.denominator)
        a = ra.numerator * (d // ra.denominator)
        b = rb.numerator * (d // rb.denominator)
        a, b, d = _normalize(a, b, d)
        if _sign_pair(a, b) < 0:
            raise ValueError(f"negative quantity: {_render(a, b, d, compact=True)}")
        self._a, self._b, self._d = a, b, d

    @classmethod
    def _make(cls, a: int, b: int, d: int) -> "Time":
        """Build from a raw triple, normalizing but trusting non-negativity."""
        self = object.__new__(cls)
        self._a, self._b, self._d = _normalize(a, b, d)
        return self

    @property
    def rational_part(self) -> Fraction:
        return Fraction(self._a, self._d)

    @property
    def sqrt2_part(self) -> Fraction:
        return Fraction(self._b, self._d)

    @property
    def is_rational(self) -> bool:
        return self._b == 0

    @property
    def is_integer(self) -> bool:
        return self._b == 0 and self._d == 1

    def as_fraction(self) -> Fraction:
        if self._b:
            raise ValueError(f"{self} has an irrational part")
        return Fraction(self._a, self._d)

    def __add__(self, other: TimeLike) -> "Time":
        if type(other) is Time:
            sd, od = self._d, other._d
            return Time._make(
                self._a * od + other._a * sd,
                self._b * od + other._b * sd,
                sd * od,
            )
        if isinstance(other, (int, Fraction)):
            return self + Time(other)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other: TimeLike) -> "Time":
        o = _coerce(other)
        if o is None:
            return NotImplemented
        a = self._a * o._d - o._a * self._d
        b = self._b * o._d - o._b * self._d
        if _sign_pair(a, b) < 0:
            raise ValueError(f"negative quantity: {self} - {o}")
        return Time._make(a, b, self._d * o._d)

    def __mul__(self, other: TimeLike) -> "Time":
        o = _coerce(other)
        if o is None:
            return NotImplemented
        # (a1 + b1 r)(a2 + b2 r) = a1 a2 + 2 b1 b2 + (a1 b2 + a2 b1) r
        return Time._make(
            self._a * o._a + 2 * self._b * o._b,
            self._a * o._b + self._b * o._a,
            self._d * o._d,
        )

    __rmul__ = __mul__

    def __truediv__(self, other: TimeLike) -> "Time":
        o = _coerce(other)
        if o is None:
            return NotImplemented
        if not o:
            raise ZeroDivisionError("division by zero quantity")
        # Multiply by the conjugate: 1/(a + b r) = (a - b r) / (a^2 - 2 b^2).
        norm = o._a * o._a - 2 * o._b * o._b
        a = self._a * o._a - 2 * self._b * o._b
        b = self._b * o._a - self._a * o._b
        return Time._make(a * o._d, b * o._d, self._d * norm)

    def _cmp_time(self, other: "Time") -> int:
        return _sign_pair(
            self._a * other._d - other._a * self._d,
            self._b * other._d - other._b * self._d,
        )

    def _cmp_rational(self, x: Fraction) -> int:
        return _sign_pair(
            self._a * x.denominator - x.numerator * self._d,
            self._b * x.denominator,
        )

    def __lt__(self, other: TimeLike) -> bool:
        if type(other) is Time:
            return self._cmp_time(other) < 0
        if isinstance(other, (int, Fraction)):
            return self._cmp_rational(Fraction(other)) < 0
        return NotImplemented

    def __le__(self, other: TimeLike) -> bool:
        if type(other) is Time:
            return self._cmp_time(other) <= 0
        if isinstance(other, (int, Fraction)):
            return self._cmp_rational(Fraction(other)) <= 0
        return NotImplemented

    def __gt__(self, other: TimeLike) -> bool:
        if type(other) is Time:
            return self._cmp_time(other) > 0
        if isinstance(other, (int, Fraction)):
            return self._cmp_rational(Fraction(other)) > 0
        return NotImplemented

    def __ge__(self, other: TimeLike) -> bool:
        if type(other) is Time:
            return self._cmp_time(other) >= 0
        if isinstance(other, (int, Fraction)):
            return self._cmp_rational(Fraction(other)) >= 0
        return NotImplemented

    def __eq__(self, other: object) -> bool:
        if type(other) is Time:
            return (
                self._a == other._a
                and self._b == other._b
                and self._d == other._d
            )
        if isinstance(other, (int, Fraction)):
            x = Fraction(other)
            return self._b == 0 and self._a * x.denominator == x.numerator * self._d
        return NotImplemented

    def __hash__(self) -> int:
        if self._b == 0:
            return hash(Fraction(self._a, self._d))
        return hash((self._a, self._b, self._d))

    def __bool__(self) -> bool:
        return self._a != 0 or self._b != 0

    def __float__(self) -> float:
        return (self._a + self._b * 1.4142135623730951) / self._d

    def floor(self) -> int:
        return _floor_pair(self._a, self._b, self._d)

    def decimal(self, places: int = 4) -> str:
        """Round half-up to the given number of decimal places, exactly."""
        scale = 10 ** places
        # floor(x * scale + 1/2) computed on the scaled triple
        n = _floor_pair(2 * self._a * scale + self._d, 2 * self._b * scale, 2 * self._d)
        if places == 0:
            return str(n)
        whole, frac = divmod(n, scale)
        return f"{whole}.{frac:0{places}d}"

    def __str__(self) -> str:
        return _render(self._a, self._b, self._d, compact=False)

    def __repr__(self) -> str:
        return f"Time({_render(self._a, self._b, self._d, compact=True)!r})"


def _coerce(value: TimeLike) -> Optional[Time]:
    if type(value) is Time:
        return value
    if isinstance(value, (int, Fraction)):
        return Time(value)
    if isinstance(value, str):
        return parse_time(value)
    return None


def as_time(value: TimeLike) -> Time:
    t = _coerce(value)
    if t is None:
        raise TypeError(f"cannot interpret {value!r} as a time quantity")
    return t


def _render_rat(n: int, d: int) -> str:
    return str(n) if d == 1 else f"{n}/{d}"


def _render(a: int, b: int, d: int, compact: bool) -> str:
    ra = Fraction(a, d)
    rb = Fraction(b, d)
    head = _render_rat(ra.numerator, ra.denominator)
    if not rb:
        return head
    sign = "-" if rb < 0 else "+"
    coeff = _render_rat(abs(rb.numerator), rb.denominator)
    if compact:
        return f"{head}{sign}{coeff}r2"
    return f"{head} {sign} {coeff} r2"


def format_time(t: Time, compact: bool = False) -> str:
    """Render in file syntax: '<rat>' or '<rat> + <rat> r2'."""
    return _render(t._a, t._b, t._d, compact)


_TIME_RE = re.compile(r"(-?\d+(?:/\d+)?)(?:\s*([+-])\s*(\d+(?:/\d+)?)\s*r2)?")


def parse_time(text: str) -> Time:
    """Parse '<rat>' or '<rat> +/- <rat> r2'; spaces only between tokens."""
    s = text.strip()
    match = _TIME_RE.fullmatch(s)
    if not match:
        raise ValueError(f"bad time literal: {text!r}")
    try:
        rat = Fraction(match.group(1))
        coeff = Fraction(match.group(3)) if match.group(2) else Fraction(0)
    except ZeroDivisionError:
        raise ValueError(f"zero denominator in time literal: {text!r}") from None
    if match.group(2) == "-":
        coeff = -coeff
    return Time(rat, coeff)


SQRT2 = Time(0, 1)


@dataclass(frozen=True)
class Job:
    """A job with an immutable identity and a strictly positive size."""

    id: int
    size: Time

    def __post_init__(self) -> None:
        if not isinstance(self.size, Time):
            object.__setattr__(self, "size", as_time(self.size))
        if not self.size:
            raise ValueError(f"job {self.id} must have positive size")


@dataclass(frozen=True)
class Instance:
    """A job list (in listed order) together with the machine count."""

    jobs: tuple[Job, ...]
    machines: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "jobs", tuple(self.jobs))
        if self.machines < 2:
            raise ValueError("an instance needs at least two machines")
        if not self.jobs:
            raise ValueError("an instance needs at least one job")
        by_id = {}
        for job in self.jobs:
            if job.id in by_id:
                raise ValueError(f"duplicate job id {job.id}")
            by_id[job.id] = job
        object.__setattr__(self, "_by_id", by_id)

    @classmethod
    def from_sizes(cls, sizes: Sequence[TimeLike], machines: int) -> "Instance":
        """Build an instance with ids 1..n assigned in listed order."""
        # families repeat a handful of sizes thousands of times; convert once
        cache: dict = {}
        jobs = []
        for i, s in enumerate(sizes, start=1):
            t = cache.get(s)
            if t is None:
                t = as_time(s)
                cache[s] = t
            jobs.append(Job(i, t))
        return cls(tuple(jobs), machines)

    @property
    def job_ids(self) -> tuple[int, ...]:
        return tuple(job.id for job in self.jobs)

    def job(self, job_id: int) -> Job:
        return self._by_id[job_id]

    def __len__(self) -> int:
        return len(self.jobs)

    def __iter__(self) -> Iterator[Job]:
        return iter(self.jobs)


@dataclass(frozen=True)
class ArrivalOrder:
    """A permutation of an instance's job ids, giving the arrival sequence."""

    permutation: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "permutation", tuple(self.permutation))

    @classmethod
    def as_listed(cls, instance: Instance) -> "ArrivalOrder":
        return cls(instance.job_ids)

    def covers(self, instance: Instance) -> bool:
        """True when this is a permutation of exactly the instance's job ids."""
        return len(self.permutation) == len(instance.jobs) and sorted(
            self.permutation
        ) == sorted(instance.job_ids)

    def __len__(self) -> int:
        return len(self.permutation)


@dataclass(frozen=True)
class Schedule:
    """A complete assignment of jobs to machines with the induced loads.

    Machines are numbered 1..m and keep their identity; loads[k] is the
    total size on machine k+1, and makespan is the maximum load.
    """

    assignment: Mapping[int, int]
    loads: tuple[Time, ...]
    makespan: Time

    def machine_of(self, job_id: int) -> int:
        return self.assignment[job_id]


def build_schedule(instance: Instance, assignment: Mapping[int, int]) -> Schedule:
    """Construct a schedule from a job-id -> machine map, checking it fully."""
    loads = [Time(0) for _ in range(instance.machines)]
    seen = set()
    for job_id, machine in assignment.items():
        try:
            job = instance.job(job_id)
        except KeyError:
            raise ValueError(f"assignment mentions unknown job {job_id}") from None
        if not 1 <= machine <= instance.machines:
            raise ValueError(f"job {job_id} assigned to invalid machine {machine}")
        loads[machine - 1] = loads[machine - 1] + job.size
        seen.add(job_id)
    missing = set(instance.job_ids) - seen
    if missing:
        raise ValueError(f"assignment leaves jobs unplaced: {sorted(missing)}")
    loads_t = tuple(loads)
    return Schedule(dict(assignment), loads_t, max(loads_t))


def makespan(schedule: Schedule) -> Time:
    """Maximum machine load; completion time of the busiest machine."""
    return max(schedule.loads)


def total_load(instance: Instance) -> Time:
    result = Time(0)
    for job in instance.jobs:
        result = result + job.size
    return result


def validate_schedule(instance: Instance, schedule: Schedule) -> Optional[str]:
    """Return None when the schedule is consistent, else a diagnostic string."""
    if len(schedule.loads) != instance.machines:
        return (
            f"schedule has {len(schedule.loads)} loads for "
            f"{instance.machines} machines"
        )
    expected = [Time(0) for _ in range(instance.machines)]
    seen = set()
    for job_id, machine in schedule.assignment.items():
        try:
            job = instance.job(job_id)
        except KeyError:
            return f"assignment mentions unknown job {job_id}"
        if job_id in seen:
            return f"job {job_id} assigned twice"
        seen.add(job_id)
        if not 1 <= machine <= instance.machines:
            return f"job {job_id} assigned to invalid machine {machine}"
        expected[machine - 1] = expected[machine - 1] + job.size
    missing = set(instance.job_ids) - seen
    if missing:
        return f"jobs never assigned: {sorted(missing)}"
    for k, (want, got) in enumerate(zip(expected, schedule.loads), start=1):
        if want != got:
            return f"machine {k} load is {got}, assignment implies {want}"
    if schedule.makespan != max(schedule.loads):
        return f"makespan {schedule.makespan} is not the maximum load"
    return None


class InstanceParseError(ValueError):
    """A malformed instance file, with the offending line number."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


def format_instance(instance: Instance) -> str:
    """Serialize: 'm=<machines>' then one job size per line, listed order."""
    lines = [f"m={instance.machines}"]
    lines.extend(format_time(job.size) for job in instance.jobs)
    return "\n".join(lines) + "\n"


def parse_instance(text: str) -> Instance:
    """Parse the serialized form; '#' starts a comment, blank lines skipped."""
    machines: Optional[int] = None
    machines_line = 0
    sized: list[tuple[int, Time]] = []
    last_line = 0
    for line_no, raw in enumerate(text.splitlines(), start=1):
        last_line = line_no
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if machines is None:
            if not line.startswith("m="):
                raise InstanceParseError(line_no, "expected machine count 'm=<int>'")
            try:
                machines = int(line[2:])
            except ValueError:
                raise InstanceParseError(
                    line_no, f"bad machine count {line[2:]!r}"
                ) from None
            machines_line = line_no
            continue
        try:
            sized.append((line_no, parse_time(line)))
        except ValueError as exc:
            raise InstanceParseError(line_no, str(exc)) from None
    if machines is None:
        raise InstanceParseError(last_line + 1, "missing machine count 'm=<int>'")
    if machines < 2:
        raise InstanceParseError(machines_line, f"machine count {machines} below 2")
    if not sized:
        raise InstanceParseError(last_line + 1, "instance has no jobs")
    jobs = []
    for job_id, (line_no, size) in enumerate(sized, start=1):
        try:
            jobs.append(Job(job_id, size))
        except ValueError as exc:
            raise InstanceParseError(line_no, str(exc)) from None
    return Instance(tuple(jobs), machines)


def load_instance(path: Union[str, Path]) -> Instance:
    return parse_instance(Path(path).read_text(encoding="utf-8"))


def save_instance(instance: Instance, path: Union[str, Path]) -> None:
    Path(path).write_text(format_instance(instance), encoding="utf-8")
