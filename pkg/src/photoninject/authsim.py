"""PIN lockout policies and brute-force enumeration timing.

Policies: unlimited attempts, hard lockout after n wrong attempts, or a
fixed delay inserted after every n wrong attempts. Enumeration walks the
PIN space in ascending or seeded-shuffled order, charging a constant
per-attempt duration plus any policy delays.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

UNLIMITED = "unlimited"
MAX_ATTEMPTS = "max_attempts"
DELAY_AFTER = "delay_after"

DEFAULT_PER_ATTEMPT_S = 13.0  # one spoken attempt plus the device's re-prompt


@dataclass(frozen=True)
class LockPolicy:
    kind: str
    attempt_limit: int = 0      # n for max_attempts / delay_after
    delay_s: float = 0.0        # for delay_after
    pin_length_range: tuple[int, int] = (1, 6)

    def __post_init__(self):
        if self.kind not in (UNLIMITED, MAX_ATTEMPTS, DELAY_AFTER):
            raise ValueError(f"unknown policy kind {self.kind!r}")
        if self.kind in (MAX_ATTEMPTS, DELAY_AFTER) and self.attempt_limit < 1:
            raise ValueError("attempt_limit must be >= 1")
        if self.kind == DELAY_AFTER and self.delay_s < 0:
            raise ValueError("delay_s must be >= 0")
        lo, hi = self.pin_length_range
        if not 1 <= lo <= hi:
            raise ValueError(f"bad pin_length_range {self.pin_length_range}")

    @classmethod
    def unlimited(cls, pin_length_range=(1, 6)) -> "LockPolicy":
        return cls(UNLIMITED, pin_length_range=pin_length_range)

    @classmethod
    def max_attempts(cls, n: int, pin_length_range=(1, 6)) -> "LockPolicy":
        return cls(MAX_ATTEMPTS, attempt_limit=n, pin_length_range=pin_length_range)

    @classmethod
    def delay_after(cls, n: int, delay_s: float,
                    pin_length_range=(1, 6)) -> "LockPolicy":
        return cls(DELAY_AFTER, attempt_limit=n, delay_s=delay_s,
                   pin_length_range=pin_length_range)

    def describe(self) -> str:
        if self.kind == MAX_ATTEMPTS:
            return f"max_attempts({self.attempt_limit})"
        if self.kind == DELAY_AFTER:
            return f"delay_after({self.attempt_limit},{self.delay_s:g}s)"
        return UNLIMITED


@dataclass(frozen=True)
class BruteForceResult:
    attempts_made: int
    elapsed_s: float
    outcome: str  # unlocked | locked_out | exhausted


@dataclass(frozen=True)
class ExpectedTime:
    worst_s: float
    mean_s: float
    success_prob: float


def _check_digits(policy: LockPolicy, digits: int) -> None:
    lo, hi = policy.pin_length_range
    if not lo <= digits <= hi:
        raise ValueError(
            f"{digits}-digit PINs outside the policy's range [{lo}, {hi}]")


def candidate_order(digits: int, order: str = "ascending",
                    seed: int | None = None) -> np.ndarray:
    """Candidate PINs as integers, in the enumeration order."""
    n = 10 ** digits
    if order == "ascending":
        return np.arange(n)
    if order == "seeded_shuffle":
        return np.random.default_rng(seed).permutation(n)
    raise ValueError(f"unknown order {order!r}")


def enumerate_pins(policy: LockPolicy, digits: int, per_attempt_s: float,
                   secret: str, order: str = "ascending",
                   seed: int | None = None) -> BruteForceResult:
    """Walk the PIN space until the secret, a lockout, or exhaustion.

    Elapsed time is attempts * per_attempt_s plus, for delay_after
    policies, the configured delay after every n-th wrong attempt.
    """
    _check_digits(policy, digits)
    if per_attempt_s <= 0:
        raise ValueError("per_attempt_s must be positive")
    if len(secret) != digits or not secret.isdigit():
        raise ValueError(f"secret must be exactly {digits} digits, got {secret!r}")
    target = int(secret)

    attempts = 0
    wrong = 0
    delays = 0
    for candidate in candidate_order(digits, order, seed):
        attempts += 1
        if candidate == target:
            return BruteForceResult(
                attempts, attempts * per_attempt_s + delays * policy.delay_s,
                "unlocked")
        wrong += 1
        if policy.kind == MAX_ATTEMPTS and wrong >= policy.attempt_limit:
            return BruteForceResult(attempts, attempts * per_attempt_s,
                                    "locked_out")
        if policy.kind == DELAY_AFTER and wrong % policy.attempt_limit == 0:
            delays += 1
    return BruteForceResult(
        attempts, attempts * per_attempt_s + delays * policy.delay_s, "exhausted")


def expected_time(policy: LockPolicy, digits: int,
                  per_attempt_s: float = DEFAULT_PER_ATTEMPT_S) -> ExpectedTime:
    """Closed-form timing for a uniformly random secret."""
    _check_digits(policy, digits)
    if per_attempt_s <= 0:
        raise ValueError("per_attempt_s must be positive")
    n_space = 10 ** digits
    t = per_attempt_s

    if policy.kind == UNLIMITED:
        return ExpectedTime(n_space * t, (n_space + 1) / 2 * t, 1.0)

    if policy.kind == MAX_ATTEMPTS:
        m = min(policy.attempt_limit, n_space)
        # mean is conditional on the secret falling inside the first m tries
        return ExpectedTime(m * t, (m + 1) / 2 * t, m / n_space)

    # delay_after: floor((k-1)/n) delays before the k-th attempt succeeds
    n = policy.attempt_limit
    worst = n_space * t + ((n_space - 1) // n) * policy.delay_s
    q, r = divmod(n_space, n)
    total_delays = n * q * (q - 1) // 2 + r * q
    mean = (n_space + 1) / 2 * t + policy.delay_s * total_delays / n_space
    return ExpectedTime(worst, mean, 1.0)


def summary_row(policy: LockPolicy, digits: int,
                per_attempt_s: float) -> tuple:
    """One `policy,digits,per_attempt_s,worst_s,mean_s,success_prob` row."""
    et = expected_time(policy, digits, per_attempt_s)
    return (policy.describe(), digits, per_attempt_s, et.worst_s, et.mean_s,
            et.success_prob)
