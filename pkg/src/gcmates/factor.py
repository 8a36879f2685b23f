"""Primality testing and integer factorization with a bounded work budget."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

TRIAL_LIMIT = 10**6
RHO_ITERATIONS = 2_000_000

# deterministic for n < 3.3e24 (covers 2**64); extra bases make 20 rounds above that
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71)


@lru_cache(maxsize=1)
def _small_primes() -> tuple[int, ...]:
    sieve = bytearray([1]) * (TRIAL_LIMIT + 1)
    sieve[0:2] = b"\x00\x00"
    for i in range(2, math.isqrt(TRIAL_LIMIT) + 1):
        if sieve[i]:
            sieve[i * i::i] = bytearray(len(range(i * i, TRIAL_LIMIT + 1, i)))
    return tuple(i for i, flag in enumerate(sieve) if flag)


def is_prime(n: int) -> bool:
    """Miller-Rabin; deterministic below 2**64, 20 fixed-base rounds above."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    bases = _MR_BASES[:12] if n < 2**64 else _MR_BASES
    for a in bases:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def pollard_brent(n: int, max_iterations: int = RHO_ITERATIONS, c: int = 1) -> int | None:
    """A nontrivial factor of composite odd ``n``, or ``None`` once the budget runs out."""
    y, r, q, g = 2, 1, 1, 1
    m = 128
    spent = 0
    x = ys = y
    while g == 1:
        x = y
        for _ in range(r):
            y = (y * y + c) % n
        k = 0
        while k < r and g == 1:
            ys = y
            for _ in range(min(m, r - k)):
                y = (y * y + c) % n
                q = q * abs(x - y) % n
            g = math.gcd(q, n)
            k += m
        spent += r
        if spent > max_iterations:
            return None
        r *= 2
    if g == n:
        # batch overshot; backtrack one step at a time
        while True:
            ys = (ys * ys + c) % n
            g = math.gcd(abs(x - ys), n)
            if g > 1:
                break
    return g if g != n else None


@dataclass
class Factorization:
    """``factors`` maps prime -> exponent; ``cofactor`` is the unfactored remainder."""

    factors: dict[int, int] = field(default_factory=dict)
    complete: bool = True
    cofactor: int = 1

    def value(self) -> int:
        out = self.cofactor
        for p, k in self.factors.items():
            out *= p**k
        return out


def factorize(x: int, max_iterations: int = RHO_ITERATIONS) -> Factorization:
    if x < 1:
        raise ValueError("factorize needs a positive integer")
    factors: dict[int, int] = {}
    for p in _small_primes():
        if p * p > x:
            break
        while x % p == 0:
            factors[p] = factors.get(p, 0) + 1
            x //= p
    stack = [x] if x > 1 else []
    leftover = 1
    while stack:
        y = stack.pop()
        if is_prime(y):
            factors[y] = factors.get(y, 0) + 1
            continue
        r = math.isqrt(y)
        if r * r == y:
            stack += [r, r]
            continue
        f = None
        for c in (1, 3):
            f = pollard_brent(y, max_iterations, c)
            if f:
                break
        if not f:
            leftover *= y
            continue
        stack += [f, y // f]
    factors = dict(sorted(factors.items()))
    return Factorization(factors, leftover == 1, leftover)
