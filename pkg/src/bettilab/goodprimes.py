"""Good characteristics for binomial coefficients.

A characteristic p is good for n when no binomial coefficient C(n, i) with
0 <= i <= n vanishes mod p.  Characteristic zero is always good, as is any
p > n; the only other possibility is the exceptional shape n + 1 = p^s * u
with s >= 1 and 2 <= u <= p, and for fixed n at most one prime p <= n has
that shape.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .fields import is_prime


def binom_mod(n: int, i: int, p: int) -> int:
    """C(n, i) mod p by Lucas' digitwise product."""
    if i < 0 or i > n:
        return 0
    if not is_prime(p):
        raise ValueError(f"modulus must be prime, got {p}")
    out = 1
    while n or i:
        nd, id_ = n % p, i % p
        if id_ > nd:
            return 0
        out = out * (math.comb(nd, id_) % p) % p
        n //= p
        i //= p
    return out


def brute_is_good(n: int, p: int) -> bool:
    """Direct oracle: every C(n, i) nonzero mod p, by exact integer division."""
    if p == 0:
        return True
    return all(math.comb(n, i) % p != 0 for i in range(n + 1))


@dataclass(frozen=True)
class GoodPrimeVerdict:
    n: int
    p: int
    good: bool
    case: str  # "char-zero" | "p-greater-n" | "exceptional" | "none"
    s: Optional[int] = None
    u: Optional[int] = None


def is_good(n: int, p: int) -> GoodPrimeVerdict:
    """Classify whether characteristic p is good for n."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if p == 0:
        return GoodPrimeVerdict(n, p, True, "char-zero")
    if not is_prime(p):
        raise ValueError(f"characteristic must be 0 or prime, got {p}")
    if p > n:
        return GoodPrimeVerdict(n, p, True, "p-greater-n")
    shape = _exceptional_shape(n, p)
    if shape is not None:
        s, u = shape
        return GoodPrimeVerdict(n, p, True, "exceptional", s, u)
    return GoodPrimeVerdict(n, p, False, "none")


def _exceptional_shape(n: int, p: int) -> Optional[tuple]:
    """(s, u) with n + 1 = p^s * u, s >= 1, 2 <= u <= p, if it exists."""
    m = n + 1
    s = 0
    while m % p == 0:
        m //= p
        s += 1
    # m is now coprime to p; allowed shapes are (s, m) or, when m == 1
    # and s >= 2, the rewrite p^s = p^(s-1) * p
    if s >= 1 and 2 <= m <= p:
        return (s, m)
    if m == 1 and s >= 2:
        return (s - 1, p)
    return None


def exceptional_prime(n: int) -> Optional[int]:
    """The prime p <= n that is good for n by the exceptional shape, if any."""
    found = None
    for p in range(2, n + 1):
        if not is_prime(p):
            continue
        if _exceptional_shape(n, p) is not None:
            if found is not None:
                raise ArithmeticError(f"two exceptional primes for n={n}: {found}, {p}")
            found = p
    return found
