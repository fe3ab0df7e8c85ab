"""Prime bases, residue vectors and Chinese-remainder reconstruction."""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from math import prod
from pathlib import Path
from typing import Sequence

PRIME_CEILING = 2**31
# Miller-Rabin with these witnesses is deterministic below 3,215,031,751.
_WITNESSES = (2, 3, 5, 7)


class MisalignedResiduesError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13):
        if n % p == 0:
            return n == p
    if n >= 3_215_031_751:
        raise ValueError("deterministic primality test only covers n < 3215031751")
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@lru_cache(maxsize=None)
def _descending_primes(k: int) -> tuple[int, ...]:
    out = []
    c = PRIME_CEILING - 1
    while len(out) < k:
        if is_prime(c):
            out.append(c)
        c -= 2 if c % 2 else 1
    return tuple(out)


@dataclass(frozen=True)
class PrimeBasis:
    primes: tuple[int, ...]

    def __post_init__(self) -> None:
        if list(self.primes) != sorted(set(self.primes)):
            raise ValueError("basis primes must be distinct and sorted ascending")
        if not all(is_prime(p) for p in self.primes):
            raise ValueError("basis contains a composite modulus")

    def __len__(self) -> int:
        return len(self.primes)

    @property
    def product(self) -> int:
        return prod(self.primes)

    @property
    def modulus_product_bits(self) -> int:
        return self.product.bit_length()

    def covers(self, n: int) -> bool:
        """True when the product strictly exceeds 4**n."""
        return self.product > 4**n


@dataclass(frozen=True)
class ResidueVector:
    residues: tuple[int, ...]


def select_primes(n: int) -> PrimeBasis:
    """Fewest consecutive primes below 2**31, largest first, with product > 4**n."""
    if n < 1:
        raise ValueError("n must be at least 1")
    bound = 4**n
    k = 1
    while prod(_descending_primes(k)) <= bound:
        k += 1
    return PrimeBasis(tuple(sorted(_descending_primes(k))))


def reduce(value: int, basis: PrimeBasis) -> ResidueVector:
    if value < 0:
        raise ValueError("only nonnegative integers are reduced")
    return ResidueVector(tuple(value % p for p in basis.primes))


def crt_reconstruct(rv: ResidueVector | Sequence[int], basis: PrimeBasis) -> int:
    """Garner's mixed-radix lifting; returns the residue class rep in [0, product)."""
    residues = rv.residues if isinstance(rv, ResidueVector) else tuple(rv)
    if len(residues) != len(basis.primes):
        raise MisalignedResiduesError(
            f"{len(residues)} residues for a basis of {len(basis.primes)} primes"
        )
    for t, p in zip(residues, basis.primes):
        if not 0 <= t < p:
            raise MisalignedResiduesError(f"residue {t} out of range for modulus {p}")
    value = 0
    radix = 1
    for t, p in zip(residues, basis.primes):
        # next mixed-radix digit: (t - value) / radix mod p
        digit = (t - value) * pow(radix, -1, p) % p
        value += digit * radix
        radix *= p
    return value


def reconstruct_profile(
    profiles: Sequence[dict[int, int]], basis: PrimeBasis
) -> dict[int, int]:
    """CRT-combine per-prime ``{s: residue}`` maps into exact counts."""
    keys = sorted(set().union(*profiles)) if profiles else []
    out = {}
    for s in keys:
        value = crt_reconstruct([prof.get(s, 0) for prof in profiles], basis)
        if value:
            out[s] = value
    return out


# Checkpoints --------------------------------------------------------------

_HEADER = re.compile(r"#\s*n=(-?\d+)\s+p=(\d+)\s+strategy=(\w+)\s+endpoint=(-?\d+),(-?\d+)")


def checkpoint_path(directory: Path, n: int, prime: int, strategy: str, endpoint: tuple[int, int]) -> Path:
    return Path(directory) / f"n{n}_p{prime}_{strategy}_e{endpoint[0]}_{endpoint[1]}.txt"


def write_checkpoint(
    path: Path, n: int, prime: int, strategy: str, endpoint: tuple[int, int], profile: dict[int, int]
) -> None:
    """Header line, then ``i j s residue`` lines for the endpoint's area profile."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(".tmp")
    p, q = endpoint
    with open(tmp, "w") as fh:
        fh.write(f"# n={n} p={prime} strategy={strategy} endpoint={p},{q}\n")
        for s in sorted(profile):
            fh.write(f"{p} {q} {s} {profile[s]}\n")
    tmp.replace(path)


def read_checkpoint(path: Path) -> tuple[dict, dict[int, int]]:
    with open(path) as fh:
        header = _HEADER.match(fh.readline())
        if header is None:
            raise ValueError(f"{path}: missing checkpoint header")
        n, prime, strategy, p, q = header.groups()
        meta = {"n": int(n), "p": int(prime), "strategy": strategy, "endpoint": (int(p), int(q))}
        profile = {}
        for line in fh:
            if not line.strip():
                continue
            i, j, s, c = (int(x) for x in line.split())
            if (i, j) != meta["endpoint"]:
                raise ValueError(f"{path}: term {(i, j, s)} off the checkpoint endpoint")
            profile[s] = c
    return meta, profile
