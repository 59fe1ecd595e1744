"""Coefficient fields: prime fields F_p and the rationals.

Everything is exact. Prime-field data lives in ``int64`` numpy arrays holding
canonical residues in ``[0, p)``; rational data lives in object arrays of
:class:`fractions.Fraction`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any

import numpy as np

# keeps every product of two residues (and sums of many of them) inside int64
MAX_PRIME = 46337


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


class FieldError(ValueError):
    pass


@dataclass(frozen=True)
class Field:
    """A coefficient field.

    ``p`` is an odd prime for F_p, or ``None`` for the rationals.
    """

    p: int | None = 101

    def __post_init__(self):
        if self.p is not None:
            if not _is_prime(self.p) or self.p == 2:
                raise FieldError(f"field characteristic must be an odd prime, got {self.p}")
            if self.p > MAX_PRIME:
                raise FieldError(f"prime {self.p} exceeds the supported bound {MAX_PRIME}")

    @classmethod
    def parse(cls, text: str) -> "Field":
        """Parse ``F:101``, ``F 101``, ``101`` or ``Q``."""
        t = text.strip().replace(":", " ").split()
        if t == ["Q"]:
            return cls(None)
        if len(t) == 2 and t[0] == "F":
            t = t[1:]
        if len(t) == 1 and t[0].isdigit():
            return cls(int(t[0]))
        raise FieldError(f"cannot parse field {text!r}")

    @property
    def characteristic(self) -> int:
        return 0 if self.p is None else self.p

    @property
    def is_rational(self) -> bool:
        return self.p is None

    def __str__(self):
        return "Q" if self.p is None else f"F:{self.p}"

    # -- scalars --------------------------------------------------------
    def scalar(self, x: Any):
        if self.p is None:
            return Fraction(x)
        if isinstance(x, Fraction):
            return (x.numerator * pow(x.denominator, -1, self.p)) % self.p
        return int(x) % self.p

    def inv(self, x):
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.p is None:
            return Fraction(1) / x
        return pow(int(x), -1, self.p)

    def to_json(self, x):
        if self.p is None:
            x = Fraction(x)
            return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
        return int(x)

    def from_json(self, x):
        if isinstance(x, str):
            return self.scalar(Fraction(x))
        return self.scalar(x)

    # -- arrays ---------------------------------------------------------
    @property
    def dtype(self):
        return object if self.p is None else np.int64

    def zeros(self, shape) -> np.ndarray:
        if self.p is None:
            out = np.empty(shape, dtype=object)
            out.fill(Fraction(0))
            return out
        return np.zeros(shape, dtype=np.int64)

    def eye(self, n: int) -> np.ndarray:
        out = self.zeros((n, n))
        for i in range(n):
            out[i, i] = self.scalar(1)
        return out

    def array(self, data) -> np.ndarray:
        if self.p is None:
            arr = np.array(data, dtype=object)
            if arr.size:
                flat = arr.reshape(-1)
                for i, v in enumerate(flat):
                    flat[i] = Fraction(v)
            return arr
        arr = np.array(data, dtype=object)
        if arr.size and any(isinstance(v, Fraction) for v in arr.reshape(-1)):
            return np.vectorize(self.scalar, otypes=[np.int64])(arr)
        return np.array(data, dtype=np.int64) % self.p

    def normalize(self, arr: np.ndarray) -> np.ndarray:
        if self.p is None:
            return arr
        return np.mod(arr, self.p)

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self.p is None:
            if a.shape[-1] == 0:
                return self.zeros(a.shape[:-1] + b.shape[1:])
            return a.dot(b)
        return (a @ b) % self.p

    def random(self, rng: np.random.Generator, shape, nonzero: bool = False) -> np.ndarray:
        """Random field elements; rationals draw small integers."""
        if self.p is None:
            lo = 1 if nonzero else -9
            vals = rng.integers(lo, 10, size=shape)
            if nonzero:
                vals = vals * rng.choice([-1, 1], size=shape)
            return self.array(vals.tolist() if np.ndim(vals) else int(vals))
        lo = 1 if nonzero else 0
        return rng.integers(lo, self.p, size=shape).astype(np.int64)
