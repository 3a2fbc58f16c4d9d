"""Permutations of {1..n} and the actions used throughout the package.

Every public interface is 1-indexed.  Internally a :class:`Permutation`
keeps a 0-indexed image tuple, which is what the numeric kernels consume.

Conventions
-----------
* ``compose(p, q)`` is "p after q": ``compose(p, q)(i) == p(q(i))``.
* Vectors are acted on from the left: ``(s . x)_i = x_{s^-1(i)}``.
* Points are acted on from the right: ``i . s = s^-1(i)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np


class PermutationError(ValueError):
    pass


@dataclass(frozen=True)
class Permutation:
    """A bijection of {1..n}, stored as 0-indexed images."""

    array: tuple[int, ...]

    def __post_init__(self):
        n = len(self.array)
        if n == 0:
            raise PermutationError("degree must be positive")
        if sorted(self.array) != list(range(n)):
            raise PermutationError(f"not a bijection of 0..{n - 1}: {self.array}")

    @classmethod
    def from_images(cls, images: Iterable[int]) -> "Permutation":
        """Build from 1-indexed images, ``images[i-1] = s(i)``."""
        return cls(tuple(int(v) - 1 for v in images))

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(n)))

    @property
    def degree(self) -> int:
        return len(self.array)

    @property
    def images(self) -> list[int]:
        return [v + 1 for v in self.array]

    def __call__(self, i: int) -> int:
        return self.array[i - 1] + 1

    def is_identity(self) -> bool:
        return all(v == i for i, v in enumerate(self.array))

    def moved_points(self) -> list[int]:
        return [i + 1 for i, v in enumerate(self.array) if v != i]

    def __mul__(self, other: "Permutation") -> "Permutation":
        return compose(self, other)

    def __repr__(self) -> str:
        return f"Permutation({format_cycles(self)!r}, degree={self.degree})"

    def to_json(self) -> dict:
        return {"degree": self.degree, "images": self.images}

    @classmethod
    def from_json(cls, obj: dict) -> "Permutation":
        p = cls.from_images(obj["images"])
        if "degree" in obj and int(obj["degree"]) != p.degree:
            raise PermutationError("degree field disagrees with images length")
        return p


def identity(n: int) -> Permutation:
    return Permutation.identity(n)


def compose(p: Permutation, q: Permutation) -> Permutation:
    """Return ``p after q``."""
    if p.degree != q.degree:
        raise PermutationError(f"degree mismatch: {p.degree} vs {q.degree}")
    pa = p.array
    return Permutation(tuple(pa[j] for j in q.array))


def compose_all(perms: Sequence[Permutation], n: int) -> Permutation:
    """``perms[0] after perms[1] after ...``; identity when empty."""
    out = Permutation.identity(n)
    for p in reversed(perms):
        out = compose(p, out)
    return out


def inverse(p: Permutation) -> Permutation:
    inv = [0] * p.degree
    for i, v in enumerate(p.array):
        inv[v] = i
    return Permutation(tuple(inv))


def power(p: Permutation, k: int) -> Permutation:
    if k < 0:
        return power(inverse(p), -k)
    out = Permutation.identity(p.degree)
    for _ in range(k):
        out = compose(p, out)
    return out


def conjugate(g: Permutation, s: Permutation) -> Permutation:
    """``s^-1 g s``."""
    return compose(inverse(s), compose(g, s))


def apply_to_vector(s: Permutation, x) -> np.ndarray:
    """Left action on a vector: ``y_i = x_{s^-1(i)}``.

    ``x`` may be any array whose flattened (row-major) length is the degree;
    the result has the same shape.
    """
    arr = np.asarray(x)
    flat = arr.reshape(-1)
    if flat.shape[0] != s.degree:
        raise PermutationError(f"length {flat.shape[0]} does not match degree {s.degree}")
    # y[s(i)] = x[i]  <=>  y = x[s^-1]
    return flat[np.asarray(inverse(s).array, dtype=np.intp)].reshape(arr.shape)


def act_on_point(i: int, s: Permutation) -> int:
    """Right action on points: ``i . s = s^-1(i)``."""
    if not 1 <= i <= s.degree:
        raise PermutationError(f"point {i} out of range 1..{s.degree}")
    return s.array.index(i - 1) + 1


def rho(s: Permutation) -> tuple[int, ...]:
    """The rank vector ``(s^-1(1), ..., s^-1(n))``."""
    return tuple(v + 1 for v in inverse(s).array)


def rho_inverse(c: Sequence[int]) -> Permutation:
    """Inverse of :func:`rho`: the permutation ``s`` with ``rho(s) == c``."""
    return inverse(Permutation.from_images(c))


def transposition(i: int, j: int, n: int) -> Permutation:
    a = list(range(n))
    a[i - 1], a[j - 1] = a[j - 1], a[i - 1]
    return Permutation(tuple(a))


def from_cycles(cycles: Iterable[Sequence[int]], n: int) -> Permutation:
    """Permutation of degree n from disjoint 1-indexed cycles."""
    a = list(range(n))
    seen: set[int] = set()
    for cyc in cycles:
        for pt in cyc:
            if not 1 <= pt <= n:
                raise PermutationError(f"point {pt} out of range 1..{n}")
            if pt in seen:
                raise PermutationError(f"point {pt} repeated")
            seen.add(pt)
        for k, pt in enumerate(cyc):
            a[pt - 1] = cyc[(k + 1) % len(cyc)] - 1
    return Permutation(tuple(a))


_CYCLE = re.compile(r"\(([^()]*)\)")


def parse_cycles(text: str, degree: int) -> Permutation:
    """Parse disjoint-cycle notation such as ``"(1 2)(3 4)"``.

    Points may be separated by whitespace or commas.  ``""`` and ``"()"``
    both denote the identity.
    """
    if degree < 1:
        raise PermutationError("degree must be positive")
    stripped = text.strip()
    cycles = []
    pos = 0
    for m in _CYCLE.finditer(stripped):
        if stripped[pos:m.start()].strip():
            raise PermutationError(f"malformed cycle notation: {text!r}")
        pos = m.end()
        body = m.group(1).replace(",", " ").split()
        try:
            pts = [int(tok) for tok in body]
        except ValueError:
            raise PermutationError(f"malformed cycle notation: {text!r}") from None
        if pts:
            cycles.append(pts)
    if stripped[pos:].strip():
        raise PermutationError(f"malformed cycle notation: {text!r}")
    return from_cycles(cycles, degree)


def cycles(p: Permutation) -> list[list[int]]:
    """Non-trivial cycles, each starting at its smallest point, sorted."""
    out = []
    seen = [False] * p.degree
    for i in range(p.degree):
        if seen[i] or p.array[i] == i:
            continue
        cyc = []
        j = i
        while not seen[j]:
            seen[j] = True
            cyc.append(j + 1)
            j = p.array[j]
        out.append(cyc)
    return out


def format_cycles(p: Permutation) -> str:
    cs = cycles(p)
    if not cs:
        return "()"
    return "".join("(" + " ".join(map(str, c)) + ")" for c in cs)


def sign(p: Permutation) -> int:
    parity = sum(len(c) - 1 for c in cycles(p)) % 2
    return -1 if parity else 1
