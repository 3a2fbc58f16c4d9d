"""Permutation groups given by generators, and their stabilizer chains.

The chain is built with a deterministic Schreier-Sims over a fixed base
sequence.  By default that sequence is ``1, 2, ..., n`` and levels whose
basic orbit is a single point are dropped, so each retained base point is
the smallest point moved by the stabilizer of the earlier ones.  A prefix
may be supplied to force a particular base (the tensor and conjugated bases
used elsewhere need this).
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .perm import Permutation, PermutationError, parse_cycles

Raw = tuple[int, ...]


def _mul(p: Raw, q: Raw) -> Raw:
    """p after q, on raw 0-indexed tuples."""
    return tuple(p[j] for j in q)


def _inv(p: Raw) -> Raw:
    out = [0] * len(p)
    for i, v in enumerate(p):
        out[v] = i
    return tuple(out)


def _is_id(p: Raw) -> bool:
    return all(v == i for i, v in enumerate(p))


class GroupError(ValueError):
    pass


@dataclass(frozen=True)
class PermGroup:
    """A permutation group on {1..n} given by generators.

    ``tag`` records how a named constructor built the group, e.g.
    ``("cyclic", 5)``; it is informational and used for fast paths.
    """

    degree: int
    generators: tuple[Permutation, ...]
    tag: tuple | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.degree < 1:
            raise GroupError("degree must be positive")
        if not self.generators:
            raise GroupError("generator list must be nonempty (use [identity] for the trivial group)")
        for g in self.generators:
            if g.degree != self.degree:
                raise GroupError(f"generator degree {g.degree} != group degree {self.degree}")

    @classmethod
    def from_cycles(cls, degree: int, gens: Iterable[str], tag=None) -> "PermGroup":
        perms = tuple(parse_cycles(s, degree) for s in gens)
        if not perms:
            perms = (Permutation.identity(degree),)
        return cls(degree, perms, tag)

    @classmethod
    def trivial(cls, degree: int) -> "PermGroup":
        return cls(degree, (Permutation.identity(degree),), ("trivial", degree))

    def is_trivial(self) -> bool:
        return all(g.is_identity() for g in self.generators)

    def moved_points(self) -> list[int]:
        pts = set()
        for g in self.generators:
            pts.update(g.moved_points())
        return sorted(pts)


@dataclass(frozen=True)
class ChainLevel:
    base_point: int
    generators: tuple[Permutation, ...]
    orbit: tuple[int, ...]
    transversal: dict[int, Permutation]


def orbit_with_transversal(gens: Sequence[Permutation], b: int) -> tuple[list[int], dict[int, Permutation]]:
    """Orbit of ``b`` under the right action, in BFS discovery order.

    ``transversal[j]`` is an element ``u`` of the generated group with
    ``b . u == j``; ``transversal[b]`` is the identity.
    """
    if not gens:
        raise GroupError("need at least one generator")
    n = gens[0].degree
    if not 1 <= b <= n:
        raise GroupError(f"point {b} out of range 1..{n}")
    orbit, trans = _orbit_raw([g.array for g in gens], b - 1, n)
    return [p + 1 for p in orbit], {p + 1: Permutation(u) for p, u in trans.items()}


def _orbit_raw(gens: Sequence[Raw], b: int, n: int) -> tuple[list[int], dict[int, Raw]]:
    # p . s = s^-1(p); stepping by s^-1 is p -> s(p)
    moves = [(_inv(s), s) for s in gens] + [(s, _inv(s)) for s in gens]
    ident = tuple(range(n))
    orbit = [b]
    trans = {b: ident}
    k = 0
    while k < len(orbit):
        p = orbit[k]
        u = trans[p]
        for s_inv, s in moves:
            q = s_inv[p]
            if q not in trans:
                trans[q] = _mul(u, s)
                orbit.append(q)
        k += 1
    return orbit, trans


class StabilizerChain:
    """Base, basic orbits and Schreier transversals for a permutation group.

    Only levels with a basic orbit of size > 1 are kept, so ``len(base)`` is
    the number of nontrivial levels and the order is the product of the
    orbit lengths.
    """

    def __init__(self, group: PermGroup, base_prefix: Sequence[int] = ()):
        self.group = group
        self.degree = n = group.degree
        prefix = [int(b) for b in base_prefix]
        if len(set(prefix)) != len(prefix):
            raise GroupError("base prefix has repeated points")
        for b in prefix:
            if not 1 <= b <= n:
                raise GroupError(f"base point {b} out of range 1..{n}")
        rest = [p for p in range(1, n + 1) if p not in set(prefix)]
        beta = [b - 1 for b in prefix + rest]
        gens = []
        for g in group.generators:
            if not g.is_identity() and g.array not in gens:
                gens.append(g.array)
        levels = _schreier_sims(n, gens, beta)
        self.levels: tuple[ChainLevel, ...] = tuple(
            ChainLevel(
                base_point=b + 1,
                generators=tuple(Permutation(s) for s in S),
                orbit=tuple(p + 1 for p in orb),
                transversal={p + 1: Permutation(u) for p, u in tr.items()},
            )
            for b, S, orb, tr in levels
        )
        # raw data for sifting
        self._raw = [(b, {p: _inv(u) for p, u in tr.items()}) for b, _, _, tr in levels]
        self._kernel_arrays = None

    @property
    def base(self) -> tuple[int, ...]:
        return tuple(lv.base_point for lv in self.levels)

    @property
    def orbits(self) -> tuple[tuple[int, ...], ...]:
        return tuple(lv.orbit for lv in self.levels)

    def order(self) -> int:
        out = 1
        for lv in self.levels:
            out *= len(lv.orbit)
        return out

    def sift(self, p: Permutation, start: int = 0) -> tuple[Permutation, int]:
        """Strip ``p`` through levels ``start..``; return residue and the level reached."""
        if p.degree != self.degree:
            raise GroupError(f"degree mismatch: {p.degree} vs {self.degree}")
        h = p.array
        for i in range(start, len(self._raw)):
            b, tinv = self._raw[i]
            q = h.index(b)  # b . h
            if q not in tinv:
                return Permutation(h), i
            h = _mul(h, tinv[q])
        return Permutation(h), len(self._raw)

    def contains(self, p: Permutation) -> bool:
        residue, level = self.sift(p)
        return level == len(self._raw) and residue.is_identity()

    def elements(self, bound: int) -> list[Permutation]:
        return enumerate_elements(self, bound)

    def kernel_arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Flat arrays for the projection kernels.

        Returns ``(offsets, orbit_points, moves)``.  Level ``i`` owns rows
        ``offsets[i]:offsets[i+1]``; ``orbit_points[r]`` is a 0-indexed
        orbit point ``j`` and ``moves[r]`` the 0-indexed images of
        ``u_j^-1``, so that ``y[moves[r]]`` is ``u_j . y``.
        """
        if self._kernel_arrays is None:
            offsets = [0]
            pts = []
            rows = []
            for lv in self.levels:
                for j in lv.orbit:
                    pts.append(j - 1)
                    rows.append(_inv(lv.transversal[j].array))
                offsets.append(len(pts))
            n = self.degree
            self._kernel_arrays = (
                np.asarray(offsets, dtype=np.int64),
                np.asarray(pts, dtype=np.int64),
                np.asarray(rows, dtype=np.int64).reshape(len(rows), n),
            )
        return self._kernel_arrays

    def __repr__(self) -> str:
        return f"StabilizerChain(degree={self.degree}, base={self.base}, order={self.order()})"


def _schreier_sims(n: int, gens: list[Raw], beta: list[int]):
    k = len(beta)
    S: list[list[Raw]] = [[] for _ in range(k)]

    def first_moved(h: Raw, start: int) -> int:
        for l in range(start, k):
            if h[beta[l]] != beta[l]:
                return l
        return k

    for g in gens:
        for l in range(0, first_moved(g, 0) + 1):
            if l < k:
                S[l].append(g)

    orbits: list = [None] * k
    tinv: list = [None] * k

    def refresh(l: int):
        if S[l]:
            orb, tr = _orbit_raw(S[l], beta[l], n)
        else:
            orb, tr = [beta[l]], {beta[l]: tuple(range(n))}
        orbits[l] = (orb, tr)
        tinv[l] = {p: _inv(u) for p, u in tr.items()}

    for l in range(k):
        refresh(l)

    def sift(h: Raw, start: int) -> tuple[Raw, int]:
        for l in range(start, k):
            q = h.index(beta[l])
            t = tinv[l]
            if q not in t:
                return h, l
            h = _mul(h, t[q])
        return h, k

    i = k - 1
    while i >= 0:
        restarted = False
        orb, tr = orbits[i]
        for p in list(orb):
            u_p = tr[p]
            for s in list(S[i]):
                q = s.index(p)  # p . s
                h = _mul(_mul(u_p, s), tinv[i][q])
                if _is_id(h):
                    continue
                res, lvl = sift(h, i + 1)
                if lvl < k or not _is_id(res):
                    # beta covers every point, so a nontrivial residue stops at lvl < k
                    for l in range(i + 1, lvl + 1):
                        S[l].append(res)
                        refresh(l)
                    i = lvl
                    restarted = True
                    break
            if restarted:
                break
        if not restarted:
            i -= 1

    return [(beta[l], S[l], orbits[l][0], orbits[l][1]) for l in range(k) if len(orbits[l][0]) > 1]


def build_chain(g: PermGroup, base: Sequence[int] = ()) -> StabilizerChain:
    """Stabilizer chain of ``g``; ``base`` optionally forces the leading base points."""
    return StabilizerChain(g, base)


def group_order(chain: StabilizerChain) -> int:
    return chain.order()


def contains(chain: StabilizerChain, p: Permutation) -> bool:
    return chain.contains(p)


def random_element(g: PermGroup, word_length: int, seed=None) -> Permutation:
    """Product of ``word_length`` generators or inverse generators chosen uniformly."""
    if word_length < 1:
        raise GroupError("word_length must be >= 1")
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    letters = [s.array for s in g.generators] + [_inv(s.array) for s in g.generators]
    h = tuple(range(g.degree))
    for _ in range(word_length):
        h = _mul(rng.choice(letters), h)
    return Permutation(h)


def enumerate_elements(chain: StabilizerChain, bound: int) -> list[Permutation]:
    """All elements, each exactly once, as products ``u_k ... u_1`` of transversal elements."""
    order = chain.order()
    if order > bound:
        raise GroupError(f"group order {order} exceeds bound {bound}")
    n = chain.degree
    elems: list[Raw] = [tuple(range(n))]
    # g = u^(k) after ... after u^(1); build from the deepest level outwards
    for lv in reversed(chain.levels):
        reps = [lv.transversal[j].array for j in lv.orbit]
        elems = [_mul(e, u) for u in reps for e in elems]
    return [Permutation(e) for e in elems]


def group_from_json(obj: dict) -> PermGroup:
    """Parse ``{"degree": n, "generators": ["(1 2)", ...]}``."""
    try:
        n = int(obj["degree"])
        gens = obj.get("generators") or ["()"]
        return PermGroup.from_cycles(n, gens)
    except (KeyError, TypeError, PermutationError) as exc:
        raise GroupError(f"bad group spec: {exc}") from exc


def all_permutations(n: int) -> Iterable[Permutation]:
    for t in itertools.permutations(range(n)):
        yield Permutation(t)
