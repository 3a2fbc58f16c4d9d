"""Structured actions (plain, direct sum, tensor) and named groups.

Every structure flattens to a single permutation group on the flat index
set.  Tensors are flattened row-major: the multi-index ``(i_1, ..., i_r)``
sits at ``1 + sum_j (i_j - 1) * prod_{j' > j} n_j'``, so a 3x3 matrix reads
``[[1, 2, 3], [4, 5, 6], [7, 8, 9]]``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence, Union

import numpy as np

from .group import GroupError, PermGroup, StabilizerChain, build_chain, group_from_json
from .perm import Permutation, from_cycles


@dataclass(frozen=True)
class Plain:
    group: PermGroup

    @property
    def degree(self) -> int:
        return self.group.degree

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.group.degree,)


@dataclass(frozen=True)
class DirectSum:
    factors: tuple["ActionSpec", ...]

    def __post_init__(self):
        if not self.factors:
            raise GroupError("direct sum needs at least one factor")

    @property
    def degree(self) -> int:
        return sum(f.degree for f in self.factors)

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.degree,)


@dataclass(frozen=True)
class Tensor:
    """``prod_j H_j`` acting on ``R^{n_1} (x) ... (x) R^{n_r}``, ``H_j`` on axis ``j``."""

    factors: tuple[PermGroup, ...]

    def __post_init__(self):
        if not self.factors:
            raise GroupError("tensor needs at least one factor")

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(h.degree for h in self.factors)

    @property
    def degree(self) -> int:
        return int(np.prod(self.dims))

    @property
    def shape(self) -> tuple[int, ...]:
        return self.dims

    @cached_property
    def factor_chains(self) -> tuple[StabilizerChain, ...]:
        return tuple(build_chain(h) for h in self.factors)


ActionSpec = Union[Plain, DirectSum, Tensor]


def lift(h: Permutation, axis: int, dims: Sequence[int]) -> Permutation:
    """Lift a permutation of axis ``axis`` to the row-major flat index set."""
    dims = tuple(dims)
    if h.degree != dims[axis]:
        raise GroupError(f"factor permutation degree {h.degree} != dimension {dims[axis]}")
    grid = np.indices(dims)
    grid[axis] = np.asarray(h.array)[grid[axis]]
    images = np.ravel_multi_index(tuple(grid), dims).reshape(-1)
    return Permutation(tuple(int(v) for v in images))


def shift(p: Permutation, offset: int, total: int) -> Permutation:
    a = list(range(total))
    for i, v in enumerate(p.array):
        a[offset + i] = offset + v
    return Permutation(tuple(a))


def flatten(spec: ActionSpec) -> PermGroup:
    if isinstance(spec, Plain):
        return spec.group
    if isinstance(spec, DirectSum):
        total = spec.degree
        gens = []
        offset = 0
        for f in spec.factors:
            for g in flatten(f).generators:
                if not g.is_identity():
                    gens.append(shift(g, offset, total))
            offset += f.degree
        return PermGroup(total, tuple(gens) or (Permutation.identity(total),), ("direct_sum",))
    if isinstance(spec, Tensor):
        dims = spec.dims
        gens = [
            lift(g, j, dims)
            for j, h in enumerate(spec.factors)
            for g in h.generators
            if not g.is_identity()
        ]
        return PermGroup(spec.degree, tuple(gens) or (Permutation.identity(spec.degree),), ("tensor",))
    raise TypeError(f"not an action spec: {spec!r}")


def tensor_base(spec: Tensor) -> tuple[int, ...]:
    """Flat base for a tensor action built from the factor bases.

    The anchor multi-index takes the first base point of each factor (1 for
    a trivial factor); it is followed, factor by factor, by the anchor with
    one coordinate replaced by each later base point of that factor.
    """
    bases = [c.base for c in spec.factor_chains]
    if all(not b for b in bases):
        return ()
    dims = spec.dims
    anchor = [b[0] - 1 if b else 0 for b in bases]
    out = [anchor]
    for j, b in enumerate(bases):
        for pt in b[1:]:
            idx = list(anchor)
            idx[j] = pt - 1
            out.append(idx)
    return tuple(int(np.ravel_multi_index(tuple(i), dims)) + 1 for i in out)


def default_base(spec: ActionSpec) -> tuple[int, ...]:
    """Base used when projecting: tensor base, concatenated factor bases, or greedy."""
    if isinstance(spec, Plain):
        return build_chain(spec.group).base
    if isinstance(spec, DirectSum):
        out = []
        offset = 0
        for f in spec.factors:
            out.extend(b + offset for b in default_base(f))
            offset += f.degree
        return tuple(out)
    if isinstance(spec, Tensor):
        return tensor_base(spec)
    raise TypeError(f"not an action spec: {spec!r}")


def chain_for(spec: ActionSpec) -> StabilizerChain:
    return build_chain(flatten(spec), default_base(spec))


# -- named groups ------------------------------------------------------------


def _check_n(n: int):
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise GroupError(f"invalid degree {n!r}")


def _full_cycle(n: int) -> Permutation:
    return from_cycles([list(range(1, n + 1))], n)


def symmetric(n: int) -> PermGroup:
    _check_n(n)
    if n == 1:
        return PermGroup.trivial(1)
    gens = [from_cycles([[1, 2]], n)]
    if n > 2:
        gens.append(_full_cycle(n))
    return PermGroup(n, tuple(gens), ("symmetric", n))


def alternating(n: int) -> PermGroup:
    _check_n(n)
    if n < 3:
        return PermGroup(n, (Permutation.identity(n),), ("alternating", n))
    gens = [from_cycles([[1, 2, 3]], n)]
    if n > 3:
        if n % 2:
            gens.append(_full_cycle(n))
        else:
            gens.append(from_cycles([list(range(2, n + 1))], n))
    return PermGroup(n, tuple(gens), ("alternating", n))


def cyclic(n: int) -> PermGroup:
    _check_n(n)
    if n == 1:
        return PermGroup(1, (Permutation.identity(1),), ("cyclic", 1))
    return PermGroup(n, (_full_cycle(n),), ("cyclic", n))


def dihedral(n: int) -> PermGroup:
    """Generated by ``(1 2 ... n)`` and the reflection ``(2 n)(3 n-1)...`` fixing 1."""
    _check_n(n)
    if n == 1:
        return PermGroup(1, (Permutation.identity(1),), ("dihedral", 1))
    gens = [_full_cycle(n)]
    pairs = [[i, n + 2 - i] for i in range(2, n + 1) if i < n + 2 - i]
    if pairs:
        gens.append(from_cycles(pairs, n))
    return PermGroup(n, tuple(gens), ("dihedral", n))


NAMED = {"symmetric": symmetric, "alternating": alternating, "cyclic": cyclic, "dihedral": dihedral}


# -- JSON --------------------------------------------------------------------


def group_spec_from_json(obj: dict) -> PermGroup:
    kind = obj.get("kind", "generators")
    if kind == "generators":
        return group_from_json(obj)
    if kind not in NAMED:
        raise GroupError(f"unknown group kind {kind!r}")
    if "degree" not in obj:
        raise GroupError("named group needs a degree")
    return NAMED[kind](int(obj["degree"]))


def spec_from_json(obj: dict) -> ActionSpec:
    """Parse a group/action spec.

    Accepted forms: ``{"kind": ..., "degree": n, "generators": [...]}``,
    ``{"tensor": [group, ...]}`` and ``{"direct_sum": [spec, ...]}``.
    """
    if not isinstance(obj, dict):
        raise GroupError("group spec must be a JSON object")
    if "tensor" in obj:
        return Tensor(tuple(group_spec_from_json(f) for f in obj["tensor"]))
    if "direct_sum" in obj:
        return DirectSum(tuple(spec_from_json(f) for f in obj["direct_sum"]))
    return Plain(group_spec_from_json(obj))
