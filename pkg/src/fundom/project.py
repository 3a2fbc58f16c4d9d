"""Combinatorial fundamental-domain projections.

A projection picks, for each input ``x``, a witness ``w`` in the group and
returns ``w . x``.  The witness depends only on the integer rank vector of
a perturbed copy of ``x`` (or of ``mu(x)`` for the averaging kinds), and is
assembled level by level down the stabilizer chain: at level ``i`` the
smallest (largest, for descending kinds) entry indexed by the basic orbit
is carried onto the base point by a transversal element.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from . import _kernels
from .actions import ActionSpec, Plain, Tensor, chain_for, lift
from .group import PermGroup, StabilizerChain, build_chain
from .perm import Permutation, compose, inverse, sign

KINDS = ("asc", "desc", "asc_avg", "desc_avg")


class ProjectionError(ValueError):
    pass


def normalize_kind(kind: str) -> str:
    k = kind.replace("-", "_")
    if k not in KINDS:
        raise ProjectionError(f"unknown projection kind {kind!r}; expected one of {KINDS}")
    return k


@dataclass(frozen=True)
class PerturbationConfig:
    """Tie-breaking vector added (scaled) to the input before ranking.

    Entries must be pairwise distinct.  Their spread must stay below 1 so
    the perturbation never reorders entries that were already unequal.
    """

    epsilon: tuple[float, ...]

    def __post_init__(self):
        eps = np.asarray(self.epsilon, dtype=float)
        if len(np.unique(eps)) != len(eps):
            raise ProjectionError("perturbation entries must be pairwise distinct")
        if len(eps) and not np.all(np.isfinite(eps)):
            raise ProjectionError("perturbation entries must be finite")
        if len(eps) > 1 and eps.max() - eps.min() >= 1:
            raise ProjectionError("perturbation spread must be < 1")

    @classmethod
    def default(cls, n: int) -> "PerturbationConfig":
        return cls(tuple((np.arange(1, n + 1) / (2 * n)).tolist()))

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.epsilon, dtype=np.float64)


@dataclass
class ProjectionResult:
    canonical: np.ndarray
    witness: Permutation


def _as_rows(x, n: int) -> np.ndarray:
    arr = np.asarray(x, dtype=np.float64)
    if arr.size != n:
        raise ProjectionError(f"input has {arr.size} entries, expected {n}")
    if not np.all(np.isfinite(arr)):
        raise ProjectionError("input contains non-finite values")
    return arr.reshape(1, n)


def rank_hat(x, cfg: PerturbationConfig | None = None) -> np.ndarray:
    """Ranks 1..n of ``x + d * eps``, where ``d`` is the smallest nonzero gap in ``x``.

    The result has the shape of ``x``.
    """
    arr = np.asarray(x, dtype=np.float64)
    n = arr.size
    cfg = cfg or PerturbationConfig.default(n)
    if len(cfg.epsilon) != n:
        raise ProjectionError(f"perturbation length {len(cfg.epsilon)} != input length {n}")
    return _kernels.rank_batch(_as_rows(arr, n), cfg.array)[0].reshape(arr.shape)


def _phi(chain: StabilizerChain, hat, descending: bool) -> Permutation:
    hat = np.asarray(hat).reshape(1, -1)
    if hat.shape[1] != chain.degree:
        raise ProjectionError(f"rank vector length {hat.shape[1]} != degree {chain.degree}")
    winv = _kernels.phi_batch(hat, *chain.kernel_arrays(), descending)[0]
    return inverse(Permutation(tuple(int(v) for v in winv)))


def phi_ascending(chain: StabilizerChain, hat) -> Permutation:
    """Witness carrying each level's orbit-minimal entry onto its base point."""
    return _phi(chain, hat, False)


def phi_descending(chain: StabilizerChain, hat) -> Permutation:
    return _phi(chain, hat, True)


def mu_average(x, dims: Sequence[int] | None = None) -> np.ndarray:
    """Sum over axes of the fiber average through each entry.

    Fiber sums use ``math.fsum`` so they do not depend on entry order.
    """
    arr = np.asarray(x, dtype=np.float64)
    if dims is not None:
        dims = tuple(int(d) for d in dims)
        if arr.size != int(np.prod(dims)):
            raise ProjectionError(f"shape {arr.shape} does not match dims {dims}")
        arr = arr.reshape(dims)
    out = np.zeros(arr.shape, dtype=np.float64)
    for axis, nj in enumerate(arr.shape):
        sums = np.apply_along_axis(math.fsum, axis, arr)
        out = out + np.expand_dims(sums / nj, axis)
    return out


class Projector:
    """Projection onto a fundamental domain for a fixed action and chain.

    ``spec`` may be an :class:`ActionSpec` or a bare :class:`PermGroup`.
    When no chain is given the action's default base is used (the tensor base
    for tensor actions, the smallest-moved-point base otherwise).
    """

    def __init__(self, spec: Union[ActionSpec, PermGroup], chain: StabilizerChain | None = None,
                 cfg: PerturbationConfig | None = None):
        if isinstance(spec, PermGroup):
            spec = Plain(spec)
        self.spec = spec
        self.chain = chain if chain is not None else chain_for(spec)
        self.degree = self.chain.degree
        if spec.degree != self.degree:
            raise ProjectionError(f"chain degree {self.degree} != spec degree {spec.degree}")
        self.shape = spec.shape
        self.cfg = cfg or PerturbationConfig.default(self.degree)
        if len(self.cfg.epsilon) != self.degree:
            raise ProjectionError("perturbation length does not match degree")
        self._eps = self.cfg.array
        self._arrays = self.chain.kernel_arrays()

    def _rows(self, X) -> np.ndarray:
        arr = np.asarray(X, dtype=np.float64)
        if arr.size % self.degree:
            raise ProjectionError(f"input size {arr.size} is not a multiple of degree {self.degree}")
        rows = arr.reshape(-1, self.degree)
        if not np.all(np.isfinite(rows)):
            raise ProjectionError("input contains non-finite values")
        return rows

    def _score(self, rows: np.ndarray, kind: str) -> np.ndarray:
        if kind.endswith("_avg"):
            if not isinstance(self.spec, Tensor):
                raise ProjectionError("averaging projections need a tensor action")
            dims = self.spec.dims
            return np.stack([mu_average(r, dims).reshape(-1) for r in rows]) if len(rows) else rows
        return rows

    def witness_inverse_batch(self, X, kind: str = "asc") -> np.ndarray:
        """0-indexed images of each witness inverse, shape ``(B, n)``."""
        kind = normalize_kind(kind)
        rows = self._rows(X)
        hats = _kernels.rank_batch(self._score(rows, kind), self._eps)
        return _kernels.phi_batch(hats, *self._arrays, kind.startswith("desc"))

    def project_batch(self, X, kind: str = "asc") -> tuple[np.ndarray, np.ndarray]:
        """Canonical forms for a batch; returns ``(canonical, witness_inverses)``.

        ``canonical`` has shape ``(B, *shape)``.
        """
        rows = self._rows(X)
        winv = self.witness_inverse_batch(rows, kind)
        canon = np.take_along_axis(rows, winv, axis=1)
        return canon.reshape((len(rows),) + tuple(self.shape)), winv

    def project(self, x, kind: str = "asc") -> ProjectionResult:
        arr = np.asarray(x, dtype=np.float64)
        if arr.size != self.degree:
            raise ProjectionError(f"input has {arr.size} entries, expected {self.degree}")
        canon, winv = self.project_batch(arr.reshape(1, -1), kind)
        witness = inverse(Permutation(tuple(int(v) for v in winv[0])))
        return ProjectionResult(canon[0].reshape(arr.shape), witness)


def project(spec: Union[ActionSpec, PermGroup], x, kind: str = "asc",
            cfg: PerturbationConfig | None = None, chain: StabilizerChain | None = None) -> ProjectionResult:
    return Projector(spec, chain, cfg).project(x, kind)


def phi_tensor_fastpath(spec: Tensor, hat, descending: bool = False) -> Permutation:
    """Witness for a tensor action computed factor by factor.

    Find the extreme entry over the orbit of the anchor multi-index, then
    run each factor's witness on the fiber through that entry along its own
    axis, and lift.  Agrees with the flat witness for the tensor base.
    """
    dims = spec.dims
    hat = np.asarray(hat).reshape(dims)
    chains = spec.factor_chains
    anchor_orbits = [c.orbits[0] if c.base else (1,) for c in chains]
    best, best_idx = None, None
    for idx in itertools.product(*anchor_orbits):
        v = hat[tuple(i - 1 for i in idx)]
        if best is None or (v > best if descending else v < best):
            best, best_idx = v, idx
    m = [i - 1 for i in best_idx]
    w = Permutation.identity(spec.degree)
    for j, c in enumerate(chains):
        if not c.base:
            continue
        sl = list(m)
        sl[j] = slice(None)
        fiber = hat[tuple(sl)]
        wj = _phi(c, fiber, descending)
        w = compose(lift(wj, j, dims), w)
    return w


def phi_named(tag: tuple, hat, descending: bool = False) -> Permutation:
    """Closed-form witnesses for named groups (their default bases).

    symmetric: sort; alternating: sort, then fix parity with the last two
    slots; cyclic: rotate the extreme entry to the front; dihedral: rotate,
    then reflect if the last entry beats the second.
    """
    name, n = tag[0], tag[1]
    h = np.asarray(hat).reshape(-1)
    if len(h) != n:
        raise ProjectionError("rank vector length does not match group degree")
    key = -h if descending else h
    if name == "symmetric":
        winv = np.argsort(key, kind="stable")
    elif name == "alternating":
        winv = np.argsort(key, kind="stable")
        if n >= 3 and sign(Permutation(tuple(int(v) for v in winv))) < 0:
            winv[[n - 2, n - 1]] = winv[[n - 1, n - 2]]
        elif n < 3:
            winv = np.arange(n)
    elif name in ("cyclic", "dihedral"):
        m = int(np.argmin(key))
        winv = (np.arange(n) + m) % n
        if name == "dihedral" and n >= 3 and key[winv[n - 1]] < key[winv[1]]:
            winv = winv[(-np.arange(n)) % n]
    else:
        raise ProjectionError(f"no closed form for {name!r}")
    return inverse(Permutation(tuple(int(v) for v in winv)))
