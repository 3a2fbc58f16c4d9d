"""Dirichlet projections: minimise ``<g . x, r>`` over the orbit of ``x``.

The exact minimiser needs the whole group; :func:`descend` approximates it
by greedy steps along a generating set and :func:`descend_multi_seed`
restarts that walk from every cyclic shift of a matrix.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

from .actions import ActionSpec, DirectSum, Plain, Tensor, flatten, lift, shift
from .group import PermGroup, StabilizerChain, build_chain, enumerate_elements
from .perm import Permutation, compose, from_cycles, inverse, power, transposition


class DirichletError(ValueError):
    pass


def objective(x, r) -> float:
    x = np.asarray(x, dtype=np.float64).reshape(-1)
    r = np.asarray(r, dtype=np.float64).reshape(-1)
    if x.shape != r.shape:
        raise DirichletError(f"length mismatch: {x.shape[0]} vs {r.shape[0]}")
    return float(np.sum(x * r))


def _row_objectives(Y: np.ndarray, r: np.ndarray) -> np.ndarray:
    # same reduction as objective() so equal vectors give equal values
    return np.sum(Y * r, axis=1)


def _dedupe(perms: Sequence[Permutation]) -> tuple[Permutation, ...]:
    out = []
    seen = set()
    for p in perms:
        if p.is_identity() or p.array in seen:
            continue
        seen.add(p.array)
        out.append(p)
    return tuple(out)


def _group_generating_set(g: PermGroup) -> list[Permutation]:
    if g.tag and g.tag[0] == "symmetric" and g.degree > 1:
        n = g.degree
        return [transposition(i, i + 1, n) for i in range(1, n)]
    return list(g.generators) + [inverse(s) for s in g.generators]


def default_generating_set(spec: Union[ActionSpec, PermGroup]) -> tuple[Permutation, ...]:
    """Generators and their inverses; adjacent transpositions for symmetric factors."""
    if isinstance(spec, PermGroup):
        spec = Plain(spec)
    if isinstance(spec, Plain):
        return _dedupe(_group_generating_set(spec.group))
    if isinstance(spec, Tensor):
        dims = spec.dims
        return _dedupe([lift(t, j, dims) for j, h in enumerate(spec.factors) for t in _group_generating_set(h)])
    if isinstance(spec, DirectSum):
        out = []
        offset = 0
        for f in spec.factors:
            out.extend(shift(t, offset, spec.degree) for t in default_generating_set(f))
            offset += f.degree
        return _dedupe(out)
    raise TypeError(f"not an action spec: {spec!r}")


@dataclass(frozen=True)
class DirichletConfig:
    reference: tuple[float, ...]
    generating_set: tuple[Permutation, ...]
    max_steps: int = 10_000
    seeds: tuple[tuple[int, int], ...] | None = None

    def __post_init__(self):
        r = np.asarray(self.reference, dtype=float)
        if len(np.unique(r)) != len(r):
            raise DirichletError("reference entries must be pairwise distinct")
        for t in self.generating_set:
            if t.degree != len(r):
                raise DirichletError("generating set degree does not match reference length")
        if self.max_steps < 0:
            raise DirichletError("max_steps must be non-negative")

    @classmethod
    def for_spec(cls, spec: Union[ActionSpec, PermGroup], reference=None, generating_set=None,
                 max_steps: int = 10_000, seeds=None, check: bool = True) -> "DirichletConfig":
        n = spec.degree
        ref = tuple(float(v) for v in (reference if reference is not None else range(1, n + 1)))
        gens = tuple(generating_set) if generating_set is not None else default_generating_set(spec)
        cfg = cls(ref, gens, max_steps, tuple(seeds) if seeds is not None else None)
        if check:
            g = spec if isinstance(spec, PermGroup) else flatten(spec)
            chain = build_chain(g)
            for t in gens:
                if not chain.contains(t):
                    raise DirichletError(f"generating-set element {t!r} is not in the group")
        return cfg

    @property
    def r(self) -> np.ndarray:
        return np.asarray(self.reference, dtype=np.float64)


@dataclass
class DescentResult:
    canonical: np.ndarray
    witness: Permutation
    objective: float
    steps: int
    converged: bool
    trace: list[float] = field(default_factory=list)


def descend(x, cfg: DirichletConfig) -> DescentResult:
    """Greedy descent: move to the best neighbour ``t . y`` while it strictly improves.

    Ties prefer staying put, then the earliest element of the generating set.
    ``converged`` is False when ``max_steps`` ran out first.
    """
    arr = np.asarray(x, dtype=np.float64)
    y = arr.reshape(-1).copy()
    n = y.shape[0]
    r = cfg.r
    if r.shape[0] != n:
        raise DirichletError(f"length mismatch: {n} vs {r.shape[0]}")
    # row 0 is the identity so argmin's first-occurrence rule keeps ties at rest
    moves = np.asarray([tuple(range(n))] + [inverse(t).array for t in cfg.generating_set], dtype=np.intp)
    winv = np.arange(n)
    vals = _row_objectives(y[moves], r)
    trace = [float(vals[0])]
    steps = 0
    converged = False
    while True:
        k = int(np.argmin(vals))
        if k == 0:
            converged = True
            break
        if steps >= cfg.max_steps:
            break
        y = y[moves[k]]
        winv = winv[moves[k]]
        steps += 1
        vals = _row_objectives(y[moves], r)
        trace.append(float(vals[0]))
    witness = inverse(Permutation(tuple(int(v) for v in winv)))
    return DescentResult(y.reshape(arr.shape), witness, trace[-1], steps, converged, trace)


def _full_cycle(n: int) -> Permutation:
    return from_cycles([list(range(1, n + 1))], n)


def _better(a: DescentResult, b: DescentResult | None) -> bool:
    if b is None or a.objective < b.objective:
        return True
    if a.objective > b.objective:
        return False
    return tuple(a.canonical.reshape(-1)) < tuple(b.canonical.reshape(-1))


def seed_elements(spec: Tensor, seeds=None) -> list[Permutation]:
    """Shift elements ``(C_1^k, C_2^m)`` for ``1 <= k <= n_1``, ``1 <= m <= n_2``."""
    if not isinstance(spec, Tensor) or len(spec.factors) != 2:
        raise DirichletError("multi-seed descent needs a two-factor tensor action")
    n1, n2 = spec.dims
    c1, c2 = _full_cycle(n1), _full_cycle(n2)
    for c, chain in zip((c1, c2), spec.factor_chains):
        if not chain.contains(c):
            raise DirichletError(f"factor group does not contain the full cycle of degree {c.degree}")
    pairs = seeds if seeds is not None else [(k, m) for k in range(1, n1 + 1) for m in range(1, n2 + 1)]
    return [compose(lift(power(c1, k), 0, spec.dims), lift(power(c2, m), 1, spec.dims)) for k, m in pairs]


def descend_multi_seed(x, spec: Tensor, cfg: DirichletConfig) -> DescentResult:
    """Run :func:`descend` from every seed and keep the lowest objective.

    Ties go to the lexicographically smallest canonical vector.  ``steps``
    sums the steps over all seeds.
    """
    arr = np.asarray(x, dtype=np.float64)
    flat = arr.reshape(-1)
    best = None
    total = 0
    all_converged = True
    for s in seed_elements(spec, cfg.seeds):
        res = descend(flat[np.asarray(inverse(s).array)], cfg)
        total += res.steps
        all_converged &= res.converged
        res.witness = compose(res.witness, s)
        if _better(res, best):
            best = res
    best.canonical = best.canonical.reshape(arr.shape)
    best.steps = total
    best.converged = all_converged
    return best


def brute_force_min(chain: StabilizerChain, x, r=None, bound: int = 10**6) -> DescentResult:
    """Exact minimiser over the whole orbit; ties by lexicographically smallest ``g . x``."""
    arr = np.asarray(x, dtype=np.float64)
    flat = arr.reshape(-1)
    n = flat.shape[0]
    if n != chain.degree:
        raise DirichletError(f"length mismatch: {n} vs {chain.degree}")
    r = np.arange(1, n + 1, dtype=np.float64) if r is None else np.asarray(r, dtype=np.float64).reshape(-1)
    elems = enumerate_elements(chain, bound)
    winvs = np.asarray([inverse(g).array for g in elems], dtype=np.intp)
    Y = flat[winvs]
    vals = _row_objectives(Y, r)
    cand = np.flatnonzero(vals == vals.min())
    # lexsort keys run last-to-first; stable so the first element wins exact ties
    order = np.lexsort(Y[cand].T[::-1])
    k = int(cand[order[0]])
    return DescentResult(Y[k].reshape(arr.shape), elems[k], float(vals[k]), 0, True, [float(vals[k])])
