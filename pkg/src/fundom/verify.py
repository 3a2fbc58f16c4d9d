"""Brute-force oracles and randomized harnesses for the projection maps.

Everything here is desk-scale by construction: exhaustive routines refuse
degrees above 8, group enumeration above 10**6 elements and transversals
above 10**5 elements.
"""

from __future__ import annotations

import itertools
import math
import random
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import numpy as np

from .actions import ActionSpec, Plain, Tensor, flatten
from .dirichlet import (DirichletConfig, DirichletError, brute_force_min, descend, descend_multi_seed,
                        objective, seed_elements)
from .group import PermGroup, StabilizerChain, build_chain, enumerate_elements, random_element
from .perm import (Permutation, act_on_point, apply_to_vector, compose, conjugate, from_cycles, inverse,
                   rho, rho_inverse)
from .project import Projector, normalize_kind

MAX_DEGREE = 8
MAX_GROUP = 10**6
MAX_TRANSVERSAL = 10**5


class VerificationError(ValueError):
    """Precondition or bound violation (not a failed check)."""


def _as_spec(spec) -> ActionSpec:
    return Plain(spec) if isinstance(spec, PermGroup) else spec


def _check_degree(n: int):
    if n > MAX_DEGREE:
        raise VerificationError(f"degree {n} exceeds the exhaustive bound {MAX_DEGREE}")


# -- relabelling -----------------------------------------------------------


def partitions(chain: StabilizerChain) -> list[list[frozenset]]:
    """The refinement sequence ``Pi_0 = {N}, Pi_1, ..., Pi_k``.

    ``Pi_i`` replaces the part containing ``b_i`` by the nonempty sets among
    ``{b_i}``, ``Delta_i - {b_i}`` and ``Gamma_i - Delta_i``.
    """
    n = chain.degree
    current = [frozenset(range(1, n + 1))]
    out = [list(current)]
    for lv in chain.levels:
        b, delta = lv.base_point, frozenset(lv.orbit)
        gamma = next(p for p in current if b in p)
        if not delta <= gamma:
            raise VerificationError("basic orbit escapes its partition block")
        pieces = [frozenset({b}), delta - {b}, gamma - delta]
        current = [p for p in current if p != gamma] + [p for p in pieces if p]
        out.append(list(current))
    return out


def reindex(chain: StabilizerChain) -> Permutation:
    """Relabelling ``s`` making every partition block a run of consecutive points.

    Point ``m`` is renamed ``m . s``.  At each level the digits of the block
    containing the base point are reassigned in the order: base point,
    rest of the basic orbit, rest of the block (each increasing).  So base
    points stay minimal in their orbits.
    """
    n = chain.degree
    sigma = list(range(n + 1))  # old label -> new label, 1-indexed
    parts = [list(range(1, n + 1))]
    for lv in chain.levels:
        b = sigma[lv.base_point]
        delta = {sigma[j] for j in lv.orbit}
        gamma = next(p for p in parts if b in p)
        digits = sorted(gamma)
        order = [b] + sorted(delta - {b}) + sorted(set(gamma) - delta)
        tau = dict(zip(order, digits))
        sigma = [tau.get(v, v) for v in sigma]
        parts.remove(gamma)
        m = len(delta)
        parts.extend(p for p in ([digits[0]], digits[1:m], digits[m:]) if p)
    # m . s = s^-1(m) = sigma(m)
    return inverse(Permutation(tuple(v - 1 for v in sigma[1:])))


def relabel_chain(chain: StabilizerChain, s: Permutation) -> StabilizerChain:
    """Chain of the conjugate ``s^-1 G s`` with base ``B . s``."""
    g = chain.group
    gs = PermGroup(g.degree, tuple(conjugate(h, s) for h in g.generators))
    base = [act_on_point(b, s) for b in chain.base]
    out = build_chain(gs, base)
    if out.base != tuple(base):
        raise VerificationError("relabelled base is not a base of the conjugate group")
    return out


def reindexed(chain: StabilizerChain) -> tuple[Permutation, StabilizerChain]:
    s = reindex(chain)
    return s, (chain if s.is_identity() else relabel_chain(chain, s))


# -- Dixon transversal -----------------------------------------------------


@dataclass
class DixonData:
    chain: StabilizerChain
    partitions: list[list[frozenset]]
    blocks: list[frozenset]
    U: list[list[Permutation]]
    H: list[Permutation]
    R: list[Permutation]


def _sym(points: Sequence[int], n: int) -> list[Permutation]:
    pts = sorted(points)
    out = []
    for img in itertools.permutations(pts):
        a = list(range(n))
        for p, q in zip(pts, img):
            a[p - 1] = q - 1
        out.append(Permutation(tuple(a)))
    return out


def _product_sets(A: list[Permutation], B: list[Permutation]) -> list[Permutation]:
    return [compose(a, b) for a in A for b in B]


def transversal_factor(delta: Iterable[int], rest: Iterable[int], n: int) -> list[Permutation]:
    """Right transversal of ``Sym(delta) x Sym(rest)`` in ``Sym(delta + rest)``.

    Each representative starts as a product of transpositions pairing an
    increasing selection from ``delta`` with one from ``rest``, then is
    reordered so both halves of its rank vector increase.
    """
    D, E = sorted(delta), sorted(rest)
    out = []
    for l in range(min(len(D), len(E)) + 1):
        for left in itertools.combinations(D, l):
            for right in itertools.combinations(E, l):
                u_tilde = from_cycles([[a, b] for a, b in zip(left, right)], n)
                c = list(rho(u_tilde))
                for half in (D, E):
                    vals = sorted(c[p - 1] for p in half)
                    for p, v in zip(half, vals):
                        c[p - 1] = v
                out.append(rho_inverse(c))
    return out


def dixon_transversal(chain: StabilizerChain, bound: int = MAX_TRANSVERSAL) -> DixonData:
    """The transversal ``R = H_k U_k ... U_1`` for a reindexed chain."""
    n = chain.degree
    _check_degree(n)
    if not reindex(chain).is_identity():
        raise VerificationError("chain is not reindexed; use reindexed(chain) first")
    size = math.factorial(n) // chain.order()
    if size > bound:
        raise VerificationError(f"transversal size {size} exceeds bound {bound}")
    pis = partitions(chain)
    blocks, U = [], []
    for i, lv in enumerate(chain.levels):
        gamma = next(p for p in pis[i] if lv.base_point in p)
        blocks.append(gamma)
        delta = set(lv.orbit)
        U.append(transversal_factor(delta, gamma - delta, n))
    H = [Permutation.identity(n)]
    for part in pis[-1]:
        H = _product_sets(H, _sym(part, n))
    R = H
    for Ui in reversed(U):
        R = _product_sets(R, Ui)
    return DixonData(chain, pis, blocks, U, H, R)


def check_transversal(data: DixonData, chain: StabilizerChain | None = None) -> dict:
    """Check ``R`` meets every right coset ``G r`` exactly once."""
    chain = chain or data.chain
    n = chain.degree
    elems = enumerate_elements(chain, MAX_GROUP)
    labels = set()
    for r in data.R:
        labels.add(min(compose(g, r).array for g in elems))
    distinct = len(labels) == len(data.R)
    covers = len(labels) * len(elems) == math.factorial(n)
    pair_failures = None
    if len(data.R) <= 400:
        pair_failures = 0
        for a, b in itertools.combinations(data.R, 2):
            if chain.contains(compose(b, inverse(a))):
                pair_failures += 1
    ok = distinct and covers and len(data.R) == math.factorial(n) // len(elems) and not pair_failures
    return {"size": len(data.R), "expected": math.factorial(n) // len(elems), "disjoint": distinct,
            "covers": covers, "pair_failures": pair_failures, "passed": ok}


# -- images ----------------------------------------------------------------


def all_rank_vectors(n: int) -> np.ndarray:
    _check_degree(n)
    return np.asarray(list(itertools.permutations(range(1, n + 1))), dtype=np.int64)


def projected_image(chain: StabilizerChain, kind: str = "asc", spec: ActionSpec | None = None) -> set:
    """Distinct canonical forms of all ``n!`` rank vectors."""
    spec = spec if spec is not None else Plain(chain.group)
    P = Projector(spec, chain)
    C = all_rank_vectors(chain.degree)
    canon, _ = P.project_batch(C, kind)
    canon = canon.reshape(len(C), -1).astype(np.int64)
    return {tuple(int(v) for v in row) for row in canon}


def count_canonical_forms(chain: StabilizerChain, kind: str = "asc", spec: ActionSpec | None = None) -> int:
    return len(projected_image(chain, kind, spec))


def inequality_set(chain: StabilizerChain, descending: bool = False) -> set:
    """Rank vectors whose base entries are extreme over each basic orbit."""
    out = set()
    for c in all_rank_vectors(chain.degree):
        ok = True
        for lv in chain.levels:
            cb = c[lv.base_point - 1]
            vals = [c[j - 1] for j in lv.orbit]
            if (cb < max(vals)) if descending else (cb > min(vals)):
                ok = False
                break
        if ok:
            out.add(tuple(int(v) for v in c))
    return out


def characterize_image(chain: StabilizerChain, kind: str = "asc") -> dict:
    kind = normalize_kind(kind)
    if kind not in ("asc", "desc"):
        raise VerificationError("image characterization applies to asc and desc")
    s, ch = reindexed(chain)
    image = projected_image(ch, kind)
    ineq = inequality_set(ch, kind == "desc")
    expected = math.factorial(chain.degree) // chain.order()
    return {"relabeling": s.images, "image_size": len(image), "inequality_size": len(ineq),
            "expected": expected, "passed": image == ineq and len(image) == expected}


# -- galleries -------------------------------------------------------------


def gallery_neighbours(c: Sequence[int]) -> list[tuple[int, ...]]:
    """Vectors obtained by swapping the entries ``v`` and ``v + 1``."""
    pos = {v: i for i, v in enumerate(c)}
    out = []
    for v in range(1, len(c)):
        a = list(c)
        i, j = pos[v], pos[v + 1]
        a[i], a[j] = a[j], a[i]
        out.append(tuple(a))
    return out


def gallery_connected(vertices: Iterable[Sequence[int]]) -> tuple[bool, dict]:
    """BFS over value-consecutive swaps; returns ``(connected, parent_map)``.

    The parent map is a spanning tree of the reached component (root maps
    to None).
    """
    verts = {tuple(int(v) for v in c) for c in vertices}
    if not verts:
        return True, {}
    root = min(verts)
    parent = {root: None}
    queue = deque([root])
    while queue:
        c = queue.popleft()
        for d in gallery_neighbours(c):
            if d in verts and d not in parent:
                parent[d] = c
                queue.append(d)
    return len(parent) == len(verts), parent


# -- randomized harnesses --------------------------------------------------


def _word_length(n: int) -> int:
    return 3 * n + 10


def _sample_elements(group: PermGroup, count: int, rng: random.Random) -> list[Permutation]:
    L = _word_length(group.degree)
    return [random_element(group, L, rng) for _ in range(count)]


def _gather(X: np.ndarray, perms: Sequence[Permutation]) -> np.ndarray:
    """Row-wise left action of ``perms[i]`` on ``X[i]``."""
    inv = np.asarray([inverse(g).array for g in perms], dtype=np.intp)
    return np.take_along_axis(X, inv, axis=1)


def harness_invariance(spec, kind: str = "asc", samples: int = 1000, seed: int = 0,
                       tied_samples: int | None = None) -> dict:
    """Invariance, cocycle, idempotence and membership on random inputs.

    Continuous inputs are asserted (``failures``); a tied-input track with
    small repeated integers is only measured.
    """
    spec = _as_spec(spec)
    kind = normalize_kind(kind)
    P = Projector(spec)
    n = P.degree
    group = flatten(spec)
    rng = random.Random(seed)
    nrng = np.random.default_rng(seed)
    gs = _sample_elements(group, samples, rng)
    X = nrng.standard_normal((samples, n))
    GX = _gather(X, gs)
    cx, wx = P.project_batch(X, kind)
    cgx, wgx = P.project_batch(GX, kind)
    cx, cgx = cx.reshape(samples, n), cgx.reshape(samples, n)
    ccx, _ = P.project_batch(cx, kind)
    ccx = ccx.reshape(samples, n)
    garr = np.asarray([g.array for g in gs], dtype=np.int64)
    # witness(g.x) = witness(x) g^-1  <=>  winv(g.x) = g o winv(x)
    cocycle_ok = np.all(wgx == np.take_along_axis(garr, wx, axis=1), axis=1)
    invariant_ok = np.all(cx == cgx, axis=1)
    idem_ok = np.all(ccx == cx, axis=1)
    member_ok = np.asarray([P.chain.contains(inverse(Permutation(tuple(int(v) for v in w)))) for w in wx])
    details = []
    for name, ok in (("invariance", invariant_ok), ("cocycle", cocycle_ok), ("idempotence", idem_ok),
                     ("membership", member_ok)):
        bad = np.flatnonzero(~ok)
        details.append({"check": name, "failures": int(len(bad)), "first_failing_trials": bad[:5].tolist()})
    failures = int(np.sum(~(invariant_ok & cocycle_ok & idem_ok & member_ok)))

    tied = tied_samples if tied_samples is not None else samples
    T = nrng.integers(0, 3, size=(tied, n)).astype(np.float64)
    tg = _sample_elements(group, tied, rng)
    ct, _ = P.project_batch(T, kind)
    ctg, _ = P.project_batch(_gather(T, tg), kind)
    tied_rate = float(np.mean(np.all(ct.reshape(tied, n) == ctg.reshape(tied, n), axis=1))) if tied else None
    return {"suite": "invariance", "kind": kind, "trials": samples, "failures": failures,
            "details": details, "tied_trials": tied, "tied_invariance_rate": tied_rate,
            "passed": failures == 0}


def harness_idempotence(spec, kind: str = "asc", samples: int = 1000, seed: int = 0) -> dict:
    spec = _as_spec(spec)
    P = Projector(spec)
    X = np.random.default_rng(seed).standard_normal((samples, P.degree))
    c1, _ = P.project_batch(X, kind)
    c2, _ = P.project_batch(c1, kind)
    bad = np.flatnonzero(~np.all(c1.reshape(samples, -1) == c2.reshape(samples, -1), axis=1))
    return {"suite": "idempotence", "kind": normalize_kind(kind), "trials": samples, "failures": int(len(bad)),
            "details": [{"first_failing_trials": bad[:5].tolist()}], "passed": len(bad) == 0}


def harness_conjugation(spec, s: Permutation, samples: int = 500, seed: int = 0, kind: str = "asc") -> dict:
    """Projection for ``s^-1 G s`` (base ``B . s``) against ``s^-1 . pi(s . x)``.

    The count of trials also satisfying ``s . pi(s^-1 . x)`` is reported
    but not asserted; the two agree when ``s`` is an involution.
    """
    spec = _as_spec(spec)
    P = Projector(spec)
    if s.degree != P.degree:
        raise VerificationError("relabelling degree does not match the action")
    cs = relabel_chain(P.chain, s)
    Ps = Projector(Plain(cs.group), cs)
    X = np.random.default_rng(seed).standard_normal((samples, P.degree))
    lhs, _ = Ps.project_batch(X, kind)
    lhs = lhs.reshape(samples, -1)
    s_arr, sinv_arr = np.asarray(s.array), np.asarray(inverse(s).array)
    # s . x = x[s^-1]
    rhs, _ = P.project_batch(X[:, sinv_arr], kind)
    rhs = rhs.reshape(samples, -1)[:, s_arr]
    alt, _ = P.project_batch(X[:, s_arr], kind)
    alt = alt.reshape(samples, -1)[:, sinv_arr]
    bad = np.flatnonzero(~np.all(lhs == rhs, axis=1))
    return {"suite": "conjugation", "relabeling": s.images, "trials": samples, "failures": int(len(bad)),
            "details": [{"first_failing_trials": bad[:5].tolist()}],
            "s_pi_sinv_matches": int(np.sum(np.all(lhs == alt, axis=1))), "passed": len(bad) == 0}


def dirichlet_oracle(spec, samples: int = 200, seed: int = 0, low: int = 0, high: int = 10) -> dict:
    """Descent against the brute-force minimiser on random integer inputs.

    Asserted: per-step strict decrease, witness soundness, oracle dominance
    and invariance of unique exact minimisers.  Measured: match rate.
    """
    spec = _as_spec(spec)
    group = flatten(spec)
    chain = build_chain(group)
    cfg = DirichletConfig.for_spec(spec)
    r = cfg.r
    multi = False
    if isinstance(spec, Tensor) and len(spec.factors) == 2:
        try:
            multi = bool(seed_elements(spec, cfg.seeds))
        except DirichletError:
            multi = False
    rng = random.Random(seed)
    nrng = np.random.default_rng(seed)
    elems = enumerate_elements(chain, MAX_GROUP)
    counts = dict(monotonicity=0, soundness=0, dominance=0, exact_invariance=0)
    matches = 0
    unique_trials = 0
    for t in range(samples):
        x = nrng.integers(low, high, size=spec.degree).astype(np.float64)
        if multi:
            res = descend_multi_seed(x.reshape(spec.shape), spec, cfg)
        else:
            res = descend(x, cfg)
        single = descend(x, cfg)
        if any(b >= a for a, b in zip(single.trace, single.trace[1:])):
            counts["monotonicity"] += 1
        canon = res.canonical.reshape(-1)
        if not (chain.contains(res.witness) and np.array_equal(apply_to_vector(res.witness, x), canon)):
            counts["soundness"] += 1
        exact = brute_force_min(chain, x, r)
        ex = objective(exact.canonical, r)
        if not (ex <= objective(canon, r) <= objective(x, r)):
            counts["dominance"] += 1
        if np.array_equal(exact.canonical.reshape(-1), canon):
            matches += 1
        orbit_vals = [objective(apply_to_vector(g, x), r) for g in elems]
        minimisers = {tuple(apply_to_vector(g, x)) for g, v in zip(elems, orbit_vals) if v == ex}
        if len(minimisers) == 1:
            unique_trials += 1
            # every element for small groups, a sample otherwise
            probe = elems if len(elems) <= 24 else rng.sample(elems, 5)
            for g in probe:
                other = brute_force_min(chain, apply_to_vector(g, x), r)
                if not np.array_equal(other.canonical, exact.canonical):
                    counts["exact_invariance"] += 1
                    break
    failures = sum(counts.values())
    return {"suite": "dirichlet-oracle", "trials": samples, "failures": failures,
            "details": [{"check": k, "failures": v} for k, v in counts.items()],
            "multi_seed": multi, "match_rate": matches / samples if samples else None,
            "unique_minimizer_trials": unique_trials, "passed": failures == 0}


# -- suites ----------------------------------------------------------------


def default_relabelings(n: int, seed: int = 0) -> list[Permutation]:
    rng = random.Random(seed)
    out = []
    if n >= 2:
        out.append(from_cycles([[1, 2]], n))
    if n >= 3:
        out.append(from_cycles([list(range(1, n + 1))], n))
        a = list(range(n))
        rng.shuffle(a)
        out.append(Permutation(tuple(a)))
    return out or [Permutation.identity(n)]


def suite_counting(spec) -> dict:
    spec = _as_spec(spec)
    P = Projector(spec)
    n = P.degree
    _check_degree(n)
    expected = math.factorial(n) // P.chain.order()
    details = []
    for kind in ("asc", "desc"):
        got = count_canonical_forms(P.chain, kind, spec)
        details.append({"kind": kind, "count": got, "expected": expected, "ok": got == expected})
    failures = sum(not d["ok"] for d in details)
    return {"suite": "counting", "trials": len(details), "failures": failures, "details": details,
            "passed": failures == 0}


def suite_transversal(spec) -> dict:
    spec = _as_spec(spec)
    chain = Projector(spec).chain
    s, ch = reindexed(chain)
    data = dixon_transversal(ch)
    report = check_transversal(data, ch)
    rho_R = {rho(r) for r in data.R}
    image = projected_image(ch, "asc")
    report["rho_R_equals_image"] = rho_R == image
    report["relabeling"] = s.images
    ok = report["passed"] and report["rho_R_equals_image"]
    return {"suite": "transversal", "trials": 1, "failures": int(not ok), "details": [report], "passed": ok}


def suite_gallery(spec) -> dict:
    spec = _as_spec(spec)
    chain = Projector(spec).chain
    s, ch = reindexed(chain)
    data = dixon_transversal(ch)
    ok, tree = gallery_connected(rho(r) for r in data.R)
    return {"suite": "gallery", "trials": 1, "failures": int(not ok),
            "details": [{"chambers": len(data.R), "connected": ok, "tree_edges": len(tree) - 1 if tree else 0,
                         "relabeling": s.images}],
            "passed": ok}


def suite_image(spec) -> dict:
    spec = _as_spec(spec)
    chain = Projector(spec).chain
    details = [dict(kind=k, **characterize_image(chain, k)) for k in ("asc", "desc")]
    failures = sum(not d["passed"] for d in details)
    return {"suite": "image", "trials": len(details), "failures": failures, "details": details,
            "passed": failures == 0}


def suite_conjugation(spec, samples: int, seed: int) -> dict:
    spec = _as_spec(spec)
    reps = [harness_conjugation(spec, s, samples, seed + i) for i, s in enumerate(default_relabelings(spec.degree, seed))]
    failures = sum(r["failures"] for r in reps)
    return {"suite": "conjugation", "trials": sum(r["trials"] for r in reps), "failures": failures,
            "details": reps, "passed": failures == 0}


SUITES = ("invariance", "counting", "gallery", "transversal", "image", "conjugation", "idempotence",
          "dirichlet-oracle")


def run_suite(name: str, spec, trials: int = 1000, seed: int = 0, kind: str = "asc",
              group_spec=None) -> dict:
    """Run one named suite; ``group_spec`` (the JSON description) is echoed in the report."""
    report = _run_suite(name, spec, trials, seed, kind)
    report["group_spec"] = group_spec
    report["seed"] = seed
    return report


def _run_suite(name, spec, trials, seed, kind):
    if name == "invariance":
        return harness_invariance(spec, kind, trials, seed)
    if name == "idempotence":
        return harness_idempotence(spec, kind, trials, seed)
    if name == "counting":
        return suite_counting(spec)
    if name == "transversal":
        return suite_transversal(spec)
    if name == "gallery":
        return suite_gallery(spec)
    if name == "image":
        return suite_image(spec)
    if name == "conjugation":
        return suite_conjugation(spec, trials, seed)
    if name == "dirichlet-oracle":
        return dirichlet_oracle(spec, trials, seed)
    raise VerificationError(f"unknown suite {name!r}; expected one of {SUITES}")
