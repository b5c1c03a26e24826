"""Counting tree modules.

``tm_count`` enumerates tree modules of an arbitrary quiver directly:
pushforwards of the all-ones representation of every tree on d vertices along
every (sincere) quiver morphism, filtered by absolute indecomposability and
collapsed to isomorphism classes.  ``tm_sg`` assembles the count for the loop
quiver S_g from tree quivers and their orbit polynomials, and
``tm_sg_bruteforce`` is the direct count used to check it.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Iterator, Sequence

from .exact import BinomialPolyG
from .fields import QQ
from .quivers import (
    Quiver,
    ResourceLimitError,
    TreeQuiverEntry,
    catalog_upto,
    conflict_graph,
    enumerate_tree_quivers,
    orbit_count_poly,
)
from .reps import (
    QuiverMorphism,
    Rep,
    hom_space,
    is_absolutely_indecomposable,
    is_isomorphic,
    pushforward,
    tree_identity_rep,
)
from . import linalg

log = logging.getLogger(__name__)

DEFAULT_MAX_D = 6
BRUTE_FORCE_GUARD = 10**6


def enumerate_morphisms(
    t: Quiver,
    q: Quiver,
    sincere: bool = False,
    target_dims: Sequence[int] | None = None,
) -> Iterator[QuiverMorphism]:
    """All quiver morphisms from the tree t to q, in a fixed backtracking order."""
    if not t.is_tree():
        raise ValueError(f"not a tree quiver: {t}")
    n, nq = t.vertex_count, q.vertex_count
    if nq == 0:
        return
    nb = t.neighbours()
    order = [0]
    link = [None] * n  # (parent, arrow, outward-from-parent)
    seen = {0}
    for v in order:
        for a, u, outward in nb[v]:
            if u not in seen:
                seen.add(u)
                link[u] = (v, a, outward)
                order.append(u)
    out_arrows = [[] for _ in range(nq)]
    in_arrows = [[] for _ in range(nq)]
    for alpha, (s, h) in enumerate(q.arrows):
        out_arrows[s].append(alpha)
        in_arrows[h].append(alpha)
    cap = list(target_dims) if target_dims is not None else None
    if cap is not None and (len(cap) != nq or sum(cap) != n):
        return
    vmap = [-1] * n
    amap = [-1] * t.arrow_count
    used = [0] * nq

    def feasible(placed: int) -> bool:
        if cap is not None:
            return True
        if sincere:
            missing = sum(1 for c in used if c == 0)
            return missing <= n - placed
        return True

    def place(v: int, x: int) -> bool:
        if cap is not None and used[x] >= cap[x]:
            return False
        vmap[v] = x
        used[x] += 1
        return True

    def unplace(v: int) -> None:
        used[vmap[v]] -= 1
        vmap[v] = -1

    def rec(i: int) -> Iterator[QuiverMorphism]:
        if i == n:
            if sincere and 0 in used:
                return
            yield QuiverMorphism(t, q, tuple(vmap), tuple(amap))
            return
        v = order[i]
        parent, a, outward = link[v]
        fp = vmap[parent]
        choices = out_arrows[fp] if outward else in_arrows[fp]
        for alpha in choices:
            x = q.arrows[alpha][1] if outward else q.arrows[alpha][0]
            if not place(v, x):
                continue
            amap[a] = alpha
            if feasible(i + 1):
                yield from rec(i + 1)
            amap[a] = -1
            unplace(v)

    for root in range(nq):
        if place(order[0], root):
            if feasible(1):
                yield from rec(1)
            unplace(order[0])


@dataclass(frozen=True)
class TreeModuleClass:
    representative: Rep
    dim_vector: tuple[int, ...]
    tree: Quiver
    tree_code: bytes
    morphism: QuiverMorphism
    end_dim: int

    def to_json(self) -> dict:
        return {
            "dim_vector": list(self.dim_vector),
            "tree_code": self.tree_code.decode("ascii"),
            "tree_arrows": [list(a) for a in self.tree.arrows],
            "labels": list(self.morphism.arrow_map),
            "vertex_map": list(self.morphism.vertex_map),
        }


@dataclass
class TMReport:
    parameters: dict
    count: int | BinomialPolyG
    classes: list[TreeModuleClass] = field(default_factory=list)
    provenance: str = "brute-force"
    metadata: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {"provenance": self.provenance, **self.parameters}
        if isinstance(self.count, BinomialPolyG):
            out["basis"] = "binomial"
            out["coeffs"] = {str(k): int(c) if c.denominator == 1 else str(c) for k, c in self.count.coeffs.items()}
        else:
            out["count"] = self.count
        out["classes"] = [c.to_json() for c in self.classes]
        if self.metadata:
            out["metadata"] = self.metadata
        return out


def _invariant(rep: Rep, end_dim: int) -> tuple:
    fld = rep.field
    ranks = tuple(
        linalg.rank(fld, [list(r) for r in m], len(m[0])) if m and m[0] else 0 for m in rep.matrices
    )
    return rep.dims, end_dim, ranks


class ClassCollector:
    """Sequential reduction of a stream of candidate representations to iso classes."""

    def __init__(self, seed: int = 0):
        self.seed = seed
        self.classes: list[TreeModuleClass] = []
        self._buckets: dict[tuple, list[int]] = {}
        self._seen_exact: set = set()
        self.candidates = 0
        self.rejected_decomposable = 0

    def offer(self, rep: Rep, tree: Quiver, code: bytes, f: QuiverMorphism) -> TreeModuleClass | None:
        self.candidates += 1
        key = (rep.dims, rep.matrices)
        if key in self._seen_exact:
            return None
        self._seen_exact.add(key)
        end_dim = hom_space(rep, rep).dimension
        if not is_absolutely_indecomposable(rep):
            self.rejected_decomposable += 1
            return None
        inv = _invariant(rep, end_dim)
        bucket = self._buckets.setdefault(inv, [])
        for idx in bucket:
            res = is_isomorphic(rep, self.classes[idx].representative, seed=self.seed, m_split_local=True)
            if not res.certified:
                raise RuntimeError("uncertified isomorphism decision inside the counting pipeline")
            if res.isomorphic:
                return None
        cls = TreeModuleClass(rep, rep.dims, tree, code, f, end_dim)
        bucket.append(len(self.classes))
        self.classes.append(cls)
        return cls


def _check_d(d: int, max_d: int) -> None:
    if d < 1:
        raise ValueError("d must be positive")
    if d > max_d:
        raise ResourceLimitError(f"d={d} exceeds the configured maximum {max_d} (frontier: no trees enumerated)")


def tm_count(
    q: Quiver,
    d: int,
    seed: int = 0,
    max_d: int = DEFAULT_MAX_D,
    target_dims: Sequence[int] | None = None,
    sincere: bool = True,
) -> TMReport:
    """Isomorphism classes of sincere tree modules of q of total dimension d."""
    _check_d(d, max_d)
    params = {"quiver": q.to_json(), "d": d}
    if target_dims is not None:
        params["dim_vector"] = list(target_dims)
    if sincere and q.vertex_count > d:
        return TMReport(params, 0, [], "brute-force", {"reason": "more vertices than dimension"})
    collector = ClassCollector(seed)
    for entry in enumerate_tree_quivers(d):
        t = entry.quiver
        ident = tree_identity_rep(t, QQ)
        for f in enumerate_morphisms(t, q, sincere=sincere, target_dims=target_dims):
            collector.offer(pushforward(f, ident), t, entry.canonical_code, f)
    meta = {
        "indecomposability": "absolute (End/rad of dimension 1 over QQ)",
        "candidates": collector.candidates,
        "rejected_decomposable": collector.rejected_decomposable,
    }
    return TMReport(params, len(collector.classes), collector.classes, "brute-force", meta)


def tm_count_vector(q: Quiver, dim_vector: Sequence[int], seed: int = 0, max_d: int = DEFAULT_MAX_D) -> TMReport:
    dim_vector = tuple(int(x) for x in dim_vector)
    if len(dim_vector) != q.vertex_count:
        raise ValueError("dimension vector length must match the vertex count")
    return tm_count(q, sum(dim_vector), seed=seed, max_d=max_d, target_dims=dim_vector, sincere=False)


def classes_by_dim_vector(report: TMReport) -> dict[tuple[int, ...], int]:
    out: dict[tuple[int, ...], int] = {}
    for c in report.classes:
        out[c.dim_vector] = out.get(c.dim_vector, 0) + 1
    return dict(sorted(out.items()))


def tm_sg(d: int, seed: int = 0, max_d: int = DEFAULT_MAX_D, with_terms: bool = False) -> TMReport:
    """Tree modules of S_g of dimension d as a polynomial in g (binomial basis).

    Sum over tree quivers Q with at most d vertices of (orbits of Q in the
    universal cover) * TM_Q(d); larger Q have no sincere d-dimensional module.
    """
    _check_d(d, max_d)
    total = BinomialPolyG()
    terms = []
    for entry in catalog_upto(d):
        rep = tm_count(entry.quiver, d, seed=seed, max_d=max_d)
        if rep.count == 0:
            continue
        orbit = orbit_count_poly(entry)
        total = total + orbit.scale(rep.count)
        terms.append({
            "quiver": [list(a) for a in entry.quiver.arrows],
            "vertices": entry.vertex_count,
            "aut": entry.aut_order,
            "tm": rep.count,
            "orbits": str(orbit),
            "by_dim_vector": {",".join(map(str, k)): v for k, v in classes_by_dim_vector(rep).items()},
        })
    if not total.is_integral():
        raise RuntimeError(f"non-integral tree-module polynomial {total}")
    meta = {"terms": terms} if with_terms else {}
    return TMReport({"d": d}, total, [], "formula", meta)


def tm_sg_bruteforce(g: int, d: int, seed: int = 0, guard: int = BRUTE_FORCE_GUARD) -> TMReport:
    """Direct count over every tree on d vertices and every labelling by g loops."""
    if g < 0 or d < 1:
        raise ValueError("need g >= 0 and d >= 1")
    trees = enumerate_tree_quivers(d)
    work = len(trees) * g ** (d - 1)
    if work > guard:
        raise ResourceLimitError(f"{len(trees)} trees x {g}^{d - 1} labelings = {work} exceeds guard {guard}")
    sg = Quiver.loops(g)
    collector = ClassCollector(seed)
    for entry in trees:
        t = entry.quiver
        ident = tree_identity_rep(t, QQ)
        for labels in itertools.product(range(g), repeat=t.arrow_count):
            f = QuiverMorphism(t, sg, (0,) * d, labels)
            collector.offer(pushforward(f, ident), t, entry.canonical_code, f)
    return TMReport({"g": g, "d": d}, len(collector.classes), collector.classes, "brute-force")


def leading_term_check(d: int, seed: int = 0, tm: BinomialPolyG | None = None) -> dict:
    if tm is None:
        tm = tm_sg(d, seed=seed).count
    cayley = Fraction(2 ** (d - 1) * (d ** (d - 2) if d >= 2 else 1), d)
    enumerated = sum(
        (Fraction(factorial(d - 1), e.aut_order) for e in enumerate_tree_quivers(d)), Fraction(0)
    )
    return {
        "d": d,
        "degree": tm.degree,
        "formula_lead": cayley,
        "enumerated_lead": enumerated,
        "tm_lead": tm.leading,
        "ok": tm.degree == d - 1 and tm.leading == cayley == enumerated,
    }


# ---------------------------------------------------------------------------
# explicit embedding of per-quiver classes into S_g


def automorphisms(q: Quiver) -> list[tuple[int, ...]]:
    """All vertex permutations preserving the arrow multiset (brute force)."""
    target = sorted(q.arrows)
    return [
        p for p in itertools.permutations(range(q.vertex_count))
        if sorted((p[s], p[h]) for s, h in q.arrows) == target
    ]


def winding_orbit_representatives(entry: TreeQuiverEntry, g: int) -> list[tuple[int, ...]]:
    """Windings Q -> S_g up to automorphisms of Q (which act freely on them)."""
    q = entry.quiver
    edges = conflict_graph(q).edges
    auts = automorphisms(q)
    arrow_index = {a: i for i, a in enumerate(q.arrows)}
    seen = set()
    reps = []
    for labels in itertools.product(range(g), repeat=q.arrow_count):
        if any(labels[a] == labels[b] for a, b in edges):
            continue
        if labels in seen:
            continue
        for p in auts:
            image = [0] * q.arrow_count
            for i, (s, h) in enumerate(q.arrows):
                image[arrow_index[(p[s], p[h])]] = labels[i]
            seen.add(tuple(image))
        reps.append(labels)
    return reps


def formula_classes_on_sg(g: int, d: int, seed: int = 0) -> list[tuple[TreeQuiverEntry, tuple, Rep]]:
    """S_g-representations predicted by the orbit formula, one per (Q, winding orbit, TM_Q class)."""
    sg = Quiver.loops(g)
    out = []
    for entry in catalog_upto(d):
        report = tm_count(entry.quiver, d, seed=seed)
        if not report.count:
            continue
        for labels in winding_orbit_representatives(entry, g):
            f = QuiverMorphism.to_loops(entry.quiver, labels, g)
            for cls in report.classes:
                out.append((entry, labels, pushforward(f, cls.representative)))
    return out
