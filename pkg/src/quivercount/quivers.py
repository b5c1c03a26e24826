"""Quivers, oriented-tree catalogs, winding counts and orbit polynomials.

Oriented trees are canonicalised AHU-style: root at the centre (both centres
for a bicentral tree, keeping the smaller code), encode every subtree as
``(`` + sorted child codes + ``)`` where each child code is prefixed by the
direction of its connecting arrow (``>`` parent to child, ``<`` child to
parent).  An arrow between the two centres of a bicentral tree can never be
reversed by an automorphism, so the automorphism group of the tree equals the
one of the tree rooted at either centre.
"""

from __future__ import annotations

import base64
import itertools
import json
import logging
import os
import tempfile
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from pathlib import Path
from typing import Iterable, Sequence

from .exact import BinomialPolyG, PolyQ

log = logging.getLogger(__name__)

MAX_TREE_VERTICES = 8
CATALOG_FORMAT = "qcatalog-v1"


class ResourceLimitError(RuntimeError):
    """A configured size guard would be exceeded."""


class ConsistencyError(RuntimeError):
    """An identity that must hold by construction failed."""


@dataclass(frozen=True)
class Quiver:
    vertex_count: int
    arrows: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        arrows = tuple((int(t), int(h)) for t, h in self.arrows)
        for t, h in arrows:
            if not (0 <= t < self.vertex_count and 0 <= h < self.vertex_count):
                raise ValueError(f"arrow {(t, h)} out of range for {self.vertex_count} vertices")
        object.__setattr__(self, "arrows", arrows)

    @classmethod
    def loops(cls, g: int) -> "Quiver":
        """The g-loop quiver S_g."""
        return cls(1, ((0, 0),) * g)

    @property
    def arrow_count(self) -> int:
        return len(self.arrows)

    def tail(self, a: int) -> int:
        return self.arrows[a][0]

    def head(self, a: int) -> int:
        return self.arrows[a][1]

    def neighbours(self) -> list[list[tuple[int, int, bool]]]:
        """Per vertex: (arrow index, other endpoint, arrow points away from vertex)."""
        nb: list[list[tuple[int, int, bool]]] = [[] for _ in range(self.vertex_count)]
        for a, (t, h) in enumerate(self.arrows):
            nb[t].append((a, h, True))
            if h != t:
                nb[h].append((a, t, False))
        return nb

    def is_connected(self) -> bool:
        if self.vertex_count == 0:
            return True
        nb = self.neighbours()
        seen = {0}
        stack = [0]
        while stack:
            v = stack.pop()
            for _, u, _ in nb[v]:
                if u not in seen:
                    seen.add(u)
                    stack.append(u)
        return len(seen) == self.vertex_count

    def is_tree(self) -> bool:
        return (
            self.vertex_count >= 1
            and self.arrow_count == self.vertex_count - 1
            and all(t != h for t, h in self.arrows)
            and self.is_connected()
        )

    def relabel(self, perm: Sequence[int]) -> "Quiver":
        """Quiver with vertex ``v`` renamed ``perm[v]``."""
        return Quiver(self.vertex_count, tuple((perm[t], perm[h]) for t, h in self.arrows))

    def to_json(self) -> dict:
        return {"vertices": self.vertex_count, "arrows": [list(a) for a in self.arrows]}

    @classmethod
    def from_json(cls, data: dict) -> "Quiver":
        return cls(int(data["vertices"]), tuple(tuple(a) for a in data["arrows"]))


def _require_tree(q: Quiver) -> None:
    if not q.is_tree():
        raise ValueError(f"not a tree quiver: {q}")


def tree_centers(q: Quiver) -> list[int]:
    _require_tree(q)
    n = q.vertex_count
    if n <= 2:
        return list(range(n))
    nb = q.neighbours()
    degree = [len(x) for x in nb]
    leaves = [v for v in range(n) if degree[v] == 1]
    remaining = n
    while remaining > 2:
        remaining -= len(leaves)
        nxt = []
        for v in leaves:
            degree[v] = 0
            for _, u, _ in nb[v]:
                if degree[u] > 0:
                    degree[u] -= 1
                    if degree[u] == 1:
                        nxt.append(u)
        leaves = nxt
    return sorted(leaves)


def _rooted(q: Quiver, nb, v: int, parent: int) -> tuple[bytes, int, list]:
    """(code, automorphisms fixing v, child order) of the subtree hanging at v."""
    kids = []
    for _, u, outward in nb[v]:
        if u == parent:
            continue
        code, aut, order = _rooted(q, nb, u, v)
        kids.append(((b">" if outward else b"<") + code, aut, u, order))
    kids.sort(key=lambda k: k[0])
    aut = 1
    for k in kids:
        aut *= k[1]
    for mult in Counter(k[0] for k in kids).values():
        aut *= factorial(mult)
    code = b"(" + b"".join(k[0] for k in kids) + b")"
    order = [(k[2], k[3]) for k in kids]
    return code, aut, order


def _canonical_data(q: Quiver) -> tuple[bytes, int, int, list]:
    nb = q.neighbours()
    best = None
    for c in tree_centers(q):
        code, aut, order = _rooted(q, nb, c, -1)
        if best is None or code < best[0]:
            best = (code, aut, c, order)
    return best


def canonical_code(q: Quiver) -> bytes:
    """Isomorphism invariant byte string of an oriented tree; complete for trees."""
    _require_tree(q)
    return _canonical_data(q)[0]


def aut_order(q: Quiver) -> int:
    _require_tree(q)
    return _canonical_data(q)[1]


def canonical_form(q: Quiver) -> Quiver:
    """Relabel vertices in preorder of the canonical rooting (children by code)."""
    _require_tree(q)
    _, _, root, order = _canonical_data(q)
    perm = [0] * q.vertex_count
    counter = itertools.count()

    def visit(v, kids):
        perm[v] = next(counter)
        for u, sub in kids:
            visit(u, sub)

    visit(root, order)
    relabelled = q.relabel(perm)
    return Quiver(relabelled.vertex_count, tuple(sorted(relabelled.arrows, key=lambda a: (max(a), min(a)))))


# ---------------------------------------------------------------------------
# conflict graphs, chromatic polynomials, windings


@dataclass(frozen=True)
class ConflictGraph:
    node_count: int
    edges: frozenset[tuple[int, int]] = frozenset()


def conflict_graph(q: Quiver) -> ConflictGraph:
    """Arrows conflict when they share a tail or share a head."""
    edges = set()
    for a, b in itertools.combinations(range(q.arrow_count), 2):
        (ta, ha), (tb, hb) = q.arrows[a], q.arrows[b]
        if ta == tb or ha == hb:
            edges.add((a, b))
    return ConflictGraph(q.arrow_count, frozenset(edges))


def _graph_key(n: int, edges: frozenset) -> tuple:
    """Canonical edge list: minimum over relabelings that sort nodes by degree."""
    if not edges:
        return (n, ())
    deg = [0] * n
    for a, b in edges:
        deg[a] += 1
        deg[b] += 1
    classes: dict[int, list[int]] = {}
    for v in range(n):
        classes.setdefault(deg[v], []).append(v)
    groups = [classes[k] for k in sorted(classes)]
    best = None
    for choice in itertools.product(*(itertools.permutations(g) for g in groups)):
        perm = [0] * n
        pos = 0
        for block in choice:
            for v in block:
                perm[v] = pos
                pos += 1
        key = tuple(sorted(tuple(sorted((perm[a], perm[b]))) for a, b in edges))
        if best is None or key < best:
            best = key
    return (n, best)


@lru_cache(maxsize=None)
def _chromatic(key: tuple) -> PolyQ:
    n, edges = key
    if not edges:
        return PolyQ.monomial(n)
    if len(edges) == n * (n - 1) // 2:
        p = PolyQ([1])
        for i in range(n):
            p = p * PolyQ([-i, 1])
        return p
    (u, v) = edges[-1]
    rest = frozenset(edges[:-1])
    deleted = _chromatic(_graph_key(n, rest))
    # contract v into u, drop v, renumber the nodes above v
    merged = set()
    for a, b in rest:
        a = u if a == v else a
        b = u if b == v else b
        if a != b:
            a = a - 1 if a > v else a
            b = b - 1 if b > v else b
            merged.add((min(a, b), max(a, b)))
    contracted = _chromatic(_graph_key(n - 1, frozenset(merged)))
    return deleted - contracted


def chromatic_polynomial(h: ConflictGraph) -> PolyQ:
    """Number of proper colourings as a polynomial in the number of colours."""
    return _chromatic(_graph_key(h.node_count, h.edges))


def winding_counts(q: Quiver) -> list[int]:
    """W(k) for k = 1..#arrows: surjective labelings onto k labels with no clash."""
    chi = chromatic_polynomial(conflict_graph(q))
    out = []
    for k in range(1, q.arrow_count + 1):
        total = sum((-1) ** (k - j) * comb(k, j) * chi(j) for j in range(k + 1))
        if total.denominator != 1 or total < 0:
            raise ConsistencyError(f"winding count W({k}) = {total} for {q}")
        out.append(int(total))
    return out


def count_windings_brute(q: Quiver, g: int) -> int:
    """Direct count of labelings arrows -> {0..g-1} satisfying the winding condition."""
    h = conflict_graph(q)
    return sum(
        1
        for labels in itertools.product(range(g), repeat=q.arrow_count)
        if all(labels[a] != labels[b] for a, b in h.edges)
    )


# ---------------------------------------------------------------------------
# catalog


@dataclass(frozen=True)
class TreeQuiverEntry:
    quiver: Quiver
    canonical_code: bytes
    aut_order: int
    winding_counts: tuple[int, ...] = field(default=())

    @property
    def vertex_count(self) -> int:
        return self.quiver.vertex_count

    def winding(self, k: int) -> int:
        if k < 1 or k > len(self.winding_counts):
            return 0
        return self.winding_counts[k - 1]

    def to_json(self) -> dict:
        return {
            "code": base64.b64encode(self.canonical_code).decode("ascii"),
            "arrows": [list(a) for a in self.quiver.arrows],
            "aut": self.aut_order,
            "W": list(self.winding_counts),
        }


def make_entry(q: Quiver) -> TreeQuiverEntry:
    cq = canonical_form(q)
    code, aut, _, _ = _canonical_data(cq)
    return TreeQuiverEntry(cq, code, aut, tuple(winding_counts(cq)))


@lru_cache(maxsize=None)
def _oriented_trees(d: int) -> tuple[Quiver, ...]:
    """One representative per isomorphism class, by leaf extension of d-1 trees."""
    if d == 1:
        return (Quiver(1, ()),)
    found: dict[bytes, Quiver] = {}
    for base in _oriented_trees(d - 1):
        for v in range(d - 1):
            for arrow in ((v, d - 1), (d - 1, v)):
                cand = Quiver(d, base.arrows + (arrow,))
                code = canonical_code(cand)
                if code not in found:
                    found[code] = canonical_form(cand)
    return tuple(found[c] for c in sorted(found))


@lru_cache(maxsize=None)
def _catalog(d: int) -> tuple[TreeQuiverEntry, ...]:
    return tuple(sorted((make_entry(q) for q in _oriented_trees(d)), key=lambda e: e.canonical_code))


def enumerate_tree_quivers(
    d: int, max_vertices: int = MAX_TREE_VERTICES, cache_dir: str | os.PathLike | None = None
) -> list[TreeQuiverEntry]:
    """Isomorphism classes of oriented trees on d vertices, ordered by canonical code."""
    if d < 1:
        raise ValueError("d must be positive")
    if d > max_vertices:
        raise ResourceLimitError(f"tree enumeration limited to {max_vertices} vertices (asked for {d})")
    if cache_dir is not None:
        cached = load_catalog_cache(d, cache_dir)
        if cached is not None:
            return cached
    entries = list(_catalog(d))
    if cache_dir is not None:
        try:
            write_catalog_cache(d, entries, cache_dir)
        except OSError as exc:  # the cache is advisory
            log.warning("could not write catalog cache for d=%d: %s", d, exc)
    return entries


def catalog_upto(d: int, **kwargs) -> list[TreeQuiverEntry]:
    out = []
    for n in range(1, d + 1):
        out.extend(enumerate_tree_quivers(n, **kwargs))
    return out


def orbit_count_poly(entry: TreeQuiverEntry) -> BinomialPolyG:
    """Number of deck-group orbits of copies of the quiver inside the universal cover of S_g."""
    coeffs = {}
    for k, w in enumerate(entry.winding_counts, start=1):
        c = Fraction(w, entry.aut_order)
        if c.denominator != 1 or c < 0:
            raise ConsistencyError(
                f"W({k})/|Aut| = {w}/{entry.aut_order} is not a nonnegative integer for {entry.quiver}"
            )
        coeffs[k] = c
    if entry.vertex_count == 1:
        # a single vertex sits at every element of the free group: one orbit
        coeffs[0] = Fraction(1)
    return BinomialPolyG(coeffs)


def cayley_identity_check(d: int, **kwargs) -> tuple[int, int]:
    """(2^(d-1) d^(d-2), sum over tree quivers on d vertices of d!/|Aut|)."""
    lhs = 2 ** (d - 1) * (d ** (d - 2) if d >= 2 else 1)
    rhs = Fraction(0)
    for e in enumerate_tree_quivers(d, **kwargs):
        rhs += Fraction(factorial(d), e.aut_order)
    if rhs.denominator != 1:
        raise ConsistencyError(f"d!/|Aut| sum is fractional for d={d}")
    return lhs, int(rhs)


# ---------------------------------------------------------------------------
# independent labelled oracles


def prufer_trees(d: int) -> Iterable[list[tuple[int, int]]]:
    """Every labelled tree on {0..d-1} as an undirected edge list (Pruefer decoding)."""
    if d == 1:
        yield []
        return
    if d == 2:
        yield [(0, 1)]
        return
    for seq in itertools.product(range(d), repeat=d - 2):
        degree = [1] * d
        for x in seq:
            degree[x] += 1
        edges = []
        for x in seq:
            leaf = min(v for v in range(d) if degree[v] == 1)
            edges.append((leaf, x))
            degree[leaf] -= 1
            degree[x] -= 1
        u, w = [v for v in range(d) if degree[v] == 1]
        edges.append((u, w))
        yield edges


def labelled_oriented_trees(d: int) -> Iterable[frozenset]:
    for edges in prufer_trees(d):
        for flips in itertools.product((False, True), repeat=len(edges)):
            yield frozenset((b, a) if f else (a, b) for (a, b), f in zip(edges, flips))


def labelled_orbit_oracle(d: int) -> list[tuple[Quiver, int]]:
    """Classes of labelled oriented trees under vertex permutation, with orbit sizes.

    Independent of the canonical-code machinery: each unseen labelled tree has
    its whole orbit generated by brute force over all d! permutations.
    """
    if d > 6:
        raise ResourceLimitError("labelled orbit oracle limited to d <= 6")
    perms = list(itertools.permutations(range(d)))
    seen: set[frozenset] = set()
    classes = []
    for arrows in labelled_oriented_trees(d):
        if arrows in seen:
            continue
        orbit = {frozenset((p[a], p[b]) for a, b in arrows) for p in perms}
        seen |= orbit
        classes.append((Quiver(d, tuple(sorted(arrows))), len(orbit)))
    return classes


def brute_force_aut_order(q: Quiver) -> int:
    arrows = Counter(q.arrows)
    count = 0
    for p in itertools.permutations(range(q.vertex_count)):
        if Counter((p[t], p[h]) for t, h in q.arrows) == arrows:
            count += 1
    return count


def brute_force_isomorphic(a: Quiver, b: Quiver) -> bool:
    if a.vertex_count != b.vertex_count or a.arrow_count != b.arrow_count:
        return False
    target = Counter(b.arrows)
    return any(
        Counter((p[t], p[h]) for t, h in a.arrows) == target
        for p in itertools.permutations(range(a.vertex_count))
    )


# ---------------------------------------------------------------------------
# JSON cache


def default_cache_dir() -> Path:
    env = os.environ.get("QUIVERCOUNT_CACHE")
    if env:
        return Path(env)
    return Path.home() / ".cache" / "quivercount"


def _cache_path(d: int, cache_dir) -> Path:
    return Path(cache_dir) / f"{CATALOG_FORMAT}-d{d}.json"


def write_catalog_cache(d: int, entries: Sequence[TreeQuiverEntry], cache_dir) -> Path:
    path = _cache_path(d, cache_dir)
    path.parent.mkdir(parents=True, exist_ok=True)
    payload = {"format": CATALOG_FORMAT, "d": d, "entries": [e.to_json() for e in entries]}
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, sort_keys=True)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def load_catalog_cache(d: int, cache_dir) -> list[TreeQuiverEntry] | None:
    """Entries from the cache file, or None when absent, stale or corrupt."""
    path = _cache_path(d, cache_dir)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
        if data.get("format") != CATALOG_FORMAT or data["d"] != d:
            return None
        entries = []
        for raw in data["entries"]:
            q = Quiver(d, tuple(tuple(a) for a in raw["arrows"]))
            code = base64.b64decode(raw["code"])
            if canonical_code(q) != code:
                raise ValueError(f"stored code does not match arrows {raw['arrows']}")
            windings = tuple(int(w) for w in raw["W"])
            if windings != tuple(winding_counts(q)):
                raise ValueError(f"stored winding counts do not match arrows {raw['arrows']}")
            entries.append(TreeQuiverEntry(q, code, int(raw["aut"]), windings))
    except (OSError, ValueError, KeyError, TypeError) as exc:
        if path.exists():
            log.warning("ignoring unusable catalog cache %s: %s", path, exc)
        return None
    codes = [e.canonical_code for e in entries]
    if codes != sorted(set(codes)):
        log.warning("ignoring catalog cache %s: entries not canonically ordered", path)
        return None
    lhs = 2 ** (d - 1) * (d ** (d - 2) if d >= 2 else 1)
    if sum(Fraction(factorial(d), e.aut_order) for e in entries) != lhs:
        log.warning("ignoring catalog cache %s: automorphism data inconsistent", path)
        return None
    return entries
