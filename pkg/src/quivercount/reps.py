"""Quiver representations over exact fields.

Pushforward and pullback along quiver morphisms, Hom spaces, decisions about
(absolute) indecomposability and isomorphism, and lifting tree labelings to
the universal cover of the loop quiver S_g.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import linalg
from .fields import QQ, FiniteField, RationalField, field_from_spec
from .quivers import Quiver

Matrix = tuple  # tuple of row tuples


def _freeze(m) -> Matrix:
    return tuple(tuple(row) for row in m)


@dataclass(frozen=True)
class Rep:
    quiver: Quiver
    field: object
    dims: tuple[int, ...]
    matrices: tuple[Matrix, ...]

    def __post_init__(self):
        dims = tuple(int(x) for x in self.dims)
        if len(dims) != self.quiver.vertex_count or any(x < 0 for x in dims):
            raise ValueError(f"dimension vector {dims} does not fit {self.quiver}")
        mats = tuple(_freeze([self.field.coerce(x) for x in row] for row in m) for m in self.matrices)
        if len(mats) != self.quiver.arrow_count:
            raise ValueError("need one matrix per arrow")
        for a, m in enumerate(mats):
            t, h = self.quiver.arrows[a]
            if len(m) != dims[h] or any(len(row) != dims[t] for row in m):
                raise ValueError(f"matrix of arrow {a} must be {dims[h]}x{dims[t]}")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "matrices", mats)

    @property
    def total_dim(self) -> int:
        return sum(self.dims)

    def is_sincere(self) -> bool:
        return all(self.dims)

    def nonzero_entries(self) -> list:
        return [x for m in self.matrices for row in m for x in row if x]

    def to_json(self) -> dict:
        return {
            "quiver": self.quiver.to_json(),
            "field": self.field.spec(),
            "dims": list(self.dims),
            "matrices": [[self.field.to_json(x) for row in m for x in row] for m in self.matrices],
        }

    @classmethod
    def from_json(cls, data: dict) -> "Rep":
        q = Quiver.from_json(data["quiver"])
        fld = field_from_spec(data["field"])
        dims = data["dims"]
        mats = []
        for a, flat in enumerate(data["matrices"]):
            t, h = q.arrows[a]
            rows, cols = dims[h], dims[t]
            mats.append([[fld.from_json(flat[i * cols + j]) for j in range(cols)] for i in range(rows)])
        return cls(q, fld, tuple(dims), tuple(mats))


def zero_matrix(fld, rows: int, cols: int) -> list[list]:
    return [[fld.zero] * cols for _ in range(rows)]


def direct_sum(m: Rep, n: Rep) -> Rep:
    if m.quiver != n.quiver or m.field != n.field:
        raise ValueError("direct sum needs the same quiver and field")
    fld = m.field
    dims = tuple(a + b for a, b in zip(m.dims, n.dims))
    mats = []
    for a, (t, h) in enumerate(m.quiver.arrows):
        block = zero_matrix(fld, dims[h], dims[t])
        for i, row in enumerate(m.matrices[a]):
            block[i][: len(row)] = row
        for i, row in enumerate(n.matrices[a]):
            block[m.dims[h] + i][m.dims[t]:] = row
        mats.append(block)
    return Rep(m.quiver, fld, dims, tuple(mats))


def base_change(m: Rep, g: Sequence[Matrix]) -> Rep:
    """The representation g . m with maps g_h m_a g_t^{-1}; g is one invertible matrix per vertex."""
    fld = m.field
    ginv = [linalg.inverse(fld, [list(r) for r in gx]) if len(gx) else [] for gx in g]
    mats = []
    for a, (t, h) in enumerate(m.quiver.arrows):
        x = [list(r) for r in m.matrices[a]]
        if m.dims[h] and m.dims[t]:
            x = linalg.matmul(fld, linalg.matmul(fld, [list(r) for r in g[h]], x), ginv[t])
        mats.append(x)
    return Rep(m.quiver, fld, m.dims, tuple(mats))


# ---------------------------------------------------------------------------
# morphisms, pushforward, pullback


@dataclass(frozen=True)
class QuiverMorphism:
    source: Quiver
    target: Quiver
    vertex_map: tuple[int, ...]
    arrow_map: tuple[int, ...]

    def __post_init__(self):
        vm = tuple(self.vertex_map)
        am = tuple(self.arrow_map)
        if len(vm) != self.source.vertex_count or len(am) != self.source.arrow_count:
            raise ValueError("morphism maps have the wrong length")
        for a, (t, h) in enumerate(self.source.arrows):
            tt, th = self.target.arrows[am[a]]
            if vm[t] != tt or vm[h] != th:
                raise ValueError(f"arrow {a} is not mapped compatibly with its endpoints")
        object.__setattr__(self, "vertex_map", vm)
        object.__setattr__(self, "arrow_map", am)

    @classmethod
    def identity(cls, q: Quiver) -> "QuiverMorphism":
        return cls(q, q, tuple(range(q.vertex_count)), tuple(range(q.arrow_count)))

    @classmethod
    def to_loops(cls, source: Quiver, labels: Sequence[int], g: int) -> "QuiverMorphism":
        """Morphism source -> S_g sending arrow a to loop labels[a] (0-based)."""
        return cls(source, Quiver.loops(g), (0,) * source.vertex_count, tuple(labels))

    def fiber(self, x: int) -> list[int]:
        return [y for y, fy in enumerate(self.vertex_map) if fy == x]

    def compose(self, after: "QuiverMorphism") -> "QuiverMorphism":
        """``after`` o ``self``."""
        if after.source != self.target:
            raise ValueError("morphisms are not composable")
        return QuiverMorphism(
            self.source,
            after.target,
            tuple(after.vertex_map[v] for v in self.vertex_map),
            tuple(after.arrow_map[a] for a in self.arrow_map),
        )

    def is_vertex_surjective(self) -> bool:
        return set(self.vertex_map) == set(range(self.target.vertex_count))


def tree_identity_rep(t: Quiver, fld=QQ) -> Rep:
    """One-dimensional at every vertex with identity maps: the indecomposable I_T."""
    if not t.is_tree():
        raise ValueError(f"not a tree quiver: {t}")
    return Rep(t, fld, (1,) * t.vertex_count, tuple(((fld.one,),) for _ in t.arrows))


def pushforward(f: QuiverMorphism, v: Rep) -> Rep:
    """Direct sum over fibres; fibre blocks ordered by ascending source vertex."""
    if v.quiver != f.source:
        raise ValueError("representation does not live on the source of the morphism")
    fld = v.field
    tgt = f.target
    dims = [0] * tgt.vertex_count
    offset = [0] * f.source.vertex_count
    for y, x in enumerate(f.vertex_map):
        offset[y] = dims[x]
        dims[x] += v.dims[y]
    mats = [zero_matrix(fld, dims[h], dims[t]) for t, h in tgt.arrows]
    for b, (t, h) in enumerate(f.source.arrows):
        block = mats[f.arrow_map[b]]
        ot, oh = offset[t], offset[h]
        for i, row in enumerate(v.matrices[b]):
            for j, x in enumerate(row):
                if x:
                    block[oh + i][ot + j] = fld.add(block[oh + i][ot + j], x)
    return Rep(tgt, fld, tuple(dims), tuple(mats))


def pullback(f: QuiverMorphism, w: Rep) -> Rep:
    if w.quiver != f.target:
        raise ValueError("representation does not live on the target of the morphism")
    dims = tuple(w.dims[f.vertex_map[y]] for y in range(f.source.vertex_count))
    mats = tuple(w.matrices[f.arrow_map[b]] for b in range(f.source.arrow_count))
    return Rep(f.source, w.field, dims, mats)


# ---------------------------------------------------------------------------
# Hom spaces


@dataclass(frozen=True)
class HomBasis:
    source: Rep
    target: Rep
    basis: tuple[tuple[Matrix, ...], ...]

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def combination(self, coeffs: Sequence) -> tuple[list[list], ...]:
        fld = self.source.field
        out = [zero_matrix(fld, self.target.dims[x], self.source.dims[x]) for x in range(len(self.source.dims))]
        for c, phi in zip(coeffs, self.basis):
            if not c:
                continue
            for x, block in enumerate(phi):
                for i, row in enumerate(block):
                    for j, y in enumerate(row):
                        if y:
                            out[x][i][j] = fld.add(out[x][i][j], fld.mul(c, y))
        return tuple(out)


def _check_compatible(m: Rep, n: Rep) -> None:
    if m.field != n.field:
        raise ValueError(f"field mismatch: {m.field} vs {n.field}")
    if m.quiver != n.quiver:
        raise ValueError("representations live on different quivers")


def hom_space(m: Rep, n: Rep) -> HomBasis:
    """Basis of all families phi_x with phi_h M_a = N_a phi_t for every arrow a."""
    _check_compatible(m, n)
    fld = m.field
    nv = len(m.dims)
    start = []
    pos = 0
    for x in range(nv):
        start.append(pos)
        pos += n.dims[x] * m.dims[x]
    ncols = pos

    def var(x, i, j):
        return start[x] + i * m.dims[x] + j

    rows = []
    for a, (t, h) in enumerate(m.quiver.arrows):
        ma, na = m.matrices[a], n.matrices[a]
        for i in range(n.dims[h]):
            for j in range(m.dims[t]):
                row = [fld.zero] * ncols
                for k in range(m.dims[h]):
                    c = ma[k][j]
                    if c:
                        idx = var(h, i, k)
                        row[idx] = fld.add(row[idx], c)
                for k in range(n.dims[t]):
                    c = na[i][k]
                    if c:
                        idx = var(t, k, j)
                        row[idx] = fld.sub(row[idx], c)
                if any(row):
                    rows.append(row)
    vectors = linalg.nullspace(fld, rows, ncols)
    basis = []
    for v in vectors:
        phi = []
        for x in range(nv):
            phi.append(_freeze(
                [v[var(x, i, j)] for j in range(m.dims[x])] for i in range(n.dims[x])
            ))
        basis.append(tuple(phi))
    return HomBasis(m, n, tuple(basis))


def _block_diag(fld, blocks: Sequence[Matrix], dims: Sequence[int]) -> list[list]:
    total = sum(dims)
    out = zero_matrix(fld, total, total)
    off = 0
    for block, d in zip(blocks, dims):
        for i in range(d):
            for j in range(d):
                out[off + i][off + j] = block[i][j]
        off += d
    return out


def _split_blocks(big: Sequence[Sequence], dims: Sequence[int]) -> tuple[Matrix, ...]:
    out = []
    off = 0
    for d in dims:
        out.append(_freeze([big[off + i][off + j] for j in range(d)] for i in range(d)))
        off += d
    return tuple(out)


def compose_vertexwise(fld, psi: Sequence[Matrix], phi: Sequence[Matrix]) -> tuple[Matrix, ...]:
    """psi o phi, computed vertex by vertex."""
    out = []
    for a, b in zip(psi, phi):
        if not a or not b or not b[0]:
            rows = len(a)
            cols = len(b[0]) if b else 0
            out.append(_freeze(zero_matrix(fld, rows, cols)))
        else:
            out.append(_freeze(linalg.matmul(fld, [list(r) for r in a], [list(r) for r in b])))
    return tuple(out)


def _as_vector(blocks: Sequence[Matrix]) -> list:
    return [x for b in blocks for row in b for x in row]


# ---------------------------------------------------------------------------
# endomorphism-ring analysis


def _trace_form_semisimple_rank(m: Rep, basis) -> int:
    """rank of (x, y) -> tr(xy) on End(m): equals dim End/rad in characteristic 0."""
    fld = m.field
    mats = [_block_diag(fld, phi, m.dims) for phi in basis]
    n = len(mats)
    gram = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            a, b = mats[i], mats[j]
            t = sum((a[r][k] * b[k][r] for r in range(len(a)) for k in range(len(a)) if a[r][k] and b[k][r]), Fraction(0))
            gram[i][j] = gram[j][i] = t
    return linalg.rank(fld, gram, n)


def _eigenvalue_candidates(fld, mat, dim):
    if isinstance(fld, RationalField):
        return [linalg.trace(fld, mat) / dim]
    if dim % fld.characteristic:
        # scalar + nilpotent forces the scalar to be trace / dim
        return [fld.mul(linalg.trace(fld, mat), fld.inv(fld.coerce(dim)))]
    ident = linalg.identity(fld, dim)
    return [
        lam for lam in fld.elements()
        if linalg.rank(fld, linalg.matsub(fld, mat, linalg.scalar_mul(fld, lam, ident)), dim) < dim
    ]


def end_is_split_local(m: Rep, basis=None) -> bool:
    """End(m) is local with residue field equal to the ground field.

    Each basis element must be scalar + nilpotent, and the nilpotent parts must
    generate a nilpotent subalgebra; then they span a nilpotent ideal of
    codimension one.  Equivalent to absolute indecomposability over any field.
    """
    fld = m.field
    if m.total_dim == 0:
        return False
    if basis is None:
        basis = hom_space(m, m).basis
    dim = m.total_dim
    ident = linalg.identity(fld, dim)
    nil = []
    for phi in basis:
        mat = _block_diag(fld, phi, m.dims)
        for lam in _eigenvalue_candidates(fld, mat, dim):
            shifted = linalg.matsub(fld, mat, linalg.scalar_mul(fld, lam, ident))
            if linalg.is_nilpotent(fld, shifted):
                if not linalg.is_zero(shifted):
                    nil.append(shifted)
                break
        else:
            return False
    width = dim * dim
    layer = nil
    for _ in range(dim):
        if not layer:
            return True
        products = [
            [x for row in linalg.matmul(fld, a, b) for x in row]
            for a in layer
            for b in nil
        ]
        red, _ = linalg.rref(fld, products, width)
        layer = [[list(r[i * dim:(i + 1) * dim]) for i in range(dim)] for r in red]
    return not layer


@dataclass(frozen=True)
class IndecResult:
    kind: str  # "decomposable" | "indecomposable-certified" | "indecomposable-probabilistic"
    witness: tuple | None = None
    end_dim: int = 0
    semisimple_dim: int | None = None

    @property
    def indecomposable(self) -> bool:
        return self.kind != "decomposable"

    @property
    def certified(self) -> bool:
        return self.kind != "indecomposable-probabilistic"


def _eval_poly_at_matrix(fld, coeffs: Sequence, mat) -> list[list]:
    n = len(mat)
    acc = linalg.zeros(fld, n, n)
    for c in reversed(coeffs):
        acc = linalg.matmul(fld, acc, mat)
        for i in range(n):
            acc[i][i] = fld.add(acc[i][i], fld.coerce(c))
    return acc


def _fitting_split_rational(m: Rep, mat) -> tuple[Matrix, ...] | None:
    """Idempotent from the primary decomposition of one endomorphism, if it splits."""
    import sympy

    x = sympy.Symbol("x")
    smat = sympy.Matrix(mat)
    chi = smat.charpoly(x).as_expr()
    _, factors = sympy.factor_list(chi, x, domain="QQ")
    if len(factors) < 2:
        return None
    p1 = sympy.Poly(factors[0][0] ** factors[0][1], x, domain="QQ")
    rest = sympy.Poly(sympy.Mul(*[f**e for f, e in factors[1:]]), x, domain="QQ")
    _, v, _ = sympy.gcdex(p1, rest)
    proj = (v * rest).rem(sympy.Poly(chi, x, domain="QQ"))
    coeffs = [Fraction(int(c.p), int(c.q)) for c in reversed(proj.all_coeffs())]
    e = _eval_poly_at_matrix(QQ, coeffs, mat)
    return _split_blocks(e, m.dims)


def _fitting_split_eigen(m: Rep, mat) -> tuple[Matrix, ...] | None:
    """Split off the generalised eigenspace of some lambda in the ground field."""
    fld = m.field
    n = len(mat)
    ident = linalg.identity(fld, n)
    for lam in fld.elements():
        shifted = linalg.matsub(fld, mat, linalg.scalar_mul(fld, lam, ident))
        power = shifted
        for _ in range(n.bit_length()):
            power = linalg.matmul(fld, power, power)
        r = linalg.rank(fld, power, n)
        if 0 < r < n:
            # projection onto ker(power) along im(power)
            kernel = linalg.nullspace(fld, power, n)
            image = [list(col) for col in zip(*power)]
            cols = [image[j] for j in _independent_columns(fld, image, n)]
            change = [list(row) for row in zip(*(kernel + cols))]
            inv = linalg.inverse(fld, change)
            diag = linalg.zeros(fld, n, n)
            for i in range(len(kernel)):
                diag[i][i] = fld.one
            e = linalg.matmul(fld, linalg.matmul(fld, change, diag), inv)
            return _split_blocks(e, m.dims)
    return None


def _independent_columns(fld, vectors, n) -> list[int]:
    chosen: list[int] = []
    current: list = []
    for j, v in enumerate(vectors):
        trial = current + [v]
        if linalg.rank(fld, trial, n) == len(trial):
            current = trial
            chosen.append(j)
    return chosen


def _is_idempotent(fld, e: Sequence[Matrix], dims) -> bool:
    ee = compose_vertexwise(fld, e, e)
    if ee != tuple(e):
        return False
    zero = all(not any(x for row in b for x in row) for b in e)
    one = all(
        all(b[i][j] == (fld.one if i == j else fld.zero) for i in range(d) for j in range(d))
        for b, d in zip(e, dims)
    )
    return not zero and not one


def _exhaustive_idempotent(m: Rep, basis) -> tuple[Matrix, ...] | None:
    fld = m.field
    hom = HomBasis(m, m, tuple(basis))
    for coeffs in itertools.product(list(fld.elements()), repeat=len(basis)):
        e = tuple(_freeze(b) for b in hom.combination(coeffs))
        if _is_idempotent(fld, e, m.dims):
            return e
    return None


EXHAUSTIVE_LIMIT = 1 << 16


def is_indecomposable(m: Rep, seed: int = 0, trials: int = 8) -> IndecResult:
    if m.total_dim == 0:
        return IndecResult("decomposable", None, 0)
    fld = m.field
    basis = hom_space(m, m).basis
    n = len(basis)
    if n == 1:
        return IndecResult("indecomposable-certified", None, 1, 1)
    ss = None
    if isinstance(fld, RationalField):
        ss = _trace_form_semisimple_rank(m, basis)
        if ss == 1:
            return IndecResult("indecomposable-certified", None, n, 1)
    elif fld.order**n <= EXHAUSTIVE_LIMIT:
        e = _exhaustive_idempotent(m, basis)
        if e is None:
            return IndecResult("indecomposable-certified", None, n)
        return IndecResult("decomposable", e, n)
    rng = random.Random(seed)
    hom = HomBasis(m, m, tuple(basis))
    for trial in range(trials):
        coeffs = [fld.random_element(rng, 3 + 4 * trial) for _ in basis]
        mat = _block_diag(fld, hom.combination(coeffs), m.dims)
        if isinstance(fld, RationalField):
            e = _fitting_split_rational(m, mat)
        else:
            e = _fitting_split_eigen(m, mat)
        if e is not None:
            if not _is_idempotent(fld, e, m.dims):
                raise AssertionError("Fitting projection is not a nontrivial idempotent")
            return IndecResult("decomposable", e, n, ss)
    return IndecResult("indecomposable-probabilistic", None, n, ss)


def is_absolutely_indecomposable(m: Rep) -> bool:
    if m.total_dim == 0:
        return False
    basis = hom_space(m, m).basis
    if len(basis) == 1:
        return True
    if isinstance(m.field, RationalField):
        return _trace_form_semisimple_rank(m, basis) == 1
    return end_is_split_local(m, basis)


def exhaustive_abs_indec_ff(m: Rep) -> bool:
    """Oracle over a finite field: no nontrivial idempotent and the nilpotent
    endomorphisms form a subspace of codimension one."""
    fld = m.field
    basis = hom_space(m, m).basis
    n = len(basis)
    hom = HomBasis(m, m, tuple(basis))
    nilpotent = []
    for coeffs in itertools.product(list(fld.elements()), repeat=n):
        e = hom.combination(coeffs)
        if _is_idempotent(fld, tuple(_freeze(b) for b in e), m.dims):
            return False
        if linalg.is_nilpotent(fld, _block_diag(fld, e, m.dims)):
            nilpotent.append(list(coeffs))
    if len(nilpotent) != fld.order ** (n - 1):
        return False
    return linalg.rank(fld, nilpotent, n) == n - 1 if n > 1 else True


# ---------------------------------------------------------------------------
# isomorphism


@dataclass(frozen=True)
class IsoResult:
    kind: str  # "yes" | "no-certified" | "no-probabilistic"
    witness: tuple | None = None
    failure_bound: Fraction | None = None
    reason: str = ""

    @property
    def isomorphic(self) -> bool:
        return self.kind == "yes"

    @property
    def certified(self) -> bool:
        return self.kind != "no-probabilistic"


def _invertible_everywhere(fld, phi: Sequence[Matrix]) -> bool:
    return all(linalg.is_invertible(fld, [list(r) for r in b]) for b in phi if b)


def is_isomorphic(
    m: Rep,
    n: Rep,
    seed: int = 0,
    trials: int = 12,
    m_split_local: bool | None = None,
) -> IsoResult:
    """Decide m ~ n.

    Certified "no" from dimension counts, or, when End(m) is split local, from
    all compositions Hom(n,m) o Hom(m,n) being nilpotent; certified "yes"
    always comes with an explicit invertible intertwiner.  Otherwise falls back
    to random sampling of Hom(m, n) with a Schwartz-Zippel failure bound.
    """
    _check_compatible(m, n)
    fld = m.field
    if m.dims != n.dims:
        return IsoResult("no-certified", reason="dimension vectors differ")
    hmn = hom_space(m, n)
    hnm = hom_space(n, m)
    if hmn.dimension != hnm.dimension:
        return IsoResult("no-certified", reason="dim Hom(M,N) != dim Hom(N,M)")
    emm = hom_space(m, m)
    enn = hom_space(n, n)
    if emm.dimension != enn.dimension:
        return IsoResult("no-certified", reason="dim End(M) != dim End(N)")
    if hmn.dimension != emm.dimension:
        return IsoResult("no-certified", reason="dim Hom(M,N) != dim End(M)")
    if m.total_dim == 0:
        return IsoResult("yes", witness=())
    if m_split_local is None:
        m_split_local = emm.dimension == 1 or (
            _trace_form_semisimple_rank(m, emm.basis) == 1
            if isinstance(fld, RationalField)
            else end_is_split_local(m, emm.basis)
        )
    if m_split_local:
        for f in hmn.basis:
            for h in hnm.basis:
                loop = compose_vertexwise(fld, h, f)
                if not linalg.is_nilpotent(fld, _block_diag(fld, loop, m.dims)):
                    # h o f is a unit of the local ring End(m): f is a split mono,
                    # hence an isomorphism as the dimension vectors agree
                    if not _invertible_everywhere(fld, f):
                        raise AssertionError("split mono between equal dimensions is not invertible")
                    return IsoResult("yes", witness=f)
        return IsoResult("no-certified", reason="Hom(N,M) o Hom(M,N) lies in rad End(M)")
    if isinstance(fld, FiniteField) and fld.order**hmn.dimension <= EXHAUSTIVE_LIMIT:
        return _exhaustive_isomorphism(hmn)
    return _sample_isomorphism(m, hmn, seed, trials)


def _exhaustive_isomorphism(hmn: HomBasis) -> IsoResult:
    fld = hmn.source.field
    for coeffs in itertools.product(list(fld.elements()), repeat=hmn.dimension):
        phi = hmn.combination(coeffs)
        if _invertible_everywhere(fld, phi):
            return IsoResult("yes", witness=tuple(_freeze(b) for b in phi))
    return IsoResult("no-certified", reason="no invertible element in Hom(M,N)")


def _sample_isomorphism(m: Rep, hmn: HomBasis, seed: int, trials: int) -> IsoResult:
    fld = m.field
    deg = m.total_dim
    bound = Fraction(1)
    for s in range(3):
        rng = random.Random(hash((seed, s)) & 0xFFFFFFFF)
        for t in range(trials):
            spread = 4 * (t + 1) * (s + 1)
            coeffs = [fld.random_element(rng, spread) for _ in hmn.basis]
            phi = hmn.combination(coeffs)
            if _invertible_everywhere(fld, phi):
                return IsoResult("yes", witness=tuple(_freeze(b) for b in phi))
            size = fld.order if isinstance(fld, FiniteField) else 2 * spread + 1
            bound *= min(Fraction(1), Fraction(deg, size))
    return IsoResult("no-probabilistic", failure_bound=bound, reason="no invertible sample")


def is_intertwiner(m: Rep, n: Rep, phi: Sequence[Matrix]) -> bool:
    fld = m.field
    for a, (t, h) in enumerate(m.quiver.arrows):
        left = linalg.matmul(fld, [list(r) for r in phi[h]], [list(r) for r in m.matrices[a]], inner=m.dims[h]) \
            if n.dims[h] and m.dims[t] else []
        right = linalg.matmul(fld, [list(r) for r in n.matrices[a]], [list(r) for r in phi[t]], inner=n.dims[t]) \
            if n.dims[h] and m.dims[t] else []
        if [list(r) for r in left] != [list(r) for r in right]:
            return False
    return True


# ---------------------------------------------------------------------------
# free group and the universal cover of S_g


FreeWord = tuple  # reduced tuple of nonzero ints; +i is generator a_i, -i its inverse


def reduce_word(letters) -> FreeWord:
    out: list[int] = []
    for x in letters:
        if x == 0:
            raise ValueError("0 is not a free-group letter")
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def word_mul(u: FreeWord, v: FreeWord) -> FreeWord:
    return reduce_word(u + v)


def word_inv(u: FreeWord) -> FreeWord:
    return tuple(-x for x in reversed(u))


def is_reduced(u: FreeWord) -> bool:
    return all(x != 0 for x in u) and all(a != -b for a, b in zip(u, u[1:]))


@dataclass(frozen=True)
class CoverLift:
    """Image of a tree inside the universal cover of S_g.

    ``vertex_words[v]`` is the free-group element a tree vertex lands on; the
    image subquiver has vertices ``words`` with arrows w -> a_i w.
    """

    tree: Quiver
    g: int
    labels: tuple[int, ...]
    vertex_words: tuple[FreeWord, ...]
    words: tuple[FreeWord, ...]
    image: Quiver
    image_labels: tuple[int, ...]
    lift: QuiverMorphism = field(repr=False)
    projection: QuiverMorphism = field(repr=False)


def lift_to_cover(t: Quiver, labels: Sequence[int], g: int, base_vertex: int = 0) -> CoverLift:
    """Lift the labelling t -> S_g (labels are 1-based) through the covering map.

    The base vertex goes to the identity word; walking along an arrow labelled
    i multiplies on the left by a_i, walking against it by a_i^{-1}.
    """
    if not t.is_tree():
        raise ValueError(f"not a tree quiver: {t}")
    labels = tuple(int(x) for x in labels)
    if len(labels) != t.arrow_count or any(not 1 <= x <= g for x in labels):
        raise ValueError(f"labels must be in 1..{g}, one per arrow")
    words: list[FreeWord | None] = [None] * t.vertex_count
    words[base_vertex] = ()
    nb = t.neighbours()
    stack = [base_vertex]
    while stack:
        v = stack.pop()
        for a, u, outward in nb[v]:
            if words[u] is None:
                step = labels[a] if outward else -labels[a]
                words[u] = word_mul((step,), words[v])
                stack.append(u)
    vertex_words = tuple(words)  # type: ignore[arg-type]
    distinct = sorted(set(vertex_words), key=lambda w: (len(w), w))
    index = {w: i for i, w in enumerate(distinct)}
    image_arrows: dict[tuple[int, int, int], int] = {}
    arrow_list = []
    arrow_labels = []
    arrow_map = []
    for a, (s, h) in enumerate(t.arrows):
        key = (index[vertex_words[s]], index[vertex_words[h]], labels[a])
        if key not in image_arrows:
            image_arrows[key] = len(arrow_list)
            arrow_list.append(key[:2])
            arrow_labels.append(labels[a])
        arrow_map.append(image_arrows[key])
    image = Quiver(len(distinct), tuple(arrow_list))
    lift = QuiverMorphism(t, image, tuple(index[w] for w in vertex_words), tuple(arrow_map))
    projection = QuiverMorphism.to_loops(image, [x - 1 for x in arrow_labels], g)
    return CoverLift(t, g, labels, vertex_words, tuple(distinct), image, tuple(arrow_labels), lift, projection)


def cover_arrow_is_valid(tail: FreeWord, head: FreeWord, label: int) -> bool:
    return head == word_mul((label,), tail)
