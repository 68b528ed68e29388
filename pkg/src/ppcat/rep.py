"""Finite-dimensional representations of a quiver algebra and their morphisms.

A representation assigns an exact vector space dimension to every vertex and a
matrix to every arrow (shape dim(target) x dim(source)); column vectors are
acted on from the left, so a path acts by multiplying its arrow matrices in
application order.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .errors import (
    AlgebraMismatch, CharacteristicTooSmall, DimensionMismatch, SortMismatch, ZeroModule,
)
from .linalg import (
    Matrix, QuotientSpace, Subspace, image, kernel, solve,
)
from .quiver import QuiverAlgebra, RingElement


class Representation:
    def __init__(self, algebra: QuiverAlgebra, dims, maps, check=True):
        self.algebra = algebra
        self.dims = dict(dims)
        field = algebra.field
        for v in algebra.quiver.vertices:
            self.dims.setdefault(v, 0)
        full = {}
        for arrow in algebra.quiver.arrows:
            m = maps.get(arrow.name)
            if m is None:
                m = Matrix.zero(field, self.dims[arrow.target], self.dims[arrow.source])
            if m.rows != self.dims[arrow.target] or m.cols != self.dims[arrow.source]:
                raise DimensionMismatch(
                    "map for arrow %s has shape %dx%d, expected %dx%d"
                    % (arrow.name, m.rows, m.cols, self.dims[arrow.target],
                       self.dims[arrow.source]))
            full[arrow.name] = m
        self.maps = full
        if check:
            for rel in algebra.relations:
                if not act(self, rel).is_zero():
                    raise SortMismatch("relation %s does not act as zero" % rel)

    @property
    def field(self):
        return self.algebra.field

    def dim(self, vertex):
        return self.dims[vertex]

    def total_dim(self):
        return sum(self.dims.values())

    def dim_vector(self):
        return tuple(self.dims[v] for v in self.algebra.quiver.vertices)

    def is_zero(self):
        return self.total_dim() == 0

    def __eq__(self, other):
        return (isinstance(other, Representation)
                and self.algebra == other.algebra
                and self.dims == other.dims
                and self.maps == other.maps)

    def __hash__(self):
        return hash((self.algebra, tuple(sorted(self.dims.items())),
                     tuple(sorted(self.maps.items()))))


class RepMorphism:
    def __init__(self, source: Representation, target: Representation, blocks, check=True):
        if source.algebra != target.algebra:
            raise AlgebraMismatch("morphism between representations of different algebras")
        self.source = source
        self.target = target
        field = source.field
        full = {}
        for v in source.algebra.quiver.vertices:
            b = blocks.get(v)
            if b is None:
                b = Matrix.zero(field, target.dims[v], source.dims[v])
            if b.rows != target.dims[v] or b.cols != source.dims[v]:
                raise DimensionMismatch("block at %s has wrong shape" % v)
            full[v] = b
        self.blocks = full
        if check and not self._commutes():
            raise SortMismatch("blocks do not commute with the arrow action")

    def _commutes(self):
        for arrow in self.source.algebra.quiver.arrows:
            lhs = self.blocks[arrow.target].mul(self.source.maps[arrow.name])
            rhs = self.target.maps[arrow.name].mul(self.blocks[arrow.source])
            if lhs != rhs:
                return False
        return True

    @classmethod
    def identity(cls, m: Representation):
        return cls(m, m, {v: Matrix.identity(m.field, m.dims[v]) for v in m.dims}, check=False)

    def compose(self, other: "RepMorphism") -> "RepMorphism":
        """self o other (other applied first)."""
        if other.target is not self.source and other.target != self.source:
            raise AlgebraMismatch("morphisms do not compose")
        blocks = {v: self.blocks[v].mul(other.blocks[v]) for v in self.blocks}
        return RepMorphism(other.source, self.target, blocks, check=False)

    def add(self, other):
        blocks = {v: self.blocks[v].add(other.blocks[v]) for v in self.blocks}
        return RepMorphism(self.source, self.target, blocks, check=False)

    def scale(self, c):
        return RepMorphism(self.source, self.target,
                           {v: self.blocks[v].scale(c) for v in self.blocks}, check=False)

    def is_zero(self):
        return all(b.is_zero() for b in self.blocks.values())

    def is_injective(self):
        return all(kernel(b).dim == 0 for b in self.blocks.values())

    def is_invertible(self):
        for v, b in self.blocks.items():
            if b.rows != b.cols or kernel(b).dim != 0:
                return False
        return True

    def trace(self):
        F = self.source.field
        t = F.zero()
        for b in self.blocks.values():
            t = F.add(t, b.trace())
        return t

    def __eq__(self, other):
        return (isinstance(other, RepMorphism) and self.blocks == other.blocks
                and self.source == other.source and self.target == other.target)


def dual_module(M: Representation) -> Representation:
    """The K-linear dual over the opposite algebra (arrow matrices transposed)."""
    op = M.algebra.opposite()
    maps = {a.name: M.maps[a.name].transpose() for a in M.algebra.quiver.arrows}
    return Representation(op, dict(M.dims), maps, check=False)


def act(m: Representation, r: RingElement) -> Matrix:
    """The matrix of multiplication by r, shape dim(target) x dim(source)."""
    quiver = m.algebra.quiver
    if r.source not in quiver.vertices or r.target not in quiver.vertices:
        raise SortMismatch("element sorts not in the algebra")
    F = m.field
    out = Matrix.zero(F, m.dims[r.target], m.dims[r.source])
    for path, coeff in r.terms.items():
        acc = Matrix.identity(F, m.dims[path.source])
        for name in path.arrows:
            acc = m.maps[name].mul(acc)
        out = out.add(acc.scale(coeff))
    return out


def _unknown_offsets(M, N):
    offsets = {}
    total = 0
    for v in M.algebra.quiver.vertices:
        offsets[v] = total
        total += N.dims[v] * M.dims[v]
    return offsets, total


def hom_space(M: Representation, N: Representation):
    """A basis of Hom(M, N), found as the kernel of the commuting-square system."""
    if M.algebra != N.algebra:
        raise AlgebraMismatch("hom between representations of different algebras")
    F = M.field
    offsets, total = _unknown_offsets(M, N)
    rows = []
    for arrow in M.algebra.quiver.arrows:
        s, t = arrow.source, arrow.target
        Ma, Na = M.maps[arrow.name], N.maps[arrow.name]
        # f_t . M(a) = N(a) . f_s, entrywise over dim N(t) x dim M(s)
        for i in range(N.dims[t]):
            for j in range(M.dims[s]):
                row = [F.zero()] * total
                for k in range(M.dims[t]):
                    row[offsets[t] + i * M.dims[t] + k] = F.add(
                        row[offsets[t] + i * M.dims[t] + k], Ma.at(k, j))
                for l in range(N.dims[s]):
                    row[offsets[s] + l * M.dims[s] + j] = F.sub(
                        row[offsets[s] + l * M.dims[s] + j], Na.at(i, l))
                rows.append(row)
    if rows:
        sol = kernel(Matrix.from_rows(F, rows))
    else:
        sol = Subspace.full(F, total)
    basis = []
    for vec in sol.basis_rows():
        blocks = {}
        for v in M.algebra.quiver.vertices:
            ents = vec[offsets[v]: offsets[v] + N.dims[v] * M.dims[v]]
            blocks[v] = Matrix(F, N.dims[v], M.dims[v], tuple(ents))
        basis.append(RepMorphism(M, N, blocks, check=False))
    return basis


def morphism_coordinates(f: RepMorphism, basis):
    """Coordinates of f over a basis of morphisms with the same end points."""
    F = f.source.field
    offsets, total = _unknown_offsets(f.source, f.target)

    def flatten(g):
        vec = [F.zero()] * total
        for v in g.blocks:
            vec[offsets[v]: offsets[v] + len(g.blocks[v].entries)] = list(g.blocks[v].entries)
        return vec

    cols = Matrix.from_rows(F, [flatten(g) for g in basis]).transpose() if basis \
        else Matrix(F, total, 0, ())
    out = solve(cols, tuple(flatten(f)))
    if out is None:
        raise DimensionMismatch("morphism not in the span of the basis")
    return out


def direct_sum(reps) -> Representation:
    reps = list(reps)
    alg = reps[0].algebra
    F = alg.field
    for r in reps:
        if r.algebra != alg:
            raise AlgebraMismatch("direct sum across algebras")
    dims = {v: sum(r.dims[v] for r in reps) for v in alg.quiver.vertices}
    maps = {}
    for arrow in alg.quiver.arrows:
        t, s = dims[arrow.target], dims[arrow.source]
        ents = [[F.zero()] * s for _ in range(t)]
        ro = co = 0
        for r in reps:
            b = r.maps[arrow.name]
            for i in range(b.rows):
                for j in range(b.cols):
                    ents[ro + i][co + j] = b.at(i, j)
            ro += r.dims[arrow.target]
            co += r.dims[arrow.source]
        maps[arrow.name] = Matrix.from_rows(F, ents) if t else Matrix(F, 0, s, ())
    return Representation(alg, dims, maps, check=False)


def summand_inclusion(reps, k) -> RepMorphism:
    total = direct_sum(reps)
    F = total.field
    blocks = {}
    for v in total.algebra.quiver.vertices:
        off = sum(r.dims[v] for r in reps[:k])
        ents = [[F.zero()] * reps[k].dims[v] for _ in range(total.dims[v])]
        for j in range(reps[k].dims[v]):
            ents[off + j][j] = F.one()
        blocks[v] = Matrix.from_rows(F, ents) if total.dims[v] else \
            Matrix(F, 0, reps[k].dims[v], ())
    return RepMorphism(reps[k], total, blocks, check=False)


def summand_projection(reps, k) -> RepMorphism:
    total = direct_sum(reps)
    F = total.field
    blocks = {}
    for v in total.algebra.quiver.vertices:
        off = sum(r.dims[v] for r in reps[:k])
        ents = [[F.zero()] * total.dims[v] for _ in range(reps[k].dims[v])]
        for j in range(reps[k].dims[v]):
            ents[j][off + j] = F.one()
        blocks[v] = Matrix.from_rows(F, ents) if reps[k].dims[v] else \
            Matrix(F, 0, total.dims[v], ())
    return RepMorphism(total, reps[k], blocks, check=False)


def kernel_of(f: RepMorphism):
    """The kernel representation with its inclusion."""
    M = f.source
    alg = M.algebra
    F = M.field
    spaces = {v: kernel(f.blocks[v]) for v in alg.quiver.vertices}
    dims = {v: spaces[v].dim for v in spaces}
    incl = {}
    for v in spaces:
        rows = spaces[v].basis_rows()
        incl[v] = Matrix.from_rows(F, rows).transpose() if rows \
            else Matrix(F, M.dims[v], 0, ())
    maps = {}
    for arrow in alg.quiver.arrows:
        s, t = arrow.source, arrow.target
        cols = []
        for vec in spaces[s].basis_rows():
            img = M.maps[arrow.name].apply(vec)
            cols.append(spaces[t].coordinates(img))
        maps[arrow.name] = Matrix.from_rows(F, cols).transpose() if cols \
            else Matrix(F, dims[t], 0, ())
    K = Representation(alg, dims, maps, check=False)
    return K, RepMorphism(K, M, incl)


def cokernel_of(f: RepMorphism):
    """The cokernel representation with its projection."""
    N = f.target
    alg = N.algebra
    F = N.field
    quots = {v: QuotientSpace(Subspace.full(F, N.dims[v]), image(f.blocks[v]))
             for v in alg.quiver.vertices}
    dims = {v: quots[v].dim for v in quots}
    proj = {v: quots[v].projection_matrix() for v in quots}
    maps = {}
    for arrow in alg.quiver.arrows:
        s, t = arrow.source, arrow.target
        maps[arrow.name] = proj[t].mul(N.maps[arrow.name]).mul(quots[s].lift_matrix())
    C = Representation(alg, dims, maps, check=False)
    return C, RepMorphism(N, C, proj)


def endo_radical(M: Representation, basis=None) -> Subspace:
    """Jacobson radical of End(M) in coordinates over the endomorphism basis.

    Kernel of the trace form (f, g) -> trace(fg), iterated to stability.
    The characteristic must exceed both dim End(M) and the total dimension
    of M: the form is a sum of simple traces weighted by multiplicities
    bounded by dim M, and any of those weights vanishing mod p would fold
    semisimple directions into the kernel.
    """
    if basis is None:
        basis = hom_space(M, M)
    F = M.field
    d = len(basis)
    if F.char != 0 and F.char <= max(d, M.total_dim()):
        raise CharacteristicTooSmall(
            "characteristic %d too small for dim End = %d on a %d-dimensional module"
            % (F.char, d, M.total_dim()))
    gram = Matrix.from_rows(F, [[basis[i].compose(basis[j]).trace() for j in range(d)]
                                for i in range(d)]) if d else Matrix(F, 0, 0, ())
    current = Subspace.full(F, d)
    while True:
        rows = current.basis_rows()
        if not rows:
            return current
        b = Matrix.from_rows(F, rows)
        form = b.mul(gram).mul(b.transpose())
        ker = kernel(form)
        nxt_vecs = [b.transpose().apply(vec) for vec in ker.basis_rows()]
        nxt = Subspace.from_vectors(F, d, nxt_vecs)
        if nxt.dim == current.dim:
            return nxt
        current = nxt


def is_indecomposable(M: Representation) -> bool:
    """Whether End(M)/rad is one-dimensional (local with residue field K)."""
    if M.is_zero():
        raise ZeroModule("the zero module is neither")
    basis = hom_space(M, M)
    rad = endo_radical(M, basis)
    return len(basis) - rad.dim == 1


@dataclass
class IsoResult:
    isomorphic: bool
    witness: RepMorphism | None
    certain: bool

    def __bool__(self):
        return self.isomorphic


ENUM_DIM_CAP = 4
ENUM_TOTAL_CAP = 2 ** 16
SAMPLE_TRIALS = 64


def are_isomorphic(M: Representation, N: Representation, seed=0) -> IsoResult:
    """Search Hom(M, N) for an invertible morphism.

    Over a small prime field the search is exhaustive (a certain answer);
    otherwise a seeded random search, so a negative answer is probabilistic.
    """
    if M.algebra != N.algebra:
        raise AlgebraMismatch("isomorphism across algebras")
    if M.dims != N.dims:
        return IsoResult(False, None, True)
    basis = hom_space(M, N)
    back = hom_space(N, M)
    if len(basis) != len(back) or len(basis) != len(hom_space(M, M)):
        return IsoResult(False, None, True)
    if M.is_zero():
        return IsoResult(True, RepMorphism.identity(M), True)
    if not basis:
        return IsoResult(False, None, True)
    F = M.field
    d = len(basis)

    def combo(coeffs):
        f = basis[0].scale(coeffs[0])
        for c, g in zip(coeffs[1:], basis[1:]):
            f = f.add(g.scale(c))
        return f

    if F.char != 0 and d <= ENUM_DIM_CAP and F.char ** d <= ENUM_TOTAL_CAP:
        from itertools import product
        for coeffs in product(range(F.char), repeat=d):
            if all(c == 0 for c in coeffs):
                continue
            f = combo([F.from_int(c) for c in coeffs])
            if f.is_invertible():
                return IsoResult(True, f, True)
        return IsoResult(False, None, True)
    rng = random.Random(seed)
    hi = F.char if F.char else 7
    for _ in range(SAMPLE_TRIALS):
        coeffs = [F.from_int(rng.randrange(hi) - (0 if F.char else 3)) for _ in range(d)]
        f = combo(coeffs)
        if f.is_invertible():
            return IsoResult(True, f, True)
    return IsoResult(False, None, False)
