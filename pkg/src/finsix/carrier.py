"""Finite k-linear module categories presented by sites and generating arrows.

Both concrete instances of the library fit one picture: an object assigns a
finite-dimensional vector space to every *site* (poset element / groupoid
component) and a matrix to every *generating arrow* (covering relation /
group generator); a morphism is a per-site matrix family commuting with the
generators.  Everything downstream (homotopy solving, resolutions, kernel
convolution) only ever talks to this interface, so the whole tower reduces
to exact linear algebra.
"""

from __future__ import annotations

from .matrices import Matrix, ShapeMismatch


class CarrierMismatch(ValueError):
    pass


class CObj:
    """Object of a carrier category: per-site dims + matrices for arrows.

    ``edges`` maps arrow keys to matrices (target-dim x source-dim).  The set
    of keys may be larger than the carrier's constraint edges (group carriers
    store one matrix per group element but only constrain on generators).
    """

    __slots__ = ("carrier", "dims", "edges", "_hash")

    def __init__(self, carrier, dims, edges):
        object.__setattr__(self, "carrier", carrier)
        object.__setattr__(self, "dims", dict(dims))
        object.__setattr__(self, "edges", dict(edges))
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, *a):
        raise AttributeError("CObj is immutable")

    def dim(self, site):
        return self.dims.get(site, 0)

    @property
    def total_dim(self):
        return sum(self.dims.values())

    def edge_matrix(self, key):
        return self.edges[key]

    def _key(self):
        return (
            tuple(sorted((s, d) for s, d in self.dims.items())),
            tuple(sorted(self.edges.items(), key=lambda kv: repr(kv[0]))),
        )

    def __eq__(self, other):
        if not isinstance(other, CObj):
            return False
        same_carrier = self.carrier is other.carrier or self.carrier == other.carrier
        return same_carrier and self._key() == other._key()

    def __hash__(self):
        h = object.__getattribute__(self, "_hash")
        if h is None:
            h = hash(self._key())
            object.__setattr__(self, "_hash", h)
        return h

    def __repr__(self):
        return "CObj(dims=%s)" % (self.dims,)


class CMor:
    """Morphism of carrier objects: one matrix per site."""

    __slots__ = ("carrier", "src", "dst", "blocks")

    def __init__(self, carrier, src, dst, blocks, check=True):
        self.carrier = carrier
        self.src = src
        self.dst = dst
        self.blocks = {}
        for s in carrier.sites:
            m = blocks.get(s)
            if m is None:
                m = Matrix.zero(carrier.field, dst.dim(s), src.dim(s))
            if m.rows != dst.dim(s) or m.cols != src.dim(s):
                raise ShapeMismatch("block at site %r has wrong shape" % (s,))
            self.blocks[s] = m
        if check:
            self._check_naturality()

    def _check_naturality(self):
        for key, a, b in self.carrier.constraint_edges():
            lhs = self.blocks[b] @ self.src.edge_matrix(key)
            rhs = self.dst.edge_matrix(key) @ self.blocks[a]
            if lhs != rhs:
                raise ValueError("morphism does not commute with arrow %r" % (key,))

    def block(self, site):
        return self.blocks[site]

    def compose(self, first):
        """self o first (apply ``first``, then ``self``)."""
        if first.dst is not self.src and first.dst != self.src:
            raise CarrierMismatch("composition mismatch")
        return CMor(self.carrier, first.src, self.dst,
                    {s: self.blocks[s] @ first.blocks[s] for s in self.carrier.sites}, check=False)

    def __add__(self, other):
        return CMor(self.carrier, self.src, self.dst,
                    {s: self.blocks[s] + other.blocks[s] for s in self.carrier.sites}, check=False)

    def __sub__(self, other):
        return CMor(self.carrier, self.src, self.dst,
                    {s: self.blocks[s] - other.blocks[s] for s in self.carrier.sites}, check=False)

    def __neg__(self):
        return CMor(self.carrier, self.src, self.dst,
                    {s: -self.blocks[s] for s in self.carrier.sites}, check=False)

    def scale(self, c):
        return CMor(self.carrier, self.src, self.dst,
                    {s: self.blocks[s].scale(c) for s in self.carrier.sites}, check=False)

    def is_zero(self):
        return all(m.is_zero() for m in self.blocks.values())

    def __eq__(self, other):
        return (
            isinstance(other, CMor)
            and self.src == other.src
            and self.dst == other.dst
            and all(self.blocks[s] == other.blocks[s] for s in self.carrier.sites)
        )

    def __repr__(self):
        return "CMor(%s -> %s)" % (self.src.dims, self.dst.dims)

    def vec(self):
        """All blocks flattened into one coordinate column (site order of the carrier)."""
        vals = []
        for s in self.carrier.sites:
            m = self.blocks[s]
            vals.extend(a for r in m.entries for a in r)
        return Matrix(self.carrier.field, len(vals), 1, [[v] for v in vals])


class Carrier:
    """Base class; concrete carriers provide sites, arrows and object builders."""

    # subclasses set: field, sites (tuple)

    def __init__(self):
        self._hom_cache = {}

    # -- hooks ---------------------------------------------------------------

    def constraint_edges(self):
        """Arrow keys used for naturality constraints: (key, src_site, dst_site)."""
        raise NotImplementedError

    def all_edge_keys(self):
        """All arrow keys an object must carry (may exceed the constraint set)."""
        return [key for key, _, _ in self.constraint_edges()]

    def build(self, dims, edges):
        """Trusted constructor used by the generic machinery."""
        return CObj(self, dims, edges)

    def unit(self):
        raise NotImplementedError

    def projective_site(self, site):
        """The projective generator attached to a site."""
        raise NotImplementedError

    def cover(self, X):
        """An epimorphism P -> X with P a finite sum of site projectives."""
        raise NotImplementedError

    def describe(self):
        return self.__class__.__name__

    # -- generic structure ----------------------------------------------------

    def zero_obj(self):
        z = {s: 0 for s in self.sites}
        edges = {k: Matrix.zero(self.field, 0, 0) for k in self.all_edge_keys()}
        return self.build(z, edges)

    def identity(self, X):
        return CMor(self, X, X, {s: Matrix.identity(self.field, X.dim(s)) for s in self.sites}, check=False)

    def zero_mor(self, X, Y):
        return CMor(self, X, Y, {}, check=False)

    def edge_ends(self, key):
        for k, a, b in self.constraint_edges():
            if k == key:
                return a, b
        raise KeyError(key)

    def _edge_site_map(self):
        out = {}
        for k, a, b in self.constraint_edges():
            out[k] = (a, b)
        return out

    def direct_sum(self, parts):
        """Returns (sum object, injections, projections)."""
        dims = {s: sum(p.dim(s) for p in parts) for s in self.sites}
        ends = {}
        for key in self.all_edge_keys():
            mats = [p.edge_matrix(key) for p in parts]
            if mats:
                ends[key] = self._block_diag(mats)
            else:
                ends[key] = Matrix.zero(self.field, 0, 0)
        total = self.build(dims, ends)
        injections, projections = [], []
        for i, p in enumerate(parts):
            inj, proj = {}, {}
            for s in self.sites:
                before = sum(q.dim(s) for q in parts[:i])
                inj_m = Matrix.zero(self.field, total.dim(s), p.dim(s))
                proj_m = Matrix.zero(self.field, p.dim(s), total.dim(s))
                rows_i = [list(r) for r in inj_m.entries]
                rows_p = [list(r) for r in proj_m.entries]
                one = self.field.one()
                for t in range(p.dim(s)):
                    rows_i[before + t][t] = one
                    rows_p[t][before + t] = one
                inj[s] = Matrix(self.field, total.dim(s), p.dim(s), rows_i)
                proj[s] = Matrix(self.field, p.dim(s), total.dim(s), rows_p)
            injections.append(CMor(self, p, total, inj, check=False))
            projections.append(CMor(self, total, p, proj, check=False))
        return total, injections, projections

    @staticmethod
    def _block_diag(mats):
        field = mats[0].field
        rows = sum(m.rows for m in mats)
        cols = sum(m.cols for m in mats)
        z = field.zero()
        out = [[z] * cols for _ in range(rows)]
        r0 = c0 = 0
        for m in mats:
            for i in range(m.rows):
                for j in range(m.cols):
                    out[r0 + i][c0 + j] = m.entries[i][j]
            r0 += m.rows
            c0 += m.cols
        return Matrix(field, rows, cols, out)

    def tensor_obj(self, X, Y):
        """Sitewise tensor product (the monoidal structure of both instances)."""
        dims = {s: X.dim(s) * Y.dim(s) for s in self.sites}
        edges = {k: X.edge_matrix(k).kron(Y.edge_matrix(k)) for k in self.all_edge_keys()}
        return self.build(dims, edges)

    def tensor_mor(self, f, g):
        src = self.tensor_obj(f.src, g.src)
        dst = self.tensor_obj(f.dst, g.dst)
        return CMor(self, src, dst,
                    {s: f.blocks[s].kron(g.blocks[s]) for s in self.sites}, check=False)

    # -- hom spaces -----------------------------------------------------------

    def hom_basis(self, X, Y):
        """Basis (tuple of CMor) of the space of morphisms X -> Y."""
        key = (X, Y)
        hit = self._hom_cache.get(key)
        if hit is not None:
            return hit
        f = self.field
        sizes = {s: Y.dim(s) * X.dim(s) for s in self.sites}
        offsets = {}
        total = 0
        for s in self.sites:
            offsets[s] = total
            total += sizes[s]
        rows = []
        for ekey, a, b in self.constraint_edges():
            xe = X.edge_matrix(ekey)
            ye = Y.edge_matrix(ekey)
            n_eq = Y.dim(b) * X.dim(a)
            if n_eq == 0:
                continue
            # phi_b @ xe  (unknown phi_b, row-major vec):  I kron xe^T
            m1 = Matrix.identity(f, Y.dim(b)).kron(xe.transpose())
            # ye @ phi_a:  ye kron I
            m2 = ye.kron(Matrix.identity(f, X.dim(a)))
            block_rows = [[f.zero()] * total for _ in range(n_eq)]
            for i in range(n_eq):
                for j in range(sizes[b]):
                    block_rows[i][offsets[b] + j] = m1.entries[i][j]
                for j in range(sizes[a]):
                    block_rows[i][offsets[a] + j] = f.sub(block_rows[i][offsets[a] + j], m2.entries[i][j])
            rows.extend(block_rows)
        if rows:
            cons = Matrix(f, len(rows), total, rows)
            null = cons.kernel_basis()
        else:
            null = Matrix.identity(f, total)
        basis = []
        for j in range(null.cols):
            col = null.col(j)
            blocks = {}
            for s in self.sites:
                seg = col[offsets[s]:offsets[s] + sizes[s]]
                blocks[s] = Matrix(f, Y.dim(s), X.dim(s),
                                   [seg[i * X.dim(s):(i + 1) * X.dim(s)] for i in range(Y.dim(s))])
            basis.append(CMor(self, X, Y, blocks, check=False))
        basis = tuple(basis)
        self._hom_cache[key] = basis
        return basis

    def mor_coords(self, mor, basis):
        """Coordinates of ``mor`` in a hom-space basis (raises if outside the span)."""
        if not basis:
            if mor.is_zero():
                return Matrix.zero(self.field, 0, 1)
            raise ValueError("nonzero morphism in zero hom space")
        cols = [b.vec() for b in basis]
        big = cols[0]
        for c in cols[1:]:
            big = big.hstack(c)
        sol = big.solve(mor.vec())
        if sol is None:
            raise ValueError("morphism not in span of basis")
        return sol

    def mor_from_coords(self, coords, basis, src, dst):
        out = self.zero_mor(src, dst)
        for i, b in enumerate(basis):
            c = coords.entries[i][0]
            if c != 0:
                out = out + b.scale(c)
        return out

    # -- sub/quotient presentations -------------------------------------------

    def cokernel(self, u):
        """Cokernel of u: A -> B.  Returns (C, pi: B->C, iota: C->B section).

        iota is a k-linear section of pi choosing representatives; it is not a
        morphism of the carrier, only its per-site matrices are exposed (used
        for presentation comparisons).
        """
        f = self.field
        pis, iotas, dims = {}, {}, {}
        for s in self.sites:
            pi, iota = quotient_of_span(f, u.dst.dim(s), u.blocks[s])
            pis[s], iotas[s] = pi, iota
            dims[s] = pi.rows
        edges = {}
        for key in self.all_edge_keys():
            a, b = self.edge_sites(key)
            edges[key] = pis[b] @ (u.dst.edge_matrix(key) @ iotas[a])
        C = self.build(dims, edges)
        pi_mor = CMor(self, u.dst, C, pis, check=False)
        return C, pi_mor, iotas

    def kernel_obj(self, u):
        """Kernel of u: A -> B.  Returns (K, incl: K->A)."""
        f = self.field
        incls, dims = {}, {}
        for s in self.sites:
            kb = u.blocks[s].kernel_basis()
            incls[s] = kb
            dims[s] = kb.cols
        edges = {}
        for key in self.all_edge_keys():
            a, b = self.edge_sites(key)
            # A-edge maps kernel into kernel; express in the kernel basis
            img = u.src.edge_matrix(key) @ incls[a]
            sol = incls[b].solve(img)
            if sol is None:
                raise RuntimeError("kernel not preserved by arrow %r" % (key,))
            edges[key] = sol
        K = self.build(dims, edges)
        incl = CMor(self, K, u.src, incls, check=False)
        return K, incl

    def edge_sites(self, key):
        """Source/target site of any edge key (subclasses extend beyond constraints)."""
        m = getattr(self, "_edge_sites_memo", None)
        if m is None:
            m = self._edge_site_map()
            self._edge_sites_memo = m
        return m[key]

    def requotient(self, ambient_obj, iota1, pi2, C1, C2):
        """Iso between two quotient presentations of the same subspace of the same object."""
        blocks = {s: pi2.blocks[s] @ iota1[s] for s in self.sites}
        return CMor(self, C1, C2, blocks, check=False)


def quotient_of_span(field, n, span):
    """Quotient of k^n by the column span of ``span``.

    Returns (pi: q x n, iota: n x q) with pi @ iota = I_q and ker(pi) = im(span);
    the complement basis is chosen deterministically from standard basis vectors.
    """
    aug = span.hstack(Matrix.identity(field, n))
    red, pivots = aug._rref()
    span_rank = len([p for p in pivots if p < span.cols])
    comp_idx = [p - span.cols for p in pivots if p >= span.cols]
    q = n - span_rank
    comp_idx = comp_idx[:q]
    # basis matrix T = [span-basis | e_{comp}] ; pi = bottom q rows of T^{-1}
    basis_cols = []
    pivot_span_cols = [p for p in pivots if p < span.cols][:span_rank]
    for c in pivot_span_cols:
        basis_cols.append(span.col(c))
    for c in comp_idx:
        e = [field.zero()] * n
        e[c] = field.one()
        basis_cols.append(e)
    T = Matrix(field, n, n, [[basis_cols[j][i] for j in range(n)] for i in range(n)])
    pi = T.inverse().submatrix(range(span_rank, n), range(n))
    iota_cols = comp_idx
    iota = Matrix(field, n, q,
                  [[field.one() if (j < len(iota_cols) and i == iota_cols[j]) else field.zero()
                    for j in range(q)] for i in range(n)])
    return pi, iota


class VectCarrier(Carrier):
    """Plain finite-dimensional vector spaces: one site, no arrows."""

    SITE = "*"

    def __init__(self, field):
        super().__init__()
        self.field = field
        self.sites = (self.SITE,)

    def constraint_edges(self):
        return ()

    def unit(self):
        return self.build({self.SITE: 1}, {})

    def space(self, dim):
        return self.build({self.SITE: dim}, {})

    def mor(self, src, dst, matrix, check=True):
        return CMor(self, src, dst, {self.SITE: matrix}, check=check)

    def projective_site(self, site):
        return self.unit()

    def cover(self, X):
        return self.identity(X)

    def __eq__(self, other):
        return isinstance(other, VectCarrier) and other.field == self.field

    def __hash__(self):
        return hash(("Vect", self.field))

    def describe(self):
        return "Vect(%s)" % self.field
