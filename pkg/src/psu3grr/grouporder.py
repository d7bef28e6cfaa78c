"""Generation and irreducibility certificates for the generator triples.

Generation is certified unconditionally: the triple acts on the q^3 + 1
isotropic points of the Hermitian form (the kernel of that action is the
center of SU3(q), so the permutation image is the subgroup of PSU3(q) the
projected triple generates), and a deterministic Schreier-Sims stabilizer
chain gives the exact order of that image.  Comparing against
|PSU3(q)| = q^3 (q^3+1) (q^2-1) / gcd(3, q+1) settles generation.

Irreducibility is certified two independent ways: an invariant-line search
via eigenspace intersections (covering invariant planes through transposes)
and the dimension of the simultaneous commutant, which is 1 exactly for
absolutely irreducible triples.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from math import gcd

import numpy as np

from .construct import GeneratorTriple
from .gf import Field, FieldElem
from .linalg import nullspace
from .mat3 import HermitianForm, Mat3, standard_hermitian_form


class DegenerateActionError(RuntimeError):
    """A supposed generator acts trivially on the isotropic points."""


def expected_group_order(q: int) -> int:
    return q ** 3 * (q ** 3 + 1) * (q ** 2 - 1) // gcd(3, q + 1)


# ---------------------------------------------------------------------------
# Isotropic points and the permutation action on them
# ---------------------------------------------------------------------------

def isotropic_points(field: Field, form: HermitianForm | None = None):
    """All projective points [v] with conj(v)^T . W . v = 0.

    Representatives are normalized (first nonzero coordinate = 1) and the
    list is sorted by representative in field enumeration order.  The count
    is always q^3 + 1.
    """
    action = IsotropicAction(field, form)
    return [tuple(FieldElem(field, int(i)) for i in row)
            for row in action.point_matrix]


class IsotropicAction:
    """Vectorised right action of matrices on the isotropic point set.

    Points are row vectors v acted on by v -> v * M, then renormalised.
    Requires a table-backed field (every supported q has one).
    """

    def __init__(self, field: Field, form: HermitianForm | None = None):
        if not field.has_tables:
            raise ValueError("isotropic action needs a table-backed field")
        self.field = field
        self.form = form or standard_hermitian_form(field)
        self.point_matrix = self._enumerate_points()
        self.degree = len(self.point_matrix)
        if self.degree != field.q ** 3 + 1:
            raise AssertionError(
                f"isotropic point count {self.degree} != q^3+1")
        size = field.size
        self._keys = (self.point_matrix[:, 0].astype(np.int64) * size
                      + self.point_matrix[:, 1]) * size + self.point_matrix[:, 2]
        self._dtype = np.int16 if self.degree <= 30000 else np.int32
        self.identity = np.arange(self.degree, dtype=self._dtype)

    def _form_values(self, v0, v1, v2):
        """conj(v)^T W v for vectors given as coordinate index arrays."""
        fld = self.field
        mul, add, powq = fld.mul_np, fld.add_np, fld.powq_np
        w = self.form.matrix.flat_indices
        coords = (v0, v1, v2)
        acc = np.zeros_like(v0)
        for i in range(3):
            ci = powq[coords[i]]
            for j in range(3):
                wij = w[3 * i + j]
                if wij:
                    acc = add[acc, mul[mul[ci, wij], coords[j]]]
        return acc

    def _enumerate_points(self):
        fld = self.field
        size = fld.size
        one = fld.one.index
        rows = []
        # [0, 0, 1]
        z = np.zeros(1, dtype=np.int32)
        if self._form_values(z, z, z + one)[0] == 0:
            rows.append(np.array([[0, 0, one]], dtype=np.int32))
        # [0, 1, x]
        x = np.arange(size, dtype=np.int32)
        zeros = np.zeros(size, dtype=np.int32)
        ones = np.full(size, one, dtype=np.int32)
        mask = self._form_values(zeros, ones, x) == 0
        if mask.any():
            sel = x[mask]
            rows.append(np.stack([np.zeros_like(sel), np.full_like(sel, one), sel], axis=1))
        # [1, x, y]
        xx = np.repeat(x, size)
        yy = np.tile(x, size)
        ones2 = np.full(size * size, one, dtype=np.int32)
        mask = self._form_values(ones2, xx, yy) == 0
        sel_x, sel_y = xx[mask], yy[mask]
        rows.append(np.stack([np.full_like(sel_x, one), sel_x, sel_y], axis=1))
        pts = np.concatenate(rows, axis=0)
        size64 = np.int64(size)
        keys = (pts[:, 0].astype(np.int64) * size64 + pts[:, 1]) * size64 + pts[:, 2]
        return pts[np.argsort(keys, kind="stable")]

    def permutation(self, mat: Mat3) -> np.ndarray:
        """Permutation array of the point indices under v -> v * M."""
        fld = self.field
        mul, add, inv = fld.mul_np, fld.add_np, fld.inv_np
        m = mat.flat_indices
        p0 = self.point_matrix[:, 0]
        p1 = self.point_matrix[:, 1]
        p2 = self.point_matrix[:, 2]
        w = []
        for j in range(3):
            col = add[add[mul[p0, m[j]], mul[p1, m[3 + j]]], mul[p2, m[6 + j]]]
            w.append(col)
        w0, w1, w2 = w
        lead = np.where(w0 != 0, w0, np.where(w1 != 0, w1, w2))
        if not lead.all():
            raise ValueError("matrix maps a point representative to zero")
        s = inv[lead]
        u0, u1, u2 = mul[w0, s], mul[w1, s], mul[w2, s]
        size = np.int64(self.field.size)
        keys = (u0.astype(np.int64) * size + u1) * size + u2
        pos = np.searchsorted(self._keys, keys)
        if (pos >= len(self._keys)).any() or \
                not np.array_equal(self._keys[pos], keys):
            raise ValueError(
                "matrix does not preserve the isotropic point set (is it "
                "unitary for this form?)")
        return pos.astype(self._dtype)


# ---------------------------------------------------------------------------
# Deterministic Schreier-Sims
# ---------------------------------------------------------------------------

def _compose(a, b):
    # x^(a then b); permutations as image arrays
    return b[a]


class _Level:
    __slots__ = ("beta", "gens", "orbit", "pos", "parent",
                 "trans", "trans_inv", "pending", "cache_cap")

    def __init__(self, beta: int, identity, cache_cap: int):
        self.beta = beta
        self.cache_cap = cache_cap  # max memoised transversals per direction
        self.gens = []
        self.orbit = [beta]
        self.pos = {beta: 0}
        self.parent = {}            # point -> (parent point, gen index)
        self.trans = {beta: identity}
        self.trans_inv = {beta: identity}
        self.pending = deque()      # unprocessed (orbit position, gen index)

    def add_gen(self, g):
        gi = len(self.gens)
        self.gens.append(g)
        for pos in range(len(self.orbit)):
            self.pending.append((pos, gi))
        self._grow()

    def _grow(self):
        i = 0
        orbit, pos = self.orbit, self.pos
        while i < len(orbit):
            a = orbit[i]
            for gi, g in enumerate(self.gens):
                b = int(g[a])
                if b not in pos:
                    pos[b] = len(orbit)
                    self.parent[b] = (a, gi)
                    for gj in range(len(self.gens)):
                        self.pending.append((len(orbit), gj))
                    orbit.append(b)
            i += 1

    def transversal(self, c: int):
        """u with beta^u = c, walking the Schreier tree path.

        Points near the tree root fill the memo first (path compression),
        so a finite cache_cap keeps the hottest entries.
        """
        t = self.trans.get(c)
        if t is not None:
            return t
        path = []
        x = c
        while x not in self.trans:
            path.append(x)
            x = self.parent[x][0]
        u = self.trans[x]
        for y in reversed(path):
            u = _compose(u, self.gens[self.parent[y][1]])
            if len(self.trans) < self.cache_cap:
                self.trans[y] = u
        return u

    def transversal_inv(self, c: int):
        t = self.trans_inv.get(c)
        if t is None:
            u = self.transversal(c)
            t = np.empty_like(u)
            t[u] = np.arange(len(u), dtype=u.dtype)
            if len(self.trans_inv) < self.cache_cap:
                self.trans_inv[c] = t
        return t


class StabilizerChain:
    """Incremental deterministic Schreier-Sims on permutation arrays.

    Level l stores the full strong generating set S_l of the l-th chain
    subgroup, so S_0 contains (residues of) all input generators and
    S_0 >= S_1 >= ... as sets: a strong generator that fixes the first j
    base points is appended to every level 0..j.  Every Schreier generator
    of every level is sifted to the identity before the chain reports an
    order, so the reported order is unconditional.  Base points are chosen
    greedily as the first moved point; all iteration orders are fixed, so
    two runs over the same generators agree exactly.
    """

    # full per-point transversal memos below this degree; above it each
    # level keeps at most CACHE_CAP_LARGE entries per direction, bounding
    # memory at roughly 4 * cap * degree bytes per level
    CACHE_DEGREE_LIMIT = 6000
    CACHE_CAP_LARGE = 2048

    def __init__(self, degree: int, dtype=np.int32,
                 cache_transversals: bool | None = None):
        self.degree = degree
        self.identity = np.arange(degree, dtype=dtype)
        if cache_transversals is None:
            cache_transversals = degree <= self.CACHE_DEGREE_LIMIT
        self.cache_cap = degree + 1 if cache_transversals else self.CACHE_CAP_LARGE
        self.levels: list[_Level] = []

    def add_generator(self, perm: np.ndarray):
        perm = np.asarray(perm, dtype=self.identity.dtype)
        if np.array_equal(perm, self.identity):
            return
        residue, lvl = self._sift(perm, 0)
        if not np.array_equal(residue, self.identity):
            self._extend(residue, lvl)
            self._drain()

    def contains(self, perm: np.ndarray) -> bool:
        residue, _ = self._sift(np.asarray(perm, dtype=self.identity.dtype), 0)
        return np.array_equal(residue, self.identity)

    def _sift(self, g, start: int):
        r = g
        for li in range(start, len(self.levels)):
            level = self.levels[li]
            c = int(r[level.beta])
            if c == level.beta:
                continue
            if c not in level.pos:
                return r, li
            r = _compose(r, level.transversal_inv(c))
        return r, len(self.levels)

    def _extend(self, g, lvl: int):
        """Install g, which fixes the first lvl base points, at levels 0..lvl."""
        if lvl == len(self.levels):
            beta = int(np.flatnonzero(g != self.identity)[0])
            self.levels.append(_Level(beta, self.identity, self.cache_cap))
        for li in range(lvl + 1):
            self.levels[li].add_gen(g)

    def _drain(self):
        """Process pending Schreier pairs, deepest level first."""
        while True:
            lvl = None
            for li in range(len(self.levels) - 1, -1, -1):
                if self.levels[li].pending:
                    lvl = li
                    break
            if lvl is None:
                return
            level = self.levels[lvl]
            a_pos, gi = level.pending.popleft()
            a = level.orbit[a_pos]
            h = level.gens[gi]
            w = _compose(level.transversal(a), h)
            residue, l2 = self._sift(w, lvl)
            if not np.array_equal(residue, self.identity):
                self._extend(residue, l2)

    def order(self) -> int:
        out = 1
        for level in self.levels:
            out *= len(level.orbit)
        return out

    @property
    def base(self) -> tuple[int, ...]:
        return tuple(level.beta for level in self.levels)

    @property
    def orbit_lengths(self) -> tuple[int, ...]:
        return tuple(len(level.orbit) for level in self.levels)


@dataclass(frozen=True)
class PermGroupCertificate:
    degree: int
    order: int
    base: tuple[int, ...]
    orbit_lengths: tuple[int, ...]

    def as_dict(self, expected_order: int | None = None):
        out = {
            "degree": self.degree,
            "order": self.order,
            "base": list(self.base),
            "orbit_lengths": list(self.orbit_lengths),
        }
        if expected_order is not None:
            out["expected_order"] = expected_order
        return out


def permutation_order_certificate(perms, degree: int) -> PermGroupCertificate:
    chain = StabilizerChain(degree, dtype=perms[0].dtype)
    for p in perms:
        chain.add_generator(p)
    return PermGroupCertificate(degree, chain.order(), chain.base,
                                chain.orbit_lengths)


def group_order(t: GeneratorTriple,
                action: IsotropicAction | None = None) -> PermGroupCertificate:
    """Exact order of the permutation image of <X, Y, Z> on isotropic points."""
    action = action or IsotropicAction(t.field)
    perms = [action.permutation(m) for m in t.matrices]
    for name, p in zip("XYZ", perms):
        if np.array_equal(p, action.identity):
            raise DegenerateActionError(f"generator {name} acts trivially")
    return permutation_order_certificate(perms, action.degree)


def dihedral_image_order(t: GeneratorTriple,
                         action: IsotropicAction | None = None) -> int:
    """Order of the permutation image of <Y, Z> (dihedral for valid triples)."""
    action = action or IsotropicAction(t.field)
    perms = [action.permutation(m) for m in (t.Y, t.Z)]
    return permutation_order_certificate(perms, action.degree).order


# ---------------------------------------------------------------------------
# Irreducibility
# ---------------------------------------------------------------------------

def _eigenvalues(m: Mat3):
    cp = m.char_poly()
    return [lam for lam in m.field.elements() if cp.eval(lam).is_zero()]


def _minus_lambda(m: Mat3, lam: FieldElem) -> list[list[FieldElem]]:
    rows = []
    for i in range(3):
        row = []
        for j in range(3):
            x = m.entry(i, j)
            row.append(x - lam if i == j else x)
        rows.append(row)
    return rows


def _has_common_eigenline(mats) -> bool:
    """Is there one line fixed (as a column eigenline) by all three matrices?

    Any common invariant line is a simultaneous eigenline, so it shows up as
    a nonzero intersection null(A - l1) & null(B - l2) & null(C - l3) for
    some eigenvalue triple; conversely any such nonzero vector spans a
    common invariant line.
    """
    field = mats[0].field
    a, b, c = mats
    for la in _eigenvalues(a):
        rows_a = _minus_lambda(a, la)
        for lb in _eigenvalues(b):
            rows_ab = rows_a + _minus_lambda(b, lb)
            if not nullspace(rows_ab, 3, field):
                continue
            for lc in _eigenvalues(c):
                rows = rows_ab + _minus_lambda(c, lc)
                if nullspace(rows, 3, field):
                    return True
    return False


def invariant_subspace_test(t: GeneratorTriple) -> bool:
    """True iff the triple fixes no line and no plane of GF(q^2)^3.

    A common invariant plane for the triple is a common invariant line for
    the transposes, so both cases reduce to the eigenline search.
    """
    mats = list(t.matrices)
    transposed = [m.transpose() for m in mats]
    return not (_has_common_eigenline(transposed)
                or _has_common_eigenline(mats))


def commutant_dimension(t: GeneratorTriple) -> int:
    """Dimension of {D : DX = XD, DY = YD, DZ = ZD} over GF(q^2).

    Equals 1 exactly when the triple is absolutely irreducible; the identity
    triple gives 9, a single diagonal with distinct entries gives 3.
    """
    return commutant_dimension_of(list(t.matrices), t.field)


def commutant_dimension_of(mats, field: Field) -> int:
    zero = field.zero
    rows = []
    for m in mats:
        for i in range(3):
            for j in range(3):
                row = [zero] * 9
                for k in range(3):
                    # (DM)_{ij}: coeff of D_{ik} is M_{kj}
                    row[3 * i + k] = row[3 * i + k] + m.entry(k, j)
                    # (MD)_{ij}: coeff of D_{kj} is M_{ik}
                    row[3 * k + j] = row[3 * k + j] - m.entry(i, k)
                rows.append(row)
    return len(nullspace(rows, 9, field))
