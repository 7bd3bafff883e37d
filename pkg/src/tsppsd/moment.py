"""Moment matrices of the quadratic form q_f(h) = (1/|X|) sum f(x) h(x)^2.

Two construction routes:

* enumeration over an explicit finite ground set (any degree k, exact
  rationals, resource-capped basis size);
* a closed form for degree 1 over the Hamiltonian-cycle ground set of K_n:
  every entry is f.constant * P(I u J) + sum_e coeff(e) * P(I u J u {e}),
  where P(E) is the fraction of tours containing the edge set E, available
  in closed form from the disjoint-path count.

The closed-form builder exploits the vertex coloring carried by functional
generators: entries depend only on the color-isomorphism class of the edge
pair, so a matrix with ~10^5 entries needs only a few dozen rational
computations.  Matrices are exact; floats appear only in eigensolving.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from tsppsd.cycles import (
    DEFAULT_CYCLE_CAP,
    Edge,
    all_edges,
    count_cycles_with_edge_set,
    edge,
    edge_index,
    enumerate_cycles,
    factorial,
    num_cycles,
)
from tsppsd.errors import ResourceLimitError
from tsppsd.functionals import LinearFunctional
from tsppsd.polynomials import CertificatePolynomial
from tsppsd.rational import format_fraction

DEFAULT_BASIS_CAP = 6000

Monomial = tuple[int, ...]  # sorted coordinate indices, repetition allowed


@dataclass(frozen=True)
class GroundSet:
    """A finite set of rational vectors, coordinates indexed 0..dimension-1."""

    dimension: int
    points: tuple[tuple[Fraction, ...], ...]
    labels: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        if not self.points:
            raise ValueError("ground set must be nonempty")
        for p in self.points:
            if len(p) != self.dimension:
                raise ValueError("point dimension mismatch")
        if len(set(self.points)) != len(self.points):
            raise ValueError("ground set has duplicate points")
        if self.labels is not None and len(self.labels) != self.dimension:
            raise ValueError("need one label per coordinate")

    def label(self, c: int) -> str:
        return self.labels[c] if self.labels else f"x{c + 1}"

    @property
    def is_zero_one(self) -> bool:
        return all(x in (0, 1) for p in self.points for x in p)


def cycle_ground_set(n: int, cap: int = DEFAULT_CYCLE_CAP) -> GroundSet:
    """Incidence vectors of all Hamiltonian cycles of K_n."""
    pts = tuple(
        tuple(Fraction(b) for b in c.incidence) for c in enumerate_cycles(n, cap)
    )
    labels = tuple(f"{e.u}-{e.v}" for e in all_edges(n))
    return GroundSet(n * (n - 1) // 2, pts, labels)


def monomial_basis(dimension: int, k: int, cap: int = DEFAULT_BASIS_CAP) -> list[Monomial]:
    """Coordinate multisets of size <= k, ordered by degree then lexicographically."""
    if k < 1:
        raise ValueError(f"need k >= 1, got {k}")
    size = sum(math.comb(dimension + j - 1, j) for j in range(k + 1))
    if size > cap:
        raise ResourceLimitError(f"basis size {size} exceeds cap {cap}")
    basis: list[Monomial] = []
    for deg in range(k + 1):
        basis.extend(itertools.combinations_with_replacement(range(dimension), deg))
    return basis


def monomial_label(mono: Monomial, ground: GroundSet) -> str:
    return _edge_monomial_label(mono, [ground.label(c) for c in range(ground.dimension)])


@dataclass
class MomentMatrix:
    """Symmetric exact matrix of q_f in the monomial basis (immutable by convention)."""

    k: int
    basis: tuple[Monomial, ...]
    labels: tuple[str, ...]
    entries: list[list[Fraction]]
    n: int | None = None  # vertex count when built over tours of K_n

    @property
    def dim(self) -> int:
        return len(self.basis)

    def entry(self, i: int, j: int) -> Fraction:
        return self.entries[i][j]

    def trace(self) -> Fraction:
        return sum((self.entries[i][i] for i in range(self.dim)), Fraction(0))

    def to_float(self) -> np.ndarray:
        return np.array([[float(x) for x in row] for row in self.entries])

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "basis": list(self.labels),
            "entries": [[format_fraction(x) for x in row] for row in self.entries],
        }


def trace_of(M: MomentMatrix) -> Fraction:
    return M.trace()


def expected_trace(n: int, k: int, average: Fraction | int = 1) -> Fraction:
    """Trace forced by the multiset count: C(n+k, k) times the average of f."""
    return math.comb(n + k, k) * Fraction(average)


def moment_matrix_enumerated(
    ground: GroundSet,
    values: Sequence[Fraction],
    k: int,
    basis_cap: int = DEFAULT_BASIS_CAP,
) -> MomentMatrix:
    """Entry (I, J) = (1/|X|) sum_x f(x) mono_I(x) mono_J(x), exact."""
    if len(values) != len(ground.points):
        raise ValueError("need one value per ground-set point")
    basis = monomial_basis(ground.dimension, k, basis_cap)
    index = {m: i for i, m in enumerate(basis)}
    d = len(basis)
    vals = [Fraction(v) for v in values]
    den = math.lcm(*(v.denominator for v in vals)) if vals else 1
    ints = [int(v * den) for v in vals]
    num = [[0] * d for _ in range(d)]
    if ground.is_zero_one:
        # mono_I(x) = 1 iff every coordinate of I is 1 on x; repetition collapses.
        for pt, fv in zip(ground.points, ints):
            if fv == 0:
                continue
            support = [c for c, x in enumerate(pt) if x]
            live = [0]
            for deg in range(1, k + 1):
                live.extend(
                    index[m]
                    for m in itertools.combinations_with_replacement(support, deg)
                )
            for a_pos, ia in enumerate(live):
                row = num[ia]
                for ib in live[a_pos:]:
                    row[ib] += fv
        scale = Fraction(1, den * len(ground.points))
        entries = [[Fraction(0)] * d for _ in range(d)]
        for i in range(d):
            for j in range(i, d):
                entries[i][j] = entries[j][i] = num[i][j] * scale
        return MomentMatrix(
            k, tuple(basis), tuple(monomial_label(m, ground) for m in basis), entries
        )
    # general rational points
    entries = [[Fraction(0)] * d for _ in range(d)]
    for pt, fv in zip(ground.points, vals):
        if fv == 0:
            continue
        mono_vals = [_mono_value(m, pt) for m in basis]
        for i in range(d):
            mi = mono_vals[i]
            if mi == 0:
                continue
            fmi = fv * mi
            row = entries[i]
            for j in range(i, d):
                if mono_vals[j]:
                    row[j] += fmi * mono_vals[j]
    npts = len(ground.points)
    for i in range(d):
        for j in range(i, d):
            entries[i][j] = entries[i][j] / npts
            entries[j][i] = entries[i][j]
    return MomentMatrix(
        k, tuple(basis), tuple(monomial_label(m, ground) for m in basis), entries
    )


def _mono_value(mono: Monomial, point: Sequence[Fraction]) -> Fraction:
    val = Fraction(1)
    for c in mono:
        val *= point[c]
        if val == 0:
            return val
    return val


def moment_matrix_enumerated_cycles(
    n: int,
    f: LinearFunctional,
    k: int,
    cycle_cap: int = DEFAULT_CYCLE_CAP,
    basis_cap: int = DEFAULT_BASIS_CAP,
) -> MomentMatrix:
    """Enumerated moment matrix over the tours of K_n for a linear functional."""
    if f.n != n:
        raise ValueError(f"functional has n={f.n}, requested n={n}")
    cycles = enumerate_cycles(n, cycle_cap)
    edges = all_edges(n)
    dim = len(edges)
    basis = monomial_basis(dim, k, basis_cap)
    index = {m: i for i, m in enumerate(basis)}
    d = len(basis)
    den = math.lcm(
        f.constant.denominator, *(c.denominator for c in f.coeff.values())
    ) if f.coeff else f.constant.denominator
    const_i = int(f.constant * den)
    coeff_i = {e: int(c * den) for e, c in f.coeff.items()}
    num = [[0] * d for _ in range(d)]
    eidx = {e: i for i, e in enumerate(edges)}
    for cyc in cycles:
        fv = const_i + sum(coeff_i.get(e, 0) for e in cyc.edges)
        if fv == 0:
            continue
        support = sorted(eidx[e] for e in cyc.edges)
        live = [0]
        for deg in range(1, k + 1):
            live.extend(
                index[m] for m in itertools.combinations_with_replacement(support, deg)
            )
        for a_pos, ia in enumerate(live):
            row = num[ia]
            for ib in live[a_pos:]:
                row[ib] += fv
    scale = Fraction(1, den * len(cycles))
    entries = [[Fraction(0)] * d for _ in range(d)]
    for i in range(d):
        for j in range(i, d):
            entries[i][j] = entries[j][i] = num[i][j] * scale
    enames = [f"{e.u}-{e.v}" for e in edges]
    labels = tuple(_edge_monomial_label(m, enames) for m in basis)
    return MomentMatrix(k, tuple(basis), labels, entries, n=n)


def _edge_monomial_label(mono: Monomial, names: Sequence[str]) -> str:
    if not mono:
        return "1"
    parts = []
    for c, grp in itertools.groupby(mono):
        mult = len(list(grp))
        parts.append(names[c] if mult == 1 else f"{names[c]}^{mult}")
    return "*".join(parts)


# ---------------------------------------------------------------------------
# closed form for k = 1
# ---------------------------------------------------------------------------

def containment_probability(n: int, E: Iterable[Edge]) -> Fraction:
    """Fraction of Hamiltonian cycles of K_n containing every edge of E."""
    return Fraction(count_cycles_with_edge_set(n, E), num_cycles(n))


def closed_form_entry(f: LinearFunctional, base: Iterable[Edge]) -> Fraction:
    """Entry of the degree-1 moment matrix for basis pair with union `base`."""
    base_set = frozenset(base)
    n = f.n
    val = f.constant * containment_probability(n, base_set)
    if not f.coeff:
        return val
    info = _base_structure(base_set) if len(base_set) <= 2 else None
    half = num_cycles(n)
    for e, c in f.coeff.items():
        if info is not None:
            cnt = _count_with_extra(n, base_set, info, e)
        else:
            cnt = count_cycles_with_edge_set(n, base_set | {e})
        if cnt:
            val += c * Fraction(cnt, half)
    return val


def _base_structure(base: frozenset[Edge]):
    """(edge count, component count, vertex degree, vertex component id)."""
    deg: dict[int, int] = {}
    comp: dict[int, int] = {}
    m = 0
    for e in sorted(base):
        cu, cv = comp.get(e.u), comp.get(e.v)
        if cu is None and cv is None:
            m += 1
            comp[e.u] = comp[e.v] = m
        elif cu is None:
            comp[e.u] = cv
        elif cv is None:
            comp[e.v] = cu
        else:
            m -= 1  # unreachable for <= 2 distinct edges
        deg[e.u] = deg.get(e.u, 0) + 1
        deg[e.v] = deg.get(e.v, 0) + 1
    return len(base), m, deg, comp


def _count_with_extra(n: int, base: frozenset[Edge], info, e: Edge) -> int:
    """Cycles containing base (<= 2 disjoint-path edges) and e, closed form."""
    k, m, deg, comp = info
    if e in base:
        k2, m2 = k, m
    else:
        du, dv = deg.get(e.u, 0), deg.get(e.v, 0)
        if du >= 2 or dv >= 2:
            return 0
        if du == 0 and dv == 0:
            k2, m2 = k + 1, m + 1
        elif du and dv:
            if comp[e.u] == comp[e.v]:
                return 0  # closes a short cycle
            k2, m2 = k + 1, m - 1
        else:
            k2, m2 = k + 1, m
    if m2 == 0:
        return num_cycles(n)
    return 2 ** (m2 - 1) * factorial(n - k2 - 1)


class ClosedFormK1:
    """Degree-1 closed-form moment matrix in pair-class compressed form.

    Basis order: the constant monomial, then the edges of K_n
    lexicographically.  When the functional carries a vertex coloring the
    entry for a basis pair depends only on the color pattern of the two
    edges and how they overlap, so the matrix is stored as an integer
    class-code array plus one exact value per class.
    """

    def __init__(self, f: LinearFunctional):
        self.f = f
        self.n = f.n
        self.edges = all_edges(self.n)
        self.dim = 1 + len(self.edges)
        if f.colors is not None:
            self._codes = _pair_class_codes(self.n, f.colors)
            reps = _class_representatives(self._codes)
            self._values = {
                code: closed_form_entry(f, _basis_pair_union(self.edges, i, j))
                for code, (i, j) in reps.items()
            }
        else:
            self._codes = None
            self._dense = [[Fraction(0)] * self.dim for _ in range(self.dim)]
            for i in range(self.dim):
                for j in range(i, self.dim):
                    v = closed_form_entry(f, _basis_pair_union(self.edges, i, j))
                    self._dense[i][j] = self._dense[j][i] = v

    def entry(self, i: int, j: int) -> Fraction:
        if self._codes is None:
            return self._dense[i][j]
        return self._values[int(self._codes[i, j])]

    def row(self, i: int, cols: Sequence[int] | None = None) -> list[Fraction]:
        if self._codes is None:
            row = self._dense[i]
            return list(row) if cols is None else [row[j] for j in cols]
        vals = self._values
        codes = self._codes[i]
        if cols is None:
            return [vals[int(c)] for c in codes]
        return [vals[int(codes[j])] for j in cols]

    def exact_entries(self, keep: Sequence[int] | None = None) -> list[list[Fraction]]:
        idx = range(self.dim) if keep is None else keep
        return [self.row(i, None if keep is None else keep) for i in idx]

    def float_matrix(self, keep: Sequence[int] | None = None) -> np.ndarray:
        if self._codes is None:
            M = np.array(
                [[float(x) for x in row] for row in self._dense]
            )
        else:
            uniq, inv = np.unique(self._codes, return_inverse=True)
            lut = np.array([float(self._values[int(c)]) for c in uniq])
            M = lut[inv].reshape(self._codes.shape)
        if keep is not None:
            M = M[np.ix_(keep, keep)]
        return M

    def float_entry_error_bound(self) -> float:
        """Max over classes of |float(value) - value|, exact comparison."""
        values = (
            self._values.values()
            if self._codes is not None
            else (x for row in self._dense for x in row)
        )
        worst = Fraction(0)
        for v in values:
            err = abs(Fraction(float(v)) - v)
            if err > worst:
                worst = err
        # round the exact bound outward
        up = math.nextafter(float(worst), math.inf)
        return up if Fraction(up) >= worst else math.nextafter(up, math.inf)

    def class_group_sums(
        self, keep: Sequence[int], weights: Sequence[Fraction]
    ) -> list[list[tuple[Fraction, int]]] | None:
        """Per row of the keep-submatrix: exact integer weight sums per entry
        class, paired with the class value.  Integer weights only; None when
        no class structure is available or weights are too large for exact
        float accumulation (callers then do plain rational dot products)."""
        if self._codes is None:
            return None
        wi = []
        for x in weights:
            f = Fraction(x)
            if f.denominator != 1 or abs(f.numerator) > 10**12:
                return None
            wi.append(f.numerator)
        sub = self._codes[np.ix_(keep, keep)]
        uniq, inv = np.unique(sub, return_inverse=True)
        inv = inv.reshape(sub.shape)
        ncls = len(uniq)
        r = len(keep)
        warr = np.array(wi, dtype=np.float64)
        sums = np.zeros((r, ncls))
        np.add.at(sums, (np.arange(r)[:, None], inv), warr[None, :])
        vals = [self._values[int(c)] for c in uniq]
        out = []
        for row in range(r):
            srow = sums[row]
            out.append(
                [(vals[ci], int(srow[ci])) for ci in range(ncls) if srow[ci]]
            )
        return out

    def star_kernel_verified(self) -> bool:
        """Exact check that every vertex-degree relation annihilates the
        matrix (2 on the constant coordinate, -1 on each edge at the vertex).

        Fast route: scale all entries to a common-denominator integer
        matrix; when every product and partial sum provably fits in the
        53-bit float mantissa the numpy matmul is exact integer arithmetic.
        Otherwise falls back to rational dot products.
        """
        n = self.n
        if self._codes is not None:
            vals = list(self._values.values())
        else:
            vals = [x for row in self._dense for x in row]
        den = math.lcm(*(v.denominator for v in vals)) if vals else 1
        bound = max((abs(v.numerator) * (den // v.denominator) for v in vals),
                    default=0)
        # products bounded by 2*bound, partial sums by (dim+1) products
        if 2 * bound * (self.dim + 1) < 2**52:
            if self._codes is not None:
                uniq, inv = np.unique(self._codes, return_inverse=True)
                lut = np.array(
                    [float(int(self._values[int(c)] * den)) for c in uniq]
                )
                M = lut[inv].reshape(self._codes.shape)
            else:
                M = np.array(
                    [[float(int(x * den)) for x in row] for row in self._dense]
                )
            S = np.zeros((self.dim, n))
            for i in range(1, n + 1):
                S[0, i - 1] = 2.0
                for j in range(1, n + 1):
                    if j != i:
                        S[1 + edge_index(edge(i, j), n), i - 1] = -1.0
            return not np.any(M @ S)
        for i in range(1, n + 1):
            cols = [(0, Fraction(2))] + [
                (1 + edge_index(edge(i, j), n), Fraction(-1))
                for j in range(1, n + 1)
                if j != i
            ]
            for r in range(self.dim):
                if sum((self.entry(r, c) * x for c, x in cols), Fraction(0)):
                    return False
        return True

    def zero_rows(self) -> list[int]:
        """Indices whose entire row is exactly zero (exact test via classes)."""
        if self._codes is None:
            return [
                i for i, row in enumerate(self._dense) if all(x == 0 for x in row)
            ]
        zero_codes = {c for c, v in self._values.items() if v == 0}
        if not zero_codes:
            return []
        mask = np.isin(self._codes, np.array(sorted(zero_codes), dtype=np.int64))
        return [i for i in range(self.dim) if mask[i].all()]

    def to_moment_matrix(self) -> MomentMatrix:
        basis: list[Monomial] = [()] + [(c,) for c in range(len(self.edges))]
        labels = ("1",) + tuple(f"{e.u}-{e.v}" for e in self.edges)
        return MomentMatrix(
            1, tuple(basis), labels, self.exact_entries(), n=self.n
        )


def _basis_pair_union(edges: list[Edge], i: int, j: int) -> frozenset[Edge]:
    out = set()
    if i > 0:
        out.add(edges[i - 1])
    if j > 0:
        out.add(edges[j - 1])
    return frozenset(out)


def _pair_class_codes(n: int, colors: tuple[int, ...]) -> np.ndarray:
    """Int64 class code per basis pair; equal codes have equal entries for
    any functional invariant under color-preserving vertex permutations."""
    palette = {c: i for i, c in enumerate(sorted(set(colors)))}
    col = np.array([palette[c] for c in colors], dtype=np.int64)
    if len(palette) > 1000:
        raise ValueError("too many colors to pack class codes")
    edges = all_edges(n)
    u = np.array([e.u - 1 for e in edges], dtype=np.int64)
    v = np.array([e.v - 1 for e in edges], dtype=np.int64)
    cu, cv = col[u], col[v]
    lo = np.minimum(cu, cv)
    hi = np.maximum(cu, cv)
    pcode = lo * 1024 + hi  # < 2^20
    E = len(edges)
    d = E + 1
    codes = np.empty((d, d), dtype=np.int64)
    codes[0, 0] = 0
    single = (3 << 50) + pcode
    codes[0, 1:] = single
    codes[1:, 0] = single
    # pairwise blocks
    ui, uj = u[:, None], u[None, :]
    vi, vj = v[:, None], v[None, :]
    shared = (ui == uj) | (ui == vj) | (vi == uj) | (vi == vj)
    # color of the shared vertex, seen from edge i
    shared_is_u = (ui == uj) | (ui == vj)
    cs = np.where(shared_is_u, cu[:, None], cv[:, None])
    oi = np.where(shared_is_u, cv[:, None], cu[:, None])
    shared_is_u_j = (uj == ui) | (uj == vi)
    oj = np.where(shared_is_u_j, cv[None, :], cu[None, :])
    o_lo = np.minimum(oi, oj)
    o_hi = np.maximum(oi, oj)
    shared_code = (1 << 50) + cs * (1 << 30) + o_lo * 1024 + o_hi
    p_lo = np.minimum(pcode[:, None], pcode[None, :])
    p_hi = np.maximum(pcode[:, None], pcode[None, :])
    disjoint_code = (2 << 50) + p_lo * (1 << 20) + p_hi
    block = np.where(shared, shared_code, disjoint_code)
    np.fill_diagonal(block, single)  # I u J collapses to the single edge
    codes[1:, 1:] = block
    return codes


def _class_representatives(codes: np.ndarray) -> dict[int, tuple[int, int]]:
    d = codes.shape[0]
    flat = codes.reshape(-1)
    uniq, first = np.unique(flat, return_index=True)
    return {
        int(c): (int(pos // d), int(pos % d)) for c, pos in zip(uniq, first)
    }


def closed_form_k1(f: LinearFunctional) -> ClosedFormK1:
    return ClosedFormK1(f)


def moment_matrix_closed_form_k1(f: LinearFunctional) -> MomentMatrix:
    """Exact degree-1 moment matrix at any n, no enumeration."""
    return ClosedFormK1(f).to_moment_matrix()


def quadratic_form_value(
    f: LinearFunctional,
    p: CertificatePolynomial,
    n: int,
    cycle_cap: int = DEFAULT_CYCLE_CAP,
) -> Fraction:
    """(1/|X|) sum over tours of f(x) p(x)^2, exact, by enumeration."""
    if f.n != n:
        raise ValueError(f"functional has n={f.n}, requested n={n}")
    cycles = enumerate_cycles(n, cycle_cap)
    den = math.lcm(
        f.constant.denominator, *(c.denominator for c in f.coeff.values())
    ) if f.coeff else f.constant.denominator
    const_i = int(f.constant * den)
    coeff_i = {e: int(c * den) for e, c in f.coeff.items()}
    fedges = p.factor_edges(n)
    total = 0
    for cyc in cycles:
        ce = cyc.edges
        if any((e in ce) == comp for e, comp in fedges):
            continue
        total += const_i + sum(coeff_i.get(e, 0) for e in ce)
    return Fraction(total, den * len(cycles))


def zero_one_certificate(y: Sequence[Fraction | int], X: GroundSet) -> CertificatePolynomial:
    """Indicator polynomial of the 0/1 point y within the 0/1 ground set X."""
    if not X.is_zero_one:
        raise ValueError("ground set must consist of 0/1 points")
    yt = tuple(Fraction(x) for x in y)
    if yt not in X.points:
        raise ValueError("y is not a point of the ground set")
    factors = tuple((c, x == 0) for c, x in enumerate(yt))
    return CertificatePolynomial("zero-one-product", factors)
