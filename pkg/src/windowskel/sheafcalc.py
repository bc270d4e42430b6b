"""A finite calculus of rectilinear constructible sheaves.

Objects are formal wedge generators ``S(v, I)``: the constant sheaf on
``{x : x_j > v_j for j not in I}``.  ``I = 0`` gives the shifted open
quadrant sheaf ``Q_v``.  The morphism spaces are 0- or 1-dimensional
with a poset-like composition rule (an increasing union of quadrants
stabilizes the stalk tower, which is what makes the rule exact), so
cochain complexes of generators, their Hom complexes, and their stalks
are all finite exact-rational computations.

Degrees follow the convention that the leading quadrant of a cube
resolution sits in degree 0.  All scalars are rational; every reported
quantity is a dimension and independent of sign conventions, but the
built differentials are genuine (d*d = 0 is enforced at construction).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .lattice import (
    MLattice,
    WeightAction,
    Window,
    indices_of,
    mu_of,
    submasks,
)
from .skeleton import IndexType, appears, classify_index_set

Matrix = tuple[tuple[Fraction, ...], ...]


class WindowThinError(ValueError):
    """The window is not thick enough at the requested lattice point."""


class GenerationShapeError(ValueError):
    """The cube of probes mixes shapes this calculus does not flatten."""


@dataclass(frozen=True)
class WedgeGenerator:
    """Formal wedge sheaf S(v, I); coordinates inside I are irrelevant
    and are canonicalized to 0 by the `wedge` factory."""

    shift: tuple[int, ...]
    free_mask: int

    @property
    def n(self) -> int:
        return len(self.shift)

    def sort_key(self):
        return (self.free_mask, self.shift)

    def label(self) -> str:
        free = ",".join(str(i) for i in indices_of(self.free_mask))
        return f"S({list(self.shift)},{{{free}}})"


def wedge(shift: Sequence[int], free_mask: int = 0) -> WedgeGenerator:
    s = tuple(0 if free_mask >> i & 1 else int(x) for i, x in enumerate(shift))
    if free_mask >> len(s):
        raise ValueError("free directions out of range")
    return WedgeGenerator(shift=s, free_mask=free_mask)


def quadrant(shift: Sequence[int]) -> WedgeGenerator:
    return wedge(shift, 0)


def hom_dim(g1: WedgeGenerator, g2: WedgeGenerator) -> int:
    """dim Hom(S(v1,I1), S(v2,I2)): 1 iff I1 is contained in I2 and
    v1 >= v2 outside I2, else 0.  Nonzero homs compose to nonzero."""
    if g1.n != g2.n:
        raise ValueError("ambient dimension mismatch")
    if g1.free_mask & ~g2.free_mask:
        return 0
    for j in range(g1.n):
        if not (g2.free_mask >> j & 1) and g1.shift[j] < g2.shift[j]:
            return 0
    return 1


def translate_gen(g: WedgeGenerator, m: Sequence[int]) -> WedgeGenerator:
    return wedge(tuple(x + int(d) for x, d in zip(g.shift, m)), g.free_mask)


def koszul_sign(mask: int, j: int) -> int:
    """Sign for inserting index j into the subset `mask`."""
    return -1 if (mask & ((1 << j) - 1)).bit_count() % 2 else 1


@dataclass(frozen=True)
class GradedDimTable:
    """Finitely supported map from cohomological degree to dimension."""

    rows: tuple[tuple[int, int], ...]

    @classmethod
    def of(cls, dims: Mapping[int, int]) -> "GradedDimTable":
        return cls(rows=tuple(sorted((d, k) for d, k in dims.items() if k)))

    def as_dict(self) -> dict[int, int]:
        return dict(self.rows)

    def dim(self, degree: int) -> int:
        return dict(self.rows).get(degree, 0)

    @property
    def is_zero(self) -> bool:
        return not self.rows

    def euler(self) -> int:
        return sum((-1) ** d * k for d, k in self.rows)

    def total_dim(self) -> int:
        return sum(k for _, k in self.rows)

    def __add__(self, other: "GradedDimTable") -> "GradedDimTable":
        dims = dict(self.rows)
        for d, k in other.rows:
            dims[d] = dims.get(d, 0) + k
        return GradedDimTable.of(dims)


ZERO_TABLE = GradedDimTable(rows=())


def exact_rank(rows: list[list[Fraction]]) -> int:
    """Rank of a rational matrix by fraction Gaussian elimination."""
    mat = [row[:] for row in rows]
    rank = 0
    ncols = len(mat[0]) if mat else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(mat)) if mat[i][c] != 0), None)
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        inv = Fraction(1) / mat[rank][c]
        for i in range(len(mat)):
            if i != rank and mat[i][c] != 0:
                f = mat[i][c] * inv
                mat[i] = [x - f * y for x, y in zip(mat[i], mat[rank])]
        rank += 1
    return rank


def _cohomology_dims(dim_by_deg: dict[int, int],
                     mats: dict[int, list[list[Fraction]]]) -> GradedDimTable:
    """H^d = dim_d - rank(d_d) - rank(d_{d-1}) for a cochain complex."""
    ranks = {d: exact_rank(m) if m else 0 for d, m in mats.items()}
    dims = {}
    for d, k in dim_by_deg.items():
        h = k - ranks.get(d, 0) - ranks.get(d - 1, 0)
        assert h >= 0, "differential ranks exceed chain dimensions"
        if h:
            dims[d] = h
    return GradedDimTable.of(dims)


class SheafComplex:
    """A finite cochain complex of wedge generators.

    ``terms[d]`` is the ordered generator list in degree d and
    ``diffs[d][i][j]`` the coefficient of the component from
    ``terms[d][j]`` to ``terms[d+1][i]``.  Construction enforces that
    nonzero entries sit on 1-dimensional hom spaces and that d*d = 0.
    """

    def __init__(self, n: int,
                 terms: Mapping[int, Sequence[WedgeGenerator]],
                 diffs: Mapping[int, Sequence[Sequence[int | Fraction]]] | None = None):
        self.n = n
        self.terms: dict[int, tuple[WedgeGenerator, ...]] = {
            d: tuple(gs) for d, gs in terms.items() if gs
        }
        raw = diffs or {}
        self.diffs: dict[int, Matrix] = {}
        for d, mat in raw.items():
            m = tuple(tuple(Fraction(x) for x in row) for row in mat)
            if not any(any(row) for row in m):
                continue
            self.diffs[d] = m
        self._validate()

    def _validate(self):
        for d, gs in self.terms.items():
            for g in gs:
                if g.n != self.n:
                    raise ValueError("generator ambient dimension mismatch")
        for d, mat in self.diffs.items():
            src = self.terms.get(d, ())
            tgt = self.terms.get(d + 1, ())
            if len(mat) != len(tgt) or any(len(row) != len(src) for row in mat):
                raise ValueError(f"differential shape mismatch at degree {d}")
            for i, row in enumerate(mat):
                for j, x in enumerate(row):
                    if x != 0 and hom_dim(src[j], tgt[i]) != 1:
                        raise ValueError(
                            f"inadmissible differential entry "
                            f"{src[j].label()} -> {tgt[i].label()}")
        for d in self.diffs:
            nxt = self.diffs.get(d + 1)
            if nxt is None:
                continue
            src = self.terms[d]
            mid = self.terms[d + 1]
            tgt = self.terms[d + 2]
            for i in range(len(tgt)):
                for j in range(len(src)):
                    s = sum(nxt[i][k] * self.diffs[d][k][j] for k in range(len(mid)))
                    if s != 0:
                        raise ValueError("differential does not square to zero")

    @classmethod
    def zero(cls, n: int) -> "SheafComplex":
        return cls(n, {})

    @classmethod
    def single(cls, g: WedgeGenerator, degree: int = 0) -> "SheafComplex":
        return cls(g.n, {degree: (g,)})

    def degrees(self) -> tuple[int, ...]:
        return tuple(sorted(self.terms))

    def dim_table(self) -> GradedDimTable:
        return GradedDimTable.of({d: len(gs) for d, gs in self.terms.items()})

    def generators(self):
        for d in self.degrees():
            for g in self.terms[d]:
                yield d, g

    def shift_bounds(self) -> tuple[tuple[int, ...], tuple[int, ...]] | None:
        gens = [g for _, g in self.generators()]
        if not gens:
            return None
        lo = tuple(min(g.shift[i] for g in gens) for i in range(self.n))
        hi = tuple(max(g.shift[i] for g in gens) for i in range(self.n))
        return lo, hi

    def translate(self, m: Sequence[int]) -> "SheafComplex":
        return SheafComplex(
            self.n,
            {d: tuple(translate_gen(g, m) for g in gs) for d, gs in self.terms.items()},
            self.diffs,
        )

    def to_json_obj(self) -> dict:
        return {
            "n": self.n,
            "terms": {
                str(d): [{"shift": list(g.shift), "free": list(indices_of(g.free_mask))}
                         for g in gs]
                for d, gs in sorted(self.terms.items())
            },
            "diffs": {
                str(d): [[str(x) for x in row] for row in mat]
                for d, mat in sorted(self.diffs.items())
            },
        }


@dataclass(frozen=True)
class RegionPoint:
    """Sample point v - e_I/2 + e_{I^c}/2 for the open region indexed by
    `region_mask` next to the lattice point `base` (the +0 convention:
    stalks are sampled just up the diagonal)."""

    base: tuple[int, ...]
    region_mask: int

    @property
    def n(self) -> int:
        return len(self.base)


def generator_present(g: WedgeGenerator, p: RegionPoint) -> bool:
    """Stalk of S(w,J) at the region sample: 1 iff for every j outside J
    the base clears the shift (strictly on region directions)."""
    if g.n != p.n:
        raise ValueError("ambient dimension mismatch")
    for j in range(g.n):
        if g.free_mask >> j & 1:
            continue
        if p.region_mask >> j & 1:
            if p.base[j] <= g.shift[j]:
                return False
        elif p.base[j] < g.shift[j]:
            return False
    return True


def stalk_dims(x: SheafComplex, p: RegionPoint) -> GradedDimTable:
    """Cohomology of the scalar complex of stalks at a region point."""
    present = {d: [j for j, g in enumerate(gs) if generator_present(g, p)]
               for d, gs in x.terms.items()}
    dim_by_deg = {d: len(js) for d, js in present.items() if js}
    mats: dict[int, list[list[Fraction]]] = {}
    for d, mat in x.diffs.items():
        src = present.get(d, [])
        tgt = present.get(d + 1, [])
        if not src or not tgt:
            continue
        mats[d] = [[mat[i][j] for j in src] for i in tgt]
    return _cohomology_dims(dim_by_deg, mats)


def _hom_basis(x: SheafComplex, y: SheafComplex, k: int) -> list[tuple[int, int, int]]:
    basis = []
    for d in x.degrees():
        ygens = y.terms.get(d + k)
        if not ygens:
            continue
        for i, gx in enumerate(x.terms[d]):
            for j, gy in enumerate(ygens):
                if hom_dim(gx, gy):
                    basis.append((d, i, j))
    return basis


def hom_cohomology(x: SheafComplex, y: SheafComplex) -> GradedDimTable:
    """Cohomology dimensions of the total Hom complex Hom(x, y)."""
    if x.n != y.n:
        raise ValueError("ambient dimension mismatch")
    if not x.terms or not y.terms:
        return ZERO_TABLE
    kmin = min(y.degrees()) - max(x.degrees())
    kmax = max(y.degrees()) - min(x.degrees())
    bases = {k: _hom_basis(x, y, k) for k in range(kmin, kmax + 1)}
    dim_by_deg = {k: len(b) for k, b in bases.items() if b}
    mats: dict[int, list[list[Fraction]]] = {}
    for k in range(kmin, kmax):
        src, tgt = bases[k], bases[k + 1]
        if not src or not tgt:
            continue
        index = {key: r for r, key in enumerate(tgt)}
        mat = [[Fraction(0)] * len(src) for _ in tgt]
        sgn = -1 if k % 2 else 1
        for c, (d, i, j) in enumerate(src):
            dy = y.diffs.get(d + k)
            if dy is not None:
                for j2 in range(len(y.terms[d + k + 1])):
                    coeff = dy[j2][j]
                    if coeff and (d, i, j2) in index:
                        mat[index[(d, i, j2)]][c] += coeff
            dx = x.diffs.get(d - 1)
            if dx is not None:
                for i2 in range(len(x.terms[d - 1])):
                    coeff = dx[i][i2]
                    if coeff and (d - 1, i2, j) in index:
                        mat[index[(d - 1, i2, j)]][c] -= sgn * coeff
        mats[k] = mat
    return _cohomology_dims(dim_by_deg, mats)


@dataclass(frozen=True)
class EquivariantHom:
    """Translation-graded Hom: tables per kernel-lattice translation.

    ``per_translation`` is keyed by coefficient tuples over the lattice
    basis (the source complex is translated by the corresponding
    lattice vector).  ``truncated_degrees`` flags total rows that grew
    when the cutoff was doubled; those totals are lower bounds, never
    final values.
    """

    cutoff: int
    per_translation: tuple[tuple[tuple[int, ...], GradedDimTable], ...]
    total: GradedDimTable
    truncated_degrees: tuple[int, ...]

    @property
    def stable(self) -> bool:
        return not self.truncated_degrees

    def table_at(self, key: tuple[int, ...]) -> GradedDimTable:
        return dict(self.per_translation).get(key, ZERO_TABLE)


def _lattice_vector(lat: MLattice, coeffs: Sequence[int], n: int) -> tuple[int, ...]:
    v = [0] * n
    for c, row in zip(coeffs, lat.basis):
        for i, x in enumerate(row):
            v[i] += c * x
    return tuple(v)


def equivariant_hom(x: SheafComplex, y: SheafComplex, m_lattice: MLattice,
                    cutoff: int) -> EquivariantHom:
    """Sum of hom_cohomology over lattice translates of the source.

    Tables are computed for coefficient boxes of radius `cutoff` and
    re-checked at radius 2*cutoff; degrees whose totals change are
    reported as truncated.
    """
    if cutoff < 1:
        raise ValueError("cutoff must be >= 1")
    rank = m_lattice.rank
    inner: list[tuple[tuple[int, ...], GradedDimTable]] = []
    total_inner: dict[int, int] = {}
    total_outer: dict[int, int] = {}
    for coeffs in itertools.product(range(-2 * cutoff, 2 * cutoff + 1), repeat=rank):
        m = _lattice_vector(m_lattice, coeffs, x.n)
        table = hom_cohomology(x.translate(m), y)
        if table.is_zero:
            continue
        for d, k in table.rows:
            total_outer[d] = total_outer.get(d, 0) + k
        if all(abs(c) <= cutoff for c in coeffs):
            inner.append((coeffs, table))
            for d, k in table.rows:
                total_inner[d] = total_inner.get(d, 0) + k
    truncated = tuple(sorted(
        d for d in set(total_inner) | set(total_outer)
        if total_inner.get(d, 0) != total_outer.get(d, 0)
    ))
    inner.sort(key=lambda kv: kv[0])
    return EquivariantHom(
        cutoff=cutoff,
        per_translation=tuple(inner),
        total=GradedDimTable.of(total_inner),
        truncated_degrees=truncated,
    )


def _cube_complex(n: int, v: Sequence[int], base_mask: int, cube_mask: int,
                  degree_of_size, include_empty: bool,
                  sign_factor=None) -> tuple[dict, dict]:
    """Terms and differentials of a cube of wedges over subsets of
    `cube_mask`, all anchored at v on top of `base_mask`."""
    subsets = [s for s in submasks(cube_mask) if include_empty or s]
    by_degree: dict[int, list[int]] = {}
    for s in subsets:
        by_degree.setdefault(degree_of_size(s.bit_count()), []).append(s)
    for d in by_degree:
        by_degree[d].sort()
    terms = {d: tuple(wedge(v, base_mask | s) for s in masks)
             for d, masks in by_degree.items()}
    diffs = {}
    for d, masks in by_degree.items():
        nxt = by_degree.get(d + 1)
        if not nxt:
            continue
        index = {s: i for i, s in enumerate(nxt)}
        mat = [[0] * len(masks) for _ in nxt]
        for c, s in enumerate(masks):
            for j in indices_of(cube_mask & ~s):
                s2 = s | (1 << j)
                if s2 in index:
                    coeff = koszul_sign(s, j)
                    if sign_factor is not None:
                        coeff *= sign_factor(s)
                    mat[index[s2]][c] = coeff
        diffs[d] = mat
    return terms, diffs


def build_hourglass(m: int) -> SheafComplex:
    """The canonical probe complex replacing a missing quadrant stratum:
    wedges over all nonempty direction subsets of an m-dimensional
    ambient, the single-direction terms in degree 0."""
    if m < 1:
        raise ValueError("dimension must be >= 1")
    full = (1 << m) - 1
    terms, diffs = _cube_complex(m, (0,) * m, 0, full,
                                 degree_of_size=lambda k: k - 1,
                                 include_empty=False)
    return SheafComplex(m, terms, diffs)


def thick_enough(action: WeightAction, window: Window, mu_v: int) -> bool:
    """Window thickness at a level: inside the window always; above it
    needs size >= eta_plus; below it needs size >= eta_minus."""
    if window.minus_w(mu_v):
        return True
    if mu_v > window.hi:
        return window.size >= action.eta_plus
    return window.size >= action.eta_minus


def _probe_parts(action: WeightAction, window: Window, v: Sequence[int],
                 region_mask: int) -> tuple[bool, int]:
    """(single?, hourglass mask) for the probe at a region.

    Precondition: window thick at mu(v).  A non-appearing region is of
    positive type (hourglass over the negative directions) or negative
    type (over the positive directions); mixed regions always appear
    when the window is thick.
    """
    if appears(action, window, v, region_mask):
        return True, 0
    kind = classify_index_set(action, region_mask)
    if kind is IndexType.MIXED:
        raise RuntimeError("mixed region cannot be missing at a thick window")
    if kind is IndexType.PURE_POS:
        positive_type = True
    elif kind is IndexType.PURE_NEG:
        positive_type = False
    else:
        positive_type = mu_of(action, v) < window.lo
    return False, action.neg_mask if positive_type else action.pos_mask


def build_probe(action: WeightAction, window: Window, v: Sequence[int],
                region_mask: int) -> SheafComplex:
    """Stalk probe for the region next to v: the single wedge when its
    stratum appears in the window skeleton, else the product of the
    wedge with an hourglass over the opposite-sign directions."""
    v = tuple(int(x) for x in v)
    mu_v = mu_of(action, v)
    if not thick_enough(action, window, mu_v):
        raise WindowThinError(
            f"window size {window.size} not thick enough at mu={mu_v} "
            f"(needs eta_plus={action.eta_plus} above / "
            f"eta_minus={action.eta_minus} below)")
    single, hour_mask = _probe_parts(action, window, v, region_mask)
    if single:
        return SheafComplex.single(wedge(v, region_mask))
    terms, diffs = _cube_complex(action.n, v, region_mask, hour_mask,
                                 degree_of_size=lambda k: k - 1,
                                 include_empty=False)
    return SheafComplex(action.n, terms, diffs)


def build_microlocal_skyscraper(v: Sequence[int], imask: int) -> SheafComplex:
    """Cube resolution Q_v -> sum Q_{v-e_J} -> ... -> Q_{v-e_I} with the
    leading quadrant in degree 0."""
    if imask == 0:
        raise ValueError("skyscraper needs a nonempty direction set")
    v = tuple(int(x) for x in v)
    n = len(v)
    if imask >> n:
        raise ValueError("direction set out of range")
    subsets = submasks(imask)
    by_degree: dict[int, list[int]] = {}
    for s in subsets:
        by_degree.setdefault(s.bit_count(), []).append(s)
    for d in by_degree:
        by_degree[d].sort()
    def corner(s):
        return tuple(x - (s >> i & 1) for i, x in enumerate(v))
    terms = {d: tuple(quadrant(corner(s)) for s in masks)
             for d, masks in by_degree.items()}
    diffs = {}
    for d, masks in by_degree.items():
        nxt = by_degree.get(d + 1)
        if not nxt:
            continue
        index = {s: i for i, s in enumerate(nxt)}
        mat = [[0] * len(masks) for _ in nxt]
        for c, s in enumerate(masks):
            for j in indices_of(imask & ~s):
                mat[index[s | (1 << j)]][c] = koszul_sign(s, j)
        diffs[d] = mat
    return SheafComplex(n, terms, diffs)


def build_generation_complex(action: WeightAction, window: Window,
                             v: Sequence[int], sign: int) -> SheafComplex:
    """Cube of stalk probes witnessing one generation induction step.

    The cube runs over the subsets J of the positive (sign > 0) or
    negative (sign < 0) directions; the node for J carries the probe of
    the region J at v (the same stalk functor as the plain region at
    v - e_J).  The flattened total complex is stalkwise acyclic exactly
    when the probed microlocal covector misses the window skeleton.
    """
    v = tuple(int(x) for x in v)
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    smask = action.pos_mask if sign > 0 else action.neg_mask
    mu_v = mu_of(action, v)
    if not thick_enough(action, window, mu_v):
        raise WindowThinError(f"window not thick enough at mu={mu_v}")
    parts = {j: _probe_parts(action, window, v, j) for j in submasks(smask)}
    singles = {j for j, (single, _) in parts.items() if single}
    hour_masks = {h for _, (single, h) in parts.items() if not single}

    if len(singles) == len(parts):
        # every node appears: the plain Koszul cube of wedges
        terms, diffs = _cube_complex(action.n, v, 0, smask,
                                     degree_of_size=lambda k: k,
                                     include_empty=True)
        return SheafComplex(action.n, terms, diffs)

    if 0 not in singles and singles == set(parts) - {0} and hour_masks == {smask}:
        # the empty region is resolved by an hourglass over the cube
        # directions themselves; the flattening is the mapping cone of
        # the identity-shaped comparison, with negated cube signs
        gens: dict[int, list[tuple[str, int]]] = {}
        for s in submasks(smask):
            if not s:
                continue
            gens.setdefault(s.bit_count() - 1, []).append(("h", s))
            gens.setdefault(s.bit_count(), []).append(("c", s))
        for d in gens:
            gens[d].sort()
        terms = {d: tuple(wedge(v, s) for _, s in items)
                 for d, items in gens.items()}
        diffs = {}
        for d, items in gens.items():
            nxt = gens.get(d + 1)
            if not nxt:
                continue
            index = {key: i for i, key in enumerate(nxt)}
            mat = [[0] * len(items) for _ in nxt]
            for c, (part, s) in enumerate(items):
                if part == "h":
                    for j in indices_of(smask & ~s):
                        key = ("h", s | (1 << j))
                        if key in index:
                            mat[index[key]][c] = koszul_sign(s, j)
                    mat[index[("c", s)]][c] = 1
                else:
                    for j in indices_of(smask & ~s):
                        key = ("c", s | (1 << j))
                        if key in index:
                            mat[index[key]][c] = -koszul_sign(s, j)
            diffs[d] = mat
        return SheafComplex(action.n, terms, diffs)

    if not singles and len(hour_masks) == 1:
        hmask = next(iter(hour_masks))
        if hmask & smask:
            raise GenerationShapeError(
                "hourglass directions overlap the cube directions")
        # every node is an hourglass over a common transverse mask:
        # flatten as the double complex (cube) x (hourglass)
        gens = {}
        for j in submasks(smask):
            for k in submasks(hmask):
                if not k:
                    continue
                gens.setdefault(j.bit_count() + k.bit_count() - 1, []).append((j, k))
        for d in gens:
            gens[d].sort()
        terms = {d: tuple(wedge(v, j | k) for j, k in items)
                 for d, items in gens.items()}
        diffs = {}
        for d, items in gens.items():
            nxt = gens.get(d + 1)
            if not nxt:
                continue
            index = {key: i for i, key in enumerate(nxt)}
            mat = [[0] * len(items) for _ in nxt]
            for c, (j, k) in enumerate(items):
                for b in indices_of(hmask & ~k):
                    key = (j, k | (1 << b))
                    if key in index:
                        mat[index[key]][c] = koszul_sign(k, b)
                factor = -1 if (k.bit_count() - 1) % 2 else 1
                for b in indices_of(smask & ~j):
                    key = (j | (1 << b), k)
                    if key in index:
                        mat[index[key]][c] = factor * koszul_sign(j, b)
            diffs[d] = mat
        return SheafComplex(action.n, terms, diffs)

    raise GenerationShapeError(
        "cube nodes mix appearing and hourglass probes in an unsupported way")


def default_region_box(x: SheafComplex, margin: int = 1):
    bounds = x.shift_bounds()
    if bounds is None:
        return None
    lo, hi = bounds
    return (tuple(a - margin for a in lo), tuple(b + margin for b in hi))


def check_acyclic(x: SheafComplex, box=None) -> bool:
    """Stalkwise acyclicity over every region point of the box.

    The box must cover all generator shifts with margin at least 1 so
    every stalk pattern of the generators is sampled.
    """
    bounds = x.shift_bounds()
    if bounds is None:
        return True
    if box is None:
        box = default_region_box(x)
    lo, hi = box
    blo, bhi = bounds
    if any(l > a - 1 for l, a in zip(lo, blo)) or any(h < b + 1 for h, b in zip(hi, bhi)):
        raise ValueError("box must cover generator shifts with margin 1")
    ranges = [range(l, h + 1) for l, h in zip(lo, hi)]
    for base in itertools.product(*ranges):
        for region_mask in range(1 << x.n):
            if not stalk_dims(x, RegionPoint(base, region_mask)).is_zero:
                return False
    return True


@dataclass(frozen=True)
class ExceptionalReport:
    ok: bool
    failures: tuple[str, ...]
    end_tables: tuple[GradedDimTable, ...]
    hom_totals: tuple[tuple[tuple[int, int], GradedDimTable], ...]


def check_exceptional_collection(objects: Sequence[SheafComplex],
                                 m_lattice: MLattice,
                                 cutoff: int) -> ExceptionalReport:
    """Exceptionality of an ordered collection under equivariant Hom:
    every endomorphism table must be exactly one dimension in degree 0
    and every forward Hom must vanish, all at a clean (stabilized)
    cutoff."""
    if not objects:
        raise ValueError("need at least one object")
    failures = []
    ends = []
    homs = []
    one = GradedDimTable.of({0: 1})
    for i, f in enumerate(objects):
        table = equivariant_hom(f, f, m_lattice, cutoff)
        ends.append(table.total)
        if not table.stable:
            failures.append(f"End(F{i}) not stabilized at cutoff {cutoff}")
        elif table.total != one:
            failures.append(f"End(F{i}) = {table.total.as_dict()} != {{0: 1}}")
    for i, j in itertools.combinations(range(len(objects)), 2):
        table = equivariant_hom(objects[i], objects[j], m_lattice, cutoff)
        homs.append(((i, j), table.total))
        if not table.stable:
            failures.append(f"Hom(F{i},F{j}) required zero but not stabilized")
        elif not table.total.is_zero:
            failures.append(f"Hom(F{i},F{j}) = {table.total.as_dict()} != 0")
    return ExceptionalReport(
        ok=not failures,
        failures=tuple(failures),
        end_tables=tuple(ends),
        hom_totals=tuple(homs),
    )
