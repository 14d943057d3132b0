"""Jacobian syzygies of a reduced plane curve, computed degree by degree.

For f homogeneous of degree d with partials fx, fy, fz, the module of
Jacobian syzygies is

    AR(f) = {(a,b,c) in S^3 : a*fx + b*fy + c*fz = 0},

a rank-two graded S-module of projective dimension <= 1.  This module
computes, exactly over the coefficient field:

* graded dimensions of AR(f), of the Koszul submodule KR(f), and of the
  Milnor algebra M(f) = S/(fx,fy,fz);
* the minimal degree r = mdr(f) of a nonzero syzygy, the degrees of a
  minimal generating set (the exponents), and the degrees of the relations
  among those generators;
* the global Tjurina number via two independent routes (stable Milnor
  dimension, and the constant term of the resolution's alternating binomial
  sum) which must agree;
* the coincidence and stability thresholds of the Milnor algebra;
* the degree of the zero-dimensional scheme cut out by the Bourbaki ideal
  obtained by splitting off a minimal-degree syzygy.

Over the rationals every reported number is certified: ranks are pinned
from both sides (an invertible pivot minor modulo a word-size prime bounds
the rank below; exact, verified kernel vectors bound the nullity below),
so a bad internal prime can delay the computation but never corrupt it.
Over a prime field the analysis is exact arithmetic mod p; whether its
conclusions transfer to characteristic zero is the caller's concern (see
the dual-prime driver in :mod:`tjurina.classify`).

Generator sweeps run to the proven ceiling max(2d-4, d-1) on generator
degrees; relation sweeps run to the ceiling implied by the resolution's
degree bookkeeping.  No stabilisation heuristics are used anywhere: the
stable value of dim M(f)_k is certified by the resolution, and the full
Hilbert-series identity is re-checked for every degree up to the ceiling.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import cached_property
from math import comb, gcd, lcm

import numpy as np

from .errors import (
    ConsistencyError,
    FreeCurveError,
    InternalError,
    NotDivisibleError,
    StructureError,
)
from .exactlin import (
    DenseMatrix,
    certified_rational_kernel,
    echelon_mod_p,
    kernel_mod_p,
    rref_mod_p,
)
from .fields import FieldSpec, prime_pool
from .ring import (
    CurveInput,
    HomogPoly,
    Monomial,
    basis_index,
    basis_size,
    exact_divide,
    format_poly,
    monomial_basis,
    partial,
    primitive_integer_poly,
)


def _comb2(n: int) -> int:
    """C(n,2) with the combinatorial convention: 0 whenever n < 2."""
    return n * (n - 1) // 2 if n >= 2 else 0


def smooth_milnor_dim(d: int, k: int) -> int:
    """dim M(f_s)_k for a smooth curve of degree d: the degree-k coefficient
    of ((1 - t^(d-1)) / (1 - t))^3."""
    if k < 0:
        return 0
    e = d - 1
    return sum((-1) ** i * comb(3, i) * _comb2(k - i * e + 2) for i in range(4))


@dataclass(frozen=True)
class JacobianData:
    """A curve polynomial together with its three partial derivatives."""

    f: HomogPoly
    fx: HomogPoly
    fy: HomogPoly
    fz: HomogPoly

    @classmethod
    def from_poly(cls, f: HomogPoly) -> "JacobianData":
        f = primitive_integer_poly(f)
        return cls(f, partial(f, "x"), partial(f, "y"), partial(f, "z"))

    @property
    def degree(self) -> int:
        return self.f.degree

    @property
    def field(self) -> FieldSpec:
        return self.f.field

    def analyzer(self) -> "CurveAnalyzer":
        an = getattr(self, "_an", None)
        if an is None:
            an = CurveAnalyzer(self)
            object.__setattr__(self, "_an", an)
        return an


@dataclass(frozen=True)
class SyzygyTriple:
    """(a,b,c) with a*fx + b*fy + c*fz = 0, all of the same degree."""

    degree: int
    a: HomogPoly
    b: HomogPoly
    c: HomogPoly

    def components(self):
        return (self.a, self.b, self.c)

    def __str__(self):
        return f"({format_poly(self.a)}, {format_poly(self.b)}, {format_poly(self.c)})"


@dataclass(frozen=True)
class ResolutionSummary:
    """Numerical summary of the minimal resolution of AR(f)."""

    d: int
    r: int
    exponents: tuple[int, ...]
    relation_degrees: tuple[int, ...]  # e'_i, degrees inside the generator frame
    epsilons: tuple[int, ...]
    tau: int
    ct: int | None  # None: no deviation from the smooth dimensions was found
    st: int
    is_free: bool
    mdr_prime: int | None  # None: no non-Koszul syzygy up to the ceiling

    @property
    def m(self) -> int:
        return len(self.exponents)


@dataclass(frozen=True)
class GradedDims:
    """Per-degree dimension table for k = 0..kmax (Milnor columns continue
    to milnor_kmax, after which dim M(f)_k equals tau by certification)."""

    kmax: int
    milnor_kmax: int
    ar: tuple[int, ...]
    kr: tuple[int, ...]
    milnor: tuple[int, ...]
    smooth: tuple[int, ...]


@dataclass(frozen=True)
class BourbakiData:
    """Degree data of the Bourbaki ideal built from the first minimal-degree
    syzygy: images of the remaining generators, and deg Z."""

    rho1: str
    generator_degrees: tuple[int, ...]
    deg_z: int
    expected_deg_z: int  # (d-1)^2 - r(d-r-1) - tau
    maximal_bound: int  # C(2r-d+2, 2), the ceiling attained exactly at maximality


# ---------------------------------------------------------------------------
# The analyzer
# ---------------------------------------------------------------------------


class CurveAnalyzer:
    """Stateful exact analysis of one curve over one field.

    All matrix sweeps are cached; the object is cheap to query repeatedly.
    """

    def __init__(self, jd: JacobianData, kmax: int | None = None):
        self.jd = jd
        self.field = jd.field
        self.d = jd.degree
        self.kmax = kmax if kmax is not None else max(2 * self.d - 4, self.d - 1, 0)
        self.notes: list[str] = []
        self._partial_terms = [list(p.terms()) for p in (jd.fx, jd.fy, jd.fz)]
        if self.field.is_rationals:
            self._pool = prime_pool()
            self._p = next(self._pool)
        else:
            self._p = self.field.prime
        self._ar_dims: dict[int, int] = {}
        self._milnor: dict[int, int] = {}
        self._kr_dims: dict[int, int] = {}
        self._gens: list[SyzygyTriple] | None = None
        self._gen_vectors: list[tuple[int, list]] = []  # (degree, flat coeff vector)
        self._rel: tuple[tuple[int, ...], tuple[int, ...]] | None = None
        self._mdr: int | None = None

    # -- matrix builders -----------------------------------------------------

    def _rotate_prime(self, why: str):
        if not self.field.is_rationals:
            raise ConsistencyError(f"inconsistency over {self.field}: {why}")
        self.notes.append(f"internal prime {self._p} rotated: {why}")
        self._p = next(self._pool)

    def _jac_np(self, k: int, p: int) -> np.ndarray:
        """Matrix of (a,b,c) -> a*fx + b*fy + c*fz on S_k^3, reduced mod p."""
        rows = basis_size(k + self.d - 1)
        block = basis_size(k)
        a = np.zeros((rows, 3 * block), dtype=np.int64)
        idx = basis_index(k + self.d - 1)
        for comp, terms in enumerate(self._partial_terms):
            terms_p = [(m, int(c) % p) for m, c in terms]
            off = comp * block
            for j, h in enumerate(monomial_basis(k)):
                col = off + j
                for m, c in terms_p:
                    a[idx[Monomial(m.a + h.a, m.b + h.b, m.c + h.c)], col] = c
        return a

    def _jac_rows(self, k: int) -> list[list[int]]:
        rows = basis_size(k + self.d - 1)
        block = basis_size(k)
        out = [[0] * (3 * block) for _ in range(rows)]
        idx = basis_index(k + self.d - 1)
        for comp, terms in enumerate(self._partial_terms):
            off = comp * block
            for j, h in enumerate(monomial_basis(k)):
                col = off + j
                for m, c in terms:
                    out[idx[Monomial(m.a + h.a, m.b + h.b, m.c + h.c)]][col] = int(c)
        return out

    def _ar_vec_terms(self, vec_deg: int, flat: list):
        """Nonzero (component, monomial, coeff) entries of a flat syzygy vector."""
        block = basis_size(vec_deg)
        basis = monomial_basis(vec_deg)
        out = []
        for i, c in enumerate(flat):
            if c:
                out.append((i // block, basis[i % block], c))
        return out

    def _phi_np(self, k: int, gens: list[tuple[int, list]], p: int) -> np.ndarray:
        """Matrix of (h_j) -> sum h_j * rho_j into S_k^3, reduced mod p.
        Generators of degree > k contribute no columns."""
        rows_block = basis_size(k)
        ncols = sum(basis_size(k - dg) for dg, _ in gens)
        a = np.zeros((3 * rows_block, ncols), dtype=np.int64)
        idx = basis_index(k)
        col = 0
        for dg, flat in gens:
            if dg > k:
                continue
            terms = [(comp, m, int(c) % p) for comp, m, c in self._ar_vec_terms(dg, flat)]
            for h in monomial_basis(k - dg):
                for comp, m, c in terms:
                    a[comp * rows_block + idx[Monomial(m.a + h.a, m.b + h.b, m.c + h.c)], col] = c
                col += 1
        return a

    def _phi_rows(self, k: int, gens: list[tuple[int, list]]) -> list[list[int]]:
        rows_block = basis_size(k)
        ncols = sum(basis_size(k - dg) for dg, _ in gens)
        out = [[0] * ncols for _ in range(3 * rows_block)]
        idx = basis_index(k)
        col = 0
        for dg, flat in gens:
            if dg > k:
                continue
            terms = self._ar_vec_terms(dg, flat)
            for h in monomial_basis(k - dg):
                for comp, m, c in terms:
                    out[comp * rows_block + idx[Monomial(m.a + h.a, m.b + h.b, m.c + h.c)]][col] = int(c)
                col += 1
        return out

    # -- certified kernel / rank helpers --------------------------------------

    def _certified_jac_kernel(self, k: int):
        """Exact kernel of the degree-k Jacobian matrix (rational runs)."""
        rows = self._jac_rows(k)
        _, basis = certified_rational_kernel(rows, 3 * basis_size(k))
        return [self._primitive(v) for v in basis]

    @staticmethod
    def _primitive(vec) -> list[int]:
        den = 1
        for x in vec:
            if isinstance(x, Fraction):
                den = lcm(den, x.denominator)
        ints = [int(x * den) for x in vec]
        g = 0
        for v in ints:
            g = gcd(g, v)
        if g == 0:
            return ints
        lead = next(v for v in ints if v)
        if lead < 0:
            g = -g
        return [v // g for v in ints]

    # -- mdr and the generator sweep ------------------------------------------

    def mdr(self) -> int:
        """Least k with AR(f)_k != 0; 0 means a pencil of lines."""
        if self._mdr is not None:
            return self._mdr
        for k in range(0, self.d):
            dim = self._ar_dim_raw(k, sweeping=True, gens=[])
            if dim > 0:
                self._mdr = k
                self._ar_dims[k] = dim
                return k
            self._ar_dims[k] = 0
        raise InternalError("no syzygy found up to degree d-1 (Koszul missing)")

    def _ar_dim_raw(self, k: int, sweeping: bool, gens: list[tuple[int, list]]) -> int:
        """Certified dim AR(f)_k.  ``gens``: generator vectors of degree < k
        (during the sweep) or all of them (after it)."""
        ncols = 3 * basis_size(k)
        if self.field.is_rationals:
            for _ in range(8):
                p = self._p
                nullp = ncols - echelon_mod_p(self._jac_np(k, p), p)[0]
                if nullp == 0:
                    return 0  # nullity over Q <= nullity mod p
                if gens:
                    rank_phi = echelon_mod_p(self._phi_np(k, gens, p), p)[0]
                    if rank_phi == nullp:
                        # squeeze: dim AR_k <= nullp = rank_phi <= dim span
                        # of verified syzygies <= dim AR_k
                        return nullp
                # possible new generators (or a bad prime): settle exactly
                kernel = self._certified_jac_kernel(k)
                return len(kernel)
            raise InternalError("prime rotation did not settle a dimension")
        p = self._p
        return ncols - echelon_mod_p(self._jac_np(k, p), p)[0]

    def ar_dim(self, k: int) -> int:
        if k < 0:
            return 0
        if k not in self._ar_dims:
            if k <= self.kmax:
                self._run_generator_sweep()
            if k not in self._ar_dims:
                gens = [(t.degree, flat) for (t, flat) in self._gen_pairs()] if k > self.kmax else []
                self._ar_dims[k] = self._ar_dim_raw(k, sweeping=False, gens=gens)
        return self._ar_dims[k]

    def _gen_pairs(self):
        self._run_generator_sweep()
        return list(zip(self._gens, [v for _, v in self._gen_vectors]))

    def ar_basis(self, k: int) -> list[SyzygyTriple]:
        """Canonical basis of AR(f)_k (leading coordinate 1)."""
        if k < 0:
            return []
        if self.field.is_rationals:
            rows = self._jac_rows(k)
            _, basis = certified_rational_kernel(rows, 3 * basis_size(k))
        else:
            p = self._p
            _, np_basis = kernel_mod_p(self._jac_np(k, p), p)
            basis = [tuple(int(x) for x in v) for v in np_basis]
        out = []
        for v in basis:
            lead = next(x for x in v if not self.field.is_zero(x))
            inv = self.field.inv(lead)
            out.append(self._triple_from_flat(k, [self.field.mul(inv, x) for x in v]))
        return out

    def _triple_from_flat(self, k: int, flat) -> SyzygyTriple:
        block = basis_size(k)
        polys = []
        for comp in range(3):
            coeffs = tuple(
                self.field.from_fraction(Fraction(x)) if self.field.is_rationals else self.field.from_int(int(x))
                for x in flat[comp * block : (comp + 1) * block]
            )
            polys.append(HomogPoly(k, coeffs, self.field))
        return SyzygyTriple(k, *polys)

    def _run_generator_sweep(self):
        if self._gens is not None:
            return
        r = self.mdr()
        if r == 0:
            self._gens = []
            return
        gen_vectors: list[tuple[int, list]] = []
        triples: list[SyzygyTriple] = []
        for k in range(r, self.kmax + 1):
            below = [gv for gv in gen_vectors if gv[0] < k]
            dim_ar, new_flats = self._degree_step(k, below)
            self._ar_dims[k] = dim_ar
            for flat in new_flats:
                gen_vectors.append((k, flat))
                t = self._triple_from_flat(k, flat)
                self._check_syzygy(t)
                triples.append(t)
        for k in range(0, r):
            self._ar_dims.setdefault(k, 0)
        if not gen_vectors:
            raise InternalError("mdr > 0 but no generators found")
        self._gen_vectors = gen_vectors
        self._gens = triples

    def _degree_step(self, k: int, below: list[tuple[int, list]]):
        """Certified (dim AR_k, new minimal generator vectors at degree k)."""
        ncols = 3 * basis_size(k)
        if self.field.is_rationals:
            for _ in range(8):
                p = self._p
                nullp = ncols - echelon_mod_p(self._jac_np(k, p), p)[0]
                if nullp == 0:
                    return 0, []
                if below:
                    rank_phi_p = echelon_mod_p(self._phi_np(k, below, p), p)[0]
                    if rank_phi_p == nullp:
                        return nullp, []
                # exact kernel, exact span rank
                kernel = self._certified_jac_kernel(k)
                dim_ar = len(kernel)
                if below:
                    phi_rows = self._phi_rows(k, below)
                    phi_cols = len(phi_rows[0]) if phi_rows else 0
                    piv, _ = certified_rational_kernel(phi_rows, phi_cols)
                    span = len(piv)
                else:
                    span = 0
                g_k = dim_ar - span
                if g_k < 0:
                    raise InternalError(f"negative generator count at degree {k}")
                if g_k == 0:
                    return dim_ar, []
                picked = self._select_new(k, below, kernel, g_k, p)
                if picked is None:
                    self._rotate_prime(f"generator selection failed at degree {k}")
                    continue
                return dim_ar, picked
            raise InternalError("prime rotation did not settle the generator step")
        # prime field: everything is direct arithmetic mod p
        p = self._p
        nullp = ncols - echelon_mod_p(self._jac_np(k, p), p)[0]
        if nullp == 0:
            return 0, []
        span = echelon_mod_p(self._phi_np(k, below, p), p)[0] if below else 0
        g_k = nullp - span
        if g_k < 0:
            raise InternalError(f"negative generator count at degree {k}")
        if g_k == 0:
            return nullp, []
        _, kb = kernel_mod_p(self._jac_np(k, p), p)
        kernel = [[int(x) for x in v] for v in kb]
        picked = self._select_new(k, below, kernel, g_k, p)
        if picked is None:
            raise InternalError(f"generator selection failed at degree {k}")
        return nullp, picked

    def _select_new(self, k, below, kernel, g_k, p):
        """Pick g_k kernel vectors extending the span of the known multiples,
        greedily in canonical order (first new pivot wins)."""
        nrows = 3 * basis_size(k)
        if below:
            phi = self._phi_np(k, below, p)
            ncols_phi = phi.shape[1]
        else:
            phi = np.zeros((nrows, 0), dtype=np.int64)
            ncols_phi = 0
        kmat = np.array([[int(x) % p for x in v] for v in kernel], dtype=np.int64).T
        full = np.hstack([phi, kmat])
        _, pivots = rref_mod_p(full, p)
        picked_idx = [c - ncols_phi for c in pivots if c >= ncols_phi]
        if len(picked_idx) != g_k:
            return None
        if self.field.is_rationals:
            return [self._primitive(kernel[i]) for i in picked_idx]
        return [list(kernel[i]) for i in picked_idx]

    def _check_syzygy(self, t: SyzygyTriple):
        s = t.a * self.jd.fx + t.b * self.jd.fy + t.c * self.jd.fz
        if not s.is_zero():
            raise InternalError(f"claimed syzygy fails: {t}")

    # -- public structure accessors -------------------------------------------

    def minimal_generators(self) -> list[SyzygyTriple]:
        self._run_generator_sweep()
        if self.mdr() == 0:
            raise StructureError("pencil of lines: generator structure not analysed")
        return list(self._gens)

    def minimal_exponents(self) -> tuple[int, tuple[int, ...]]:
        gens = self.minimal_generators()
        degs = tuple(sorted(t.degree for t in gens))
        return len(degs), degs

    def is_free(self) -> bool:
        return self.minimal_exponents()[0] == 2

    # -- relations -------------------------------------------------------------

    def relation_degrees(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        """(e'_1..e'_{m-2}, eps_1..eps_{m-2}) for the free module of relations."""
        if self._rel is not None:
            return self._rel
        m, degs = self.minimal_exponents()
        if m == 2:
            self._rel = ((), ())
            return self._rel
        d = self.d
        sum_eps = degs[0] + degs[1] - d + 1
        if sum_eps < m - 2:
            raise StructureError(
                f"degree bookkeeping broken: sum of epsilons {sum_eps} < m-2 = {m - 2}"
            )
        t_max = degs[-1] + sum_eps - (m - 3)
        gens = [(dg, flat) for dg, flat in self._gen_vectors]
        rel_degrees: list[int] = []
        prev_kernel: list[list] = []
        prev_blocks: list[int] = []
        for t in range(degs[0] + 1, t_max + 1):
            kernel_t, blocks_t = self._phi_kernel(t, gens)
            span = self._relation_span_dim(t, gens, prev_kernel, prev_blocks, blocks_t)
            new = len(kernel_t) - span
            if new < 0:
                raise StructureError(f"relation span exceeds kernel at degree {t}")
            rel_degrees.extend([t] * new)
            prev_kernel, prev_blocks = kernel_t, blocks_t
        if len(rel_degrees) != m - 2:
            raise StructureError(
                f"relation module must be free of rank m-2 = {m - 2}, found "
                f"{len(rel_degrees)} minimal relations up to degree {t_max}"
            )
        eps = []
        for i, e in enumerate(rel_degrees):
            eps_i = e - degs[i + 2]
            if eps_i < 1:
                raise StructureError(
                    f"relation degree {e} pairs with exponent {degs[i + 2]}: eps < 1"
                )
            eps.append(eps_i)
        if sum(eps) != sum_eps:
            raise StructureError(
                f"sum of epsilons {sum(eps)} contradicts d1+d2-d+1 = {sum_eps}"
            )
        self._rel = (tuple(rel_degrees), tuple(eps))
        return self._rel

    def _phi_kernel(self, t: int, gens):
        """Exact kernel of Phi_t (relations of degree t) plus block sizes."""
        blocks = [basis_size(t - dg) for dg, _ in gens]
        ncols = sum(blocks)
        if ncols == 0:
            return [], blocks
        if self.field.is_rationals:
            rows = self._phi_rows(t, gens)
            _, basis = certified_rational_kernel(rows, ncols)
            return [self._primitive(v) for v in basis], blocks
        p = self._p
        _, kb = kernel_mod_p(self._phi_np(t, gens, p), p)
        return [[int(x) for x in v] for v in kb], blocks

    def _relation_span_dim(self, t, gens, prev_kernel, prev_blocks, blocks_t) -> int:
        """dim of S_1 * K_{t-1} inside the degree-t slice of + S(-d_j)."""
        if not prev_kernel:
            return 0
        nrows = sum(blocks_t)
        cols = []
        offs_t = [0]
        for b in blocks_t[:-1]:
            offs_t.append(offs_t[-1] + b)
        for w in prev_kernel:
            for var in range(3):
                col = [0] * nrows
                pos = 0
                for bi, (dg, _) in enumerate(gens):
                    size_prev = prev_blocks[bi]
                    if size_prev == 0:
                        continue
                    base_prev = monomial_basis(t - 1 - dg)
                    idx_t = basis_index(t - dg)
                    off_t = offs_t[bi]
                    for i in range(size_prev):
                        c = w[pos + i]
                        if c:
                            mm = list(base_prev[i])
                            mm[var] += 1
                            col[off_t + idx_t[Monomial(*mm)]] = c
                    pos += size_prev
                cols.append(col)
        if self.field.is_rationals:
            _, rk = _int_rank(cols, nrows)
            return rk
        a = np.array([[int(x) % self._p for x in row] for row in _transpose(cols, nrows)], dtype=np.int64)
        return echelon_mod_p(a, self._p)[0]

    # -- Milnor algebra ----------------------------------------------------------

    def milnor_dim(self, k: int) -> int:
        """dim M(f)_k = dim S_k - dim (J_f)_k."""
        if k < 0:
            return 0
        if k not in self._milnor:
            j = k - self.d + 1
            if j < 0:
                rank_j = 0
            else:
                rank_j = 3 * basis_size(j) - self.ar_dim(j)
            self._milnor[k] = basis_size(k) - rank_j
        return self._milnor[k]

    def resolution_padding_degree(self) -> int:
        """Least K such that for all k >= K every binomial in the resolution's
        dimension formula is polynomial, hence dim M(f)_k is constant."""
        d = self.d
        _, degs = self.minimal_exponents()
        bounds = [0, d - 3] + [d + dj - 3 for dj in degs]
        e_primes, _ = self.relation_degrees()
        bounds += [ep + d - 1 - 2 for ep in e_primes]
        return max(bounds)

    def tjurina(self) -> int:
        """Global Tjurina number, certified by two independent routes."""
        tau_b, lead_ok = self._tau_from_resolution()
        if not lead_ok:
            raise ConsistencyError("resolution dimension formula is not eventually constant")
        k0 = self.resolution_padding_degree()
        tau_a = self.milnor_dim(k0)
        tau_a2 = self.milnor_dim(k0 + 1)
        if tau_a != tau_b or tau_a2 != tau_b:
            raise ConsistencyError(
                f"stable Milnor dimension {tau_a},{tau_a2} != resolution constant {tau_b}"
            )
        return tau_b

    def _tau_from_resolution(self) -> tuple[int, bool]:
        """Constant value of the alternating binomial sum, evaluated as a
        polynomial in k; also reports whether the quadratic and linear parts
        cancel (they must)."""
        d = self.d
        _, degs = self.minimal_exponents()
        e_primes, _ = self.relation_degrees()
        # term (shift s, sign w): w * C(k + s, 2) as a polynomial
        terms = [(2, 1), (3 - d, -3)]
        terms += [(3 - d - dj, 1) for dj in degs]
        terms += [(-(ep + d - 1) + 2, -1) for ep in e_primes]
        quad = sum(w for _, w in terms)
        lin = sum(w * (2 * s - 1) for s, w in terms)
        const = sum(w * s * (s - 1) for s, w in terms)
        if quad != 0 or lin != 0 or const % 2 != 0:
            return 0, False
        return const // 2, True

    # -- Koszul submodule ----------------------------------------------------------

    def koszul_dim(self, k: int) -> int:
        """dim KR(f)_k: span of the monomial multiples of the three Koszul
        syzygies (fy,-fx,0), (fz,0,-fx), (0,fz,-fy)."""
        if k < self.d - 1:
            return 0
        if k in self._kr_dims:
            return self._kr_dims[k]
        jd = self.jd
        zero = HomogPoly.zero(self.d - 1, self.field)
        koszul = [
            (jd.fy, -jd.fx, zero),
            (jd.fz, zero, -jd.fx),
            (zero, jd.fz, -jd.fy),
        ]
        flats = []
        for trip in koszul:
            flat = []
            for pol in trip:
                flat.extend(int(c) if self.field.is_rationals else int(c) for c in pol.coeffs)
            flats.append((self.d - 1, flat))
        if self.field.is_rationals:
            rows = self._phi_rows(k, flats)
            ncols = 3 * basis_size(k - self.d + 1)
            piv, _ = certified_rational_kernel(rows, ncols)
            dim = len(piv)
        else:
            p = self._p
            dim = echelon_mod_p(self._phi_np(k, flats, p), p)[0]
        self._kr_dims[k] = dim
        return dim

    def mdr_prime(self) -> int | None:
        """Least k with a syzygy outside KR(f); None if none up to the ceiling."""
        r = self.mdr()
        if r == 0:
            return None
        for k in range(r, self.kmax + 1):
            if self.ar_dim(k) > self.koszul_dim(k):
                return k
        return None

    # -- thresholds -------------------------------------------------------------

    def thresholds(self) -> tuple[int | None, int]:
        """(ct, st).  ct is None when the Milnor dimensions never deviate from
        the smooth ones below the certification ceiling (smooth curves)."""
        tau = self.tjurina()
        k_poly = self.resolution_padding_degree()
        # stability threshold: dims are certified equal to tau for k >= k_poly
        st = k_poly
        k = k_poly - 1
        while k >= 0 and self.milnor_dim(k) == tau:
            st = k
            k -= 1
        # coincidence threshold: first deviation from the smooth dimensions
        scan_top = max(k_poly, 3 * self.d - 5)
        ct: int | None = None
        for k in range(0, scan_top + 1):
            mk = self.milnor_dim(k) if k <= k_poly else tau
            if mk != smooth_milnor_dim(self.d, k):
                ct = k - 1
                break
        mp = self.mdr_prime()
        if mp is not None:
            expected = self.d - 2 + mp
            if ct != expected:
                raise ConsistencyError(
                    f"coincidence threshold scan gives {ct}, but d-2+mdr' = {expected}"
                )
        elif ct is not None:
            raise ConsistencyError(
                "Milnor dimensions deviate from the smooth ones, yet every syzygy "
                "up to the ceiling is Koszul"
            )
        return ct, st

    # -- Bourbaki ideal -----------------------------------------------------------

    def bourbaki(self) -> BourbakiData:
        """Split off the first minimal-degree syzygy and measure the degree of
        the resulting zero-dimensional scheme."""
        m, degs = self.minimal_exponents()
        if m == 2:
            raise FreeCurveError("the Bourbaki scheme is only defined for non-free curves")
        gens = self.minimal_generators()
        rho1 = gens[0]
        if rho1.degree != self.mdr():
            raise InternalError("first generator does not have minimal degree")
        r = rho1.degree
        d = self.d
        f = self.jd.f
        ideal_gens: list[HomogPoly] = []
        for rho in gens[1:]:
            delta = _bourbaki_determinant(rho1, rho, self.field)
            try:
                g = exact_divide(delta, f)
            except NotDivisibleError as exc:
                raise ConsistencyError(
                    f"determinant of ({rho1}), ({rho}) is not divisible by f"
                ) from exc
            ideal_gens.append(g)
        gen_degrees = tuple(g.degree for g in ideal_gens)
        tau = self.tjurina()
        expected = (d - 1) ** 2 - r * (d - r - 1) - tau
        deg_z = self._ideal_stable_codim(ideal_gens)
        if deg_z != expected:
            raise ConsistencyError(
                f"Bourbaki scheme degree {deg_z} != (d-1)^2 - r(d-r-1) - tau = {expected}"
            )
        return BourbakiData(
            rho1=str(rho1),
            generator_degrees=gen_degrees,
            deg_z=deg_z,
            expected_deg_z=expected,
            maximal_bound=_comb2(2 * r - d + 2),
        )

    def _ideal_stable_codim(self, ideal_gens: list[HomogPoly]) -> int:
        """Stable value of dim S_k - dim I_k, requiring three consecutive equal
        values below the 3d cap."""
        kmin = min(g.degree for g in ideal_gens)
        flats = []
        for g in ideal_gens:
            flat = [int(c) for c in g.coeffs]
            flats.append((g.degree, flat))
        history: list[int] = []
        for k in range(kmin, 3 * self.d + 1):
            dim_i = self._ideal_dim(k, flats)
            history.append(basis_size(k) - dim_i)
            if len(history) >= 3 and history[-1] == history[-2] == history[-3]:
                return history[-1]
        raise ConsistencyError(
            f"ideal codimension did not stabilise below degree {3 * self.d}: {history}"
        )

    def _ideal_dim(self, k: int, flats) -> int:
        """dim of the degree-k slice of the ideal spanned by the given forms."""
        active = [(dg, flat) for dg, flat in flats if dg <= k]
        if not active:
            return 0
        cols = []
        nrows = basis_size(k)
        idx = basis_index(k)
        for dg, flat in active:
            terms = [(m, c) for m, c in zip(monomial_basis(dg), flat) if c]
            for h in monomial_basis(k - dg):
                col = [0] * nrows
                for m, c in terms:
                    col[idx[Monomial(m.a + h.a, m.b + h.b, m.c + h.c)]] = c
                cols.append(col)
        if self.field.is_rationals:
            return _int_rank(cols, nrows)[1]
        a = np.array(
            [[int(x) % self._p for x in row] for row in _transpose(cols, nrows)],
            dtype=np.int64,
        )
        return echelon_mod_p(a, self._p)[0]

    # -- aggregate checks -----------------------------------------------------------

    def hilbert_identity_holds(self) -> bool:
        """dim AR_k == sum C(k-d_j+2,2) - sum C(k-e'_i+2,2) for all k <= kmax."""
        _, degs = self.minimal_exponents()
        e_primes, _ = self.relation_degrees()
        for k in range(0, self.kmax + 1):
            expect = sum(_comb2(k - dj + 2) for dj in degs) - sum(
                _comb2(k - ep + 2) for ep in e_primes
            )
            if self.ar_dim(k) != expect:
                return False
        return True

    def euler_identity_holds(self) -> bool:
        jd = self.jd
        if self.field.prime and self.d % self.field.prime == 0:
            return True  # identity degenerates; vacuous for p | d
        x, y, z = (HomogPoly.variable(v, self.field) for v in "xyz")
        lhs = x * jd.fx + y * jd.fy + z * jd.fz
        return lhs == jd.f.scale(self.d)

    def syzygy_certificates_hold(self) -> bool:
        for t in self.minimal_generators():
            s = t.a * self.jd.fx + t.b * self.jd.fy + t.c * self.jd.fz
            if not s.is_zero():
                return False
        return True

    def resolution_summary(self) -> ResolutionSummary:
        m, degs = self.minimal_exponents()
        e_primes, eps = self.relation_degrees()
        tau = self.tjurina()
        ct, st = self.thresholds()
        return ResolutionSummary(
            d=self.d,
            r=self.mdr(),
            exponents=degs,
            relation_degrees=e_primes,
            epsilons=eps,
            tau=tau,
            ct=ct,
            st=st,
            is_free=(m == 2),
            mdr_prime=self.mdr_prime(),
        )

    def graded_dims(self) -> GradedDims:
        k_top = self.kmax
        milnor_top = max(self.resolution_padding_degree(), k_top)
        ar = tuple(self.ar_dim(k) for k in range(k_top + 1))
        kr = tuple(self.koszul_dim(k) for k in range(k_top + 1))
        milnor = tuple(self.milnor_dim(k) for k in range(milnor_top + 1))
        smooth = tuple(smooth_milnor_dim(self.d, k) for k in range(milnor_top + 1))
        return GradedDims(k_top, milnor_top, ar, kr, milnor, smooth)


def _transpose(cols: list[list], nrows: int) -> list[list]:
    return [[col[i] for col in cols] for i in range(nrows)]


def _int_rank(cols: list[list], nrows: int) -> tuple[list[int], int]:
    """Exact rank of an integer column family (certified kernel route)."""
    rows = _transpose(cols, nrows)
    piv, _ = certified_rational_kernel(rows, len(cols))
    return piv, len(piv)


def _bourbaki_determinant(rho1: SyzygyTriple, rho: SyzygyTriple, field) -> HomogPoly:
    """det of rows (x,y,z), rho1, rho -- expanded along the first row."""
    x, y, z = (HomogPoly.variable(v, field) for v in "xyz")
    a1, b1, c1 = rho1.components()
    a2, b2, c2 = rho.components()
    return (
        x * (b1 * c2 - c1 * b2)
        - y * (a1 * c2 - c1 * a2)
        + z * (a1 * b2 - b1 * a2)
    )


# ---------------------------------------------------------------------------
# Spec-level convenience wrappers
# ---------------------------------------------------------------------------


def jacobian_matrix(jd: JacobianData, k: int) -> DenseMatrix:
    """Matrix of (a,b,c) -> a*fx+b*fy+c*fz from S_k^3 to S_{k+d-1} over the
    curve's field, rows/columns in canonical monomial order."""
    an = jd.analyzer()
    if jd.field.is_rationals:
        rows = an._jac_rows(k)
        return DenseMatrix.from_rows(
            [[Fraction(x) for x in row] for row in rows], field=jd.field
        )
    a = an._jac_np(k, jd.field.prime)
    return DenseMatrix.from_rows([[int(x) for x in row] for row in a], field=jd.field)


def ar_dim(jd: JacobianData, k: int) -> int:
    return jd.analyzer().ar_dim(k)


def ar_basis(jd: JacobianData, k: int) -> list[SyzygyTriple]:
    return jd.analyzer().ar_basis(k)


def mdr(jd: JacobianData) -> int:
    return jd.analyzer().mdr()


def minimal_exponents(jd: JacobianData) -> tuple[int, tuple[int, ...]]:
    return jd.analyzer().minimal_exponents()


def relation_degrees(jd: JacobianData) -> tuple[tuple[int, ...], tuple[int, ...]]:
    return jd.analyzer().relation_degrees()


def milnor_dim(jd: JacobianData, k: int) -> int:
    return jd.analyzer().milnor_dim(k)


def tjurina(jd: JacobianData) -> int:
    return jd.analyzer().tjurina()


def koszul_dim(jd: JacobianData, k: int) -> int:
    return jd.analyzer().koszul_dim(k)


def mdr_prime(jd: JacobianData) -> int | None:
    return jd.analyzer().mdr_prime()


def thresholds(jd: JacobianData) -> tuple[int | None, int]:
    return jd.analyzer().thresholds()


def bourbaki_degree(jd: JacobianData) -> tuple[tuple[int, ...], int]:
    data = jd.analyzer().bourbaki()
    return data.generator_degrees, data.deg_z
