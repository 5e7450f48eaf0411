"""Central detection invariants of mod-p group cohomology.

Everything here is driven by the restriction of H*(G) to C = C(G), the
maximal central elementary abelian subgroup:

- the restriction image is a polynomial sub Hopf algebra of H*(C); a
  Frobenius-power filtration of H^1(C) reads off its generator degrees,
  the *type* [a_1..a_c], from which e(G) = sum(a_i - 1) and h(G) follow;
- lifting the image generators gives a Duflot subalgebra A over which
  H*(G) is free; Q_A denotes indecosmposables, P_C the coaction
  primitives, and both vanish above e(G) with a one-dimensional top when
  every order-p element is central;
- central essential classes are those restricting to zero on the
  centralizer of every elementary abelian subgroup strictly above C;
  their top Q_A / P_C degrees e'(G), e''(G) drive the detection number
  d0(G) = max over centralizers of e'';
- the locally finite part and the reduced layers of H*(G) are computed
  from the categorical equalizer over elementary abelians above C, with
  inner-automorphism invariance imposed through recorded conjugators.

Degree bounds are honest: every result that could change past the
computed range carries a certification flag.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .fplinalg import (
    FpMatrix,
    FpSubspace,
    LinSolver,
    intersect,
    kernel_basis,
    matmul_mod,
)
from .pgroup import (
    GroupHom,
    PcPresentation,
    Subgroup,
    centralizer,
    elementary_abelian_subgroups,
    is_p_central,
    maximal_subgroups,
    omega1_center,
    p_rank,
    quillen_category_AC,
    subgroup_presentation,
)
from .resolution import (
    BudgetExceededError,
    Cocycle,
    ComoduleMap,
    MinimalResolution,
    cup_product,
    induced_map,
    multiplication_matrix,
)


class Workspace:
    """Shared cache of resolutions and analyzers across related groups.

    Resolutions are keyed by the presentation hash, so isomorphic
    presentations with identical relations (every rank-r elementary
    abelian, say) share one resolution.
    """

    def __init__(self, budget: int = 20000):
        self.budget = budget
        self._res: dict[str, MinimalResolution] = {}
        self._analyzers: dict = {}

    def resolution(self, pres: PcPresentation, N: int) -> MinimalResolution:
        key = pres.hash_key()
        res = self._res.get(key)
        if res is None:
            res = MinimalResolution(pres, budget=self.budget)
            self._res[key] = res
        res.extend_to(N)
        return res

    def analyzer(self, pres: PcPresentation, N: int, label: str | None = None):
        key = (pres.hash_key(), N)
        a = self._analyzers.get(key)
        if a is None:
            a = Analyzer(pres, N, workspace=self, label=label)
            self._analyzers[key] = a
        return a


@dataclass
class FrobeniusFlag:
    """Increasing filtration of H^1(C) whose jumps give the type exponents."""

    subspaces: list[FpSubspace]
    saturated_level: int | None  # level K with C_K full, None if not reached

    @property
    def dims(self) -> list[int]:
        return [s.dim for s in self.subspaces]


@dataclass
class GroupType:
    """Generator degrees [a_1 >= ... >= a_c] of the restriction image."""

    p: int
    entries: tuple[int, ...]
    certified: bool
    flag: FrobeniusFlag | None = None

    @property
    def c(self) -> int:
        return len(self.entries)

    @property
    def e(self) -> int:
        return sum(a - 1 for a in self.entries)

    @property
    def h(self) -> int:
        if not self.entries:
            return 0
        a1 = self.entries[0]
        if a1 == 1:
            return 0
        if a1 == 2:
            return 1
        # a1 = 2 p^k with k >= 1
        return 2 * a1 // (2 * self.p)


def e_of(t: GroupType) -> int:
    return t.e


def h_of(t: GroupType) -> int:
    return t.h


@dataclass
class DuflotData:
    """Lifted polynomial generators of the restriction image."""

    generators: list[tuple[int, Cocycle]]  # (degree, lift in H^deg(G))
    targets: list[tuple[int, np.ndarray]]  # (degree, image in H^deg(C) coords)
    entries: tuple[int, ...]

    def a_dims(self, N: int) -> list[int]:
        """Hilbert function of the free commutative algebra on the lifts."""
        dims = [0] * (N + 1)
        dims[0] = 1
        for a in self.entries:
            # multiply the series by 1/(1 - t^a)
            for k in range(a, N + 1):
                dims[k] += dims[k - a]
        return dims


@dataclass
class GradedDims:
    role: str
    dims: tuple[int, ...]
    N: int
    certified: bool = True

    def top_nonzero(self) -> int:
        top = -1
        for k, d in enumerate(self.dims):
            if d:
                top = k
        return top


@dataclass
class InvariantReport:
    group_id: str
    p: int
    order: int
    rank: int
    center_rank: int
    p_central: bool
    type_entries: tuple[int, ...] | None
    e: int | None
    h: int | None
    d0: int | None
    d1: int | None
    e_prime: int | None
    e_double_prime: int | None
    cess_nonzero: bool | None
    truncation_degree: int
    certified: dict = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        return {
            "group_id": self.group_id,
            "p": self.p,
            "order": self.order,
            "rank": self.rank,
            "center_rank": self.center_rank,
            "p_central": self.p_central,
            "type": list(self.type_entries) if self.type_entries is not None else None,
            "e": self.e,
            "h": self.h,
            "d0": self.d0,
            "d1": self.d1,
            "e_prime": self.e_prime,
            "e_double_prime": self.e_double_prime,
            "cess_nonzero": self.cess_nonzero,
            "truncation_degree": self.truncation_degree,
            "certified": dict(self.certified),
        }


class _TargetView:
    """Minimal target interface for chain-map application (bar comparison)."""

    def __init__(self, pres: PcPresentation):
        self.pres = pres
        self.order = pres.order


def _rank_one_bockstein(res_U: MinimalResolution) -> int:
    """H^2 coordinate of beta(e*) for the dual basis e* of H^1 of a cyclic
    order-p group, pinned by comparison with the bar resolution and the
    integral carry cocycle."""
    from .resolution import _apply_map_to_vec

    U = res_U.pres
    p = U.p
    if U.order != p:
        raise ValueError("rank-one Bockstein needs a cyclic group of order p")
    order = p
    mt = U.mult_table()

    # expanded bar differentials in degrees 1 and 2
    D1 = np.zeros((order, order * order), dtype=np.int64)
    for g in range(order):
        for h in range(order):
            col = g * order + h
            D1[mt[h, g], col] += 1
            D1[h, col] -= 1
    D1 = (D1 % p).astype(np.uint8)
    D2 = np.zeros((order * order, order * order * order), dtype=np.uint8)
    for g in range(order):
        for h in range(order):
            gen = g * order + h
            img = np.zeros(order * order, dtype=np.int64)
            img[h * order + g] += 1          # g.[h]
            img[mt[g, h] * order + 0] -= 1   # [gh]
            img[g * order + 0] += 1          # [g]
            img %= p
            for u in range(order):
                col = gen * order + u
                # u . img : translate the module element by u
                gather = U.left_inv_gather()[u]
                moved = img.reshape(order, order)[:, gather].ravel()
                D2[:, col] = moved.astype(np.uint8)
    s1 = LinSolver(FpMatrix(p, D1, check=False))
    s2 = LinSolver(FpMatrix(p, D2, check=False))

    # comparison chain map from the minimal resolution
    theta0 = np.zeros((1, order), dtype=np.uint8)
    theta0[0, 0] = 1
    view = _TargetView(U)
    phi = np.arange(order, dtype=np.int32)

    coords, vals = res_U.gen_image_sparse(1, 0)
    rhs = _apply_map_to_vec(theta0, coords, vals, order, phi, view, order, p)
    t1 = s1.solve(rhs)
    if t1 is None:
        raise AssertionError("bar comparison failed in degree 1")
    theta1 = t1[None, :]
    coords, vals = res_U.gen_image_sparse(2, 0)
    rhs = _apply_map_to_vec(theta1, coords, vals, order, phi, view, order * order, p)
    t2 = s2.solve(rhs)
    if t2 is None:
        raise AssertionError("bar comparison failed in degree 2")

    # the carry two-cocycle of the canonical character chi(g^s) = s
    lam = 0
    sums1 = theta1.reshape(order, order).sum(axis=1) % p
    for g in range(order):
        s = U.exp_of(g)[0]
        lam = (lam + s * int(sums1[g])) % p
    nu = 0
    sums2 = t2.reshape(order * order, order).sum(axis=1) % p
    for g in range(order):
        for h in range(order):
            s, t = U.exp_of(g)[0], U.exp_of(h)[0]
            carry = 1 if s + t >= p else 0
            nu = (nu + carry * int(sums2[g * order + h])) % p
    if lam == 0 or nu == 0:
        raise AssertionError("degenerate bar comparison")
    return (nu * pow(lam, p - 2, p)) % p


class Analyzer:
    """All invariant computations for one group at one degree bound."""

    def __init__(self, pres: PcPresentation, N: int,
                 workspace: Workspace | None = None, label: str | None = None):
        self.G = pres
        self.N = int(N)
        self.p = pres.p
        self.ws = workspace if workspace is not None else Workspace()
        self.label = label or f"order-{pres.order} group"
        self._cache: dict = {}
        self._heuristic: set[str] = set()  # certificates from the margin rule

    def _memo(self, key, fn):
        if key not in self._cache:
            self._cache[key] = fn()
        return self._cache[key]

    # -- basic data ------------------------------------------------------------

    @property
    def res(self) -> MinimalResolution:
        return self.ws.resolution(self.G, self.N)

    @property
    def C(self) -> Subgroup:
        return self._memo("C", lambda: omega1_center(self.G))

    @property
    def center_rank(self) -> int:
        return self.C.rank

    @property
    def rank(self) -> int:
        return self._memo("rank", lambda: p_rank(self.G))

    @property
    def p_central(self) -> bool:
        return self._memo("p_central", lambda: is_p_central(self.G))

    def _c_pres(self):
        return self._memo("c_pres", lambda: subgroup_presentation(self.G, self.C))

    @property
    def resC(self) -> MinimalResolution:
        presC, _, _ = self._c_pres()
        return self.ws.resolution(presC, self.N)

    # -- restriction image -------------------------------------------------------

    def restriction_to_C(self):
        def make():
            presC, embedC, _ = self._c_pres()
            return induced_map(embedC, self.resC, self.res)
        return self._memo("resmap", make)

    def res_image(self, k: int) -> FpSubspace:
        def make():
            from .fplinalg import image_basis
            M = self.restriction_to_C().matrix(k)
            return image_basis(FpMatrix(self.p, M, check=False))
        return self._memo(("im", k), make)

    def restriction_image_dims(self) -> GradedDims:
        dims = tuple(self.res_image(k).dim for k in range(self.N + 1))
        return GradedDims("im i*", dims, self.N)

    # -- type -----------------------------------------------------------------------

    def _h1_power_matrices(self) -> list[np.ndarray]:
        """Matrices of x -> x^(2^k): H^1(C) -> H^(2^k)(C), while 2^k <= N (p=2)."""
        def make():
            resC = self.resC
            c = resC.rank(1)
            mats = [np.eye(c, dtype=np.uint8)]
            vecs = [Cocycle(1, row) for row in np.eye(c, dtype=np.uint8)]
            k = 0
            while 2 ** (k + 1) <= self.N:
                vecs = [cup_product(resC, v, v) for v in vecs]
                k += 1
                mats.append(np.stack([v.vec for v in vecs]).T if c else
                            np.zeros((resC.rank(2 ** k), 0), np.uint8))
            return mats
        return self._memo("h1pow", make)

    def _bockstein_reps(self) -> list[np.ndarray]:
        """For p odd: vectors z_t in H^2(C) with z_t = beta(e_t) modulo
        products of degree-one classes (enough for all p-th power work)."""
        def make():
            presC, _, _ = self._c_pres()
            resC = self.resC
            c = resC.rank(1)
            rows = []
            rhs_blocks = []
            for U in elementary_abelian_subgroups(presC):
                if U.rank != 1:
                    continue
                presU, embedU, _ = subgroup_presentation(presC, U)
                resU = self.ws.resolution(presU, 2)
                mu = _rank_one_bockstein(resU)
                rmap = induced_map(embedU, resU, resC)
                rows.append(rmap.matrix(2))
                rhs_blocks.append((rmap.matrix(1), mu))
            A = np.vstack(rows)
            solver = LinSolver(FpMatrix(self.p, A, check=False))
            out = []
            for t in range(c):
                e_t = np.zeros(c, dtype=np.uint8)
                e_t[t] = 1
                rhs = np.concatenate([
                    (matmul_mod(R1, e_t[:, None], self.p)[:, 0].astype(np.int64) * mu) % self.p
                    for (R1, mu) in rhs_blocks
                ]).astype(np.uint8)
                z = solver.solve(rhs)
                if z is None:
                    raise AssertionError("Bockstein system inconsistent")
                out.append(z)
            return out
        return self._memo("bock", make)

    def _pth_power(self, res, v: Cocycle) -> Cocycle:
        out = v
        for _ in range(self.p - 1):
            out = cup_product(res, out, v)
        return out

    def frobenius_flag(self) -> FrobeniusFlag:
        return self.group_type().flag

    def group_type(self) -> GroupType:
        return self._memo("type", self._compute_type)

    def _compute_type(self) -> GroupType:
        c = self.center_rank
        if c == 0:
            return GroupType(self.p, (), True, FrobeniusFlag([], 0))
        if self.p == 2:
            return self._type_p2(c)
        return self._type_odd(c)

    def _type_p2(self, c: int) -> GroupType:
        subs = []
        saturated = None
        mats = self._h1_power_matrices()
        for k, M in enumerate(mats):
            im = self.res_image(2 ** k)
            ann = im.annihilator_matrix()
            cond = matmul_mod(ann.arr, M, 2)
            sub = kernel_basis(FpMatrix(2, cond, check=False))
            subs.append(sub)
            if sub.dim == c:
                saturated = k
                break
        flag = FrobeniusFlag(subs, saturated)
        entries: list[int] = []
        prev = 0
        for k, sub in enumerate(subs):
            entries += [2 ** k] * (sub.dim - prev)
            prev = sub.dim
        certified = saturated is not None
        if not certified:
            entries += [2 ** len(subs)] * (c - prev)
        entries.sort(reverse=True)
        return GroupType(2, tuple(entries), certified, flag)

    def _type_odd(self, c: int) -> GroupType:
        p = self.p
        subs = [self.res_image(1)]  # split part: degree-one image
        saturated = 1 if subs[0].dim == c else None
        entries: list[int] = [1] * subs[0].dim
        last_level = 0
        if saturated is None:
            zs = self._bockstein_reps()
            resC = self.resC
            powers = [Cocycle(2, z) for z in zs]
            k = 0
            while 2 * p ** k <= self.N:
                M = np.stack([v.vec for v in powers]).T
                im = self.res_image(2 * p ** k)
                if k == 0:
                    # the representatives are only exact modulo products of
                    # degree-one classes; the true Bockstein image is pure,
                    # so membership may be tested modulo those products
                    im = _subspace_join(im, self._h1_products_span())
                ann = im.annihilator_matrix()
                cond = matmul_mod(ann.arr, M, p)
                sub = kernel_basis(FpMatrix(p, cond, check=False))
                # the split part is contained in every level
                sub = _subspace_join(sub, subs[0])
                entries += [2 * p ** k] * (sub.dim - subs[-1].dim)
                subs.append(sub)
                if sub.dim == c:
                    saturated = k + 1
                    break
                k += 1
                last_level = k
                if 2 * p ** k <= self.N:
                    powers = [self._pth_power(resC, v) for v in powers]
            if saturated is None:
                entries += [2 * p ** last_level] * (c - subs[-1].dim)
        flag = FrobeniusFlag(subs, saturated)
        entries.sort(reverse=True)
        return GroupType(p, tuple(entries), saturated is not None, flag)

    def _h1_products_span(self) -> FpSubspace:
        """Span of all products of two degree-one classes in H^2(C)."""
        def make():
            resC = self.resC
            c = resC.rank(1)
            rows = []
            basis = [Cocycle(1, np.eye(c, dtype=np.uint8)[t]) for t in range(c)]
            for s in range(c):
                for t in range(s, c):
                    rows.append(cup_product(resC, basis[s], basis[t]).vec)
            if rows:
                return FpSubspace.from_spanning(self.p, resC.rank(2), np.array(rows))
            return FpSubspace.zero(self.p, resC.rank(2))
        return self._memo("h1prod", make)

    @property
    def e(self) -> int:
        return self.group_type().e

    @property
    def h(self) -> int:
        return self.group_type().h

    # -- Duflot lifts ------------------------------------------------------------------

    def duflot(self) -> DuflotData:
        return self._memo("duflot", self._compute_duflot)

    def _flag_adapted_basis(self) -> list[tuple[int, np.ndarray]]:
        """(level k, vector in H^1(C)) pairs, new directions per flag level."""
        flag = self.group_type().flag
        chosen: list[tuple[int, np.ndarray]] = []
        span = FpSubspace.zero(self.p, self.center_rank) if self.center_rank else None
        for k, sub in enumerate(flag.subspaces):
            for row in sub.basis.arr:
                if not span.contains(row):
                    chosen.append((k, row))
                    span = _subspace_join(span, FpSubspace.from_spanning(
                        self.p, self.center_rank, row[None, :]))
        return chosen

    def _compute_duflot(self) -> DuflotData:
        t = self.group_type()
        if not t.certified:
            raise BudgetExceededError(self.N, 0, 0)
        gens: list[tuple[int, Cocycle]] = []
        targets: list[tuple[int, np.ndarray]] = []
        resC = self.resC
        if self.p == 2:
            for k, x in self._flag_adapted_basis():
                v = Cocycle(1, x)
                for _ in range(k):
                    v = cup_product(resC, v, v)
                deg = 2 ** k
                gens.append((deg, self._lift_from_image(deg, v.vec)))
                targets.append((deg, v.vec))
        else:
            zs = self._bockstein_reps()
            Z = np.stack(zs).T if zs else np.zeros((self.resC.rank(2), 0), np.uint8)
            for k, x in self._flag_adapted_basis():
                if k == 0:
                    # split entry: lift x itself and a Bockstein partner in im
                    gens.append((1, self._lift_from_image(1, x)))
                    targets.append((1, x))
                    y = self._split_bockstein_target(x)
                    gens.append((2, self._lift_from_image(2, y)))
                    targets.append((2, y))
                elif k == 1:
                    # degree-two generator: needs the representative that
                    # actually lies inside the image, not one mod products
                    y = self._split_bockstein_target(x)
                    gens.append((2, self._lift_from_image(2, y)))
                    targets.append((2, y))
                else:
                    z = Cocycle(2, matmul_mod(Z, x[:, None], self.p)[:, 0])
                    for _ in range(k - 1):
                        z = self._pth_power(resC, z)
                    deg = 2 * self.p ** (k - 1)
                    gens.append((deg, self._lift_from_image(deg, z.vec)))
                    targets.append((deg, z.vec))
        data = DuflotData(gens, targets, self.group_type().entries)
        # the subalgebra on the lifts must match the image dimensions
        im_dims = [self.res_image(k).dim for k in range(self.N + 1)]
        if im_dims != data.a_dims(self.N):
            raise AssertionError("Duflot subalgebra does not match the image")
        return data

    def _split_bockstein_target(self, x: np.ndarray) -> np.ndarray:
        """A Bockstein partner of x that lies inside the degree-2 image."""
        presC, _, _ = self._c_pres()
        resC = self.resC
        rows = []
        rhs_parts = []
        for U in elementary_abelian_subgroups(presC):
            if U.rank != 1:
                continue
            presU, embedU, _ = subgroup_presentation(presC, U)
            resU = self.ws.resolution(presU, 2)
            mu = _rank_one_bockstein(resU)
            rmap = induced_map(embedU, resU, resC)
            rows.append(rmap.matrix(2))
            val = (matmul_mod(rmap.matrix(1), x[:, None], self.p)[:, 0].astype(np.int64) * mu) % self.p
            rhs_parts.append(val.astype(np.uint8))
        im2 = self.res_image(2)
        ann = im2.annihilator_matrix()
        rows.append(ann.arr)
        rhs_parts.append(np.zeros(ann.rows, dtype=np.uint8))
        A = np.vstack(rows)
        rhs = np.concatenate(rhs_parts)
        z = LinSolver(FpMatrix(self.p, A, check=False)).solve(rhs)
        if z is None:
            raise AssertionError("no Bockstein partner inside the image")
        return z

    def _lift_from_image(self, degree: int, target: np.ndarray) -> Cocycle:
        M = self.restriction_to_C().matrix(degree)
        x = LinSolver(FpMatrix(self.p, M, check=False)).solve(target)
        if x is None:
            raise AssertionError(f"degree-{degree} image element has no preimage")
        return Cocycle(degree, x)

    # -- indecomposables and primitives -----------------------------------------------

    def _a_ideal_span(self, k: int, basis_rows_by_degree) -> FpSubspace:
        """Span of xi * M^{k - |xi|} over the Duflot generators."""
        rows = []
        for deg, xi in self.duflot().generators:
            if k - deg < 0:
                continue
            M = multiplication_matrix(self.res, xi, k - deg)
            below = basis_rows_by_degree(k - deg)
            if below is None:
                rows.extend(M.T)
            elif below.shape[0]:
                rows.extend(matmul_mod(M, below.T, self.p).T)
        if rows:
            return FpSubspace.from_spanning(self.p, self.res.rank(k), np.array(rows))
        return FpSubspace.zero(self.p, self.res.rank(k))

    def qa_dims(self) -> GradedDims:
        def make():
            dims = []
            for k in range(self.N + 1):
                span = self._a_ideal_span(k, lambda kk: None)
                self._cache[("qa_span", k)] = span
                dims.append(self.res.rank(k) - span.dim)
            out = GradedDims("Q_A H*", tuple(dims), self.N)
            self._check_freeness(tuple(self.res.betti[: self.N + 1]), out.dims, "H*")
            return out
        return self._memo("qa", make)

    def _check_freeness(self, total_dims, q_dims, what: str):
        a = self.duflot().a_dims(self.N)
        for k in range(self.N + 1):
            conv = sum(a[j] * q_dims[k - j] for j in range(k + 1))
            if conv != total_dims[k]:
                raise AssertionError(
                    f"{what} is not free over the Duflot subalgebra at degree {k}"
                )

    def comodule(self) -> ComoduleMap:
        def make():
            return ComoduleMap(self.res, self.C, self.resC)
        return self._memo("comodule", make)

    def pc_dims(self) -> GradedDims:
        def make():
            dims = tuple(self.comodule().primitive_basis(k).dim
                         for k in range(self.N + 1))
            return GradedDims("P_C H*", dims, self.N)
        return self._memo("pc", make)

    # -- central essential classes ---------------------------------------------------

    def cess_subspaces(self) -> list[FpSubspace] | None:
        """Per-degree kernels of restriction to the strict centralizers,
        or None when there is no subgroup strictly above C (the product
        over the empty set: every class is then central essential)."""
        def make():
            cat = self._memo("cat", lambda: quillen_category_AC(self.G))
            strict = [o for o in cat.objects if o.rep.order > self.C.order]
            if not strict:
                return None
            mats: dict[int, list[np.ndarray]] = {k: [] for k in range(self.N + 1)}
            seen_centralizers = set()
            for obj in strict:
                K = centralizer(self.G, obj.rep)
                if K.elems in seen_centralizers:
                    continue
                seen_centralizers.add(K.elems)
                presK, embedK, _ = subgroup_presentation(self.G, K)
                resK = self.ws.resolution(presK, self.N)
                rmap = induced_map(embedK, resK, self.res)
                for k in range(self.N + 1):
                    mats[k].append(rmap.matrix(k))
            out = []
            for k in range(self.N + 1):
                stacked = np.vstack(mats[k])
                out.append(kernel_basis(FpMatrix(self.p, stacked, check=False)))
            return out
        return self._memo("cess", make)

    def cess_dims(self) -> GradedDims:
        subs = self.cess_subspaces()
        if subs is None:
            dims = tuple(self.res.betti[: self.N + 1])
        else:
            dims = tuple(s.dim for s in subs)
        return GradedDims("Cess", dims, self.N)

    def qa_cess_dims(self) -> GradedDims:
        def make():
            subs = self.cess_subspaces()
            if subs is None:
                return GradedDims("Q_A Cess", self.qa_dims().dims, self.N)
            dims = []
            for k in range(self.N + 1):
                span = self._a_ideal_span(
                    k, lambda kk: subs[kk].basis.arr
                )
                dims.append(subs[k].dim - intersect(subs[k], span).dim
                            if span.dim else subs[k].dim)
            out = GradedDims("Q_A Cess", tuple(dims), self.N)
            self._check_freeness(tuple(s.dim for s in subs), out.dims, "Cess")
            return out
        return self._memo("qacess", make)

    def pc_cess_dims(self) -> GradedDims:
        def make():
            subs = self.cess_subspaces()
            if subs is None:
                return GradedDims("P_C Cess", self.pc_dims().dims, self.N)
            dims = tuple(
                intersect(subs[k], self.comodule().primitive_basis(k)).dim
                for k in range(self.N + 1)
            )
            return GradedDims("P_C Cess", dims, self.N)
        return self._memo("pccess", make)

    # -- e', e'' -------------------------------------------------------------------------

    def e_prime(self) -> tuple[int, bool]:
        def make():
            if self.p_central:
                return self.e, self.group_type().certified
            q = self.qa_cess_dims()
            top = q.top_nonzero()
            if self.rank - self.center_rank == 1:
                # duality certificate: first nonzero degree determines the top
                if top < 0:
                    return -1, self.N >= self.e
                m = next(k for k, d in enumerate(q.dims) if d)
                value = self.e - m
                certified = self.N >= value
                if certified:
                    for k in range(min(self.N, self.e) + 1):
                        mirror = self.e - k
                        if 0 <= mirror <= self.N and q.dims[k] != q.dims[mirror]:
                            raise AssertionError("central essential duality fails")
                return value, certified
            max_a = max(self.group_type().entries, default=1)
            if top < 0:
                return -1, False
            self._heuristic.add("e_prime")
            return top, self.N >= top + max_a
        return self._memo("eprime", make)

    def e_double_prime(self) -> tuple[int, bool]:
        def make():
            if self.p_central:
                return self.e, self.group_type().certified
            pdims = self.pc_cess_dims()
            top = pdims.top_nonzero()
            ep, ep_cert = self.e_prime()
            if top == ep and ep_cert:
                return top, True
            if top < 0:
                return -1, ep == -1 and ep_cert
            max_a = max(self.group_type().entries, default=1)
            self._heuristic.add("e_double_prime")
            return top, self.N >= top + max_a
        return self._memo("edp", make)

    # -- detection numbers -------------------------------------------------------------

    def d0_d1_p_central(self) -> tuple[int, int]:
        if not self.p_central:
            raise ValueError("group is not p-central")
        t = self.group_type()
        return t.e, t.e + t.h

    def qualifying_reps(self) -> list[Subgroup]:
        """Conjugacy representatives V with V = C(C_G(V)), including C."""
        def make():
            cat = self._memo("cat", lambda: quillen_category_AC(self.G))
            out = []
            for obj in cat.objects:
                V = obj.rep
                K = centralizer(self.G, V)
                kelems = set(K.elems)
                socle = [
                    x for x in K.elems
                    if self.G.pth_power(x) == 0
                    and all(self.G.comm(x, y) == 0 for y in K.elems)
                ]
                if sorted(socle) == list(V.elems):
                    out.append(V)
            return out
        return self._memo("qreps", make)

    def d0_general(self) -> tuple[int, bool]:
        def make():
            best = -1
            certified = True
            for V in self.qualifying_reps():
                K = centralizer(self.G, V)
                if K.order == self.G.order:
                    val, cert = self.e_double_prime()
                else:
                    presK, _, _ = subgroup_presentation(self.G, K)
                    sub = self.ws.analyzer(presK, self.N,
                                           label=f"{self.label}:centralizer")
                    val, cert = sub.e_double_prime()
                best = max(best, val)
                certified = certified and cert
            return best, certified
        return self._memo("d0", make)

    def d0(self) -> tuple[int, bool]:
        if self.p_central:
            return self.e, self.group_type().certified
        return self.d0_general()

    # -- top primitive class -----------------------------------------------------------

    def top_primitive_class(self) -> Cocycle:
        if not self.p_central:
            raise ValueError("defined for p-central groups")
        e = self.e
        if e <= 0:
            raise ValueError("needs e(G) > 0")
        if e > self.N:
            raise IndexError("degree bound too small for the top class")
        P = self.comodule().primitive_basis(e)
        if P.dim != 1:
            raise AssertionError(
                f"top primitive space has dimension {P.dim}, expected 1"
            )
        return Cocycle(e, P.basis.arr[0])

    def is_essential(self, z: Cocycle) -> bool:
        for M in maximal_subgroups(self.G):
            presM, embedM, _ = subgroup_presentation(self.G, M)
            resM = self.ws.resolution(presM, z.degree)
            rmap = induced_map(embedM, resM, self.res)
            if rmap.apply(z).vec.any():
                return False
        return True

    # -- locally finite part and reduced layers ------------------------------------------

    def _object_data(self, obj):
        key = ("objdata", obj.rep.elems)

        def make():
            G = self.G
            V = obj.rep
            K = centralizer(G, V)
            presK, embedK, to_idxK = subgroup_presentation(G, K)
            resK = self.ws.resolution(presK, self.N)
            V_in_K = Subgroup(presK, [to_idxK[x] for x in V.elems],
                              [to_idxK[x] for x in V.elems if x != 0])
            presV, _, _ = subgroup_presentation(presK, V_in_K)
            resV = self.ws.resolution(presV, self.N)
            com = ComoduleMap(resK, V_in_K, resV)
            return {
                "V": V, "K": K, "presK": presK, "embedK": embedK,
                "to_idxK": to_idxK, "resK": resK, "com": com,
            }
        return self._memo(key, make)

    def _conj_hom(self, S_from: Subgroup, S_to: Subgroup, g: int) -> GroupHom:
        """Hom pres(S_from) -> pres(S_to), y -> g y g^-1 in the parent."""
        G = self.G
        presF, embedF, _ = subgroup_presentation(G, S_from)
        presT, _, to_idxT = subgroup_presentation(G, S_to)
        ginv = G.inv(g)
        images = []
        for t in range(presF.n):
            y = embedF.apply(presF.gen_idx(t))
            w = G.mult(G.mult(g, y), ginv)
            images.append(to_idxT[w])
        return GroupHom(presF, presT, images)

    def _action_matrix_on(self, S: Subgroup, res_S, w: int, degree: int) -> np.ndarray:
        """Matrix on H^degree(pres S) of conjugation by w (w normalizes S)."""
        hom = self._conj_hom(S, S, w)
        return induced_map(hom, res_S, res_S).matrix(degree)

    def lf_dims(self) -> GradedDims:
        def make():
            dims = tuple(self._equalizer_dim(k, None) for k in range(self.N + 1))
            return GradedDims("LF", dims, self.N)
        return self._memo("lf", make)

    def bar_rd_dims(self, d: int) -> GradedDims:
        if d > self.N:
            raise IndexError("layer degree beyond bound")
        dims = tuple(self._equalizer_dim(j, d) for j in range(self.N - d + 1))
        return GradedDims(f"Rbar_{d}", dims, self.N - d)

    def _equalizer_dim(self, k: int, layer: int | None) -> int:
        """Dimension of the categorical equalizer in degree k.

        layer=None: component at V is P_V H^k(C_G(V))   (locally finite part)
        layer=d:    component at V is H^k(V) (x) P_V H^d(C_G(V))  (layer d)
        """
        cat = self._memo("cat", lambda: quillen_category_AC(self.G))
        G = self.G
        p = self.p
        # unknown blocks per object
        blocks = []
        offsets = [0]
        for obj in cat.objects:
            data = self._object_data(obj)
            prim = data["com"].primitive_basis(k if layer is None else layer)
            if layer is None:
                emb = prim.basis.arr.T  # (b_k(K), dim)
            else:
                presV, _, _ = subgroup_presentation(G, obj.rep)
                resV = self.ws.resolution(presV, self.N)
                bV = resV.rank(k)
                emb = np.kron(np.eye(bV, dtype=np.uint8), prim.basis.arr.T)
            blocks.append(emb)
            offsets.append(offsets[-1] + emb.shape[1])
        total = offsets[-1]
        if total == 0:
            return 0
        rows: list[np.ndarray] = []

        def add_rows(cond_blocks: dict[int, np.ndarray], height: int):
            row = np.zeros((height, total), dtype=np.uint8)
            for pos, mat in cond_blocks.items():
                row[:, offsets[pos]:offsets[pos + 1]] = mat
            rows.append(row)

        # stabilizer invariance at each representative
        for pos, obj in enumerate(cat.objects):
            data = self._object_data(obj)
            emb = blocks[pos]
            if emb.shape[1] == 0:
                continue
            for w in cat.weyl_reps(obj):
                if w == 0:
                    continue
                AK = self._action_matrix_on(
                    data["K"], data["resK"], w, k if layer is None else layer)
                if layer is None:
                    act = AK
                else:
                    presV, _, _ = subgroup_presentation(G, obj.rep)
                    resV = self.ws.resolution(presV, self.N)
                    AV = self._action_matrix_on(obj.rep, resV, w, k)
                    act = np.kron(AV, AK) % p
                diff = (matmul_mod(act, emb, p).astype(np.int64) - emb) % p
                add_rows({pos: diff.astype(np.uint8)}, emb.shape[0])

        # compatibility along inclusions V1' < V2 (V2 a representative)
        for pos2, obj2 in enumerate(cat.objects):
            V2 = obj2.rep
            data2 = self._object_data(obj2)
            v2set = set(V2.elems)
            for elems, (pos1, g) in cat.member_index.items():
                if elems == V2.elems or not set(elems) <= v2set:
                    continue
                V1p = Subgroup(G, elems)
                obj1 = cat.objects[pos1]
                data1 = self._object_data(obj1)
                # psi: K2 -> K(rep1), y -> g y g^-1, inducing H(K1) -> H(K2)
                psi = self._conj_hom(data2["K"], data1["K"], g)
                Mpsi = induced_map(psi, data2["resK"], data1["resK"]).matrix(
                    k if layer is None else layer)
                if layer is None:
                    lhs = matmul_mod(Mpsi, blocks[pos1], p)
                    rhs = blocks[pos2]
                    height = lhs.shape[0]
                    add_rows({pos1: lhs,
                              pos2: (-rhs.astype(np.int64) % p).astype(np.uint8)},
                             height)
                else:
                    presV1, _, _ = subgroup_presentation(G, V1p)
                    resV1 = self.ws.resolution(presV1, self.N)
                    rho = self._conj_hom(V1p, obj1.rep, g)
                    Mrho = induced_map(rho, resV1, self.ws.resolution(
                        subgroup_presentation(G, obj1.rep)[0], self.N)).matrix(k)
                    inc = self._conj_hom(V1p, V2, 0)
                    Minc = induced_map(inc, resV1, self.ws.resolution(
                        subgroup_presentation(G, V2)[0], self.N)).matrix(k)
                    lhs = matmul_mod(np.kron(Mrho, Mpsi) % p, blocks[pos1], p)
                    rhs = matmul_mod(np.kron(Minc, np.eye(
                        data2["resK"].rank(layer), dtype=np.uint8)) % p,
                        blocks[pos2], p)
                    add_rows({pos1: lhs,
                              pos2: (-rhs.astype(np.int64) % p).astype(np.uint8)},
                             lhs.shape[0])

        if not rows:
            return total
        stacked = np.vstack(rows)
        return kernel_basis(FpMatrix(p, stacked, check=False)).dim

    # -- the full report ---------------------------------------------------------------------

    def report(self, group_id: str | None = None) -> InvariantReport:
        gid = group_id or self.label
        t = None
        certified: dict = {}
        e_val = h_val = d0_val = d1_val = ep = edp = None
        cess_nz = None
        try:
            t = self.group_type()
            certified["type"] = t.certified
            e_val, h_val = t.e, t.h
            if self.p_central:
                d0_val, d1_val = t.e, t.e + t.h
                certified["d0"] = certified["d1"] = t.certified
                ep = edp = t.e
                certified["e_prime"] = certified["e_double_prime"] = t.certified
                cess_nz = True
            else:
                ep, epc = self.e_prime()
                edp, edpc = self.e_double_prime()
                certified["e_prime"], certified["e_double_prime"] = epc, edpc
                for name in sorted(self._heuristic):
                    certified[f"{name}_heuristic"] = True
                d0_val, d0c = self.d0_general()
                certified["d0"] = d0c
                d1_val = None
                cess_nz = ep >= 0
        except BudgetExceededError:
            certified["budget_exceeded"] = True
        return InvariantReport(
            group_id=gid,
            p=self.p,
            order=self.G.order,
            rank=self.rank,
            center_rank=self.center_rank,
            p_central=self.p_central,
            type_entries=t.entries if t else None,
            e=e_val,
            h=h_val,
            d0=d0_val,
            d1=d1_val,
            e_prime=ep,
            e_double_prime=edp,
            cess_nonzero=cess_nz,
            truncation_degree=self.N,
            certified=certified,
        )


def _subspace_join(a: FpSubspace, b: FpSubspace) -> FpSubspace:
    from .fplinalg import subspace_sum
    return subspace_sum(a, b)


# -- spec-level convenience wrappers ------------------------------------------------


def restriction_image(G: PcPresentation, N: int, ws: Workspace | None = None) -> GradedDims:
    return (ws or Workspace()).analyzer(G, N).restriction_image_dims()


def type_of(G: PcPresentation, N: int, ws: Workspace | None = None) -> GroupType:
    return (ws or Workspace()).analyzer(G, N).group_type()


def duflot_lift(G: PcPresentation, N: int, ws: Workspace | None = None) -> DuflotData:
    return (ws or Workspace()).analyzer(G, N).duflot()


def qa_dims(G: PcPresentation, N: int, ws: Workspace | None = None) -> GradedDims:
    return (ws or Workspace()).analyzer(G, N).qa_dims()


def pc_primitive_dims(G: PcPresentation, N: int, ws: Workspace | None = None) -> GradedDims:
    return (ws or Workspace()).analyzer(G, N).pc_dims()


def cess_dims(G: PcPresentation, N: int, ws: Workspace | None = None) -> GradedDims:
    return (ws or Workspace()).analyzer(G, N).cess_dims()


def e_prime(G: PcPresentation, N: int, ws: Workspace | None = None) -> tuple[int, bool]:
    return (ws or Workspace()).analyzer(G, N).e_prime()


def e_double_prime(G: PcPresentation, N: int, ws: Workspace | None = None) -> tuple[int, bool]:
    return (ws or Workspace()).analyzer(G, N).e_double_prime()


def d0_d1_p_central(G: PcPresentation, N: int, ws: Workspace | None = None) -> tuple[int, int]:
    return (ws or Workspace()).analyzer(G, N).d0_d1_p_central()


def d0_d1_via_sylow_transfer(sylow_type: GroupType) -> tuple[int, int]:
    """Detection numbers of any finite group whose p-Sylow subgroup is
    p-central with the given certified type: they transfer unchanged."""
    if not sylow_type.certified:
        raise ValueError("transfer needs a certified Sylow type")
    return sylow_type.e, sylow_type.e + sylow_type.h


def d0_general(G: PcPresentation, N: int, ws: Workspace | None = None) -> tuple[int, bool]:
    return (ws or Workspace()).analyzer(G, N).d0_general()


def lf_dims(G: PcPresentation, N: int, ws: Workspace | None = None) -> GradedDims:
    return (ws or Workspace()).analyzer(G, N).lf_dims()


def bar_rd_dims(G: PcPresentation, d: int, N: int, ws: Workspace | None = None) -> GradedDims:
    return (ws or Workspace()).analyzer(G, N).bar_rd_dims(d)


def report(G: PcPresentation, N: int, group_id: str | None = None,
           ws: Workspace | None = None) -> InvariantReport:
    return (ws or Workspace()).analyzer(G, N).report(group_id)
