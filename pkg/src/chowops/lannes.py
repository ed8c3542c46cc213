"""Dimensions of the T-functor and the comparison map into products of
centralizer rings.

Two computation routes, deliberately independent of each other:

* presented or finite modules: degree-k T-dimensions are Hom dimensions
  into (rank-r elementary abelian ring) (x) (degree-k Brown-Gitler dual),
  by exact kernel computations;
* catalog groups: the structural product over conjugacy classes of
  homomorphisms, with the comparison map materialized degreewise so its
  injectivity can be certified through a cutoff.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import fp_linalg as fl
from . import groups as gp
from .chow import (AbelianRingData, RingMap, abelian_ring,
                   elem_abelian_ring, poly_add, ring_module)
from .modules import (FPModule, FiniteModule, brown_gitler, compile_presentation,
                      fp_dim, hom_space, suspension_presentation, tensor_finite)

__all__ = [
    "tv_target",
    "tv_dim",
    "tv_table",
    "TvStructural",
    "tv_structural",
    "ell_check",
    "tensor_convolution_check",
]


def tv_target(r: int, k: int, p: int, max_degree: int) -> FiniteModule:
    """CH of (Z/p)^r tensored with the degree-k Brown-Gitler dual,
    materialized through max_degree."""
    ch = ring_module(elem_abelian_ring(r, p), max_degree)
    bg = brown_gitler(k, max_degree, p)
    return tensor_finite(ch, bg)


def tv_dim(m, r: int, k: int) -> int:
    """dim of the degree-k part of T applied to m, for V of rank r.

    Rank 0 returns m's own dimension.  Presented modules go through the
    generator/relation Hom computation; complete finite modules through
    the degreewise commuting-family computation.  Both are exact.
    """
    if r == 0:
        if isinstance(m, FPModule):
            return fp_dim(m, k)
        return m.dim(k)
    if isinstance(m, FPModule):
        degrees = [d for _, d in m.generators]
        degrees.append(m.max_relation_degree)
        horizon = max(degrees, default=0)
        target = tv_target(r, k, m.p, horizon)
        return hom_space(m, target).dim
    if isinstance(m, FiniteModule):
        if not m.is_complete:
            raise ValueError("finite-route T dimensions need a complete module")
        horizon = m.p * max(m.max_degree, 1)
        target = tv_target(r, k, m.p, horizon)
        return hom_space(m, target).dim
    raise TypeError(f"unsupported module {type(m).__name__}")


def tv_table(m, r: int, kmax: int) -> dict[int, int]:
    """Degree k -> dim (T m)^k for k = 0..kmax."""
    return {k: tv_dim(m, r, k) for k in range(kmax + 1)}


@dataclass
class TvStructural:
    """T of a group's ring as the product over classes of homomorphisms
    from (Z/p)^r: one centralizer ring per class, with the comparison-map
    components attached when the source ring is itself catalog."""

    group: gp.FiniteGroup
    rank: int
    p: int
    components: list  # (HomClass, ChowRing of the centralizer)
    comp_maps: list | None  # RingMap per component, or None

    def dim(self, k: int) -> int:
        return sum(ring.dim(k) for _, ring in self.components)

    def dims(self, kmax: int) -> dict[int, int]:
        return {k: self.dim(k) for k in range(kmax + 1)}


def _component_map(source: AbelianRingData, cls: gp.HomClass,
                   target, r: int) -> RingMap:
    """The map CH_G -> CH_C (x) CH_V induced by (v, h) -> rho(v) h, for
    abelian G (so C = G and restriction along C -> G is the identity).

    The tensor target is realized as the polynomial ring on the k
    centralizer classes followed by the r rank classes; the class dual to
    a character chi goes to chi (x) 1 + 1 (x) (chi o rho).
    """
    p = source.ring.p
    k = source.ring.k
    tensor = elem_abelian_ring(k + r, p,
                               names=[n for n, _ in target.generators]
                               + [f"v{j + 1}" for j in range(r)])
    tensor.name = f"{target.name} (x) CH((Z/{p})^{r})"
    images = []
    for i in range(k):
        e = [0] * (k + r)
        e[i] = 1
        img = {tuple(e): 1}
        lam = {}
        for j, x in enumerate(cls.representative):
            t = source.char_exponent_mod_p(i, x)
            if t:
                ev = [0] * (k + r)
                ev[k + j] = 1
                lam = poly_add(lam, {tuple(ev): t}, p)
        images.append(poly_add(img, lam, p))
    return RingMap(source.ring, tensor, images,
                   name=f"component of class {cls.representative}")


def tv_structural(G: gp.FiniteGroup, r: int, p: int,
                  centralizer_rings=None) -> TvStructural:
    """T of the group ring as a product over Rep((Z/p)^r, G).

    Every conjugacy class of homomorphisms contributes the ring of the
    centralizer of its image: abelian centralizers come from the catalog;
    nonabelian ones must be supplied in `centralizer_rings`, a dict keyed
    by class representative tuple (ingested rings are accepted as-is --
    they were validated for internal consistency on ingestion, nothing
    more).  A class with no available ring is reported by name.
    """
    classes = gp.rep_classes(r, G, p)
    provided = centralizer_rings or {}
    components = []
    for cls in classes:
        if cls.representative in provided:
            ring = provided[cls.representative]
            if ring.p != p:
                raise ValueError(
                    f"ring supplied for class {cls.representative} has "
                    f"prime {ring.p}, expected {p}")
            components.append((cls, ring))
            continue
        cent = gp.centralizer(G, cls)
        if not cent.is_abelian:
            raise ValueError(
                f"no ring available for the centralizer of class "
                f"{cls.representative} (order {len(cent)}, nonabelian); "
                "supply one via centralizer_rings")
        components.append((cls, abelian_ring(cent, p).ring))
    comp_maps = None
    if G.is_abelian and not provided:
        source = abelian_ring(G, p)
        comp_maps = [_component_map(source, cls, ring, r)
                     for cls, ring in components]
    return TvStructural(group=G, rank=r, p=p, components=components,
                        comp_maps=comp_maps)


def ell_check(G: gp.FiniteGroup, r: int, D: int, p: int):
    """Degreewise certification report for the comparison map of an
    abelian group.

    "injective" certifies the materialized map has full rank on the
    source; "surjective" certifies the adjoint in the dimension-counting
    sense: the structural product dimension agrees with the independent
    group-theoretic count |Hom((Z/p)^r, G)| * dim CH^d_G (conjugation is
    trivial here, and every centralizer is G itself).  Verified through D
    only, never a global certificate.
    """
    if not G.is_abelian:
        raise ValueError("the comparison-map check needs an abelian group")
    tv = tv_structural(G, r, p)
    source = abelian_ring(G, p).ring
    hom_count = len(G.p_torsion(p)) ** r
    report = []
    for d in range(D + 1):
        blocks = [m.matrix(d) for m in tv.comp_maps]
        stacked = np.vstack([b for b in blocks if b.shape[1]]) \
            if source.dim(d) else fl.zeros(0, 0)
        rk = fl.rank(stacked, p) if stacked.size else 0
        dim_source = source.dim(d)
        tv_dim_structural = tv.dim(d)
        expected = hom_count * dim_source
        report.append({
            "degree": d,
            "dim_source": dim_source,
            "rank": rk,
            "injective": rk == dim_source,
            "tv_dim": tv_dim_structural,
            "components": len(tv.components),
            "dimension_match": tv_dim_structural == expected,
            "surjective": rk == dim_source and tv_dim_structural == expected,
        })
    return report


def _compile_bounded(m: FPModule) -> FiniteModule:
    """Complete finite model of a presentation with a declared support
    bound (see FPModule.support_bound)."""
    if m.support_bound is None:
        raise ValueError(
            f"{m!r} carries no support bound; the tensor route needs "
            "bounded factors or a one-dimensional one")
    compiled = compile_presentation(m, m.support_bound)
    return FiniteModule(m.p, compiled.dims, compiled.mats,
                        truncated_above=None, labels=compiled.labels,
                        validate=False)


def _point_profile(m: FPModule):
    """(degree, ) if the module is one-dimensional concentrated in a single
    degree, else None."""
    if m.support_bound is None:
        return None
    compiled = compile_presentation(m, m.support_bound)
    support = compiled.support
    if len(support) == 1 and compiled.dim(support[0]) == 1:
        return support[0]
    return None


def tensor_convolution_check(m: FPModule, n: FPModule, r: int, D: int,
                             verbose=False):
    """Check deg-by-deg that T of the tensor product has the dimensions of
    the convolution of the two T-dimension tables.

    The left side is computed without ever invoking the product rule:
    bounded factors tensor into one complete finite module whose T
    dimensions come from the Hom route; a one-dimensional factor is a
    degree shift handled by an explicit suspension presentation.
    """
    if m.p != n.p:
        raise ValueError("primes differ")
    lhs = {}
    shift_n = _point_profile(n)
    shift_m = _point_profile(m)
    if m.support_bound is not None and n.support_bound is not None:
        prod = tensor_finite(_compile_bounded(m), _compile_bounded(n))
        for k in range(D + 1):
            lhs[k] = tv_dim(prod, r, k)
    elif shift_n is not None:
        s = suspension_presentation(m, shift_n)
        for k in range(D + 1):
            lhs[k] = tv_dim(s, r, k)
    elif shift_m is not None:
        s = suspension_presentation(n, shift_m)
        for k in range(D + 1):
            lhs[k] = tv_dim(s, r, k)
    else:
        raise ValueError(
            "tensor route needs bounded factors or a one-dimensional one")
    mt = tv_table(m, r, D)
    nt = tv_table(n, r, D)
    rhs = {k: sum(mt[i] * nt[k - i] for i in range(k + 1)) for k in range(D + 1)}
    ok = lhs == rhs
    if verbose:
        return ok, {"tensor": lhs, "convolution": rhs}
    return ok
