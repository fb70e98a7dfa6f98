"""Exhaustive generation of valid decorated trees and the tree classes.

The classes are:

* ``res_below(m)``: root r, degree < 2m (resonant corrections);
* ``circ_exact(m)``: root circ, degree = 2m (bracket terms of one order);
* ``n_exact(m)``: root n, degree = 2m (generator terms);
* ``circ_range(m, ell)``: root circ, 2m < degree <= 2*ell, containing no
  internal n-node of degree >= 2m (higher-order range terms).

Generation is a degree-indexed dynamic program with early pruning on the
validity rules; ``graft_comb`` implements the left-comb construction used
as an independent cross-check.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

from .trees import (
    AssumptionMode,
    DEFAULT_MODE,
    Decoration,
    Tree,
    TreeError,
    canonical_key,
    degree,
    iter_nodes,
    leaf,
    node,
    render,
    symmetry_factor,
    validate_tree,
)

DEFAULT_CAP = 10**6


class EnumerationCapError(RuntimeError):
    """Raised when generation would exceed the configured tree cap."""


class ClassKind(enum.Enum):
    RES_BELOW = "res-below"
    CIRC_EXACT = "circ"
    N_EXACT = "n"
    CIRC_RANGE = "circ-range"


@dataclass(frozen=True)
class TreeClassQuery:
    kind: ClassKind
    m: int
    ell: Optional[int] = None

    def __post_init__(self) -> None:
        if self.m < 1:
            raise ValueError("m must be positive")
        if self.kind is ClassKind.CIRC_RANGE:
            if self.ell is None or not self.m < self.ell:
                raise ValueError("circ-range requires m < ell")
        elif self.ell is not None:
            raise ValueError("ell only applies to circ-range")

    def describe(self) -> str:
        if self.kind is ClassKind.CIRC_RANGE:
            return f"{self.kind.value}(m={self.m}, ell={self.ell})"
        return f"{self.kind.value}(m={self.m})"


@dataclass(frozen=True)
class TreeSet:
    trees: tuple[Tree, ...]
    query: str
    mode: AssumptionMode = DEFAULT_MODE

    def __len__(self) -> int:
        return len(self.trees)

    def __iter__(self):
        return iter(self.trees)

    def to_json(self) -> dict:
        return {
            "query": self.query,
            "trees": [render(t) for t in self.trees],
            "degrees": [degree(t) for t in self.trees],
            "symmetry_factors": [
                symmetry_factor(t, 0, self.mode) for t in self.trees
            ],
        }


def _subtree_pools(
    max_degree: int, mode: AssumptionMode, cap: int
) -> dict[int, list[Tree]]:
    """Trees valid as subtrees (k-leaf included), grouped by degree.

    Every validity rule is local to a node given subtree degrees, so the
    pools compose.  Trees rooted at a circ node with a k left child are
    valid only under a parent; callers filter them for standalone use.
    """
    pools: dict[int, list[Tree]] = {}
    count = 0

    def add(d: int, t: Tree) -> None:
        nonlocal count
        count += 1
        if count > cap:
            raise EnumerationCapError(
                f"tree cap {cap} exceeded at degree {d}"
            )
        pools.setdefault(d, []).append(t)

    if max_degree >= 2:
        add(2, leaf(Decoration.K))
    if max_degree >= 4:
        for dec in (Decoration.CIRC, Decoration.N, Decoration.R):
            add(4, leaf(dec))
    for d in range(4, max_degree + 1, 2):
        # right child first: it never has degree 2, so only lower pools
        # feed it; the k-left case (d1 = 2) can then reuse pools[d].
        for root in (Decoration.N, Decoration.R, Decoration.CIRC):
            for d1 in sorted(pools):
                d2 = d + 2 - d1
                if d2 < 4 or d2 > d or (d1 == 2 and root is not Decoration.CIRC):
                    continue
                if d1 == 2 and d2 == d and root is Decoration.CIRC:
                    rights = list(pools.get(d, ()))
                else:
                    rights = pools.get(d2, ())
                for t1 in pools[d1]:
                    if not _left_ok(root, t1, d1, d2, mode):
                        continue
                    for t2 in rights:
                        if t2.decoration is Decoration.N:
                            add(d, node(root, t1, t2))
    return pools


def _left_ok(
    root: Decoration, t1: Tree, d1: int, d2: int, mode: AssumptionMode
) -> bool:
    if t1.decoration is Decoration.K:
        return root is Decoration.CIRC
    if t1.decoration is Decoration.R:
        return d1 < d2
    if t1.decoration is Decoration.CIRC:
        if d1 < d2:
            return False
        if not t1.is_leaf:
            d3 = degree(t1.right)
            return d3 <= d2 if mode is AssumptionMode.NESTED_LE else d3 >= d2
        return True
    return False


def _standalone(t: Tree) -> bool:
    # a circ root with a k left child needs a parent; everything else in
    # the pools is valid on its own, including the bare k-leaf.
    return t.is_leaf or t.left.decoration is not Decoration.K


def enumerate_valid(
    max_degree: int,
    mode: AssumptionMode = DEFAULT_MODE,
    cap: int = DEFAULT_CAP,
) -> TreeSet:
    """All standalone-valid trees with degree <= max_degree."""
    if max_degree < 2:
        raise ValueError("max_degree must be >= 2")
    pools = _subtree_pools(max_degree, mode, cap)
    trees = [t for pool in pools.values() for t in pool if _standalone(t)]
    trees.sort(key=canonical_key)
    return TreeSet(tuple(trees), f"valid(max_degree={max_degree})", mode)


_ROOT_OF_KIND = {
    ClassKind.RES_BELOW: Decoration.R,
    ClassKind.CIRC_EXACT: Decoration.CIRC,
    ClassKind.N_EXACT: Decoration.N,
    ClassKind.CIRC_RANGE: Decoration.CIRC,
}


def tree_class(
    query: TreeClassQuery,
    mode: AssumptionMode = DEFAULT_MODE,
    cap: int = DEFAULT_CAP,
) -> TreeSet:
    if query.kind is ClassKind.RES_BELOW:
        bound = 2 * query.m - 2
    elif query.kind is ClassKind.CIRC_RANGE:
        bound = 2 * query.ell
    else:
        bound = 2 * query.m
    root = _ROOT_OF_KIND[query.kind]
    picked = []
    for t in enumerate_valid(bound, mode, cap):
        if t.decoration is not root:
            continue
        d = degree(t)
        if query.kind is ClassKind.RES_BELOW:
            keep = d < 2 * query.m
        elif query.kind is ClassKind.CIRC_RANGE:
            keep = 2 * query.m < d <= 2 * query.ell and not _has_big_n_node(
                t, 2 * query.m
            )
        else:
            keep = d == 2 * query.m
        if keep:
            picked.append(t)
    return TreeSet(tuple(picked), query.describe(), mode)


def _has_big_n_node(t: Tree, threshold: int) -> bool:
    return any(
        not v.is_leaf and v.decoration is Decoration.N and degree(v) >= threshold
        for v in iter_nodes(t)
    )


def res_below(m: int) -> TreeClassQuery:
    return TreeClassQuery(ClassKind.RES_BELOW, m)


def circ_exact(m: int) -> TreeClassQuery:
    return TreeClassQuery(ClassKind.CIRC_EXACT, m)


def n_exact(m: int) -> TreeClassQuery:
    return TreeClassQuery(ClassKind.N_EXACT, m)


def circ_range(m: int, ell: int) -> TreeClassQuery:
    return TreeClassQuery(ClassKind.CIRC_RANGE, m, ell)


def graft_comb(t1: Tree, tail: list[Tree], root_dec: Decoration) -> Tree:
    """Left comb ((t1, tail[0]), tail[1]), ...; inner nodes circ, the
    outermost node root_dec.  Encodes {...{X, F}, ..., F} with optional
    projection at the top."""
    if not tail:
        raise TreeError("tail must be nonempty")
    if t1.decoration not in (Decoration.R, Decoration.CIRC, Decoration.K):
        raise TreeError("comb base must be rooted r, circ, or k")
    if root_dec not in (Decoration.CIRC, Decoration.N, Decoration.R):
        raise TreeError("comb root must be an internal decoration")
    for t in tail:
        if t.decoration is not Decoration.N:
            raise TreeError("comb tail elements must be rooted n")
    out = t1
    for i, t in enumerate(tail):
        dec = root_dec if i == len(tail) - 1 else Decoration.CIRC
        out = node(dec, out, t)
    return out
