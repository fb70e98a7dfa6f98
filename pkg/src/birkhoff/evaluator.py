"""Interpretation of decorated trees as Hamiltonian kernels.

The map ``pi`` reads a tree as an iterated Poisson bracket:

* leaves: k -> kinetic kernel h0; circ -> quartic kernel h1; r -> the
  resonant part of h1; n -> the phase-filtered h1 scaled by
  GENERATOR_SCALE (the generator building block);
* internal nodes: circ -> bracket of the children; r -> resonant part of
  the bracket; n -> GENERATOR_SCALE times the filtered bracket.

On top of pi sit the generator ledgers F_i (sum over n-rooted trees of
degree 2(i+1), weights 1/S), the truncated normal form (kinetic term plus
sums over the res_below / circ_exact / circ_range classes at index m + 2),
and the cancellation check {h0, F_i} + non-resonant circ_exact block = 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .enumeration import (
    TreeSet,
    circ_exact,
    circ_range,
    n_exact,
    res_below,
    tree_class,
)
from .hamiltonian import (
    GENERATOR_SCALE,
    Kernel,
    ModeLattice,
    ResonanceConfig,
    apply_phase_filter,
    h0,
    h1,
    poisson_bracket,
    split_resonant,
)
from .trees import (
    AssumptionMode,
    DEFAULT_MODE,
    Decoration,
    Tree,
    TreeError,
    leaf,
    render,
    symmetry_factor,
    validate_tree,
)

# the normal form after m transforms draws on tree classes at index
# m + CLASS_INDEX_OFFSET; pinned by the worked low-order expansions.
CLASS_INDEX_OFFSET = 2


@dataclass
class EvalConfig:
    lattice: ModeLattice
    resonance: ResonanceConfig
    cutoff: int
    mode: AssumptionMode = DEFAULT_MODE
    _cache: dict[str, Kernel] = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        if self.cutoff < 4 or self.cutoff % 2:
            raise ValueError("cutoff must be an even integer >= 4")

    def h0(self) -> Kernel:
        return self._memo("=h0", lambda: h0(self.lattice, self.cutoff))

    def h1(self) -> Kernel:
        return self._memo("=h1", lambda: h1(self.lattice, self.cutoff))

    def _memo(self, key: str, build) -> Kernel:
        if key not in self._cache:
            self._cache[key] = build()
        return self._cache[key]


def pi(tree: Tree, cfg: EvalConfig) -> Kernel:
    """Evaluate a valid tree to a kernel, truncating at cfg.cutoff.

    Trees of degree above the cutoff evaluate to (partially) truncated
    kernels; since the tree degree bounds every monomial degree of the
    result, a tree wholly above the cutoff gives the zero kernel.
    """
    report = validate_tree(tree, cfg.mode)
    if not report.valid:
        raise TreeError(f"invalid tree {render(tree)}: {report.violations}")
    return _pi(tree, cfg)


def _pi(tree: Tree, cfg: EvalConfig) -> Kernel:
    key = render(tree)
    if key in cfg._cache:
        return cfg._cache[key]
    dec = tree.decoration
    if tree.is_leaf:
        if dec is Decoration.K:
            out = cfg.h0()
        elif dec is Decoration.CIRC:
            out = cfg.h1()
        elif dec is Decoration.R:
            out = split_resonant(cfg.h1(), cfg.resonance).res
        else:
            out = apply_phase_filter(cfg.h1(), cfg.resonance).scale(
                GENERATOR_SCALE
            )
    else:
        bracket = poisson_bracket(_pi(tree.left, cfg), _pi(tree.right, cfg))
        if dec is Decoration.CIRC:
            out = bracket
        elif dec is Decoration.R:
            out = split_resonant(bracket, cfg.resonance).res
        else:
            out = apply_phase_filter(bracket, cfg.resonance).scale(
                GENERATOR_SCALE
            )
    cfg._cache[key] = out
    return out


@dataclass(frozen=True)
class LedgerEntry:
    tree: Tree
    weight: Fraction
    kernel: Kernel


@dataclass(frozen=True)
class ExpansionLedger:
    entries: tuple[LedgerEntry, ...]
    total: Kernel
    m: Optional[int] = None
    ell: Optional[int] = None

    def to_json(self, cfg: EvalConfig) -> dict:
        return {
            "m": self.m,
            "ell": self.ell,
            "config": {
                "dim": cfg.lattice.dim,
                "radius": cfg.lattice.radius,
                "threshold": cfg.resonance.threshold,
                "cutoff": cfg.cutoff,
                "assumption_mode": cfg.mode.value,
            },
            "entries": [
                {
                    "tree": render(e.tree),
                    "S": e.weight.denominator if e.weight.numerator == 1 else None,
                    "weight": str(e.weight),
                    "kernel": e.kernel.to_json(),
                }
                for e in self.entries
            ],
            "total": self.total.to_json(),
        }


def _assemble(trees: TreeSet, cfg: EvalConfig, **meta) -> ExpansionLedger:
    entries = []
    total = Kernel.zero(cfg.lattice, cfg.cutoff)
    for t in trees:
        weight = Fraction(1, symmetry_factor(t, 0, cfg.mode))
        kernel = pi(t, cfg)
        entries.append(LedgerEntry(t, weight, kernel))
        total = total + kernel.scale(weight)
    return ExpansionLedger(tuple(entries), total, **meta)


def f_transform(i: int, cfg: EvalConfig) -> ExpansionLedger:
    """Generator ledger F_i over n-rooted trees of degree 2(i + 1)."""
    if i < 1:
        raise ValueError("i must be positive")
    trees = tree_class(n_exact(i + 1), cfg.mode)
    return _assemble(trees, cfg, m=i)


def normal_form(m: int, ell: int, cfg: EvalConfig) -> ExpansionLedger:
    """Truncated normal form after m transforms at cutoff degree 2*ell.

    The ledger holds the kinetic entry (bare k-leaf, weight 1) and one
    entry per tree of res_below(m+2), circ_exact(m+2), and, when
    m + 2 < ell, circ_range(m+2, ell).
    """
    if m < 1 or ell <= m:
        raise ValueError("need 1 <= m < ell")
    if cfg.cutoff != 2 * ell:
        raise ValueError("cfg.cutoff must equal 2*ell")
    idx = m + CLASS_INDEX_OFFSET
    trees = list(tree_class(res_below(idx), cfg.mode)) + list(
        tree_class(circ_exact(idx), cfg.mode)
    )
    if idx < ell:
        trees += list(tree_class(circ_range(idx, ell), cfg.mode))
    entries = [LedgerEntry(leaf(Decoration.K), Fraction(1), cfg.h0())]
    total = cfg.h0()
    for t in trees:
        weight = Fraction(1, symmetry_factor(t, 0, cfg.mode))
        kernel = pi(t, cfg)
        entries.append(LedgerEntry(t, weight, kernel))
        total = total + kernel.scale(weight)
    return ExpansionLedger(tuple(entries), total, m=m, ell=ell)


def cancellation_check(i: int, cfg: EvalConfig) -> Kernel:
    """Residual of {h0, F_i} + sum over circ_exact(i+1) of nonres(pi)/S.

    The defining property of the generators is that this residual is the
    zero kernel: the bracket with the kinetic term cancels the targeted
    non-resonant block exactly.
    """
    f = f_transform(i, cfg)
    residual = poisson_bracket(cfg.h0(), f.total)
    for t in tree_class(circ_exact(i + 1), cfg.mode):
        weight = Fraction(1, symmetry_factor(t, 0, cfg.mode))
        nonres = split_resonant(pi(t, cfg), cfg.resonance).nonres
        residual = residual + nonres.scale(weight)
    return residual
