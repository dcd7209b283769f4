"""Nonnegative-matrix spectral machinery.

Spectral radii of vertex-matrix restrictions drive the whole harmonic
classification, so everything here is deterministic: power iteration
from the uniform start vector, bracketed by Collatz-Wielandt ratios.
Irreducible blocks need not be primitive (a pure cycle oscillates), so
iteration runs on block + I, which is primitive with the same Perron
vector and a spectral radius shifted by exactly one.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .digraph import tarjan_scc
from .kgraph import (
    Degree,
    IntMatrix,
    KGraph,
    KGraphError,
    deg_box,
    mat_add,
)

DEFAULT_CMP_TOL = 1e-9  # global comparison tolerance for strict inequalities


class NonConvergence(KGraphError):
    def __init__(self, iterations: int, bounds: tuple[float, float]):
        self.iterations = iterations
        self.bounds = bounds
        super().__init__(
            f"power iteration did not converge in {iterations} steps; "
            f"spectral radius bracketed in [{bounds[0]!r}, {bounds[1]!r}]"
        )


class CertificationFailure(KGraphError):
    """A_F support does not match nontrivial reachability (internal bug)."""


@dataclass(frozen=True)
class WellChosenSet:
    """Finite multiset F of nonzero degrees with A_F = sum_{n in F} A^n
    supported exactly on nontrivial-path reachability."""

    degrees: tuple[Degree, ...]

    def __post_init__(self):
        if not self.degrees:
            raise ValueError("F must be nonempty")
        for n in self.degrees:
            if not any(n):
                raise ValueError("degrees in F must be nonzero")

    def __iter__(self):
        return iter(self.degrees)

    def extended(self, extra: Iterable[Degree]) -> "WellChosenSet":
        """Concatenation; keeps well-chosenness (support only grows within
        reachability)."""
        return WellChosenSet(self.degrees + tuple(extra))


def certify_well_chosen(g: KGraph, f: WellChosenSet) -> bool:
    """support(A_F) == {(v, w): some nontrivial path w -> v}."""
    af = a_f_matrix(g, f)
    reach = g.nontrivial_reach()
    n = len(g.vertices)
    for wi in range(n):
        for vi in range(n):
            if (af[vi][wi] > 0) != (vi in reach[wi]):
                return False
    return True


def default_well_chosen(g: KGraph) -> WellChosenSet:
    """The box F = {n : 0 < n <= |V| * (1,...,1)}.

    Any nontrivial path can be shortened, one per-color cycle at a
    time, to one whose degree fits in the box, so the box support
    already realizes all of nontrivial reachability.
    """
    f = WellChosenSet(tuple(deg_box(g.rank, len(g.vertices))))
    if not certify_well_chosen(g, f):
        raise CertificationFailure(
            "box well-chosen set failed support certification"
        )
    return f


def a_f_matrix(g: KGraph, f: WellChosenSet) -> IntMatrix:
    """A_F = sum over the multiset F of the composite matrices A^n."""
    total = None
    for n in f:
        an = g.composite_matrix(n)
        total = an if total is None else mat_add(total, an)
    assert total is not None
    return total


def float_matrix(m: Sequence[Sequence[float]]) -> np.ndarray:
    # Python ints convert exactly or raise OverflowError: counts that
    # exceed float range are an error, never silent wrapping.
    return np.array([[float(x) for x in row] for row in m], dtype=float)


def _irreducible_radius(
    block: np.ndarray, tol: float, max_iter: int
) -> float:
    """rho of an irreducible nonnegative block via power iteration on
    block + I (primitive), Collatz-Wielandt bracketed."""
    n = block.shape[0]
    if n == 1:
        return float(block[0, 0])
    shifted = block + np.eye(n)
    x = np.full(n, 1.0 / n)
    lo = hi = 0.0
    for _ in range(max_iter):
        y = shifted @ x
        ratios = y / x
        lo, hi = float(ratios.min()), float(ratios.max())
        if hi - lo <= tol * max(hi, 1.0):
            return (lo + hi) / 2.0 - 1.0
        x = y / y.sum()
    raise NonConvergence(max_iter, (lo - 1.0, hi - 1.0))


def spectral_radius(
    m: Sequence[Sequence[float]] | np.ndarray,
    subset: Optional[Iterable[int]] = None,
    tol: float = 1e-12,
    max_iter: int = 500_000,
) -> float:
    """rho(M^S) for a nonnegative matrix M and an index subset S.

    Decomposes the restriction into strong components of its support
    digraph and takes the maximum block radius; the empty subset gives
    0 by convention.
    """
    arr = m if isinstance(m, np.ndarray) else float_matrix(m)
    if subset is None:
        idx = list(range(arr.shape[0]))
    else:
        idx = sorted(set(subset))
    if not idx:
        return 0.0
    sub = arr[np.ix_(idx, idx)]
    if (sub < 0).any():
        raise ValueError("matrix must be nonnegative")
    # support digraph: j -> i when sub[i, j] > 0 (direction is irrelevant
    # for the SCC partition as long as it is consistent)
    size = len(idx)
    adj = [[i for i in range(size) if sub[i, j] > 0] for j in range(size)]
    best = 0.0
    for scc in tarjan_scc(adj):
        if len(scc) == 1 and sub[scc[0], scc[0]] == 0:
            continue
        block = sub[np.ix_(scc, scc)]
        best = max(best, _irreducible_radius(block, tol, max_iter))
    return best


def collatz_wielandt_bounds(
    m: Sequence[Sequence[float]] | np.ndarray, x: np.ndarray
) -> tuple[float, float]:
    """[min_i (Mx)_i / x_i, max_i (Mx)_i / x_i] for strictly positive x."""
    arr = m if isinstance(m, np.ndarray) else float_matrix(m)
    y = arr @ x
    ratios = y / x
    return float(ratios.min()), float(ratios.max())


def perron_vector(
    m: Sequence[Sequence[float]] | np.ndarray,
    tol: float = 1e-13,
    max_iter: int = 500_000,
) -> np.ndarray:
    """Positive unit-1-norm eigenvector of a strictly positive matrix.

    Deterministic: uniform start, 1-norm renormalization each step,
    convergence when the Collatz-Wielandt bracket closes and the
    residual ||Mx - rho x||_inf falls below tolerance.
    """
    arr = m if isinstance(m, np.ndarray) else float_matrix(m)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError("matrix must be square")
    if (arr <= 0).any():
        raise ValueError("matrix must be strictly positive")
    n = arr.shape[0]
    x = np.full(n, 1.0 / n)
    lo = hi = 0.0
    for _ in range(max_iter):
        y = arr @ x
        ratios = y / x
        lo, hi = float(ratios.min()), float(ratios.max())
        x_new = y / y.sum()
        if hi - lo <= tol * max(hi, 1.0):
            rho = (lo + hi) / 2.0
            resid = float(np.abs(arr @ x_new - rho * x_new).max())
            if resid <= max(tol * max(rho, 1.0), 1e-14):
                return x_new
        x = x_new
    raise NonConvergence(max_iter, (lo, hi))


def spectrum_product(spectrum: Sequence[float], n: Degree) -> float:
    """prod_i rho_i^{n_i}; 0^0 counts as 1."""
    out = 1.0
    for rho, e in zip(spectrum, n):
        if e:
            out *= rho ** e
    return out
