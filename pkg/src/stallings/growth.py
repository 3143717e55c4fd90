"""Growth of a subgroup through its core graph.

Exact ball counts c(R), the critical exponent delta by two independent
routes (Perron value of the non-backtracking edge matrix of the 2-core,
and the slope of ln c(R)), empirical sandwich constants, the barbell
polynomial root solver, and the exact gluing upper-bound evaluator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .core import CoreGraph

__all__ = [
    "GrowthEstimate",
    "KwonParkResult",
    "ConvergenceError",
    "cycle_counts",
    "two_core_edges",
    "critical_exponent",
    "coornaert_constant",
    "kwon_park",
    "cr_estimate_rhs",
]


class ConvergenceError(RuntimeError):
    """Power iteration failed to reach the residual tolerance."""

    def __init__(self, message: str, residual: float):
        super().__init__(message)
        self.residual = residual


@dataclass(frozen=True)
class GrowthEstimate:
    """Exponent estimates for one core graph.

    counts[R] is the exact number of subgroup elements of length <= R;
    delta is the spectral estimate (exact 0.0 for cyclic cores), lambda_
    = e^delta its growth base, delta_dp the count-slope estimate, and
    coornaert_k the empirical sandwich constant (None when rank < 2).
    """

    counts: tuple[int, ...]
    delta: float
    lambda_: float
    delta_dp: float
    method_agreement: float
    coornaert_k: float | None
    cyclic: bool


@dataclass(frozen=True)
class KwonParkResult:
    """Root data for the barbell exponent polynomial 2t^n + t - 1."""

    n: int
    root: float
    delta: float


def cycle_counts(graph: CoreGraph, r_max: int) -> list[int]:
    """Exact cumulative counts [c(0), ..., c(r_max)].

    c(R) counts the reduced words of length <= R tracing closed paths
    at the root, the identity included.
    """
    if r_max < 0:
        raise ValueError("r_max must be >= 0")
    per_length = kernels.closed_walk_counts(
        *kernels.edge_state_arrays(graph), graph.root, r_max
    )
    out = [1]
    for a in per_length:
        out.append(out[-1] + a)
    return out


def two_core_edges(graph: CoreGraph) -> list[tuple[int, int, int]]:
    """Edges of the maximal subgraph of minimum valency 2.

    Iteratively strips valency <= 1 vertices, the root included: a
    hanging tail shifts counts by a constant and cannot carry
    exponential growth.
    """
    edges = graph.edges()
    n = graph.vertex_count
    deg = [0] * n
    incident: list[list[int]] = [[] for _ in range(n)]
    for idx, (u, _lab, v) in enumerate(edges):
        deg[u] += 1
        deg[v] += 1
        incident[u].append(idx)
        incident[v].append(idx)
    alive = [True] * len(edges)
    dead = [False] * n
    stack = [v for v in range(n) if deg[v] <= 1]
    while stack:
        v = stack.pop()
        if dead[v]:
            continue
        dead[v] = True
        for idx in incident[v]:
            if not alive[idx]:
                continue
            alive[idx] = False
            u, _lab, w = edges[idx]
            deg[u] -= 1
            deg[w] -= 1
            other = w if u == v else u
            if not dead[other] and deg[other] <= 1:
                stack.append(other)
    return [e for idx, e in enumerate(edges) if alive[idx]]


def _ln_big(n: int) -> float:
    """Natural log of a positive integer of any size."""
    if n <= 0:
        raise ValueError("log of non-positive count")
    if n.bit_length() <= 500:
        return math.log(n)
    shift = n.bit_length() - 500
    return math.log(n >> shift) + shift * math.log(2)


def _spectral_delta(graph: CoreGraph, tol: float) -> float:
    """ln of the non-backtracking Perron value of the 2-core.

    Caller guarantees the graph is non-cyclic (free rank >= 2).
    """
    arrs = kernels.edge_state_arrays(graph, two_core_edges(graph))
    n_states = len(arrs[0])
    cap = int(10 * n_states * math.log(1 / tol)) + 1000
    lam, residual, _iters, converged = kernels.nb_spectral_radius(*arrs, tol, cap)
    if not converged:
        raise ConvergenceError(
            f"power iteration hit the cap of {cap} with residual {residual:.3e}"
            f" (tolerance {tol:.3e})",
            residual,
        )
    return math.log(lam)


def _dense_spectral_delta(graph: CoreGraph, max_states: int = 1000) -> float:
    """Exact small-graph fallback for near-degenerate spectra.

    Gluing a core to a copy of itself along a long path produces two
    leading eigenvalues split only by the weak coupling through the
    path, and power iteration stalls on the pair.  For the small cores
    where this happens, the full dense spectrum is cheap and settles
    the Perron value outright.
    """
    arrs = kernels.edge_state_arrays(graph, two_core_edges(graph))
    tails, heads, rev, _nv = arrs
    n = len(tails)
    if n == 0:
        return 0.0
    if n > max_states:
        raise ConvergenceError(
            f"dense fallback refused: {n} states exceeds the cutoff {max_states}",
            math.nan,
        )
    allowed = tails[:, None] == heads[None, :]
    allowed[rev, np.arange(n)] = False
    lam = float(np.linalg.eigvals(allowed.astype(float)).real.max())
    if lam <= 1.0:
        raise ConvergenceError(f"dense fallback found Perron value {lam} <= 1", math.nan)
    return math.log(lam)


def _subspace_delta(graph: CoreGraph, tol: float, dim: int = 16) -> float:
    """Block iteration for spectra with a near-degenerate leading cluster.

    A graph assembled from 2^k weakly coupled copies of one core (every
    repeated twin glue does this) has a leading eigenvalue cluster of
    that size, and single-vector iteration mixes it forever while the
    dense route is too big past its cutoff.  Iterating a dim-dimensional
    subspace with a Rayleigh-Ritz extraction resolves everything inside
    the block exactly, so convergence runs at the (dim+1)-th eigenvalue's
    rate, independent of the cluster's internal splits; cluster members
    the block misses can only be within tol of the top, where the
    residual test already accepts.  The +1 shift keeps parity pairs from
    oscillating, as in the single-vector path; the residual is checked
    on the unshifted operator.
    """
    tails, heads, rev, n_vertices = kernels.edge_state_arrays(
        graph, two_core_edges(graph)
    )
    n = len(tails)
    if n == 0:
        return 0.0
    dim = max(2, min(dim, n))

    def apply_nb(mat):
        sums = np.zeros((n_vertices, mat.shape[1]))
        np.add.at(sums, tails, mat)
        return sums[heads] - mat[rev]

    rng = np.random.default_rng(0)
    basis = np.linalg.qr(rng.random((n, dim)) + 1.0)[0]
    cap = int(10 * n * math.log(1 / tol)) + 1000
    residual = math.inf
    for _ in range(cap):
        image = apply_nb(basis) + basis
        small = basis.T @ image
        theta, vecs = np.linalg.eig(small)
        top = int(np.argmax(theta.real))
        ritz = basis @ vecs[:, top].real
        scale = float(np.abs(ritz).max())
        if scale > 0:
            ritz = ritz[:, None] / scale
            lam = float(theta[top].real) - 1.0
            residual = float(np.abs(apply_nb(ritz) - lam * ritz).max())
            if residual <= tol:
                if lam <= 1.0:
                    raise ConvergenceError(
                        f"subspace iteration found Perron value {lam} <= 1", residual
                    )
                return math.log(lam)
        basis = np.linalg.qr(image)[0]
    raise ConvergenceError(
        f"subspace iteration hit the cap of {cap} with residual {residual:.3e}"
        f" (tolerance {tol:.3e})",
        residual,
    )


def _dp_slope(counts: list[int] | tuple[int, ...]) -> float:
    """Count-slope exponent estimate over the last window.

    A two-step window cancels the parity oscillation of cores whose
    cycles all have even length.
    """
    if len(counts) < 3:
        raise ValueError("need counts up to R >= 2 for the slope estimate")
    return (_ln_big(counts[-1]) - _ln_big(counts[-3])) / 2.0


def critical_exponent(
    graph: CoreGraph, tol: float = 1e-10, dp_rmax: int = 60
) -> GrowthEstimate:
    """Critical exponent by spectral and count-slope methods.

    The reported delta is the spectral value; for cyclic (free rank
    <= 1) cores both methods report exactly 0.  The sandwich constant
    is evaluated over the computed count range when rank >= 2.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if dp_rmax < 2:
        raise ValueError("dp_rmax must be >= 2")
    counts = cycle_counts(graph, dp_rmax)
    if graph.free_rank <= 1:
        return GrowthEstimate(
            counts=tuple(counts),
            delta=0.0,
            lambda_=1.0,
            delta_dp=0.0,
            method_agreement=0.0,
            coornaert_k=None,
            cyclic=True,
        )
    delta = _spectral_delta(graph, tol)
    delta_dp = _dp_slope(counts)
    k_hat = _sandwich_constant(counts, delta)
    return GrowthEstimate(
        counts=tuple(counts),
        delta=delta,
        lambda_=math.exp(delta),
        delta_dp=delta_dp,
        method_agreement=abs(delta - delta_dp),
        coornaert_k=k_hat,
        cyclic=False,
    )


def _sandwich_constant(counts, delta: float) -> float:
    k_hat = 1.0
    for radius, c in enumerate(counts):
        ln_c = _ln_big(c)
        k_hat = max(
            k_hat,
            math.exp(ln_c - delta * radius),
            math.exp(delta * radius - ln_c),
        )
    return k_hat


def coornaert_constant(graph: CoreGraph, r_max: int, tol: float = 1e-10) -> float:
    """Empirical sandwich constant K at scale r_max.

    The smallest K with (1/K)e^(delta R) <= c(R) <= K e^(delta R) for
    all R <= r_max; an estimate at this scale, not a proof of a global
    constant.  Requires free rank >= 2: for cyclic and trivial
    subgroups the sandwich has no exponential content.
    """
    if graph.free_rank < 2:
        raise ValueError("sandwich constant needs a non-cyclic, nontrivial subgroup")
    if r_max < 0:
        raise ValueError("r_max must be >= 0")
    counts = cycle_counts(graph, r_max)
    delta = _spectral_delta(graph, tol)
    return _sandwich_constant(counts, delta)


def kwon_park(n: int, tol: float = 1e-12) -> KwonParkResult:
    """Root in (0,1) of 2t^n + t - 1 and the exponent ln(1/root).

    Both parity cases of the barbell polynomial reduce to this strictly
    increasing form on (0,1) (the even case after clearing the positive
    factor t+1), so bisection applies uniformly.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if tol <= 0:
        raise ValueError("tol must be positive")
    lo, hi = 0.0, 1.0
    while hi - lo > tol:
        mid = (lo + hi) / 2
        val = 2.0 * mid**n + mid - 1.0
        if val == 0.0:
            lo = hi = mid
            break
        if val < 0.0:
            lo = mid
        else:
            hi = mid
    root = (lo + hi) / 2
    return KwonParkResult(n=n, root=root, delta=math.log(1.0 / root))


def cr_estimate_rhs(base_counts, g_len: int, j_len: int, radius: int) -> int:
    """Exact gluing upper bound on c(R) of a self-gluing along a connector.

    Evaluates sum over i of the (2i+1)-fold convolution power of
    base_counts at R + 2i(g_len - 2J), for i up to floor(R/2J); the
    inner convolution realizes the sum over compositions into 2i+1
    nonnegative parts.  base_counts must cover every touched index.
    """
    if j_len < 1:
        raise ValueError("join length must be >= 1")
    if g_len < j_len:
        raise ValueError("connector cannot be shorter than its join segment")
    if radius < 0:
        raise ValueError("radius must be >= 0")
    i_max = radius // (2 * j_len)
    need = radius + 2 * i_max * max(0, g_len - 2 * j_len)
    if len(base_counts) <= need:
        raise ValueError(
            f"base_counts too short: need indices up to {need}, have {len(base_counts) - 1}"
        )
    base = [int(x) for x in base_counts[: need + 1]]
    total = 0
    power = base  # (2i+1)-fold convolution power, i = 0 initially
    for i in range(i_max + 1):
        target = radius + 2 * i * (g_len - 2 * j_len)
        if 0 <= target <= need:
            total += power[target]
        if i < i_max:
            power = _convolve(_convolve(power, base, need + 1), base, need + 1)
    return total


def _convolve(a: list[int], b: list[int], length: int) -> list[int]:
    out = [0] * length
    for i, ai in enumerate(a):
        if ai == 0 or i >= length:
            continue
        for j in range(min(len(b), length - i)):
            out[i + j] += ai * b[j]
    return out
