"""Truncated Fock-space brute force for cross-checking the Gaussian formalism.

Density matrices are reconstructed from the characteristic function by
Gauss-Legendre quadrature of the inversion integral

    rho = integral d^{2N}xi / pi^N  chi(rho, xi) D(-xi),

entirely independent of the closed-form fidelity and measure expressions,
so agreement between the two routes is a meaningful check. Supports one
mode, and two modes at reduced node counts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numba
import numpy as np

from .states import GaussianState, conjugate, symplectic_form

# The portable threading layer avoids TBB/OMP version probing (and the
# warnings it emits) without changing results: block sums are sequential.
numba.config.THREADING_LAYER = "workqueue"

DEFAULT_TRACE_TOL = 1e-6

# Quadrature policy: nodes per axis start at the base count and double until
# two successive rho_00 estimates agree to _RHO00_TOL; the window half-width
# is 6 standard deviations of the widest direction of the integrand.
_BASE_NODES = {1: 120, 2: 40}
_MAX_NODES = {1: 960, 2: 160}
_RHO00_TOL = {1: 1e-10, 2: 1e-7}
_CUTOFF_CAP = {1: 64, 2: 20}
_CHUNK = 512  # row block for the two-mode coupling contraction

__all__ = [
    "DEFAULT_TRACE_TOL",
    "FockMatrix",
    "OracleConvergenceError",
    "InsufficientCutoffError",
    "characteristic_function",
    "displacement_element",
    "default_cutoff",
    "density_matrix",
    "moments_from_fock",
    "uhlmann_fidelity",
    "verify_realness",
    "verify_conjugation",
    "fock_to_dict",
]


class OracleConvergenceError(RuntimeError):
    """Quadrature failed to converge or produced an inconsistent matrix."""


class InsufficientCutoffError(ValueError):
    """The Fock-space truncation is too small for the requested state."""


@dataclass(frozen=True, eq=False)
class FockMatrix:
    """Truncated Fock-basis density matrix with quadrature diagnostics.

    ``data`` is a D^modes x D^modes complex matrix (Hermitian, PSD after
    clamping); ``trace_deficit`` is the probability weight lost to
    truncation. ``nodes`` is the per-axis quadrature node count actually
    used, ``rho00_residual`` the last rho_00 doubling difference (NaN when
    the caller pinned the node count), and ``hermiticity_error`` the raw
    asymmetry of the quadrature output before hermitization.
    """

    modes: int
    cutoff: int
    data: np.ndarray
    trace_deficit: float
    nodes: int
    rho00_residual: float
    hermiticity_error: float

    @property
    def dim(self) -> int:
        return self.data.shape[0]


def characteristic_function(state: GaussianState, xi) -> complex:
    """Characteristic function chi(rho, xi) of a Gaussian state.

    chi = exp(-xi.T (Omega V Omega.T) xi / 2 - i (Omega mean).T xi); chi(0)
    is 1 and |chi| <= 1 everywhere for physical states.
    """
    xi = np.asarray(xi, dtype=float)
    if xi.shape != (2 * state.modes,):
        raise ValueError(
            f"xi must have length {2 * state.modes}, got shape {xi.shape}"
        )
    omega = symplectic_form(state.modes)
    a = omega @ state.cov @ omega.T
    return complex(np.exp(-0.5 * xi @ a @ xi - 1j * (omega @ state.mean) @ xi))


def _laguerre(n: int, alpha: int, x: float) -> float:
    """Associated Laguerre polynomial L_n^(alpha)(x) by three-term recurrence."""
    if n == 0:
        return 1.0
    prev = 1.0
    cur = 1.0 + alpha - x
    for k in range(1, n):
        prev, cur = cur, ((2 * k + 1 + alpha - x) * cur - (k + alpha) * prev) / (k + 1)
    return cur


def displacement_element(j: int, k: int, lam: complex) -> complex:
    """Matrix element <j| D(lam) |k> of the displacement operator.

    D(lam) = exp(lam a^dag - lam* a). For j >= k the closed form is
    sqrt(k!/j!) lam^(j-k) exp(-|lam|^2/2) L_k^(j-k)(|lam|^2); the j < k case
    follows from D(lam)^dag = D(-lam). Factorial ratios are evaluated in log
    space so large indices stay finite.
    """
    if j < 0 or k < 0:
        raise ValueError(f"Fock indices must be nonnegative, got ({j}, {k})")
    lam = complex(lam)
    if j < k:
        return complex(np.conj(displacement_element(k, j, -lam)))
    x = abs(lam) ** 2
    log_ratio = 0.5 * (math.lgamma(k + 1) - math.lgamma(j + 1))
    return (
        math.exp(log_ratio - x / 2.0)
        * lam ** (j - k)
        * _laguerre(k, j - k, x)
    )


def _displacement_grid(
    mu: np.ndarray, dim: int, out: np.ndarray | None = None
) -> np.ndarray:
    """<j| D(mu) |k> for a vector of arguments; shape (len(mu), dim, dim).

    Works diagonal by diagonal: for offset a = j - k >= 0 the element is
    sqrt(k!/j!) mu^a exp(-|mu|^2/2) L_k^(a)(|mu|^2), and the three-term
    Laguerre recurrence is run on that fully scaled quantity, which keeps
    every intermediate bounded by one. The naive row/column ladder
    recurrence loses ~|mu| digits per step and is useless on wide
    quadrature windows; this form stays at round-off accuracy there. The
    lower triangle follows from D(mu)^dag = D(-mu).
    """
    n = mu.shape[0]
    if out is None:
        out = np.empty((n, dim, dim), dtype=np.complex128)
    x = np.abs(mu) ** 2
    alphas = np.arange(dim, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        logmu = np.log(mu.astype(np.complex128))
    lgam = np.cumsum(np.log(np.arange(1, dim + 1, dtype=float)))  # log k!
    lgam = np.concatenate([[0.0], lgam[: dim - 1]])
    expo = (
        (-0.5 * x)[:, None]
        + alphas[None, :] * logmu[:, None]
        - 0.5 * lgam[None, :]
    )
    if n and np.isinf(logmu).any():
        expo[np.isnan(expo)] = 0.0  # mu == 0, alpha == 0 gives 0 * -inf
    cur = np.exp(expo)
    out[:, :, 0] = cur
    if dim > 1:
        nxt = (
            np.sqrt(1.0 / (1.0 + alphas))[None, :]
            * ((1.0 + alphas)[None, :] - x[:, None])
            * cur
        )
        out[:, 1:, 1] = nxt[:, : dim - 1]
        prev, cur = cur, nxt
        for k in range(1, dim - 1):
            a_co = np.sqrt((k + 1.0) / (k + 1.0 + alphas)) / (k + 1.0)
            b_co = 2.0 * k + 1.0 + alphas
            c_co = np.sqrt(k * (k + alphas))
            nxt = a_co[None, :] * (
                (b_co[None, :] - x[:, None]) * cur - c_co[None, :] * prev
            )
            out[:, k + 1 :, k + 1] = nxt[:, : dim - k - 1]
            prev, cur = cur, nxt
    iu = np.triu_indices(dim, k=1)
    out[:, iu[0], iu[1]] = ((-1.0) ** (iu[1] - iu[0])) * np.conj(
        out[:, iu[1], iu[0]]
    )
    return out


def _window(state: GaussianState, dim: int) -> float:
    """Half-width of the integration box.

    Six standard deviations of the characteristic function's widest
    direction, plus the radius ~2 sqrt(dim) of the oscillatory support of
    the highest displacement matrix elements. Without the second term,
    near-pure states acquire spurious eigenvalue weight of order 1e-9 in
    the high Fock sector, which the operator square root inside fidelity
    amplifies to the 1e-6 scale.
    """
    omega = symplectic_form(state.modes)
    a = omega @ state.cov @ omega.T
    base = 6.0 * math.sqrt(float(np.linalg.eigvalsh(a)[-1]))
    if state.modes == 1:
        return base + 2.0 * math.sqrt(dim)
    # Two modes run on far coarser grids; the plain window keeps them
    # feasible and its ~1e-9 high-sector bias is inside the documented
    # 1e-5 accuracy of the two-mode route.
    return base


def _axis(nodes: int, half_width: float) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(nodes)
    # Make the rule exactly symmetric so mirror points pair up bitwise.
    x = (x - x[::-1]) / 2.0
    w = (w + w[::-1]) / 2.0
    return x * half_width, w * half_width


def _one_mode_grid(state: GaussianState, nodes: int, dim: int):
    """Quadrature coefficients w * chi / pi and arguments lam on the grid."""
    omega = symplectic_form(1)
    a = omega @ state.cov @ omega.T
    b = omega @ state.mean
    x, w = _axis(nodes, _window(state, dim))
    xi1 = np.repeat(x, nodes)
    xi2 = np.tile(x, nodes)
    wt = np.repeat(w, nodes) * np.tile(w, nodes)
    quad = a[0, 0] * xi1**2 + 2.0 * a[0, 1] * xi1 * xi2 + a[1, 1] * xi2**2
    coeff = wt * np.exp(-0.5 * quad - 1j * (b[0] * xi1 + b[1] * xi2)) / np.pi
    return coeff, xi1 + 1j * xi2


def _two_mode_grid(state: GaussianState, nodes: int, dim: int):
    omega = symplectic_form(2)
    a = omega @ state.cov @ omega.T
    b = omega @ state.mean
    x, w = _axis(nodes, _window(state, dim))
    p = np.column_stack(
        [np.repeat(x, nodes), np.tile(x, nodes)]
    )
    wt = np.repeat(w, nodes) * np.tile(w, nodes)

    def plane(block, bvec):
        quad = (
            block[0, 0] * p[:, 0] ** 2
            + 2.0 * block[0, 1] * p[:, 0] * p[:, 1]
            + block[1, 1] * p[:, 1] ** 2
        )
        return wt * np.exp(-0.5 * quad - 1j * (p @ bvec)) / np.pi

    u1 = plane(a[:2, :2], b[:2])
    u2 = plane(a[2:, 2:], b[2:])
    lam = p[:, 0] + 1j * p[:, 1]
    return u1, u2, lam, p, a[:2, 2:]


def _rho00(state: GaussianState, nodes: int, dim: int) -> complex:
    if state.modes == 1:
        coeff, lam = _one_mode_grid(state, nodes, dim)
        return complex(np.sum(coeff * np.exp(-0.5 * np.abs(lam) ** 2)))
    u1, u2, lam, p, a12 = _two_mode_grid(state, nodes, dim)
    g = np.exp(-0.5 * np.abs(lam) ** 2)
    v1 = u1 * g
    v2 = u2 * g
    total = 0.0 + 0.0j
    step = _CHUNK
    for s in range(0, p.shape[0], step):
        rows = np.exp(-(p[s : s + step] @ a12) @ p.T)
        total += v1[s : s + step] @ (rows @ v2)
    return complex(total)


def _converged_nodes(state: GaussianState, dim: int) -> tuple[int, float]:
    base = _BASE_NODES[state.modes]
    max_nodes = _MAX_NODES[state.modes]
    n = base
    prev = _rho00(state, n, dim)
    residual = float("inf")
    while True:
        if 2 * n > max_nodes:
            raise OracleConvergenceError(
                f"quadrature did not converge by {max_nodes} nodes per axis "
                f"(last rho_00 step {residual:.3g}); pass nodes= explicitly "
                f"to override"
            )
        cur = _rho00(state, 2 * n, dim)
        n *= 2
        residual = abs(cur - prev)
        if residual <= _RHO00_TOL[state.modes]:
            return n, residual
        prev = cur


def _one_mode_half_grid(state: GaussianState, nodes: int, dim: int):
    """Coefficients and arguments on the xi1 > 0 half of the symmetric grid.

    The full integral is recovered by mirror pairing: the weight and |chi|
    at -xi match those at xi with chi conjugated, while the displacement
    diagonals only pick up a parity sign, so each half-grid point carries
    both itself and its mirror image.
    """
    omega = symplectic_form(1)
    a = omega @ state.cov @ omega.T
    b = omega @ state.mean
    x, w = _axis(nodes, _window(state, dim))
    half = nodes // 2
    xp, wp = x[half:], w[half:]
    xi1 = np.repeat(xp, nodes)
    xi2 = np.tile(x, half)
    wt = np.repeat(wp, nodes) * np.tile(w, half)
    quad = a[0, 0] * xi1**2 + 2.0 * a[0, 1] * xi1 * xi2 + a[1, 1] * xi2**2
    coeff = wt * np.exp(-0.5 * quad - 1j * (b[0] * xi1 + b[1] * xi2)) / np.pi
    return coeff, xi1 + 1j * xi2


# Fixed block count for the parallel kernel: per-block sums are sequential
# and blocks are reduced in a fixed order, so results do not depend on the
# thread schedule.
_KERNEL_BLOCKS = 64


@numba.njit(
    "void(float64[::1], float64[::1], complex128[::1], float64[:, ::1], "
    "float64[:, ::1], complex128[:, :, ::1])",
    parallel=True,
    cache=True,
)
def _accumulate_kernel(wre, wim, mu, a_co, c_co, acc):  # pragma: no cover
    dim = acc.shape[1]
    n = mu.shape[0]
    nblocks = acc.shape[0]
    block = (n + nblocks - 1) // nblocks
    for b in numba.prange(nblocks):
        lo = b * block
        hi = min(lo + block, n)
        for g in range(lo, hi):
            m = mu[g]
            x = m.real * m.real + m.imag * m.imag
            wr = wre[g]
            wi = wim[g]
            d0 = complex(math.exp(-0.5 * x), 0.0)
            for alpha in range(dim):
                if alpha > 0:
                    d0 = d0 * m / math.sqrt(alpha)
                even = alpha % 2 == 0
                prev = d0
                if even:
                    acc[b, alpha, 0] += wr * prev
                else:
                    acc[b, alpha, 0] += 1j * (wi * prev)
                    acc[b, 0, alpha] += -1j * (wi * prev.conjugate())
                if alpha > 0 and even:
                    acc[b, 0, alpha] += wr * prev.conjugate()
                kmax = dim - alpha
                if kmax == 1:
                    continue
                cur = (1.0 + alpha - x) * prev / math.sqrt(1.0 + alpha)
                if even:
                    acc[b, alpha + 1, 1] += wr * cur
                    if alpha > 0:
                        acc[b, 1, alpha + 1] += wr * cur.conjugate()
                else:
                    acc[b, alpha + 1, 1] += 1j * (wi * cur)
                    acc[b, 1, alpha + 1] += -1j * (wi * cur.conjugate())
                for k in range(1, kmax - 1):
                    nxt = a_co[alpha, k] * (
                        (2.0 * k + 1.0 + alpha - x) * cur - c_co[alpha, k] * prev
                    )
                    prev = cur
                    cur = nxt
                    if even:
                        acc[b, alpha + k + 1, k + 1] += wr * cur
                        if alpha > 0:
                            acc[b, k + 1, alpha + k + 1] += wr * cur.conjugate()
                    else:
                        acc[b, alpha + k + 1, k + 1] += 1j * (wi * cur)
                        acc[b, k + 1, alpha + k + 1] += -1j * (wi * cur.conjugate())


def _integrate_one(state: GaussianState, dim: int, nodes: int) -> np.ndarray:
    """One-mode inversion integral over the mirror-paired half grid.

    chi(-xi) = conj(chi(xi)) while a displacement diagonal at offset a only
    changes by (-1)^a under xi -> -xi, so summing 2 Re(coeff) against even
    diagonals and 2 Im(coeff) against odd ones reproduces the full grid at
    half the cost; the lower/upper triangle split falls out of the same
    pairing. The kernel runs the scaled-diagonal Laguerre recurrence of
    :func:`_displacement_grid` pointwise in registers.
    """
    coeff, lam = _one_mode_half_grid(state, nodes, dim)
    ks = np.arange(dim, dtype=float)
    al = ks[:, None]
    with np.errstate(divide="ignore"):
        a_co = np.sqrt((ks[None, :] + 1.0) / (ks[None, :] + 1.0 + al)) / (
            ks[None, :] + 1.0
        )
    c_co = np.sqrt(ks[None, :] * (ks[None, :] + al))
    acc = np.zeros((_KERNEL_BLOCKS, dim, dim), dtype=np.complex128)
    _accumulate_kernel(
        np.ascontiguousarray(2.0 * coeff.real),
        np.ascontiguousarray(2.0 * coeff.imag),
        np.ascontiguousarray(-lam),
        a_co,
        c_co,
        acc,
    )
    return acc.sum(axis=0)


def _integrate_two(state: GaussianState, dim: int, nodes: int) -> np.ndarray:
    u1, u2, lam, p, a12 = _two_mode_grid(state, nodes, dim)
    npts = lam.shape[0]
    e1 = _displacement_grid(-lam, dim).reshape(npts, dim * dim) * u1[:, None]
    e2 = _displacement_grid(-lam, dim).reshape(npts, dim * dim) * u2[:, None]
    e2r = np.ascontiguousarray(e2.real)
    e2i = np.ascontiguousarray(e2.imag)
    acc = np.zeros((dim * dim, dim * dim), dtype=np.complex128)
    step = _CHUNK
    for s in range(0, npts, step):
        rows = np.exp(-(p[s : s + step] @ a12) @ p.T)
        t = rows @ e2r + 1j * (rows @ e2i)
        acc += e1[s : s + step].T @ t
    rho4 = acc.reshape(dim, dim, dim, dim)  # (j1, k1, j2, k2)
    return np.ascontiguousarray(rho4.transpose(0, 2, 1, 3)).reshape(
        dim * dim, dim * dim
    )


def default_cutoff(state: GaussianState) -> int:
    """Heuristic per-mode Fock dimension, capped at 64 (one mode) or 20 (two).

    Two estimates per mode, the larger wins. The occupancy rule
    8 * (mean photon number + 1) covers displacement-dominated states. The
    tail rule targets the geometric decay of the photon-number
    distribution: its per-level ratio is max |(e - 1) / (e + 1)| over the
    eigenvalues e of the mode's covariance block (n/(n+1) for thermal,
    tanh r for squeezed states, which the occupancy rule alone badly
    underestimates), and the dimension is chosen to push that tail below
    1e-9, plus an offset for the displacement bump.
    """
    if state.modes not in _CUTOFF_CAP:
        raise ValueError(f"supported mode counts are 1 and 2, got {state.modes}")
    dims = []
    for l in range(state.modes):
        q, pp = 2 * l, 2 * l + 1
        n_disp = (state.mean[q] ** 2 + state.mean[pp] ** 2) / 4.0
        nbar = (
            state.cov[q, q] + state.cov[pp, pp] - 2.0
        ) / 4.0 + n_disp
        d_occ = math.ceil(8.0 * (max(nbar, 0.0) + 1.0))
        evals = np.linalg.eigvalsh(state.cov[q : pp + 1, q : pp + 1])
        ratio = float(np.abs((evals - 1.0) / (evals + 1.0)).max())
        d_tail = math.ceil(4.0 * n_disp)
        if 0.0 < ratio < 1.0:
            d_tail += math.ceil(math.log(1e-9) / math.log(ratio))
        dims.append(max(d_occ, d_tail))
    return min(max(dims), _CUTOFF_CAP[state.modes])


def density_matrix(
    state: GaussianState,
    cutoff: int | None = None,
    *,
    trace_tol: float = DEFAULT_TRACE_TOL,
    nodes: int | None = None,
) -> FockMatrix:
    """Reconstruct the truncated Fock-basis density matrix of a state.

    Each entry is the inversion integral evaluated by tensor-product
    Gauss-Legendre quadrature; the node count is chosen by the rho_00
    doubling test unless ``nodes`` pins it (useful when two matrices must
    share a grid). The result is hermitized, PSD-clamped (eigenvalues in
    [-1e-8, 0) set to zero, trace restored), and rejected if the trace
    deficit exceeds ``trace_tol``.
    """
    if state.modes not in (1, 2):
        raise ValueError(
            f"density matrices are built for 1 or 2 modes, got {state.modes}"
        )
    dim = int(cutoff) if cutoff is not None else default_cutoff(state)
    if dim < 2:
        raise ValueError(f"cutoff must be at least 2, got {dim}")
    if nodes is None:
        nodes, residual = _converged_nodes(state, dim)
    else:
        if nodes < 2 or nodes % 2 != 0:
            raise ValueError(f"nodes must be a positive even count, got {nodes}")
        residual = float("nan")
    if state.modes == 1:
        raw = _integrate_one(state, dim, nodes)
    else:
        raw = _integrate_two(state, dim, nodes)

    herm_err = float(np.abs(raw - raw.conj().T).max())
    if herm_err > 1e-8:
        raise OracleConvergenceError(
            f"quadrature output deviates from Hermitian by {herm_err:.3g}"
        )
    data = (raw + raw.conj().T) / 2.0

    evals, evecs = np.linalg.eigh(data)
    if evals[0] < -1e-8:
        raise OracleConvergenceError(
            f"quadrature output has eigenvalue {evals[0]:.3g} below -1e-8"
        )
    trace = float(np.trace(data).real)
    deficit = 1.0 - trace
    if deficit < -1e-8:
        raise OracleConvergenceError(
            f"truncated trace exceeds one by {-deficit:.3g}"
        )
    deficit = max(deficit, 0.0)
    if deficit > trace_tol:
        raise InsufficientCutoffError(
            f"trace deficit {deficit:.3g} exceeds tolerance {trace_tol:.3g} at "
            f"cutoff {dim}; increase the cutoff"
        )
    clipped = np.clip(evals, 0.0, None)
    data = (evecs * clipped) @ evecs.conj().T
    kept = float(clipped.sum())
    if kept > 0.0:
        data *= trace / kept
    data.setflags(write=False)
    return FockMatrix(
        modes=state.modes,
        cutoff=dim,
        data=data,
        trace_deficit=deficit,
        nodes=nodes,
        rho00_residual=residual,
        hermiticity_error=herm_err,
    )


def _single_mode_moments(mat: np.ndarray, trace: float):
    d = mat.shape[0]
    j = np.arange(d - 1, dtype=float)
    amean = complex(np.sum(np.conj(np.diagonal(mat, 1)) * np.sqrt(j + 1.0))) / trace
    jj = np.arange(d - 2, dtype=float)
    a2 = (
        complex(np.sum(np.conj(np.diagonal(mat, 2)) * np.sqrt((jj + 1.0) * (jj + 2.0))))
        / trace
    )
    nocc = float(np.sum(np.arange(d) * np.diagonal(mat).real)) / trace
    x1 = 2.0 * amean.real
    x2 = 2.0 * amean.imag
    v11 = 2.0 * a2.real + 2.0 * nocc + 1.0 - x1 * x1
    v22 = -(2.0 * a2.real - 2.0 * nocc - 1.0) - x2 * x2
    v12 = 2.0 * a2.imag - x1 * x2
    return np.array([x1, x2]), np.array([[v11, v12], [v12, v22]])


def moments_from_fock(
    fm: FockMatrix, *, occupancy_tol: float = 1e-6
) -> tuple[np.ndarray, np.ndarray]:
    """Recover (mean, cov) from a truncated Fock matrix by ladder-operator sums.

    Sums run over the available indices and are normalized by the truncated
    trace. Raises :class:`InsufficientCutoffError` when the top Fock level
    still carries weight above ``occupancy_tol`` (the sums would then be
    visibly biased).
    """
    d = fm.cutoff
    trace = float(np.trace(fm.data).real)
    if fm.modes == 1:
        top = float(fm.data[d - 1, d - 1].real)
        if top > occupancy_tol:
            raise InsufficientCutoffError(
                f"top Fock level holds {top:.3g} > {occupancy_tol:.3g}; "
                f"increase the cutoff before extracting moments"
            )
        return _single_mode_moments(fm.data, trace)

    rho4 = fm.data.reshape(d, d, d, d)  # (j1, j2, k1, k2)
    red1 = np.einsum("abcb->ac", rho4)
    red2 = np.einsum("abac->bc", rho4)
    top = max(float(red1[d - 1, d - 1].real), float(red2[d - 1, d - 1].real))
    if top > occupancy_tol:
        raise InsufficientCutoffError(
            f"top Fock level holds {top:.3g} > {occupancy_tol:.3g}; "
            f"increase the cutoff before extracting moments"
        )
    mean1, cov1 = _single_mode_moments(red1, trace)
    mean2, cov2 = _single_mode_moments(red2, trace)

    r = np.arange(d - 1)
    w = np.sqrt(r + 1.0)
    ww = np.outer(w, w)
    # tr(rho a1 a2) and tr(rho a1 a2^dag) from the pair ladder patterns.
    t12 = complex(np.sum(ww * rho4[r[:, None] + 1, r[None, :] + 1, r[:, None], r[None, :]]))
    t12d = complex(np.sum(ww * rho4[r[:, None] + 1, r[None, :], r[:, None], r[None, :] + 1]))
    t12 /= trace
    t12d /= trace

    x1, x2 = mean1
    x3, x4 = mean2
    v13 = 2.0 * t12.real + 2.0 * t12d.real - x1 * x3
    v14 = 2.0 * t12.imag - 2.0 * t12d.imag - x1 * x4
    v23 = 2.0 * t12.imag + 2.0 * t12d.imag - x2 * x3
    v24 = -2.0 * t12.real + 2.0 * t12d.real - x2 * x4

    mean = np.concatenate([mean1, mean2])
    cov = np.zeros((4, 4))
    cov[:2, :2] = cov1
    cov[2:, 2:] = cov2
    cov[0, 2] = cov[2, 0] = v13
    cov[0, 3] = cov[3, 0] = v14
    cov[1, 2] = cov[2, 1] = v23
    cov[1, 3] = cov[3, 1] = v24
    return mean, cov


def uhlmann_fidelity(a: FockMatrix, b: FockMatrix) -> float:
    """tr sqrt(sqrt(a) b sqrt(a)) via Hermitian eigendecompositions.

    Negative eigenvalues from quadrature noise are clamped to zero before
    the square roots.
    """
    if a.modes != b.modes or a.cutoff != b.cutoff:
        raise ValueError(
            f"matrices must share modes and cutoff, got "
            f"({a.modes}, {a.cutoff}) and ({b.modes}, {b.cutoff})"
        )
    w, u = np.linalg.eigh(a.data)
    sq = (u * np.sqrt(np.clip(w, 0.0, None))) @ u.conj().T
    m = sq @ b.data @ sq
    m = (m + m.conj().T) / 2.0
    ev = np.clip(np.linalg.eigvalsh(m), 0.0, None)
    f = float(np.sum(np.sqrt(ev)))
    if f > 1.0 + 1e-6:
        raise ValueError(
            f"fidelity {f:.8f} exceeds one beyond tolerance; inputs do not "
            f"look like density matrices"
        )
    return f


def verify_realness(fm: FockMatrix, tol: float) -> bool:
    """True iff every imaginary part of the Fock matrix is within tol."""
    return float(np.abs(fm.data.imag).max()) <= tol


def verify_conjugation(state: GaussianState, cutoff: int | None = None) -> float:
    """Max deviation between Fock(conjugate(state)) and conj(Fock(state)).

    Both matrices are built on the same quadrature grid so the comparison is
    sharp; small values confirm that sign-flipping the mean and covariance
    entries really is complex conjugation in the Fock basis.
    """
    fm = density_matrix(state, cutoff)
    fm_conj = density_matrix(conjugate(state), fm.cutoff, nodes=fm.nodes)
    return float(np.abs(fm_conj.data - np.conj(fm.data)).max())


def fock_to_dict(fm: FockMatrix) -> dict:
    """Debug dump: {"cutoff": D, "re": [[...]], "im": [[...]]}."""
    return {
        "cutoff": fm.cutoff,
        "re": fm.data.real.tolist(),
        "im": fm.data.imag.tolist(),
    }
