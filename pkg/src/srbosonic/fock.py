"""Truncated Fock-space numerics for single-mode Gaussian states.

Quadrature convention: q = (a + a†)/√2, p = (a − a†)/(i√2), so the vacuum
variance is 1/2 in each quadrature.  Entropies are in bits.

Displacement and squeeze unitaries are exponentials of the truncated
generator.  The truncated generator is exactly anti-Hermitian, so the
exponential is unitary on the retained block to machine precision; what
truncation actually degrades is the fidelity of the represented
operation.  That is guarded where it matters: ``gaussian_to_fock``
refuses to return a state whose first or second moments miss the request
by more than 1e-6, and callers grow the cutoff until it stops
complaining (``converged_fock_density`` automates this).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .errors import CutoffError, DomainError

__all__ = [
    "FockOperator",
    "FockDensity",
    "GaussianStateOneMode",
    "ladder",
    "displacement_op",
    "squeeze_op",
    "thermal_state",
    "symplectic_eigenvalue",
    "suggest_cutoff",
    "gaussian_to_fock",
    "converged_fock_density",
    "von_neumann_entropy",
    "gaussian_entropy",
    "MAX_CUTOFF",
]

UNITARITY_TOL = 1e-8
THERMAL_TAIL_TOL = 1e-12
TRACE_DEFICIT_TOL = 1e-8
MOMENT_TOL = 1e-6
ENTROPY_CLIP = 1e-14
CUTOFF_GROWTH = 1.25
MAX_CUTOFF = 4096


def _validate_dim(dim) -> int:
    if isinstance(dim, bool) or not isinstance(dim, (int, np.integer)):
        raise DomainError(f"cutoff dimension must be an integer, got {dim!r}")
    dim = int(dim)
    if dim < 2:
        raise DomainError(f"cutoff dimension must be >= 2, got {dim}")
    return dim


def _square_complex(entries, dim: int, what: str) -> np.ndarray:
    arr = np.array(entries, dtype=complex, copy=True)
    if arr.shape != (dim, dim):
        raise DomainError(f"{what} entries must be a {dim}x{dim} matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr.real)) or not np.all(np.isfinite(arr.imag)):
        raise DomainError(f"{what} entries must be finite")
    return arr


@dataclass(frozen=True, eq=False)
class FockOperator:
    """A dim x dim complex matrix acting on the truncated number basis."""

    dim: int
    entries: np.ndarray

    def __post_init__(self) -> None:
        dim = _validate_dim(self.dim)
        arr = _square_complex(self.entries, dim, "operator")
        arr.setflags(write=False)
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "entries", arr)


@dataclass(frozen=True, eq=False)
class FockDensity:
    """A density matrix on the truncated number basis.

    Construction validates Hermiticity (to 1e-12), trace within a small
    window of 1, and spectrum above -1e-10.  The stored matrix is the
    Hermitian part of the input and is read-only.
    """

    dim: int
    entries: np.ndarray

    def __post_init__(self) -> None:
        dim = _validate_dim(self.dim)
        arr = _square_complex(self.entries, dim, "density")
        herm_defect = float(np.max(np.abs(arr - arr.conj().T)))
        if herm_defect > 1e-12:
            raise DomainError(f"density matrix must be Hermitian, defect {herm_defect:.3e}")
        arr = 0.5 * (arr + arr.conj().T)
        trace = float(np.trace(arr).real)
        if not (1.0 - 1e-6 <= trace <= 1.0 + 1e-9):
            raise DomainError(f"density trace must be 1 up to truncation deficit, got {trace!r}")
        lo = float(np.linalg.eigvalsh(arr)[0])
        if lo < -1e-10:
            raise DomainError(f"density matrix has negative eigenvalue {lo:.3e}")
        arr.setflags(write=False)
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "entries", arr)


@dataclass(frozen=True, eq=False)
class GaussianStateOneMode:
    """First and second moments of a one-mode Gaussian state.

    mean is (q̄, p̄); cov is the 2x2 symmetric covariance matrix of
    (q, p) with vacuum = diag(1/2, 1/2).  det(cov) >= 1/4 is required.
    """

    mean: tuple
    cov: np.ndarray

    def __post_init__(self) -> None:
        try:
            mean = tuple(float(v) for v in self.mean)
        except (TypeError, ValueError) as exc:
            raise DomainError(f"mean must be a real pair, got {self.mean!r}") from exc
        if len(mean) != 2 or not all(math.isfinite(v) for v in mean):
            raise DomainError(f"mean must be a finite real pair, got {self.mean!r}")
        cov = np.array(self.cov, dtype=float)
        if cov.shape != (2, 2):
            raise DomainError(f"cov must be 2x2, got shape {cov.shape}")
        if not np.all(np.isfinite(cov)):
            raise DomainError("cov must be finite")
        if abs(cov[0, 1] - cov[1, 0]) > 1e-12:
            raise DomainError(f"cov must be symmetric, off-diagonal gap {cov[0, 1] - cov[1, 0]:.3e}")
        cov = 0.5 * (cov + cov.T)
        det = cov[0, 0] * cov[1, 1] - cov[0, 1] * cov[1, 0]
        if cov[0, 0] <= 0.0 or det < 0.25 - 1e-12:
            raise DomainError(
                f"cov violates the uncertainty relation: det {det!r} must be >= 1/4"
            )
        cov.setflags(write=False)
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", cov)


def _ladder_arrays(dim: int) -> tuple[np.ndarray, np.ndarray]:
    n = np.arange(1, dim)
    a = np.zeros((dim, dim), dtype=complex)
    a[n - 1, n] = np.sqrt(n)
    return a, a.conj().T


def ladder(dim: int) -> tuple[FockOperator, FockOperator]:
    """Annihilation and creation operators: a[n-1, n] = √n, a† its adjoint."""
    dim = _validate_dim(dim)
    a, adag = _ladder_arrays(dim)
    return FockOperator(dim, a), FockOperator(dim, adag)


def _unitary_from_generator(gen: np.ndarray, dim: int, what: str) -> np.ndarray:
    u = expm(gen)
    defect = float(np.max(np.abs(u.conj().T @ u - np.eye(dim))))
    if defect > UNITARITY_TOL:
        raise CutoffError(
            f"{what} at cutoff {dim} lost unitarity: defect {defect:.3e} exceeds {UNITARITY_TOL:g}"
        )
    return u


def displacement_op(beta: complex, dim: int) -> FockOperator:
    """exp(β a† − β* a) on the truncated basis.

    Unitarity on the retained block is checked to 1e-8; a failure means
    the cutoff is too small for this β.
    """
    dim = _validate_dim(dim)
    beta = complex(beta)
    if not (math.isfinite(beta.real) and math.isfinite(beta.imag)):
        raise DomainError(f"displacement amplitude must be finite, got {beta!r}")
    a, adag = _ladder_arrays(dim)
    gen = beta * adag - np.conjugate(beta) * a
    return FockOperator(dim, _unitary_from_generator(gen, dim, "displacement"))


def squeeze_op(r: float, dim: int) -> FockOperator:
    """exp((r/2)(a² − a†²)): positive r shrinks the position variance.

    S(r)|0⟩ has position variance e^{-2r}/2.  Same unitarity guard as
    displacement_op.
    """
    dim = _validate_dim(dim)
    r = float(r)
    if not math.isfinite(r):
        raise DomainError(f"squeezing parameter must be finite, got {r!r}")
    a, adag = _ladder_arrays(dim)
    gen = 0.5 * r * (a @ a - adag @ adag)
    return FockOperator(dim, _unitary_from_generator(gen, dim, "squeeze"))


def thermal_state(nbar: float, dim: int) -> FockDensity:
    """Diagonal geometric (thermal) state with mean photon number nbar.

    The discarded tail mass ratio (nbar/(nbar+1))^dim must be at most
    1e-12, else CutoffError; the retained block is renormalized.
    """
    dim = _validate_dim(dim)
    nbar = float(nbar)
    if not math.isfinite(nbar) or nbar < 0.0:
        raise DomainError(f"mean photon number must be finite and >= 0, got {nbar!r}")
    weights = np.zeros(dim)
    if nbar == 0.0:
        weights[0] = 1.0
    else:
        ratio = nbar / (nbar + 1.0)
        tail = ratio**dim
        if tail > THERMAL_TAIL_TOL:
            raise CutoffError(
                f"thermal tail {tail:.3e} at cutoff {dim} exceeds {THERMAL_TAIL_TOL:g}"
            )
        weights = ratio ** np.arange(dim) / (nbar + 1.0)
        weights /= weights.sum()
    return FockDensity(dim, np.diag(weights.astype(complex)))


def symplectic_eigenvalue(g: GaussianStateOneMode) -> float:
    """√det(cov); equals 1/2 for pure states, nbar + 1/2 for thermal."""
    cov = g.cov
    det = cov[0, 0] * cov[1, 1] - cov[0, 1] * cov[1, 0]
    return math.sqrt(max(det, 0.25))


def suggest_cutoff(g: GaussianStateOneMode) -> int:
    """Starting cutoff for gaussian_to_fock: 20 + 10|mean|² + 20ν, rounded up."""
    nu = symplectic_eigenvalue(g)
    energy = g.mean[0] ** 2 + g.mean[1] ** 2
    return int(math.ceil(20.0 + 10.0 * energy + 20.0 * nu))


def _moment_defect(rho: np.ndarray, g: GaussianStateOneMode, a: np.ndarray, adag: np.ndarray) -> float:
    rt2 = math.sqrt(2.0)
    q = (a + adag) / rt2
    p = -1j * (a - adag) / rt2

    def tr(op: np.ndarray) -> float:
        return float(np.einsum("ij,ji->", rho, op).real)

    mean_q = tr(q)
    mean_p = tr(p)
    var_q = tr(q @ q) - mean_q * mean_q
    var_p = tr(p @ p) - mean_p * mean_p
    cov_qp = 0.5 * tr(q @ p + p @ q) - mean_q * mean_p
    return max(
        abs(mean_q - g.mean[0]),
        abs(mean_p - g.mean[1]),
        abs(var_q - g.cov[0, 0]),
        abs(var_p - g.cov[1, 1]),
        abs(cov_qp - g.cov[0, 1]),
    )


def gaussian_to_fock(g: GaussianStateOneMode, dim: int) -> FockDensity:
    """Fock-basis density matrix with the requested Gaussian moments.

    One-mode synthesis in closed form: a thermal core at the symplectic
    eigenvalue, the rotated squeeze that whitens cov, then the
    displacement for the mean.  The result must reproduce the requested
    first and second moments within 1e-6 and keep trace deficit within
    1e-8, else CutoffError: the cutoff is too small for this state.
    """
    dim = _validate_dim(dim)
    nu = symplectic_eigenvalue(g)
    rho = thermal_state(nu - 0.5, dim).entries
    a, adag = _ladder_arrays(dim)
    m = np.array(g.cov) / nu
    eigvals, eigvecs = np.linalg.eigh(m)
    s = 0.25 * math.log(eigvals[1] / eigvals[0])
    if s > 1e-14:
        # the small-eigenvalue direction of cov is the squeezed axis
        phi = math.atan2(eigvecs[1, 0], eigvecs[0, 0])
        xi = s * complex(math.cos(2.0 * phi), math.sin(2.0 * phi))
        gen = 0.5 * (np.conjugate(xi) * (a @ a) - xi * (adag @ adag))
        u = _unitary_from_generator(gen, dim, "squeeze")
        rho = u @ rho @ u.conj().T
    delta = complex(g.mean[0], g.mean[1]) / math.sqrt(2.0)
    if delta != 0:
        gen = delta * adag - np.conjugate(delta) * a
        u = _unitary_from_generator(gen, dim, "displacement")
        rho = u @ rho @ u.conj().T
    rho = 0.5 * (rho + rho.conj().T)
    deficit = 1.0 - float(np.trace(rho).real)
    if deficit > TRACE_DEFICIT_TOL:
        raise CutoffError(
            f"trace deficit {deficit:.3e} at cutoff {dim} exceeds {TRACE_DEFICIT_TOL:g}"
        )
    worst = _moment_defect(rho, g, a, adag)
    if worst > MOMENT_TOL:
        raise CutoffError(
            f"moments off by {worst:.3e} at cutoff {dim}; the state needs a larger basis"
        )
    return FockDensity(dim, rho)


def converged_fock_density(g: GaussianStateOneMode, *, entropy_tol: float = 1e-6,
                           max_dim: int = MAX_CUTOFF) -> FockDensity:
    """gaussian_to_fock at a cutoff grown 25% at a time until the entropy settles.

    Convergence means one further 25% step moves the entropy by at most
    entropy_tol; the larger build is returned.  Cutoffs that fail the
    internal moment or tail guards are skipped over.
    """
    dim = suggest_cutoff(g)
    prev_entropy = None
    while dim <= max_dim:
        try:
            rho = gaussian_to_fock(g, dim)
        except CutoffError:
            prev_entropy = None
            dim = int(math.ceil(dim * CUTOFF_GROWTH))
            continue
        entropy = von_neumann_entropy(rho)
        if prev_entropy is not None and abs(entropy - prev_entropy) <= entropy_tol:
            return rho
        prev_entropy = entropy
        dim = int(math.ceil(dim * CUTOFF_GROWTH))
    raise CutoffError(f"no converged cutoff at or below {max_dim}")


def von_neumann_entropy(rho: FockDensity) -> float:
    """−Σ λ log₂ λ over the spectrum, eigenvalues below 1e-14 dropped."""
    lam = np.linalg.eigvalsh(rho.entries)
    lam = lam[lam > ENTROPY_CLIP]
    return max(0.0, float(-(lam * np.log2(lam)).sum()))


def gaussian_entropy(g: GaussianStateOneMode) -> float:
    """Closed-form entropy of a one-mode Gaussian state, in bits.

    (ν+1/2)log₂(ν+1/2) − (ν−1/2)log₂(ν−1/2) with ν = √det(cov); the
    pure-state limit ν = 1/2 gives 0.
    """
    nu = symplectic_eigenvalue(g)
    hi = nu + 0.5
    lo = nu - 0.5
    entropy = hi * math.log2(hi)
    if lo > 0.0:
        entropy -= lo * math.log2(lo)
    return max(0.0, entropy)
