"""Brute-force oracle in truncated Fock space.

Everything the closed-form pipeline computes is re-derived here by dense/sparse
linear algebra on photon-number tensors: squeezers and beam splitters as exact
unitaries of the truncated generators (block-diagonalized by their conserved
quantity), loss channels as Kraus maps, detectors as diagonal POVM weights,
characteristic functions as displacement-operator traces.  Intended for
desk-scale validation, not performance.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import sparse
from scipy.linalg import expm
from scipy.special import eval_genlaguerre, gammaln

from .errors import CutoffTooSmallError, DegeneratePostselectionError
from .resources import SchemeConfig
from .symplectic import SqueezeParam

DEFAULT_LEAK_TOL = 1e-8

_unitary_cache: dict = {}


@dataclass
class FockTensor:
    """Pure-state amplitude tensor indexed by photon numbers, one axis per mode.

    `leak` accumulates the squared-norm deficits incurred by truncated
    squeezing operations; it is diagnostic and never renormalized away.
    """

    cutoffs: tuple[int, ...]
    amps: np.ndarray
    leak: float = 0.0

    def __post_init__(self):
        expected = tuple(c + 1 for c in self.cutoffs)
        if self.amps.shape != expected:
            raise ValueError(f"amplitude shape {self.amps.shape} != {expected}")

    @property
    def n_modes(self) -> int:
        return len(self.cutoffs)

    def norm_squared(self) -> float:
        return float(np.vdot(self.amps, self.amps).real)


@dataclass
class FockDensity:
    """Two-mode density operator in the product Fock basis."""

    cutoffs: tuple[int, int]
    matrix: np.ndarray

    def __post_init__(self):
        d = (self.cutoffs[0] + 1) * (self.cutoffs[1] + 1)
        if self.matrix.shape != (d, d):
            raise ValueError("density matrix shape mismatch")

    def trace(self) -> float:
        return float(np.trace(self.matrix).real)

    def normalized(self) -> "FockDensity":
        return FockDensity(self.cutoffs, self.matrix / np.trace(self.matrix))

    def validate(self, herm_tol: float = 1e-10, eig_floor: float = -1e-9) -> None:
        if np.max(np.abs(self.matrix - self.matrix.conj().T)) > herm_tol:
            raise ValueError("density matrix is not Hermitian")
        if np.linalg.eigvalsh(self.matrix).min() < eig_floor:
            raise ValueError("density matrix has a negative eigenvalue")

    def as_tensor(self) -> np.ndarray:
        d0, d1 = self.cutoffs[0] + 1, self.cutoffs[1] + 1
        return self.matrix.reshape(d0, d1, d0, d1)


def vacuum_state(cutoffs: Sequence[int]) -> FockTensor:
    amps = np.zeros(tuple(c + 1 for c in cutoffs), dtype=complex)
    amps[(0,) * len(cutoffs)] = 1.0
    return FockTensor(tuple(cutoffs), amps)


def basis_state(cutoffs: Sequence[int], occupations: Sequence[int]) -> FockTensor:
    amps = np.zeros(tuple(c + 1 for c in cutoffs), dtype=complex)
    amps[tuple(occupations)] = 1.0
    return FockTensor(tuple(cutoffs), amps)


def annihilator(dim: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, dim)), 1).astype(complex)


# ---------------------------------------------------------------------------
# pair unitaries, block-diagonalized by their conserved quantity
# ---------------------------------------------------------------------------


def two_mode_squeeze_operator(p: SqueezeParam, dims: tuple[int, int]) -> sparse.csr_matrix:
    """exp(-z adag_i adag_j + conj(z) a_i a_j) on the truncated pair space.

    The generator conserves n_i - n_j, so the exponential is taken block by
    block; the result is exactly unitary on the truncated space.
    """
    key = ("sq", round(p.amplitude, 14), round(p.phase % (2 * np.pi), 14), dims)
    if key in _unitary_cache:
        return _unitary_cache[key]
    d1, d2 = dims
    z = p.amplitude * np.exp(1j * p.phase)
    rows, cols, vals = [], [], []
    for q in range(-(d2 - 1), d1):
        if q >= 0:
            n2s = np.arange(0, min(d2, d1 - q))
            n1s = n2s + q
        else:
            n1s = np.arange(0, min(d1, d2 + q))
            n2s = n1s - q
        size = len(n1s)
        if size == 0:
            continue
        G = np.zeros((size, size), dtype=complex)
        for t in range(size - 1):
            amp = -z * np.sqrt((n1s[t] + 1.0) * (n2s[t] + 1.0))
            G[t + 1, t] = amp
            G[t, t + 1] = -np.conj(amp)
        U = expm(G) if size > 1 else np.ones((1, 1), dtype=complex)
        idx = n1s * d2 + n2s
        for a in range(size):
            for b in range(size):
                if U[a, b] != 0.0:
                    rows.append(idx[a])
                    cols.append(idx[b])
                    vals.append(U[a, b])
    D = d1 * d2
    out = sparse.csr_matrix((vals, (rows, cols)), shape=(D, D))
    _unitary_cache[key] = out
    return out


def beam_splitter_operator(T: float, dims: tuple[int, int]) -> sparse.csr_matrix:
    """exp(kappa (adag_l a_k - a_l adag_k)) with tan(kappa) = sqrt((1-T)/T).

    Photon-number conserving, hence exactly unitary and leak-free on the
    truncated pair space.
    """
    if not 0.0 <= T <= 1.0:
        raise ValueError("transmissivity must lie in [0, 1]")
    key = ("bs", round(T, 14), dims)
    if key in _unitary_cache:
        return _unitary_cache[key]
    d1, d2 = dims
    kappa = np.arctan2(np.sqrt(1.0 - T), np.sqrt(T))
    rows, cols, vals = [], [], []
    for N in range(d1 + d2 - 1):
        n1s = np.arange(max(0, N - d2 + 1), min(N, d1 - 1) + 1)
        n2s = N - n1s
        size = len(n1s)
        if size == 0:
            continue
        G = np.zeros((size, size), dtype=complex)
        for t in range(size - 1):
            # raising n1 by one lowers n2 by one within the block
            amp = kappa * np.sqrt((n1s[t] + 1.0) * n2s[t])
            G[t + 1, t] = amp
            G[t, t + 1] = -amp
        U = expm(G) if size > 1 else np.ones((1, 1), dtype=complex)
        idx = n1s * d2 + n2s
        for a in range(size):
            for b in range(size):
                if U[a, b] != 0.0:
                    rows.append(idx[a])
                    cols.append(idx[b])
                    vals.append(U[a, b])
    D = d1 * d2
    out = sparse.csr_matrix((vals, (rows, cols)), shape=(D, D))
    _unitary_cache[key] = out
    return out


def _apply_pair_operator(amps: np.ndarray, modes: tuple[int, int],
                         op: sparse.spmatrix, out_dims: tuple[int, int]) -> np.ndarray:
    i, j = modes
    x = np.moveaxis(amps, (i, j), (0, 1))
    lead = x.shape[:2]
    rest = x.shape[2:]
    y = op @ x.reshape(lead[0] * lead[1], -1)
    y = y.reshape(out_dims[0], out_dims[1], *rest)
    return np.moveaxis(y, (0, 1), (i, j))


def apply_two_mode_squeeze(state: FockTensor, modes: tuple[int, int],
                           p: SqueezeParam, leak_tol: float = DEFAULT_LEAK_TOL,
                           pad: int | None = None) -> FockTensor:
    """Apply the two-mode squeezer; measure the norm leaked above the cutoffs.

    The operator is exponentiated on an internally padded space and the result
    projected back, so the reported deficit is the actual squared-norm mass
    pushed beyond the requested cutoffs.  The state is not renormalized.
    """
    i, j = modes
    ci, cj = state.cutoffs[i], state.cutoffs[j]
    if pad is None:
        pad = max(8, max(ci, cj) // 2)
    padded = list(state.cutoffs)
    padded[i] += pad
    padded[j] += pad
    big = np.zeros(tuple(c + 1 for c in padded), dtype=complex)
    big[tuple(slice(0, c + 1) for c in state.cutoffs)] = state.amps
    U = two_mode_squeeze_operator(p, (padded[i] + 1, padded[j] + 1))
    big = _apply_pair_operator(big, modes, U, (padded[i] + 1, padded[j] + 1))
    before = float(np.vdot(big, big).real)
    small = big[tuple(slice(0, c + 1) for c in state.cutoffs)].copy()
    after = float(np.vdot(small, small).real)
    deficit = before - after
    if deficit > leak_tol:
        raise CutoffTooSmallError(
            f"squeezing leaked {deficit:.3e} above cutoffs {state.cutoffs}",
            deficit=deficit)
    return FockTensor(state.cutoffs, small, leak=state.leak + deficit)


def apply_beam_splitter(state: FockTensor, modes: tuple[int, int],
                        T: float) -> FockTensor:
    i, j = modes
    U = beam_splitter_operator(T, (state.cutoffs[i] + 1, state.cutoffs[j] + 1))
    amps = _apply_pair_operator(state.amps, modes, U,
                                (state.cutoffs[i] + 1, state.cutoffs[j] + 1))
    return FockTensor(state.cutoffs, amps, leak=state.leak)


# ---------------------------------------------------------------------------
# loss channels
# ---------------------------------------------------------------------------


def loss_kraus_operators(T: float, dim: int) -> list[np.ndarray]:
    """K_m = sqrt((1-T)^m / m!) T^(n/2) a^m for m = 0..dim-1."""
    if not 0.0 < T <= 1.0:
        raise ValueError("loss transmissivity must lie in (0, 1]")
    a = annihilator(dim)
    t_half = np.diag(T ** (0.5 * np.arange(dim))).astype(complex)
    ops = []
    a_pow = np.eye(dim, dtype=complex)
    for m in range(dim):
        if m > 0:
            a_pow = a_pow @ a
        w = np.exp(0.5 * (m * np.log(1.0 - T) - gammaln(m + 1))) if T < 1.0 else (
            1.0 if m == 0 else 0.0)
        if w == 0.0:
            continue
        ops.append(w * (t_half @ a_pow))
    return ops


def _apply_single_mode_matrix(arr: np.ndarray, axis: int, M: np.ndarray) -> np.ndarray:
    return np.moveaxis(np.tensordot(M, arr, axes=(1, axis)), 0, axis)


def loss_kraus(obj, mode: int, T: float) -> FockDensity:
    """Loss channel on one mode of a two-mode pure state or density operator."""
    if isinstance(obj, FockTensor):
        if obj.n_modes != 2:
            raise ValueError("loss_kraus expects a two-mode object")
        rho = np.einsum("ab,cd->abcd", obj.amps, obj.amps.conj())
        cutoffs = obj.cutoffs
    else:
        rho = obj.as_tensor()
        cutoffs = obj.cutoffs
    dim = cutoffs[mode] + 1
    out = np.zeros_like(rho)
    for K in loss_kraus_operators(T, dim):
        tmp = _apply_single_mode_matrix(rho, mode, K)
        out += _apply_single_mode_matrix(tmp, mode + 2, K.conj())
    d = (cutoffs[0] + 1) * (cutoffs[1] + 1)
    return FockDensity(tuple(cutoffs), out.reshape(d, d))


def loss_via_ancilla(state: FockTensor, mode: int, T: float) -> FockDensity:
    """Cross-check route: couple the mode to a vacuum ancilla and trace it out."""
    if state.n_modes != 2:
        raise ValueError("loss_via_ancilla expects a two-mode state")
    cut = state.cutoffs[mode]
    ext = FockTensor(state.cutoffs + (cut,),
                     np.zeros(tuple(c + 1 for c in state.cutoffs) + (cut + 1,),
                              dtype=complex))
    ext.amps[..., 0] = state.amps
    mixed = apply_beam_splitter(ext, (mode, 2), T)
    rho = np.einsum("abj,cdj->abcd", mixed.amps, mixed.amps.conj())
    d = (state.cutoffs[0] + 1) * (state.cutoffs[1] + 1)
    return FockDensity(state.cutoffs, rho.reshape(d, d))


# ---------------------------------------------------------------------------
# conditioning
# ---------------------------------------------------------------------------


def project_single_photon(state: FockTensor,
                          modes: tuple[int, int] = (2, 3)) -> tuple[FockTensor, float]:
    """Contract the named modes against <1,1|; return overlap state and norm^2."""
    if state.n_modes != 4:
        raise ValueError("project_single_photon expects a four-mode state")
    idx = [slice(None)] * 4
    idx[modes[0]] = 1
    idx[modes[1]] = 1
    amps = state.amps[tuple(idx)].copy()
    norm2 = float(np.vdot(amps, amps).real)
    if norm2 <= 1e-300:
        raise DegeneratePostselectionError("single-photon overlap has zero norm")
    keep = tuple(c for k, c in enumerate(state.cutoffs) if k not in modes)
    return FockTensor(keep, amps, leak=state.leak), norm2


def on_off_weights(eta: float, dim: int) -> np.ndarray:
    """Diagonal weights of the on-POVM, 1 - (1 - eta)^n."""
    if not 0.0 < eta <= 1.0:
        raise ValueError("detector efficiency must lie in (0, 1]")
    return 1.0 - (1.0 - eta) ** np.arange(dim)


def lossy_projector_weights(T: float, dim: int) -> np.ndarray:
    """Diagonal weights of a single-photon projector preceded by loss T:
    the probability n T (1-T)^(n-1) that exactly one of n photons survives."""
    n = np.arange(dim)
    if T >= 1.0:
        return (n == 1).astype(float)
    return n * T * (1.0 - T) ** np.clip(n - 1, 0, None)


def condition_with_diagonal_weights(state: FockTensor, w3: np.ndarray,
                                    w4: np.ndarray,
                                    modes: tuple[int, int] = (2, 3)
                                    ) -> tuple[FockDensity, float]:
    """Condition a pure four-mode state on a diagonal POVM of each named mode.

    Returns the normalized reduced density operator on the other two modes and
    the success probability Tr[rho (W3 x W4)].
    """
    if state.n_modes != 4:
        raise ValueError("conditioning expects a four-mode state")
    if modes != (2, 3):
        raise ValueError("detector modes must be the trailing pair")
    amps = state.amps
    success = float(np.einsum("abkl,abkl,k,l->", amps, amps.conj(), w3, w4).real)
    if success <= 1e-300:
        raise DegeneratePostselectionError(
            f"conditioning probability {success:.3e} is degenerate")
    rho = np.einsum("abkl,cdkl,k,l->abcd", amps, amps.conj(), w3, w4,
                    optimize=True)
    d = (state.cutoffs[0] + 1) * (state.cutoffs[1] + 1)
    return FockDensity(state.cutoffs[:2], rho.reshape(d, d) / success), success


def povm_condition(obj, eta3: float, eta4: float) -> tuple[FockDensity, float]:
    """On/off-POVM conditioning of the detector modes (modes 3 and 4).

    Accepts a pure four-mode FockTensor or a small four-mode density tensor of
    shape (d1, d2, d3, d4, d1, d2, d3, d4).
    """
    if isinstance(obj, FockTensor):
        w3 = on_off_weights(eta3, obj.cutoffs[2] + 1)
        w4 = on_off_weights(eta4, obj.cutoffs[3] + 1)
        return condition_with_diagonal_weights(obj, w3, w4)
    rho = np.asarray(obj)
    dims = rho.shape[:4]
    w3 = on_off_weights(eta3, dims[2])
    w4 = on_off_weights(eta4, dims[3])
    success = float(np.einsum("abklabkl,k,l->", rho, w3, w4).real)
    if success <= 1e-300:
        raise DegeneratePostselectionError(
            f"conditioning probability {success:.3e} is degenerate")
    red = np.einsum("abklcdkl,k,l->abcd", rho, w3, w4)
    d = dims[0] * dims[1]
    cutoffs = (dims[0] - 1, dims[1] - 1)
    return FockDensity(cutoffs, red.reshape(d, d) / success), success


# ---------------------------------------------------------------------------
# characteristic functions
# ---------------------------------------------------------------------------


def displacement_matrix(alpha: complex, cutoff: int) -> np.ndarray:
    """Matrix elements <m|D(alpha)|n> via the associated-Laguerre closed form."""
    dim = cutoff + 1
    out = np.empty((dim, dim), dtype=complex)
    x = abs(alpha) ** 2
    damp = np.exp(-0.5 * x)
    lg = gammaln(np.arange(dim) + 1)
    for m in range(dim):
        for n in range(dim):
            if m >= n:
                out[m, n] = (np.exp(0.5 * (lg[n] - lg[m])) * alpha ** (m - n)
                             * damp * eval_genlaguerre(n, m - n, x))
            else:
                out[m, n] = (np.exp(0.5 * (lg[m] - lg[n]))
                             * (-np.conj(alpha)) ** (n - m)
                             * damp * eval_genlaguerre(m, n - m, x))
    return out


def _displacement_batch(alphas: np.ndarray, cutoff: int) -> np.ndarray:
    """Stack of displacement matrices for a 1-D array of amplitudes."""
    dim = cutoff + 1
    B = len(alphas)
    out = np.empty((B, dim, dim), dtype=complex)
    x = np.abs(alphas) ** 2
    damp = np.exp(-0.5 * x)
    lg = gammaln(np.arange(dim) + 1)
    for m in range(dim):
        for n in range(dim):
            if m >= n:
                out[:, m, n] = (np.exp(0.5 * (lg[n] - lg[m])) * alphas ** (m - n)
                                * damp * eval_genlaguerre(n, m - n, x))
            else:
                out[:, m, n] = (np.exp(0.5 * (lg[m] - lg[n]))
                                * (-np.conj(alphas)) ** (n - m)
                                * damp * eval_genlaguerre(m, n - m, x))
    return out


def char_function(rho: FockDensity, beta1: complex, beta2: complex) -> complex:
    """chi(b1, b2) = Tr[rho D1(b1) D2(b2)]."""
    D1 = displacement_matrix(beta1, rho.cutoffs[0])
    D2 = displacement_matrix(beta2, rho.cutoffs[1])
    t = rho.as_tensor()
    return complex(np.einsum("mnkl,km,ln->", t, D1, D2))


def char_function_state(state: FockTensor, beta1: complex, beta2: complex) -> complex:
    """<psi| D1(b1) D2(b2) |psi> for a two-mode pure state."""
    D1 = displacement_matrix(beta1, state.cutoffs[0])
    D2 = displacement_matrix(beta2, state.cutoffs[1])
    return complex(np.einsum("mn,mk,nl,kl->", state.amps.conj(), D1, D2, state.amps))


def char_function_batch(rho: FockDensity, betas1: np.ndarray,
                        betas2: np.ndarray) -> np.ndarray:
    """Vectorized chi over paired arrays of amplitudes."""
    betas1 = np.asarray(betas1, dtype=complex)
    betas2 = np.asarray(betas2, dtype=complex)
    D1 = _displacement_batch(betas1, rho.cutoffs[0])
    D2 = _displacement_batch(betas2, rho.cutoffs[1])
    d0, d1 = rho.cutoffs[0] + 1, rho.cutoffs[1] + 1
    t = rho.as_tensor()
    # contract mode 1 first: A[b, n, l] = sum_{m,k} D1[b,k,m] rho[m,n,k,l]
    A = np.einsum("bkm,mnkl->bnl", D1, t, optimize=True)
    return np.einsum("bnl,bln->b", A, D2, optimize=True)


# ---------------------------------------------------------------------------
# scheme oracle
# ---------------------------------------------------------------------------


def default_cutoff(amplitude: float) -> int:
    return 20 if amplitude <= 1.0 else 30


def scheme_proto_state(cfg: SchemeConfig, cutoff: int,
                       leak_tol: float = DEFAULT_LEAK_TOL) -> FockTensor:
    """Four-mode state after both squeezers and both mixing beam splitters."""
    state = vacuum_state((cutoff,) * 4)
    state = apply_two_mode_squeeze(state, (0, 1),
                                   SqueezeParam(cfg.r, cfg.phi_zeta), leak_tol)
    state = apply_two_mode_squeeze(state, (2, 3),
                                   SqueezeParam(cfg.s, cfg.phi_xi), leak_tol)
    state = apply_beam_splitter(state, (0, 2), cfg.T1)
    state = apply_beam_splitter(state, (1, 3), cfg.T2)
    return state


def _detector_weights(cfg: SchemeConfig, detector: str, dim: int) -> np.ndarray:
    lossy = cfg.T_loss < 1.0 and cfg.loss_on_detector_modes
    if detector == "ideal":
        if lossy:
            return lossy_projector_weights(cfg.T_loss, dim)
        n = np.arange(dim)
        return (n == 1).astype(float)
    eta3 = cfg.eta3 * (cfg.T_loss if lossy else 1.0)
    eta4 = cfg.eta4 * (cfg.T_loss if lossy else 1.0)
    return np.stack([on_off_weights(eta3, dim), on_off_weights(eta4, dim)])


def scheme_oracle(cfg: SchemeConfig, detector: str = "ideal",
                  cutoff: int | None = None,
                  leak_tol: float = DEFAULT_LEAK_TOL,
                  max_cutoff: int = 48) -> tuple[FockDensity, float]:
    """Conditioned two-mode density operator of the scheme, built in Fock space.

    Loss channels of equal transmissivity on every mode commute with the mixing
    beam splitters, so the detector-mode loss is folded into the diagonal POVM
    weights and the signal-mode loss is applied after conditioning; the
    restricted-loss configuration keeps the loss ahead of the beam splitters
    via an explicit Kraus ensemble.  Escalates the cutoff on leak violations.
    """
    if detector not in ("ideal", "on-off", "onoff"):
        raise ValueError(f"unknown detector kind {detector!r}")
    c = cutoff if cutoff is not None else (
        cfg.cutoff if cfg.cutoff is not None else default_cutoff(max(cfg.r, cfg.s)))
    while True:
        try:
            return _scheme_oracle_at(cfg, detector, c, leak_tol)
        except CutoffTooSmallError:
            nxt = int(np.ceil(c * 1.5))
            if nxt > max_cutoff:
                raise
            c = nxt


def _scheme_oracle_at(cfg: SchemeConfig, detector: str, cutoff: int,
                      leak_tol: float) -> tuple[FockDensity, float]:
    dim = cutoff + 1
    if cfg.T_loss < 1.0 and not cfg.loss_on_detector_modes:
        return _scheme_oracle_restricted_loss(cfg, detector, cutoff, leak_tol)
    state = scheme_proto_state(cfg, cutoff, leak_tol)
    w = _detector_weights(cfg, detector, dim)
    if detector == "ideal":
        rho, success = condition_with_diagonal_weights(state, w, w)
    else:
        rho, success = condition_with_diagonal_weights(state, w[0], w[1])
    if cfg.T_loss < 1.0:
        rho = loss_kraus(rho, 0, cfg.T_loss)
        rho = loss_kraus(rho, 1, cfg.T_loss)
        rho = rho.normalized()
    return rho, success


def _scheme_oracle_restricted_loss(cfg: SchemeConfig, detector: str, cutoff: int,
                                   leak_tol: float) -> tuple[FockDensity, float]:
    """Loss on the signal modes only, applied before the mixing beam splitters."""
    if cutoff > 16:
        raise ValueError("restricted-loss oracle is limited to small cutoffs")
    dim = cutoff + 1
    state = vacuum_state((cutoff,) * 4)
    state = apply_two_mode_squeeze(state, (0, 1),
                                   SqueezeParam(cfg.r, cfg.phi_zeta), leak_tol)
    state = apply_two_mode_squeeze(state, (2, 3),
                                   SqueezeParam(cfg.s, cfg.phi_xi), leak_tol)
    if detector == "ideal":
        n = np.arange(dim)
        w3 = w4 = (n == 1).astype(float)
    else:
        w3 = on_off_weights(cfg.eta3, dim)
        w4 = on_off_weights(cfg.eta4, dim)
    kraus = loss_kraus_operators(cfg.T_loss, dim)
    d2 = dim * dim
    rho_sum = np.zeros((d2, d2), dtype=complex)
    total = 0.0
    for K0 in kraus:
        branch0 = FockTensor(state.cutoffs,
                             _apply_single_mode_matrix(state.amps, 0, K0))
        for K1 in kraus:
            branch = FockTensor(state.cutoffs,
                                _apply_single_mode_matrix(branch0.amps, 1, K1))
            if branch.norm_squared() < 1e-28:
                continue
            branch = apply_beam_splitter(branch, (0, 2), cfg.T1)
            branch = apply_beam_splitter(branch, (1, 3), cfg.T2)
            try:
                rho_b, p_b = condition_with_diagonal_weights(branch, w3, w4)
            except DegeneratePostselectionError:
                continue
            rho_sum += p_b * rho_b.matrix
            total += p_b
    if total <= 1e-300:
        raise DegeneratePostselectionError("restricted-loss conditioning degenerate")
    return FockDensity((cutoff, cutoff), rho_sum / total), total


def theoretical_oracle(family: str, r: float, delta: float | None = None,
                       phase: float = np.pi, cutoff: int | None = None,
                       leak_tol: float = DEFAULT_LEAK_TOL) -> FockTensor:
    """Fock-space construction of the analytic two-mode resource families."""
    c = cutoff if cutoff is not None else default_cutoff(r)
    if family == "squeezed-bell":
        if delta is None:
            raise ValueError("squeezed-bell requires delta")
        bare = basis_state((c, c), (0, 0))
        bare.amps[0, 0] = np.cos(delta)
        bare.amps[1, 1] = np.sin(delta)
    elif family == "twin-beam":
        bare = vacuum_state((c, c))
    elif family == "squeezed-number":
        bare = basis_state((c, c), (1, 1))
    elif family in ("photon-subtracted", "photon-added"):
        sq = apply_two_mode_squeeze(vacuum_state((c, c)), (0, 1),
                                    SqueezeParam(r, phase), leak_tol)
        a = annihilator(c + 1)
        op = a if family == "photon-subtracted" else a.conj().T
        amps = _apply_single_mode_matrix(sq.amps, 0, op)
        amps = _apply_single_mode_matrix(amps, 1, op)
        nrm = np.linalg.norm(amps)
        if nrm < 1e-15:
            raise DegeneratePostselectionError("ladder action annihilated the state")
        return FockTensor((c, c), amps / nrm, leak=sq.leak)
    else:
        raise ValueError(f"unknown family {family!r}")
    return apply_two_mode_squeeze(bare, (0, 1), SqueezeParam(r, phase), leak_tol)
