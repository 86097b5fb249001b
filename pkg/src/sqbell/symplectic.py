"""Zero-mean Gaussian characteristic functions and their linear-optics evolution.

A GaussianChar stores the real symmetric exponent matrix S of
chi(v) = exp(-1/2 v^T S v) in the interleaved (Re, Im) coordinate order of
:mod:`sqbell.gauss_poly`.  Squeezers and beam splitters act as exact linear
variable substitutions; loss channels rescale a mode and add the environment
exponent.  The module ends in the four-mode source function feeding the
detector-conditioning stage.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from . import gauss_poly as gp
from .errors import DimensionMismatchError, PhysicalityError

if TYPE_CHECKING:
    from .resources import SchemeConfig


@dataclass(frozen=True)
class SqueezeParam:
    """Complex squeezing amplitude |z| e^{i phase} with nonnegative modulus."""

    amplitude: float
    phase: float = np.pi

    def __post_init__(self):
        if self.amplitude < 0:
            raise ValueError("squeezing amplitude must be nonnegative")


@dataclass(frozen=True)
class ChannelParam:
    """Loss-channel transmissivity and mean thermal occupation of the environment."""

    transmissivity: float
    thermal_occupation: float = 0.0

    def __post_init__(self):
        if not 0.0 < self.transmissivity <= 1.0:
            raise ValueError("transmissivity must lie in (0, 1]")
        if self.thermal_occupation < 0:
            raise ValueError("thermal occupation must be nonnegative")


class GaussianChar:
    """chi(v) = exp(-1/2 v^T S v) for a zero-mean n-mode Gaussian state."""

    __slots__ = ("n_modes", "exponent")

    def __init__(self, n_modes: int, exponent: np.ndarray):
        S = np.asarray(exponent, dtype=float)
        if S.shape != (2 * n_modes, 2 * n_modes):
            raise DimensionMismatchError("exponent matrix shape mismatch")
        if np.max(np.abs(S - S.T)) > 1e-10:
            raise PhysicalityError("exponent matrix is not symmetric")
        self.n_modes = n_modes
        self.exponent = 0.5 * (S + S.T)

    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.exponent).min())

    def to_polygauss(self) -> gp.PolyGaussFunction:
        return gp.PolyGaussFunction.gaussian(self.exponent)

    def evaluate(self, betas) -> complex:
        v = gp.complex_to_real(betas)
        return np.exp(-0.5 * v @ self.exponent @ v)

    def mean_photons(self, mode: int) -> float:
        """<a^dag a> of one mode, from the second derivatives of chi at zero."""
        S = self.exponent
        return 0.25 * (S[2 * mode, 2 * mode] + S[2 * mode + 1, 2 * mode + 1]) - 0.5

    def total_mean_photons(self) -> float:
        return sum(self.mean_photons(m) for m in range(self.n_modes))

    def quadrature_variances(self, mode: int) -> tuple[float, float]:
        """(Var X, Var Y) of one mode with X = (a + a^dag)/sqrt(2)."""
        S = self.exponent
        return (0.5 * S[2 * mode + 1, 2 * mode + 1], 0.5 * S[2 * mode, 2 * mode])


def vacuum_char(n_modes: int) -> GaussianChar:
    return GaussianChar(n_modes, np.eye(2 * n_modes))


def squeeze_matrix(p: SqueezeParam, modes: tuple[int, int], n_modes: int) -> np.ndarray:
    """Real linear map v -> v' realizing chi -> chi(v') for a two-mode squeezer.

    Each transformed amplitude is  b_i cosh|z| + conj(b_j) e^{i phase} sinh|z|.
    """
    i, j = modes
    c = np.cosh(p.amplitude)
    s = np.sinh(p.amplitude)
    cp, sp = np.cos(p.phase), np.sin(p.phase)
    L = np.eye(2 * n_modes)
    for a, b in ((i, j), (j, i)):
        L[2 * a, 2 * a] = c
        L[2 * a + 1, 2 * a + 1] = c
        L[2 * a, 2 * b] = s * cp
        L[2 * a, 2 * b + 1] = s * sp
        L[2 * a + 1, 2 * b] = s * sp
        L[2 * a + 1, 2 * b + 1] = -s * cp
    return L


def beam_splitter_matrix(modes: tuple[int, int], T: float, n_modes: int) -> np.ndarray:
    """Variable map of a beam splitter: b_k -> sqrt(T) b_k - sqrt(R) b_l on the
    first named mode and b_l -> sqrt(T) b_l + sqrt(R) b_k on the second."""
    if not 0.0 <= T <= 1.0:
        raise ValueError("transmissivity must lie in [0, 1]")
    k, l = modes
    rt, rr = np.sqrt(T), np.sqrt(1.0 - T)
    M = np.eye(2 * n_modes)
    for d in range(2):
        M[2 * k + d, 2 * k + d] = rt
        M[2 * k + d, 2 * l + d] = -rr
        M[2 * l + d, 2 * l + d] = rt
        M[2 * l + d, 2 * k + d] = rr
    return M


def apply_linear(chi: GaussianChar, L: np.ndarray) -> GaussianChar:
    return GaussianChar(chi.n_modes, L.T @ chi.exponent @ L)


def two_mode_squeezed_char(p: SqueezeParam, modes: tuple[int, int] = (0, 1),
                           n_modes: int = 2) -> GaussianChar:
    """Two-mode squeezed vacuum embedded in an n-mode vacuum background."""
    i, j = modes
    if i == j or not (0 <= i < n_modes and 0 <= j < n_modes):
        raise ValueError("squeezer needs two distinct modes in range")
    L = squeeze_matrix(p, modes, n_modes)
    return apply_linear(vacuum_char(n_modes), L)


def thermal_char(n_thermal: float, mode: int = 0, n_modes: int = 1) -> GaussianChar:
    """Single-mode thermal state, exponent (2 n + 1) on that mode's block."""
    if n_thermal < 0:
        raise ValueError("thermal occupation must be nonnegative")
    S = np.eye(2 * n_modes)
    S[2 * mode, 2 * mode] = 2.0 * n_thermal + 1.0
    S[2 * mode + 1, 2 * mode + 1] = 2.0 * n_thermal + 1.0
    return GaussianChar(n_modes, S)


def beam_splitter_substitute(f, modes: tuple[int, int], T: float):
    """Mix two modes of a GaussianChar or PolyGaussFunction; exact on both."""
    if isinstance(f, GaussianChar):
        M = beam_splitter_matrix(modes, T, f.n_modes)
        return apply_linear(f, M)
    M = beam_splitter_matrix(modes, T, f.n_vars // 2)
    return gp.substitute(f, M)


def loss_channel(chi: GaussianChar, mode: int, T_loss: float,
                 n_thermal: float = 0.0) -> GaussianChar:
    """Mix one mode with a (thermal) environment of transmissivity T_loss.

    chi'(b) = chi(sqrt(T) b on the mode) * exp(-1/2 (2 n + 1)(1 - T)|b_mode|^2).
    """
    if not 0.0 < T_loss <= 1.0:
        raise ValueError("loss transmissivity must lie in (0, 1]")
    if n_thermal < 0:
        raise ValueError("thermal occupation must be nonnegative")
    S = chi.exponent.copy()
    scale = np.ones(2 * chi.n_modes)
    scale[2 * mode] = scale[2 * mode + 1] = np.sqrt(T_loss)
    S = S * np.outer(scale, scale)
    add = (2.0 * n_thermal + 1.0) * (1.0 - T_loss)
    S[2 * mode, 2 * mode] += add
    S[2 * mode + 1, 2 * mode + 1] += add
    return GaussianChar(chi.n_modes, S)


def scheme_four_mode_char(cfg: "SchemeConfig") -> GaussianChar:
    """Source function of the generation scheme, modes ordered (1, 2, 3, 4).

    Two independent two-mode squeezers feed modes (1,2) and (3,4); per-mode
    loss is applied on the source beams, then the two mixing beam splitters
    couple (1,3) and (2,4).
    """
    chi = vacuum_char(4)
    chi = apply_linear(chi, squeeze_matrix(
        SqueezeParam(cfg.r, cfg.phi_zeta), (0, 1), 4))
    chi = apply_linear(chi, squeeze_matrix(
        SqueezeParam(cfg.s, cfg.phi_xi), (2, 3), 4))
    if cfg.T_loss < 1.0 or cfg.n_thermal > 0.0:
        lossy_modes = range(4) if cfg.loss_on_detector_modes else range(2)
        for mode in lossy_modes:
            chi = loss_channel(chi, mode, cfg.T_loss, cfg.n_thermal)
    chi = beam_splitter_substitute(chi, (0, 2), cfg.T1)
    chi = beam_splitter_substitute(chi, (1, 3), cfg.T2)
    return chi
