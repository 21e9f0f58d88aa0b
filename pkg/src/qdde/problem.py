"""Problem definition and field containers for the periodic drift-diffusion solver."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np


def _is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class DdeProblem:
    """A d-dimensional drift-diffusion problem on the periodic box [-L, L]^d.

    The density obeys dp/dt = sum_i [a dp/dx_i + D d2p/dx_i^2] and is
    discretised on n_x equally spaced points per axis with spacing 2L/n_x,
    advanced over n_t explicit steps of size T/n_t.
    """

    d: int = 1
    n_x: int = 32
    n_t: int = 100
    L: float = 20.0
    T: float = 10.0
    a: float = 0.2366
    D: float = 0.2455
    zeta: float = 1.0
    epsilon: float = 0.03
    x0: float = 2.0

    def __post_init__(self) -> None:
        if self.d < 1:
            raise ValueError(f"dimension must be >= 1, got {self.d}")
        if not _is_power_of_two(self.n_x) or self.n_x < 2:
            raise ValueError(f"n_x must be a power of two >= 2, got {self.n_x}")
        if self.n_t < 0:
            raise ValueError(f"n_t must be >= 0, got {self.n_t}")
        if self.L <= 0 or self.T < 0:
            raise ValueError("domain half-width L must be > 0 and horizon T >= 0")
        if self.D < 0:
            raise ValueError(f"diffusion coefficient must be >= 0, got {self.D}")
        if self.epsilon <= 0:
            raise ValueError(f"error target must be > 0, got {self.epsilon}")

    @property
    def dx(self) -> float:
        return 2.0 * self.L / self.n_x

    @property
    def dt(self) -> float:
        # n_t = 0 means "no evolution"; dt is only meaningful when stepping.
        return self.T / self.n_t if self.n_t > 0 else 0.0

    @property
    def qubits_per_axis(self) -> int:
        return int(math.log2(self.n_x))

    @property
    def state_qubits(self) -> int:
        """Qubits needed to index the full grid: d * log2(n_x)."""
        return self.d * self.qubits_per_axis

    @property
    def circuit_width(self) -> int:
        """Pipeline width: amplification flag + encoding flag + zeros + state."""
        return 2 * self.state_qubits + 2

    @property
    def stability_ratio(self) -> float:
        """Explicit-update diffusion number 2 d D dt / dx^2 (stable when <= 1)."""
        if self.n_t == 0:
            return 0.0
        return 2.0 * self.d * self.D * self.dt / self.dx**2

    def is_stable(self) -> bool:
        return self.stability_ratio <= 1.0

    def warn_if_unstable(self) -> None:
        if not self.is_stable():
            warnings.warn(
                f"explicit update is unstable: 2dD*dt/dx^2 = "
                f"{self.stability_ratio:.4f} > 1",
                RuntimeWarning,
                stacklevel=3,
            )

    def axis(self) -> np.ndarray:
        """Grid coordinates along one axis: x_j = -L + j*dx, j = 0..n_x-1."""
        return -self.L + self.dx * np.arange(self.n_x)

    def grid(self) -> list[np.ndarray]:
        """Meshgrid coordinate arrays for all d axes (indexing='ij')."""
        ax = self.axis()
        return list(np.meshgrid(*([ax] * self.d), indexing="ij"))

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.n_x,) * self.d

    @property
    def cell_volume(self) -> float:
        return self.dx**self.d


@dataclass
class GridField:
    """Real-valued field sampled on the problem grid."""

    problem: DdeProblem
    values: np.ndarray

    def __post_init__(self) -> None:
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != self.problem.shape:
            raise ValueError(
                f"field shape {self.values.shape} does not match grid "
                f"{self.problem.shape}"
            )

    @property
    def mass(self) -> float:
        """Riemann-sum integral of the field over the box."""
        return float(self.values.sum() * self.problem.cell_volume)

    def normalized(self) -> "GridField":
        """Rescale so the field integrates to one."""
        m = self.mass
        if m <= 0:
            raise ValueError("cannot normalize a field with non-positive mass")
        return GridField(self.problem, self.values / m)


@dataclass
class SpectralField:
    """Complex Fourier coefficients of a grid field."""

    problem: DdeProblem
    values: np.ndarray

    def __post_init__(self) -> None:
        self.values = np.asarray(self.values, dtype=complex)
        if self.values.shape != self.problem.shape:
            raise ValueError(
                f"coefficient shape {self.values.shape} does not match grid "
                f"{self.problem.shape}"
            )


@dataclass
class EigenSpectrum:
    """One-step update eigenvalues of the explicit operator, on the frequency grid."""

    problem: DdeProblem
    values: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        self.values = np.asarray(self.values, dtype=complex)
        if self.values.shape != self.problem.shape:
            raise ValueError("eigenvalue grid does not match problem grid")

    def powered(self, n_t: int | None = None) -> np.ndarray:
        """Eigenvalues of the n_t-step evolution."""
        steps = self.problem.n_t if n_t is None else n_t
        return self.values**steps

    @property
    def alpha(self) -> float:
        """Subnormalization bound: max |lambda_j^n_t| (1 for a stable scheme)."""
        return float(np.abs(self.powered()).max())
