"""Truncated Fock-space linear algebra for a two-level atom coupled to one cavity mode.

Conventions used everywhere in this package:

* atomic basis order is (g, e), i.e. index 0 = ground, 1 = excited, so a 2x2
  atomic density matrix has the ground-state population in the top-left entry;
* joint amplitudes are atom-major: the flat index of |a, n> is a*(n_max+1) + n,
  which keeps each doublet {|g, n+1>, |e, n>} at a fixed stride.

All operations are pure functions on immutable value objects; nothing in this
module holds shared mutable state.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import TailTooLarge

G, E = 0, 1

DEFAULT_N_MAX = 60
DEFAULT_TAIL_TOL = 1e-10


@dataclass(frozen=True)
class TruncationConfig:
    """Highest retained Fock level and the admissible discarded probability."""

    n_max: int = DEFAULT_N_MAX
    tail_tol: float = DEFAULT_TAIL_TOL

    def __post_init__(self):
        if self.n_max < 1:
            raise ValueError(f"n_max must be >= 1, got {self.n_max}")
        if not 0.0 < self.tail_tol < 1.0:
            raise ValueError(f"tail_tol must be in (0, 1), got {self.tail_tol}")

    @property
    def n_levels(self) -> int:
        return self.n_max + 1


def default_truncation(alpha: complex = 0.0,
                       tail_tol: float = DEFAULT_TAIL_TOL) -> TruncationConfig:
    """Default truncation, widened automatically for large coherent amplitudes.

    For mean photon numbers above 30 the stock n_max=60 would clip the
    Poissonian tail, so the cutoff is raised (with a warning) to keep the
    discarded probability below tail_tol.
    """
    mean = abs(alpha) ** 2
    n_max = DEFAULT_N_MAX
    if mean > 30.0:
        n_max = int(math.ceil(mean + 12.0 * math.sqrt(mean) + 25.0))
        warnings.warn(
            f"mean photon number {mean:.3g} > 30: raising n_max to {n_max}",
            stacklevel=2,
        )
    return TruncationConfig(n_max=n_max, tail_tol=tail_tol)


@dataclass(frozen=True)
class FieldVector:
    """Pure state of the cavity mode; amplitudes c_0 .. c_{n_max}.

    Branch states deliberately carry squared norm <= 1, so only an upper
    bound is enforced here.
    """

    amps: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amps, dtype=complex)
        object.__setattr__(self, "amps", amps)
        if amps.ndim != 1 or amps.size < 2:
            raise ValueError("FieldVector needs a 1-d amplitude array, n_max >= 1")
        n2 = float(np.vdot(amps, amps).real)
        if n2 > 1.0 + 1e-12:
            raise ValueError(f"squared norm {n2} exceeds 1")

    @property
    def n_levels(self) -> int:
        return self.amps.size

    def norm2(self) -> float:
        return float(np.vdot(self.amps, self.amps).real)

    def overlap(self, other: "FieldVector") -> complex:
        """<self|other> with the physics (conjugate-first) convention."""
        return complex(np.vdot(self.amps, other.amps))


@dataclass(frozen=True)
class FieldDensity:
    """Density operator of the cavity mode on the kept levels."""

    mat: np.ndarray

    def __post_init__(self):
        mat = np.asarray(self.mat, dtype=complex)
        object.__setattr__(self, "mat", mat)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValueError("FieldDensity must be a square matrix")

    @property
    def n_levels(self) -> int:
        return self.mat.shape[0]

    def trace(self) -> float:
        return float(np.trace(self.mat).real)


@dataclass(frozen=True)
class JointVector:
    """Pure state of atom (x) field; amps has shape (2, n_levels), axis 0 = (g, e)."""

    amps: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amps, dtype=complex)
        object.__setattr__(self, "amps", amps)
        if amps.ndim != 2 or amps.shape[0] != 2:
            raise ValueError("JointVector amps must have shape (2, n_levels)")

    @property
    def n_levels(self) -> int:
        return self.amps.shape[1]

    def norm2(self) -> float:
        return float(np.vdot(self.amps, self.amps).real)

    def flat(self) -> np.ndarray:
        """Atom-major flattening: index of |a, n> is a*n_levels + n."""
        return self.amps.reshape(-1)

    def to_density(self) -> "JointDensity":
        v = self.flat()
        return JointDensity(np.outer(v, v.conj()))


@dataclass(frozen=True)
class JointDensity:
    """Density operator of atom (x) field, atom-major index order."""

    mat: np.ndarray

    def __post_init__(self):
        mat = np.asarray(self.mat, dtype=complex)
        object.__setattr__(self, "mat", mat)
        d = mat.shape[0]
        if mat.ndim != 2 or mat.shape != (d, d) or d % 2 != 0 or d < 4:
            raise ValueError("JointDensity must be square with even dimension >= 4")

    @property
    def n_levels(self) -> int:
        return self.mat.shape[0] // 2

    def trace(self) -> float:
        return float(np.trace(self.mat).real)

    def blocks(self) -> np.ndarray:
        """View as (2, n_levels, 2, n_levels) for (atom, photon) indexing."""
        L = self.n_levels
        return self.mat.reshape(2, L, 2, L)


@dataclass(frozen=True)
class AtomDensity:
    """2x2 reduced atomic density operator, basis order (g, e)."""

    mat: np.ndarray

    def __post_init__(self):
        mat = np.asarray(self.mat, dtype=complex)
        object.__setattr__(self, "mat", mat)
        if mat.shape != (2, 2):
            raise ValueError("AtomDensity must be 2x2")

    def trace(self) -> float:
        return float(np.trace(self.mat).real)

    def p_g(self) -> float:
        return float(self.mat[G, G].real)


# --- diagnostics used by tests and by the self-check CLI ---------------------

def hermiticity_defect(mat: np.ndarray) -> float:
    return float(np.max(np.abs(mat - mat.conj().T)))


def min_eigenvalue(mat: np.ndarray) -> float:
    h = 0.5 * (mat + mat.conj().T)
    return float(np.linalg.eigvalsh(h)[0])


def assert_physical_density(mat: np.ndarray, *, herm_tol: float = 1e-10,
                            trace_tol: float = 1e-9, eig_floor: float = -1e-8) -> None:
    """Raise AssertionError unless mat is Hermitian, unit-trace and PSD within tolerance."""
    assert hermiticity_defect(mat) < herm_tol, "density not Hermitian"
    assert abs(np.trace(mat).real - 1.0) < trace_tol, "density trace != 1"
    assert min_eigenvalue(mat) > eig_floor, "density not positive semidefinite"


# --- state constructors -------------------------------------------------------

def poisson_tail(mean: float, n_max: int) -> float:
    """Probability mass of a Poisson(mean) above n_max, via log-domain terms."""
    if mean == 0.0:
        return 0.0
    # kept mass, summed smallest-first for accuracy
    logs = [-mean + n * math.log(mean) - math.lgamma(n + 1) for n in range(n_max + 1)]
    kept = math.fsum(sorted(math.exp(v) for v in logs))
    return max(0.0, 1.0 - kept)


def coherent_state(alpha: complex, trunc: TruncationConfig | None = None) -> FieldVector:
    """Coherent state |alpha>, truncated; amplitudes exp(-|a|^2/2) a^n / sqrt(n!).

    Factorials are evaluated in the log domain so the construction stays
    stable well past n ~ 170.
    """
    if trunc is None:
        trunc = default_truncation(alpha)
    mean = abs(alpha) ** 2
    tail = poisson_tail(mean, trunc.n_max)
    if tail >= trunc.tail_tol:
        raise TailTooLarge(
            f"coherent state |alpha|^2={mean:.4g} discards {tail:.3e} >= "
            f"tail_tol={trunc.tail_tol:.3e} at n_max={trunc.n_max}"
        )
    n = np.arange(trunc.n_levels)
    if alpha == 0:
        amps = np.zeros(trunc.n_levels, dtype=complex)
        amps[0] = 1.0
        return FieldVector(amps)
    log_mag = -0.5 * mean + n * math.log(abs(alpha)) - 0.5 * np.array(
        [math.lgamma(k + 1) for k in range(trunc.n_levels)]
    )
    phase = np.exp(1j * n * np.angle(alpha))
    return FieldVector(np.exp(log_mag) * phase)


def thermal_density(nbar: float, trunc: TruncationConfig | None = None) -> FieldDensity:
    """Thermal (geometric) field state p_n = nbar^n / (1+nbar)^(n+1), renormalized.

    The geometric tail beyond n_max must stay below tail_tol; the kept weights
    are rescaled to unit trace.
    """
    if nbar < 0:
        raise ValueError(f"nbar must be >= 0, got {nbar}")
    if trunc is None:
        trunc = TruncationConfig()
    L = trunc.n_levels
    if nbar == 0.0:
        mat = np.zeros((L, L), dtype=complex)
        mat[0, 0] = 1.0
        return FieldDensity(mat)
    x = nbar / (1.0 + nbar)
    tail = x ** L  # exact geometric remainder
    if tail >= trunc.tail_tol:
        raise TailTooLarge(
            f"thermal state nbar={nbar} discards {tail:.3e} >= tail_tol at n_max={trunc.n_max}"
        )
    p = x ** np.arange(L) / (1.0 + nbar)
    p = p / p.sum()
    return FieldDensity(np.diag(p).astype(complex))


def tensor(atom: np.ndarray, fld: FieldVector) -> JointVector:
    """Product state (atom 2-vector, basis order (g, e)) (x) field vector."""
    atom = np.asarray(atom, dtype=complex).reshape(2)
    if not np.all(np.isfinite(atom)) or not np.all(np.isfinite(fld.amps)):
        raise ValueError("tensor inputs must be finite")
    return JointVector(np.outer(atom, fld.amps))


def partial_trace_field(rho: JointDensity) -> AtomDensity:
    """Trace out the field: entries sum_n <a, n| rho |a', n>.

    The atomic trace equals the joint trace exactly (it is the same sum of
    diagonal entries, just regrouped).
    """
    b = rho.blocks()
    out = np.einsum("anbn->ab", b)
    return AtomDensity(out)
