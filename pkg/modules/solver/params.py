"""
Solver Parameters - Ensemble parameters, solver settings and stationary-point records
"""

from dataclasses import asdict, dataclass, field, fields, replace
from typing import Any, Dict, Optional, Sequence, Tuple

import numpy as np
from scipy.special import entr

from modules import DomainError
from modules.pwef import PwefSpec


@dataclass(frozen=True)
class EnsembleParams:
    """(j,k)-regular ensemble analysed at cover degree M"""
    j: int
    k: int
    M: int

    def __post_init__(self):
        for name in ("j", "k", "M"):
            if not isinstance(getattr(self, name), int) or isinstance(getattr(self, name), bool):
                raise DomainError(f"{name} must be an integer, got {getattr(self, name)!r}")
        if self.j < 2:
            raise DomainError(f"variable-node degree j must be at least 2, got {self.j}")
        if self.k <= self.j:
            raise DomainError(f"check-node degree k must exceed j (design rate below 1), got j={self.j}, k={self.k}")
        if self.M < 1:
            raise DomainError(f"cover degree M must be at least 1, got {self.M}")

    @property
    def pwef(self) -> PwefSpec:
        return PwefSpec(self.M, self.k)

    @property
    def design_rate(self) -> float:
        return 1.0 - self.j / self.k

    def with_degree(self, M: int) -> "EnsembleParams":
        return replace(self, M=M)


@dataclass
class SolverConfig:
    """Tolerances and iteration limits for the Newton solves"""
    tol_inner: float = 1e-11
    tol_outer: float = 1e-9
    tol_threshold: float = 1e-7
    threshold_g_tol: float = 1e-6
    max_iterations: int = 60
    max_halvings: int = 12
    fd_step: float = 1e-6
    multistart: int = 8
    face_multistart: int = 2
    seed: int = 1729
    step_cap: float = 4.0
    # interior points with some q_r below this belong to a lower face
    q_floor: float = 1e-6

    @classmethod
    def from_dict(cls, values: Optional[Dict[str, Any]]) -> "SolverConfig":
        known = {f.name for f in fields(cls)}
        return cls(**{key: value for key, value in (values or {}).items() if key in known})

    def with_overrides(self, **overrides: Any) -> "SolverConfig":
        """Copy with every non-None override applied"""
        return replace(self, **{key: value for key, value in overrides.items() if value is not None})

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass(frozen=True)
class StationaryPoint:
    """Solution of the stationarity system at one normalized pseudoweight"""
    alpha: float
    q: Tuple[float, ...]
    x0: Tuple[float, ...]
    lam: float
    G: float
    residual: float
    method: str = "full"
    metadata: Dict[str, Any] = field(default_factory=dict, compare=False, hash=False)

    @property
    def M(self) -> int:
        return len(self.q)

    @property
    def support(self) -> Tuple[int, ...]:
        """1-based indices r with q_r > 0; a proper subset means the point lies on a face"""
        return tuple(r for r, value in enumerate(self.q, start=1) if value > 0)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "alpha": self.alpha,
            "G": self.G,
            "q": list(self.q),
            "x0": list(self.x0),
            "lambda": self.lam,
            "residual": self.residual,
            "method": self.method,
            "support": list(self.support),
        }


def type_support(q: Sequence[float]) -> Tuple[int, ...]:
    """0-based indices of the positive entries of a type vector"""
    return tuple(int(i) for i in np.flatnonzero(np.asarray(q, dtype=float) > 0))


def _as_type_vector(q: Sequence[float]) -> np.ndarray:
    values = np.asarray(q, dtype=float)
    if values.ndim != 1 or values.size == 0:
        raise DomainError(f"pseudoweight type must be a nonempty vector, got shape {values.shape}")
    return values


def entropy_h(q: Sequence[float]) -> float:
    """Multivariate entropy -sum q_r log q_r - (1 - sum q) log(1 - sum q), 0 log 0 = 0"""
    values = _as_type_vector(q)
    if np.any(values < 0):
        raise DomainError(f"entropy needs nonnegative entries, got {values.tolist()}")
    rest = 1.0 - float(values.sum())
    if rest < 0:
        if rest < -1e-14:
            raise DomainError(f"entropy needs entries summing to at most 1, got {values.sum()!r}")
        rest = 0.0
    return float(entr(values).sum() + entr(rest))


def alpha_of_q(q: Sequence[float]) -> float:
    """Normalized AWGN-pseudoweight (sum r q_r)^2 / sum r^2 q_r of a type"""
    values = _as_type_vector(q)
    r = np.arange(1, values.size + 1)
    second = float(r ** 2 @ values)
    if second <= 0:
        raise DomainError("normalized pseudoweight undefined for the zero type")
    return float(r @ values) ** 2 / second


def g_of_q(q: Sequence[float], alpha: float) -> float:
    """Constraint (sum r q_r)^2 - alpha sum r^2 q_r"""
    values = _as_type_vector(q)
    r = np.arange(1, values.size + 1)
    return float(r @ values) ** 2 - alpha * float(r ** 2 @ values)


def grad_g(q: Sequence[float], alpha: float) -> np.ndarray:
    values = _as_type_vector(q)
    r = np.arange(1, values.size + 1, dtype=float)
    return 2.0 * r * float(r @ values) - alpha * r ** 2


def check_alpha(alpha: float, upper_inclusive: bool = True) -> float:
    value = float(alpha)
    ok = 0 < value <= 1 if upper_inclusive else 0 < value < 1
    if not np.isfinite(value) or not ok:
        bound = "(0, 1]" if upper_inclusive else "(0, 1)"
        raise DomainError(f"alpha must lie in {bound}, got {alpha!r}")
    return value
