from dataclasses import dataclass
from typing import Tuple


@dataclass
class AlgebraConfig:
    """Exact-algebra settings shared by the symbolic layer."""

    xi_names: Tuple[str, ...]
    normal_name: str
    parameter_names: Tuple[str, ...]
    spinor_rank: int = 4
    clifford_dim: int = 5


# Default configuration
DEFAULT_CONFIG = AlgebraConfig(
    xi_names=("x1", "x2", "x3", "x4"),
    normal_name="xn",
    parameter_names=("h1", "h2", "sB", "sM", "K"),
)
