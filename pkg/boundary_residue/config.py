from dataclasses import dataclass
from pathlib import Path
from typing import Optional

REPO_ROOT = Path(__file__).resolve().parent.parent


@dataclass
class PipelineConfig:
    """Boundary-residue pipeline settings."""

    published_values_path: str
    jobs: int = 1
    case_three_unit: str = "pi^3"


@dataclass
class OracleConfig:
    """Numeric oracle settings."""

    contour_radius: float = 0.5
    contour_points: int = 32
    quadrature_nodes: int = 64
    samples: int = 1
    tolerance: float = 1e-7
    seed: int = 0


@dataclass
class ReportConfig:
    """Report rendering settings."""

    template_dir: str
    template_name: str = "report.tex.j2"
    show_template_name: str = "show.tex.j2"
    schema: str = "kkw5/1"
    console_width: int = 120
    output_path: Optional[str] = None


def resolve_path(file_path: str) -> Path:
    """Resolves a relative path against the working directory, then the repository."""
    path = Path(file_path)
    if path.is_absolute() or path.exists():
        return path
    return REPO_ROOT / path


# Default configuration
DEFAULT_CONFIG = PipelineConfig(
    published_values_path="boundary_residue/data/published_values.json",
)
DEFAULT_ORACLE_CONFIG = OracleConfig()
DEFAULT_REPORT_CONFIG = ReportConfig(
    template_dir="boundary_residue/templates",
)
