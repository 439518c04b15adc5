"""Stochastic curve shortening flow with length-proportional noise."""
from .classes.brownian_path import BrownianPath
from .classes.curvature_state import CurvatureState
from .classes.curve import Curve
from .classes.flow_config import FlowConfig
from .classes.trajectory import TrajectoryRecord
from .coordinator import run_flow
from .utils import package_version

__version__ = package_version()

__all__ = [
    "BrownianPath",
    "Curve",
    "CurvatureState",
    "FlowConfig",
    "TrajectoryRecord",
    "run_flow",
    "__version__",
]
