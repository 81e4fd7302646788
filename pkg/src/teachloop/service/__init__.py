from .session import SessionInputs, TeachingSession
from .simulate import SimulationScript, SimulationReport, run_simulation

__all__ = [
    "SessionInputs",
    "TeachingSession",
    "SimulationScript",
    "SimulationReport",
    "run_simulation",
]
