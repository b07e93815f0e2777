from .types import (
    FINE_STRUCTURE,
    MultipoleDistribution,
    ProcessKind,
    ProcessSpec,
    incident_momentum,
    kinematic_prefactor,
    lorentzian,
)

__all__ = [
    "FINE_STRUCTURE",
    "MultipoleDistribution",
    "ProcessKind",
    "ProcessSpec",
    "incident_momentum",
    "kinematic_prefactor",
    "lorentzian",
]
