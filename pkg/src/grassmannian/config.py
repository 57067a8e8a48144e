"""Numerical tolerances.

Every tolerance used by the package lives here so that scenario configs can
override any of them; call sites never hard-code their own values.
"""

from dataclasses import dataclass, fields, replace


@dataclass(frozen=True)
class Tolerances:
    surface_tol: float = 1e-9
    exp_tol: float = 1e-9
    fd_tol: float = 1e-6
    inv_tol: float = 1e-10
    safety_factor: float = 0.5
    jac_floor: float = 1e-6
    contain_tol: float = 1e-6
    embed_sep_factor: float = 0.25
    imm_floor: float = 1e-8
    ambiguity_tol: float = 1e-6
    roundtrip_tol: float = 1e-8
    collision_tol: float = 1e-9
    root_tol: float = 1e-12
    rho_min: float = 1e-3
    flow_tol: float = 1e-8
    track_tol: float = 1e-5
    transport_tol: float = 1e-3
    lift_tol: float = 1e-6
    junction_tol: float = 1e-8
    max_iter: int = 50
    max_steps: int = 1 << 14
    min_steps: int = 16
    max_hops: int = 32

    def with_overrides(self, **overrides):
        known = {f.name for f in fields(self)}
        unknown = set(overrides) - known
        if unknown:
            raise KeyError(f"unknown tolerance(s): {sorted(unknown)}")
        return replace(self, **overrides)


DEFAULT_TOLERANCES = Tolerances()
