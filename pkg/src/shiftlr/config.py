from dataclasses import dataclass, replace

STAGES = ("start", "global", "local")


@dataclass(frozen=True)
class SolverConfig:
    """Knobs for the greedy decomposition and the shift estimator.

    ``max_components`` of 0 means "no fixed count": iterate until the
    relative residual drops to ``residual_threshold``.
    """

    max_components: int = 1
    residual_threshold: float = 0.0
    power_tol: float = 1e-10
    power_cap: int = 1000
    local_move_cap_factor: int = 10
    # rough flop budget (M*N*min(M,N)**3) under which plain search ends with
    # an exact scan of all single-column moves; 0 disables it
    neighborhood_scan_budget: float = 2e7
    use_start_guess: bool = True
    use_global_stage: bool = True
    use_local_stage: bool = True

    def __post_init__(self):
        if self.max_components < 0:
            raise ValueError("max_components must be >= 0")
        if not 0.0 <= self.residual_threshold < 1.0:
            raise ValueError("residual_threshold must lie in [0, 1)")
        if self.max_components == 0 and self.residual_threshold <= 0.0:
            raise ValueError("max_components=0 needs a positive residual_threshold")
        if self.neighborhood_scan_budget < 0:
            raise ValueError("neighborhood_scan_budget must be >= 0")
        if self.power_tol <= 0 or self.power_cap < 1 or self.local_move_cap_factor < 1:
            raise ValueError("power_tol, power_cap and local_move_cap_factor must be positive")

    def with_stages(self, stages):
        """Copy with estimator stages toggled from an iterable of names in STAGES."""
        stages = set(stages)
        unknown = stages - set(STAGES)
        if unknown:
            raise ValueError(f"unknown estimator stages: {sorted(unknown)}")
        return replace(
            self,
            use_start_guess="start" in stages,
            use_global_stage="global" in stages,
            use_local_stage="local" in stages,
        )
