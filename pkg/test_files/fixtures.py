"""
Configuraciones pequeñas compartidas por los tests (malla 4×4, pocos pasos, malla fija).
"""

from core.errors import EvaluationError, StepSizeUnderflowError
from problems.forward import InitialProfile, ModelParams, SolverConfig


def tiny_config(**changes) -> SolverConfig:
    base = SolverConfig(
        tau=0.1,
        T_final=0.5,
        coarse_n=4,
        max_refines_per_step=0,
        cg_tol=1e-12,
        reaction_abs_tol=1e-12,
        reaction_rel_tol=1e-10,
    )
    return base.with_changes(**changes) if changes else base


def tiny_params(delta1: float = 4.0) -> ModelParams:
    # D₂ grande para que û₃ sea sensible a δ₁ en pocos pasos
    return ModelParams(delta1=delta1, rho2=1.0, D2=0.05, delta3=1.0)


def wide_seed() -> InitialProfile:
    return InitialProfile.gaussian_seed((0.5, 0.5), 0.1)


def failing_recovery(job):
    """Sustituto de run_recovery que falla como lo haría el integrador en un proceso hijo."""
    raise EvaluationError(job.delta1_init, StepSizeUnderflowError(7 + job.index, 1e-15))
