"""
Problema directo: splitting de Lie (reacción y después difusión) con FEM adaptativo.

Por paso temporal:
  1. reacción nodo a nodo sobre [t_{n−1}, t_n]
  2. difusión semi-implícita
  3. estimador a posteriori
  4. si η(Ω) ≥ ε_TOL: marcado bulk, refinamiento RGB, transferencia de u^{n−1} y se
     repite el paso
El estado aceptado se registra en la malla gruesa. La malla de trabajo se conserva
entre pasos (no hay desrefinamiento).
"""

from __future__ import annotations

import logging
import time
from typing import Optional

from core.fem import transfer
from core.mesh import Mesh, bulk_mark, make_uniform_mesh, rgb_refine
from core.workers import WorkerPool
from problems.forward.config import SolverConfig
from problems.forward.data_models import InitialProfile, ModelParams, StateField, StepReport, Trajectory
from problems.forward.flows import diffusion_step, estimate_error, initial_condition, reaction_step

logger = logging.getLogger("acidfront.forward")


def transfer_state(state: StateField, target: Mesh) -> StateField:
    if state.mesh.mesh_id == target.mesh_id:
        return state
    return StateField(
        target,
        transfer(state.u1, state.mesh, target),
        transfer(state.u2, state.mesh, target),
        transfer(state.u3, state.mesh, target),
        state.time,
    )


def solve_direct(
    params: ModelParams,
    config: SolverConfig,
    init: Optional[InitialProfile] = None,
    pool: Optional[WorkerPool] = None,
    coarse_mesh: Optional[Mesh] = None,
) -> Trajectory:
    config.validate()
    profile = init or InitialProfile.gaussian_seed()
    coarse = coarse_mesh or make_uniform_mesh(config.coarse_n)
    n_steps = config.n_steps

    logger.info(
        f"Problema directo: δ₁={params.delta1:.6g} ρ₂={params.rho2:.6g} D₂={params.D2:.6g} "
        f"δ₃={params.delta3:.6g} | τ={config.tau:.6g} pasos={n_steps} malla={coarse.n_triangles} triángulos"
    )

    state0 = initial_condition(coarse, profile)
    states: list[StateField] = [state0]
    reports: list[StepReport] = []

    working = coarse
    previous = state0
    for n in range(1, n_steps + 1):
        t_n = n * config.tau
        old = transfer_state(previous, working)
        refines = 0
        reaction_seconds = 0.0
        warning: Optional[str] = None

        while True:
            started = time.perf_counter()
            reacted = reaction_step(old, params, config.tau, config.reaction_abs_tol, config.reaction_rel_tol, pool)
            reaction_seconds += time.perf_counter() - started

            new = diffusion_step(reacted, params, config.tau, config.cg_tol)
            indicators = estimate_error(working, new, old, config.tau, params)
            if indicators.eta_omega < config.eps_tol:
                break
            if refines >= config.max_refines_per_step:
                warning = f"límite de refinamientos ({config.max_refines_per_step}) con η(Ω)={indicators.eta_omega:.3e}"
                break
            if working.n_nodes >= config.max_nodes:
                warning = f"presupuesto de nodos ({config.max_nodes}) con η(Ω)={indicators.eta_omega:.3e}"
                break
            marked = bulk_mark(indicators, config.theta)
            if marked.size == 0:
                warning = f"θ={config.theta} no marca ningún elemento con η(Ω)={indicators.eta_omega:.3e}"
                break

            working = rgb_refine(working, marked)
            old = transfer_state(old, working)
            refines += 1
            logger.debug(f"t={t_n:.6g}: refinamiento {refines}, {marked.size} marcados -> {working.n_nodes} nodos")

        if warning:
            logger.debug(f"t={t_n:.6g}: paso aceptado con aviso: {warning}")

        previous = new.at_time(t_n)
        states.append(transfer_state(previous, coarse))
        reports.append(
            StepReport(
                t=t_n,
                refines=refines,
                eta_omega=indicators.eta_omega,
                nodes=working.n_nodes,
                warning=warning,
                reaction_seconds=reaction_seconds,
            )
        )
        if n_steps >= 10 and n % (n_steps // 10) == 0:
            logger.info(f"t={t_n:.6g} | η(Ω)={indicators.eta_omega:.3e} | nodos={working.n_nodes}")

    warned = sum(1 for r in reports if r.warning)
    if warned:
        logger.warning(f"{warned}/{n_steps} pasos aceptados con η(Ω) ≥ ε_TOL={config.eps_tol:.1e}")

    return Trajectory(
        coarse_mesh=coarse,
        tau=config.tau,
        states=states,
        params=params,
        profile=profile,
        reports=reports,
    )
