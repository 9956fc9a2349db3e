"""
Linearized barycentric Lawson iteration, the second phase of AAA-Lawson.

Each step solves the weighted linearized least-squares problem

    min ||diag(W^1/2) [C, -diag(F) C] gamma||,  ||gamma|| = 1

for gamma = [alpha; beta] and multiplies each weight by the current nonlinear
error |e_j| (raised to `update_exponent`), renormalizing to max 1.
"""
import logging
from dataclasses import dataclass, field

import numpy as np

from aaalawson import array_util, barycentric, numerics
from aaalawson.barycentric import ALPHA_BETA, BarycentricRational
from aaalawson.errors import ConsistencyError, InputError

logger = logging.getLogger(__name__)


@dataclass
class LawsonConfig:
    nsteps: int = 20
    update_exponent: float = 1.0
    # multiplies |e_j| in the weight update; None means all ones
    initial_weights: np.ndarray = None
    keep_best: bool = True

    def __post_init__(self):
        if int(self.nsteps) != self.nsteps or self.nsteps < 0:
            raise InputError(f'nsteps must be a nonnegative integer, got {self.nsteps}')
        self.nsteps = int(self.nsteps)
        if not self.update_exponent > 0:
            raise InputError(f'update_exponent must be > 0, got {self.update_exponent}')
        if self.initial_weights is not None:
            u = np.asarray(self.initial_weights, dtype=np.float64)
            if u.ndim != 1 or not np.all(np.isfinite(u)) or np.any(u < 0) or not np.any(u > 0):
                raise InputError(
                    'initial_weights must be finite, nonnegative, with at least one positive')
            self.initial_weights = u

    def error_weights(self, M):
        if self.initial_weights is None:
            return np.ones(M)
        if len(self.initial_weights) != M:
            raise InputError(f'{len(self.initial_weights)} initial weights for {M} samples')
        return self.initial_weights / self.initial_weights.max()


@dataclass
class LawsonState:
    weights: np.ndarray
    gamma: np.ndarray
    step: int = 0
    history: list = field(default_factory=list)
    # nonlinear max error of `gamma`
    max_error: float = np.inf
    # last finite error vector
    errors: np.ndarray = None
    converged: bool = False
    divergent_steps: list = field(default_factory=list)


def _split(gamma):
    n1 = len(gamma) // 2
    return gamma[:n1], gamma[n1:]


def _check_support(samples, support_points, support_indices):
    t = array_util.as_complex_vector(support_points, 'support_points')
    idx = np.asarray(support_indices, dtype=int)
    if len(idx) != len(t):
        raise ConsistencyError(f'{len(idx)} support indices for {len(t)} support points')
    if np.any((idx < 0) | (idx >= samples.M)) or np.any(samples.points[idx] != t):
        raise ConsistencyError('support points do not coincide with the indexed samples')
    return t, idx


def support_indices_of(samples, support_points):
    """
    Sample index of each support point (exact match)
    """
    where = {complex(z): j for j, z in enumerate(samples.points)}
    idx = []
    for t in support_points:
        j = where.get(complex(t))
        if j is None:
            raise ConsistencyError(f'support point {t} is not a sample point')
        idx.append(j)
    return np.array(idx, dtype=int)


def lawson_matrix(samples, support_points, support_indices, weights):
    """
    M x (2n+2) matrix diag(W^1/2) [C, -diag(F) C].  The row of a sample that is
    the support point t_k holds +1 in column k and -f_j in column n+1+k.
    """
    t, idx = _check_support(samples, support_points, support_indices)
    w = np.asarray(weights, dtype=np.float64)
    if w.shape != (samples.M,) or np.any(w < 0):
        raise InputError(f'need {samples.M} nonnegative weights, got shape {w.shape}')
    Z, F = samples.points, samples.values
    n1 = len(t)
    special = np.zeros(samples.M, dtype=bool)
    special[idx] = True

    cauchy = np.zeros((samples.M, n1), dtype=np.complex128)
    cauchy[~special] = 1 / (Z[~special, None] - t[None, :])
    A = np.hstack((cauchy, -F[:, None] * cauchy))
    for k, j in enumerate(idx):
        A[j, :] = 0
        A[j, k] = 1
        A[j, n1 + k] = -F[j]
    return np.sqrt(w)[:, None] * A


def nonlinear_errors(samples, support_points, support_indices, gamma):
    """
    e_j = f_j - r(z_j) for the rational with coefficients gamma = [alpha; beta].
    At support samples r(z_j) = alpha_k / beta_k.  Poles give |e_j| = inf.
    """
    t, _ = _check_support(samples, support_points, support_indices)
    alpha, beta = _split(np.asarray(gamma, dtype=np.complex128))
    if not np.any(beta != 0):
        return np.full(samples.M, np.inf, dtype=np.complex128)
    r = BarycentricRational(t, alpha, beta, ALPHA_BETA)
    ev = barycentric.evaluate_array(r, samples.points)
    errors = samples.values - ev.values
    errors[ev.at_infinity] = np.inf
    return errors


def initial_state(r0, samples, config):
    gamma = r0.gamma / np.linalg.norm(r0.gamma)
    weights = config.error_weights(samples.M)
    return LawsonState(weights=weights, gamma=gamma)


def lawson_step(state, samples, support_points, support_indices, config):
    """
    One IRLS step.  Returns a new LawsonState.
    """
    if state.converged:
        return state
    step = state.step + 1
    u = config.error_weights(samples.M)
    A = lawson_matrix(samples, support_points, support_indices, state.weights)
    gamma, _ = numerics.smallest_singular_vector(A)
    errors = nonlinear_errors(samples, support_points, support_indices, gamma)
    scaled = u * np.abs(errors)
    maxerr = float(scaled.max())
    history = state.history + [maxerr]

    if not np.isfinite(maxerr):
        logger.warning(f'Lawson step {step} produced a non-finite error; keeping '
                f'the previous coefficients')
        weights = state.weights
        if state.errors is not None:
            weights = _update(state.weights, u * np.abs(state.errors), config)
            if weights is None:
                weights = state.weights
        return LawsonState(weights=weights, gamma=state.gamma, step=step,
                history=history, max_error=state.max_error, errors=state.errors,
                divergent_steps=state.divergent_steps + [step])

    weights = _update(state.weights, scaled, config)
    if weights is None:
        logger.info(f'Lawson step {step}: all weighted errors vanished')
        return LawsonState(weights=state.weights, gamma=gamma, step=step,
                history=history, max_error=maxerr, errors=errors, converged=True,
                divergent_steps=state.divergent_steps)

    logger.info(f'Lawson step {step}: max error {maxerr:.6e}')
    return LawsonState(weights=weights, gamma=gamma, step=step, history=history,
            max_error=maxerr, errors=errors, divergent_steps=state.divergent_steps)


def _update(weights, abserr, config):
    # returns None when every updated weight is zero
    new = weights * abserr ** config.update_exponent
    top = new.max()
    if top == 0:
        return None
    return new / top


def lawson_run(samples, r0, config=None, history_logger=None):
    """
    Run the Lawson phase from the AAA approximant r0.
    Returns (r, state, reverted).  r is r0 in alpha-beta mode with reverted=True
    when no iterate beat r0.
    """
    config = config or LawsonConfig()
    support_indices = support_indices_of(samples, r0.support_points)
    state = initial_state(r0, samples, config)
    if config.nsteps == 0:
        return r0, state, False

    u = config.error_weights(samples.M)
    _, _, aaa_errors = barycentric.max_error(r0, samples)
    aaa_err = float((u * np.abs(aaa_errors)).max())

    best_gamma, best_err = None, np.inf
    for _ in range(config.nsteps):
        state = lawson_step(state, samples, r0.support_points, support_indices, config)
        if history_logger is not None:
            history_logger.write(state.step, state.history[-1])
        if state.max_error < best_err and state.step not in state.divergent_steps:
            best_gamma, best_err = state.gamma, state.max_error
        if state.converged:
            break

    if config.keep_best:
        gamma, err = best_gamma, best_err
    else:
        gamma, err = state.gamma, state.max_error

    if gamma is None or not err < aaa_err:
        logger.warning(f'Lawson phase did not improve on AAA error {aaa_err:.6e}; '
                f'reverting to the AAA approximant')
        return r0.to_alpha_beta(), state, True

    alpha, beta = _split(gamma)
    r = BarycentricRational(r0.support_points, alpha, beta, ALPHA_BETA)
    return r, state, False
