"""The two-colour urn with mixed Friedman/Polya replacement.

At each step a ball is drawn. With probability p the Friedman rule puts it
back with alpha balls of its colour and beta of the other; otherwise the
Polya rule puts it back with gamma balls of its colour.

Sampling contract: every step consumes exactly two uniforms from the
stream, u_scheme then u_colour, even when p is 0 or 1.
    u_scheme < p  => Friedman
    u_colour < x  => Yellow, with x = y / (y + b)
"""

import logging
from collections.abc import Callable, Iterator, Sequence
from fractions import Fraction
from typing import Any, Protocol

from numba import njit

from mixedurn.errors import ParameterError
from mixedurn.model import Colour, DrawEvent, Scheme, UrnParams, UrnState
from mixedurn.rng import RngStream, next_uniform

logger = logging.getLogger(__name__)

INT64_MAX = (1 << 63) - 1

Branches = list[tuple[tuple[int, int], Any]]
Kernel = Callable[[int, int, UrnParams, bool], Branches]


class UniformSource(Protocol):
    def uniform(self) -> float: ...


def new_urn(params: UrnParams) -> UrnState:
    return UrnState(y=params.y0, b=params.b0, n=0)


def proportion(state: UrnState) -> float:
    """X_n, the proportion of yellow balls."""
    return state.y / (state.y + state.b)


def blue_proportion(state: UrnState) -> float:
    """Z_n = 1 - X_n."""
    return state.b / (state.y + state.b)


def increments(params: UrnParams, event: DrawEvent) -> tuple[int, int]:
    """Balls added to (yellow, blue) by one draw."""
    if event.scheme is Scheme.FRIEDMAN:
        if event.colour is Colour.YELLOW:
            return params.alpha, params.beta
        return params.beta, params.alpha
    if event.colour is Colour.YELLOW:
        return params.gamma, 0
    return 0, params.gamma


def kernel_branches(y: int, b: int, params: UrnParams, exact: bool = False) -> Branches:
    """One-step law from (y, b) as [((y', b'), prob), ...].

    Branches landing on the same counts are merged and zero-probability
    branches dropped. With exact=True probabilities are Fractions.
    """
    if exact:
        p: Any = params.p_exact
        x: Any = Fraction(y, y + b)
    else:
        p = params.p
        x = y / (y + b)
    a, be, g = params.alpha, params.beta, params.gamma
    merged: dict[tuple[int, int], Any] = {}
    for target, prob in (
        ((y + a, b + be), p * x),
        ((y + be, b + a), p * (1 - x)),
        ((y + g, b), (1 - p) * x),
        ((y, b + g), (1 - p) * (1 - x)),
    ):
        merged[target] = merged.get(target, 0) + prob
    return [(target, prob) for target, prob in merged.items() if prob != 0]


def transition_kernel(state: UrnState, params: UrnParams) -> list[tuple[UrnState, float]]:
    return [
        (UrnState(y=y, b=b, n=state.n + 1), prob)
        for (y, b), prob in kernel_branches(state.y, state.b, params)
    ]


def step(
    state: UrnState, params: UrnParams, rng: UniformSource
) -> tuple[UrnState, DrawEvent]:
    u_scheme = rng.uniform()
    u_colour = rng.uniform()
    event = DrawEvent(
        scheme=Scheme.FRIEDMAN if u_scheme < params.p else Scheme.POLYA,
        colour=Colour.YELLOW if u_colour < proportion(state) else Colour.BLUE,
    )
    dy, db = increments(params, event)
    return UrnState(y=state.y + dy, b=state.b + db, n=state.n + 1), event


def iter_steps(
    params: UrnParams, n_steps: int, rng: UniformSource
) -> Iterator[tuple[UrnState, DrawEvent]]:
    """Step one draw at a time, yielding each new state with its event.

    Slow compared to run_trajectory, but the events are kept.
    """
    state = new_urn(params)
    for _ in range(n_steps):
        state, event = step(state, params, rng)
        yield state, event


@njit(cache=True, nogil=True)
def advance(state, y, b, steps, alpha, beta, gamma, p):
    """Run `steps` draws from counts (y, b); returns (y, b, friedman_steps)."""
    friedman = 0
    for _ in range(steps):
        u_scheme = next_uniform(state)
        u_colour = next_uniform(state)
        x = y / (y + b)
        if u_scheme < p:
            friedman += 1
            if u_colour < x:
                y += alpha
                b += beta
            else:
                y += beta
                b += alpha
        elif u_colour < x:
            y += gamma
        else:
            b += gamma
    return y, b, friedman


def check_checkpoints(checkpoints: Sequence[int], n_steps: int) -> None:
    if n_steps < 0:
        raise ParameterError(f"n_steps must be non-negative, got {n_steps}")
    if list(checkpoints) != sorted(checkpoints):
        raise ParameterError(f"checkpoints must be sorted: {list(checkpoints)}")
    if checkpoints and (checkpoints[0] < 0 or checkpoints[-1] > n_steps):
        raise ParameterError(f"checkpoints must lie in [0, {n_steps}]: {list(checkpoints)}")


def check_capacity(params: UrnParams, n_steps: int) -> None:
    """Refuse runs whose ball counts could overflow a signed 64-bit integer."""
    per_step = max(params.alpha + params.beta, params.gamma)
    if params.y0 + params.b0 + per_step * n_steps > INT64_MAX:
        raise ParameterError(
            f"{n_steps} steps adding up to {per_step} balls each would overflow 64-bit counts"
        )


def run_trajectory(
    params: UrnParams,
    n_steps: int,
    rng: RngStream,
    checkpoints: Sequence[int],
) -> list[tuple[int, UrnState]]:
    """Run one trajectory of n_steps draws, recording the state at each checkpoint.

    Consumes exactly 2 * n_steps uniforms from rng.
    """
    check_checkpoints(checkpoints, n_steps)
    check_capacity(params, n_steps)
    y, b, n = params.y0, params.b0, 0
    recorded = []
    for checkpoint in checkpoints:
        y, b, _ = advance(
            rng.state,
            y,
            b,
            checkpoint - n,
            params.alpha,
            params.beta,
            params.gamma,
            params.p,
        )
        n = checkpoint
        recorded.append((n, UrnState(y=int(y), b=int(b), n=n)))
    if n < n_steps:
        advance(
            rng.state,
            y,
            b,
            n_steps - n,
            params.alpha,
            params.beta,
            params.gamma,
            params.p,
        )
    rng.draws += 2 * n_steps
    return recorded
