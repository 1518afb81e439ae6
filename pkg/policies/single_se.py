"""
SingleSE baseline: each agent runs successive elimination alone.
"""

from typing import List

from events import Message

from .base import RoundContext, RoundResult, Sampler
from .coop_se import coop_se_round


def single_se_round(state, inbox: List[Message], t: int, u: float,
                    sample: Sampler, ctx: RoundContext) -> RoundResult:
    """Coop-SE with no inbox and no outbox."""
    state, _, action, reward = coop_se_round(state, [], t, u, sample, _isolated(ctx, state["id"]))
    return state, {}, action, reward


def _isolated(ctx: RoundContext, v: int) -> RoundContext:
    if not ctx.neighbors[v]:
        return ctx
    neighbors = tuple(() for _ in ctx.neighbors)
    return RoundContext(A=ctx.A, iota=ctx.iota, neighbors=neighbors, selection=ctx.selection, diameter=0)
