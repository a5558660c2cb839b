"""Zero-sum punishment games and per-state utility under punishment.

For each player i we solve, by backward induction, the zero-sum game in which
the opponent tries to minimize player i's utility.  The resulting
history-independent policy is what both players switch to once someone
deviates; the value of deviating optimally and then being punished is the
state-dependent threshold every feasibility constraint compares against.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .model import StochasticGame


@dataclass(frozen=True)
class PunishmentPolicy:
    """Deterministic subgame-perfect policy of the zero-sum punishment game.

    ``target`` is the player being punished.  ``action[s]`` is the move both
    players follow (maximizing for the target, minimizing for the opponent)
    and ``value[s]`` the target's onward utility from s under the policy.
    """

    target: int
    action: tuple[int, ...]
    value: tuple[Fraction, ...]


@dataclass(frozen=True)
class PunishmentValues:
    """u_p[s]: the acting player's best deviate-then-get-punished utility."""

    u_p: tuple[Fraction, ...]


def compute_punishment_policy(g: StochasticGame, target: int) -> PunishmentPolicy:
    """Backward induction on the zero-sum game for ``target``.

    Ties broken by lowest action index so runs are reproducible.
    """
    reward = g.r1 if target == 1 else g.r2
    action = [0] * (g.n + 1)
    value = [Fraction(0)] * (g.n + 1)
    for s in range(g.n - 1, 0, -1):
        maximizing = g.ap[s] == target
        best_a, best_v = 0, None
        for a in g.actions():
            v = reward[s][a] + sum(
                (prob * value[s2] for s2, prob in g.successors(s, a)), Fraction(0)
            )
            if best_v is None or (v > best_v if maximizing else v < best_v):
                best_a, best_v = a, v
        action[s], value[s] = best_a, best_v
    action[g.n] = 1
    return PunishmentPolicy(target=target, action=tuple(action), value=tuple(value))


def utility_under_punishment(
    g: StochasticGame,
    policies: tuple[PunishmentPolicy, PunishmentPolicy] | None = None,
) -> PunishmentValues:
    """u_p(s) = max_a ( r_i(s,a) + E[V_i] ) with i the acting player at s."""
    if policies is None:
        policies = (compute_punishment_policy(g, 1), compute_punishment_policy(g, 2))
    u_p = [Fraction(0)] * (g.n + 1)
    for s in range(g.n - 1, 0, -1):
        i = g.ap[s]
        pol = policies[i - 1]
        reward = g.r1 if i == 1 else g.r2
        u_p[s] = max(
            reward[s][a]
            + sum((prob * pol.value[s2] for s2, prob in g.successors(s, a)), Fraction(0))
            for a in g.actions()
        )
    return PunishmentValues(u_p=tuple(u_p))
