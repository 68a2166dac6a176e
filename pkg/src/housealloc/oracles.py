"""Mechanism-agnostic verification of allocation properties.

Everything here is deliberately independent of the Hungarian solver the
mechanisms run on: welfare maxima come from exhaustive enumeration of
injective partial assignments, feasibility questions inside the searches
use a separate augmenting-path matcher, and every negative verdict carries
a witness that a standalone checker can re-validate without re-running the
search that found it.

Brute-force searches are bounded by a :class:`SizeBudget`; exceeding a
budget raises :class:`BudgetExceeded` rather than silently truncating.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

from .mechanisms import Mechanism, PermutationPolicy, run_mechanism
from .model import (
    Allocation,
    Instance,
    satisfied_set,
    utility,
    validate_allocation,
    welfare,
)

PROPERTY_KEYS = ("ir", "sir", "po", "core", "strict-core", "maxw", "maxw-ir", "maxw-sir")


class BudgetExceeded(ValueError):
    """Instance too large for the requested exhaustive search."""


class OracleDisagreement(RuntimeError):
    """The brute-force and certificate routes returned different verdicts."""


@dataclass(frozen=True)
class SizeBudget:
    """Limits for the exhaustive searches.

    ``max_alloc_*`` bound allocation enumeration, ``max_coalition_agents``
    bounds the subset search for (weakly) blocking coalitions, and
    ``max_misreport_houses`` bounds the 2^m report sweep per agent.
    """

    max_alloc_agents: int = 8
    max_alloc_houses: int = 8
    max_coalition_agents: int = 12
    max_misreport_houses: int = 6

    _ENV_FIELDS = {
        "max_alloc_agents": "HOUSEALLOC_MAX_ALLOC_AGENTS",
        "max_alloc_houses": "HOUSEALLOC_MAX_ALLOC_HOUSES",
        "max_coalition_agents": "HOUSEALLOC_MAX_COALITION_AGENTS",
        "max_misreport_houses": "HOUSEALLOC_MAX_MISREPORT_HOUSES",
    }

    @classmethod
    def from_env(cls) -> "SizeBudget":
        """Defaults, overridden by HOUSEALLOC_MAX_* environment variables."""
        overrides = {}
        for attr, var in cls._ENV_FIELDS.items():
            raw = os.environ.get(var)
            if raw is not None:
                overrides[attr] = int(raw)
        return cls(**overrides)


# --------------------------------------------------------------------------
# Witnesses


@dataclass(frozen=True)
class ViolationWitness:
    """An agent whose assignment breaks IR or S-IR."""

    agent: str
    endowment: str | None
    assigned: str | None


@dataclass(frozen=True)
class DominationWitness:
    """An allocation leaving every agent at least as well off and one better."""

    allocation: Allocation


@dataclass(frozen=True)
class BlockingWitness:
    """A coalition that strictly improves by trading only its own endowments."""

    coalition: tuple[str, ...]
    reallocation: dict[str, str]


@dataclass(frozen=True)
class WeakBlockingWitness:
    """A coalition trade leaving all members weakly better, one strictly."""

    coalition: tuple[str, ...]
    reallocation: dict[str, str]
    improving_agent: str


@dataclass(frozen=True)
class ManipulationWitness:
    """A report that strictly raises the reporting agent's true utility."""

    agent: str
    reported: frozenset[str]
    truthful_utility: int
    misreport_utility: int


@dataclass(frozen=True)
class WelfareGapWitness:
    """Shows the welfare target an allocation missed, with an exemplar."""

    achieved: int
    target: int
    exemplar: Allocation


@dataclass(frozen=True)
class Verdict:
    holds: bool
    witness: object | None = None


@dataclass(frozen=True)
class PropertyReport:
    verdicts: dict[str, Verdict] = field(default_factory=dict)

    @property
    def all_hold(self) -> bool:
        return all(v.holds for v in self.verdicts.values())


# --------------------------------------------------------------------------
# Individual rationality


def is_ir(instance: Instance, allocation: Allocation) -> bool:
    """No agent ends up below its endowment utility."""
    return ir_violation(instance, allocation) is None


def is_sir(instance: Instance, allocation: Allocation) -> bool:
    """Every endowed agent keeps its endowment exactly or strictly gains."""
    return sir_violation(instance, allocation) is None


def ir_violation(instance: Instance, allocation: Allocation) -> ViolationWitness | None:
    """First agent (in index order) whose assignment breaks IR, if any."""
    validate_allocation(instance, allocation)
    for agent in instance.agents:
        own = instance.endowment_of(agent)
        if own is None or own not in instance.acceptable[agent]:
            continue  # endowment worth 0: any outcome is weakly better
        got = allocation.house_of(agent)
        if got is None or got not in instance.acceptable[agent]:
            return ViolationWitness(agent=agent, endowment=own, assigned=got)
    return None


def sir_violation(instance: Instance, allocation: Allocation) -> ViolationWitness | None:
    """First agent (in index order) whose assignment breaks S-IR, if any."""
    validate_allocation(instance, allocation)
    for agent in instance.agents:
        own = instance.endowment_of(agent)
        if own is None:
            continue
        got = allocation.house_of(agent)
        if got == own:
            continue
        strictly_better = (
            got is not None
            and got in instance.acceptable[agent]
            and own not in instance.acceptable[agent]
        )
        if not strictly_better:
            return ViolationWitness(agent=agent, endowment=own, assigned=got)
    return None


# --------------------------------------------------------------------------
# Augmenting-path matcher (independent of the matching module)


def _kuhn_assign(adj: list[list[int]], n_right: int) -> list[int] | None:
    """Match every left vertex into distinct right vertices, or None.

    ``adj[i]`` lists the right vertices allowed for left vertex i; vertices
    are tried in index order, so the result is deterministic.
    """
    match_right = [-1] * n_right

    def try_assign(i: int, seen: list[bool]) -> bool:
        for j in adj[i]:
            if not seen[j]:
                seen[j] = True
                if match_right[j] == -1 or try_assign(match_right[j], seen):
                    match_right[j] = i
                    return True
        return False

    for i in range(len(adj)):
        if not try_assign(i, [False] * n_right):
            return None
    matched = [-1] * len(adj)
    for j, i in enumerate(match_right):
        if i != -1:
            matched[i] = j
    return matched


def _kuhn_maximum(adj: list[list[int]], n_right: int) -> list[int]:
    """Maximum-cardinality matching; returns right match per left (-1 if none)."""
    match_right = [-1] * n_right

    def try_assign(i: int, seen: list[bool]) -> bool:
        for j in adj[i]:
            if not seen[j]:
                seen[j] = True
                if match_right[j] == -1 or try_assign(match_right[j], seen):
                    match_right[j] = i
                    return True
        return False

    for i in range(len(adj)):
        try_assign(i, [False] * n_right)
    matched = [-1] * len(adj)
    for j, i in enumerate(match_right):
        if i != -1:
            matched[i] = j
    return matched


# --------------------------------------------------------------------------
# Welfare maxima by exhaustive enumeration


@dataclass(frozen=True)
class WelfareMaxima:
    unconstrained: int
    ir: int
    sir: int
    unconstrained_argmax: Allocation
    ir_argmax: Allocation
    sir_argmax: Allocation


def welfare_maxima(instance: Instance, budget: SizeBudget | None = None) -> WelfareMaxima:
    """Maximum welfare over all, all IR, and all S-IR allocations.

    One exhaustive pass over every injective partial assignment of houses
    to agents (unacceptable assignments included, so the IR and S-IR
    predicates are applied literally).  Independent of the matching module.
    """
    budget = budget or SizeBudget.from_env()
    n, m = instance.num_agents, instance.num_houses
    if n > budget.max_alloc_agents or m > budget.max_alloc_houses:
        raise BudgetExceeded(
            f"allocation enumeration over {n} agents x {m} houses exceeds the "
            f"budget of {budget.max_alloc_agents} x {budget.max_alloc_houses}"
        )

    acc_mask = [
        sum(1 << j for j, h in enumerate(instance.houses) if h in instance.acceptable[a])
        for a in instance.agents
    ]
    endow_idx = [
        instance.house_index[instance.endowment[a]] if a in instance.endowment else -1
        for a in instance.agents
    ]
    endow_acceptable = [
        endow_idx[i] >= 0 and (acc_mask[i] >> endow_idx[i]) & 1 == 1 for i in range(n)
    ]

    best = [-1, -1, -1]  # unconstrained, ir, sir
    argmax: list[list[int] | None] = [None, None, None]
    cur = [-1] * n

    def rec(i: int, used: int, wel: int, ir_ok: bool, sir_ok: bool) -> None:
        if wel + (n - i) <= min(best):
            return
        if i == n:
            if wel > best[0]:
                best[0] = wel
                argmax[0] = cur.copy()
            if ir_ok and wel > best[1]:
                best[1] = wel
                argmax[1] = cur.copy()
            if sir_ok and wel > best[2]:
                best[2] = wel
                argmax[2] = cur.copy()
            return
        endowed = endow_idx[i] >= 0
        # receive nothing
        cur[i] = -1
        rec(i + 1, used, wel, ir_ok and not endow_acceptable[i], sir_ok and not endowed)
        # receive an unused house
        mask = acc_mask[i]
        for hj in range(m):
            if (used >> hj) & 1:
                continue
            liked = (mask >> hj) & 1 == 1
            next_ir = ir_ok and (liked or not endow_acceptable[i])
            next_sir = sir_ok and (
                not endowed
                or hj == endow_idx[i]
                or (liked and not endow_acceptable[i])
            )
            cur[i] = hj
            rec(i + 1, used | (1 << hj), wel + (1 if liked else 0), next_ir, next_sir)
        cur[i] = -1

    rec(0, 0, 0, True, True)

    def to_allocation(choice: list[int] | None) -> Allocation:
        if choice is None:  # unreachable: the empty assignment always qualifies
            return Allocation(assignment={a: None for a in instance.agents})
        return Allocation(
            assignment={
                a: (instance.houses[choice[i]] if choice[i] >= 0 else None)
                for i, a in enumerate(instance.agents)
            }
        )

    return WelfareMaxima(
        unconstrained=best[0],
        ir=best[1],
        sir=best[2],
        unconstrained_argmax=to_allocation(argmax[0]),
        ir_argmax=to_allocation(argmax[1]),
        sir_argmax=to_allocation(argmax[2]),
    )


def max_welfare_subject_to(
    instance: Instance, constraint: str, budget: SizeBudget | None = None
) -> int:
    """Brute-force maximum welfare subject to "none", "ir" or "sir"."""
    maxima = welfare_maxima(instance, budget)
    try:
        return {"none": maxima.unconstrained, "ir": maxima.ir, "sir": maxima.sir}[constraint]
    except KeyError:
        raise ValueError(f"unknown constraint {constraint!r}") from None


def max_welfare(instance: Instance) -> int:
    """Maximum number of simultaneously satisfiable agents, via maximum
    cardinality matching in the acceptability graph.  No size budget."""
    return max_welfare_allocation(instance)[0]


def max_welfare_allocation(instance: Instance) -> tuple[int, Allocation]:
    """Welfare maximum plus one allocation attaining it."""
    adj = [
        [j for j, h in enumerate(instance.houses) if h in instance.acceptable[a]]
        for a in instance.agents
    ]
    matched = _kuhn_maximum(adj, instance.num_houses)
    assignment: dict[str, str | None] = {
        a: (instance.houses[matched[i]] if matched[i] >= 0 else None)
        for i, a in enumerate(instance.agents)
    }
    size = sum(1 for j in matched if j >= 0)
    return size, Allocation(assignment=assignment)


# --------------------------------------------------------------------------
# Pareto optimality: brute force and polynomial certificate


def is_pareto_optimal(
    instance: Instance,
    allocation: Allocation,
    budget: SizeBudget | None = None,
    method: str = "certificate",
) -> Verdict:
    """No allocation makes everyone weakly better and someone strictly better.

    ``method`` selects the route: "certificate" (matching-based, no size
    budget), "brute" (exhaustive dominator search, budget applies) or
    "both" (run both, insist they agree).
    """
    validate_allocation(instance, allocation)
    if method == "certificate":
        return _po_certificate(instance, allocation)
    if method == "brute":
        return _po_brute(instance, allocation, budget)
    if method == "both":
        brute = _po_brute(instance, allocation, budget)
        cert = _po_certificate(instance, allocation)
        if brute.holds != cert.holds:
            raise OracleDisagreement(
                f"brute-force says {brute.holds}, certificate says {cert.holds}"
            )
        return brute
    raise ValueError(f"unknown method {method!r}")


def _po_certificate(instance: Instance, allocation: Allocation) -> Verdict:
    # Dominating the allocation means re-satisfying everyone it satisfies
    # plus one more agent, which is a bipartite matching question.
    sat = satisfied_set(instance, allocation)
    sat_indices = [i for i, a in enumerate(instance.agents) if a in sat]
    acc_rows = [
        [j for j, h in enumerate(instance.houses) if h in instance.acceptable[a]]
        for a in instance.agents
    ]
    for j_idx, agent in enumerate(instance.agents):
        if agent in sat:
            continue
        group = sat_indices + [j_idx]
        matched = _kuhn_assign([acc_rows[i] for i in group], instance.num_houses)
        if matched is None:
            continue
        assignment: dict[str, str | None] = {a: None for a in instance.agents}
        for pos, i in enumerate(group):
            assignment[instance.agents[i]] = instance.houses[matched[pos]]
        return Verdict(False, DominationWitness(Allocation(assignment=assignment)))
    return Verdict(True)


def _po_brute(
    instance: Instance, allocation: Allocation, budget: SizeBudget | None
) -> Verdict:
    budget = budget or SizeBudget.from_env()
    n, m = instance.num_agents, instance.num_houses
    if n > budget.max_alloc_agents or m > budget.max_alloc_houses:
        raise BudgetExceeded(
            f"dominator enumeration over {n} agents x {m} houses exceeds the "
            f"budget of {budget.max_alloc_agents} x {budget.max_alloc_houses}"
        )
    base_welfare = welfare(instance, allocation)
    sat_flags = [
        allocation.house_of(a) is not None
        and allocation.house_of(a) in instance.acceptable[a]
        for a in instance.agents
    ]
    acc_mask = [
        sum(1 << j for j, h in enumerate(instance.houses) if h in instance.acceptable[a])
        for a in instance.agents
    ]
    cur = [-1] * n
    found: list[list[int]] = []

    def rec(i: int, used: int, wel: int) -> bool:
        # Branches where a satisfied agent already lost its utility, or where
        # even satisfying all remaining agents cannot beat the base welfare,
        # contain no dominator.
        if wel + (n - i) <= base_welfare:
            return False
        if i == n:
            found.append(cur.copy())
            return True
        mask = acc_mask[i]
        if not sat_flags[i]:
            cur[i] = -1
            if rec(i + 1, used, wel):
                return True
        for hj in range(m):
            if (used >> hj) & 1:
                continue
            liked = (mask >> hj) & 1 == 1
            if sat_flags[i] and not liked:
                continue
            cur[i] = hj
            if rec(i + 1, used | (1 << hj), wel + (1 if liked else 0)):
                return True
        cur[i] = -1
        return False

    if rec(0, 0, 0):
        choice = found[0]
        assignment = {
            a: (instance.houses[choice[i]] if choice[i] >= 0 else None)
            for i, a in enumerate(instance.agents)
        }
        return Verdict(False, DominationWitness(Allocation(assignment=assignment)))
    return Verdict(True)


# --------------------------------------------------------------------------
# Core and strict core


def is_core_stable(
    instance: Instance,
    allocation: Allocation,
    budget: SizeBudget | None = None,
    exhaustive: bool = False,
) -> Verdict:
    """No coalition can strictly improve all members trading only its own
    endowments.

    The default search restricts candidates to endowed, currently
    unsatisfied agents (satisfied agents cannot strictly improve and
    unendowed agents bring no house to trade); ``exhaustive=True`` scans
    every subset of agents instead, for cross-validation.
    """
    validate_allocation(instance, allocation)
    budget = budget or SizeBudget.from_env()
    sat = satisfied_set(instance, allocation)
    if exhaustive:
        base = list(instance.agents)
    else:
        base = [a for a in instance.agents if a in instance.endowment and a not in sat]
    if len(base) > budget.max_coalition_agents:
        raise BudgetExceeded(
            f"coalition search over {len(base)} agents exceeds the budget "
            f"of {budget.max_coalition_agents}"
        )
    for mask in range(1, 1 << len(base)):
        members = [base[b] for b in range(len(base)) if (mask >> b) & 1]
        witness = _find_strict_trade(instance, sat, members)
        if witness is not None:
            return Verdict(False, witness)
    return Verdict(True)


def _find_strict_trade(
    instance: Instance, sat: frozenset[str], members: list[str]
) -> BlockingWitness | None:
    pool = [instance.endowment[a] for a in members if a in instance.endowment]
    if len(pool) < len(members):
        return None  # someone has nothing to contribute
    adj: list[list[int]] = []
    for a in members:
        if a in sat:
            return None  # cannot strictly improve a satisfied agent
        options = [p for p, h in enumerate(pool) if h in instance.acceptable[a]]
        if not options:
            return None
        adj.append(options)
    matched = _kuhn_assign(adj, len(pool))
    if matched is None:
        return None
    return BlockingWitness(
        coalition=tuple(members),
        reallocation={a: pool[matched[i]] for i, a in enumerate(members)},
    )


def is_strict_core_stable(
    instance: Instance,
    allocation: Allocation,
    budget: SizeBudget | None = None,
    exhaustive: bool = False,
) -> Verdict:
    """No coalition trade leaves all members weakly better and one strictly.

    Candidate coalitions are subsets of endowed agents (every member must
    receive a house from inside the coalition); each candidate is tested
    once per potential strict gainer.
    """
    validate_allocation(instance, allocation)
    budget = budget or SizeBudget.from_env()
    sat = satisfied_set(instance, allocation)
    if exhaustive:
        base = list(instance.agents)
    else:
        base = [a for a in instance.agents if a in instance.endowment]
    if len(base) > budget.max_coalition_agents:
        raise BudgetExceeded(
            f"coalition search over {len(base)} agents exceeds the budget "
            f"of {budget.max_coalition_agents}"
        )
    for mask in range(1, 1 << len(base)):
        members = [base[b] for b in range(len(base)) if (mask >> b) & 1]
        pool = [instance.endowment[a] for a in members if a in instance.endowment]
        if len(pool) < len(members):
            continue
        for winner in members:
            if winner in sat:
                continue
            adj: list[list[int]] = []
            feasible = True
            for a in members:
                if a == winner or a in sat:
                    options = [p for p, h in enumerate(pool) if h in instance.acceptable[a]]
                else:
                    options = list(range(len(pool)))
                if not options:
                    feasible = False
                    break
                adj.append(options)
            if not feasible:
                continue
            matched = _kuhn_assign(adj, len(pool))
            if matched is None:
                continue
            return Verdict(
                False,
                WeakBlockingWitness(
                    coalition=tuple(members),
                    reallocation={a: pool[matched[i]] for i, a in enumerate(members)},
                    improving_agent=winner,
                ),
            )
    return Verdict(True)


# --------------------------------------------------------------------------
# Strategyproofness sweep


def check_strategyproofness(
    instance: Instance,
    mechanism: Mechanism,
    policy: PermutationPolicy | None = None,
    budget: SizeBudget | None = None,
) -> ManipulationWitness | None:
    """Exhaustively try every report of every agent; return the first report
    that strictly raises the reporting agent's true utility, if any.

    Agents already satisfied under truth-telling are skipped: with 1-0
    utilities they have nothing left to gain.
    """
    budget = budget or SizeBudget.from_env()
    m = instance.num_houses
    if m > budget.max_misreport_houses:
        raise BudgetExceeded(
            f"misreport sweep over {m} houses exceeds the budget "
            f"of {budget.max_misreport_houses}"
        )
    policy = policy or PermutationPolicy.identity()
    truthful = run_mechanism(instance, mechanism, policy)
    for agent in instance.agents:
        true_set = instance.acceptable[agent]
        got = truthful.allocation.house_of(agent)
        if got is not None and got in true_set:
            continue
        for bits in range(1 << m):
            reported = frozenset(
                instance.houses[j] for j in range(m) if (bits >> j) & 1
            )
            if reported == true_set:
                continue
            twisted = Instance(
                agents=instance.agents,
                houses=instance.houses,
                endowment=instance.endowment,
                acceptable={**instance.acceptable, agent: reported},
            )
            outcome = run_mechanism(twisted, mechanism, policy)
            landed = outcome.allocation.house_of(agent)
            if landed is not None and landed in true_set:
                return ManipulationWitness(
                    agent=agent,
                    reported=reported,
                    truthful_utility=0,
                    misreport_utility=1,
                )
    return None


# --------------------------------------------------------------------------
# Witness re-verification (kept separate from the searches above)


def verify_violation_witness(
    instance: Instance, allocation: Allocation, witness: ViolationWitness, notion: str
) -> bool:
    """Re-check an IR ("ir") or S-IR ("sir") violation from its definition."""
    agent = witness.agent
    if agent not in instance.agent_index:
        return False
    got = allocation.house_of(agent)
    if got != witness.assigned:
        return False
    own = instance.endowment_of(agent)
    if notion == "ir":
        return utility(instance, agent, got) < utility(instance, agent, own)
    if notion == "sir":
        if own is None:
            return False
        strictly_better = (
            got is not None
            and got in instance.acceptable[agent]
            and own not in instance.acceptable[agent]
        )
        return got != own and not strictly_better
    raise ValueError(f"unknown notion {notion!r}")


def verify_domination_witness(
    instance: Instance, allocation: Allocation, witness: DominationWitness
) -> bool:
    other = witness.allocation
    validate_allocation(instance, other)
    strict = False
    for agent in instance.agents:
        u_old = utility(instance, agent, allocation.house_of(agent))
        u_new = utility(instance, agent, other.house_of(agent))
        if u_new < u_old:
            return False
        if u_new > u_old:
            strict = True
    return strict


def verify_blocking_witness(
    instance: Instance, allocation: Allocation, witness: BlockingWitness
) -> bool:
    members = witness.coalition
    realloc = witness.reallocation
    if not members or len(set(members)) != len(members):
        return False
    if set(realloc) != set(members):
        return False
    pool = set()
    for a in members:
        own = instance.endowment_of(a)
        if own is None:
            return False
        pool.add(own)
    houses = list(realloc.values())
    if len(set(houses)) != len(houses) or not set(houses) <= pool:
        return False
    for a in members:
        if utility(instance, a, realloc[a]) <= utility(instance, a, allocation.house_of(a)):
            return False
    return True


def verify_weak_blocking_witness(
    instance: Instance, allocation: Allocation, witness: WeakBlockingWitness
) -> bool:
    members = witness.coalition
    realloc = witness.reallocation
    if not members or len(set(members)) != len(members):
        return False
    if set(realloc) != set(members) or witness.improving_agent not in members:
        return False
    pool = set()
    for a in members:
        own = instance.endowment_of(a)
        if own is None:
            return False
        pool.add(own)
    houses = list(realloc.values())
    if len(set(houses)) != len(houses) or not set(houses) <= pool:
        return False
    for a in members:
        u_new = utility(instance, a, realloc[a])
        u_old = utility(instance, a, allocation.house_of(a))
        if u_new < u_old:
            return False
        if a == witness.improving_agent and u_new <= u_old:
            return False
    return True


def verify_manipulation_witness(
    instance: Instance,
    mechanism: Mechanism,
    witness: ManipulationWitness,
    policy: PermutationPolicy | None = None,
) -> bool:
    policy = policy or PermutationPolicy.identity()
    agent = witness.agent
    true_set = instance.acceptable[agent]
    truthful = run_mechanism(instance, mechanism, policy)
    u_true = utility(instance, agent, truthful.allocation.house_of(agent))
    twisted = Instance(
        agents=instance.agents,
        houses=instance.houses,
        endowment=instance.endowment,
        acceptable={**instance.acceptable, agent: frozenset(witness.reported)},
    )
    outcome = run_mechanism(twisted, mechanism, policy)
    landed = outcome.allocation.house_of(agent)
    u_lied = 1 if (landed is not None and landed in true_set) else 0
    return u_lied > u_true


def verify_welfare_gap_witness(
    instance: Instance,
    allocation: Allocation,
    witness: WelfareGapWitness,
    constraint: str,
) -> bool:
    """The exemplar attains the claimed target under the claimed constraint."""
    if welfare(instance, allocation) != witness.achieved:
        return False
    if welfare(instance, witness.exemplar) != witness.target:
        return False
    if constraint == "ir":
        return is_ir(instance, witness.exemplar)
    if constraint == "sir":
        return is_sir(instance, witness.exemplar)
    if constraint == "none":
        return True
    raise ValueError(f"unknown constraint {constraint!r}")


# --------------------------------------------------------------------------
# Property evaluation used by the CLI


def evaluate_properties(
    instance: Instance,
    allocation: Allocation,
    properties: tuple[str, ...],
    budget: SizeBudget | None = None,
    po_method: str = "certificate",
) -> PropertyReport:
    """Evaluate the requested property keys against one allocation."""
    budget = budget or SizeBudget.from_env()
    verdicts: dict[str, Verdict] = {}
    maxima: WelfareMaxima | None = None

    def constrained_maxima() -> WelfareMaxima:
        nonlocal maxima
        if maxima is None:
            maxima = welfare_maxima(instance, budget)
        return maxima

    for key in properties:
        if key == "ir":
            bad = ir_violation(instance, allocation)
            verdicts[key] = Verdict(bad is None, bad)
        elif key == "sir":
            bad = sir_violation(instance, allocation)
            verdicts[key] = Verdict(bad is None, bad)
        elif key == "po":
            verdicts[key] = is_pareto_optimal(instance, allocation, budget, po_method)
        elif key == "core":
            verdicts[key] = is_core_stable(instance, allocation, budget)
        elif key == "strict-core":
            verdicts[key] = is_strict_core_stable(instance, allocation, budget)
        elif key == "maxw":
            target, exemplar = max_welfare_allocation(instance)
            achieved = welfare(instance, allocation)
            if achieved == target:
                verdicts[key] = Verdict(True)
            else:
                verdicts[key] = Verdict(
                    False, WelfareGapWitness(achieved, target, exemplar)
                )
        elif key in ("maxw-ir", "maxw-sir"):
            found = constrained_maxima()
            if key == "maxw-ir":
                target, exemplar = found.ir, found.ir_argmax
            else:
                target, exemplar = found.sir, found.sir_argmax
            achieved = welfare(instance, allocation)
            if achieved == target:
                verdicts[key] = Verdict(True)
            else:
                verdicts[key] = Verdict(
                    False, WelfareGapWitness(achieved, target, exemplar)
                )
        else:
            raise ValueError(f"unknown property {key!r}")
    return PropertyReport(verdicts=verdicts)
