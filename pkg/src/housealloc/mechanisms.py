"""The MSIR and MIR mechanisms.

Both mechanisms share one skeleton: build a padded bipartite graph whose
perfect matchings are exactly the allocations the mechanism treats as
feasible (strongly individually rational for MSIR, individually rational
for MIR), take the maximum number of satisfiable agents W from one solve,
then walk the agents in a fixed order trying to delete each agent's
weight-0 edges.  A deletion sticks only if a weight-W perfect matching
still exists; the flag recorded for the agent says whether it is now
guaranteed an acceptable house in every remaining optimum.

Graph shape (k = |n - m| pads the short side):

* every endowed agent is connected to its endowment (weight 1 iff
  acceptable) and to its other acceptable houses (weight 1);
* under MSIR those are its only edges, so an agent with an acceptable
  endowment is pinned to it and nobody endowed can drift to a strange
  house; feasibility coincides with strong individual rationality;
* under MIR an agent whose endowment is unacceptable is additionally
  connected to every right vertex (weight 0 on the unacceptable ones),
  so it may trade away or end up with nothing; feasibility coincides
  with plain individual rationality;
* unendowed agents connect to every right vertex, dummy agents and dummy
  houses carry weight 0 everywhere they appear.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .matching import (
    Matching,
    WeightedBipartiteGraph,
    max_weight_perfect_matching,
    remove_zero_edges,
    restore_edges,
)
from .model import Allocation, Instance, welfare
from .rng import SplitMix64


class Mechanism(str, Enum):
    MSIR = "msir"
    MIR = "mir"


class InfeasibleInput(ValueError):
    """The refinement loop was handed a graph that cannot reach the target
    weight; the graph builders never produce this."""


class MechanismInvariantError(RuntimeError):
    """A postcondition the mechanism guarantees by construction failed."""


class PermutationError(ValueError):
    pass


@dataclass(frozen=True)
class PermutationPolicy:
    """How the agent processing order is chosen.

    The order is fixed before preferences are read; keeping it independent
    of the reports is what the strategyproofness argument leans on.
    """

    kind: str
    order: tuple[str, ...] | None = None
    seed: int | None = None

    @classmethod
    def identity(cls) -> "PermutationPolicy":
        return cls(kind="identity")

    @classmethod
    def explicit(cls, order: tuple[str, ...]) -> "PermutationPolicy":
        return cls(kind="explicit", order=tuple(order))

    @classmethod
    def seeded(cls, seed: int) -> "PermutationPolicy":
        return cls(kind="seeded", seed=seed)

    def realize(self, agents: tuple[str, ...]) -> tuple[str, ...]:
        if self.kind == "identity":
            return tuple(agents)
        if self.kind == "explicit":
            assert self.order is not None
            if sorted(self.order) != sorted(agents) or len(self.order) != len(agents):
                raise PermutationError("explicit order is not a permutation of the agents")
            return self.order
        if self.kind == "seeded":
            assert self.seed is not None
            indices = list(range(len(agents)))
            SplitMix64(self.seed).shuffle(indices)
            return tuple(agents[i] for i in indices)
        raise PermutationError(f"unknown permutation policy {self.kind!r}")


@dataclass(frozen=True)
class RoundRecord:
    """One refinement round: which edges went, what the re-solve said."""

    agent: str
    removed: tuple[str, ...]  # right-vertex labels of the removed edges
    weight: int | None  # None when no perfect matching remained
    accepted: bool


@dataclass(frozen=True)
class MechanismTrace:
    initial_weight: int
    permutation: tuple[str, ...]
    satisfied_flags: dict[str, int]
    rounds: tuple[RoundRecord, ...]


@dataclass(frozen=True)
class MechanismResult:
    allocation: Allocation
    trace: MechanismTrace


def _fresh_labels(prefix: str, count: int, taken: set[str]) -> list[str]:
    # Dummy labels must not collide with user-chosen ids.
    labels: list[str] = []
    k = 0
    while len(labels) < count:
        candidate = f"{prefix}{k}"
        k += 1
        if candidate in taken:
            continue
        labels.append(candidate)
        taken.add(candidate)
    return labels


def _padded_sides(instance: Instance) -> tuple[tuple[str, ...], tuple[str, ...]]:
    n, m = instance.num_agents, instance.num_houses
    taken = set(instance.agents) | set(instance.houses)
    left = list(instance.agents)
    right = list(instance.houses)
    if m > n:
        left.extend(_fresh_labels("~dummy_agent_", m - n, taken))
    elif n > m:
        right.extend(_fresh_labels("~dummy_house_", n - m, taken))
    return tuple(left), tuple(right)


def build_msir_graph(instance: Instance) -> WeightedBipartiteGraph:
    """Feasibility graph whose perfect matchings are the S-IR allocations."""
    left, right = _padded_sides(instance)
    graph = WeightedBipartiteGraph(left, right)
    n, m = instance.num_agents, instance.num_houses
    hidx = instance.house_index
    for ai, agent in enumerate(instance.agents):
        own = instance.endowment_of(agent)
        acc = instance.acceptable[agent]
        if own is not None:
            graph.add_edge(ai, hidx[own], 1 if own in acc else 0)
            if own not in acc:
                for house in instance.houses:
                    if house in acc and house != own:
                        graph.add_edge(ai, hidx[house], 1)
        else:
            for rj in range(len(right)):
                real_and_acceptable = rj < m and right[rj] in acc
                graph.add_edge(ai, rj, 1 if real_and_acceptable else 0)
    for ai in range(n, len(left)):  # dummy agents
        for rj in range(len(right)):
            graph.add_edge(ai, rj, 0)
    return graph


def build_mir_graph(instance: Instance) -> WeightedBipartiteGraph:
    """Feasibility graph whose perfect matchings are the IR allocations."""
    left, right = _padded_sides(instance)
    graph = WeightedBipartiteGraph(left, right)
    n, m = instance.num_agents, instance.num_houses
    hidx = instance.house_index
    for ai, agent in enumerate(instance.agents):
        own = instance.endowment_of(agent)
        acc = instance.acceptable[agent]
        if own is not None and own in acc:
            graph.add_edge(ai, hidx[own], 1)
            for house in instance.houses:
                if house in acc and house != own:
                    graph.add_edge(ai, hidx[house], 1)
        else:
            # Unacceptable endowment or no endowment: free to go anywhere,
            # including a dummy house (= receive nothing).
            for rj in range(len(right)):
                real_and_acceptable = rj < m and right[rj] in acc
                graph.add_edge(ai, rj, 1 if real_and_acceptable else 0)
    for ai in range(n, len(left)):
        for rj in range(len(right)):
            graph.add_edge(ai, rj, 0)
    return graph


def serial_refinement(
    graph: WeightedBipartiteGraph,
    permutation: tuple[str, ...],
    target_weight: int,
) -> tuple[WeightedBipartiteGraph, dict[str, int], tuple[RoundRecord, ...]]:
    """Process agents in order, locking in acceptable houses where possible.

    For each agent: drop all its weight-0 edges and re-solve.  Keep the
    drop (flag 1) iff a perfect matching of the target weight survives;
    otherwise put the edges back (flag 0).  Mutates ``graph`` in place and
    returns it alongside the flags and the per-round log.
    """
    initial = max_weight_perfect_matching(graph)
    if initial is None or initial.weight != target_weight:
        raise InfeasibleInput(
            f"graph does not admit a perfect matching of weight {target_weight}"
        )
    index = {label: i for i, label in enumerate(graph.left)}
    flags: dict[str, int] = {}
    rounds: list[RoundRecord] = []
    for agent in permutation:
        if agent not in index:
            raise PermutationError(f"permutation names unknown agent {agent!r}")
        delta = remove_zero_edges(graph, index[agent])
        solved = max_weight_perfect_matching(graph)
        accepted = solved is not None and solved.weight >= target_weight
        if not accepted:
            restore_edges(graph, delta)
        flags[agent] = 1 if accepted else 0
        rounds.append(
            RoundRecord(
                agent=agent,
                removed=tuple(graph.right[rj] for _, rj, _ in delta.removed),
                weight=None if solved is None else solved.weight,
                accepted=accepted,
            )
        )
    return graph, flags, tuple(rounds)


def run_mechanism(
    instance: Instance,
    mechanism: Mechanism,
    policy: PermutationPolicy | None = None,
) -> MechanismResult:
    """Run MSIR or MIR end to end and return the allocation plus its trace."""
    policy = policy or PermutationPolicy.identity()
    builder = build_msir_graph if mechanism is Mechanism.MSIR else build_mir_graph
    graph = builder(instance)

    first = max_weight_perfect_matching(graph)
    if first is None:
        raise InfeasibleInput("mechanism graph admits no perfect matching")
    target = first.weight

    permutation = policy.realize(instance.agents)
    graph, flags, rounds = serial_refinement(graph, permutation, target)

    final = max_weight_perfect_matching(graph)
    if final is None or final.weight != target:
        raise MechanismInvariantError("refined graph lost the target weight")

    allocation = _extract_allocation(instance, final)
    trace = MechanismTrace(
        initial_weight=target,
        permutation=permutation,
        satisfied_flags=flags,
        rounds=rounds,
    )
    _check_postconditions(instance, allocation, trace)
    return MechanismResult(allocation=allocation, trace=trace)


def _extract_allocation(instance: Instance, final: Matching) -> Allocation:
    m = instance.num_houses
    assignment: dict[str, str | None] = {}
    for ai, agent in enumerate(instance.agents):
        rj = final.assignment[ai]
        assignment[agent] = instance.houses[rj] if rj < m else None
    return Allocation(assignment=assignment)


def _check_postconditions(
    instance: Instance, allocation: Allocation, trace: MechanismTrace
) -> None:
    achieved = welfare(instance, allocation)
    if achieved != trace.initial_weight:
        raise MechanismInvariantError(
            f"allocation welfare {achieved} != matching weight {trace.initial_weight}"
        )
    if sum(trace.satisfied_flags.values()) != trace.initial_weight:
        raise MechanismInvariantError("satisfied flags do not sum to the weight")
    flagged = {a for a, f in trace.satisfied_flags.items() if f == 1}
    satisfied = {
        a
        for a, h in allocation.assignment.items()
        if h is not None and h in instance.acceptable[a]
    }
    if flagged != satisfied:
        raise MechanismInvariantError("flagged agents differ from satisfied agents")
