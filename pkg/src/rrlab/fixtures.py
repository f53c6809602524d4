"""Built-in example graph `fig2`: one boss, two middle managers, and a
row of terminal workers.

The encoded data: eight terminal vertices whose max norms read
2, 3, 4, 5, 6, 8, 8, 9 and whose reported minima read 2, 1, 1, 5, 4, 4,
7, 3; three boss committees reporting 4, 7 and 3, so the boss at (7, 11)
settles on 3; middle managers (3, 5) and (6, 8) computing 2 and 4 through
their own single committees.

Only the committee structure named above is data; the remaining wiring
(which terminals feed the managers' committees, and the second member of
the boss's third committee) is reconstruction chosen to keep every edge
strictly norm-decreasing, and is not part of the encoded reports.
"""

from __future__ import annotations

from dataclasses import dataclass

from .graph import DownwardGraph, graph_from_dict, graph_to_dict
from .lattice import FiniteDomain, Point
from .selection import (
    CommitteeSpec,
    TableRule,
    explicit_committees_from_dict,
    explicit_committees_to_dict,
)

BOSS: Point = (7, 11)
MANAGER_A: Point = (3, 5)
MANAGER_B: Point = (6, 8)

# left-to-right display order; max norms 2,3,4,5,6,8,8,9 / minima 2,1,1,5,4,4,7,3
TERMINALS: tuple[Point, ...] = (
    (2, 2),
    (3, 1),
    (4, 1),
    (5, 5),
    (6, 4),
    (8, 4),
    (8, 7),
    (9, 3),
)

FIG2_R = 3


@dataclass(frozen=True)
class Fig2Fixture:
    graph: DownwardGraph
    rule: TableRule
    spec: CommitteeSpec


def fig2_fixture() -> Fig2Fixture:
    domain = FiniteDomain(2, TERMINALS + (MANAGER_A, MANAGER_B, BOSS))
    committees = {
        BOSS: [
            [MANAGER_A, MANAGER_B, (8, 7)],
            [MANAGER_B, (8, 7)],
            [MANAGER_B, (9, 3)],  # reconstruction: carries the report 3
        ],
        MANAGER_A: [[(2, 2), (3, 1)]],
        MANAGER_B: [[(6, 4), (5, 5)]],
    }
    edges = frozenset(
        (z, member) for z, cs in committees.items() for c in cs for member in c
    )
    graph = DownwardGraph(domain, edges)
    spec = CommitteeSpec.explicit_spec(FIG2_R, committees)

    rule = TableRule()
    rule.add(BOSS, [(MANAGER_A, 2), (MANAGER_B, 4), ((8, 7), 7)], 4)
    rule.add(BOSS, [(MANAGER_B, 4), ((8, 7), 7), ((8, 7), 7)], 7)
    rule.add(BOSS, [(MANAGER_B, 4), ((9, 3), 3), ((9, 3), 3)], 3)
    rule.add(MANAGER_A, [((2, 2), 2), ((3, 1), 1), ((3, 1), 1)], 2)
    rule.add(MANAGER_B, [((6, 4), 4), ((5, 5), 5), ((5, 5), 5)], 4)
    return Fig2Fixture(graph=graph, rule=rule, spec=spec)


def fig2_bundle() -> dict:
    """Serializable bundle: graph plus its committee table and rule."""
    fx = fig2_fixture()
    return {
        "fixture": "fig2",
        "graph": graph_to_dict(fx.graph),
        "r": FIG2_R,
        "committees": explicit_committees_to_dict(fx.spec),
        "rule": fx.rule.to_list(),
        "terminals": [list(p) for p in TERMINALS],
    }


def fixture_from_bundle(data: dict) -> Fig2Fixture:
    graph = graph_from_dict(data["graph"])
    spec = explicit_committees_from_dict(int(data["r"]), data["committees"])
    rule = TableRule.from_list(data["rule"])
    return Fig2Fixture(graph=graph, rule=rule, spec=spec)
