from folsing.divisor_graph import Component, CornerSingularity, DecoratedGraph, TailSingularity


def chain_graph(weights, corner_cs=None, tails=None, ids=None):
    """Linear chain P1 - P2 - ... with given weights and decorations."""
    n = len(weights)
    ids = ids or [f"P{i + 1}" for i in range(n)]
    comps = tuple(Component(ids[i], w) for i, w in enumerate(weights))
    corner_cs = corner_cs or [(-1, -1)] * (n - 1)
    corners = tuple(
        CornerSingularity(f"z{i + 1}", ids[i], ids[i + 1], complex(a), complex(b))
        for i, (a, b) in enumerate(corner_cs)
    )
    tails = tuple(
        TailSingularity(f"q{i + 1}", ids[i], complex(cs)) for i, cs in enumerate(tails or [])
        if cs is not None
    )
    return DecoratedGraph(comps, corners, tails)
