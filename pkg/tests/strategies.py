"""
Hypothesis strategies for service ASTs
Generated specs use Single / BestBinding / AllBindings / Split only (no
Sequence, no links), so every one of them parses back from its rendering.
"""

from hypothesis import strategies as st

from chainc.model import AllBindings, BestBinding, NormalBranch, PassBranch, ServiceSpec, Single, Split

NAMES = [
    "BNG", "NAT", "FW", "IDS", "DPI", "LB", "WOC", "MON", "CL", "A", "B",
    "HTTP-Filter", "Video-Opt", "TCP_Opt", "f2", "link", "component",
]

names = st.sampled_from(NAMES)


def function_sets(max_size: int):
    return st.lists(names, min_size=1, max_size=max_size, unique=True).map(tuple)


@st.composite
def compositions(draw, depth: int = 5, max_set: int = 4):
    if depth <= 1 or draw(st.integers(0, 3)) > 0:
        kind = draw(st.sampled_from(["single", "best", "all"]))
        if kind == "single":
            return Single(draw(names))
        if kind == "best":
            return BestBinding(draw(function_sets(max_set)))
        return AllBindings(draw(function_sets(max_set)))

    splitter = draw(names)
    pre = draw(st.one_of(st.just(()), function_sets(max_set)))
    branches = []
    for _ in range(draw(st.integers(1, 3))):
        if draw(st.booleans()) and draw(st.booleans()):
            branches.append(PassBranch())
        else:
            body = draw(st.lists(compositions(depth - 1, max_set), min_size=1, max_size=3))
            branches.append(NormalBranch(tuple(body), draw(st.integers(1, 3))))
    return Split(splitter, tuple(branches), pre)


@st.composite
def service_specs(draw, depth: int = 5, max_set: int = 4):
    items = draw(st.lists(compositions(depth, max_set), min_size=1, max_size=4))
    return ServiceSpec(tuple(items))
