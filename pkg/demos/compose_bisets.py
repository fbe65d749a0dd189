"""Compose two relators between groupoids in both ways and compare.

The regular Z2-biset composed with itself: once through the coend, once by
pulling back the elements spans and reflecting the result.
"""

from relators import jsonio
from relators.composition import canonical_comparison, compose_distributors, compose_spans
from relators.distributors import elements_span, validate_distributor
from relators.groupoid import group_groupoid
from relators.groups import cyclic

Z2 = group_groupoid(cyclic(2))
left = {(a, s): Z2.mul(a, s) for a in range(2) for s in range(2)}
right = {(s, b): Z2.mul(s, b) for s in range(2) for b in range(2)}
S = validate_distributor(Z2, Z2, {(0, 0): 2}, left, right)

TS = compose_distributors(S, S)
print("coend composite fibers:", TS.sizes())
for x, members in enumerate(TS.members):
    print(f"  class {x}: pairs (t, s) = {list(members)}")

span = compose_spans(elements_span(S), elements_span(S))
print(f"span composite apex: {span.apex.n_objects} objects, {span.apex.n_arrows} arrows")

c = canonical_comparison(S, S)
print("comparison:", jsonio.dumps(c.verdict), end="")
print("mapping route 1 -> route 2:", c.mapping)
