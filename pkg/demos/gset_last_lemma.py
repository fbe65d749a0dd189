"""The composite of internal distributors among Z2-sets.

Builds random composable internal distributors over finite Z2-sets and
checks that the span composite factors through the coequalized one.
"""

import sys

from relators.base import parse_base
from relators.generators import gen_internal_pair, make_rng
from relators.internal import verify_last_lemma

base = parse_base(sys.argv[1] if len(sys.argv) > 1 else "gset:z2")
for seed in range(5):
    S, T = gen_internal_pair(make_rng(seed), base)
    report = verify_last_lemma(S, T, strict=False)
    print(f"seed {seed}: ok={report.ok} {report.sizes}")
