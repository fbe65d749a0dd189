"""Factor a functor as a final functor followed by a discrete fibration.

Two points sent to the one object of Z2.  The functor is neither final nor
a discrete fibration; the middle groupoid records, for the object, the
components of its comma groupoid.
"""

from relators.factorization import comprehensive_factorization, is_discrete_fibration, is_final
from relators.groupoid import GpdFunctor, discrete, group_groupoid, pi0
from relators.groups import cyclic

F = GpdFunctor(discrete(2), group_groupoid(cyclic(2)), [0, 0], [0, 0])
print("final:", is_final(F))
print("discrete fibration:", is_discrete_fibration(F))

r = comprehensive_factorization(F)
M = r.middle
print(f"middle: {M.n_objects} objects, {M.n_arrows} arrows, components {list(pi0(M))}")
for x, rep in enumerate(r.representatives):
    print(f"  object {x}: (b, beta, a) = {rep}")
print("final part on objects:", list(r.final_part.obj_map))
print("parts check:", bool(is_final(r.final_part)), bool(is_discrete_fibration(r.dfib_part)))
