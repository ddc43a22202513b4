"""Shared brute-force oracles for the test suite."""

import itertools

from subcatdyn.dynamics import check_subcategorical, make_dynamics


def brute_force_largest_subcategorical(g):
    """Union of every sub-categorical subset of g's transition pairs,
    enumerated exhaustively. Only sane for a dozen pairs or so."""
    indexed = [(arrow, pair) for arrow in g.motor.arrow_names()
               for pair in sorted(g.transition(arrow).pairs)]
    best = {arrow: set() for arrow in g.motor.arrow_names()}
    for mask in itertools.product((False, True), repeat=len(indexed)):
        pairs = {arrow: set() for arrow in g.motor.arrow_names()}
        for keep, (arrow, pair) in zip(mask, indexed):
            if keep:
                pairs[arrow].add(pair)
        candidate = make_dynamics(g.motor, g.state_sets, pairs)
        if check_subcategorical(candidate, max_violations=1).holds:
            for arrow in best:
                best[arrow] |= pairs[arrow]
    return make_dynamics(g.motor, g.state_sets, best)


def total_pairs(d):
    return sum(len(d.transition(a).pairs) for a in d.motor.arrow_names())
