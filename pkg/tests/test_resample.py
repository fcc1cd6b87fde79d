from __future__ import annotations

import math

from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import FixedTape
from hlc.engine import TrimmedHypergraph
from hlc.hypergraph import Hypergraph, InfeasibleParameters, generate_bounded_degree
from hlc.randomness import BitStream, ColorTape, trial_stream_id
from hlc.resample import conservative_resample, mt_resample, resample_with_restarts, step_budget
from hlc.structures import is_alpha_bad


def mono(e, coloring):
    return len({coloring[v] for v in e}) == 1


class TestMoserTardos:
    def test_already_proper(self):
        h = Hypergraph(4, [(0, 1), (2, 3)])
        res = mt_resample(h, [0, 1, 1, 0], 10, BitStream(ColorTape(0, 4), 0))
        assert res.success and res.steps_used == 0 and res.coloring == {0: 0, 1: 1, 2: 1, 3: 0}

    def test_zero_budget(self):
        h = Hypergraph(4, [(0, 1), (2, 3)])
        res = mt_resample(h, [0, 0, 1, 0], 0, BitStream(ColorTape(0, 4), 0))
        assert not res.success and res.steps_used == 0 and res.coloring == {0: 0, 1: 0, 2: 1, 3: 0}

    def test_single_edge_geometric_tail(self):
        h = Hypergraph(8, [range(8)])
        within3 = 0
        for seed in range(1000):
            res = mt_resample(h, [0] * 8, 10, BitStream(ColorTape(seed, 8), 0))
            within3 += res.success and res.steps_used <= 3
        assert within3 >= 990

    def test_lowest_id_first(self):
        h = Hypergraph(6, [(0, 1, 2), (3, 4, 5)])
        res = mt_resample(h, [0] * 6, 1, BitStream(ColorTape(1, 6), 0))
        assert res.trace == [0]
        assert res.resamples_per_edge == [1, 0]

    def test_trimmed_edges_of_mixed_size(self):
        g = TrimmedHypergraph((0, 1, 2, 3), [(0, 1), (1, 2, 3)], [0, 1])
        res = mt_resample(g, {0: 1, 1: 1, 2: 1, 3: 1}, 50, BitStream(ColorTape(4, 4), 9))
        assert res.success
        assert not mono((0, 1), res.coloring) and not mono((1, 2, 3), res.coloring)

    @settings(max_examples=60, deadline=None)
    @given(st.integers(0, 2**32), st.integers(0, 30))
    def test_success_is_honest_and_deterministic(self, seed, steps):
        try:
            h = generate_bounded_degree(40, 4, 3, seed)
        except InfeasibleParameters:
            return
        tape = ColorTape(seed, h.n)
        a = mt_resample(h, tape.initial_coloring(), steps, BitStream(tape, 3))
        b = mt_resample(h, tape.initial_coloring(), steps, BitStream(tape, 3))
        assert a.trace == b.trace and a.coloring == b.coloring
        assert a.success == (not any(mono(e, a.coloring) for e in h.edges))
        assert a.steps_used == len(a.trace) == sum(a.resamples_per_edge) <= steps
        assert a.bits_used == sum(len(h.edges[f]) for f in a.trace)

    def test_symmetric_lll_single_run(self):
        # k=6, vertex degree 2 gives delta <= 6 and e * 2^-5 * 7 < 1
        h = generate_bounded_degree(600, 6, 2, 5)
        assert math.e * 2 ** (1 - h.k) * (h.delta + 1) < 1
        budget = step_budget(h.m, h.delta)
        wins = 0
        for seed in range(500):
            tape = ColorTape(seed, h.n)
            init = tape.initial_coloring()
            wins += mt_resample(h, init, budget, BitStream(tape, 0)).success
        assert wins / 500 >= 0.45


class TestConservative:
    @settings(max_examples=80, deadline=None)
    @given(st.integers(0, 2**32))
    def test_alpha_one_is_moser_tardos(self, seed):
        try:
            h = generate_bounded_degree(30, 3, 3, seed)
        except InfeasibleParameters:
            return
        tape = ColorTape(seed, h.n)
        c = conservative_resample(h, 1.0, tape, 200)
        m = mt_resample(h, tape.initial_coloring(), 200, BitStream(tape, 0))
        assert c.trace == m.trace and c.coloring == m.coloring and c.success == m.success

    def test_no_bad_edges(self):
        h = Hypergraph(6, [(0, 1, 2), (3, 4, 5)])
        res = conservative_resample(h, 0.5, FixedTape([0, 1, 0, 1, 1, 0]), 10)
        assert res.success and res.steps_used == 0 and not res.resampled

    @settings(max_examples=120, deadline=None)
    @given(st.integers(0, 2**32), st.sampled_from([0.2, 0.3, 0.4, 0.5]))
    def test_resamples_only_bad_edge_vertices(self, seed, alpha):
        try:
            h = generate_bounded_degree(60, 5, 3, seed)
        except InfeasibleParameters:
            return
        tape = ColorTape(seed, h.n)
        res = conservative_resample(h, alpha, tape, 500)
        bad_vertices = {v for f in range(h.m) if is_alpha_bad(h, tape, alpha, f) for v in h.edges[f]}
        assert res.resampled <= bad_vertices

    def test_partial_resample_keeps_fresh_vertices(self):
        # edge 0 = {0..3} monochromatic; edge 1 = {3,4,5,6}. After edge 0 is
        # fully redrawn, an edge with too few fresh vertices only redraws the
        # non-fresh ones.
        h = Hypergraph(7, [(0, 1, 2, 3), (3, 4, 5, 6)])
        tape = FixedTape([0, 0, 0, 0, 0, 0, 0], seed=11)
        res = conservative_resample(h, 0.5, tape, 50)
        assert res.resampled <= {0, 1, 2, 3, 4, 5, 6}
        first = res.trace[0]
        assert first == 0


class TestRestarts:
    def test_step_budget(self):
        assert step_budget(0, 0) == 2
        assert step_budget(3, 144) == 2
        assert step_budget(300, 144) == 6

    def test_first_trial_rate_single_edge(self):
        g = TrimmedHypergraph((0, 1, 2), [(0, 1, 2)], [0])
        first = 0
        for seed in range(500):
            out = resample_with_restarts(g, g.vertices, 5, 10, ColorTape(seed, 3), 0)
            assert out.success
            first += out.trials_used == 1
        assert first / 500 >= 0.45

    def test_no_edges(self):
        g = TrimmedHypergraph((4, 5), [], [])
        out = resample_with_restarts(g, g.vertices, 3, 4, ColorTape(0, 6), 2)
        assert out.success and out.trials_used == 1 and set(out.coloring) == {4, 5}

    def test_unsatisfiable_exhausts(self):
        g = TrimmedHypergraph((0,), [(0,)], [0])
        out = resample_with_restarts(g, g.vertices, 1, 5, ColorTape(0, 1), 0)
        assert not out.success and out.trials_used == 5

    def test_trials_use_their_own_streams(self):
        g = TrimmedHypergraph((0, 1, 2, 3), [(0, 1, 2, 3)], [0])
        tape = ColorTape(77, 4)
        out = resample_with_restarts(g, g.vertices, 1, 1, tape, 6)
        bits = BitStream(tape, trial_stream_id(6, 0))
        init = {v: bits.next_bit() for v in g.vertices}
        ref = mt_resample(g, init, step_budget(1, 1), bits)
        assert out.success == ref.success
        if out.success:
            assert out.coloring == ref.coloring
