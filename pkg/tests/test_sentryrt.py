import numpy as np
import pytest

from conftest import make_dfg
from src.common.config import SchedulerConfig
from src.common.errors import DivergenceError, InsufficientCoresError, ScheduleError
from src.sentryrt.maxplus import (
    NEG_INF,
    identity,
    maxplus_evolve,
    oplus,
    otimes,
    steady_state_interval,
    timing_matrix,
    timing_matrix_from,
)
from src.sentryrt.oracle import self_timed_ends
from src.sentryrt.pipelines import allocate_pipelines
from src.sentryrt.schedule import channel_activity, check_schedule, gantt_rows, schedule_batch

DIAMOND = [(0, 1), (0, 2), (1, 3), (2, 3)]


def _random_matrix(rng, n):
    m = rng.integers(-5, 10, size=(n, n)).astype(float)
    m[rng.random((n, n)) < 0.3] = NEG_INF
    return m


def _random_dfg_shape(rng, max_n=12):
    n = int(rng.integers(1, max_n + 1))
    edges = [(a, b) for a in range(n) for b in range(a + 1, n) if rng.random() < 0.3]
    times = [int(t) for t in rng.integers(1, 101, size=n)]
    return times, edges


def _schedule(times, edges, batch, **kw):
    dfg = make_dfg(times, edges)
    return dfg, schedule_batch(dfg, allocate_pipelines(dfg, len(times)), batch, **kw)


# ---- max-plus algebra ---- #


def test_semiring_laws(rng):
    for _ in range(1000):
        n = int(rng.integers(1, 5))
        a, b, c = (_random_matrix(rng, n) for _ in range(3))
        np.testing.assert_array_equal(oplus(a, b), oplus(b, a))
        np.testing.assert_array_equal(oplus(oplus(a, b), c), oplus(a, oplus(b, c)))
        np.testing.assert_array_equal(oplus(a, np.full((n, n), NEG_INF)), a)
        np.testing.assert_array_equal(otimes(otimes(a, b), c), otimes(a, otimes(b, c)))
        np.testing.assert_array_equal(otimes(identity(n), a), a)
        np.testing.assert_array_equal(otimes(a, identity(n)), a)
        np.testing.assert_array_equal(otimes(a, oplus(b, c)), oplus(otimes(a, b), otimes(a, c)))


def test_single_subnet_evolution():
    t = timing_matrix_from([5], [])
    np.testing.assert_array_equal(maxplus_evolve(t, [0], 3), [[5], [10], [15]])


def test_chain_timing_matrix():
    t = timing_matrix_from([3, 4], [(0, 1)])
    np.testing.assert_array_equal(t, [[3, NEG_INF], [7, 4]])
    np.testing.assert_array_equal(maxplus_evolve(t, [0, 0], 2), [[3, 7], [6, 11]])


def test_join_waits_for_slowest_branch():
    t = timing_matrix_from([2, 2, 2, 2], DIAMOND)
    first = maxplus_evolve(t, [0, 0, 0, 0], 1)[0]
    assert first[3] == 6
    np.testing.assert_array_equal(first, self_timed_ends([2, 2, 2, 2], DIAMOND, 1)[0])


def test_timing_matrix_rejects_cycles_and_unprofiled():
    with pytest.raises(ScheduleError, match="cycle"):
        timing_matrix_from([1, 1], [(0, 1), (1, 0)])
    dfg = make_dfg([1, 2], [(0, 1)]).copy(update={"exec_times": ()})
    with pytest.raises(ScheduleError, match="profile"):
        timing_matrix(dfg)


def test_maxplus_matches_event_simulation(rng):
    for _ in range(100):
        times, edges = _random_dfg_shape(rng)
        t = timing_matrix_from(times, edges)
        rows = maxplus_evolve(t, np.zeros(len(times)), 50)
        np.testing.assert_array_equal(rows, self_timed_ends(times, edges, 50))


@pytest.mark.parametrize(
    "times, edges, expected",
    [
        ([5], [], 5),
        ([3, 4], [(0, 1)], 4),
        ([3, 4, 4, 5, 2], [(0, 1), (1, 4), (2, 3), (3, 4)], 5),
    ],
)
def test_steady_state_interval(times, edges, expected):
    t = timing_matrix_from(times, edges)
    assert steady_state_interval(t) == expected
    ends = self_timed_ends(times, edges, 1000)
    slope = (ends[999].max() - ends[499].max()) / 500
    assert slope == pytest.approx(expected, rel=1e-3)


def test_interval_is_slowest_core(rng):
    for _ in range(20):
        times, edges = _random_dfg_shape(rng)
        assert steady_state_interval(timing_matrix_from(times, edges)) == max(times)


def test_interval_gives_up():
    t = timing_matrix_from([3, 4], [(0, 1)])
    with pytest.raises(DivergenceError):
        steady_state_interval(t, SchedulerConfig(settle_rounds=20, max_iterations=10))


# ---- pipelines ---- #


def test_pipelines():
    assert allocate_pipelines(make_dfg([1] * 3, [(0, 1), (1, 2)]), 3) == {0: 0, 1: 0, 2: 0}
    assert allocate_pipelines(make_dfg([1] * 4, DIAMOND), 4) == {0: 0, 1: 1, 2: 2, 3: 3}
    assert allocate_pipelines(make_dfg([1] * 4, []), 8) == {0: 0, 1: 1, 2: 2, 3: 3}
    fork = make_dfg([1] * 6, [(0, 1), (1, 2), (2, 3), (2, 4), (3, 5), (4, 5)])
    lanes = allocate_pipelines(fork, 6)
    assert lanes[0] == lanes[1] == lanes[2]
    assert len({lanes[3], lanes[4], lanes[5], lanes[0]}) == 4


def test_pipelines_need_a_core_each():
    with pytest.raises(InsufficientCoresError):
        allocate_pipelines(make_dfg([1] * 3, [(0, 1), (1, 2)]), 2)


# ---- batch schedules ---- #


def test_single_image_latency_is_critical_path():
    _, s = _schedule([1, 2, 5, 1], DIAMOND, 1)
    assert s.latencies == (7,)
    assert s.makespan == 7


def test_large_batch_throughput():
    _, s = _schedule([3, 4], [(0, 1)], 1000)
    assert s.interval == 4
    assert s.throughput == pytest.approx(1 / 4, rel=0.02)


def test_overlap_against_one_image_at_a_time():
    _, piped = _schedule([3, 4], [(0, 1)], 2)
    _, serial = _schedule([3, 4], [(0, 1)], 2, overlap=False)
    assert piped.makespan == 11
    assert serial.makespan == 14
    assert serial.slot(0, 1).start == 7


def test_batch_size_trends():
    previous = None
    for batch in (1, 2, 4, 8):
        _, s = _schedule([3, 4], [(0, 1)], batch)
        if previous is not None:
            assert s.throughput >= previous.throughput
            assert s.mean_latency >= previous.mean_latency
        previous = s


def test_images_overlap_on_a_chain():
    _, s = _schedule([2] * 6, [(i, i + 1) for i in range(5)], 3)
    assert s.slot(0, 1).start < s.slot(5, 0).end
    assert len(gantt_rows(s)) == 18
    assert s.summary()["pipelines"] == 1


def test_schedule_checks():
    dfg, s = _schedule([3, 4], [(0, 1)], 2)
    bad = list(s.slots)
    bad[0] = bad[0].copy(update={"end": bad[0].end + 1})
    with pytest.raises(ScheduleError, match="duration"):
        check_schedule(s.copy(update={"slots": tuple(bad)}), dfg)
    with pytest.raises(ScheduleError):
        schedule_batch(dfg, {0: 0}, 2)
    with pytest.raises(ScheduleError):
        schedule_batch(dfg, {0: 0, 1: 0}, 0)


def test_channel_activity():
    dfg, s = _schedule([3, 4], [(0, 1)], 2)
    assert channel_activity(dfg, s) == {0: [(0, 3), (3, 6)]}
