import threading

import numpy as np
import pytest

from pktruss.frontier import BufferedAppender, LevelFrontier


@pytest.mark.parametrize("capacity", [1, 3, 2048])
def test_concurrent_appends_lose_and_duplicate_nothing(capacity):
    workers = 4
    items = np.arange(20000, dtype=np.uint32)
    target = np.zeros(items.size, dtype=np.uint32)
    app = BufferedAppender(target, workers, capacity=capacity)
    chunks = np.array_split(items, workers)

    def run(wid):
        for piece in np.array_split(chunks[wid], 7):
            app.extend(wid, piece)

    threads = [threading.Thread(target=run, args=(w,)) for w in range(workers)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    app.flush_all()
    assert len(app) == items.size
    assert np.array_equal(np.sort(app.committed()), items)


def test_flush_reserves_contiguous_blocks():
    target = np.zeros(10, dtype=np.uint32)
    app = BufferedAppender(target, 2, capacity=4)
    app.extend(0, [1, 2, 3, 4, 5])  # one full block flushed, 5 staged
    assert app.committed().tolist() == [1, 2, 3, 4]
    app.extend(1, [9])
    app.flush_all()
    assert sorted(app.committed().tolist()) == [1, 2, 3, 4, 5, 9]


def test_level_frontier_swap_and_check():
    f = LevelFrontier.empty(6)
    f.curr[:2] = [0, 3]
    f.curr_tail[0] = 2
    f.in_curr[[0, 3]] = True
    f.next[:1] = [5]
    f.next_tail[0] = 1
    f.in_next[5] = True
    f.check()
    f.processed[[0, 3]] = True
    f.in_curr[[0, 3]] = False
    f.swap()
    assert f.curr_edges().tolist() == [5] and f.next_len == 0
    assert f.in_curr.tolist() == [False] * 5 + [True]
    assert not f.in_next.any()
    f.check()


def test_level_frontier_check_catches_desync():
    f = LevelFrontier.empty(3)
    f.curr[0] = 1
    f.curr_tail[0] = 1
    with pytest.raises(AssertionError):
        f.check()
