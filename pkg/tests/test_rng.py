import numpy as np
import pytest

from hilbertlevy.util.rng import (check_seed, child_seeds, chunk_sizes, derived_seed, draw_samples,
                                  map_chunks)


def normals(rng, n):
    return rng.standard_normal((n, 2))


@pytest.mark.parametrize("seed", [-1, 2 ** 64, 1.5, True, "7"])
def test_invalid_seeds(seed):
    with pytest.raises(ValueError):
        check_seed(seed)


def test_largest_seed():
    assert check_seed(2 ** 64 - 1) == 2 ** 64 - 1
    assert check_seed(np.uint64(3)) == 3


def test_chunk_sizes():
    assert chunk_sizes(0, 10) == []
    assert chunk_sizes(25, 10) == [10, 10, 5]
    assert chunk_sizes(20, 10) == [10, 10]
    with pytest.raises(ValueError):
        chunk_sizes(-1)


def test_draws_do_not_depend_on_the_thread_count():
    single = draw_samples(normals, 23, 42, threads=1, chunk_size=5)
    several = draw_samples(normals, 23, 42, threads=4, chunk_size=5)
    assert single.shape == (23, 2)
    np.testing.assert_array_equal(single, several)


def test_seeds_change_the_draws():
    first = draw_samples(normals, 10, 1, chunk_size=4)
    second = draw_samples(normals, 10, 2, chunk_size=4)
    assert not np.array_equal(first, second)


def test_chunks_come_back_in_order():
    sizes = map_chunks(lambda rng, n: n, 23, 0, threads=3, chunk_size=5)
    assert sizes == [5, 5, 5, 5, 3]


def test_seed_sequences_are_accepted():
    root = np.random.SeedSequence(9)
    np.testing.assert_array_equal(draw_samples(normals, 6, root, chunk_size=4),
                                  draw_samples(normals, 6, 9, chunk_size=4))


def test_derived_seeds():
    seeds = [derived_seed(s) for s in child_seeds(5, 3)]
    assert len(set(seeds)) == 3
    assert seeds == [derived_seed(s) for s in child_seeds(5, 3)]
    assert all(0 <= s < 2 ** 64 for s in seeds)
