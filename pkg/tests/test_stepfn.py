import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from orlicz_lab.errors import InputError
from orlicz_lab.stepfn import (
    BlockSet,
    StepFunction,
    are_disjoint,
    combine,
    compose,
    disjoint_family,
    distribution,
    dominated,
    family_from_json,
    family_to_json,
    indicator_train,
    mixed,
    normalize,
    product,
    random_shared,
    random_step,
    rearrangement,
    restrict,
    spike_train,
    split,
    truncate_above,
)

blocks = st.lists(st.tuples(st.integers(-20, 20).map(float), st.integers(1, 12)),
                  min_size=0, max_size=12)


def micro_rearrangement(rows, m):
    # oracle: expand each block into micro cells of measure 1/m and sort
    cells = np.concatenate([[abs(v)] * k for v, k in rows]) if rows else np.zeros(0)
    return np.sort(cells)[::-1]


def eval_at(f, t):
    edges = np.cumsum(f.weights)
    idx = np.searchsorted(edges, t, side="right")
    vals = np.append(f.values, 0.0)
    return vals[idx]


@given(blocks)
def test_rearrangement_matches_micro_block_oracle(rows):
    m = 4
    f = StepFunction([v for v, _ in rows], [k / m for _, k in rows]) if rows else StepFunction.zero()
    r = rearrangement(f)
    ref = micro_rearrangement(rows, m)
    mid = (np.arange(ref.size) + 0.5) / m
    np.testing.assert_allclose(eval_at(r, mid), ref)


@given(blocks, st.floats(0, 25))
def test_rearrangement_is_equimeasurable(rows, lam):
    f = StepFunction([v for v, _ in rows], [float(k) for _, k in rows]) if rows else StepFunction.zero()
    r = rearrangement(f)
    assert distribution(r, lam) == pytest.approx(distribution(f, lam), abs=1e-12)
    assert np.all(np.diff(r.values) < 0)
    assert np.all(r.values > 0)


def test_distribution_is_strict():
    f = StepFunction([1.0, 2.0, -3.0], [0.5, 0.25, 0.125])
    assert distribution(f, 0.0) == 0.875
    assert distribution(f, 2.0) == 0.125
    assert distribution(f, 3.0) == 0.0


def test_rearrangement_merges_equal_values():
    f = StepFunction([2.0, -2.0, 1.0, 0.0], [1.0, 0.5, 1.0, 3.0])
    r = rearrangement(f)
    assert r.blocks == [(2.0, 1.5), (1.0, 1.0)]


def test_keys_must_be_distinct():
    with pytest.raises(InputError):
        StepFunction([1.0, 2.0], [1.0, 1.0], ("a", "a"))


@pytest.mark.parametrize("values,weights", [([1.0], [0.0]), ([np.nan], [1.0]), ([1.0, 2.0], [1.0])])
def test_invalid_blocks(values, weights):
    with pytest.raises(InputError):
        StepFunction(values, weights)


def test_arithmetic_on_shared_cells():
    f = StepFunction([1.0, 2.0], [0.5, 0.5], ("a", "b"))
    g = StepFunction([3.0, -1.0], [0.5, 0.25], ("b", "c"))
    h = f + g
    assert dict(zip(h.keys, h.values)) == {"a": 1.0, "b": 5.0, "c": -1.0}
    p = product(f, g)
    assert p.keys == ("b",) and p.values.tolist() == [6.0]
    assert (f * 2).values.tolist() == [2.0, 4.0]
    assert (-f).values.tolist() == [-1.0, -2.0]
    with pytest.raises(InputError):
        f + StepFunction([1.0], [0.3], ("a",))


def test_combine_and_normalize():
    fam = indicator_train(3)
    s = combine(fam, [1.0, 0.0, -2.0])
    assert normalize(s).blocks == [(1.0, 1.0), (-2.0, 1.0)]


def test_restrict_and_truncate():
    f = StepFunction([1.0, 5.0, -3.0], [1.0, 1.0, 1.0], ("x", "y", "z"))
    assert restrict(f, BlockSet.of("y", "z")).values.tolist() == [5.0, -3.0]
    with pytest.raises(InputError):
        restrict(f, BlockSet.of("w"))
    assert restrict(f, BlockSet.of("w"), strict=False).is_zero()
    assert truncate_above(f, 2.0).keys == ("y", "z")


def test_split_preserves_integral_and_keys():
    f = StepFunction([2.0, 3.0], [1.0, 0.5])
    g = split(f, 4)
    assert g.total_weight == pytest.approx(f.total_weight)
    assert float(np.sum(g.values * g.weights)) == pytest.approx(3.5)
    assert g.keys[0] == (0, 0)
    assert len(split(f, 3, key=1)) == 4


def test_block_sets():
    f = StepFunction([1.0, 1.0], [0.25, 0.5], ("a", "b"))
    A = BlockSet.of("a", "b")
    assert A.measure(f) == 0.75
    assert BlockSet.of("a") <= A and not A <= BlockSet.of("a")
    assert "a" in A and len(A) == 2


def test_generators_are_disjoint():
    for name in ("indicator_train", "spike_train", "mixed"):
        fam = disjoint_family(name, 6)
        assert len(fam) == 6 and are_disjoint(fam)
    s = spike_train(3, h=2, w=0.25)
    assert [f.blocks for f in s] == [[(2.0, 0.25)], [(4.0, 0.0625)], [(8.0, 0.015625)]]
    m = mixed(2)
    assert m[1].keys == ((1, "spike"), (1, "flat"))
    with pytest.raises(InputError):
        disjoint_family("nope", 3)


def test_random_shared_family_shares_cells():
    fam = random_shared(5, n_blocks=4, seed=7)
    assert all(np.array_equal(f.weights, fam[0].weights) for f in fam)
    assert not are_disjoint(fam)
    again = random_shared(5, n_blocks=4, seed=7)
    assert all(np.array_equal(a.values, b.values) for a, b in zip(fam, again))


def test_dominated_and_compose():
    f = StepFunction([1.0, -2.0], [1.0, 1.0])
    assert dominated(f, f * 1.5) and not dominated(f * 1.5, f)
    assert compose(f, lambda a: a ** 2).values.tolist() == [1.0, 4.0]


def test_json_roundtrip_with_keys():
    f = mixed(2)[1]
    back = StepFunction.from_json(json.loads(json.dumps(f.to_json())))
    assert back == f
    fam = family_from_json(json.loads(json.dumps(family_to_json(spike_train(3)))))
    assert fam == spike_train(3)
    gen = family_from_json({"generator": "spike_train", "n": 2, "params": {"h": 3}})
    assert gen[1].values.tolist() == [9.0]


def test_json_row_dicts():
    f = StepFunction.from_json([{"value": 2, "weight": 0.5}, {"value": 1, "weight": 1}])
    assert f.blocks == [(2.0, 0.5), (1.0, 1.0)]
    with pytest.raises(InputError):
        StepFunction.from_json({"blocks": 3})


def test_csv_roundtrip(tmp_path, rng):
    f = random_step(rng, 6)
    p = tmp_path / "f.csv"
    f.to_csv(p)
    assert StepFunction.from_csv(p) == f
