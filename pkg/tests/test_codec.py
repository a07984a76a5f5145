import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from turbolp.codec import (
    ErrorMatrix,
    ProductCodeword,
    burst_corrupt,
    burst_length,
    compute_syndromes,
    decode_inner,
    decode_outer,
    encode,
    project_inner,
    random_errors,
    recover_message,
    turbo_decode,
)
from turbolp.exceptions import InvalidArgumentError
from turbolp.matgen import CodeSpec, code_matrices

SPEC8 = CodeSpec(8)


def rand_message(spec, seed):
    return np.random.default_rng(seed).standard_normal((spec.K, spec.K))


def test_encode_zero_and_linearity():
    assert np.array_equal(encode(np.zeros((4, 4)), SPEC8).Y, np.zeros((8, 8)))
    M1, M2 = rand_message(SPEC8, 1), rand_message(SPEC8, 2)
    lhs = encode(M1 + M2, SPEC8).Y
    rhs = encode(M1, SPEC8).Y + encode(M2, SPEC8).Y
    assert np.max(np.abs(lhs - rhs)) <= 1e-12


@pytest.mark.parametrize("N", [4, 8, 32])
def test_clean_codeword_has_zero_syndromes(N):
    spec = CodeSpec(N)
    H, _ = code_matrices(spec)
    Y = encode(rand_message(spec, N), spec).Y
    assert np.max(np.abs(H @ Y)) <= 1e-9
    assert np.max(np.abs(Y @ H.T)) <= 1e-9


def test_encode_dimension_mismatch():
    with pytest.raises(InvalidArgumentError):
        encode(np.zeros((3, 3)), SPEC8)
    with pytest.raises(InvalidArgumentError):
        ProductCodeword(np.zeros((8, 4)), SPEC8)


def test_stage_order_is_irrelevant():
    _, G = code_matrices(SPEC8)
    M = rand_message(SPEC8, 3)
    columns_first = (G @ M) @ G.T
    rows_first = G @ (M @ G.T)
    assert np.max(np.abs(columns_first - rows_first)) <= 1e-12


def test_syndromes_of_zero_error():
    s = compute_syndromes(encode(rand_message(SPEC8, 4), SPEC8))
    assert np.max(np.abs(s.S_row)) <= 1e-9 and np.max(np.abs(s.S_col)) <= 1e-9


def test_syndromes_depend_only_on_error():
    E = random_errors(SPEC8, 5, np.random.default_rng(0))
    a = compute_syndromes(encode(rand_message(SPEC8, 1), SPEC8) + E)
    b = compute_syndromes(encode(rand_message(SPEC8, 2), SPEC8) + E)
    assert np.max(np.abs(a.S_row - b.S_row)) <= 1e-9
    assert np.max(np.abs(a.S_col - b.S_col)) <= 1e-9


def test_single_error_syndromes_n4():
    spec = CodeSpec(4)
    H, _ = code_matrices(spec)
    E = np.zeros((4, 4))
    E[1, 2] = 5.0
    s = compute_syndromes(ProductCodeword(E, spec))
    expected_col = np.zeros((2, 4))
    expected_col[:, 2] = 5 * H[:, 1]
    expected_row = np.zeros((2, 4))
    expected_row[:, 1] = 5 * H[:, 2]
    assert np.allclose(s.S_col, expected_col, atol=1e-15)
    assert np.allclose(s.S_row, expected_row, atol=1e-15)


def test_error_matrix_support():
    E = np.zeros((4, 4))
    E[0, 3] = 1.0
    E[2, 1] = -2.0
    em = ErrorMatrix(E)
    assert em.support == {(0, 3), (2, 1)}
    assert em.l0 == 2


def test_outer_one_error_per_row():
    rng = np.random.default_rng(11)
    E = np.zeros((8, 8))
    E[np.arange(8), rng.integers(0, 8, size=8)] = rng.standard_normal(8)
    E_hat, fails = decode_outer(ProductCodeword(E, SPEC8))
    assert np.max(np.abs(E_hat - E)) <= 1e-9
    assert fails == []


def test_outer_clean_codeword():
    E_hat, fails = decode_outer(encode(rand_message(SPEC8, 5), SPEC8))
    assert np.max(np.abs(E_hat)) <= 1e-9 and fails == []


def test_outer_full_bad_row_leaves_others_exact():
    rng = np.random.default_rng(12)
    E = np.zeros((8, 8))
    E[0] = rng.standard_normal(8)
    E_hat, fails = decode_outer(ProductCodeword(E, SPEC8))
    assert np.max(np.abs(E_hat[1:])) <= 1e-9
    assert fails == [0]


def test_project_inner_cases():
    _, G = code_matrices(SPEC8)
    M = rand_message(SPEC8, 6)
    rng = np.random.default_rng(6)
    E = random_errors(SPEC8, 4, rng).E
    cw = encode(M, SPEC8) + E
    assert np.max(np.abs(project_inner(cw, E) - G @ M)) <= 1e-9
    assert np.max(np.abs(project_inner(encode(M, SPEC8), np.zeros((8, 8))) - G @ M)) <= 1e-9

    bad = np.zeros((8, 8))
    bad[5] = rng.standard_normal(8)
    Mt = project_inner(ProductCodeword(bad, SPEC8), np.zeros((8, 8)))
    assert np.count_nonzero(np.abs(Mt) > 1e-12, axis=1).tolist() == [0] * 5 + [4] + [0] * 2


def test_inner_clean():
    _, G = code_matrices(SPEC8)
    E_check, fails = decode_inner(G @ rand_message(SPEC8, 7), SPEC8)
    assert np.max(np.abs(E_check)) <= 1e-9 and fails == []


@pytest.mark.parametrize("N, bad_rows", [(8, [3]), (8, [6]), (16, [2, 13]), (16, [9, 10])])
def test_inner_corrects_capacity_bad_rows(N, bad_rows):
    spec = CodeSpec(N)
    _, G = code_matrices(spec)
    rng = np.random.default_rng(N + sum(bad_rows))
    M = rand_message(spec, 8)
    B = np.zeros((N, spec.K))
    B[bad_rows] = rng.standard_normal((len(bad_rows), spec.K))
    E_check, fails = decode_inner(G @ M + B, spec)
    assert np.max(np.abs(E_check - B)) <= 1e-9
    assert fails == []


def test_recover_message_cases():
    _, G = code_matrices(SPEC8)
    M = rand_message(SPEC8, 9)
    assert np.max(np.abs(recover_message(G @ M, np.zeros((8, 4)), SPEC8) - M)) <= 1e-9
    rep = turbo_decode(encode(M, SPEC8))
    assert np.max(np.abs(rep.M_hat - M)) <= 1e-12


def test_zero_message_loop():
    E = random_errors(SPEC8, 3, np.random.default_rng(2))
    rep = turbo_decode(ProductCodeword(E.E, SPEC8), true_error=E)
    assert np.max(np.abs(rep.M_hat)) <= 1e-6


@pytest.mark.parametrize("pos", range(64))
def test_single_error_anywhere(pos):
    E = np.zeros(64)
    E[pos] = -1.7
    E = E.reshape(8, 8)
    M = rand_message(SPEC8, pos)
    rep = turbo_decode(encode(M, SPEC8) + E, true_error=E, true_message=M)
    assert rep.success


def test_one_full_row_is_turbo_corrected():
    rng = np.random.default_rng(21)
    E = np.zeros((8, 8))
    E[2] = rng.standard_normal(8)
    M = rand_message(SPEC8, 21)
    rep = turbo_decode(encode(M, SPEC8) + E, true_error=E, true_message=M)
    assert rep.success
    assert rep.row_failures == [2] and rep.column_failures == []


def test_two_hadamard_block_rows_fail():
    rng = np.random.default_rng(22)
    E = np.zeros((8, 8))
    E[[4, 5]] = rng.standard_normal((2, 8))
    rep = turbo_decode(ProductCodeword(E, SPEC8), true_error=E)
    assert not rep.success


def test_two_identity_block_rows_still_decode():
    # 2-sparse patterns on the identity block are l1-recoverable at r = 4
    rng = np.random.default_rng(23)
    E = np.zeros((8, 8))
    E[[0, 3]] = rng.standard_normal((2, 8))
    rep = turbo_decode(ProductCodeword(E, SPEC8), true_error=E)
    assert rep.success
    assert rep.column_failures  # support beyond the guarantee is still flagged


def test_success_without_reference_uses_column_flags():
    rng = np.random.default_rng(24)
    E = np.zeros((8, 8))
    E[[4, 6]] = rng.standard_normal((2, 8))
    rep = turbo_decode(ProductCodeword(E, SPEC8))
    assert rep.residual_max <= 1e-9
    assert rep.success == (not rep.column_failures)


def test_report_json_fields():
    E = random_errors(SPEC8, 2, np.random.default_rng(3))
    rep = turbo_decode(ProductCodeword(E.E, SPEC8), true_error=E)
    d = json.loads(rep.to_json())
    assert {"success", "row_failures", "column_failures", "residual_max", "stage_times_ms"} <= d.keys()
    assert set(d["stage_times_ms"]) == {"outer", "inner", "recover"}
    assert d["success"] is True


def test_reconstruction_identity():
    E = random_errors(SPEC8, 20, np.random.default_rng(4))
    rep = turbo_decode(encode(rand_message(SPEC8, 4), SPEC8) + E)
    _, G = code_matrices(SPEC8)
    assert rep.residual_max == pytest.approx(0.0, abs=1e-12)
    assert np.allclose(G @ rep.M_hat @ G.T + rep.E_total, (encode(rand_message(SPEC8, 4), SPEC8) + E).Y)


def test_burst_examples():
    spec = CodeSpec(8)
    full = burst_corrupt(spec, 0, spec.n, seed=1)
    assert full.l0 == 64
    row0 = burst_corrupt(spec, 0, 8, seed=1)
    assert row0.support == {(0, j) for j in range(8)}
    assert np.array_equal(burst_corrupt(spec, 5, 9, 3).E, burst_corrupt(spec, 5, 9, 3).E)
    with pytest.raises(InvalidArgumentError):
        burst_corrupt(spec, 60, 5, seed=0)


@pytest.mark.parametrize("N, length", [(8, 3), (16, 21), (64, 267)])
def test_burst_length(N, length):
    assert burst_length(CodeSpec(N)) == length


def _pattern(draw, N):
    c = CodeSpec(N).guaranteed_t_word
    n_bad = draw(st.integers(0, c))
    bad = draw(st.lists(st.integers(0, N - 1), min_size=n_bad, max_size=n_bad, unique=True))
    mask = np.zeros((N, N), dtype=bool)
    for i in range(N):
        if i in bad:
            k = draw(st.integers(c + 1, N))
        else:
            k = draw(st.integers(0, c))
        cols = draw(st.lists(st.integers(0, N - 1), min_size=k, max_size=k, unique=True))
        mask[i, cols] = True
    return mask


@st.composite
def capacity_patterns(draw):
    N = draw(st.sampled_from([8, 16]))
    return N, _pattern(draw, N), draw(st.integers(0, 2**32 - 1))


@settings(max_examples=30, deadline=None)
@given(capacity_patterns())
def test_turbo_guarantee_on_constructed_patterns(case):
    N, mask, seed = case
    spec = CodeSpec(N)
    rng = np.random.default_rng(seed)
    E = np.where(mask, rng.standard_normal((N, N)), 0.0)
    M = rng.standard_normal((spec.K, spec.K))
    rep = turbo_decode(encode(M, spec) + E, true_error=E, true_message=M)
    assert rep.success
