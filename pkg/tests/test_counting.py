import pytest

from abelcount import counting
from abelcount.fqcensus import BudgetExceeded, FieldParams, build_census, poly_mul


def fp(q, ell):
    return FieldParams.from_q_ell(q, ell)


def test_series_examples():
    assert counting.exact_counts_series(fp(3, 2), None, 1)[1] == 6
    t = counting.exact_counts_series(fp(2, 3), None, 2)
    assert (t[1], t[2]) == (2, 6)
    assert counting.exact_counts_series(fp(4, 3), None, 2)[2] == 36


def test_dp_examples():
    assert counting.exact_counts_dp(fp(4, 3), None, 2)[2] == 6 * 2 + 6 * 4
    assert counting.exact_counts_dp(fp(2, 3), None, 2)[2] == 3 * 2
    assert counting.exact_counts_dp(fp(4, 5), None, 1)[1] == 12


def test_enumerative_examples():
    assert counting.exact_counts_enumerative(2, 3, 1)[1] == 2
    assert counting.exact_counts_enumerative(3, 2, 2)[2] == 12
    assert counting.exact_counts_enumerative(5, 2, 2)[2] == 40


def test_enumerative_budget():
    with pytest.raises(BudgetExceeded):
        counting.exact_counts_enumerative(11, 2, 1)
    with pytest.raises(BudgetExceeded):
        counting.exact_counts_enumerative(2, 3, 5)
    with pytest.raises(ValueError):
        counting.exact_counts_enumerative(4, 3, 1)


def test_enumerative_budget_env(monkeypatch):
    monkeypatch.setenv("ABELCOUNT_ENUM_POLYS", "100")
    with pytest.raises(BudgetExceeded):
        counting.exact_counts_enumerative(3, 2, 5)
    assert counting.max_enumerable_n(3, 2) == 3  # 3 + 9 + 27 <= 100 < 3 + 9 + 27 + 81


@pytest.mark.parametrize("q, ell", [(2, 3), (3, 2), (5, 3), (7, 2)])
def test_routes_agree(q, ell):
    n = counting.max_enumerable_n(q, ell)
    assert n >= 1
    tables = [counting.count(fp(q, ell), n, r).values for r in counting.ROUTES]
    assert tables[0] == tables[1] == tables[2]


@pytest.mark.parametrize("q, ell", [(4, 3), (9, 5), (8, 7)])
def test_series_dp_and_divisibility(q, ell):
    p = fp(q, ell)
    census = build_census(q, p.alpha * 40)
    s = counting.exact_counts_series(p, census, 40)
    assert s.values == counting.exact_counts_dp(p, census, 40).values
    assert all(v >= 0 for v in s.values)


@pytest.mark.parametrize("q", [3, 5, 7])
def test_quadratic_closed_form(q):
    a = counting.exact_counts_series(fp(q, 2), None, 100)
    assert a[1] == 2 * q
    assert all(a[n] == 2 * counting.squarefree_count(q, n) for n in range(2, 101))


@pytest.mark.parametrize("m, ell, k", [(1, 3, 1), (2, 3, 2), (3, 5, 16)])
def test_character_multiplicity_examples(m, ell, k):
    assert counting.character_multiplicity(m, ell) == k


def test_character_multiplicity_budget():
    with pytest.raises(BudgetExceeded):
        counting.character_multiplicity(12, 13)


def test_conductor_profile():
    # (t^2 + t + 1)(t^4 + t + 1) over F_2
    prof = counting.conductor_profile(poly_mul((1, 1, 1), (1, 1, 0, 0, 1), 2), 2, alpha=2)
    assert prof.degree_multiset == {2: 1, 4: 1}
    assert prof.weight(3) == 2 * 2
    assert counting.conductor_profile((1, 0, 1), 2) is None  # (t + 1)^2
    assert counting.conductor_profile((0, 1, 1), 2, alpha=2) is None  # t (t + 1)


def test_unknown_route():
    with pytest.raises(ValueError):
        counting.count(fp(2, 3), 2, "magic")
