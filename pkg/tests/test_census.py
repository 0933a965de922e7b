import pytest

from selmer2.census import ff_census_all, ff_orbit_census, orthogonal_group, pso_action, rows_to_csv, so_group_order
from selmer2.errors import Refusal
from selmer2.localdata import j2_local
from selmer2.poly import CurveInvariants


@pytest.fixture(scope="module")
def census3():
    return ff_census_all(1, 3)


def test_group_orders():
    O = orthogonal_group(4, 3)
    assert len(O) == 2 * so_group_order(2, 3)
    g = pso_action(4, 3)
    assert g.so_order == so_group_order(2, 3) == 576
    assert so_group_order(1, 3) == 2  # SO(1,1)(F_3) = F_3^*


def test_census_q3(census3):
    rows, so = census3
    assert len(rows) == 54
    assert {r.points for r in rows} == {so}
    for r in rows:
        assert r.orbits == r.predicted_orbits()
        assert len(set(r.stabilizers)) == 1
        assert sum(so // s for s in r.stabilizers) == r.points
        assert r.distinguished_orbits == r.predicted_distinguished()
        assert r.staircase_orbits == 1


def test_census_examples():
    row = ff_orbit_census(1, 3, [1, 1, 0, 0, 1])  # x^4 + x + 1
    assert row.cycle_type == (1, 3) and row.orbits == 1
    irreducible = ff_orbit_census(1, 3, [2, 0, 1, 0, 1])  # x^4 + x^2 + 2 is irreducible mod 3
    assert irreducible.cycle_type == (4,) and irreducible.orbits == 2


def test_census_refusals():
    with pytest.raises(Refusal) as exc:
        ff_orbit_census(2, 3, [1, 0, 0, 0, 0, 0, 1])
    assert "estimated_matrices" in exc.value.certificate
    with pytest.raises(Refusal):
        ff_census_all(1, 7)


def test_j2_local_matches_census(census3):
    rows, _ = census3
    for r in rows:
        f = list(r.f)
        # lift f mod 3 to an integral trace-zero quartic: c1 = f[3] must vanish mod 3
        if f[3] % 3:
            continue
        c = CurveInvariants(1, (f[2], f[1], f[0]))
        assert j2_local(c, 3) == r.orbits


def test_csv_output(census3):
    rows, _ = census3
    text = rows_to_csv(rows[:2])
    assert text.splitlines()[0].startswith("q,f_coeffs_low_first")
