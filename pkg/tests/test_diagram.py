import json
import math

import numpy as np
import pytest

from infothermo import constructions as c
from infothermo import diagram as dg
from infothermo import lawbook as lb
from infothermo import passive as p
from infothermo import qstate as q

QUBIT = q.HermitianOperator.diagonal([0.0, 1.0])


@pytest.fixture(scope="module")
def qubit_boundary():
    return dg.thermal_boundary(QUBIT)


def test_boundary_peak_and_beta_one_sample(qubit_boundary):
    b = qubit_boundary
    k = int(np.flatnonzero(b.beta == 0.0)[0])
    assert (b.energy[k], b.entropy[k]) == pytest.approx((0.5, math.log(2)), abs=1e-15)
    E, S = b.point_at_beta(1.0)
    assert (E, S) == pytest.approx((0.268941, 0.582203), abs=1e-6)


def test_boundary_endpoints_and_order(qubit_boundary):
    b = qubit_boundary
    assert b.beta[0] == math.inf and b.beta[-1] == -math.inf
    assert (b.energy[0], b.entropy[0]) == (0.0, 0.0)
    assert (b.energy[-1], b.entropy[-1]) == (1.0, 0.0)
    assert np.all(np.diff(b.beta) < 0)
    assert np.all(np.diff(b.energy) >= 0)
    # strictly increasing wherever doubles can tell neighbours apart (1 - 1e-22 == 1.0)
    inner = b.energy[1:-1]
    resolvable = (inner[:-1] > 1e-300) & (inner[1:] < 1.0 - 1e-15)
    assert np.all(np.diff(inner)[resolvable] > 0)


def test_boundary_degenerate_plateaus():
    b = dg.thermal_boundary(q.HermitianOperator.diagonal([0.0, 0.0, 1.0, 2.0, 2.0, 2.0]))
    assert b.entropy[0] == pytest.approx(math.log(2))
    assert b.entropy[-1] == pytest.approx(math.log(3))


def test_boundary_concavity():
    for H in (QUBIT, q.random_hamiltonian(3, seed=2), q.random_hamiltonian(4, seed=5)):
        b = dg.thermal_boundary(H)
        dE, dS = np.diff(b.energy), np.diff(b.entropy)
        keep = dE > 1e-12
        slopes = dS[keep] / dE[keep]
        assert np.all(np.diff(slopes) <= 1e-9)


def test_boundary_symmetry():
    H = q.HermitianOperator.diagonal([-1.0, 0.2, 1.4])  # symmetric about 0.2
    b = dg.thermal_boundary(H)
    for E in np.linspace(-0.9, 1.3, 13):
        assert b.entropy_at_energy(E) == pytest.approx(b.entropy_at_energy(0.4 - E), abs=1e-9)


def test_boundary_rejects_too_few_samples():
    with pytest.raises(ValueError):
        dg.thermal_boundary(QUBIT, n_samples=10)


def test_locate_fixtures(qubit_boundary):
    pt = dg.locate(q.DensityMatrix.maximally_mixed(2), QUBIT)
    assert (pt.E, pt.S) == pytest.approx((0.5, 0.693147), abs=1e-6)
    pt = dg.locate(q.DensityMatrix.pure([0, 1]), QUBIT)
    assert (pt.E, pt.S) == pytest.approx((1.0, 0.0), abs=1e-15)
    pt = dg.locate(p.gibbs_state(QUBIT, 1.0), QUBIT)
    assert pt.S == pytest.approx(qubit_boundary.entropy_at_energy(pt.E), abs=1e-9)


def test_horizontal_free_energy_fixtures(qubit_boundary):
    b = qubit_boundary
    assert dg.horizontal_free_energy(dg.locate(p.gibbs_state(QUBIT, 0.7), QUBIT), b) == pytest.approx(0.0, abs=1e-9)
    assert dg.horizontal_free_energy(dg.DiagramPoint(1.0, 0.0), b) == pytest.approx(1.0, abs=1e-12)
    # spectrum (0.9, 0.1) rotated so that E = 0.5
    v = np.array([[1, 1], [1, -1]]) / math.sqrt(2)
    rho = q.DensityMatrix.from_spectrum([0.9, 0.1], basis=v)
    pt = dg.locate(rho, QUBIT)
    assert pt.E == pytest.approx(0.5)
    assert dg.horizontal_free_energy(pt, b) == pytest.approx(p.free_energy(rho, QUBIT), abs=1e-4)
    with pytest.raises(ValueError):
        dg.horizontal_free_energy(dg.DiagramPoint(0.5, 0.8), b)


def test_horizontal_free_energy_random_states():
    H = q.random_hamiltonian(3, seed=7)
    b = dg.thermal_boundary(H)
    for seed in range(30):
        rho = q.random_density_matrix(3, seed=seed)
        f = dg.horizontal_free_energy(dg.locate(rho, H), b)
        assert f >= -1e-9
        assert f == pytest.approx(p.free_energy(rho, H), abs=1e-4)


def test_tangent_beta_fixtures(qubit_boundary):
    b = qubit_boundary
    assert dg.tangent_beta(b, 0.5) == pytest.approx(0.0, abs=1e-9)
    assert dg.tangent_beta(b, 1 / (1 + math.e)) == pytest.approx(1.0, rel=1e-3)
    assert dg.tangent_beta(b, 0.8) < 0
    for E in (0.0, 1.0):
        with pytest.raises(ValueError):
            dg.tangent_beta(b, E)


def test_tangent_beta_decreasing(qubit_boundary):
    Es = np.linspace(0.01, 0.99, 40)
    betas = [dg.tangent_beta(qubit_boundary, E) for E in Es]
    assert np.all(np.diff(betas) < 0)


def test_is_physical(qubit_boundary):
    assert dg.is_physical(dg.DiagramPoint(0.3, 0.1), qubit_boundary)
    assert not dg.is_physical(dg.DiagramPoint(0.1, 0.6), qubit_boundary)
    assert not dg.is_physical(dg.DiagramPoint(1.2, 0.0), qubit_boundary)


def test_heat_geometry_identity_and_gibbs_move(qubit_boundary):
    rho = q.tensor(p.gibbs_state(QUBIT, 1.0), p.gibbs_state(QUBIT, 0.5))
    geo = dg.heat_geometry(lb.ProcessRecord(QUBIT, QUBIT, rho, rho))
    assert all(abs(s.length) < 1e-12 for s in geo.segments)
    rec = c.equilibration_record(QUBIT, 2.0, QUBIT, 0.5)
    lengths = {s.label: s.length for s in dg.heat_geometry(rec).segments}
    assert lengths["dQ"] == pytest.approx(lengths["dE_B"], abs=1e-12)


def test_heat_geometry_kicked_bath_ordering():
    rec = c.kicked_record(0.1)
    lengths = [s.length for s in dg.heat_geometry(rec).segments]
    assert lengths[0] < lengths[1] < lengths[2]


def test_heat_geometry_requires_thermal_bath():
    rho = q.tensor(q.DensityMatrix.maximally_mixed(2), q.DensityMatrix.pure([1, 1]))
    rec = lb.ProcessRecord(QUBIT, QUBIT, rho, rho)
    with pytest.raises(ValueError):
        dg.heat_geometry(rec)


def test_csv_round_trip(tmp_path, qubit_boundary):
    path = tmp_path / "b.csv"
    dg.export(qubit_boundary, fmt="csv", path=path)
    assert path.read_text().splitlines()[0] == "beta,energy,entropy"
    beta, E, S = dg.read_boundary_csv(path)
    assert np.array_equal(beta, qubit_boundary.beta)
    assert np.array_equal(E, qubit_boundary.energy)
    assert np.array_equal(S, qubit_boundary.entropy)


def test_json_mirrors_boundary(qubit_boundary):
    pt = dg.locate(q.DensityMatrix.maximally_mixed(2), QUBIT, "mixed")
    doc = json.loads(dg.render(qubit_boundary, [pt], [], "json"))
    assert doc["format_version"] == dg.FORMAT_VERSION
    assert doc["boundary"]["beta"][0] == "inf"
    assert doc["points"][0]["label"] == "mixed"


def test_svg_is_deterministic(qubit_boundary):
    rho = q.DensityMatrix(np.array([[0.6, 0.3], [0.3, 0.4]]))
    pt = dg.locate(rho, QUBIT, "rho")
    segs = dg.class_segments(pt, qubit_boundary)
    a = dg.render(qubit_boundary, [pt], segs, "svg")
    b = dg.render(dg.thermal_boundary(QUBIT), [pt], segs, "svg")
    assert a == b
    assert a.startswith("<?xml") and "<polyline" in a and ">rho</text>" in a
    assert [s.label.split()[0] for s in segs] == ["F", "B", "tangent"]
    assert segs[0].length == pytest.approx(p.free_energy(rho, QUBIT), abs=1e-6)


def test_empty_point_list_svg(qubit_boundary):
    svg = dg.render(qubit_boundary, [], [], "svg")
    assert "<circle" not in svg and "<polyline" in svg


def test_export_reports_path_on_failure(tmp_path, qubit_boundary):
    bad = tmp_path / "missing" / "out.svg"
    with pytest.raises(OSError, match="missing"):
        dg.export(qubit_boundary, fmt="svg", path=bad)


def test_unknown_format(qubit_boundary):
    with pytest.raises(ValueError):
        dg.render(qubit_boundary, fmt="png")


def test_tangent_beta_between_samples(qubit_boundary):
    # qubit: E = 1 / (1 + e^beta), so beta = ln(1/E - 1)
    for E in (0.05, 0.3, 0.4999, 0.7):
        assert dg.tangent_beta(qubit_boundary, E) == pytest.approx(math.log(1 / E - 1), abs=1e-9)
