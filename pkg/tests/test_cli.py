"""Command-line interface: schema round-trips, renderings, exit codes."""
import json
import random

import pytest
from click.testing import CliRunner

from quiverpot import cli
from quiverpot import sklyanin as sk
from quiverpot.field import CycField
from quiverpot.paths import Quiver, TensorElement, Twist


runner = CliRunner()


def named_terms(x):
    q = x.quiver
    return {tuple(q.arrows[a].name for a in k): str(c)
            for k, c in x.terms.items()}


@pytest.fixture(scope="module")
def surface_files(tmp_path_factory):
    root = tmp_path_factory.mktemp("potentials")
    p = sk.SklyaninParams(2, 3, "-5/7")
    omega = sk.sklyanin_potential(p)
    wfile = root / "w235.json"
    wfile.write_text(json.dumps(cli.potential_to_json(omega)))
    from quiverpot.quotient import derivation_quotient
    pres = derivation_quotient(omega, 2)
    pfile = root / "pres235.json"
    pfile.write_text(json.dumps(cli.presentation_to_json(pres)))
    return str(wfile), str(pfile)


@pytest.fixture(scope="module")
def cubic_file(tmp_path_factory):
    root = tmp_path_factory.mktemp("cubic")
    obj = {
        "conductor": 4,
        "vertices": ["v"],
        "arrows": [{"name": n, "tail": "v", "head": "v"} for n in "xyz"],
        "degree": 3,
        "terms": [{"word": list(w), "coeff": c} for w, c in [
            ("xyz", "1"), ("yzx", "1"), ("zxy", "1"),
            ("xzy", "-1"), ("zyx", "-1"), ("yxz", "-1")]],
    }
    f = root / "cubic.json"
    f.write_text(json.dumps(obj))
    return str(f)


# ---------------------------------------------------------------------------
# schema and rendering round-trips
# ---------------------------------------------------------------------------

def test_potential_json_round_trip():
    p = sk.SklyaninParams(2, 3, "-5/7")
    omega = sk.sklyanin_potential(p)
    x2, tw2 = cli.potential_from_json(cli.potential_to_json(omega))
    assert tw2 is None and named_terms(x2) == named_terms(omega)
    pres, sigma, om = sk.staff_presentation("drop_r1", p, 1, 1)
    x3, tw3 = cli.potential_from_json(cli.potential_to_json(om, sigma))
    assert named_terms(x3) == named_terms(om)
    assert tw3 is not None and not tw3.is_identity
    for i, a in enumerate(om.quiver.arrows):
        assert named_terms(tw3.arrow_images[i]) == \
            named_terms(sigma.arrow_images[i])


def test_presentation_json_round_trip():
    from quiverpot.quotient import derivation_quotient
    p = sk.SklyaninParams(2, 3, "-5/7")
    pres = derivation_quotient(sk.sklyanin_potential(p), 2)
    pres2 = cli.presentation_from_json(cli.presentation_to_json(pres))
    assert [named_terms(r) for r in pres2.relation_elements()] == \
        [named_terms(r) for r in pres.relation_elements()]


def _random_element(q, f, degree, rng):
    pool = [f.one, -f.one, f.coerce("1/2"), f.coerce("-7/3"),
            f.zeta(), -f.zeta(), f.one + f.zeta(),
            f.coerce("2/5") * f.zeta() - f.one]
    paths = q.paths(degree)
    terms = {}
    for p in rng.sample(paths, k=min(len(paths), rng.randrange(1, 7))):
        terms[p.key] = pool[rng.randrange(len(pool))]
    return TensorElement(q, f, degree, terms)


def test_text_round_trip_single_char_names():
    f = CycField(4)
    q = Quiver(["v"], [(n, "v", "v") for n in "xyz"])
    rng = random.Random(7)
    for _ in range(60):
        x = _random_element(q, f, 3, rng)
        assert cli.parse_element(cli.render_potential(x), q, f, 3) == x


def test_text_round_trip_multi_char_names():
    f = CycField(4)
    q = Quiver(["s", "t"], [("a0", "s", "t"), ("b1", "t", "s"),
                            ("a1", "s", "t"), ("b0", "t", "s")])
    rng = random.Random(11)
    for _ in range(60):
        x = _random_element(q, f, 2, rng)
        assert cli.parse_element(cli.render_potential(x), q, f, 2) == x
    assert cli.parse_element("0", q, f, 2).is_zero()


def test_cyclic_rendering_orbit_coefficients():
    from quiverpot import mckay as mk
    _, data = mk.mckay_from_json(mk.load_fixture("dihedral8"))
    omega, tau = mk.mckay_potential(data)
    assert cli.render_potential(omega, tau, mode="cyclic") == \
        "(Ad)^tau - (Bc)^tau"
    _, data3 = mk.mckay_from_json(mk.load_fixture("cyclic7_124_ext3"))
    om3, _ = mk.mckay_potential(data3)
    assert cli.render_potential(om3, mode="cyclic") == (
        "(axA) - (ayA) + (bxB) - z^7*(byB) + (cxC) + (1 + z^7)*(cyC)"
        " + 1/3*(uuu) - (uxz) + (yvz) - 1/3*(vvv)")


def test_cyclic_rendering_rejections():
    f = CycField(4)
    q = Quiver(["v"], [("x", "v", "v"), ("y", "v", "v")])
    comm = (TensorElement.monomial(q, f, ("x", "y"), f.one)
            - TensorElement.monomial(q, f, ("y", "x"), f.one))
    not_super = TensorElement.monomial(q, f, ("x", "y"), f.one)
    with pytest.raises(ValueError, match="superpotential"):
        cli.render_potential(not_super, mode="cyclic")
    from quiverpot.field import Matrix
    mixing = Twist.from_matrix(q, f, Matrix(f, [[1, 1], [0, 1]]))
    with pytest.raises(ValueError, match="monomial twist"):
        cli.render_potential(comm, mixing, mode="cyclic")
    with pytest.raises(ValueError, match="mode"):
        cli.render_potential(comm, mode="orbit")
    # untwisted commutator: one orbit, displayed with the 1/n factor
    assert cli.render_potential(comm, mode="cyclic") == "1/2*(xy)"


# ---------------------------------------------------------------------------
# commands and exit codes
# ---------------------------------------------------------------------------

def test_check_superpotential_exit_codes(surface_files, tmp_path):
    wfile, _ = surface_files
    res = runner.invoke(cli.main, ["check-superpotential", "--in", wfile])
    assert res.exit_code == 0 and "PASS" in res.output
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({
        "conductor": 4, "vertices": ["v"],
        "arrows": [{"name": "x", "tail": "v", "head": "v"},
                   {"name": "y", "tail": "v", "head": "v"}],
        "degree": 2, "terms": [{"word": ["x", "y"], "coeff": "1"}]}))
    res = runner.invoke(cli.main, ["check-superpotential", "--in", str(bad)])
    assert res.exit_code == 1 and "FAIL" in res.output
    garbage = tmp_path / "garbage.json"
    garbage.write_text("not json")
    res = runner.invoke(cli.main,
                        ["check-superpotential", "--in", str(garbage)])
    assert res.exit_code == 2
    res = runner.invoke(cli.main, ["check-superpotential", "--in",
                                   str(tmp_path / "missing.json")])
    assert res.exit_code == 2


def test_hilbert_output(surface_files):
    wfile, pfile = surface_files
    for name in (wfile, pfile):
        res = runner.invoke(cli.main, ["hilbert", "--in", name, "--dmax", "4"])
        assert res.exit_code == 0
        assert res.output.strip() == "1 4 10 20 35"
    res = runner.invoke(cli.main, ["--format", "json", "hilbert",
                                   "--in", pfile, "--dmax", "3"])
    assert json.loads(res.output)["dims"] == [1, 4, 10, 20]


def test_hilbert_cubic(cubic_file):
    res = runner.invoke(cli.main,
                        ["hilbert", "--in", cubic_file, "--dmax", "5"])
    assert res.exit_code == 0
    assert res.output.strip() == "1 3 6 10 15 21"


def test_derive_prints_canonical_relations(surface_files):
    wfile, _ = surface_files
    res = runner.invoke(cli.main, ["derive", "--in", wfile, "--order", "2"])
    assert res.exit_code == 0
    lines = res.output.strip().splitlines()
    assert lines[0] == "6 relations of degree 2:"
    assert len(lines) == 7
    assert lines[1].strip().startswith("x0*x1")
    res = runner.invoke(cli.main, ["derive", "--in", wfile, "--order", "9"])
    assert res.exit_code == 2


def test_koszul_dual_dims(surface_files):
    _, pfile = surface_files
    res = runner.invoke(cli.main,
                        ["koszul-dual", "--in", pfile, "--dmax", "5"])
    assert res.exit_code == 0
    assert res.output.strip() == "1 4 6 4 1 0"


def test_complex_check(cubic_file):
    res = runner.invoke(cli.main, ["complex-check", "--in", cubic_file,
                                   "--dmax", "3"])
    assert res.exit_code == 0
    assert "certified (degrees <= 3): PASS" in res.output
    res = runner.invoke(cli.main, ["complex-check", "--in", cubic_file,
                                   "--nth", "3", "--dmax", "3"])
    assert res.exit_code == 0
    res = runner.invoke(cli.main, ["complex-check", "--in", cubic_file,
                                   "--dmax", "1"])
    assert res.exit_code == 2


def test_mckay_command():
    res = runner.invoke(cli.main,
                        ["mckay", "--input", "dihedral8", "--degree-check", "3"])
    assert res.exit_code == 0
    assert "cyclic form: (Ad)^tau - (Bc)^tau" in res.output
    assert "relations (dimension 5):" in res.output
    assert "mckay check: PASS" in res.output
    res = runner.invoke(cli.main, ["mckay", "--input", "heisenberg64"])
    assert res.exit_code == 2
    res = runner.invoke(cli.main, ["mckay", "--input", "no_such_group"])
    assert res.exit_code == 2


def test_mckay_command_json_payload():
    res = runner.invoke(cli.main, ["--format", "json", "mckay", "--input",
                                   "quaternion8", "--degree-check", "2"])
    assert res.exit_code == 0
    payload = json.loads(res.output)
    assert payload["ok"] and payload["tau_identity"]
    assert payload["relation_dim"] == 5
    assert len(payload["arrows"]) == 8


def test_sklyanin_command():
    res = runner.invoke(cli.main, ["sklyanin", "--alpha", "2", "--beta", "3",
                                   "--gamma", "-5/7"])
    assert res.exit_code == 0
    assert "kappa: 1, -1/4, 7/4" in res.output
    assert "graded dims: 1 4 10 20 35" in res.output
    assert "derivative ladder dims: 1 4 6 4 1" in res.output
    res = runner.invoke(cli.main, ["sklyanin", "--alpha", "2", "--beta", "3"])
    assert res.exit_code == 0  # gamma solved from the surface equation
    assert "-5/7" in res.output
    res = runner.invoke(cli.main, ["sklyanin", "--alpha", "2", "--beta", "3",
                                   "--gamma", "1"])
    assert res.exit_code == 2
    res = runner.invoke(cli.main, ["sklyanin"])
    assert res.exit_code == 2


def test_sklyanin_staff_variant():
    res = runner.invoke(cli.main, ["sklyanin", "--alpha", "2", "--beta", "3",
                                   "--gamma", "-5/7", "--staff", "drop_r1"])
    assert res.exit_code == 0
    assert "lambda: 1, -7/8, 1/8" in res.output
    assert "twisted superpotential: PASS" in res.output


def test_sklyanin_theta():
    res = runner.invoke(cli.main, ["sklyanin", "--conductor", "16", "--theta",
                                   "1", "z^2", "z", "z^3"])
    assert res.exit_code == 0
    assert "parameters:" in res.output


def test_fixtures_run_all():
    res = runner.invoke(cli.main, ["fixtures", "run-all",
                                   "--degree-check", "2"])
    assert res.exit_code == 0
    assert "fixture corpus: PASS (11 checks)" in res.output
    assert "heisenberg64: PASS" in res.output
    assert "staff infinity: PASS" in res.output
