import glob
import os
from dataclasses import replace
from fractions import Fraction

import pytest

import certificates as records
import pipelines
import verify_certificates
from fourier_space import FourierVec
from load_input_parameter_file import load_input_parameter_file
from proof_config import ContourSchedule, ProofConfig, SegmentConfig, build_proof_config
from proof_errors import ConfigError

ZERO_DATUM = ((0, "0", "0"),)
# trapping region of 0 at theta = pi/3: a_0 well inside |x_c| < mu/4, small nonzero modes
TRAPPED_DATUM = ((0, "-4.5", "0"), (1, "0.001", "0"), (-1, "0.001", "0"))


def segment(theta_over_pi=Fraction(1, 3), t_start=0.0, t_end=0.01):
    return SegmentConfig(theta_over_pi, t_start, t_end, 0.0025, N=4, n=10, m=0)


def config(pipeline, datum=ZERO_DATUM, segments=None, **kwargs):
    schedule = ContourSchedule(tuple(segments or (segment(),)))
    return ProofConfig(pipeline=pipeline, output_directory="unused", initial_datum=datum,
                       schedule=schedule, **kwargs)


def test_contour_pipeline_completes():
    verdict = pipelines.run_pipeline(config("contour"))
    assert verdict.status == pipelines.STATUS_COMPLETED
    assert verdict.exit_code == 0
    assert len(verdict.certificates) == 4
    assert verdict.details["eps_end"].upper() == 0.0


def test_contour_pipeline_respects_max_steps():
    verdict = pipelines.prove_contour(config("contour", max_steps=2))
    assert len(verdict.certificates) == 2


def test_global_existence_of_the_zero_datum_needs_no_steps():
    verdict = pipelines.run_pipeline(config("global"))
    assert verdict.status == pipelines.STATUS_PROVED
    assert verdict.certificates == ()
    assert verdict.details["zero_datum"] is True


def test_initial_state_in_the_trapping_region():
    seen = []
    verdict = pipelines.prove_global(config("global", TRAPPED_DATUM), on_certificate=seen.append)
    assert verdict.status == pipelines.STATUS_PROVED
    assert verdict.manifold.passed
    assert verdict.manifold.step_index == 0
    assert verdict.details["step_index"] == 0
    assert seen == []


def test_initial_state_outside_the_trapping_region_is_integrated():
    datum = ((0, "1", "0"), (1, "0.001", "0"), (-1, "0.001", "0"))
    verdict = pipelines.prove_global(config("global", datum, segments=(segment(t_end=0.005),)))
    # Re(e^{i pi/3} a_0) > 0 for the whole short run
    assert verdict.status == pipelines.STATUS_INCONCLUSIVE
    assert verdict.exit_code == 2
    assert len(verdict.certificates) == 2
    assert "max steps or contour end" in verdict.message


def test_blowup_bound_stops_at_the_horizon():
    cfg = config("blowup-bound", segments=(segment(Fraction(0)),), horizon=0.005)
    verdict = pipelines.run_pipeline(cfg)
    assert verdict.status == pipelines.STATUS_COMPLETED
    assert verdict.details["t_lower"] == 0.005
    assert len(verdict.certificates) == 2
    assert verdict.failure is None


def test_blowup_bound_needs_real_time():
    with pytest.raises(ConfigError):
        pipelines.blowup_lower_bound(config("blowup-bound"))


def bent_contour():
    return (segment(Fraction(1, 3), 0.0, 0.005), segment(Fraction(-1, 3), 0.005, 0.01))


def test_contour_end_of_a_bent_contour_is_real():
    z = pipelines.contour_end(ContourSchedule(bent_contour()))
    assert bool(z.im.contains(0.0))
    assert z.re.lower() <= 0.005 <= z.re.upper()


def test_branching_needs_a_contour_ending_on_the_real_axis():
    with pytest.raises(ConfigError):
        pipelines.prove_branching(config("branching"))


def test_branching_of_a_real_solution_is_not_proved():
    lower = ContourSchedule((segment(Fraction(0), 0.0, 0.0025),))
    verdict = pipelines.run_pipeline(config("branching", segments=bent_contour(), lower_bound_schedule=lower))
    assert verdict.status == pipelines.STATUS_INCONCLUSIVE
    assert len(verdict.certificates) == 4
    assert verdict.details["imaginary_margin"].lower() <= 0
    assert verdict.details["t_lower"] == 0.0025
    assert verdict.details["lower_bound_steps"] == 1


def test_imaginary_part_coefficients():
    # u = e^{2 pi i x}: Im u = sin(2 pi x)
    u = FourierVec.from_modes({1: ("1", "0")}, N=1)
    b = pipelines.im_part_coefficients(u)
    assert b.coefficient(1).im.lower() <= -0.5 <= b.coefficient(1).im.upper()
    assert b.coefficient(-1).im.lower() <= 0.5 <= b.coefficient(-1).im.upper()
    assert b.coefficient(0).re.upper() == 0.0
    margin = pipelines.imaginary_margin(u, 0.25)
    assert margin.lower() <= 0.75 <= margin.upper()

    real = FourierVec.from_modes({0: ("50", "0"), 1: ("-25", "0"), -1: ("-25", "0")})
    assert pipelines.imaginary_margin(real, 0.0).upper() < 1e-12


def test_unknown_pipeline_is_a_config_error():
    with pytest.raises(ConfigError):
        pipelines.run_pipeline(config("sideways"))



def write_run(cfg, directory):
    writer = records.CertificateWriter(str(directory))
    verdict = pipelines.run_pipeline(cfg, on_certificate=writer.write_step)
    writer.write_summary(verdict)
    return verdict


def assert_replays_identically(directory):
    first = verify_certificates.verify_directory(str(directory))
    second = verify_certificates.verify_directory(str(directory))
    assert first.passed, first.failures
    assert first.checks == second.checks


def record_bytes(directory):
    names = sorted(glob.glob(os.path.join(str(directory), "step-*.yml")))
    names += glob.glob(os.path.join(str(directory), "manifold.yml"))
    contents = {}
    for name in names:
        with open(name, "rb") as handle:
            contents[os.path.basename(name)] = handle.read()
    return contents


WRITTEN_RUNS = {
    "contour": lambda: config("contour"),
    "global-zero-datum": lambda: config("global"),
    "global-trapped-datum": lambda: config("global", TRAPPED_DATUM),
    "global-outside": lambda: config("global", ((0, "1", "0"), (1, "0.001", "0"), (-1, "0.001", "0")),
                                     segments=(segment(t_end=0.005),)),
    "blowup-bound": lambda: config("blowup-bound", segments=(segment(Fraction(0)),), horizon=0.005),
    "branching": lambda: config("branching", segments=bent_contour(),
                                lower_bound_schedule=ContourSchedule((segment(Fraction(0), 0.0, 0.0025),))),
}


@pytest.mark.parametrize("name", sorted(WRITTEN_RUNS))
def test_written_runs_replay_identically(tmp_path, name):
    write_run(WRITTEN_RUNS[name](), tmp_path / "first")
    write_run(WRITTEN_RUNS[name](), tmp_path / "second")
    assert_replays_identically(tmp_path / "first")
    assert_replays_identically(tmp_path / "second")
    assert record_bytes(tmp_path / "first") == record_bytes(tmp_path / "second")


def template_config(templates_directory, name, output_directory):
    status, loaded_parms = load_input_parameter_file(os.path.join(templates_directory, name))
    assert status == 0
    return replace(build_proof_config(loaded_parms), output_directory=str(output_directory))


@pytest.mark.slow
def test_global_existence_at_a_third_of_pi(templates_directory, tmp_path):
    cfg = template_config(templates_directory, "proof--global--theta-pi-3.yml", tmp_path)
    verdict = write_run(cfg, tmp_path)
    assert verdict.status == pipelines.STATUS_PROVED, verdict.message
    assert 0.15 <= verdict.details["t"] <= 0.30
    trapped = verdict.manifold
    assert trapped.r_c.upper() == pytest.approx(4.9153, rel=0.10)
    assert trapped.lam.upper() == pytest.approx(0.9930, rel=0.10)
    # rho below the center inflation is reached only after the state with r_s = 0.0081,
    # when the nonzero modes have decayed further
    assert trapped.rho.upper() < 0.02
    assert 0.5 * 0.0081 <= trapped.r_s.upper() <= 1.10 * 0.0081
    assert_replays_identically(tmp_path)


@pytest.mark.slow
def test_global_existence_at_a_quarter_of_pi(templates_directory, tmp_path):
    cfg = template_config(templates_directory, "proof--global--theta-pi-4.yml", tmp_path)
    verdict = write_run(cfg, tmp_path)
    assert verdict.status == pipelines.STATUS_PROVED, verdict.message
    assert 0.10 <= verdict.details["t"] <= 0.25
    assert verdict.manifold.lam.upper() == pytest.approx(0.9868, rel=0.10)
    assert_replays_identically(tmp_path)


@pytest.mark.slow
def test_branching_for_the_cosine_datum(templates_directory, tmp_path):
    cfg = replace(template_config(templates_directory, "proof--branching.yml", tmp_path), lower_bound_schedule=None)
    verdict = write_run(cfg, tmp_path)
    assert verdict.status == pipelines.STATUS_PROVED, verdict.message
    assert len(verdict.certificates) == 128
    margin = verdict.details["imaginary_margin"]
    assert margin.lower() > 0
    assert margin.lower() == pytest.approx(660.49, rel=0.05)
    assert 0.5765 / 10 <= verdict.details["eps_end"].upper() <= 0.5765 * 10
    assert_replays_identically(tmp_path)


@pytest.mark.slow
def test_real_time_lower_bound_for_the_cosine_datum(templates_directory, tmp_path):
    verdict = write_run(template_config(templates_directory, "proof--blowup-bound.yml", tmp_path), tmp_path)
    assert verdict.status == pipelines.STATUS_COMPLETED
    assert verdict.details["t_lower"] >= 0.010
    assert_replays_identically(tmp_path)
