import csv
import os
from dataclasses import replace
from fractions import Fraction

import pytest

import certificates as records
import pipelines
import verify_certificates
from interval_core import ComplexInterval, RealInterval
from proof_config import ContourSchedule, ProofConfig, SegmentConfig

COSINE_DATUM = ((0, "50", "0"), (1, "-25", "0"), (-1, "-25", "0"))


def cosine_config(output_directory):
    segment = SegmentConfig(Fraction(1, 3), 0.0, 0.005, 0.0025, N=10, n=13, m=2)
    return ProofConfig(pipeline="contour", output_directory=str(output_directory), initial_datum=COSINE_DATUM,
                       schedule=ContourSchedule((segment,)))


@pytest.fixture(scope="module")
def written_run(tmp_path_factory):
    directory = tmp_path_factory.mktemp("contour")
    writer = records.CertificateWriter(str(directory))
    verdict = pipelines.run_pipeline(cosine_config(directory), on_certificate=writer.write_step)
    writer.write_summary(verdict)
    return str(directory), verdict


def test_interval_records_are_exact():
    x = RealInterval(0.1, 0.30000000000000004)
    assert records.interval_record(x) == ["0.1", "0.30000000000000004"]
    back = records.interval_from_record(records.interval_record(x))
    assert (back.lower(), back.upper()) == (x.lower(), x.upper())

    z = ComplexInterval(RealInterval(-1.0, 2.0), RealInterval(1e-300, 3e-300))
    decoded = records.decode(records.encode(z))
    assert decoded.im.lower() == 1e-300 and decoded.re.upper() == 2.0


def test_encode_handles_fractions_and_nested_containers():
    encoded = records.encode({"theta_over_pi": Fraction(-1, 3), "flags": (("ok", True),), "n": 3})
    assert encoded == {"theta_over_pi": "-1/3", "flags": [["ok", True]], "n": 3}


def test_run_writes_every_record(written_run):
    directory, verdict = written_run
    names = sorted(os.listdir(directory))
    assert names == ["step-0001.yml", "step-0002.yml", "steps.csv", "summary.md", "summary.yml"]
    assert verdict.status == pipelines.STATUS_COMPLETED


def test_step_certificates_read_back_bit_for_bit(written_run):
    directory, verdict = written_run
    loaded = records.load_step_certificates(directory)
    assert [c.index for c in loaded] == [1, 2]
    for original, copy in zip(verdict.certificates, loaded):
        assert copy.theta_over_pi == Fraction(1, 3)
        assert (copy.t_lo, copy.t_hi, copy.N, copy.n, copy.m) == (original.t_lo, original.t_hi, 10, 13, 2)
        for name in ("eps_in", "eps_out", "eps_hat", "W_m", "W_J", "W_t"):
            a, b = getattr(original, name), getattr(copy, name)
            assert (a.lower(), a.upper()) == (b.lower(), b.upper()), name
        assert copy.rho.upper() == original.rho.upper()
        assert copy.tail.kappa.lower() == original.tail.kappa.lower()
        assert copy.phi.radii == original.phi.radii
        assert copy.psi.label == "Psi"
        assert copy.evolution.entries[0][1].upper() == original.evolution.entries[0][1].upper()
        assert copy.z_end.re.upper() == original.z_end.re.upper()


def test_summary_record_and_report(written_run):
    directory, _ = written_run
    summary = records.load_summary(directory)
    assert summary["pipeline"] == "contour"
    assert summary["status"] == "completed" and summary["exit_code"] == 0
    assert summary["step_files"] == ["step-0001.yml", "step-0002.yml"]
    assert summary["manifold"] is None and summary["failure"] is None
    with open(os.path.join(directory, records.SUMMARY_REPORT_FILE_NAME)) as handle:
        report = handle.read()
    assert report.startswith("# Proof summary: contour")
    assert "**completed**" in report
    assert "| 2 | 0.005 |" in report
    assert records.load_manifold_certificate(directory) is None


def test_csv_has_one_row_per_step(written_run, tmp_path):
    directory, verdict = written_run
    path = records.export_csv(directory, str(tmp_path / "steps.csv"))
    with open(path, newline="") as handle:
        rows = list(csv.reader(handle))
    assert rows[0] == list(records.CSV_COLUMNS)
    assert [row[0] for row in rows[1:]] == ["1", "2"]
    assert float(rows[2][2]) == verdict.certificates[-1].eps_out.upper()


def test_replay_of_the_written_run_passes(written_run):
    directory, _ = written_run
    report = verify_certificates.verify_directory(directory)
    assert report.passed, report.failures
    assert any(name == "eps_in = previous eps_out" for _, name, _ in report.checks)


def test_replay_detects_a_broken_chain(written_run):
    directory, _ = written_run
    first, second = records.load_step_certificates(directory)
    tampered = replace(second, eps_in=RealInterval(0.0, first.eps_out.upper() / 2))
    report = verify_certificates.replay([first, tampered])
    assert (2, "eps_in = previous eps_out") in report.failures


def test_replay_detects_an_understated_radius(written_run):
    directory, _ = written_run
    first, _ = records.load_step_certificates(directory)
    tampered = replace(first, phi=replace(first.phi, radii=tuple(0.0 for _ in first.phi.radii)))
    report = verify_certificates.replay([tampered])
    assert (1, "Phi radii >= Y0 / (1 - Z0 - Z1)") in report.failures


def test_writer_never_rewrites_a_step(tmp_path, written_run):
    _, verdict = written_run
    writer = records.CertificateWriter(str(tmp_path))
    writer.write_step(verdict.certificates[0])
    with pytest.raises(FileExistsError):
        writer.write_step(verdict.certificates[0])


def test_writer_removes_records_of_an_earlier_run(tmp_path, written_run):
    _, verdict = written_run
    writer = records.CertificateWriter(str(tmp_path))
    for certificate in verdict.certificates:
        writer.write_step(certificate)
    writer.write_summary(verdict)
    records.CertificateWriter(str(tmp_path))
    assert os.listdir(str(tmp_path)) == []


def test_empty_directory_has_nothing_to_verify(tmp_path):
    from proof_errors import ProofError
    with pytest.raises(ProofError):
        verify_certificates.verify_directory(str(tmp_path))
