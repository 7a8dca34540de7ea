'''
################
Certificate records: one YAML file per validated step, plus the summary.

* Output directory layout:
      step-0001.yml, step-0002.yml, ...   one StepCertificate each, written
                                          when the step is final
      manifold.yml                        the passing ManifoldCertificate, if any
      summary.yml                         the verdict record
      summary.md                          the verdict as a readable report
      steps.csv                           i, t, eps, rho, W_h, delta
      parameters.yml                      copy of the input parameter-file
* Interval endpoints are written as repr() strings of the floats, so every
  number reads back bit for bit.  A real interval is [lo, hi]; a complex
  interval is {re: [lo, hi], im: [lo, hi]}; theta/pi is a rational string.

MIT License, Copyright (c) 2021-present Jim Yuill
################
'''

import csv
import dataclasses
import glob
import logging
import os
import shutil
import sys
import typing
from fractions import Fraction

import numpy as np

from interval_core import ComplexInterval, RealInterval
import manifold
import stepper

try:
    # Jinja2:  pip install jinja2
    from jinja2 import Template
    # PyYAML:  pip install PyYAML
    import yaml
except ImportError as e:
    print("")
    print("ERROR.  Could not import a required Python module.")
    print("        The installation instructions specify the required modules.")
    print("        Import-error description:")
    print("")
    print(e)
    print("")
    sys.exit()

logger = logging.getLogger(__name__)

'''
##################
Constants
##################
'''
STEP_FILE_PATTERN = "step-%04d.yml"
STEP_FILE_GLOB = "step-*.yml"
MANIFOLD_FILE_NAME = "manifold.yml"
SUMMARY_FILE_NAME = "summary.yml"
SUMMARY_REPORT_FILE_NAME = "summary.md"
CSV_FILE_NAME = "steps.csv"
PARAMETERS_COPY_FILE_NAME = "parameters.yml"

# Jinja2 template for summary.md, in this package's directory
SUMMARY_TEMPLATE_FILE_NAME = "summary_template.md"

CSV_COLUMNS = ("i", "t", "eps", "rho", "W_h", "delta")

# Record fields holding theta/pi
RATIONAL_FIELDS = ("theta_over_pi",)


'''
##################
Encoding
##################
'''


def interval_record(x):
    return [repr(float(x.lo)), repr(float(x.hi))]


def interval_from_record(pair):
    lo, hi = pair
    return RealInterval(float(lo), float(hi))


def _is_interval_record(value):
    return isinstance(value, list) and len(value) == 2 and all(isinstance(v, str) for v in value)


def encode(value):
    '''Plain YAML-safe data for dataclasses, intervals, Fractions and numpy scalars.'''
    if isinstance(value, RealInterval):
        if value.shape != ():
            return [interval_record(value[i]) for i in range(len(value))]
        return interval_record(value)
    if isinstance(value, ComplexInterval):
        return {"re": interval_record(value.re), "im": interval_record(value.im)}
    if dataclasses.is_dataclass(value):
        return {f.name: encode(getattr(value, f.name)) for f in dataclasses.fields(value)}
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return [encode(v) for v in value.tolist()]
    if isinstance(value, (list, tuple)):
        return [encode(v) for v in value]
    if isinstance(value, dict):
        return {str(k): encode(v) for k, v in value.items()}
    return value


def decode(value, hint=None):
    '''Inverse of encode(); hint is the annotated field type, used for nested dataclasses.'''
    if hint is not None and dataclasses.is_dataclass(hint) and isinstance(value, dict):
        return decode_dataclass(hint, value)
    if isinstance(value, dict) and set(value) == {"re", "im"}:
        return ComplexInterval(interval_from_record(value["re"]), interval_from_record(value["im"]))
    if _is_interval_record(value):
        return interval_from_record(value)
    if isinstance(value, list):
        return tuple(decode(v) for v in value)
    return value


def decode_dataclass(cls, record):
    hints = typing.get_type_hints(cls)
    values = {}
    for f in dataclasses.fields(cls):
        if f.name not in record:
            continue
        raw = record[f.name]
        if f.name in RATIONAL_FIELDS and raw is not None:
            values[f.name] = Fraction(raw)
        else:
            values[f.name] = decode(raw, hints.get(f.name))
    return cls(**values)


def certificate_to_record(certificate):
    return encode(certificate)


def certificate_from_record(record):
    return decode_dataclass(stepper.StepCertificate, record)


def manifold_to_record(certificate):
    return encode(certificate)


def manifold_from_record(record):
    return decode_dataclass(manifold.ManifoldCertificate, record)


def verdict_to_record(verdict):
    '''The summary.yml record of a ProofVerdict; certificates are referenced, not repeated.'''
    return {
        "pipeline": verdict.pipeline,
        "status": verdict.status,
        "exit_code": verdict.exit_code,
        "message": verdict.message,
        "steps": len(verdict.certificates),
        "step_files": [STEP_FILE_PATTERN % c.index for c in verdict.certificates],
        "manifold": None if verdict.manifold is None else MANIFOLD_FILE_NAME,
        "details": encode(verdict.details),
        "failure": encode(verdict.failure),
    }


'''
##################
Reading and writing
##################
'''


def _write_yaml(path, record):
    with open(path, "w") as file_handle:
        yaml.safe_dump(record, file_handle, sort_keys=False, default_flow_style=None)


def _read_yaml(path):
    with open(path) as file_handle:
        return yaml.safe_load(file_handle)


class CertificateWriter:
    '''
    Writes the records of one proof run into output_directory.

    * write_step() is the on_certificate callback of the pipelines; a step
      file is created once and never rewritten.
    * Step files left in the directory by an earlier run are removed first.
    '''

    def __init__(self, output_directory):
        self.output_directory = output_directory
        self.written = []
        os.makedirs(output_directory, exist_ok=True)
        stale = sorted(glob.glob(os.path.join(output_directory, STEP_FILE_GLOB)))
        if stale:
            logger.info("Removing %d step files of an earlier run in: %s", len(stale), output_directory)
            for path in stale:
                os.remove(path)
        for name in (MANIFOLD_FILE_NAME, SUMMARY_FILE_NAME, SUMMARY_REPORT_FILE_NAME, CSV_FILE_NAME):
            path = os.path.join(output_directory, name)
            if os.path.exists(path):
                os.remove(path)

    def write_step(self, certificate):
        path = os.path.join(self.output_directory, STEP_FILE_PATTERN % certificate.index)
        with open(path, "x") as file_handle:
            yaml.safe_dump(certificate_to_record(certificate), file_handle,
                           sort_keys=False, default_flow_style=None)
        self.written.append(certificate)
        logger.debug("Wrote certificate: %s", path)

    __call__ = write_step

    def copy_parameter_file(self, parameter_file_path):
        destination = os.path.join(self.output_directory, PARAMETERS_COPY_FILE_NAME)
        if os.path.abspath(parameter_file_path) != os.path.abspath(destination):
            shutil.copyfile(parameter_file_path, destination)

    def write_summary(self, verdict):
        '''summary.yml, summary.md, steps.csv and, when present, manifold.yml.'''
        if verdict.manifold is not None:
            _write_yaml(os.path.join(self.output_directory, MANIFOLD_FILE_NAME),
                        manifold_to_record(verdict.manifold))
        _write_yaml(os.path.join(self.output_directory, SUMMARY_FILE_NAME), verdict_to_record(verdict))
        write_csv(os.path.join(self.output_directory, CSV_FILE_NAME), verdict.certificates)
        report_path = os.path.join(self.output_directory, SUMMARY_REPORT_FILE_NAME)
        with open(report_path, "w") as file_handle:
            file_handle.write(render_summary(verdict))
        logger.info("Summary written to: %s", report_path)


def load_step_certificates(directory):
    '''The StepCertificates of directory, in step order.'''
    paths = sorted(glob.glob(os.path.join(directory, STEP_FILE_GLOB)))
    return [certificate_from_record(_read_yaml(path)) for path in paths]


def load_manifold_certificate(directory):
    path = os.path.join(directory, MANIFOLD_FILE_NAME)
    if not os.path.exists(path):
        return None
    return manifold_from_record(_read_yaml(path))


def load_summary(directory):
    path = os.path.join(directory, SUMMARY_FILE_NAME)
    if not os.path.exists(path):
        return None
    return _read_yaml(path)


'''
##################
CSV and the summary report
##################
'''


def csv_rows(certificates):
    for certificate in certificates:
        yield (certificate.index, repr(certificate.t_hi), repr(certificate.eps_out.upper()),
               repr(certificate.rho.upper()), repr(certificate.W_h.upper()), repr(certificate.delta.upper()))


def write_csv(path, certificates):
    with open(path, "w", newline="") as file_handle:
        writer = csv.writer(file_handle)
        writer.writerow(CSV_COLUMNS)
        writer.writerows(csv_rows(certificates))
    return path


def export_csv(directory, csv_path=None):
    '''steps.csv from the step files of directory; returns the path written.'''
    csv_path = os.path.join(directory, CSV_FILE_NAME) if csv_path is None else csv_path
    return write_csv(csv_path, load_step_certificates(directory))


def _load_summary_template():
    template_path = os.path.join(os.path.dirname(os.path.realpath(__file__)), SUMMARY_TEMPLATE_FILE_NAME)
    with open(template_path) as file_handle:
        return Template(file_handle.read(), trim_blocks=True, lstrip_blocks=True)


def _upper(x):
    return "%.6g" % x.upper()


def render_summary(verdict):
    rows = [{"i": c.index, "t": "%.6g" % c.t_hi, "eps": _upper(c.eps_out), "rho": _upper(c.rho),
             "W_h": _upper(c.W_h), "delta": _upper(c.delta), "m": c.m} for c in verdict.certificates]
    trapped = verdict.manifold
    manifold_values = None
    if trapped is not None:
        manifold_values = {
            "step_index": trapped.step_index, "t": "%.6g" % trapped.t,
            "r_c": _upper(trapped.r_c), "r_s": _upper(trapped.r_s),
            "rho": _upper(trapped.rho), "lam": _upper(trapped.lam),
            "flags": trapped.flags}
    details = {key: _format_detail(value) for key, value in verdict.details.items()}
    return _load_summary_template().render(
        pipeline=verdict.pipeline, status=verdict.status, message=verdict.message,
        exit_code=verdict.exit_code, rows=rows, manifold=manifold_values, details=details,
        failure=verdict.failure)


def _format_detail(value):
    if isinstance(value, RealInterval):
        return "[%r, %r]" % (value.lower(), value.upper())
    if isinstance(value, ComplexInterval):
        return "[%r, %r] + i[%r, %r]" % (value.re.lower(), value.re.upper(),
                                         value.im.lower(), value.im.upper())
    return str(value)
