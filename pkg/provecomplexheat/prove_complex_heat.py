#!/usr/bin/env python
'''
########################################################################

DESCRIPTION:  Computer-assisted proofs for the complex-time nonlinear heat
              equation u_z = e^{i theta} (u_xx + u^2), x periodic on [0, 1]

USAGE:
* Calling from the command-line:
> cd <directory with prove_complex_heat.py>
> python prove_complex_heat.py <subcommand> --config <parameter-file> [options]

  Subcommands:
  * approx        approximate solution on the first step, written to approx.yml
  * step          validate the first step only
  * contour       validate every step of the contour
  * branching     prove a branching singularity on the real axis
  * global        prove global existence along the contour
  * blowup-bound  lower bound for the real-time blow-up (theta = 0)
  * verify        replay the checks of a certificate directory (--out)
  * export-csv    write steps.csv for a certificate directory (--out)

  Options:
  * --out <directory>     output directory; overrides the parameter-file
  * --max-steps <n>       overrides global_existence: max_steps
  * --margin-rc <x>       overrides margins: center_radius_inflation
  * --margin-rho <x>      overrides margins: rho_inflation
  * --verbose             also show DEBUG messages

  * If --config is omitted for a proof subcommand, the user is prompted for it.
  * Parameter-file templates are provided in the repo, under /templates.

  Exit codes:  0 proved or completed,  2 inconclusive,  1 error

USAGE:
* Calling from a Python module:
  * Call: prove_complex_heat(command, parameter_file_path, output_directory, overrides)
    * Returns the exit code, and the number of warning messages

MIT License, Copyright (c) 2021-present Jim Yuill

########################################################################
'''

# Python pre-installed libraries
import argparse
import logging
import os
import sys
from dataclasses import replace

# Modules in this package
# * To import modules from this package, code was added to __init__.py
from load_input_parameter_file import load_input_parameter_file
from proof_config import build_proof_config
from proof_errors import ProofError
from proof_messages import configure_console_messages
import approx_solver
import certificates as records
import cheb_time as cheb
import pipelines
import verify_certificates

try:
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

EXIT_ERROR = 1
EXIT_INCONCLUSIVE = 2

# Subcommands that run a proof pipeline, and the pipeline each one runs
PIPELINE_COMMANDS = {
    "contour": "contour",
    "step": "contour",
    "branching": "branching",
    "global": "global",
    "blowup-bound": "blowup-bound",
}
APPROX_COMMAND = "approx"
DIRECTORY_COMMANDS = ("verify", "export-csv")
ALL_COMMANDS = (APPROX_COMMAND,) + tuple(PIPELINE_COMMANDS) + DIRECTORY_COMMANDS

APPROX_FILE_NAME = "approx.yml"


def resolve_output_directory(parameter_file_path, cfg, output_directory):
    '''--out wins; a relative output_directory_path is taken relative to the parameter-file.'''
    if output_directory is not None:
        return output_directory
    if os.path.isabs(cfg.output_directory):
        return cfg.output_directory
    return os.path.join(os.path.dirname(os.path.abspath(parameter_file_path)), cfg.output_directory)


def write_approximation(cfg, output_directory):
    '''Approximate solution on the first step of the first segment.'''
    segment = cfg.schedule.segments[0]
    t_hi = min(segment.t_start + segment.step_size, segment.t_end)
    solve_cfg = approx_solver.SolveConfig(segment.N, segment.n, segment.theta_over_pi, segment.t_start, t_hi,
                                          cfg.solver.newton_tolerance, cfg.solver.max_newton_iterations)
    abar = approx_solver.solve_step(cfg.initial_vector().mid(), solve_cfg)
    record = dict(cheb.to_record(abar), theta_over_pi=str(segment.theta_over_pi))
    os.makedirs(output_directory, exist_ok=True)
    path = os.path.join(output_directory, APPROX_FILE_NAME)
    with open(path, "w") as file_handle:
        yaml.safe_dump(record, file_handle, sort_keys=False, default_flow_style=None)
    logger.info("Approximate solution on [%r, %r] written to:\n%s", segment.t_start, t_hi, path)
    return 0


def run_directory_command(command, output_directory):
    if output_directory is None:
        logger.error("The \"%s\" subcommand needs --out <certificate directory>", command)
        return EXIT_ERROR
    if command == "export-csv":
        path = records.export_csv(output_directory)
        logger.info("CSV written to:\n%s", path)
        return 0
    report = verify_certificates.verify_directory(output_directory)
    if report.passed:
        logger.info("Replay verification passed: %d checks", len(report.checks))
        return 0
    logger.error("Replay verification failed: %d of %d checks", len(report.failures), len(report.checks))
    return EXIT_INCONCLUSIVE


def prove_complex_heat_core(command, parameter_file_path, output_directory=None, overrides=None):
    '''
    * Description:
      * Runs one subcommand.  Called by the wrapper-function prove_complex_heat().
      * Library errors are raised as ProofError, and handled by the wrapper.

    * Return: the exit code
    '''
    if command in DIRECTORY_COMMANDS:
        return run_directory_command(command, output_directory)

    # load_input_parameter_file():
    # * The parameter-file is in YAML format.  It is verified and loaded into
    #   a Python object, made-up of dictionaries and lists.
    return_value, loaded_parms = load_input_parameter_file(parameter_file_path)
    if return_value == 1:
        return EXIT_ERROR

    cfg = build_proof_config(loaded_parms, overrides)
    output_directory = resolve_output_directory(parameter_file_path, cfg, output_directory)
    if command == APPROX_COMMAND:
        return write_approximation(cfg, output_directory)

    cfg = replace(cfg, pipeline=PIPELINE_COMMANDS[command], output_directory=output_directory)
    if command == "step":
        cfg = replace(cfg, max_steps=1)

    logger.info("Running the \"%s\" pipeline.  Certificates are written to:\n%s", cfg.pipeline, output_directory)
    writer = records.CertificateWriter(output_directory)
    writer.copy_parameter_file(parameter_file_path)
    verdict = pipelines.run_pipeline(cfg, on_certificate=writer.write_step)
    writer.write_summary(verdict)

    if verdict.exit_code == 0:
        logger.info("Verdict: %s.  %s", verdict.status, verdict.message)
    else:
        logger.warning("Verdict: %s.  %s", verdict.status, verdict.message)
    return verdict.exit_code

# END of: prove_complex_heat_core()


def prove_complex_heat(command, parameter_file_path=None, output_directory=None, overrides=None,
                       verbose=False):
    '''
    * Description:
      * A wrapper function for calling prove_complex_heat_core().
      * Installs the console messages, catches ProofError, and reports the
        number of warning messages.

    * Return: exit code, number of warning messages
    '''
    counter = configure_console_messages(verbose)
    try:
        exit_code = prove_complex_heat_core(command, parameter_file_path, output_directory, overrides)
    except ProofError as e:
        logger.error("%s: %s", type(e).__name__, e)
        if e.diagnostics:
            logger.error("Diagnostics: %s", e.diagnostics)
        exit_code = EXIT_ERROR
    except IOError as e:
        logger.error("Could not read or write a file.  %s - %s.", e.strerror, e.filename)
        exit_code = EXIT_ERROR

    if exit_code == EXIT_ERROR:
        logger.info("Error encountered, processing not completed.  Warning messages: %d", counter.warnings)
    else:
        logger.info("Processing completed.  Warning messages: %d", counter.warnings)
    return exit_code, counter.warnings

# END OF: prove_complex_heat()


def create_arg_parser():
    '''
    * Description:
      * Argparse is used to process the command-line arguments
      * Creates and returns the ArgumentParser object

    * References
      * Argparse docs: https://docs.python.org/3/library/argparse.html
    '''
    parser = argparse.ArgumentParser(description=
        'Computer-assisted proofs for the complex-time nonlinear heat equation.')
    parser.add_argument('command', choices=ALL_COMMANDS, metavar="<subcommand>",
                        help='One of: ' + ", ".join(ALL_COMMANDS))
    parser.add_argument('--config', dest='parameter_file_path', metavar="<parameter-file-path>",
                        help='Path to the parameter-file.')
    parser.add_argument('--out', dest='output_directory', metavar="<directory>",
                        help='Output directory.  For verify and export-csv: the certificate directory.')
    parser.add_argument('--max-steps', dest='max_steps', type=int, metavar="<n>",
                        help='Maximum number of validated steps.')
    parser.add_argument('--margin-rc', dest='margin_rc', metavar="<x>",
                        help='Relative inflation of the center radius r_c.')
    parser.add_argument('--margin-rho', dest='margin_rho', metavar="<x>",
                        help='Relative inflation of rho above the smallest feasible value.')
    parser.add_argument('--verbose', action='store_true', help='Also show DEBUG messages.')
    return parser

# END OF: create_arg_parser()


def main(argv=None):
    arg_parser = create_arg_parser()
    parsed_args = arg_parser.parse_args(argv)
    parameter_file_path = parsed_args.parameter_file_path

    # * If a parameter-file path was not provided on the command-line,
    #   then prompt for it
    if parameter_file_path is None and parsed_args.command not in DIRECTORY_COMMANDS:
        parameter_file_path = input("Enter parameter-file path: ").strip()
        if parameter_file_path == "":
            print("")
            print("ERROR.  Parameter-file path not provided.")
            print("")
            return EXIT_ERROR

    overrides = {"max_steps": parsed_args.max_steps, "margin_rc": parsed_args.margin_rc,
                 "margin_rho": parsed_args.margin_rho}
    exit_code, _ = prove_complex_heat(parsed_args.command, parameter_file_path, parsed_args.output_directory,
                                      overrides, parsed_args.verbose)
    return exit_code


'''
#############
Command-line interface
#############
'''
if __name__ == "__main__":
    sys.exit(main())
