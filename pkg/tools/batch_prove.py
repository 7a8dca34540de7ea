'''

Description:
* Runs one proof for each of several values of theta
  * Each run has its own parameter-file and output directory, so the runs
    are independent and may run in parallel (--jobs).

* For each theta:
  * Create a parameter-file (.yml) from the config-file batch_prove.yml,
    using Jinja2, in the input directory
  * Call prove_complex_heat(), and provide the path to the parameter-file

Inputs:
* Command-line input: Path to the directory containing batch_prove.yml
* Input config-file: batch_prove.yml, in the input directory.
  * It is a Jinja template, used to create the .yml files
  * Template variables: thetaOverPi, thetaSlug
  * An example config-file is provided in the repo.

Output:
* A batch summary: proved, inconclusive and failed runs

'''


import argparse
import os
import sys
from concurrent.futures import ProcessPoolExecutor

from jinja2 import Template

sys.path.append(os.path.join(os.path.dirname(os.path.realpath(__file__)), '..', 'provecomplexheat'))
import prove_complex_heat

CONFIG_FILE_NAME_ROOT = "batch_prove"

DEFAULT_THETAS = ("1/3", "1/4", "1/6", "1/12")

EXIT_CODE_NAMES = {0: "proved", 1: "failed", 2: "inconclusive"}


'''
Argparse is used to process the command-line arguments
* Argparse docs: https://docs.python.org/3/library/argparse.html
'''
# Creates and returns the ArgumentParser object
def create_arg_parser():
    parser = argparse.ArgumentParser(description=
        'Runs prove_complex_heat.py for several values of theta.')
    parser.add_argument('input_dir_path', metavar="<input-dir-path>",
                        help='Path to the directory containing batch_prove.yml.')
    parser.add_argument('--theta', dest='thetas', nargs='+', default=list(DEFAULT_THETAS),
                        metavar="<theta/pi>", help='Values of theta/pi, e.g., 1/3 1/4.')
    parser.add_argument('--command', default="global", choices=prove_complex_heat.ALL_COMMANDS,
                        help='The prove_complex_heat.py subcommand.  Default: global')
    parser.add_argument('--jobs', type=int, default=1, help='Runs in parallel.  Default: 1')
    return parser


def theta_slug(theta_over_pi):
    '''"1/3" -> "1-over-3pi"'''
    return theta_over_pi.replace("/", "-over-") + "pi"


def render_parameter_file(template, input_dir_path, theta_over_pi):
    '''Writes the parameter-file for theta_over_pi and returns its path.'''
    slug = theta_slug(theta_over_pi)
    file_path = os.path.join(input_dir_path, "%s--theta-%s.yml" % (CONFIG_FILE_NAME_ROOT, slug))
    print("INFO.  Creating the parameter-file:  " + file_path)
    with open(file_path, 'w') as file_handle:
        file_handle.write(template.render({'thetaOverPi': theta_over_pi, 'thetaSlug': slug}))
    return file_path


def run_one(command, parameter_file_path):
    exit_code, num_warning_messages = prove_complex_heat.prove_complex_heat(command, parameter_file_path)
    return exit_code, num_warning_messages


def print_batch_summary(results):
    '''results: (theta/pi, exit code, number of warning messages) triples'''
    print("\nBatch processing completed.")
    print("Runs: " + str(len(results)))
    for code, name in sorted(EXIT_CODE_NAMES.items()):
        thetas = [theta for theta, exit_code, _ in results if exit_code == code]
        print("Runs %s:  Count: %d  theta/pi: %s" % (name, len(thetas), ", ".join(thetas)))
    print("Number of warning messages: " + str(sum(n for _, _, n in results)))
    print("")


'''
#########
Main
#########
'''
if __name__ == "__main__":
    arg_parser = create_arg_parser()
    parsed_args = arg_parser.parse_args()
    input_dir_path = parsed_args.input_dir_path

    # Verify the expected config-file exists, and load it as a Jinja2 template
    config_file_path = os.path.join(input_dir_path, CONFIG_FILE_NAME_ROOT + ".yml")
    print("INFO.  Opening the config-file, and loading it as a Jinja2 template: " + config_file_path)
    try:
        with open(config_file_path) as config_file_handle:
            config_file_template = Template(config_file_handle.read())
    except IOError as e:
        print("")
        print("ERROR.  Could not open the config-file:")
        print("%s - %s." % (e.strerror, e.filename))
        print("")
        sys.exit(1)

    parameter_files = [render_parameter_file(config_file_template, input_dir_path, theta)
                       for theta in parsed_args.thetas]

    if parsed_args.jobs > 1:
        with ProcessPoolExecutor(max_workers=parsed_args.jobs) as pool:
            outcomes = list(pool.map(run_one, [parsed_args.command] * len(parameter_files), parameter_files))
    else:
        outcomes = [run_one(parsed_args.command, path) for path in parameter_files]

    results = [(theta, exit_code, warnings) for theta, (exit_code, warnings) in zip(parsed_args.thetas, outcomes)]
    print_batch_summary(results)
