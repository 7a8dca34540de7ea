'''

Description:
* Calls prove_complex_heat(), for all of the *.yml files at the specified directory.
  * The *.yml files must be parameter-files, e.g., the files in /templates
  * Each file runs the pipeline named in its "required: pipeline" key
* Used for regression runs of the published experiment parameter-files

Command-line input: the path to a directory with parameter-files

'''

import argparse
import os
import sys

from os import listdir
from os.path import isfile, join

# PyYAML:  pip install PyYAML
import yaml

sys.path.append(os.path.join(os.path.dirname(os.path.realpath(__file__)), '..', 'provecomplexheat'))
import prove_complex_heat

'''
Argparse is used to process the command-line argument
* Argparse docs: https://docs.python.org/3/library/argparse.html
'''
# Creates and returns the ArgumentParser object
def create_arg_parser():
    parser = argparse.ArgumentParser(description=
        'Calls prove_complex_heat.py, for all of the *.yml files at the specified directory.')
    parser.add_argument('input_dir_path', metavar="<input-dir-path>",
                        help='Path to the directory containing the *.yml files.')
    parser.add_argument('--max-steps', dest='max_steps', type=int,
                        help='Overrides max_steps for every run.')
    return parser


def pipeline_of(yml_file_path):
    '''The "required: pipeline" value, or None when the file is not a parameter-file.'''
    try:
        with open(yml_file_path) as file_handle:
            parms = yaml.safe_load(file_handle)
        return parms["required"]["pipeline"]
    except (IOError, yaml.YAMLError, KeyError, TypeError):
        return None


'''
#########
Main
#########
'''
if __name__ == "__main__":
    arg_parser = create_arg_parser()
    parsed_args = arg_parser.parse_args()
    input_dir_path = parsed_args.input_dir_path

    # For the input directory, create a list of files with extension .yml
    all_files = sorted(item for item in listdir(input_dir_path) if isfile(join(input_dir_path, item)))
    yml_files = [name for name in all_files if os.path.splitext(name)[1].lower() == ".yml"]

    overrides = {"max_steps": parsed_args.max_steps}
    counts = {"proved": [], "inconclusive": [], "failed": [], "skipped": []}
    total_num_warning_messages = 0
    for file_name in yml_files:
        print("\nINFO.  Processing the .yml file:  " + file_name)
        yml_file_path = join(input_dir_path, file_name)
        pipeline = pipeline_of(yml_file_path)
        if pipeline is None:
            print("WARNING.  Not a parameter-file, skipped:  " + file_name)
            counts["skipped"].append(file_name)
            continue

        exit_code, num_warning_messages = prove_complex_heat.prove_complex_heat(
            pipeline, yml_file_path, overrides=overrides)
        total_num_warning_messages += num_warning_messages
        name = {0: "proved", 2: "inconclusive"}.get(exit_code, "failed")
        counts[name].append(file_name)

    print("\nBatch processing completed.")
    print("Files processed: " + str(len(yml_files)))
    for name, file_names in counts.items():
        print("Files %s:  Count: %d  File-names: %s" % (name, len(file_names), ", ".join(file_names)))
    print("Number of warning messages: " + str(total_num_warning_messages))
    print("")
