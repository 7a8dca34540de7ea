'''
################
This file contains the function: load_input_parameter_file()

The function is called by: prove_complex_heat_core() in prove_complex_heat.py,
and by the batch tools.

MIT License, Copyright (c) 2021-present Jim Yuill
################
'''

import logging
import os
import sys
# Specifies the YAML keys for the input parameter-file
from input_parameter_file_keys import *

# These libraries need to have been installed by the user
try:
    '''
    YAML-related libraries
    '''
    # Cerberus:  pip install cerberus
    from cerberus import Validator
    # pprint++:  pip install pprintpp
    import pprintpp
    # PyYAML:  pip install PyYAML
    import yaml
    # yamllint:  pip install yamllint
    import yamllint
    import yamllint.linter
    from yamllint.config import YamlLintConfig
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
# Name for the yamllint config-file
YAMLLINT_CONFIG_FILE_NAME = "yamllint_config_file.yml"

# The parameter-file version this code reads
PARAMETER_FILE_VERSION = "1.0"

'''
# The following are Cerberus schema-definitions, for the input parameter-file.
  * The parameter-file is in YAML format.
  * These schema-definitions specify the parameter-file's structure, keys, and values.
  * Real numbers are given as quoted strings, e.g., "0.0025" or "1/3".  They are
    converted exactly and then enclosed in intervals, so the proof inputs are
    reproducible bit for bit.
  * Since Cerberus is used to validate the parameter-file, the code that processes
    the parameter-file assumes it has valid syntax, e.g., that required keys are present.
'''

# A decimal or rational number given as a string: "50", "-25", "0.0025", "1/3", "1e-13"
NUMBER_STRING_REGEX = r"^[-+]?(\d+(\.\d*)?|\.\d+)([eE][-+]?\d+)?(/\d+)?$"

NUMBER_STRING = {
    "type": "string",
    "regex": NUMBER_STRING_REGEX
}

# Schema for one contour segment.
# Example contents:
#
#   - segment:
#       theta_over_pi: "1/3"
#       t_start: "0"
#       t_end: "0.205"
#       step_size: "0.0025"
#       fourier_order: 14
#       chebyshev_order: 13
#       projection_order: 2
#       decay_rate: "1.5"
#
SEGMENT_LIST_SCHEMA = {
    "type": "list",
    "minlength": 1,
    "schema": {
        "type": "dict",
        "schema": {
            YML_KEY_SEGMENT: {
                "type": "dict",
                "required": True,
                "schema": {
                    YML_KEY_THETA_OVER_PI: dict(NUMBER_STRING, required=True),
                    YML_KEY_T_START: dict(NUMBER_STRING, required=True),
                    YML_KEY_T_END: dict(NUMBER_STRING, required=True),
                    # Exactly one of step_size and steps
                    YML_KEY_STEP_SIZE: dict(NUMBER_STRING, required=False, excludes=YML_KEY_STEPS),
                    YML_KEY_STEPS: {
                        "type": "integer",
                        "required": False,
                        "min": 1,
                        "excludes": YML_KEY_STEP_SIZE
                    },
                    YML_KEY_FOURIER_ORDER: {"type": "integer", "required": True, "min": 1},
                    YML_KEY_CHEBYSHEV_ORDER: {"type": "integer", "required": True, "min": 2},
                    YML_KEY_PROJECTION_ORDER: {"type": "integer", "required": True, "min": 0},
                    YML_KEY_DECAY_RATE: dict(NUMBER_STRING, required=False),
                    YML_KEY_VARIATIONAL_ORDER: {"type": "integer", "required": False, "min": 2}
                }
            }
        }
    }
}

# The Cerberus schema-definition
PARAMETER_FILE_SCHEMA = {

    # Parameter-file section. Name: "required":
    # Example contents for the section:
    #
    #   required:
    #     version: "1.0"
    #     output_directory_path: ./proofs/global-theta-pi-3
    #     pipeline: global
    #
    YML_KEY_REQUIRED: {
        "type": "dict",
        "required": True,
        "schema": {
            YML_KEY_VERSION: {
                "type": "string",
                "required": True,
                "minlength": 1
            },
            YML_KEY_OUTPUT_DIRECTORY_PATH: {
                "type": "string",
                "required": True,
                "minlength": 1
            },
            YML_KEY_PIPELINE: {
                "type": "string",
                "required": True,
                "allowed": [YML_PIPELINE_CONTOUR, YML_PIPELINE_BRANCHING,
                            YML_PIPELINE_GLOBAL, YML_PIPELINE_BLOWUP_BOUND]
            }
        }
    },

    # Parameter-file section. Name: "initial_datum":
    # Example contents for the section:
    #
    #   initial_datum:
    #     - mode:
    #         wavenumber: 0
    #         re: "50"
    #     - mode:
    #         wavenumber: 1
    #         re: "-25"
    #
    YML_KEY_INITIAL_DATUM: {
        "type": "list",
        "required": True,
        "schema": {
            "type": "dict",
            "schema": {
                YML_KEY_MODE: {
                    "type": "dict",
                    "required": True,
                    "schema": {
                        YML_KEY_WAVENUMBER: {"type": "integer", "required": True},
                        YML_KEY_RE: dict(NUMBER_STRING, required=False),
                        YML_KEY_IM: dict(NUMBER_STRING, required=False)
                    }
                }
            }
        }
    },

    # Parameter-file section. Name: "contour":
    # * One or more segments, contiguous in the path parameter t.
    YML_KEY_CONTOUR: dict(SEGMENT_LIST_SCHEMA, required=True),

    # Parameter-file section. Name: "margins":
    # Example contents for the section:
    #
    #   margins:
    #     initial_error: "0"
    #     center_radius_inflation: "0.02"
    #     rho_inflation: "0.05"
    #
    YML_KEY_MARGINS: {
        "type": "dict",
        "required": False,
        "schema": {
            YML_KEY_INITIAL_ERROR: dict(NUMBER_STRING, required=False),
            YML_KEY_CENTER_RADIUS_INFLATION: dict(NUMBER_STRING, required=False),
            YML_KEY_RHO_INFLATION: dict(NUMBER_STRING, required=False)
        }
    },

    # Parameter-file section. Name: "solver":
    # Example contents for the section:
    #
    #   solver:
    #     newton_tolerance: "1e-13"
    #     max_newton_iterations: 25
    #     max_halvings: 6
    #     workers: 4
    #     refine_sup: false
    #
    YML_KEY_SOLVER: {
        "type": "dict",
        "required": False,
        "schema": {
            YML_KEY_NEWTON_TOLERANCE: dict(NUMBER_STRING, required=False),
            YML_KEY_MAX_NEWTON_ITERATIONS: {"type": "integer", "required": False, "min": 1},
            YML_KEY_MAX_HALVINGS: {"type": "integer", "required": False, "min": 0},
            YML_KEY_WORKERS: {"type": "integer", "required": False, "min": 1},
            YML_KEY_REFINE_SUP: {"type": "boolean", "required": False}
        }
    },

    # Parameter-file section. Name: "global_existence":
    #
    #   global_existence:
    #     max_steps: 400
    #
    YML_KEY_GLOBAL_EXISTENCE: {
        "type": "dict",
        "required": False,
        "schema": {
            YML_KEY_MAX_STEPS: {"type": "integer", "required": False, "min": 1}
        }
    },

    # Parameter-file section. Name: "blowup_bound":
    #
    #   blowup_bound:
    #     horizon: "0.0145"
    #
    YML_KEY_BLOWUP_BOUND: {
        "type": "dict",
        "required": False,
        "schema": {
            YML_KEY_HORIZON: dict(NUMBER_STRING, required=False)
        }
    },

    # Parameter-file section. Name: "branching":
    # * lower_bound_contour: the real-axis contour (theta = 0) that gives the
    #   lower bound of the singularity's position.  Same layout as "contour".
    YML_KEY_BRANCHING: {
        "type": "dict",
        "required": False,
        "schema": {
            YML_KEY_LOWER_BOUND_CONTOUR: dict(SEGMENT_LIST_SCHEMA, required=False)
        }
    }
}
# END of: PARAMETER_FILE_SCHEMA = {


def load_input_parameter_file(parameter_file_path: str):
    '''
    Description:
    * Loads the proof parameter-file, and verifies it

    Operation:
    * yamllint is used to verify the parameter-file's YAML syntax.
    * PyYAML's YAML-loader is used to load the parameter-file into a Python
      object, made-up of dictionaries and lists.
    * Cerberus is used to verify the parameter-file's syntax, using a schema.
    * Verifies the parameter-file version

    Parameter: parameter_file_path, specifies the input parameter-file's path

    Return
    * 1, None : Error
    * 0, loaded_parms : loaded_parms is a dictionary with the input parameter-file's
                        contents
    '''

    # Open the input parameter-file
    logger.info("Processing the parameter-file: %s", parameter_file_path)
    try:
        parameter_file_handle = open(parameter_file_path)
    except IOError as e:
        logger.error("Could not open the parameter-file.  %s - %s.", e.strerror, e.filename)
        return 1, None

    '''
    ############
    # yamllint is used to verify the parameter-file's YAML syntax.
    ############
    '''
    # * A yamllint config-file is used, which is distributed with this package.
    program_directory = os.path.dirname(os.path.realpath(__file__))
    yamllint_config_file_path = os.path.join(program_directory, YAMLLINT_CONFIG_FILE_NAME)
    logger.debug("yamllint config-file: %s", yamllint_config_file_path)
    try:
        # YamlLintConfig():  https://github.com/adrienverge/yamllint/blob/master/yamllint/config.py
        yamllint_configuration = YamlLintConfig(file=yamllint_config_file_path)
    except IOError as e:
        logger.error("Could not open the config-file for yamllint.  %s - %s.", e.strerror, e.filename)
        parameter_file_handle.close()
        return 1, None

    # The linter returns a generator, for the errors found.
    # * The linter's error output:  https://yamllint.readthedocs.io/en/stable/development.html
    yaml_error_list = list(yamllint.linter.run(parameter_file_handle, yamllint_configuration))
    if len(yaml_error_list) > 0:
        logger.error("yamllint found syntax errors in the parameter-file.  "
                     "A reported error may be caused by a problem earlier in the file.")
        for message in yaml_error_list:
            yamllint_rule = str(message.rule) if message.rule is not None else "[not specified]"
            yaml_error_line = str(message.line) if message.line is not None else "[not specified]"
            yaml_error_description = message.desc if message.desc is not None else "[not specified]"
            logger.error("Error on line: %s.  yamllint rule-type: %s.  Description: %s",
                         yaml_error_line, yamllint_rule, yaml_error_description)
        logger.info("yamllint rule-types: https://yamllint.readthedocs.io/en/stable/rules.html")
        parameter_file_handle.close()
        return 1, None

    '''
    ################
    # PyYAML's YAML-loader is used to load the parameter-file
    ################
    '''
    # The file-pointer is first reset to the beginning
    parameter_file_handle.seek(0)
    parameter_file_text = parameter_file_handle.read()
    parameter_file_handle.close()

    try:
        # yaml.load's exceptions:  https://pyyaml.org/wiki/PyYAMLDocumentation
        loaded_parms = yaml.load(parameter_file_text, Loader=yaml.FullLoader)
    except yaml.YAMLError as e:
        if hasattr(e, 'problem_mark'):
            logger.error("The YAML-loader was not able to load the parameter-file, "
                         "on, or near, line: %d", e.problem_mark.line + 1)
        logger.error("Error-message from the YAML-loader: %s", e)
        return 1, None

    # This can happen if the input file just has a line "---"
    if loaded_parms is None:
        logger.error("The YAML-loader did not load anything.  "
                     "The parameter-file appears to be in error, e.g., has no keys.")
        return 1, None

    '''
    ###################
    # Cerberus is used to verify the parameter-file's syntax, using the schema.
    ###################
    '''
    cerberus_validator = Validator()
    # * Cerberus can crash with some invalid inputs, so use try/except.
    try:
        validation_result = cerberus_validator.validate(loaded_parms, PARAMETER_FILE_SCHEMA)
    except Exception:
        logger.error("An exception was raised in Cerberus.  The parameter-file is likely to be in error.")
        return 1, None

    if not validation_result:
        # The Cerberus error-message is formatted using pprint++
        # * pprint++ docs: https://github.com/wolever/pprintpp
        logger.error("An error was found in the parameter-file.  The Cerberus error-message:\n%s",
                     pprintpp.pformat(cerberus_validator.errors))
        return 1, None

    '''
    ##############
    # Verify the version that is specified in the parameter-file
    ##############
    '''
    key_version_value = loaded_parms[YML_KEY_REQUIRED][YML_KEY_VERSION]
    if key_version_value != PARAMETER_FILE_VERSION:
        logger.error("Error in the parameter-file.  In section \"%s\", the key \"%s\" has an "
                     "incorrect value: %s", YML_KEY_REQUIRED, YML_KEY_VERSION, key_version_value)
        return 1, None

    return 0, loaded_parms

# END OF: load_input_parameter_file()
