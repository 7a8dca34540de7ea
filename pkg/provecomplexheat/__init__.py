# This code is needed to import functions from another file in the same directory
# * Example, from prove_complex_heat.py:
#   > from load_input_parameter_file import load_input_parameter_file
# * The numeric modules import each other the same way, e.g.:
#   > import interval_core as ic
# * See: https://stackoverflow.com/a/49375740
import os, sys; sys.path.append(os.path.dirname(os.path.realpath(__file__)))
