# Specifies the YAML keys for the input parameter-file

YML_KEY_REQUIRED = "required"
YML_KEY_VERSION = "version"
YML_KEY_OUTPUT_DIRECTORY_PATH = "output_directory_path"
YML_KEY_PIPELINE = "pipeline"
# The allowable values for the key "pipeline"
YML_PIPELINE_CONTOUR = "contour"
YML_PIPELINE_BRANCHING = "branching"
YML_PIPELINE_GLOBAL = "global"
YML_PIPELINE_BLOWUP_BOUND = "blowup-bound"

YML_KEY_INITIAL_DATUM = "initial_datum"
YML_KEY_MODE = "mode"
YML_KEY_WAVENUMBER = "wavenumber"
YML_KEY_RE = "re"
YML_KEY_IM = "im"

YML_KEY_CONTOUR = "contour"
YML_KEY_SEGMENT = "segment"
YML_KEY_THETA_OVER_PI = "theta_over_pi"
YML_KEY_T_START = "t_start"
YML_KEY_T_END = "t_end"
YML_KEY_STEP_SIZE = "step_size"
YML_KEY_STEPS = "steps"
YML_KEY_FOURIER_ORDER = "fourier_order"
YML_KEY_CHEBYSHEV_ORDER = "chebyshev_order"
YML_KEY_PROJECTION_ORDER = "projection_order"
YML_KEY_DECAY_RATE = "decay_rate"
YML_KEY_VARIATIONAL_ORDER = "variational_order"

YML_KEY_MARGINS = "margins"
YML_KEY_INITIAL_ERROR = "initial_error"
YML_KEY_CENTER_RADIUS_INFLATION = "center_radius_inflation"
YML_KEY_RHO_INFLATION = "rho_inflation"

YML_KEY_SOLVER = "solver"
YML_KEY_NEWTON_TOLERANCE = "newton_tolerance"
YML_KEY_MAX_NEWTON_ITERATIONS = "max_newton_iterations"
YML_KEY_MAX_HALVINGS = "max_halvings"
YML_KEY_WORKERS = "workers"
YML_KEY_REFINE_SUP = "refine_sup"

YML_KEY_GLOBAL_EXISTENCE = "global_existence"
YML_KEY_MAX_STEPS = "max_steps"

YML_KEY_BLOWUP_BOUND = "blowup_bound"
YML_KEY_HORIZON = "horizon"

YML_KEY_BRANCHING = "branching"
YML_KEY_LOWER_BOUND_CONTOUR = "lower_bound_contour"
