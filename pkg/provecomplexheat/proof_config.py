'''
################
Proof configuration: frozen dataclasses built from a loaded parameter-file.

* build_proof_config() converts the dictionary returned by
  load_input_parameter_file() into a ProofConfig.
* Real numbers stay exact (Fraction or decimal string) until a numeric module
  encloses them; theta is kept as theta/pi.
* Inconsistent setups that Cerberus cannot see (non-contiguous segments,
  m > N, |theta| >= pi/2) raise ConfigError.

MIT License, Copyright (c) 2021-present Jim Yuill
################
'''

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Optional, Tuple

from input_parameter_file_keys import *
import interval_core as ic
from fourier_space import FourierVec
from proof_errors import ConfigError

# Defaults for keys that may be omitted from the parameter-file
DEFAULT_DECAY_RATE = "1.5"
DEFAULT_CENTER_RADIUS_INFLATION = "0.02"
DEFAULT_RHO_INFLATION = "0.05"
DEFAULT_MAX_STEPS = 1000

# A segment end within this relative distance of the next grid point ends the segment
SEGMENT_END_TOLERANCE = 1e-12


def exact_number(text):
    '''A parameter-file number string ("0.0025", "1/3", "1e-13") as a Fraction.'''
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError) as err:
        raise ConfigError("Not a decimal or rational number: %r" % (text,)) from err


@dataclass(frozen=True)
class SegmentConfig:
    theta_over_pi: Fraction
    t_start: float
    t_end: float
    step_size: float
    N: int
    n: int
    m: int
    nu: str = DEFAULT_DECAY_RATE
    variational_order: Optional[int] = None

    def __post_init__(self):
        if not abs(self.theta_over_pi) < Fraction(1, 2):
            raise ConfigError("Segment theta must satisfy |theta| < pi/2",
                              {"theta_over_pi": str(self.theta_over_pi)})
        if not self.t_start < self.t_end:
            raise ConfigError("Segment needs t_start < t_end", {"t_start": self.t_start, "t_end": self.t_end})
        if not self.step_size > 0:
            raise ConfigError("Segment step size must be positive", {"step_size": self.step_size})
        if self.m > self.N:
            raise ConfigError("Projection order m exceeds the Fourier order N", {"m": self.m, "N": self.N})
        if exact_number(self.nu) < 1:
            raise ConfigError("Decay rate nu must be at least 1", {"nu": self.nu})

    @property
    def column_order(self):
        '''Chebyshev order of the fundamental-matrix columns.'''
        return self.n if self.variational_order is None else self.variational_order

    def decay_rate(self):
        return ic.as_real(self.nu)

    def reaches_end(self, t):
        return t >= self.t_end - SEGMENT_END_TOLERANCE * max(1.0, abs(self.t_end))


@dataclass(frozen=True)
class ContourSchedule:
    '''Segments contiguous in the path parameter t; z advances by h e^{i theta} per step.'''
    segments: Tuple[SegmentConfig, ...]

    def __post_init__(self):
        if not self.segments:
            raise ConfigError("A contour needs at least one segment")
        for left, right in zip(self.segments[:-1], self.segments[1:]):
            if left.t_end != right.t_start:
                raise ConfigError("Contour segments are not contiguous",
                                  {"t_end": left.t_end, "next_t_start": right.t_start})

    @property
    def t_start(self):
        return self.segments[0].t_start

    @property
    def t_end(self):
        return self.segments[-1].t_end

    def truncated(self, horizon):
        '''The schedule cut at t = horizon.'''
        if horizon >= self.t_end:
            return self
        if not horizon > self.t_start:
            raise ConfigError("Horizon lies before the contour start", {"horizon": horizon})
        kept = [s for s in self.segments if s.t_start < horizon]
        kept[-1] = replace(kept[-1], t_end=horizon)
        return ContourSchedule(tuple(kept))


@dataclass(frozen=True)
class Margins:
    initial_error: str = "0"
    center_radius_inflation: str = DEFAULT_CENTER_RADIUS_INFLATION
    rho_inflation: str = DEFAULT_RHO_INFLATION


@dataclass(frozen=True)
class SolverSettings:
    newton_tolerance: float = 1e-13
    max_newton_iterations: int = 25
    max_halvings: int = 6
    workers: Optional[int] = None
    refine_sup: bool = False


@dataclass(frozen=True)
class ProofConfig:
    pipeline: str
    output_directory: str
    initial_datum: Tuple[Tuple[int, str, str], ...]
    schedule: ContourSchedule
    margins: Margins = field(default_factory=Margins)
    solver: SolverSettings = field(default_factory=SolverSettings)
    max_steps: int = DEFAULT_MAX_STEPS
    horizon: Optional[float] = None
    lower_bound_schedule: Optional[ContourSchedule] = None

    def initial_vector(self):
        '''The initial datum as a FourierVec of outward-rounded intervals.'''
        return FourierVec.from_modes({k: (re, im) for k, re, im in self.initial_datum})

    def initial_error(self):
        return ic.as_real(self.margins.initial_error)


def _segment_from_parms(parms):
    segment = parms[YML_KEY_SEGMENT]
    t_start = exact_number(segment[YML_KEY_T_START])
    t_end = exact_number(segment[YML_KEY_T_END])
    if YML_KEY_STEP_SIZE in segment:
        step = exact_number(segment[YML_KEY_STEP_SIZE])
    elif YML_KEY_STEPS in segment:
        step = (t_end - t_start) / segment[YML_KEY_STEPS]
    else:
        raise ConfigError("Each segment needs \"%s\" or \"%s\"" % (YML_KEY_STEP_SIZE, YML_KEY_STEPS))
    return SegmentConfig(
        theta_over_pi=exact_number(segment[YML_KEY_THETA_OVER_PI]),
        t_start=float(t_start), t_end=float(t_end), step_size=float(step),
        N=segment[YML_KEY_FOURIER_ORDER], n=segment[YML_KEY_CHEBYSHEV_ORDER],
        m=segment[YML_KEY_PROJECTION_ORDER],
        nu=str(segment.get(YML_KEY_DECAY_RATE, DEFAULT_DECAY_RATE)),
        variational_order=segment.get(YML_KEY_VARIATIONAL_ORDER))


def schedule_from_parms(segment_list):
    return ContourSchedule(tuple(_segment_from_parms(parms) for parms in segment_list))


def build_proof_config(loaded_parms, overrides=None):
    '''
    ProofConfig from a validated parameter-file dictionary.
    overrides: optional dict with keys "max_steps", "margin_rc", "margin_rho"
    (the command-line flags); None values are ignored.
    '''
    overrides = {k: v for k, v in (overrides or {}).items() if v is not None}
    required = loaded_parms[YML_KEY_REQUIRED]

    datum = []
    for entry in loaded_parms[YML_KEY_INITIAL_DATUM]:
        mode = entry[YML_KEY_MODE]
        datum.append((mode[YML_KEY_WAVENUMBER], str(mode.get(YML_KEY_RE, "0")), str(mode.get(YML_KEY_IM, "0"))))
    wavenumbers = [k for k, _, _ in datum]
    if len(wavenumbers) != len(set(wavenumbers)):
        raise ConfigError("The initial datum lists a wavenumber twice", {"wavenumbers": wavenumbers})

    margins_parms = loaded_parms.get(YML_KEY_MARGINS) or {}
    margins = Margins(
        initial_error=str(margins_parms.get(YML_KEY_INITIAL_ERROR, "0")),
        center_radius_inflation=str(overrides.get(
            "margin_rc", margins_parms.get(YML_KEY_CENTER_RADIUS_INFLATION, DEFAULT_CENTER_RADIUS_INFLATION))),
        rho_inflation=str(overrides.get(
            "margin_rho", margins_parms.get(YML_KEY_RHO_INFLATION, DEFAULT_RHO_INFLATION))))
    for name in ("initial_error", "center_radius_inflation", "rho_inflation"):
        if exact_number(getattr(margins, name)) < 0:
            raise ConfigError("Margin \"%s\" must be non-negative" % name)

    solver_parms = loaded_parms.get(YML_KEY_SOLVER) or {}
    defaults = SolverSettings()
    solver = SolverSettings(
        newton_tolerance=float(exact_number(solver_parms.get(YML_KEY_NEWTON_TOLERANCE,
                                                             repr(defaults.newton_tolerance)))),
        max_newton_iterations=solver_parms.get(YML_KEY_MAX_NEWTON_ITERATIONS, defaults.max_newton_iterations),
        max_halvings=solver_parms.get(YML_KEY_MAX_HALVINGS, defaults.max_halvings),
        workers=solver_parms.get(YML_KEY_WORKERS, defaults.workers),
        refine_sup=solver_parms.get(YML_KEY_REFINE_SUP, defaults.refine_sup))

    max_steps = (loaded_parms.get(YML_KEY_GLOBAL_EXISTENCE) or {}).get(YML_KEY_MAX_STEPS, DEFAULT_MAX_STEPS)
    max_steps = overrides.get("max_steps", max_steps)
    if max_steps < 1:
        raise ConfigError("max_steps must be at least 1", {"max_steps": max_steps})

    horizon = (loaded_parms.get(YML_KEY_BLOWUP_BOUND) or {}).get(YML_KEY_HORIZON)
    horizon = None if horizon is None else float(exact_number(horizon))

    lower_bound = (loaded_parms.get(YML_KEY_BRANCHING) or {}).get(YML_KEY_LOWER_BOUND_CONTOUR)
    lower_bound_schedule = None if lower_bound is None else schedule_from_parms(lower_bound)

    pipeline = required[YML_KEY_PIPELINE]
    schedule = schedule_from_parms(loaded_parms[YML_KEY_CONTOUR])
    if pipeline == YML_PIPELINE_BLOWUP_BOUND and any(s.theta_over_pi != 0 for s in schedule.segments):
        raise ConfigError("The blow-up bound pipeline integrates in real time: theta must be 0")

    return ProofConfig(
        pipeline=pipeline,
        output_directory=required[YML_KEY_OUTPUT_DIRECTORY_PATH],
        initial_datum=tuple(datum),
        schedule=schedule,
        margins=margins,
        solver=solver,
        max_steps=max_steps,
        horizon=horizon,
        lower_bound_schedule=lower_bound_schedule)

# END of: build_proof_config()
