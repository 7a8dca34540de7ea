'''
################
Exceptions raised by the proof modules.

* Library functions raise these; the command-line layer (prove_complex_heat.py)
  catches ProofError, writes ERROR messages, and returns an exit code.
* Each exception carries a diagnostics dictionary.  Its contents are written
  into the certificate records, so a failed proof can be examined later.

MIT License, Copyright (c) 2021-present Jim Yuill
################
'''


class ProofError(Exception):
    '''Base class.  diagnostics holds the bound values that caused the failure.'''

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = dict(diagnostics or {})


class EnclosureError(ProofError, ArithmeticError):
    '''An interval operation could not produce a valid enclosure (division by an
    interval containing 0, overflow, inverted endpoints).'''


class DomainMismatchError(ProofError, ValueError):
    '''Operands are defined on different time intervals or incompatible shapes.'''


class SolverFailure(ProofError):
    '''The nonrigorous solver did not converge.'''


class RadiiFailure(ProofError):
    '''Newton-Kantorovich validation failed: Z0 + Z1 >= 1.'''


class TailCouplingFailure(ProofError):
    '''kappa = 1 - 4 W_m Wbar_inf ||a^(s)||^2 does not have a positive lower bound.'''


class InclusionFailure(ProofError):
    '''The local inclusion quadratic has no certified root.'''


class NoFeasibleRhoError(ProofError):
    '''No rho satisfies the Lyapunov-Perron hypotheses for the given radii.'''


class StepFailure(ProofError):
    '''
    A contour step failed after all retries.

    * step_index: 1-based index of the failed step
    * failing_bound: name of the bound that failed last
    * certificates: the StepCertificate list completed before the failure
    '''

    def __init__(self, message, step_index, failing_bound, certificates, diagnostics=None):
        super().__init__(message, diagnostics)
        self.step_index = step_index
        self.failing_bound = failing_bound
        self.certificates = list(certificates)


class ConfigError(ProofError, ValueError):
    '''The parameter-file passed syntax checks but describes an invalid proof setup.'''
