"""Numerical tolerances shared by every module and printed into every report."""

from dataclasses import asdict, dataclass


@dataclass(frozen=True)
class Tolerances:
    herm: float = 1e-10  # max-abs Hermiticity / trace deviation of a state
    psd: float = 1e-10  # most negative eigenvalue tolerated, relative to lambda_max
    rank: float = 1e-10  # eigenvalue cutoff factor, scaled by dim * lambda_max
    supp: float = 1e-10  # |Xi| or |W| above this counts as support
    grp: float = 1e-8  # |Xi| >= 1 - grp counts as a stabilizer-group element
    stab: float = 1e-7  # Frobenius distance for the is_stabilizer predicate
    log_slack: float = 1e-7  # slack on log-scale uncertainty inequalities
    closed_slack: float = 1e-7  # slack on closed-form extremality gaps
    opt_slack: float = 1e-5  # slack on optimizer-involved gaps
    mono_slack: float = 1e-8  # slack on entropy monotonicity
    opt_tol: float = 1e-9  # trace-distance stopping rule of the fixed-point optimizer
    opt_max_iter: int = 2000
    opt_damping: float = 0.5
    opt_reg: float = 1e-12  # mixing weight of I/dim inside the optimizer

    def as_dict(self) -> dict:
        return asdict(self)


TOL = Tolerances()
