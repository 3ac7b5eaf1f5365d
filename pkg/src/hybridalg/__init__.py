"""h-parameterized operator algebra on H_q ⊗ H_p ⊗ H_r.

Subpackages: :mod:`hybridalg.ncpoly` (exact symbolic algebra),
:mod:`hybridalg.repspace` (finite grid realization), :mod:`hybridalg.oracles`
(independent reference computations) and :mod:`hybridalg.sweep` (batch runs).
"""

__version__ = "0.1.0"
