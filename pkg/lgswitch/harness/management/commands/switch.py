"""
Simulate the quantum-switch interferometer for one outcome branch and read the
two-time quasiprobability from the post-selected amplitude.
"""
import pandas as pd

from lgswitch.harness.base import RunCommand, tolerances
from lgswitch.lgengine.observables import QuantumState
from lgswitch.lgengine.quasiprob import mh_quasiprob
from lgswitch.switch.config import PLUS
from lgswitch.switch.simulate import (
    ReadoutError,
    detector_statistics,
    closed_form_residuals,
    postselect_quasiprob,
    run_switch,
)


class Command(RunCommand):
    """Simulate the quantum switch and recover the quasiprobability."""
    help = __doc__

    def run(self, config, **options):
        tol = tolerances()
        section = config["switch"]
        switch_config = config.switch_config()
        scenario = config.scenario()
        m_i, m_j = section["m_i"], section["m_j"]

        run = run_switch(switch_config, m_i, m_j)
        stats = detector_statistics(switch_config, tol)
        _, q_formula = mh_quasiprob(
            QuantumState.from_vector(switch_config.system_input),
            scenario.basis(section["i"]),
            scenario.basis(section["j"]),
            m_i,
            m_j,
        )

        try:
            q_switch = postselect_quasiprob(run, switch_config, tol)
            residual = abs(q_switch - q_formula)
        except ReadoutError as readout_err:
            self.logger.warning(f"No quasiprobability readout: {readout_err}")
            q_switch, residual = None, None

        closed_form = closed_form_residuals(run, switch_config, tol)
        input_is_plus = abs(abs(PLUS.conj() @ switch_config.system_input) - 1.) <= tol.identity
        result = {
            "outcomes": {"m_i": m_i, "m_j": m_j},
            "times": {"i": section["i"], "j": section["j"]},
            "convention": switch_config.convention.name,
            "input_is_plus": bool(input_is_plus),
            "amplitudes": {
                f"{path},{pol}": amp for (path, pol), amp in run.branch_amplitudes.items()
            },
            "postselected_probabilities": {
                f"{path},{pol}": p for (path, pol), p in run.branch_probabilities.items()
            },
            "branch_norm": run.norm,
            "total_probability": stats.total,
            "q_switch": q_switch,
            "q_formula": q_formula,
            "residual": residual,
            "closed_form_residual": closed_form.max_residual,
            "readout": "signed amplitude; a detector alone sees its square",
        }
        if residual is not None and residual > tol.pipeline:
            result["failure"] = (
                f"Switch readout {q_switch} differs from the quasiprobability {q_formula}"
            )
        if abs(stats.total - 1.) > tol.identity:
            result["failure"] = f"Detector probabilities sum to {stats.total}"
        return result, pd.DataFrame(stats.records())
