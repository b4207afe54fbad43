from .analytics import (RepetitionPlan, analytic_bounds, analytic_pj, bits_of,
                        circular_distance, ipea_bit_probability, majority_failure,
                        majority_failure_sum, n_repetitions, plan_repetitions,
                        reg_inc_beta, split_phase, uniform_plan, value_of)
from .applications import (abrams_lloyd_energy, bb_alignment, continued_fraction,
                           mod_mult_unitary, multiplicative_order, order_finding_demo,
                           rg_theta_bit, trotter_error, trotter_evolve)
from .estimators import (ancilla_step, aspuru_guzik, constraint_arcs, feedback_angle,
                         intersect_arcs, ipea, ipea_oracle_batch, ipea_outcome_distribution,
                         kitaev_pea, qft_pea, qft_pea_distribution, qft_pea_result)
from .problem import BitRecord, PhaseProblem, PhaseRunResult
