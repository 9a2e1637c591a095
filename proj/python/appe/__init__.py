"""Anonymous, private phase estimation on an entangled sensor network.

Thin convenience layer over the compiled ``appe._core`` module: closed-form
bound evaluation, seeded protocol runs from JSON-style configs, and the
privacy / anonymity analysis entry points.
"""

import json as _json

from ._core import (
    alpha_from_eta,
    bias_bound,
    check_privacy_conditions,
    correct_beta,
    dishonest_conditional_state,
    f_poly,
    key_entropy_length,
    lemma_tail_bound,
    parity_even_fraction,
    perturbed_beta,
    privacy_epsilon,
    qfi_matrix,
    run_verify,
    theta_from_beta,
    uniform_marginal_check,
)

__all__ = [
    "alpha_from_eta",
    "bias_bound",
    "check_privacy_conditions",
    "correct_beta",
    "dishonest_conditional_state",
    "f_poly",
    "key_entropy_length",
    "lemma_tail_bound",
    "parity_even_fraction",
    "perturbed_beta",
    "privacy_epsilon",
    "qfi_matrix",
    "run",
    "run_verify",
    "theta_from_beta",
    "uniform_marginal_check",
]


def run(config, seed=None):
    """Run the protocol once.

    ``config`` is a dict (or JSON string) in the run-config schema.  Returns a
    dict with the parsed ``report``, parsed ``transcript``, and the raw
    ``rounds_csv`` text.
    """
    from ._core import run_config_json

    text = config if isinstance(config, str) else _json.dumps(config)
    report, transcript, rounds = run_config_json(text, seed)
    return {
        "report": _json.loads(report),
        "transcript": _json.loads(transcript),
        "rounds_csv": rounds,
    }
