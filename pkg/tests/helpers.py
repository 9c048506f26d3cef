"""Finite-difference gradient machinery shared by the trainer and acceptance
suites: nudge one parameter, recompute the instantaneous cost, and compare the
central-difference gradient against the increment sgd_step actually applied."""

import numpy as np

from corbf.model import AdaptiveFusion, CoFusion, RbfModel, forward
from corbf.trainer import sgd_step


def perturbed_cost(model, x, d, kind, index, delta):
    """Instantaneous cost 0.5 e^2 with one parameter nudged by delta."""
    probe = model.copy()
    if kind == "w":
        w = np.array(probe.weights, copy=True)
        w[index] += delta
        probe = RbfModel(probe.bank, probe.mode, w, bias=probe.bias)
    elif kind == "b":
        probe = RbfModel(probe.bank, probe.mode, probe.weights, bias=probe.bias + delta)
    elif kind == "ag":
        probe = RbfModel(probe.bank,
                         AdaptiveFusion(probe.mode.alpha_gaussian + delta,
                                        probe.mode.alpha_cosine),
                         probe.weights, bias=probe.bias)
    elif kind == "ac":
        probe = RbfModel(probe.bank,
                         AdaptiveFusion(probe.mode.alpha_gaussian,
                                        probe.mode.alpha_cosine + delta),
                         probe.weights, bias=probe.bias)
    e = d - forward(probe, x)
    return 0.5 * e * e


def check_gradients(model, x, d, eta, rtol, h=1e-6, alpha_eta=None):
    """Assert every applied increment equals -eta times the central
    finite-difference gradient of the instantaneous cost."""
    params = [("b", None)]
    if isinstance(model.mode, CoFusion):
        params += [("w", (k, l)) for k in range(model.bank.n_centers)
                   for l in range(model.bank.n_kernels)]
    else:
        params += [("w", (k,)) for k in range(model.bank.n_centers)]
    if isinstance(model.mode, AdaptiveFusion):
        params += [("ag", None), ("ac", None)]

    grads = {}
    for kind, index in params:
        up = perturbed_cost(model, x, d, kind, index, h)
        down = perturbed_cost(model, x, d, kind, index, -h)
        grads[(kind, index)] = (up - down) / (2.0 * h)

    before = model.copy()
    work = model.copy()
    e = sgd_step(work, x, d, eta=eta, alpha_eta=alpha_eta)
    assert np.isfinite(e)
    a_eta = eta if alpha_eta is None else alpha_eta
    for (kind, index), g in grads.items():
        if kind == "b":
            applied = work.bias - before.bias
            step = eta
        elif kind == "w":
            applied = work.weights[index] - before.weights[index]
            step = eta
        elif kind == "ag":
            applied = work.mode.alpha_gaussian - before.mode.alpha_gaussian
            step = a_eta
        else:
            applied = work.mode.alpha_cosine - before.mode.alpha_cosine
            step = a_eta
        np.testing.assert_allclose(applied, -step * g, rtol=rtol, atol=1e-9,
                                   err_msg=f"parameter {kind}{index}")
