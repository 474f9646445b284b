"""Export of experiment results for plotting.

:py:func:`export_report` writes the following files into a directory,
replacing any previous versions atomically:

``theta_error.csv``
    ``t,err_norm,theta1,...``: the parameter estimate and its error.
``weight_error.csv``
    ``t,err_norm,w1,...``: the weight estimate in force and its error.
``purges.csv``
    ``t,s,eta_bar,kappa``: one row per purge.
``estimator.csv``
    ``t,lambda_min_G,lambda_min_Gamma,lambda_max_Gamma``.
``solves.csv``
    ``t,kappa,residual_norm,w1,...``: one row per accepted weight solve.
``trajectory.csv``
    The observed trajectory, readable by
    :py:func:`~oirl.harness.trajectory_io.ingest_trajectory`.
``summary.json``
    Final estimates, the configuration and the wall time.
"""

import collections
import json
import os

from oirl.harness.config import config_as_dict
from oirl.harness.trajectory_io import export_trajectory, format_float

from oirl.utils.files import atomic_write


def _write_csv(path, header, rows):
    with atomic_write(path) as f:
        f.write(",".join(header))
        f.write("\n")
        for row in rows:
            f.write(",".join(value if isinstance(value, str)
                             else format_float(value)
                             for value in row))
            f.write("\n")


def _numbered(prefix, count):
    return ["{}{}".format(prefix, i + 1) for i in range(count)]


def summary(report):
    """The contents of ``summary.json`` as an ordered mapping."""
    out = collections.OrderedDict()
    out["config"] = config_as_dict(report.config)
    out["theta_hat"] = [float(v) for v in report.final_theta.ravel()]
    out["w_hat"] = [float(v) for v in report.final_weights.as_vector()]
    out["purge_count"] = report.purge_count
    out["wall_time_s"] = float(report.wall_time)
    return out


def export_report(report, directory):
    """Write the result files of a :py:class:`~.RunReport` into a directory.

    The directory is created if necessary.

    Raises
    ------
    EnvironmentError
        If a file cannot be written. The error names the file.
    """
    if not os.path.isdir(directory):
        try:
            os.makedirs(directory)
        except EnvironmentError as e:
            raise type(e)(e.errno, e.strerror, directory)

    def path(name):
        return os.path.join(directory, name)

    n_theta = report.theta_hat[0].size if len(report.t) else 0
    _write_csv(path("theta_error.csv"),
               ["t", "err_norm"] + _numbered("theta", n_theta),
               ([t, err] + list(theta.ravel())
                for t, err, theta in zip(report.t, report.theta_error,
                                         report.theta_hat)))

    n_w = report.weights.shape[1]
    _write_csv(path("weight_error.csv"),
               ["t", "err_norm"] + _numbered("w", n_w),
               ([t, err] + list(w)
                for t, err, w in zip(report.t, report.weight_error,
                                     report.weights)))

    _write_csv(path("purges.csv"), ["t", "s", "eta_bar", "kappa"],
               ([e.t, str(e.s), e.eta_bar, e.kappa]
                for e in report.purge_events))

    _write_csv(path("estimator.csv"),
               ["t", "lambda_min_G", "lambda_min_Gamma", "lambda_max_Gamma"],
               ([t, lam, gain[0], gain[1]]
                for t, lam, gain in zip(report.t, report.lambda_min_gram,
                                        report.gain_eigenvalues)))

    _write_csv(path("solves.csv"),
               ["t", "kappa", "residual_norm"] + _numbered("w", n_w),
               ([s.t, s.kappa, s.residual_norm] + list(s.weights.as_vector())
                for s in report.solves))

    export_trajectory(report.trajectory, path("trajectory.csv"))

    with atomic_write(path("summary.json")) as f:
        f.write(json.dumps(summary(report), indent=2, sort_keys=True))
        f.write("\n")
