"""Command-line client for the transformation service.

Runs the service handlers in-process by default; pass --server to talk to a
running instance over HTTP instead. Exit codes: 0 success, 1 verification
report failure, 2 computation failure (singular Wronskian and friends),
3 configuration/input errors.
"""
from __future__ import annotations

import json
import sys

import click
import pydantic

from . import __version__, service
from .schemas import (FigureRequest, SpectrumRequest, TransformRequest,
                      VerifyRequest)

EXIT_REPORT_FAIL = 1
EXIT_COMPUTE = 2
EXIT_CONFIG = 3


def _fail(code: int, message: str):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _build_request(model, potential, potential_file, k0, k1, k2, eps_re, eps_im,
                   side, nu, x_min, x_max, n_points, **extra):
    spec = {"kind": potential, "k0": k0}
    if potential == "tabulated":
        if potential_file is None:
            _fail(EXIT_CONFIG, "tabulated potential needs --potential-file")
        try:
            text = open(potential_file).read()
            from .seeds import load_potential_table
            table = load_potential_table(text)
        except OSError as exc:
            _fail(EXIT_CONFIG, f"cannot read potential file: {exc}")
        except ValueError as exc:
            _fail(EXIT_CONFIG, f"bad potential table: {exc}")
        spec["table"] = [(float(a), float(b))
                         for a, b in zip(table.grid.x, table.values)]
    payload = {"potential": spec, "k1": k1, "k2": k2,
               "eps_re": eps_re, "eps_im": eps_im, "side": side, "nu": nu}
    if x_min is not None or x_max is not None or n_points is not None:
        if None in (x_min, x_max, n_points):
            _fail(EXIT_CONFIG, "grid override needs --x-min, --x-max and --n-points")
        payload["grid"] = {"x_min": x_min, "x_max": x_max, "n": n_points}
    payload.update(extra)
    payload = {k: v for k, v in payload.items() if v is not None}
    try:
        return model.model_validate(payload)
    except pydantic.ValidationError as exc:
        _fail(EXIT_CONFIG, f"invalid configuration: {exc.errors()[0]['msg']}")


def _call(handler, request, server: str | None, path: str):
    """Run in-process or POST to a remote server; map failures to exit codes."""
    if server is None:
        try:
            return handler(request)
        except service.CONFIG_ERRORS as exc:
            _fail(EXIT_CONFIG, str(exc))
        except service.COMPUTE_ERRORS as exc:
            _fail(EXIT_COMPUTE, str(exc))
        except service.SingularTransform as exc:
            where = f" (first offending x = {exc.x:g})" if exc.x is not None else ""
            _fail(EXIT_COMPUTE, f"singular transform: {exc}{where}")
        except Exception as exc:  # no traceback escapes to the terminal
            _fail(EXIT_COMPUTE, f"unexpected failure: {type(exc).__name__}: {exc}")
    import httpx

    url = server.rstrip("/") + path
    resp = httpx.post(url, json=request.model_dump(mode="json"), timeout=600.0)
    if resp.status_code == 200:
        return resp
    try:
        detail = resp.json().get("detail")
    except Exception:
        detail = None
    if isinstance(detail, dict):
        kind = detail.get("error", "")
        message = detail.get("message", resp.text)
        if kind == "config":
            _fail(EXIT_CONFIG, message)
        if kind == "singular_transform":
            x = detail.get("x")
            where = f" (first offending x = {x:g})" if x is not None else ""
            _fail(EXIT_COMPUTE, f"singular transform: {message}{where}")
        _fail(EXIT_COMPUTE, message)
    _fail(EXIT_CONFIG, f"server rejected request ({resp.status_code}): {resp.text}")


def _write_json(payload: dict, out: str):
    with open(out, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    click.echo(f"wrote {out}")


def _response_dict(result):
    if hasattr(result, "model_dump"):
        return result.model_dump(mode="json", by_alias=True)
    return result.json()  # httpx.Response


def common_options(fn):
    opts = [
        click.option("--potential", type=click.Choice(["free", "pt", "oscillator", "tabulated"]),
                     default="free", show_default=True),
        click.option("--potential-file", type=click.Path(), default=None,
                     help="Two-column x V table ('#' comments) for --potential tabulated."),
        click.option("--k0", type=float, default=1.0, show_default=True,
                     help="Soliton well depth scale."),
        click.option("--k1", type=float, default=None,
                     help="Re part of the wavenumber route eps1 = -(k1+i k2)^2."),
        click.option("--k2", type=float, default=None),
        click.option("--eps-re", type=float, default=None,
                     help="Direct route: Re eps1."),
        click.option("--eps-im", type=float, default=None),
        click.option("--side", type=click.Choice(["left", "right"]), default=None,
                     help="Decay side of the seed."),
        click.option("--nu", type=int, default=None,
                     help="Oscillator branch: +1 decays left, -1 decays right."),
        click.option("--x-min", type=float, default=None),
        click.option("--x-max", type=float, default=None),
        click.option("--n-points", type=int, default=None),
        click.option("--server", default=None, metavar="URL",
                     help="POST to a running service instead of computing in-process."),
    ]
    for opt in reversed(opts):
        fn = opt(fn)
    return fn


@click.group()
@click.version_option(version=__version__, prog_name="susy2")
def main():
    """Second-order SUSY partner potentials from complex factorization energies."""


@main.command()
@common_options
@click.option("--out", default="transform.json", show_default=True)
def transform(out, server, **kwargs):
    """Run one transformation and write the JSON result."""
    req = _build_request(TransformRequest, **kwargs)
    result = _call(service.run_transform, req, server, "/transform")
    _write_json(_response_dict(result), out)


@main.command()
@common_options
@click.option("--probes", type=int, default=10, show_default=True)
@click.option("--levels", "n_levels", type=int, default=None)
@click.option("--e-min", type=float, default=None)
@click.option("--e-max", type=float, default=None)
@click.option("--out", default="verify.json", show_default=True)
def verify(out, server, probes, n_levels, e_min, e_max, **kwargs):
    """Run the residual and spectrum certification suite."""
    req = _build_request(VerifyRequest, probes=probes, n_levels=n_levels,
                         e_min=e_min, e_max=e_max, **kwargs)
    result = _call(service.run_verify, req, server, "/verify")
    payload = _response_dict(result)
    _write_json(payload, out)
    failed = [r["name"] for r in payload["reports"] if not r["pass"]]
    if failed:
        click.echo(f"FAILED checks: {', '.join(failed)}", err=True)
        sys.exit(EXIT_REPORT_FAIL)
    click.echo(f"all {len(payload['reports'])} checks passed")


@main.command()
@common_options
@click.option("--of", type=click.Choice(["v", "v_tilde"]), default="v", show_default=True)
@click.option("--levels", "n_levels", type=int, default=None)
@click.option("--e-min", type=float, default=None)
@click.option("--e-max", type=float, default=None)
@click.option("--out", default="spectrum.json", show_default=True)
def spectrum(out, server, of, n_levels, e_min, e_max, **kwargs):
    """Numerov bound-state spectrum of the base or partner potential."""
    req = _build_request(SpectrumRequest, of=of, n_levels=n_levels,
                         e_min=e_min, e_max=e_max, **kwargs)
    result = _call(service.run_spectrum, req, server, "/spectrum")
    _write_json(_response_dict(result), out)


@main.command()
@click.option("--which", type=click.Choice(["fig1", "fig2"]), required=True)
@click.option("--eps-re", type=float, default=10.0, show_default=True)
@click.option("--eps-im", type=float, default=0.1, show_default=True)
@click.option("--nu", type=int, default=-1, show_default=True)
@click.option("--x-min", type=float, default=None)
@click.option("--x-max", type=float, default=None)
@click.option("--n-points", type=int, default=None)
@click.option("--server", default=None, metavar="URL")
@click.option("--out", default=None, help="Defaults to <which>.csv")
def figure(which, eps_re, eps_im, nu, x_min, x_max, n_points, server, out):
    """Write the reference-figure data (CSV, 17 significant digits)."""
    payload = {"which": which, "eps_re": eps_re, "eps_im": eps_im, "nu": nu}
    if x_min is not None or x_max is not None or n_points is not None:
        if None in (x_min, x_max, n_points):
            _fail(EXIT_CONFIG, "grid override needs --x-min, --x-max and --n-points")
        payload["grid"] = {"x_min": x_min, "x_max": x_max, "n": n_points}
    try:
        req = FigureRequest.model_validate(payload)
    except pydantic.ValidationError as exc:
        _fail(EXIT_CONFIG, f"invalid configuration: {exc.errors()[0]['msg']}")
    result = _call(service.run_figure, req, server, "/figure")
    text = result if isinstance(result, str) else result.text
    path = out or f"{which}.csv"
    with open(path, "w") as fh:
        fh.write(text)
    click.echo(f"wrote {path}")


if __name__ == "__main__":
    main()
