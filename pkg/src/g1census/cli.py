"""Command-line front end."""
from __future__ import annotations

import csv
import hashlib
import io
import json
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import click

from . import blocks
from .blocks import InexactDivision, NeedsTable
from .census import betti_bounds, e1_pure_table, h2_basis, odd_survey, picard_rank
from .enumerate import DimensionMismatch, enumerate_coarse_classes
from .hodge import CuspTable, TableIncomplete, num_json, set_default_table
from .relations import KINDS, relation_ledger

CACHE_VERSION = 3
CACHE_ENV = "G1CENSUS_CACHE"
EXIT_TABLE = 3
EXIT_CONSISTENCY = 4


@dataclass
class RunConfig:
    fmt: str = "json"
    cusp_table: Optional[Path] = None
    tails_table: Optional[Path] = None
    cache_dir: Optional[Path] = None
    budget: int = 10
    table: CuspTable = field(default_factory=CuspTable)

    def table_digest(self):
        h = hashlib.sha256()
        for p in (self.cusp_table, self.tails_table):
            h.update(p.read_bytes() if p else b"-")
        return h.hexdigest()[:16]


# ---- output -------------------------------------------------------------------

def _canon(obj):
    """JSON round-trip so cached and fresh payloads are identical."""
    return json.loads(json.dumps(obj, sort_keys=True, default=_default))


def _default(x):
    from fractions import Fraction
    if isinstance(x, Fraction):
        return num_json(x)
    if isinstance(x, (tuple, set, frozenset)):
        return list(x)
    raise TypeError(f"not serializable: {type(x).__name__}")


def _csv(rows):
    if not rows:
        return ""
    buf = io.StringIO()
    cols = list(rows[0].keys())
    w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
    w.writeheader()
    for row in rows:
        w.writerow({k: v if isinstance(v, (int, str)) or v is None else json.dumps(v, sort_keys=True)
                    for k, v in row.items()})
    return buf.getvalue()


def _pretty(payload, indent=0):
    pad = "  " * indent
    if isinstance(payload, dict):
        lines = []
        for k, v in payload.items():
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines.append(_pretty(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {v}")
        return "\n".join(lines)
    if isinstance(payload, list):
        return "\n".join(_pretty(v, indent) if isinstance(v, dict) else f"{pad}- {v}" for v in payload)
    return f"{pad}{payload}"


def emit(cfg: RunConfig, payload, rows=None):
    if cfg.fmt == "json":
        text = json.dumps(payload, sort_keys=True, indent=2)
    elif cfg.fmt == "csv":
        text = _csv(rows(payload) if rows else (payload if isinstance(payload, list) else [payload]))
    else:
        text = _pretty(payload)
    click.echo(text.rstrip("\n"))


# ---- caching ------------------------------------------------------------------

def cached(cfg: RunConfig, name, params, compute):
    if cfg.cache_dir is None:
        return _canon(compute())
    key = json.dumps({"cmd": name, "params": params, "version": CACHE_VERSION,
                      "tables": cfg.table_digest()}, sort_keys=True)
    digest = hashlib.sha256(key.encode()).hexdigest()[:24]
    path = cfg.cache_dir / f"{name}-v{CACHE_VERSION}-{digest}.json"
    if path.exists():
        return json.loads(path.read_text())
    payload = _canon(compute())
    cfg.cache_dir.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(".tmp")
    tmp.write_text(json.dumps(payload, sort_keys=True))
    tmp.replace(path)
    return payload


# ---- error mapping ------------------------------------------------------------

class CensusGroup(click.Group):
    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except (TableIncomplete, NeedsTable) as exc:
            click.echo(f"error: {exc}", err=True)
            ctx.exit(EXIT_TABLE)
        except DimensionMismatch as exc:
            click.echo(json.dumps({"error": "dimension-mismatch", "class": exc.key.to_json(),
                                   "factors": exc.detail}, sort_keys=True), err=True)
            ctx.exit(EXIT_CONSISTENCY)
        except InexactDivision as exc:
            click.echo(f"error: consistency failure: {exc}", err=True)
            ctx.exit(EXIT_CONSISTENCY)


def _fmt(f):
    """Accept --format after the subcommand name as well."""
    def set_fmt(ctx, _param, value):
        if value is not None:
            ctx.find_object(RunConfig).fmt = value
        return value
    return click.option("--format", "fmt_override", type=click.Choice(["json", "csv", "pretty"]),
                        default=None, expose_value=False, callback=set_fmt, is_eager=False,
                        help="output format (overrides the global option)")(f)


def _params(f):
    for opt in reversed([
        click.option("--n", "n", type=click.IntRange(min=0), required=True, help="number of markings"),
        click.option("--r", "r", type=click.IntRange(min=1), required=True, help="target P^r"),
        click.option("--d", "d", type=click.IntRange(min=0), required=True, help="degree"),
    ]):
        f = opt(f)
    return f


def _codim(default):
    return click.option("--max-codim", type=click.IntRange(min=0), default=default, show_default=True)


def _max_degree(f):
    return click.option("--max-degree", type=click.IntRange(min=0), default=None,
                        help="only global degrees up to this bound")(f)


@click.group(cls=CensusGroup)
@click.option("--format", "fmt", type=click.Choice(["json", "csv", "pretty"]), default="json",
              show_default=True)
@click.option("--cusp-table", type=click.Path(exists=True, dir_okay=False, path_type=Path),
              help="JSON cusp multiplicity table")
@click.option("--tails-table", type=click.Path(exists=True, dir_okay=False, path_type=Path),
              help="JSON table of genus-zero tail Poincare coefficients")
@click.option("--cache-dir", type=click.Path(file_okay=False, path_type=Path), default=None,
              help=f"result cache (default: ${CACHE_ENV} if set, else no cache)")
@click.option("--budget", type=click.IntRange(min=1), default=10, show_default=True,
              help="tails oracle degree budget")
@click.pass_context
def main(ctx, fmt, cusp_table, tails_table, cache_dir, budget):
    """Strata census for genus-one reduced stable maps to P^r."""
    if cache_dir is None and os.environ.get(CACHE_ENV):
        cache_dir = Path(os.environ[CACHE_ENV])
    cfg = RunConfig(fmt, cusp_table, tails_table, cache_dir, budget)
    if cusp_table:
        cfg.table = CuspTable.load(cusp_table)
    set_default_table(cfg.table)
    if tails_table:
        blocks.load_tails_table(tails_table)
    ctx.obj = cfg


# ---- enumerate ----------------------------------------------------------------

@main.command("enumerate")
@_fmt
@_params
@_codim(1)
@click.pass_obj
def enumerate_cmd(cfg, n, r, d, max_codim):
    """List coarse classes of strata up to --max-codim."""
    payload = cached(cfg, "enumerate", [n, r, d, max_codim],
                     lambda: [k.to_json() for k in enumerate_coarse_classes(n, r, d, max_codim)])
    emit(cfg, payload)


# ---- census -------------------------------------------------------------------

def _census_rows(payload):
    return sorted(({"degree": int(j), "generators": c} for j, c in payload["counts"].items()),
                  key=lambda row: row["degree"])


@main.group("census", cls=CensusGroup, invoke_without_command=True)
@_fmt
@_params
@_codim(2)
@_max_degree
@click.option("--json", "as_json", is_flag=True, help="same as --format json")
@click.option("--csv", "as_csv", is_flag=True, help="same as --format csv")
@click.pass_context
def census_cmd(ctx, n, r, d, max_codim, max_degree, as_json, as_csv):
    """Pure E1 generator table; subcommands picard and odd-survey reuse the options."""
    cfg = ctx.obj
    if as_json and as_csv:
        raise click.UsageError("--json and --csv are exclusive")
    if as_json:
        cfg.fmt = "json"
    if as_csv:
        cfg.fmt = "csv"
    ctx.meta["census"] = dict(n=n, r=r, d=d, max_codim=max_codim, max_degree=max_degree)
    if ctx.invoked_subcommand is None:
        payload = cached(cfg, "census", [n, r, d, max_codim, max_degree],
                         lambda: e1_pure_table(n, r, d, max_codim, max_degree=max_degree).to_json())
        emit(cfg, payload, _census_rows)


@census_cmd.command("picard")
@_fmt
@click.pass_context
def census_picard(ctx):
    p = ctx.meta["census"]
    _picard(ctx.obj, p["n"], p["r"], p["d"])


@census_cmd.command("odd-survey")
@_fmt
@click.pass_context
def census_odd(ctx):
    p = ctx.meta["census"]
    _odd(ctx.obj, p["n"], p["r"], p["d"], p["max_codim"], p["max_degree"])


@census_cmd.command("bounds")
@_fmt
@click.pass_context
def census_bounds(ctx):
    p = ctx.meta["census"]
    _bounds(ctx.obj, p["n"], p["r"], p["d"], p["max_codim"])


def _picard(cfg, n, r, d):
    if d < 2:
        raise click.UsageError("picard needs --d >= 2")
    payload = cached(cfg, "picard", [n, r, d],
                     lambda: {"n": n, "r": r, "d": d, "rank": picard_rank(n, r, d),
                              "basis": h2_basis(n, r, d)})
    if cfg.fmt == "pretty":
        click.echo(payload["rank"])
    else:
        emit(cfg, payload, lambda p: [{"index": i, "label": b} for i, b in enumerate(p["basis"])])


def _odd(cfg, n, r, d, max_codim, max_degree):
    payload = cached(cfg, "odd-survey", [n, r, d, max_codim, max_degree],
                     lambda: odd_survey(n, r, d, max_codim, max_degree).to_json())
    emit(cfg, payload, lambda p: sorted(({"degree": int(j), "surviving": v,
                                          "generators": p["generators"].get(j, 0)}
                                         for j, v in p["degrees"].items()), key=lambda row: row["degree"]))


def _bounds(cfg, n, r, d, max_codim):
    def compute():
        b = betti_bounds(n, r, d, max_codim)
        return {"n": n, "r": r, "d": d, "max_codim": max_codim,
                "bounds": [{"degree": j, "lower": num_json(lo), "upper": num_json(up)}
                           for j, (lo, up) in sorted(b.items())]}
    payload = cached(cfg, "bounds", [n, r, d, max_codim], compute)
    emit(cfg, payload, lambda p: p["bounds"])


@main.command("picard")
@_fmt
@_params
@click.pass_obj
def picard_cmd(cfg, n, r, d):
    """Picard rank: Theta, H and one class per boundary divisor."""
    _picard(cfg, n, r, d)


@main.command("odd-survey")
@_fmt
@_params
@_codim(3)
@_max_degree
@click.pass_obj
def odd_cmd(cfg, n, r, d, max_codim, max_degree):
    """Odd-degree cusp-class generators and their surviving lower bounds."""
    _odd(cfg, n, r, d, max_codim, max_degree)


# ---- relations ----------------------------------------------------------------

@main.command("relations")
@_fmt
@_params
@_codim(1)
@click.option("--kind", "kinds", type=click.Choice(KINDS), multiple=True,
              help="restrict to these kinds (repeatable)")
@click.pass_obj
def relations_cmd(cfg, n, r, d, max_codim, kinds):
    """Relation ledger."""
    def compute():
        recs = relation_ledger(n, r, d, max_codim)
        return [rec.to_json() for rec in recs if not kinds or rec.kind in kinds]
    payload = cached(cfg, "relations", [n, r, d, max_codim, sorted(kinds)], compute)
    emit(cfg, payload, lambda p: [{"kind": x["kind"], "source": x["source"][0], "label": x["source"][1],
                                   "global_degree": x["global_degree"], "terms": len(x["terms"]),
                                   "absent": len(x["absent"])} for x in p])


# ---- blocks -------------------------------------------------------------------

def _ints(text):
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise click.BadParameter(f"expected comma-separated integers, got {text!r}")


def _piece_rows(p):
    if p.get("empty"):
        return [{"empty": True}]
    return [{"part": part, **row} for part in ("pure", "off_by_one") for row in p[part]]


def _series_rows(p):
    return p["series"]


@main.group("blocks", cls=CensusGroup)
def blocks_cmd():
    """Building-block cohomology calculators."""


@blocks_cmd.command("map-w")
@_fmt
@click.option("--delta", type=click.IntRange(min=1), required=True)
@click.option("--r", type=click.IntRange(min=1), required=True)
@click.option("--w-zero", is_flag=True, help="the w = 0 component")
@click.pass_obj
def blocks_map_w(cfg, delta, r, w_zero):
    """Cohomology of the based map space with fixed first derivative class."""
    emit(cfg, _canon(blocks.map_w_cohomology(delta, r, w_nonzero=not w_zero).to_json()), _piece_rows)


@blocks_cmd.command("dtilde")
@_fmt
@click.option("--deltas", required=True, help="comma-separated radius degrees")
@click.option("--r", type=click.IntRange(min=1), required=True)
@click.pass_obj
def blocks_dtilde(cfg, deltas, r):
    """Pieces of the space of nonvanishing derivative tuples."""
    emit(cfg, _canon(blocks.dtilde_pieces(_ints(deltas), r).to_json()), _piece_rows)


@blocks_cmd.command("mf")
@_fmt
@click.option("--deltas", required=True, help="comma-separated radius degrees")
@click.option("--legs", "legs_", required=True, help="comma-separated extra legs per radius vertex")
@click.option("--r", type=click.IntRange(min=1), required=True)
@click.pass_obj
def blocks_mapf(cfg, deltas, legs_, r):
    """Pieces of the factorisation space for the given radius data."""
    dv, mv = _ints(deltas), _ints(legs_)
    if len(dv) != len(mv):
        raise click.BadParameter("--deltas and --legs must have equal length")
    emit(cfg, _canon(blocks.mapF_pieces(dv, mv, r).to_json()), _piece_rows)


blocks_cmd.add_command(blocks_mapf, "mapf")


@blocks_cmd.command("mf-param")
@_fmt
@click.option("--deltas", required=True, help="comma-separated radius degrees")
@click.option("--r", type=click.IntRange(min=1), required=True)
@click.pass_obj
def blocks_mapf_param(cfg, deltas, r):
    """Pieces of the parametrised factorisation space."""
    emit(cfg, _canon(blocks.mapF_parametrised_pieces(_ints(deltas), r).to_json()), _piece_rows)


@blocks_cmd.command("pic")
@_fmt
@click.option("--n", type=click.IntRange(min=1), required=True)
@click.pass_obj
def blocks_pic(cfg, n):
    """Pure part of the universal Picard stack over M_{1,n+1}."""
    emit(cfg, _canon({"series": blocks.pic_pure(n, cfg.table).to_json()}), _series_rows)


@blocks_cmd.command("m1n-maps")
@_fmt
@_params
@click.pass_obj
def blocks_m1n(cfg, n, r, d):
    """Pure part of smooth genus-one maps."""
    emit(cfg, _canon({"series": blocks.m1n_maps_pure(n, r, d, cfg.table).to_json()}), _series_rows)


@blocks_cmd.command("cycle")
@_fmt
@click.option("--deltas", required=True, help="comma-separated cycle vertex degrees")
@click.option("--legs", "legs_", required=True, help="comma-separated legs per cycle vertex")
@click.option("--r", type=click.IntRange(min=1), required=True)
@click.pass_obj
def blocks_cycle(cfg, deltas, legs_, r):
    """Pieces of a positive-degree cycle core."""
    dv, mv = _ints(deltas), _ints(legs_)
    if len(dv) != len(mv):
        raise click.BadParameter("--deltas and --legs must have equal length")
    emit(cfg, _canon(blocks.cycle_core_pieces(len(dv), dv, mv, r).to_json()), _piece_rows)


@blocks_cmd.command("tails")
@_fmt
@click.option("--m", type=click.IntRange(min=0), required=True, help="markings on the tail")
@click.option("--delta", type=click.IntRange(min=0), required=True)
@click.option("--r", type=click.IntRange(min=1), required=True)
@click.pass_obj
def blocks_tails(cfg, m, delta, r):
    """Poincare series of the genus-zero tail factor."""
    s = blocks.tails_poincare(m, delta, r, cfg.budget)
    emit(cfg, _canon({"series": s.to_json()}), _series_rows)


@blocks_cmd.command("mbar0n")
@_fmt
@click.option("--n", type=click.IntRange(min=3), required=True)
@click.pass_obj
def blocks_mbar0n(cfg, n):
    """Poincare series of M0n-bar."""
    emit(cfg, _canon({"series": blocks.mbar0n_poincare(n).to_json()}), _series_rows)


# ---- selftest -----------------------------------------------------------------

@main.command("selftest")
@_fmt
@click.option("--golden-dir", type=click.Path(file_okay=False, path_type=Path), default=None)
@click.pass_obj
def selftest_cmd(cfg, golden_dir):
    """Run the acceptance suite; exit 1 on any failure."""
    from . import acceptance
    if golden_dir is not None:
        acceptance.DEFAULT_GOLDEN = golden_dir
    results = acceptance.run_all(echo=click.echo)
    if not all(ok for _, _, ok, _ in results):
        sys.exit(1)


if __name__ == "__main__":
    main()
