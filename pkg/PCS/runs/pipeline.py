"""
Glue between files on disk and the computations, shared by the commands.
"""
import json
import logging
from pathlib import Path

from complexes.builders import build_rips
from complexes.clouds import Correspondence, load_point_cloud
from complexes.filtration import validate_ffdata
from complexes.io import complex_from_records, import_filtration, read_filtration_records
from complexes.samples import jitter as jitter_cloud
from distances.barcodes import barcode_svg, compute_barcode
from distances.bounds import (
    STRUCTURE_COMBINED, STRUCTURE_GRVECT, STRUCTURE_STEENROD, TWO_INFTY,
    PersistenceModuleView, combined_distances, structured_lower_bound, trivial_upper_bound,
)
from distances.ledger import ledger_from_complex
from distances.stability import stability_check

from .config import CLOUD, RADIUS

logger = logging.getLogger(__name__)


def load_complex(path, config):
    """A filtration file, or the Rips filtration of a point cloud under the configured convention."""
    if config.input_kind(path) == CLOUD:
        cloud = load_point_cloud(path)
        if config.convention == RADIUS:
            return build_rips(cloud, max_dim=config.max_dim, max_scale=2 * config.max_scale).scaled(0.5)
        return build_rips(cloud, max_dim=config.max_dim, max_scale=config.max_scale)
    return import_filtration(path)


def write_json(path, payload):
    path = Path(path)
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + '\n')
    return path


def run_barcode(config):
    """Diagram JSON and SVG per input, for the first configured field."""
    outputs = []
    summary = {}
    for path in config.inputs:
        cx = load_complex(path, config)
        barcode = compute_barcode(cx, config.field)
        stem = Path(path).stem
        outputs.append(write_json(config.output_path / f'{stem}.diagram.json', barcode.to_diagram()))
        svg = config.output_path / f'{stem}.barcode.svg'
        svg.write_text(barcode_svg(barcode, title=f'{stem} over {config.field}'))
        outputs.append(svg)
        summary[stem] = {str(k): v for k, v in sorted(barcode.counts().items())}
    return summary, outputs


def run_validate(config):
    """Validation report per filtration file; never raises for the defects it reports."""
    summary = {}
    for path in config.inputs:
        records, cap = read_filtration_records(path)
        report = validate_ffdata(complex_from_records(records, cap))
        summary[str(path)] = {
            'valid': report.is_valid,
            'violations': [
                {
                    'condition': v.condition,
                    'code': v.code,
                    'message': v.message,
                    'lines': [records[s.order_index][2] for s in v.simplices],
                }
                for v in report.violations
            ],
        }
    return summary


def run_ledger(config):
    outputs = []
    summary = {}
    for path in config.inputs:
        stem = Path(path).stem
        ledger = ledger_from_complex(load_complex(path, config), config.field, config.max_arity, name=stem)
        target = config.output_path / f'{stem}.ledger.json'
        target.write_text(ledger.to_json() + '\n')
        outputs.append(target)
        summary[stem] = {op: len(ledger.entries[op]) for op in ledger.ops()}
    return summary, outputs


def bound_report(lx, ly, structures):
    """
    {structure: lower bound} plus the trivial upper bound, for one field.
    Steenrod squares only exist in characteristic 2; elsewhere that
    structure is skipped.
    """
    bounds = {STRUCTURE_GRVECT: structured_lower_bound(lx, ly, STRUCTURE_GRVECT)}
    for name in structures:
        if name == STRUCTURE_GRVECT:
            continue
        if name == STRUCTURE_STEENROD and lx.field.characteristic != 2:
            continue
        bounds[name] = structured_lower_bound(lx, ly, name, bounds[STRUCTURE_GRVECT].value)
    upper = trivial_upper_bound(PersistenceModuleView.from_barcode(lx.barcode),
                                PersistenceModuleView.from_barcode(ly.barcode))
    return bounds, upper


def run_distances(config, structures):
    """Bound report between the two inputs for every configured field."""
    first, second = config.inputs
    cx, cy = load_complex(first, config), load_complex(second, config)
    per_field = {}
    two_infty = {}
    uppers = {}
    for field in config.fields:
        lx = ledger_from_complex(cx, field, config.max_arity, name=Path(first).stem)
        ly = ledger_from_complex(cy, field, config.max_arity, name=Path(second).stem)
        bounds, upper = bound_report(lx, ly, structures)
        per_field[str(field.characteristic)] = {
            'lower': {name: bound.as_dict() for name, bound in bounds.items()},
            'upper': upper.as_dict(),
        }
        strongest = bounds.get(STRUCTURE_COMBINED) or max(bounds.values(), key=lambda b: b.value)
        two_infty[field.characteristic] = {TWO_INFTY: strongest}
        uppers[field.characteristic] = upper
    report = {'inputs': [first, second], 'fields': per_field}
    if len(config.fields) > 1:
        combined = combined_distances(two_infty, uppers)
        report['combined'] = {name: bound.as_dict() for name, bound in combined.items()}
    target = write_json(config.output_path / f'{Path(first).stem}-{Path(second).stem}.bounds.json', report)
    return report, [target]


def run_stability(config, jitter=None, correspondence=None, rng=None):
    """Stability report for a cloud against a second cloud or a jittered copy of itself."""
    x = load_point_cloud(config.inputs[0])
    if len(config.inputs) > 1:
        y = load_point_cloud(config.inputs[1])
    else:
        y = jitter_cloud(x, jitter or 0.0, rng)
    corr = Correspondence.from_csv(correspondence) if correspondence else None
    report = stability_check(x, y, corr, max_dim=config.max_dim, field=config.field)
    target = config.output_path / f'{Path(config.inputs[0]).stem}.stability.json'
    target.write_text(report.to_json(indent=2) + '\n')
    summary = json.loads(report.to_json())
    return summary, [target]
