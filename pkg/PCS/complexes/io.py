"""
Filtration files.

Text format, one simplex per line in the total order:

    v0 v1 ... vk ; value

Blank lines and lines starting with '#' are skipped, except an optional
'# dimension_cap k' header. The JSON form is
{"dimension_cap": k, "simplices": [{"vertices": [...], "value": x}, ...]}.
Values are written with repr() so export followed by import is exact.
"""
import json
import logging
from pathlib import Path

from django.core.exceptions import ValidationError

from .filtration import FilteredComplex, validate_ffdata

logger = logging.getLogger(__name__)

FORMAT_CHOICES = [
    ('text', 'Text lines "v0 v1 ; value"'),
    ('json', 'JSON document'),
]


def _format_for(path, fmt):
    if fmt:
        return fmt
    return 'json' if Path(path).suffix.lower() == '.json' else 'text'


def parse_filtration_text(text, source='<text>'):
    """Return [(vertices, value, line number)] in file order."""
    records = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith('#'):
            continue
        if ';' not in line:
            raise ValidationError('%(source)s line %(line)s: expected "vertices ; value".',
                                  code='parse', params={'source': source, 'line': lineno})
        left, right = line.split(';', 1)
        try:
            vertices = tuple(int(v) for v in left.split())
            value = float(right.strip())
        except ValueError as exc:
            raise ValidationError('%(source)s line %(line)s: %(error)s', code='parse',
                                  params={'source': source, 'line': lineno, 'error': exc}) from exc
        if not vertices:
            raise ValidationError('%(source)s line %(line)s: no vertices.', code='parse',
                                  params={'source': source, 'line': lineno})
        records.append((vertices, value, lineno))
    return records


def parse_filtration_json(data, source='<json>'):
    """Return ([(vertices, value, position)], dimension_cap)."""
    if isinstance(data, dict):
        rows = data.get('simplices')
        cap = data.get('dimension_cap')
    else:
        rows, cap = data, None
    if not isinstance(rows, list):
        raise ValidationError('%(source)s: no simplex list.', code='parse', params={'source': source})
    records = []
    for position, row in enumerate(rows, start=1):
        try:
            if isinstance(row, dict):
                vertices, value = row['vertices'], row['value']
            else:
                vertices, value = row
            records.append((tuple(int(v) for v in vertices), float(value), position))
        except (KeyError, TypeError, ValueError) as exc:
            raise ValidationError('%(source)s entry %(line)s: %(error)s', code='parse',
                                  params={'source': source, 'line': position, 'error': exc}) from exc
    return records, cap


def read_filtration_records(path, fmt=None):
    """Parse a filtration file without validating it."""
    path = Path(path)
    text = path.read_text()
    if not text.strip():
        raise ValidationError('%(path)s is empty.', code='empty_input', params={'path': str(path)})
    if _format_for(path, fmt) == 'json':
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ValidationError('%(path)s: %(error)s', code='parse',
                                  params={'path': str(path), 'error': exc}) from exc
        return parse_filtration_json(data, str(path))
    cap = None
    for line in text.splitlines():
        parts = line.split()
        if len(parts) == 3 and parts[:2] == ['#', 'dimension_cap'] and parts[2].isdigit():
            cap = int(parts[2])
            break
    return parse_filtration_text(text, str(path)), cap


def complex_from_records(records, dimension_cap=None):
    """The file order is the total order of the complex."""
    return FilteredComplex.from_records(
        [(vertices, value) for vertices, value, _ in records],
        dimension_cap=dimension_cap, keep_order=True,
    )


def import_filtration(path, fmt=None):
    """Read and validate a filtration file; the first violation is raised."""
    records, cap = read_filtration_records(path, fmt)
    cx = complex_from_records(records, cap)
    report = validate_ffdata(cx)
    if report:
        first = report.violations[0]
        lines = [records[s.order_index][2] for s in first.simplices]
        where = f' (line {lines[-1]})' if lines else ''
        raise ValidationError(f'{path}: {first.message}{where}', code=first.code)
    logger.info('Imported %d simplices from %s', len(cx), path)
    return cx


def filtration_to_text(cx):
    lines = [f'# dimension_cap {cx.dimension_cap}']
    for s in cx.simplices:
        lines.append(f"{' '.join(str(v) for v in s.vertices)} ; {s.value!r}")
    return '\n'.join(lines) + '\n'


def filtration_to_json(cx):
    return {
        'dimension_cap': cx.dimension_cap,
        'simplices': [{'vertices': list(s.vertices), 'value': s.value} for s in cx.simplices],
    }


def export_filtration(cx, path, fmt=None):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    if _format_for(path, fmt) == 'json':
        path.write_text(json.dumps(filtration_to_json(cx), indent=2, sort_keys=True) + '\n')
    else:
        path.write_text(filtration_to_text(cx))
    logger.debug('Exported %d simplices to %s', len(cx), path)
    return path
