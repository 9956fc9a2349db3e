import csv
import json
import sys

import numpy as np
import yaml

from aaalawson.aaa import SampleSet
from aaalawson.errors import InputError


def get_handle(path, mode):
    """
    Open `path`, or return stdout/stdin for '-'
    """
    if path == '-':
        return sys.stdout if 'w' in mode or 'a' in mode else sys.stdin
    try:
        return open(path, mode)
    except OSError as ex:
        raise InputError(f'Could not open {path} with mode {mode!r}: {ex}')


def is_std_stream(fh):
    return fh in (sys.stdout, sys.stdin, sys.stderr)


def format_float(x):
    """
    17 significant digits, enough to round-trip a double
    """
    return f'{x:.17g}'


def load_config(path):
    """
    Parse a YAML or JSON configuration file.  JSON goes through the json
    module since YAML 1.1 reads exponent-only floats such as 1e-10 as strings.
    """
    try:
        with open(path, 'r') as fh:
            if str(path).endswith('.json'):
                return json.load(fh)
            return yaml.safe_load(fh)
    except OSError as ex:
        raise InputError(f'Could not open config file {path}: {ex}')
    except (yaml.YAMLError, json.JSONDecodeError) as ex:
        raise InputError(f'Could not parse config file {path}: {ex}')


def _json_safe(data):
    # inf and nan are written as the strings float() reads back
    if isinstance(data, dict):
        return {k: _json_safe(v) for k, v in data.items()}
    if isinstance(data, (list, tuple)):
        return [_json_safe(v) for v in data]
    if isinstance(data, float) and not np.isfinite(data):
        return str(data)
    return data


def write_json(path, data):
    fh = get_handle(path, 'w')
    try:
        json.dump(_json_safe(data), fh, indent=1, allow_nan=False)
        fh.write('\n')
    finally:
        if not is_std_stream(fh):
            fh.close()


def _parse_row(row, ncols, line):
    if len(row) != ncols:
        raise InputError(f'expected {ncols} comma-separated columns, got {len(row)}', line)
    try:
        return [float(x) for x in row]
    except ValueError:
        raise InputError(f'non-numeric entry in {row}', line)


def read_csv_rows(path, ncols=None):
    """
    Numeric rows of a comma-separated file.  Blank lines are skipped and a
    non-numeric first line is taken as a header.  With ncols=None every row must
    have the width of the first one.
    """
    fh = get_handle(path, 'r')
    rows = []
    try:
        for line, row in enumerate(csv.reader(fh), 1):
            row = [x.strip() for x in row]
            if not row or all(x == '' for x in row):
                continue
            if not rows and line == 1:
                try:
                    [float(x) for x in row]
                except ValueError:
                    continue
            if ncols is None:
                ncols = len(row)
            rows.append(_parse_row(row, ncols, line))
    finally:
        if not is_std_stream(fh):
            fh.close()
    if not rows:
        raise InputError(f'{path} contains no data rows')
    return np.array(rows, dtype=np.float64)


def read_samples(path):
    """
    Load a SampleSet from CSV (re z, im z, re f, im f) or the JSON SampleSet form
    """
    if str(path).endswith('.json'):
        data = load_config(path)
        if not isinstance(data, dict):
            raise InputError(f'{path} does not hold a SampleSet object')
        return SampleSet.from_dict(data)
    data = read_csv_rows(path, ncols=4)
    points = data[:, 0] + 1j * data[:, 1]
    values = data[:, 2] + 1j * data[:, 3]
    return SampleSet(points, values)


def write_samples_csv(path, samples):
    fh = get_handle(path, 'w')
    try:
        fh.write('re_z,im_z,re_f,im_f\n')
        for z, f in zip(samples.points, samples.values):
            cols = (z.real, z.imag, f.real, f.imag)
            fh.write(','.join(format_float(c) for c in cols) + '\n')
    finally:
        if not is_std_stream(fh):
            fh.close()
