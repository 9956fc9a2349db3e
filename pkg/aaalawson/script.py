import fire
import logging
import os
import sys

from aaalawson import catalog, domains, report, util
from aaalawson.errors import AaaLawsonError, NumericalFailure

logger = logging.getLogger(__name__)

EXIT_REVERTED = 3


def _setup_logging(verbose):
    level = 'INFO' if verbose else os.environ.get('AAALAWSON_LOG', 'WARNING').upper()
    logging.basicConfig(level=level, format='%(levelname)s %(name)s: %(message)s',
            force=True)


def _summarize(rep):
    print('name\tdegree\tM\taaa_error\tlawson_error\tsteps\treverted\twinding\tfailure')
    winding = '-' if rep.winding is None else rep.winding
    print(f'{rep.name}\t{rep.degree}\t{rep.M}\t{rep.aaa_max_error:.6e}\t'
            f'{rep.lawson_max_error:.6e}\t{len(rep.history)}\t{rep.reverted}\t'
            f'{winding}\t{rep.failure or "-"}')
    for p, res in zip(rep.poles, rep.residues):
        print(f'pole\t{p.real:.12g}\t{p.imag:.12g}\tresidue\t{res.real:.6g}\t{res.imag:.6g}')
    times = '\t'.join(f'{k}={v:.3f}s' for k, v in rep.timings.items())
    print(f'timings\t{times}')


def _finish(rep, out, formats):
    _summarize(rep)
    if out is not None:
        for fmt, path in report.export(rep, out, formats).items():
            print(f'wrote\t{fmt}\t{path}')
    if rep.reverted:
        sys.exit(EXIT_REVERTED)
    if rep.failure is not None:
        sys.exit(NumericalFailure.exit_code)


def approx_problem(name, degree=None, lawson=None, exponent=1.0, seed=None, out=None,
        formats='json', matrix=None, vectors=None, check_degree=False, verbose=False):
    """
    Run AAA-Lawson on catalog problem `name`.
    lawson:   number of Lawson steps (default: the problem's own, usually 20)
    out:      directory for exported files in `formats` (comma-separated subset of
              json, error_csv, history_csv, svg, html, samples_csv)
    matrix, vectors:  resolvent data files for problems that need them
    check_degree:     also fit at degree - 1 and fail with exit code 6 when that
                      does as well
    """
    _setup_logging(verbose)
    rep = report.run_problem(name, degree=degree, nsteps=lawson, exponent=exponent,
            seed=seed, matrix=matrix, vectors=vectors, check_degree=check_degree)
    _finish(rep, out, formats)


def approx_file(path, degree, lawson=None, exponent=1.0, out=None, formats='json',
        check_degree=False, verbose=False):
    """
    Run AAA-Lawson on samples in `path`: CSV rows re(z),im(z),re(f),im(f) or a
    SampleSet JSON file
    """
    _setup_logging(verbose)
    rep = report.run_file(path, degree, nsteps=lawson, exponent=exponent,
            check_degree=check_degree)
    _finish(rep, out, formats)


def grid(spec, out='-', seed=None, verbose=False):
    """
    Build the DomainSpec in YAML/JSON file `spec` and write its points as
    CSV rows re,im to `out`
    """
    _setup_logging(verbose)
    domain = domains.load_spec(spec)
    if seed is not None:
        domain = domain.with_seed(seed)
    points = domains.build(domain).points
    fh = util.get_handle(out, 'w')
    try:
        for z in points:
            fh.write(f'{util.format_float(z.real)},{util.format_float(z.imag)}\n')
    finally:
        if not util.is_std_stream(fh):
            fh.close()


def catalog_list():
    """
    Print all registered problems
    """
    print('name\tdegree\tM\tnsteps\tfunction\tstatus')
    for name in catalog.names():
        entry = catalog.get(name)
        M = len(domains.build(entry.spec).points)
        status = 'stub' if entry.stub is not None else 'ok'
        print(f'{name}\t{entry.degree}\t{M}\t{entry.nsteps}\t{entry.f.describe()}\t{status}')


def catalog_show(name):
    """
    Print one problem as JSON
    """
    util.write_json('-', catalog.get(name).to_dict())


def catalog_export(path='catalog.json'):
    """
    Write every problem with its expectations to `path`
    """
    catalog.export(path)


def run():
    cmds = {
            'approx': {
                'problem': approx_problem,
                'file': approx_file,
                },
            'grid': grid,
            'catalog': {
                'list': catalog_list,
                'show': catalog_show,
                'export': catalog_export,
                },
            }
    try:
        fire.Fire(cmds)
    except AaaLawsonError as ex:
        print(f'error: {ex}', file=sys.stderr)
        sys.exit(ex.exit_code)


if __name__ == '__main__':
    run()
