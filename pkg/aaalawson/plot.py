from xml.sax.saxutils import escape

import numpy as np
from bokeh.embed import file_html
from bokeh.layouts import row
from bokeh.models import ColumnDataSource
from bokeh.plotting import figure
from bokeh.resources import CDN

PANEL = 440
MARGIN = 30
# poles farther than this many domain radii are left off the domain panel
POLE_CLIP = 3.0

COLORS = {
        'error': '#1f77b4',
        'max': '#d62728',
        'domain': '#999999',
        'support': '#2ca02c',
        'pole': '#d62728',
        }


def _curve(report):
    errors = report.errors()
    finite = np.isfinite(errors)
    return errors[finite], int(np.argmax(np.where(finite, np.abs(errors), -1.0)))


def _visible_poles(report):
    z = report.samples.points
    center = z.mean()
    radius = max(np.abs(z - center).max(), 1e-300)
    p = report.poles
    return p[np.abs(p - center) <= POLE_CLIP * radius]


class _Frame:
    """
    Uniform map from a complex box onto an SVG panel, y axis up
    """
    def __init__(self, points, x0):
        lo = complex(points.real.min(), points.imag.min())
        hi = complex(points.real.max(), points.imag.max())
        span = max(hi.real - lo.real, hi.imag - lo.imag)
        if span == 0:
            span = 1.0
        self.scale = (PANEL - 2 * MARGIN) / span
        self.mid = (lo + hi) / 2
        self.x0 = x0

    def __call__(self, z):
        x = self.x0 + PANEL / 2 + self.scale * (z.real - self.mid.real)
        y = PANEL / 2 - self.scale * (z.imag - self.mid.imag)
        return x, y


def _dots(frame, pts, radius, color, cls):
    out = []
    for z in pts:
        x, y = frame(z)
        out.append(f'<circle class="{cls}" cx="{x:.2f}" cy="{y:.2f}" r="{radius}" '
                f'fill="{color}"/>')
    return out


def render_svg(report):
    """
    Two panels: the error curve in sample order with its maximum marked, and
    the domain with support points and poles
    """
    errors, imax = _curve(report)
    all_errors = report.errors()
    emax = np.abs(errors).max() if len(errors) else 1.0
    box = np.array([-emax - 1j * emax, emax + 1j * emax])
    left = _Frame(box, 0)
    xs = [left(e) for e in errors]
    if report.samples.closed_curve and xs:
        xs.append(xs[0])
    poly = ' '.join(f'{x:.3f},{y:.3f}' for x, y in xs)
    ox, oy = left(0j)
    mx, my = left(all_errors[imax]) if len(errors) else (ox, oy)

    domain = report.samples.points
    t = report.approximant.support_points
    poles = _visible_poles(report)
    right = _Frame(np.concatenate((domain, t, poles)), PANEL)

    width = 2 * PANEL
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{PANEL}" '
        f'viewBox="0 0 {width} {PANEL}">',
        f'<rect width="{width}" height="{PANEL}" fill="white"/>',
        f'<text x="{MARGIN}" y="{MARGIN / 2 + 4}" font-size="12">'
        f'{escape(report.name)}: error curve, max |e| = {emax:.3e}'
        + (f', winding {report.winding}' if report.winding is not None else '') + '</text>',
        f'<circle id="error-origin" cx="{ox:.3f}" cy="{oy:.3f}" r="2" fill="black"/>',
        f'<polyline id="error-curve" fill="none" stroke="{COLORS["error"]}" '
        f'stroke-width="1" points="{poly}"/>',
        f'<circle id="max-error" cx="{mx:.3f}" cy="{my:.3f}" r="4" fill="none" '
        f'stroke="{COLORS["max"]}" stroke-width="1.5"/>',
        f'<text x="{PANEL + MARGIN}" y="{MARGIN / 2 + 4}" font-size="12">'
        f'degree {report.degree}: domain, support points, poles</text>',
        ]
    parts += _dots(right, domain, 1, COLORS['domain'], 'domain')
    parts += _dots(right, t, 3, COLORS['support'], 'support')
    parts += _dots(right, poles, 3, COLORS['pole'], 'pole')
    parts.append('</svg>')
    return '\n'.join(parts) + '\n'


def render_html(report):
    errors, imax = _curve(report)
    all_errors = report.errors()
    curve = ColumnDataSource({'x': errors.real, 'y': errors.imag})
    left = figure(title=f'{report.name}: error curve', width=PANEL, height=PANEL,
            match_aspect=True, output_backend='webgl')
    left.line('x', 'y', source=curve, line_color=COLORS['error'])
    if len(errors):
        e = all_errors[imax]
        left.scatter([e.real], [e.imag], marker='circle', size=8, fill_alpha=0,
                line_color=COLORS['max'], legend_label=f'max |e| = {abs(e):.3e}')

    z = report.samples.points
    t = report.approximant.support_points
    poles = _visible_poles(report)
    right = figure(title=f'degree {report.degree}: domain, support points, poles',
            width=PANEL, height=PANEL, match_aspect=True, output_backend='webgl')
    right.scatter(z.real, z.imag, size=2, color=COLORS['domain'], legend_label='samples')
    right.scatter(t.real, t.imag, size=6, color=COLORS['support'], legend_label='support')
    if len(poles):
        right.scatter(poles.real, poles.imag, size=6, marker='x', color=COLORS['pole'],
                legend_label='poles')
    return file_html(row(left, right), CDN, report.name)
