import logging

from aaalawson import util

log = logging.getLogger(__name__)


class HistoryLogger:
    """
    Buffered CSV writer for Lawson convergence traces.  Create one per run and
    pass it to `lawson.lawson_run`, or write the rows of a finished report.
    Each row is `step,max_error`.
    """
    def __init__(self, name='run'):
        self.name = name
        self.rows = []
        self.elem_count = 0
        self.fh = None

    def init(self, path, buffer_max_elem=100):
        """
        Start a new trace file at `path` ('-' for stdout).
        buffer_max_elem:  number of rows to buffer before writing
        """
        self.fh = util.get_handle(path, 'w')
        self.fh.write('step,max_error\n')
        self.buffer_max_elem = buffer_max_elem

    def write(self, step, max_error):
        if self.fh is None:
            raise RuntimeError(f'HistoryLogger {self.name}: call init() before write()')
        self.rows.append((int(step), float(max_error)))
        self.elem_count += 1
        if self.elem_count >= self.buffer_max_elem:
            self.flush_buffer()

    def flush_buffer(self):
        if self.fh is None:
            return
        self.fh.write(''.join(f'{s},{util.format_float(e)}\n' for s, e in self.rows))
        self.fh.flush()
        log.debug(f'{self.name}: flushed {len(self.rows)} history rows')
        self.rows = []
        self.elem_count = 0

    def shutdown(self):
        """
        Flush remaining rows and close the file
        """
        self.flush_buffer()
        if self.fh is not None and not util.is_std_stream(self.fh):
            self.fh.close()
        self.fh = None
