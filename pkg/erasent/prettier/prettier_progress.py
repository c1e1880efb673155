"""
progress bars for grid sweeps
"""

from tqdm.std import tqdm

from erasent.prettier.prettier_debug import style


__all__ = ['tqdc']


class tqdc(tqdm):
    """
    tqdm with a styled description; the bar turns from red to green once every grid point is evaluated

    Writes to stderr (the `tqdm` default) so that a CSV written to stdout stays clean
    """
    def __init__(self, iterable=None, colour: str = 'red', ascii: str = ' ╺━', desc: str = None, **kwargs):
        if desc:
            desc = style(desc, fg='blue', bold=False)
        super().__init__(iterable, colour=colour, ascii=ascii, desc=desc, **kwargs)

    def update(self, n=1):
        ret = super().update(n)
        if self.total is not None and self.n >= self.total and self.colour != 'green':
            self.colour = 'green'
            self.refresh()
        return ret


if __name__ == '__main__':
    def check_tqdc():
        import time
        with tqdc(total=40, desc='Evaluating grid') as pbar:
            for _ in range(40):
                time.sleep(0.05)
                pbar.update(1)
    check_tqdc()
