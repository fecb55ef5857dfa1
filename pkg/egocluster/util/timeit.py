# -*- coding: utf-8 -*-
# Описание: Декоратор, пишущий в DEBUG время работы тяжёлых шагов (дизайн, исследование, диагностика).

import logging
import time
from functools import wraps


def timeit(method):
    @wraps(method)
    def timed(*args, **kw):
        started = time.perf_counter()
        try:
            return method(*args, **kw)
        finally:
            logging.debug("%s took %.2f sec", method.__qualname__, time.perf_counter() - started)
    return timed
