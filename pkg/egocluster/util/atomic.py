# -*- coding: utf-8 -*-
# Описание: Атомарная запись выходных файлов (временный файл + переименование).

import os
import tempfile
from contextlib import contextmanager


@contextmanager
def atomic_open(filename: str, mode: str = "w"):
    """
    Открыть временный файл рядом с целевым; при успешном выходе из блока
    он переименовывается в filename, при исключении удаляется.

    :param filename: итоговый путь.
    :param mode: "w" для текста (UTF-8, '\\n') или "wb" для байтов.
    """
    directory = os.path.dirname(os.path.abspath(filename))
    os.makedirs(directory, exist_ok=True)
    fd, tmp_path = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(filename))
    try:
        if "b" in mode:
            f = os.fdopen(fd, mode)
        else:
            f = os.fdopen(fd, mode, encoding="utf-8", newline="\n")
        with f:
            yield f
        os.replace(tmp_path, filename)
    except BaseException:
        if os.path.exists(tmp_path):
            os.remove(tmp_path)
        raise
